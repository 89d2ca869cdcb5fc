//! Oracle builders shared by the integration suites. Everything here is
//! constructed directly from outer products and Kronecker-style index
//! bookkeeping, independent of the Pauli-term machinery it checks.

use gadgetc::circuit::Circuit;
use nalgebra::DMatrix;

/// Dense `|ket><bra|` on an `n`-qubit register.
pub fn ketbra(n: usize, ket: usize, bra: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(1 << n, 1 << n);
    m[(ket, bra)] = 1.0;
    m
}

/// Embed a dense operator acting on the listed 1-based qubit positions
/// (in order) into an `n`-qubit register.
pub fn dense_embed(small: &DMatrix<f64>, positions: &[usize], n: usize) -> DMatrix<f64> {
    let dim = 1usize << n;
    let mut out = DMatrix::zeros(dim, dim);
    let rest_mask: usize = {
        let mut m = dim - 1;
        for &q in positions {
            m &= !(1 << (n - q));
        }
        m
    };
    for r in 0..dim {
        for c in 0..dim {
            if r & rest_mask != c & rest_mask {
                continue;
            }
            let mut lr = 0;
            let mut lc = 0;
            for &q in positions {
                lr = (lr << 1) | ((r >> (n - q)) & 1);
                lc = (lc << 1) | ((c >> (n - q)) & 1);
            }
            out[(r, c)] = small[(lr, lc)];
        }
    }
    out
}

/// Input-penalty oracle: `sum_i (1 - |x_i><x_i|) (x) |0><0|_{clock 1}`.
pub fn oracle_h_in(x: &[bool], n: usize, t: usize) -> DMatrix<f64> {
    let total = n + t;
    let mut out = DMatrix::zeros(1 << total, 1 << total);
    for (i, &xi) in x.iter().enumerate() {
        let wrong = ketbra(1, 1 - xi as usize, 1 - xi as usize);
        out +=
            dense_embed(&wrong, &[i + 1], total) * dense_embed(&ketbra(1, 0, 0), &[n + 1], total);
    }
    out
}

/// Clock-penalty oracle: `sum_t |01><01|_(t,t+1)` on `t` clock qubits.
pub fn oracle_h_clock(t: usize) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(1 << t, 1 << t);
    let p01 = ketbra(2, 0b01, 0b01);
    for u in 1..t {
        out += dense_embed(&p01, &[u, u + 1], t);
    }
    out
}

/// Propagation oracle built from transition projectors: for each step,
/// `1 (x) (|t-1><t-1| + |t><t|) - U_t (x) (|t><t-1| + |t-1><t|)` with the
/// clock operators acting on the adjacent clock qubits (both boundary
/// reductions included).
pub fn oracle_h_prop(c: &Circuit) -> DMatrix<f64> {
    let n = c.n();
    let big_t = c.t();
    let total = n + big_t;
    let mut out = DMatrix::zeros(1 << total, 1 << total);
    for (step, gate) in c.gates().iter().enumerate() {
        let t = step + 1;
        let u_full = dense_embed(gate.matrix(), gate.qubits(), total);
        let (positions, diag, hop): (Vec<usize>, DMatrix<f64>, DMatrix<f64>) = if big_t == 1 {
            (
                vec![n + 1],
                ketbra(1, 0, 0) + ketbra(1, 1, 1),
                ketbra(1, 1, 0) + ketbra(1, 0, 1),
            )
        } else if t == 1 {
            (
                vec![n + 1, n + 2],
                ketbra(2, 0b00, 0b00) + ketbra(2, 0b10, 0b10),
                ketbra(2, 0b10, 0b00) + ketbra(2, 0b00, 0b10),
            )
        } else if t == big_t {
            (
                vec![n + t - 1, n + t],
                ketbra(2, 0b10, 0b10) + ketbra(2, 0b11, 0b11),
                ketbra(2, 0b11, 0b10) + ketbra(2, 0b10, 0b11),
            )
        } else {
            (
                vec![n + t - 1, n + t, n + t + 1],
                ketbra(3, 0b100, 0b100) + ketbra(3, 0b110, 0b110),
                ketbra(3, 0b110, 0b100) + ketbra(3, 0b100, 0b110),
            )
        };
        out +=
            dense_embed(&diag, &positions, total) - u_full * dense_embed(&hop, &positions, total);
    }
    out
}

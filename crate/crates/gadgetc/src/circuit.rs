//! Real-valued self-inverse gates, circuits, and state-vector simulation.
//!
//! Every gate is a real symmetric involution (U real, U^2 = 1, U = U^T), the
//! class for which the propagation Hamiltonian of [`crate::history`] takes
//! its 2-local-in-the-clock Pauli form. Simulation therefore works entirely
//! with real amplitudes.
//!
//! Circuit text format: a `qubits <n>` header, then one gate per line:
//! `R <phi> <i> <j>`, `CNOT <i> <j>`, `X <i>`, `XZ <psi> <i>`,
//! `CUSTOM <file> <i> [<j>]`. `#` comments and blank lines are ignored.
//! CUSTOM matrix files hold 4 (2x2) or 16 (4x4) whitespace-separated real
//! entries in row-major order, resolved relative to the circuit file.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::{Error, Result};

const GATE_TOL: f64 = 1e-12;

/// Classical input bit string; bit 1 is qubit 1 (leftmost).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new(bits: Vec<bool>) -> BitString {
        BitString(bits)
    }

    pub fn zeros(n: usize) -> BitString {
        BitString(vec![false; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bit(&self, qubit: usize) -> bool {
        self.0[qubit - 1]
    }

    /// Basis-state index with qubit 1 as the most significant bit.
    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }

    /// Unit basis vector of dimension 2^len.
    pub fn state(&self) -> DVector<f64> {
        let mut v = DVector::zeros(1 << self.len());
        v[self.index()] = 1.0;
        v
    }
}

impl std::str::FromStr for BitString {
    type Err = Error;
    fn from_str(s: &str) -> Result<BitString> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Invalid(format!("bad bit '{c}' in bit string"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString)
    }
}

impl std::fmt::Display for BitString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &b in &self.0 {
            write!(f, "{}", b as u8)?;
        }
        Ok(())
    }
}

/// Gate constructors recognized by the circuit format.
#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    X,
    Cnot,
    /// Controlled sin(phi) X + cos(phi) Z on the target.
    R(f64),
    /// Single-qubit cos(psi) X + sin(psi) Z mixture.
    XzMix(f64),
    Custom,
}

/// A real self-inverse 1- or 2-qubit gate with its target qubits.
#[derive(Debug, Clone)]
pub struct Gate {
    pub kind: GateKind,
    qubits: Vec<usize>,
    matrix: DMatrix<f64>,
}

impl Gate {
    /// Pauli X on one qubit.
    pub fn x(q: usize) -> Gate {
        Gate {
            kind: GateKind::X,
            qubits: vec![q],
            matrix: DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]),
        }
    }

    /// Controlled-NOT; `i` controls, `j` is the target.
    pub fn cnot(i: usize, j: usize) -> Result<Gate> {
        if i == j {
            return Err(Error::InvalidGate("control equals target".into()));
        }
        Ok(Gate {
            kind: GateKind::Cnot,
            qubits: vec![i, j],
            matrix: DMatrix::from_row_slice(
                4,
                4,
                &[
                    1.0, 0.0, 0.0, 0.0, //
                    0.0, 1.0, 0.0, 0.0, //
                    0.0, 0.0, 0.0, 1.0, //
                    0.0, 0.0, 1.0, 0.0,
                ],
            ),
        })
    }

    /// The continuous controlled gate
    /// `|0><0|_i (x) 1 + |1><1|_i (x) (sin(phi) X_j + cos(phi) Z_j)`.
    ///
    /// One published definition of this gate places the controlled X on the
    /// control qubit itself; that reading is not self-inverse and does not
    /// reduce to CNOT at phi = pi/2, so the controlled one-qubit operation
    /// acts on the target here.
    pub fn r(phi: f64, i: usize, j: usize) -> Result<Gate> {
        if i == j {
            return Err(Error::InvalidGate("control equals target".into()));
        }
        let (s, c) = phi.sin_cos();
        Ok(Gate {
            kind: GateKind::R(phi),
            qubits: vec![i, j],
            matrix: DMatrix::from_row_slice(
                4,
                4,
                &[
                    1.0, 0.0, 0.0, 0.0, //
                    0.0, 1.0, 0.0, 0.0, //
                    0.0, 0.0, c, s, //
                    0.0, 0.0, s, -c,
                ],
            ),
        })
    }

    /// The single-qubit mixture `cos(psi) X + sin(psi) Z`.
    ///
    /// Together with CNOT and X this is a universal set for any single psi
    /// that is not a multiple of pi/4; that property is documentation only
    /// and not enforced or verified here.
    pub fn xz_mix(psi: f64, q: usize) -> Gate {
        let (s, c) = psi.sin_cos();
        Gate {
            kind: GateKind::XzMix(psi),
            qubits: vec![q],
            matrix: DMatrix::from_row_slice(2, 2, &[s, c, c, -s]),
        }
    }

    /// A gate from an explicit real 2x2 or 4x4 matrix. The matrix is stored
    /// as given; it must pass [`validate_gate`] before use in history
    /// construction.
    pub fn custom(matrix: DMatrix<f64>, qubits: Vec<usize>) -> Result<Gate> {
        let dim = matrix.nrows();
        if matrix.ncols() != dim || !(dim == 2 || dim == 4) {
            return Err(Error::InvalidGate(format!(
                "matrix must be 2x2 or 4x4, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let expect = if dim == 2 { 1 } else { 2 };
        if qubits.len() != expect {
            return Err(Error::InvalidGate(format!(
                "{dim}x{dim} gate needs {expect} qubit index(es), got {}",
                qubits.len()
            )));
        }
        if qubits.len() == 2 && qubits[0] == qubits[1] {
            return Err(Error::InvalidGate("duplicate qubit index".into()));
        }
        if matrix.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidGate("non-finite matrix entry".into()));
        }
        Ok(Gate {
            kind: GateKind::Custom,
            qubits,
            matrix,
        })
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn arity(&self) -> usize {
        self.qubits.len()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// True iff the stored matrix is an involution and symmetric (the two
    /// together make it a real unitary with U = U^dagger).
    pub fn is_self_inverse(&self) -> bool {
        let dim = self.matrix.nrows();
        let sq = &self.matrix * &self.matrix;
        (sq - DMatrix::<f64>::identity(dim, dim)).abs().max() < GATE_TOL
            && (&self.matrix - self.matrix.transpose()).abs().max() < GATE_TOL
    }
}

/// Outcome of checking a candidate gate matrix.
#[derive(Debug, Clone, Copy)]
pub struct GateVerdict {
    /// All entries real to 1e-12.
    pub real: bool,
    /// Matrix squares to the identity to 1e-12.
    pub self_inverse: bool,
    /// Matrix equals its conjugate transpose (redundant for real
    /// involutions that are unitary, but rejects non-unitary square roots
    /// of the identity).
    pub self_adjoint: bool,
}

impl GateVerdict {
    pub fn pass(&self) -> bool {
        self.real && self.self_inverse && self.self_adjoint
    }
}

/// Check a complex candidate matrix for gate admissibility.
pub fn validate_gate_matrix(m: &DMatrix<Complex64>) -> GateVerdict {
    let dim = m.nrows();
    let real = m.iter().all(|z| z.im.abs() < GATE_TOL);
    let sq = m * m;
    let self_inverse = (0..dim).all(|r| {
        (0..dim).all(|c| {
            let expect = if r == c { 1.0 } else { 0.0 };
            (sq[(r, c)] - Complex64::new(expect, 0.0)).norm() < GATE_TOL
        })
    });
    let self_adjoint = (m - m.adjoint()).iter().all(|z| z.norm() < GATE_TOL);
    GateVerdict {
        real,
        self_inverse,
        self_adjoint,
    }
}

/// Check a constructed gate.
pub fn validate_gate(g: &Gate) -> GateVerdict {
    let mc = g.matrix.map(|x| Complex64::new(x, 0.0));
    validate_gate_matrix(&mc)
}

/// An ordered gate sequence on `n` logical qubits.
#[derive(Debug, Clone)]
pub struct Circuit {
    n: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: usize, gates: Vec<Gate>) -> Result<Circuit> {
        if n == 0 {
            return Err(Error::Invalid("circuit needs at least one qubit".into()));
        }
        if gates.is_empty() {
            return Err(Error::Invalid("circuit needs at least one gate".into()));
        }
        for g in &gates {
            for &q in g.qubits() {
                if q == 0 || q > n {
                    return Err(Error::QubitRange { index: q, n });
                }
            }
        }
        Ok(Circuit { n, gates })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Gate count, i.e. the number of clock qubits of the history register.
    pub fn t(&self) -> usize {
        self.gates.len()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Apply one gate in place on a full state vector.
    fn apply_gate(&self, g: &Gate, v: &mut DVector<f64>) {
        let n = self.n;
        match g.arity() {
            1 => {
                let shift = n - g.qubits[0];
                let mask = 1usize << shift;
                let m = &g.matrix;
                for b in 0..v.len() {
                    if b & mask == 0 {
                        let (b0, b1) = (b, b | mask);
                        let (v0, v1) = (v[b0], v[b1]);
                        v[b0] = m[(0, 0)] * v0 + m[(0, 1)] * v1;
                        v[b1] = m[(1, 0)] * v0 + m[(1, 1)] * v1;
                    }
                }
            }
            _ => {
                let mi = 1usize << (n - g.qubits[0]);
                let mj = 1usize << (n - g.qubits[1]);
                let m = &g.matrix;
                for b in 0..v.len() {
                    if b & mi == 0 && b & mj == 0 {
                        let idx = [b, b | mj, b | mi, b | mi | mj];
                        let old = [v[idx[0]], v[idx[1]], v[idx[2]], v[idx[3]]];
                        for r in 0..4 {
                            v[idx[r]] = (0..4).map(|c| m[(r, c)] * old[c]).sum();
                        }
                    }
                }
            }
        }
    }

    /// All T+1 partial states `U_t ... U_1 |x>`, index 0 being `|x>` itself.
    pub fn apply(&self, x: &BitString) -> Result<Vec<DVector<f64>>> {
        if x.len() != self.n {
            return Err(Error::BitLength {
                got: x.len(),
                expected: self.n,
            });
        }
        let mut states = Vec::with_capacity(self.t() + 1);
        let mut v = x.state();
        states.push(v.clone());
        for g in &self.gates {
            self.apply_gate(g, &mut v);
            states.push(v.clone());
        }
        Ok(states)
    }

    /// Final state `U_T ... U_1 |x>`.
    pub fn output(&self, x: &BitString) -> Result<DVector<f64>> {
        Ok(self.apply(x)?.pop().unwrap())
    }

    /// Parse the circuit text format. `base` resolves CUSTOM matrix paths.
    pub fn parse(text: &str, base: &Path) -> Result<Circuit> {
        let mut n: Option<usize> = None;
        let mut gates = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| Error::Parse {
                line: lineno + 1,
                msg,
            };
            let tok: Vec<&str> = line.split_whitespace().collect();
            if tok[0] == "qubits" {
                if tok.len() != 2 {
                    return Err(err("expected `qubits <n>`".into()));
                }
                n = Some(
                    tok[1]
                        .parse()
                        .map_err(|_| err(format!("bad qubit count `{}`", tok[1])))?,
                );
                continue;
            }
            if n.is_none() {
                return Err(err("`qubits <n>` header must come first".into()));
            }
            let parse_idx = |s: &str| -> Result<usize> {
                s.parse().map_err(|_| err(format!("bad qubit index `{s}`")))
            };
            let parse_angle =
                |s: &str| -> Result<f64> { s.parse().map_err(|_| err(format!("bad angle `{s}`"))) };
            let gate = match tok[0] {
                "R" if tok.len() == 4 => {
                    Gate::r(parse_angle(tok[1])?, parse_idx(tok[2])?, parse_idx(tok[3])?)
                        .map_err(|e| err(e.to_string()))?
                }
                "CNOT" if tok.len() == 3 => Gate::cnot(parse_idx(tok[1])?, parse_idx(tok[2])?)
                    .map_err(|e| err(e.to_string()))?,
                "X" if tok.len() == 2 => Gate::x(parse_idx(tok[1])?),
                "XZ" if tok.len() == 3 => Gate::xz_mix(parse_angle(tok[1])?, parse_idx(tok[2])?),
                "CUSTOM" if tok.len() == 3 || tok.len() == 4 => {
                    let path = base.join(tok[1]);
                    let m = parse_matrix_file(&path)?;
                    let qubits = tok[2..]
                        .iter()
                        .map(|s| parse_idx(s))
                        .collect::<Result<_>>()?;
                    Gate::custom(m, qubits).map_err(|e| err(e.to_string()))?
                }
                _ => return Err(err(format!("unrecognized gate line `{line}`"))),
            };
            gates.push(gate);
        }
        let n = n.ok_or(Error::Parse {
            line: 0,
            msg: "missing `qubits <n>` header".into(),
        })?;
        Circuit::new(n, gates)
    }

    /// Serialize to the circuit text format. CUSTOM gates are not
    /// serializable (their matrices live in side files).
    pub fn serialize(&self) -> Result<String> {
        let mut out = format!("qubits {}\n", self.n);
        for g in &self.gates {
            match g.kind {
                GateKind::X => out.push_str(&format!("X {}\n", g.qubits[0])),
                GateKind::Cnot => out.push_str(&format!("CNOT {} {}\n", g.qubits[0], g.qubits[1])),
                GateKind::R(phi) => {
                    out.push_str(&format!("R {} {} {}\n", phi, g.qubits[0], g.qubits[1]))
                }
                GateKind::XzMix(psi) => out.push_str(&format!("XZ {} {}\n", psi, g.qubits[0])),
                GateKind::Custom => {
                    return Err(Error::Invalid("cannot serialize CUSTOM gates".into()))
                }
            }
        }
        Ok(out)
    }

    /// Seeded random circuit over {CNOT, X, XZ(psi), R(phi)} with angles
    /// uniform in (0, pi); psi redrawn if it lands on a multiple of pi/4.
    /// Single-qubit circuits draw only from {X, XZ}.
    pub fn random<R: Rng>(rng: &mut R, n: usize, t: usize) -> Circuit {
        assert!(n >= 1 && t >= 1);
        let mut gates = Vec::with_capacity(t);
        for _ in 0..t {
            let kind = if n == 1 {
                rng.gen_range(0..2)
            } else {
                rng.gen_range(0..4)
            };
            let gate = match kind {
                0 => Gate::x(rng.gen_range(1..=n)),
                1 => {
                    let mut psi = rng.gen_range(0.0..std::f64::consts::PI);
                    while (psi / (std::f64::consts::FRAC_PI_4)).fract().abs() < 1e-9 {
                        psi = rng.gen_range(0.0..std::f64::consts::PI);
                    }
                    Gate::xz_mix(psi, rng.gen_range(1..=n))
                }
                2 => {
                    let (i, j) = distinct_pair(rng, n);
                    Gate::cnot(i, j).unwrap()
                }
                _ => {
                    let (i, j) = distinct_pair(rng, n);
                    Gate::r(rng.gen_range(0.0..std::f64::consts::PI), i, j).unwrap()
                }
            };
            gates.push(gate);
        }
        Circuit::new(n, gates).unwrap()
    }
}

fn distinct_pair<R: Rng>(rng: &mut R, n: usize) -> (usize, usize) {
    let i = rng.gen_range(1..=n);
    let mut j = rng.gen_range(1..=n);
    while j == i {
        j = rng.gen_range(1..=n);
    }
    (i, j)
}

/// Parse a CUSTOM matrix side file: 4 or 16 real entries, row-major.
pub fn parse_matrix_file(path: &Path) -> Result<DMatrix<f64>> {
    let text = std::fs::read_to_string(path)?;
    let mut entries = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        for tokr in line.split_whitespace() {
            let x: f64 = tokr.parse().map_err(|_| Error::Parse {
                line: lineno + 1,
                msg: format!("bad matrix entry `{tokr}`"),
            })?;
            entries.push(x);
        }
    }
    let dim = match entries.len() {
        4 => 2,
        16 => 4,
        other => {
            return Err(Error::Parse {
                line: 0,
                msg: format!("matrix file needs 4 or 16 entries, got {other}"),
            })
        }
    };
    Ok(DMatrix::from_row_slice(dim, dim, &entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::str::FromStr;

    #[test]
    fn r_gate_at_half_pi_is_cnot() {
        let r = Gate::r(std::f64::consts::FRAC_PI_2, 1, 2).unwrap();
        let c = Gate::cnot(1, 2).unwrap();
        assert!((r.matrix() - c.matrix()).abs().max() < 1e-12);
    }

    #[test]
    fn r_gate_at_zero_is_cz() {
        let r = Gate::r(0.0, 1, 2).unwrap();
        let cz = DMatrix::from_row_slice(
            4,
            4,
            &[
                1.0, 0.0, 0.0, 0.0, //
                0.0, 1.0, 0.0, 0.0, //
                0.0, 0.0, 1.0, 0.0, //
                0.0, 0.0, 0.0, -1.0,
            ],
        );
        assert!((r.matrix() - cz).abs().max() < 1e-12);
    }

    #[test]
    fn r_gate_is_self_inverse() {
        let r = Gate::r(0.3, 1, 2).unwrap();
        assert!(r.is_self_inverse());
        let sq = r.matrix() * r.matrix();
        assert!((sq - DMatrix::<f64>::identity(4, 4)).abs().max() < 1e-12);
    }

    #[test]
    fn r_gate_rejects_equal_indices() {
        assert!(Gate::r(0.3, 2, 2).is_err());
    }

    #[test]
    fn xz_mix_endpoints() {
        let x = Gate::xz_mix(0.0, 1);
        assert!((x.matrix() - Gate::x(1).matrix()).abs().max() < 1e-12);

        let z = Gate::xz_mix(std::f64::consts::FRAC_PI_2, 1);
        let sz = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!((z.matrix() - sz).abs().max() < 1e-12);
    }

    #[test]
    fn xz_mix_at_third_pi() {
        let psi = std::f64::consts::FRAC_PI_3;
        let g = Gate::xz_mix(psi, 1);
        let expect = DMatrix::from_row_slice(2, 2, &[psi.sin(), psi.cos(), psi.cos(), -psi.sin()]);
        assert!((g.matrix() - expect).abs().max() < 1e-12);
        let sq = g.matrix() * g.matrix();
        assert!((sq - DMatrix::<f64>::identity(2, 2)).abs().max() < 1e-12);
    }

    #[test]
    fn gate_validation_verdicts() {
        assert!(validate_gate(&Gate::x(1)).pass());

        // sigma_y: self-inverse but not real
        let i = Complex64::new(0.0, 1.0);
        let o = Complex64::new(0.0, 0.0);
        let y = DMatrix::from_row_slice(2, 2, &[o, -i, i, o]);
        let v = validate_gate_matrix(&y);
        assert!(!v.real);
        assert!(v.self_inverse);
        assert!(!v.pass());

        // Hadamard: real and self-inverse
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let h = DMatrix::from_row_slice(2, 2, &[r, r, r, -r]);
        let hc = h.map(|x| Complex64::new(x, 0.0));
        assert!(validate_gate_matrix(&hc).pass());

        // a non-symmetric square root of the identity is not a gate
        let bad = DMatrix::from_row_slice(2, 2, &[1.0, 5.0, 0.0, -1.0]);
        let v = validate_gate_matrix(&bad.map(|x| Complex64::new(x, 0.0)));
        assert!(v.self_inverse && !v.self_adjoint && !v.pass());
    }

    #[test]
    fn apply_cnot_flips_target() {
        let c = Circuit::new(2, vec![Gate::cnot(1, 2).unwrap()]).unwrap();
        let states = c.apply(&BitString::from_str("10").unwrap()).unwrap();
        // |10> -> |11>
        assert_eq!(states[0][2], 1.0);
        assert_eq!(states[1][3], 1.0);
    }

    #[test]
    fn r_half_pi_acts_as_cnot() {
        let c = Circuit::new(2, vec![Gate::r(std::f64::consts::FRAC_PI_2, 1, 2).unwrap()]).unwrap();
        let out = c.output(&BitString::from_str("10").unwrap()).unwrap();
        assert!((out[3] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partial_states_start_at_input() {
        let c = Circuit::new(2, vec![Gate::x(1)]).unwrap();
        let x = BitString::from_str("01").unwrap();
        let states = c.apply(&x).unwrap();
        assert_eq!(states[0], x.state());
    }

    #[test]
    fn reversed_qubit_order_gates() {
        // CNOT with control 2, target 1: |01> -> |11>
        let c = Circuit::new(2, vec![Gate::cnot(2, 1).unwrap()]).unwrap();
        let out = c.output(&BitString::from_str("01").unwrap()).unwrap();
        assert!((out[3] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_circuit_partials_are_normalized_and_real_involutive() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let n = rng.gen_range(1..=3);
            let t = rng.gen_range(1..=4);
            let c = Circuit::random(&mut rng, n, t);
            for g in c.gates() {
                assert!(g.is_self_inverse());
            }
            let states = c.apply(&BitString::zeros(n)).unwrap();
            assert_eq!(states.len(), t + 1);
            for s in &states {
                assert!((s.norm() - 1.0).abs() < 1e-12);
            }
            // applying the last gate again returns the prior partial state
            let mut v = states[t].clone();
            c.apply_gate(&c.gates()[t - 1], &mut v);
            assert!((v - &states[t - 1]).abs().max() < 1e-12);
        }
    }

    #[test]
    fn bitstring_length_mismatch() {
        let c = Circuit::new(2, vec![Gate::x(1)]).unwrap();
        assert!(matches!(
            c.apply(&BitString::from_str("101").unwrap()),
            Err(Error::BitLength { .. })
        ));
    }

    #[test]
    fn parse_roundtrip() {
        let text = "# demo\nqubits 2\nR 0.5 1 2\nCNOT 2 1\nX 2\nXZ 1.1 1\n";
        let c = Circuit::parse(text, Path::new(".")).unwrap();
        assert_eq!(c.n(), 2);
        assert_eq!(c.t(), 4);
        let again = Circuit::parse(&c.serialize().unwrap(), Path::new(".")).unwrap();
        assert_eq!(again.t(), 4);
        assert_eq!(again.gates()[0].kind, GateKind::R(0.5));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(matches!(
            Circuit::parse("qubits 2\nFLIP 1\n", Path::new(".")),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(Circuit::parse("X 1\n", Path::new(".")).is_err());
        assert!(Circuit::parse("qubits 2\nX 3\n", Path::new(".")).is_err());
        assert!(Circuit::parse("qubits 2\n", Path::new(".")).is_err());
    }

    #[test]
    fn custom_gate_from_file() {
        let dir = tempfile::tempdir().unwrap();
        // Hadamard
        let r = std::f64::consts::FRAC_1_SQRT_2;
        std::fs::write(dir.path().join("h.mat"), format!("{r} {r}\n{r} {}\n", -r)).unwrap();
        let c = Circuit::parse("qubits 1\nCUSTOM h.mat 1\n", dir.path()).unwrap();
        assert_eq!(c.gates()[0].kind, GateKind::Custom);
        assert!(c.gates()[0].is_self_inverse());
        // H|0> = (|0>+|1>)/sqrt(2)
        let out = c.output(&BitString::zeros(1)).unwrap();
        assert!((out[0] - r).abs() < 1e-12 && (out[1] - r).abs() < 1e-12);
    }
}

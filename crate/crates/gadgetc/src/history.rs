//! History-state Hamiltonians: input, clock, clock-init and propagation
//! terms on `n` logical + `T` clock qubits, plus the history state itself.
//!
//! Layout is fixed: logical qubits occupy positions `1..=n`, clock qubits
//! positions `n+1..=n+T`. Time step `t` is encoded by the unary clock word
//! `1^t 0^(T-t)`. Clock qubits are materialized as physical qubits, so
//! illegal clock patterns carry real energy penalties.
//!
//! The total Hamiltonian `H_in + H_clock + H_prop` annihilates the history
//! state. The clock-init penalty `|1><1|` on the first clock qubit cannot be
//! part of that annihilating sum: the history state puts weight on clock
//! states with the first qubit set for every t >= 1, so including it
//! necessarily lifts the energy by T/(T+1). It is built as a separate term
//! and intended for the initial Hamiltonian of an adiabatic interpolation;
//! `total` takes a flag so both conventions are available.

use nalgebra::DVector;

use crate::circuit::{BitString, Circuit};
use crate::pauli::{pauli_decompose, Letter, OperatorSum, PauliString};
use crate::{Error, Result};

/// A T-bit clock register value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClockState {
    bits: Vec<bool>,
}

impl ClockState {
    pub fn new(bits: Vec<bool>) -> ClockState {
        ClockState { bits }
    }

    /// The legal unary word `1^t 0^(T-t)`.
    pub fn unary(t: usize, big_t: usize) -> ClockState {
        assert!(t <= big_t);
        ClockState {
            bits: (0..big_t).map(|u| u < t).collect(),
        }
    }

    /// Legal iff of the form `1^t 0^(T-t)`, i.e. no 0 followed by a 1.
    pub fn is_legal_unary(&self) -> bool {
        self.bits.windows(2).all(|w| w[0] || !w[1])
    }

    /// Number of adjacent `01` patterns; the clock-term eigenvalue of this
    /// basis state.
    pub fn domain_wall_defects(&self) -> usize {
        self.bits.windows(2).filter(|w| !w[0] && w[1]).count()
    }

    /// Basis index with clock qubit 1 as the most significant bit.
    pub fn index(&self) -> usize {
        self.bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// Input penalty on `n + T` qubits:
/// `sum_i (1/4) (1 - (-1)^{x_i} Z_i)(1 + Z_{clock 1})`.
///
/// Annihilates `|x> (x) |0...0>` and penalizes any wrong input bit paired
/// with a time-zero clock.
pub fn h_in(x: &BitString, n: usize, t: usize) -> Result<OperatorSum> {
    if x.len() != n {
        return Err(Error::BitLength {
            got: x.len(),
            expected: n,
        });
    }
    if t == 0 {
        return Err(Error::Invalid("need at least one clock qubit".into()));
    }
    let total = n + t;
    let c1 = n + 1;
    let mut terms = Vec::with_capacity(4 * n);
    for i in 1..=n {
        let sign = if x.bit(i) { -1.0 } else { 1.0 };
        terms.push(PauliString::identity(total, 0.25));
        terms.push(PauliString::single(total, c1, Letter::Z, 0.25)?);
        terms.push(PauliString::single(total, i, Letter::Z, -0.25 * sign)?);
        terms.push(PauliString::place(
            total,
            &[(i, Letter::Z), (c1, Letter::Z)],
            -0.25 * sign,
        )?);
    }
    Ok(OperatorSum::new(total, terms)?.canonicalize())
}

/// Clock penalty on `T` qubits: `sum_t |01><01|_(t,t+1)`, equal to
/// `(1/4) [(T-1) 1 + Z_1 - Z_T - sum_t Z_t Z_{t+1}]`.
///
/// A ferromagnetic line with twisted boundary fields; the T+1 legal unary
/// words span its zero eigenspace. For T = 1 there is no adjacent pair and
/// the operator is zero.
pub fn h_clock(t: usize) -> OperatorSum {
    assert!(t >= 1, "need at least one clock qubit");
    if t == 1 {
        return OperatorSum::zero(1);
    }
    let mut terms = Vec::with_capacity(t + 2);
    terms.push(PauliString::identity(t, 0.25 * (t as f64 - 1.0)));
    terms.push(PauliString::single(t, 1, Letter::Z, 0.25).unwrap());
    terms.push(PauliString::single(t, t, Letter::Z, -0.25).unwrap());
    for u in 1..t {
        terms.push(PauliString::place(t, &[(u, Letter::Z), (u + 1, Letter::Z)], -0.25).unwrap());
    }
    OperatorSum::new(t, terms).unwrap().canonicalize()
}

/// Penalty `|1><1|` on clock qubit 1, i.e. `(1/2)(1 - Z_1)`, on `T` qubits.
/// Pins the clock to time zero; see the module notes for why this is kept
/// out of the annihilating sum.
pub fn h_clock_init(t: usize) -> OperatorSum {
    assert!(t >= 1, "need at least one clock qubit");
    let terms = vec![
        PauliString::identity(t, 0.5),
        PauliString::single(t, 1, Letter::Z, -0.5).unwrap(),
    ];
    OperatorSum::new(t, terms).unwrap().canonicalize()
}

/// Weighted clock-letter placements, `(coefficient, [(clock qubit, letter)])`.
type ClockFactors = Vec<(f64, Vec<(usize, Letter)>)>;

/// Clock-side Pauli factors for the propagation term at step `t`, split
/// into the part multiplying the identity and the part multiplying the
/// gate.
fn prop_clock_factors(t: usize, big_t: usize) -> (ClockFactors, ClockFactors) {
    use Letter::{X, Z};
    assert!(t >= 1 && t <= big_t);
    if big_t == 1 {
        // single clock qubit: 1 - U (x) X_1
        return (vec![(1.0, vec![])], vec![(1.0, vec![(1, X)])]);
    }
    if t == 1 {
        // (1/2)(1 + Z_2) - U (x) (1/2)(X_1 + X_1 Z_2)
        (
            vec![(0.5, vec![]), (0.5, vec![(2, Z)])],
            vec![(0.5, vec![(1, X)]), (0.5, vec![(1, X), (2, Z)])],
        )
    } else if t == big_t {
        // (1/2)(1 - Z_{T-1}) - U (x) (1/2)(X_T - Z_{T-1} X_T)
        (
            vec![(0.5, vec![]), (-0.5, vec![(t - 1, Z)])],
            vec![(0.5, vec![(t, X)]), (-0.5, vec![(t - 1, Z), (t, X)])],
        )
    } else {
        // (1/4)(1 - Z_{t-1})(1 + Z_{t+1}) - U (x) (1/4)(1 - Z_{t-1}) X_t (1 + Z_{t+1})
        (
            vec![
                (0.25, vec![]),
                (-0.25, vec![(t - 1, Z)]),
                (0.25, vec![(t + 1, Z)]),
                (-0.25, vec![(t - 1, Z), (t + 1, Z)]),
            ],
            vec![
                (0.25, vec![(t, X)]),
                (-0.25, vec![(t - 1, Z), (t, X)]),
                (0.25, vec![(t, X), (t + 1, Z)]),
                (-0.25, vec![(t - 1, Z), (t, X), (t + 1, Z)]),
            ],
        )
    }
}

/// Propagation penalty on `n + T` qubits, `sum_t H_prop,t`, each term
/// checking that step `t-1` evolves into step `t` under gate `U_t`.
///
/// Valid only for self-inverse gates (that is what collapses the forward
/// and backward transition terms into a single `U (x) X_t` factor); gates
/// are re-validated here and rejected otherwise.
pub fn h_prop(c: &Circuit) -> Result<OperatorSum> {
    let n = c.n();
    let big_t = c.t();
    let total = n + big_t;
    let mut terms: Vec<PauliString> = Vec::new();
    for (step, gate) in c.gates().iter().enumerate() {
        if !gate.is_self_inverse() {
            return Err(Error::NotSelfInverse);
        }
        let t = step + 1;
        let (id_part, gate_part) = prop_clock_factors(t, big_t);
        for (coeff, clock_letters) in id_part {
            let placed: Vec<(usize, Letter)> =
                clock_letters.iter().map(|&(q, l)| (n + q, l)).collect();
            terms.push(PauliString::place(total, &placed, coeff)?);
        }
        // Pauli expansion of the gate on its own qubits
        let u = pauli_decompose(gate.matrix(), gate.arity())?;
        for (coeff, clock_letters) in gate_part {
            for ut in u.terms() {
                let mut placed: Vec<(usize, Letter)> = ut
                    .letters()
                    .iter()
                    .enumerate()
                    .filter(|(_, &l)| l != Letter::I)
                    .map(|(k, &l)| (gate.qubits()[k], l))
                    .collect();
                placed.extend(clock_letters.iter().map(|&(q, l)| (n + q, l)));
                terms.push(PauliString::place(total, &placed, -coeff * ut.coefficient)?);
            }
        }
    }
    Ok(OperatorSum::new(total, terms)?.canonicalize())
}

/// The uniform superposition of all T+1 partial evolutions, each tagged by
/// its unary clock word.
pub fn history_state(c: &Circuit, x: &BitString) -> Result<DVector<f64>> {
    let partials = c.apply(x)?;
    let n = c.n();
    let big_t = c.t();
    let dim = 1usize << (n + big_t);
    let mut psi = DVector::<f64>::zeros(dim);
    let norm = 1.0 / ((big_t + 1) as f64).sqrt();
    for (t, partial) in partials.iter().enumerate() {
        let clock_index = ClockState::unary(t, big_t).index();
        for (logical_index, &amp) in partial.iter().enumerate() {
            if amp != 0.0 {
                psi[(logical_index << big_t) | clock_index] += norm * amp;
            }
        }
    }
    Ok(psi)
}

/// `H_in + H_clock + H_prop`, plus the clock-init penalty iff requested.
/// With the flag unset this operator annihilates the history state.
pub fn total(c: &Circuit, x: &BitString, include_clockinit: bool) -> Result<OperatorSum> {
    let n = c.n();
    let big_t = c.t();
    let total_q = n + big_t;
    let mut h = h_in(x, n, big_t)?
        .plus(&h_clock(big_t).embed(n, total_q)?)?
        .plus(&h_prop(c)?)?;
    if include_clockinit {
        h = h.plus(&h_clock_init(big_t).embed(n, total_q)?)?;
    }
    Ok(h.canonicalize())
}

/// A circuit plus its classical input: everything needed to build and check
/// one history instance.
#[derive(Debug, Clone)]
pub struct HistoryProblem {
    pub circuit: Circuit,
    pub input: BitString,
}

impl HistoryProblem {
    pub fn new(circuit: Circuit, input: BitString) -> Result<HistoryProblem> {
        if input.len() != circuit.n() {
            return Err(Error::BitLength {
                got: input.len(),
                expected: circuit.n(),
            });
        }
        Ok(HistoryProblem { circuit, input })
    }

    pub fn n(&self) -> usize {
        self.circuit.n()
    }

    pub fn t(&self) -> usize {
        self.circuit.t()
    }

    pub fn total_qubits(&self) -> usize {
        self.n() + self.t()
    }

    pub fn hamiltonian(&self, include_clockinit: bool) -> Result<OperatorSum> {
        total(&self.circuit, &self.input, include_clockinit)
    }

    pub fn history_state(&self) -> Result<DVector<f64>> {
        history_state(&self.circuit, &self.input)
    }

    /// Header comments for emitted Hamiltonian files.
    pub fn header(&self, include_clockinit: bool) -> Vec<String> {
        vec![
            "history-state hamiltonian".to_string(),
            format!("n={} T={} x={}", self.n(), self.t(), self.input),
            format!(
                "layout: logical qubits 1..{}, clock qubits {}..{} (letter 1 = leftmost = qubit 1)",
                self.n(),
                self.n() + 1,
                self.total_qubits()
            ),
            format!("include_clockinit={include_clockinit}"),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::str::FromStr;

    fn bits(s: &str) -> BitString {
        BitString::from_str(s).unwrap()
    }

    /// Oracle: dense |ket><bra| on a register of `n` qubits.
    fn ketbra(n: usize, ket: usize, bra: usize) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(1 << n, 1 << n);
        m[(ket, bra)] = 1.0;
        m
    }

    /// Oracle: embed a dense operator acting on the listed 1-based qubit
    /// positions (in order) into an `n`-qubit register, by direct index
    /// bookkeeping independent of the Pauli machinery.
    fn dense_embed(small: &DMatrix<f64>, positions: &[usize], n: usize) -> DMatrix<f64> {
        let dim = 1usize << n;
        let mut out = DMatrix::zeros(dim, dim);
        let rest_mask: usize = {
            let mut m = (1usize << n) - 1;
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

    #[test]
    fn h_in_annihilates_correct_input_and_penalizes_wrong_one() {
        // n=1, x=0, T=1
        let h = h_in(&bits("0"), 1, 1).unwrap().to_dense().unwrap();
        // |0>|0> = index 0 annihilated
        let mut v = DVector::zeros(4);
        v[0] = 1.0;
        assert!((&h * &v).norm() < 1e-12);
        // |1>|0> = index 2 has eigenvalue 1
        let mut w = DVector::zeros(4);
        w[2] = 1.0;
        let hw = &h * &w;
        assert!((hw[2] - 1.0).abs() < 1e-12);
        assert!((hw.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn h_in_matches_projector_form() {
        // sum_i (1 - |x_i><x_i|) (x) |0><0|_{clock 1} built densely
        for (n, t, x) in [(1usize, 1usize, "0"), (2, 2, "01"), (3, 2, "110")] {
            let x = bits(x);
            let total = n + t;
            let mut oracle = DMatrix::<f64>::zeros(1 << total, 1 << total);
            for i in 1..=n {
                let xi = x.bit(i) as usize;
                let not_xi = ketbra(1, 1 - xi, 1 - xi);
                let p0 = ketbra(1, 0, 0);
                oracle += dense_embed(&not_xi, &[i], total) * dense_embed(&p0, &[n + 1], total);
            }
            let built = h_in(&x, n, t).unwrap().to_dense().unwrap();
            assert!((built - oracle).abs().max() < 1e-12);
        }
    }

    #[test]
    fn h_clock_counts_01_patterns() {
        let h = h_clock(3).to_dense().unwrap();
        // diagonal operator; eigenvalue = number of adjacent 01 patterns
        for b in 0..8usize {
            let cs = ClockState::new((0..3).map(|k| (b >> (2 - k)) & 1 == 1).collect());
            assert!((h[(b, b)] - cs.domain_wall_defects() as f64).abs() < 1e-12);
        }
        // explicit cases: 000, 100, 110, 111 at zero; 010 at one
        for b in [0b000, 0b100, 0b110, 0b111] {
            assert!(h[(b, b)].abs() < 1e-12);
        }
        assert!((h[(0b010, 0b010)] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn h_clock_matches_projector_form_and_degeneracy() {
        for t in 2..=5usize {
            let mut oracle = DMatrix::<f64>::zeros(1 << t, 1 << t);
            let p01 = ketbra(2, 1, 1); // |01><01|
            for u in 1..t {
                oracle += dense_embed(&p01, &[u, u + 1], t);
            }
            let built = h_clock(t).to_dense().unwrap();
            assert!((built.clone() - oracle).abs().max() < 1e-12);
            // ground space = T+1 legal unary words
            let eigs = built.symmetric_eigenvalues();
            let zeros = eigs.iter().filter(|&&e| e.abs() < 1e-9).count();
            assert_eq!(zeros, t + 1);
        }
    }

    #[test]
    fn h_clock_is_zero_for_single_clock_qubit() {
        assert!(h_clock(1).terms().is_empty());
    }

    #[test]
    fn h_clock_init_examples() {
        let h1 = h_clock_init(1).to_dense().unwrap();
        assert!(h1[(0, 0)].abs() < 1e-12); // annihilates |0>
        assert!((h1[(1, 1)] - 1.0).abs() < 1e-12); // eigenvalue 1 on |1>

        let h2 = h_clock_init(2).to_dense().unwrap();
        assert!((h2[(0b10, 0b10)] - 1.0).abs() < 1e-12); // |10>
    }

    #[test]
    fn h_prop_matches_projector_form() {
        // T=2, U1 = U2 = X on one logical qubit; oracle from transition
        // projectors on clock qubit pairs.
        let c = Circuit::new(1, vec![Gate::x(1), Gate::x(1)]).unwrap();
        let total = 3usize;
        let x_mat = Gate::x(1).matrix().clone();
        let id2 = DMatrix::<f64>::identity(2, 2);

        // t=1 on clock (1,2): states |00>, |10>
        let hop1 = ketbra(2, 0b10, 0b00) + ketbra(2, 0b00, 0b10);
        let diag1 = ketbra(2, 0b00, 0b00) + ketbra(2, 0b10, 0b10);
        // t=2 on clock (1,2): states |10>, |11>
        let hop2 = ketbra(2, 0b11, 0b10) + ketbra(2, 0b10, 0b11);
        let diag2 = ketbra(2, 0b10, 0b10) + ketbra(2, 0b11, 0b11);

        let oracle = dense_embed(&id2, &[1], total) * dense_embed(&diag1, &[2, 3], total)
            - dense_embed(&x_mat, &[1], total) * dense_embed(&hop1, &[2, 3], total)
            + dense_embed(&id2, &[1], total) * dense_embed(&diag2, &[2, 3], total)
            - dense_embed(&x_mat, &[1], total) * dense_embed(&hop2, &[2, 3], total);

        let built = h_prop(&c).unwrap().to_dense().unwrap();
        assert!((built - oracle).abs().max() < 1e-12);
    }

    #[test]
    fn h_prop_middle_term_matches_projector_form() {
        // T=3 exercises the three-clock-qubit middle form at t=2.
        let c = Circuit::new(1, vec![Gate::x(1), Gate::xz_mix(0.9, 1), Gate::x(1)]).unwrap();
        let total = 4usize;
        let built = h_prop(&c).unwrap().to_dense().unwrap();

        let mut oracle = DMatrix::<f64>::zeros(1 << total, 1 << total);
        let mats: Vec<DMatrix<f64>> = c.gates().iter().map(|g| g.matrix().clone()).collect();
        let id2 = DMatrix::<f64>::identity(2, 2);
        // t=1 on clock (1,2)
        oracle += dense_embed(&id2, &[1], total)
            * dense_embed(
                &(ketbra(2, 0b00, 0b00) + ketbra(2, 0b10, 0b10)),
                &[2, 3],
                total,
            )
            - dense_embed(&mats[0], &[1], total)
                * dense_embed(
                    &(ketbra(2, 0b10, 0b00) + ketbra(2, 0b00, 0b10)),
                    &[2, 3],
                    total,
                );
        // t=2 on clock (1,2,3): |100> and |110>
        oracle += dense_embed(&id2, &[1], total)
            * dense_embed(
                &(ketbra(3, 0b100, 0b100) + ketbra(3, 0b110, 0b110)),
                &[2, 3, 4],
                total,
            )
            - dense_embed(&mats[1], &[1], total)
                * dense_embed(
                    &(ketbra(3, 0b110, 0b100) + ketbra(3, 0b100, 0b110)),
                    &[2, 3, 4],
                    total,
                );
        // t=3 on clock (2,3)
        oracle += dense_embed(&id2, &[1], total)
            * dense_embed(
                &(ketbra(2, 0b10, 0b10) + ketbra(2, 0b11, 0b11)),
                &[3, 4],
                total,
            )
            - dense_embed(&mats[2], &[1], total)
                * dense_embed(
                    &(ketbra(2, 0b11, 0b10) + ketbra(2, 0b10, 0b11)),
                    &[3, 4],
                    total,
                );

        assert!((built - oracle).abs().max() < 1e-12);
    }

    #[test]
    fn h_prop_annihilates_history_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..10 {
            let n = rng.gen_range(1..=3);
            let t = rng.gen_range(1..=4);
            let c = Circuit::random(&mut rng, n, t);
            let x = BitString::zeros(n);
            let h = h_prop(&c).unwrap();
            let psi = history_state(&c, &x).unwrap();
            assert!(h.apply(&psi).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn h_prop_single_step_ground_space() {
        // T=1, U=X: the 4x4 propagation term annihilates (|00>+|11>)/sqrt(2)
        let c = Circuit::new(1, vec![Gate::x(1)]).unwrap();
        let h = h_prop(&c).unwrap().to_dense().unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let bell = DVector::from_vec(vec![r, 0.0, 0.0, r]);
        assert!((&h * &bell).norm() < 1e-12);
    }

    #[test]
    fn h_prop_rejects_non_self_inverse_gates() {
        // a non-symmetric involution parses as a gate but is not admissible
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 2.0, 0.5, 0.0]);
        let g = Gate::custom(m, vec![1]).unwrap();
        let c = Circuit::new(1, vec![g]).unwrap();
        assert!(matches!(h_prop(&c), Err(Error::NotSelfInverse)));
    }

    #[test]
    fn component_hamiltonians_are_positive_semidefinite() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..5 {
            let n = rng.gen_range(1..=2);
            let t = rng.gen_range(1..=3);
            let c = Circuit::random(&mut rng, n, t);
            let x = BitString::zeros(n);
            for h in [
                h_in(&x, n, t).unwrap(),
                h_clock(t).embed(n, n + t).unwrap(),
                h_clock_init(t).embed(n, n + t).unwrap(),
                h_prop(&c).unwrap(),
            ] {
                let min = h.to_dense().unwrap().symmetric_eigenvalues().min();
                assert!(min > -1e-10, "component not PSD: min eigenvalue {min}");
            }
        }
    }

    #[test]
    fn history_state_single_x() {
        // T=1, U=X, x=0: (|0>|0> + |1>|1>)/sqrt(2)
        let c = Circuit::new(1, vec![Gate::x(1)]).unwrap();
        let psi = history_state(&c, &bits("0")).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((psi[0] - r).abs() < 1e-12);
        assert!((psi[3] - r).abs() < 1e-12);
        assert!((psi.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn history_state_double_x() {
        // T=2, U1=U2=X, x=0: (|0>|00> + |1>|10> + |0>|11>)/sqrt(3)
        let c = Circuit::new(1, vec![Gate::x(1), Gate::x(1)]).unwrap();
        let psi = history_state(&c, &bits("0")).unwrap();
        let r = 1.0 / 3.0_f64.sqrt();
        assert!((psi[0b000] - r).abs() < 1e-12);
        assert!((psi[0b110] - r).abs() < 1e-12);
        assert!((psi[0b011] - r).abs() < 1e-12);
        assert!((psi.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn total_annihilates_history_state_without_clockinit() {
        let c = Circuit::new(1, vec![Gate::x(1)]).unwrap();
        let h = total(&c, &bits("0"), false).unwrap();
        let psi = history_state(&c, &bits("0")).unwrap();
        assert!(h.apply(&psi).unwrap().norm() < 1e-12);
    }

    #[test]
    fn clockinit_lifts_history_state_energy() {
        // T=1, U=X: expectation of the full operator with the clock-init
        // penalty is 1/(T+1) = 1/2.
        let c = Circuit::new(1, vec![Gate::x(1)]).unwrap();
        let h = total(&c, &bits("0"), true).unwrap();
        let psi = history_state(&c, &bits("0")).unwrap();
        let e = psi.dot(&h.apply(&psi).unwrap());
        assert!((e - 0.5).abs() < 1e-12);
    }

    #[test]
    fn history_state_is_unique_ground_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..5 {
            let n = rng.gen_range(1..=2);
            let t = rng.gen_range(1..=3);
            let c = Circuit::random(&mut rng, n, t);
            let x = BitString::zeros(n);
            let h = total(&c, &x, false).unwrap().to_dense().unwrap();
            let psi = history_state(&c, &x).unwrap();
            let se = h.symmetric_eigen();
            let mut idx: Vec<usize> = (0..se.eigenvalues.len()).collect();
            idx.sort_by(|&a, &b| se.eigenvalues[a].partial_cmp(&se.eigenvalues[b]).unwrap());
            let gap = se.eigenvalues[idx[1]] - se.eigenvalues[idx[0]];
            assert!(gap > 1e-6, "degenerate ground space");
            let overlap = se.eigenvectors.column(idx[0]).dot(&psi).powi(2);
            assert!(overlap > 1.0 - 1e-8);
        }
    }

    #[test]
    fn clock_state_helpers() {
        assert!(ClockState::unary(2, 4).is_legal_unary());
        assert_eq!(ClockState::unary(2, 4).index(), 0b1100);
        let bad = ClockState::new(vec![false, true, false]);
        assert!(!bad.is_legal_unary());
        assert_eq!(bad.domain_wall_defects(), 1);
    }
}

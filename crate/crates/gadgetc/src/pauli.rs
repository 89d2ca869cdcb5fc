//! Real-coefficient Pauli-string algebra and operator assembly.
//!
//! Conventions used everywhere in this crate:
//!
//! - A Pauli word is written left to right, `letter 1 = qubit 1`.
//! - Qubit 1 is the *most significant* bit of a basis-state index, so the
//!   dense realization of a word is the Kronecker product of its letters in
//!   written order.
//! - Coefficients are real. Words containing `Y` are representable (their
//!   matrices are complex when the `Y` count is odd) but every compiled
//!   output of this crate is required to be Y-free.
//!
//! The Hamiltonian text format is one term per line, `<coefficient> <word>`,
//! with `#` comments and blank lines ignored. The serializer always writes a
//! `# qubits: n` comment so that the zero operator round-trips.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::{Error, Result};

/// Default cap on dense matrix realization, in qubits.
pub const DEFAULT_DENSE_LIMIT: usize = 14;

/// Dense-realization cap in qubits; `GADGETC_DENSE_LIMIT` overrides.
pub fn dense_qubit_limit() -> usize {
    std::env::var("GADGETC_DENSE_LIMIT")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_DENSE_LIMIT)
}

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub fn from_char(c: char) -> Result<Letter> {
        match c {
            'I' => Ok(Letter::I),
            'X' => Ok(Letter::X),
            'Y' => Ok(Letter::Y),
            'Z' => Ok(Letter::Z),
            _ => Err(Error::Invalid(format!("unknown Pauli letter '{c}'"))),
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    /// 2x2 complex matrix of the letter.
    pub fn matrix(self) -> DMatrix<Complex64> {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Letter::I => DMatrix::from_row_slice(2, 2, &[l, o, o, l]),
            Letter::X => DMatrix::from_row_slice(2, 2, &[o, l, l, o]),
            Letter::Y => DMatrix::from_row_slice(2, 2, &[o, -i, i, o]),
            Letter::Z => DMatrix::from_row_slice(2, 2, &[l, o, o, -l]),
        }
    }

    /// Product of two letters as `(phase, letter)` with `self * other =
    /// phase * letter`. The phase is one of `{1, -1, i, -i}`.
    pub fn multiply(self, other: Letter) -> (Complex64, Letter) {
        use Letter::*;
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match (self, other) {
            (I, p) | (p, I) => (one, p),
            (X, X) | (Y, Y) | (Z, Z) => (one, I),
            (X, Y) => (i, Z),
            (Y, X) => (-i, Z),
            (Y, Z) => (i, X),
            (Z, Y) => (-i, X),
            (Z, X) => (i, Y),
            (X, Z) => (-i, Y),
        }
    }
}

/// A signed real coefficient times an n-qubit tensor product of Pauli
/// letters; the atom of every operator in this crate.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    pub coefficient: f64,
    letters: Vec<Letter>,
}

impl PauliString {
    pub fn new(coefficient: f64, letters: Vec<Letter>) -> Result<PauliString> {
        if letters.is_empty() {
            return Err(Error::Invalid("empty Pauli word".into()));
        }
        if !coefficient.is_finite() {
            return Err(Error::Invalid(format!(
                "non-finite coefficient {coefficient}"
            )));
        }
        Ok(PauliString {
            coefficient,
            letters,
        })
    }

    /// Identity word on `n` qubits with the given coefficient.
    pub fn identity(n: usize, coefficient: f64) -> PauliString {
        PauliString {
            coefficient,
            letters: vec![Letter::I; n],
        }
    }

    /// `coefficient * letter` acting on `qubit` (1-based) of `n`.
    pub fn single(n: usize, qubit: usize, letter: Letter, coefficient: f64) -> Result<PauliString> {
        PauliString::place(n, &[(qubit, letter)], coefficient)
    }

    /// A word with the given letters placed at 1-based qubit positions and
    /// identity elsewhere. Positions must be distinct and in range.
    pub fn place(n: usize, placed: &[(usize, Letter)], coefficient: f64) -> Result<PauliString> {
        let mut letters = vec![Letter::I; n];
        for &(q, l) in placed {
            if q == 0 || q > n {
                return Err(Error::QubitRange { index: q, n });
            }
            if letters[q - 1] != Letter::I {
                return Err(Error::Invalid(format!("duplicate qubit index {q}")));
            }
            letters[q - 1] = l;
        }
        PauliString::new(coefficient, letters)
    }

    pub fn n(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Word as text, e.g. `ZIX`.
    pub fn word(&self) -> String {
        self.letters.iter().map(|l| l.to_char()).collect()
    }

    /// 1-based positions of non-identity letters.
    pub fn support(&self) -> Vec<usize> {
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, &l)| l != Letter::I)
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// A string realizes a real matrix iff its `Y` count is even.
    pub fn is_real(&self) -> bool {
        self.letters.iter().filter(|&&l| l == Letter::Y).count() % 2 == 0
    }

    /// Product `self * other` as `(phase, string)`; the string's coefficient
    /// is the product of the real coefficients and `phase` collects the
    /// letter phases.
    pub fn multiply(&self, other: &PauliString) -> Result<(Complex64, PauliString)> {
        if self.n() != other.n() {
            return Err(Error::QubitMismatch(format!(
                "product of words on {} and {} qubits",
                self.n(),
                other.n()
            )));
        }
        let mut phase = Complex64::new(1.0, 0.0);
        let mut letters = Vec::with_capacity(self.n());
        for (&a, &b) in self.letters.iter().zip(&other.letters) {
            let (p, l) = a.multiply(b);
            phase *= p;
            letters.push(l);
        }
        Ok((
            phase,
            PauliString {
                coefficient: self.coefficient * other.coefficient,
                letters,
            },
        ))
    }

    /// The same word shifted to qubits `offset+1 ..` of a `total`-qubit
    /// register, identity elsewhere.
    pub fn embed(&self, offset: usize, total: usize) -> Result<PauliString> {
        if offset + self.n() > total {
            return Err(Error::QubitMismatch(format!(
                "cannot embed {} qubits at offset {} into {}",
                self.n(),
                offset,
                total
            )));
        }
        let mut letters = vec![Letter::I; total];
        letters[offset..offset + self.n()].copy_from_slice(&self.letters);
        Ok(PauliString {
            coefficient: self.coefficient,
            letters,
        })
    }

    /// Bit mask (qubit 1 = most significant of `n` bits) of letters that
    /// flip a computational basis state, i.e. `X` and `Y` positions.
    fn flip_mask(&self) -> usize {
        let n = self.n();
        let mut m = 0usize;
        for (idx, &l) in self.letters.iter().enumerate() {
            if matches!(l, Letter::X | Letter::Y) {
                m |= 1 << (n - 1 - idx);
            }
        }
        m
    }

    /// Phase picked up when this word acts on basis state `b`:
    /// `word |b> = phase * |b ^ flip_mask>`.
    fn basis_phase(&self, b: usize) -> Complex64 {
        let n = self.n();
        let mut ph = Complex64::new(1.0, 0.0);
        for (idx, &l) in self.letters.iter().enumerate() {
            let bit = (b >> (n - 1 - idx)) & 1;
            match l {
                Letter::I | Letter::X => {}
                Letter::Z => {
                    if bit == 1 {
                        ph = -ph;
                    }
                }
                Letter::Y => {
                    // Y|0> = i|1>, Y|1> = -i|0>
                    ph *= if bit == 0 {
                        Complex64::new(0.0, 1.0)
                    } else {
                        Complex64::new(0.0, -1.0)
                    };
                }
            }
        }
        ph
    }
}

/// A Hamiltonian as a list of Pauli strings over a fixed qubit count.
///
/// Values are treated as immutable once canonicalized; all realizations and
/// applications are pure functions, so operators are safe to share across
/// threads.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSum {
    n: usize,
    terms: Vec<PauliString>,
}

impl OperatorSum {
    pub fn new(n: usize, terms: Vec<PauliString>) -> Result<OperatorSum> {
        if n == 0 {
            return Err(Error::Invalid("operator needs at least one qubit".into()));
        }
        for t in &terms {
            if t.n() != n {
                return Err(Error::QubitMismatch(format!(
                    "term {} has {} qubits, operator has {}",
                    t.word(),
                    t.n(),
                    n
                )));
            }
        }
        Ok(OperatorSum { n, terms })
    }

    pub fn zero(n: usize) -> OperatorSum {
        OperatorSum {
            n,
            terms: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[PauliString] {
        &self.terms
    }

    pub fn is_real(&self) -> bool {
        self.terms.iter().all(PauliString::is_real)
    }

    /// Merge duplicate words, drop zero terms, sort lexicographically by
    /// word. Idempotent; the result is the canonical form of the operator.
    pub fn canonicalize(&self) -> OperatorSum {
        let mut sorted: Vec<&PauliString> = self.terms.iter().collect();
        sorted.sort_by(|a, b| a.letters.cmp(&b.letters));
        let mut terms: Vec<PauliString> = Vec::new();
        for t in sorted {
            match terms.last_mut() {
                Some(last) if last.letters == t.letters => last.coefficient += t.coefficient,
                _ => terms.push(t.clone()),
            }
        }
        terms.retain(|t| t.coefficient != 0.0);
        OperatorSum { n: self.n, terms }
    }

    /// Term-wise sum; both operands must share the qubit count.
    pub fn plus(&self, other: &OperatorSum) -> Result<OperatorSum> {
        if self.n != other.n {
            return Err(Error::QubitMismatch(format!(
                "sum of operators on {} and {} qubits",
                self.n, other.n
            )));
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(OperatorSum { n: self.n, terms })
    }

    pub fn scaled(&self, f: f64) -> OperatorSum {
        let terms = self
            .terms
            .iter()
            .map(|t| PauliString {
                coefficient: f * t.coefficient,
                letters: t.letters.clone(),
            })
            .collect();
        OperatorSum { n: self.n, terms }
    }

    /// The same operator on a `total`-qubit register with its qubits mapped
    /// to `offset+1 ..= offset+n`.
    pub fn embed(&self, offset: usize, total: usize) -> Result<OperatorSum> {
        let terms = self
            .terms
            .iter()
            .map(|t| t.embed(offset, total))
            .collect::<Result<Vec<_>>>()?;
        Ok(OperatorSum { n: total, terms })
    }

    /// Pad with identity letters up to `total` qubits.
    pub fn extend_to(&self, total: usize) -> Result<OperatorSum> {
        self.embed(0, total)
    }

    fn check_dense(&self) -> Result<usize> {
        let limit = dense_qubit_limit();
        if self.n > limit {
            return Err(Error::DenseLimit {
                qubits: self.n,
                limit,
            });
        }
        Ok(1usize << self.n)
    }

    /// Dense real matrix of a Y-free (more precisely: even-Y) operator.
    pub fn to_dense(&self) -> Result<DMatrix<f64>> {
        let dim = self.check_dense()?;
        let mut m = DMatrix::<f64>::zeros(dim, dim);
        for t in &self.terms {
            if !t.is_real() {
                return Err(Error::NonReal(t.word()));
            }
            let mask = t.flip_mask();
            for col in 0..dim {
                let ph = t.basis_phase(col);
                debug_assert!(ph.im == 0.0);
                m[(col ^ mask, col)] += t.coefficient * ph.re;
            }
        }
        Ok(m)
    }

    /// Dense complex matrix; valid for any operator, including odd-Y terms.
    pub fn to_dense_complex(&self) -> Result<DMatrix<Complex64>> {
        let dim = self.check_dense()?;
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for t in &self.terms {
            let mask = t.flip_mask();
            for col in 0..dim {
                m[(col ^ mask, col)] += Complex64::new(t.coefficient, 0.0) * t.basis_phase(col);
            }
        }
        Ok(m)
    }

    /// Term-by-term action on a real state vector, without realizing the
    /// matrix. This is the only realization offered beyond the dense cap.
    pub fn apply(&self, v: &DVector<f64>) -> Result<DVector<f64>> {
        let dim = 1usize << self.n;
        if v.len() != dim {
            return Err(Error::QubitMismatch(format!(
                "state has dimension {}, operator expects {}",
                v.len(),
                dim
            )));
        }
        let mut out = DVector::<f64>::zeros(dim);
        for t in &self.terms {
            if !t.is_real() {
                return Err(Error::NonReal(t.word()));
            }
            let mask = t.flip_mask();
            for b in 0..dim {
                let ph = t.basis_phase(b);
                out[b ^ mask] += t.coefficient * ph.re * v[b];
            }
        }
        Ok(out)
    }

    /// Parse the Hamiltonian text format.
    pub fn parse(text: &str) -> Result<OperatorSum> {
        let mut terms: Vec<PauliString> = Vec::new();
        let mut n: Option<usize> = None;
        let mut n_comment: Option<usize> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                let c = comment.trim();
                if let Some(rest) = c.strip_prefix("qubits:") {
                    n_comment = rest.trim().parse().ok();
                }
                continue;
            }
            let mut parts = line.split_whitespace();
            let (coeff_s, word_s) = match (parts.next(), parts.next(), parts.next()) {
                (Some(c), Some(w), None) => (c, w),
                _ => {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        msg: format!("expected `<coefficient> <word>`, got `{line}`"),
                    })
                }
            };
            let coefficient: f64 = coeff_s.parse().map_err(|_| Error::Parse {
                line: lineno + 1,
                msg: format!("bad coefficient `{coeff_s}`"),
            })?;
            let letters = word_s
                .chars()
                .map(Letter::from_char)
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::Parse {
                    line: lineno + 1,
                    msg: e.to_string(),
                })?;
            match n {
                None => n = Some(letters.len()),
                Some(k) if k != letters.len() => {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        msg: format!("word length {} differs from earlier {}", letters.len(), k),
                    })
                }
                _ => {}
            }
            terms.push(
                PauliString::new(coefficient, letters).map_err(|e| Error::Parse {
                    line: lineno + 1,
                    msg: e.to_string(),
                })?,
            );
        }
        let n = n.or(n_comment).ok_or(Error::Parse {
            line: 0,
            msg: "no terms and no `# qubits:` header".into(),
        })?;
        OperatorSum::new(n, terms)
    }

    /// Serialize; coefficients use the shortest representation that parses
    /// back to the same value, so round-trips are lossless.
    pub fn serialize(&self, header: &[String]) -> String {
        let mut out = String::new();
        for h in header {
            out.push_str("# ");
            out.push_str(h);
            out.push('\n');
        }
        out.push_str(&format!("# qubits: {}\n", self.n));
        for t in &self.terms {
            out.push_str(&format!("{} {}\n", t.coefficient, t.word()));
        }
        out
    }
}

/// Named restricted interaction set: the letter patterns a valid 1- or
/// 2-local term may carry. Identity terms (energy shifts) are always
/// allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetName {
    /// Local Z and X fields plus ZZ and XX couplings.
    Zzxx,
    /// Local Z and X fields plus ZX and XZ couplings.
    Zx,
    /// All nine pairwise products of real Pauli matrices: 1- and 2-local
    /// words over {X, Z}.
    RealSubset,
}

impl SetName {
    pub fn label(self) -> &'static str {
        match self {
            SetName::Zzxx => "ZZXX",
            SetName::Zx => "ZX",
            SetName::RealSubset => "REAL_SUBSET",
        }
    }
}

#[derive(Debug, Clone)]
pub struct InteractionSet {
    pub name: SetName,
    one_local: Vec<Letter>,
    two_local: Vec<(Letter, Letter)>,
}

impl InteractionSet {
    pub fn zzxx() -> InteractionSet {
        InteractionSet {
            name: SetName::Zzxx,
            one_local: vec![Letter::Z, Letter::X],
            two_local: vec![(Letter::Z, Letter::Z), (Letter::X, Letter::X)],
        }
    }

    pub fn zx() -> InteractionSet {
        InteractionSet {
            name: SetName::Zx,
            one_local: vec![Letter::Z, Letter::X],
            two_local: vec![(Letter::Z, Letter::X), (Letter::X, Letter::Z)],
        }
    }

    pub fn real_subset() -> InteractionSet {
        InteractionSet {
            name: SetName::RealSubset,
            one_local: vec![Letter::Z, Letter::X],
            two_local: vec![
                (Letter::Z, Letter::Z),
                (Letter::X, Letter::X),
                (Letter::Z, Letter::X),
                (Letter::X, Letter::Z),
            ],
        }
    }

    pub fn named(name: SetName) -> InteractionSet {
        match name {
            SetName::Zzxx => InteractionSet::zzxx(),
            SetName::Zx => InteractionSet::zx(),
            SetName::RealSubset => InteractionSet::real_subset(),
        }
    }

    /// Whether a single term's letter pattern is allowed.
    pub fn allows(&self, term: &PauliString) -> bool {
        let support = term.support();
        match support.len() {
            0 => true,
            1 => self.one_local.contains(&term.letters()[support[0] - 1]),
            2 => {
                let a = term.letters()[support[0] - 1];
                let b = term.letters()[support[1] - 1];
                self.two_local.contains(&(a, b))
            }
            _ => false,
        }
    }

    /// Violating terms of a canonicalized operator; empty means pass.
    pub fn validate(&self, h: &OperatorSum) -> Vec<PauliString> {
        h.terms()
            .iter()
            .filter(|t| !self.allows(t))
            .cloned()
            .collect()
    }
}

/// Single-qubit state kept by a subspace restriction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeptState {
    /// z-basis |0>
    Zero,
    /// z-basis |1>
    One,
    /// x-basis |+>
    Plus,
    /// x-basis |->
    Minus,
}

impl KeptState {
    /// The orthogonal state in the same basis.
    pub fn complement(self) -> KeptState {
        match self {
            KeptState::Zero => KeptState::One,
            KeptState::One => KeptState::Zero,
            KeptState::Plus => KeptState::Minus,
            KeptState::Minus => KeptState::Plus,
        }
    }
}

/// Identifies one qubit and the basis state it is pinned to; the kept
/// subspace is spanned by the remaining qubits.
#[derive(Debug, Clone, Copy)]
pub struct ProjectorSpec {
    /// 1-based qubit index.
    pub qubit: usize,
    pub keep: KeptState,
}

impl ProjectorSpec {
    pub fn new(qubit: usize, keep: KeptState) -> ProjectorSpec {
        ProjectorSpec { qubit, keep }
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.qubit == 0 || self.qubit > n {
            return Err(Error::Projector(format!(
                "qubit {} out of range 1..={n}",
                self.qubit
            )));
        }
        if n < 2 {
            return Err(Error::Projector(
                "restriction needs at least 2 qubits".into(),
            ));
        }
        Ok(())
    }

    /// `<keep| letter |keep>` for a letter at the pinned qubit.
    fn weight(&self, l: Letter) -> f64 {
        match (self.keep, l) {
            (_, Letter::I) => 1.0,
            (KeptState::Zero, Letter::Z) => 1.0,
            (KeptState::One, Letter::Z) => -1.0,
            (KeptState::Plus, Letter::X) => 1.0,
            (KeptState::Minus, Letter::X) => -1.0,
            _ => 0.0,
        }
    }
}

/// Project an operator onto the kept subspace, `P H P` expressed on the
/// remaining qubits. Terms whose letter at the pinned qubit has zero
/// expectation in the kept state drop out.
pub fn restrict_operator(h: &OperatorSum, spec: ProjectorSpec) -> Result<OperatorSum> {
    spec.check(h.n())?;
    let mut terms = Vec::new();
    for t in h.terms() {
        let w = spec.weight(t.letters()[spec.qubit - 1]);
        if w == 0.0 {
            continue;
        }
        let letters: Vec<Letter> = t
            .letters()
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != spec.qubit - 1)
            .map(|(_, &l)| l)
            .collect();
        terms.push(PauliString::new(w * t.coefficient, letters)?);
    }
    OperatorSum::new(h.n() - 1, terms)
}

/// Index of the full-space basis state obtained by inserting `bit` for the
/// pinned qubit into the reduced index `sub`.
fn insert_bit(sub: usize, n: usize, qubit: usize, bit: usize) -> usize {
    let low_bits = n - qubit; // bits below the pinned position
    let high = sub >> low_bits;
    let low = sub & ((1 << low_bits) - 1);
    (high << (low_bits + 1)) | (bit << low_bits) | low
}

/// Project a dense matrix on `n` qubits onto the kept subspace.
pub fn restrict_matrix(m: &DMatrix<f64>, n: usize, spec: ProjectorSpec) -> Result<DMatrix<f64>> {
    spec.check(n)?;
    let dim = 1usize << n;
    if m.nrows() != dim || m.ncols() != dim {
        return Err(Error::QubitMismatch(format!(
            "matrix is {}x{}, expected {dim}x{dim}",
            m.nrows(),
            m.ncols()
        )));
    }
    let sub_dim = dim / 2;
    let mut out = DMatrix::<f64>::zeros(sub_dim, sub_dim);
    match spec.keep {
        KeptState::Zero | KeptState::One => {
            let bit = if spec.keep == KeptState::Zero { 0 } else { 1 };
            for r in 0..sub_dim {
                let fr = insert_bit(r, n, spec.qubit, bit);
                for c in 0..sub_dim {
                    out[(r, c)] = m[(fr, insert_bit(c, n, spec.qubit, bit))];
                }
            }
        }
        KeptState::Plus | KeptState::Minus => {
            let s = if spec.keep == KeptState::Plus {
                1.0
            } else {
                -1.0
            };
            for r in 0..sub_dim {
                let r0 = insert_bit(r, n, spec.qubit, 0);
                let r1 = insert_bit(r, n, spec.qubit, 1);
                for c in 0..sub_dim {
                    let c0 = insert_bit(c, n, spec.qubit, 0);
                    let c1 = insert_bit(c, n, spec.qubit, 1);
                    out[(r, c)] =
                        0.5 * (m[(r0, c0)] + s * m[(r0, c1)] + s * m[(r1, c0)] + m[(r1, c1)]);
                }
            }
        }
    }
    Ok(out)
}

/// The kept state as a 2-vector in the computational basis.
pub fn kept_state_vector(keep: KeptState) -> DVector<f64> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    match keep {
        KeptState::Zero => DVector::from_vec(vec![1.0, 0.0]),
        KeptState::One => DVector::from_vec(vec![0.0, 1.0]),
        KeptState::Plus => DVector::from_vec(vec![r, r]),
        KeptState::Minus => DVector::from_vec(vec![r, -r]),
    }
}

/// Lift a reduced state to the full space with the pinned qubit in the kept
/// state.
pub fn lift_state(sub: &DVector<f64>, n: usize, spec: ProjectorSpec) -> Result<DVector<f64>> {
    spec.check(n)?;
    let dim = 1usize << n;
    if sub.len() * 2 != dim {
        return Err(Error::QubitMismatch(format!(
            "reduced state has dimension {}, expected {}",
            sub.len(),
            dim / 2
        )));
    }
    let local = kept_state_vector(spec.keep);
    let mut out = DVector::<f64>::zeros(dim);
    for s in 0..sub.len() {
        out[insert_bit(s, n, spec.qubit, 0)] += local[0] * sub[s];
        out[insert_bit(s, n, spec.qubit, 1)] += local[1] * sub[s];
    }
    Ok(out)
}

/// Expand a dense matrix into Pauli coefficients, `coeff(P) = tr(M P) / 2^n`.
/// Only meaningful for matrices with a real expansion; errors if any
/// coefficient has an imaginary part above 1e-10.
pub fn pauli_decompose(m: &DMatrix<f64>, n: usize) -> Result<OperatorSum> {
    let dim = 1usize << n;
    if m.nrows() != dim || m.ncols() != dim {
        return Err(Error::QubitMismatch(format!(
            "matrix is {}x{}, expected {dim}x{dim}",
            m.nrows(),
            m.ncols()
        )));
    }
    if n > 8 {
        return Err(Error::Invalid("pauli_decompose capped at 8 qubits".into()));
    }
    let mut terms = Vec::new();
    let letters = [Letter::I, Letter::X, Letter::Y, Letter::Z];
    let total = 4usize.pow(n as u32);
    for code in 0..total {
        let mut word = Vec::with_capacity(n);
        let mut c = code;
        for _ in 0..n {
            word.push(letters[c % 4]);
            c /= 4;
        }
        word.reverse();
        let p = PauliString {
            coefficient: 1.0,
            letters: word,
        };
        let mask = p.flip_mask();
        // tr(M P) = sum_b M[b, b ^ mask] * phase(P acting on column b ^ mask)
        let mut tr = Complex64::new(0.0, 0.0);
        for b in 0..dim {
            let col = b ^ mask;
            tr += Complex64::new(m[(b, col)], 0.0) * p.basis_phase(col);
        }
        let coeff = tr / dim as f64;
        if coeff.im.abs() > 1e-10 {
            return Err(Error::NonReal(p.word()));
        }
        if coeff.re.abs() > 1e-13 {
            terms.push(PauliString {
                coefficient: coeff.re,
                letters: p.letters,
            });
        }
    }
    OperatorSum::new(n, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn op(n: usize, terms: Vec<PauliString>) -> OperatorSum {
        OperatorSum::new(n, terms).unwrap()
    }

    fn term(c: f64, w: &str) -> PauliString {
        PauliString::new(
            c,
            w.chars().map(|ch| Letter::from_char(ch).unwrap()).collect(),
        )
        .unwrap()
    }

    fn random_op(rng: &mut ChaCha8Rng, n: usize, k: usize, real_only: bool) -> OperatorSum {
        let letters = if real_only {
            vec![Letter::I, Letter::X, Letter::Z]
        } else {
            vec![Letter::I, Letter::X, Letter::Y, Letter::Z]
        };
        let terms = (0..k)
            .map(|_| {
                let word: Vec<Letter> = (0..n).map(|_| *letters.choose(rng).unwrap()).collect();
                PauliString::new(rng.gen_range(-2.0..2.0), word).unwrap()
            })
            .collect();
        op(n, terms)
    }

    #[test]
    fn realize_z_is_diag() {
        let h = op(1, vec![term(1.0, "Z")]);
        let m = h.to_dense().unwrap();
        assert_eq!(m[(0, 0)], 1.0);
        assert_eq!(m[(1, 1)], -1.0);
        assert_eq!(m[(0, 1)], 0.0);
        assert_eq!(m[(1, 0)], 0.0);
    }

    #[test]
    fn realize_zx_on_00() {
        // ZX |00> = +|01>
        let h = op(2, vec![term(1.0, "ZX")]);
        let m = h.to_dense().unwrap();
        let e0 = DVector::from_vec(vec![1.0, 0.0, 0.0, 0.0]);
        let v = &m * &e0;
        assert_eq!(v[1], 1.0);
        assert_eq!(v.iter().filter(|&&x| x != 0.0).count(), 1);
    }

    #[test]
    fn realize_is_linear_on_basis_example() {
        // (Z + X) |0> = |0> + |1>
        let h = op(1, vec![term(1.0, "Z"), term(1.0, "X")]);
        let v = h.apply(&DVector::from_vec(vec![1.0, 0.0])).unwrap();
        assert_eq!(v[0], 1.0);
        assert_eq!(v[1], 1.0);
    }

    #[test]
    fn canonicalize_merges_and_cancels() {
        let h = op(2, vec![term(0.5, "ZI"), term(0.5, "ZI")]).canonicalize();
        assert_eq!(h.terms().len(), 1);
        assert_eq!(h.terms()[0].coefficient, 1.0);
        assert_eq!(h.terms()[0].word(), "ZI");

        let z = op(2, vec![term(1.0, "XX"), term(-1.0, "XX")]).canonicalize();
        assert!(z.terms().is_empty());

        let u = op(2, vec![term(2.0, "IZ"), term(3.0, "XI")]).canonicalize();
        assert_eq!(u.terms().len(), 2);
        // lexicographic: IZ < XI
        assert_eq!(u.terms()[0].word(), "IZ");
        assert_eq!(u.terms()[1].word(), "XI");
    }

    #[test]
    fn canonicalize_is_idempotent_on_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let h = random_op(&mut rng, 3, 8, false);
            let once = h.canonicalize();
            let twice = once.canonicalize();
            assert_eq!(once, twice);
        }
    }

    #[test]
    fn realize_is_linear_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..20 {
            let h1 = random_op(&mut rng, 3, 4, true);
            let h2 = random_op(&mut rng, 3, 4, true);
            let (a, b) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let lhs = h1
                .scaled(a)
                .plus(&h2.scaled(b))
                .unwrap()
                .to_dense()
                .unwrap();
            let rhs = h1.to_dense().unwrap() * a + h2.to_dense().unwrap() * b;
            assert!((lhs - rhs).abs().max() < 1e-12);
        }
    }

    #[test]
    fn yfree_realization_is_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..20 {
            let h = random_op(&mut rng, 4, 6, true);
            let m = h.to_dense().unwrap();
            assert!((&m - m.transpose()).abs().max() < 1e-12);
            // complex realization must be entrywise real
            let mc = h.to_dense_complex().unwrap();
            let max_im = mc.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
            assert_eq!(max_im, 0.0);
        }
    }

    #[test]
    fn single_qubit_multiplication_table() {
        let letters = [Letter::I, Letter::X, Letter::Y, Letter::Z];
        for &a in &letters {
            for &b in &letters {
                let (phase, prod) = a.multiply(b);
                let lhs = a.matrix() * b.matrix();
                let rhs = prod.matrix() * phase;
                for r in 0..2 {
                    for c in 0..2 {
                        assert!((lhs[(r, c)] - rhs[(r, c)]).norm() < 1e-15, "{a:?} {b:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn string_products_match_matrix_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..20 {
            let a = random_op(&mut rng, 2, 1, false).terms()[0].clone();
            let b = random_op(&mut rng, 2, 1, false).terms()[0].clone();
            let (phase, prod) = a.multiply(&b).unwrap();
            let lhs = op(2, vec![a]).to_dense_complex().unwrap()
                * op(2, vec![b]).to_dense_complex().unwrap();
            let rhs = op(2, vec![prod]).to_dense_complex().unwrap() * phase;
            let err = (lhs - rhs).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(err < 1e-12);
        }
    }

    #[test]
    fn odd_y_is_flagged_and_refused_by_real_paths() {
        let t = term(1.0, "YI");
        assert!(!t.is_real());
        assert!(term(1.0, "YY").is_real());
        let h = op(2, vec![term(1.0, "YI")]);
        assert!(matches!(h.to_dense(), Err(Error::NonReal(_))));
        assert!(h.to_dense_complex().is_ok());
    }

    #[test]
    fn validation_verdicts() {
        let zx = InteractionSet::zx();
        let pass = op(2, vec![term(0.7, "ZX")]).canonicalize();
        assert!(zx.validate(&pass).is_empty());

        let fail = op(2, vec![term(0.7, "ZZ")]).canonicalize();
        let v = zx.validate(&fail);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].word(), "ZZ");

        let real = InteractionSet::real_subset();
        let yy = op(2, vec![term(0.3, "YY")]).canonicalize();
        assert_eq!(real.validate(&yy).len(), 1);

        // identity terms are energy shifts, always allowed
        let id = op(2, vec![term(4.2, "II")]).canonicalize();
        assert!(InteractionSet::zzxx().validate(&id).is_empty());

        // 3-local is never allowed
        let three = op(3, vec![term(1.0, "ZZZ")]).canonicalize();
        assert_eq!(InteractionSet::zzxx().validate(&three).len(), 1);
    }

    #[test]
    fn restriction_examples() {
        // Z_k, keep |0>_k: identity * (+1) on the rest
        let h = op(2, vec![term(1.0, "IZ")]);
        let r = restrict_operator(&h, ProjectorSpec::new(2, KeptState::Zero)).unwrap();
        let rc = r.canonicalize();
        assert_eq!(rc.terms().len(), 1);
        assert_eq!(rc.terms()[0].word(), "I");
        assert_eq!(rc.terms()[0].coefficient, 1.0);

        // X_k, keep |0>_k: zero
        let h = op(2, vec![term(1.0, "IX")]);
        let r = restrict_operator(&h, ProjectorSpec::new(2, KeptState::Zero)).unwrap();
        assert!(r.canonicalize().terms().is_empty());
    }

    #[test]
    fn matrix_restriction_agrees_with_operator_restriction() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for qubit in 1..=3usize {
            for keep in [
                KeptState::Zero,
                KeptState::One,
                KeptState::Plus,
                KeptState::Minus,
            ] {
                let h = random_op(&mut rng, 3, 6, true);
                let spec = ProjectorSpec::new(qubit, keep);
                let via_op = restrict_operator(&h, spec).unwrap().to_dense().unwrap();
                let via_mat = restrict_matrix(&h.to_dense().unwrap(), 3, spec).unwrap();
                assert!((via_op - via_mat).abs().max() < 1e-12);
            }
        }
    }

    #[test]
    fn malformed_projector_spec() {
        let h = op(2, vec![term(1.0, "ZI")]);
        assert!(restrict_operator(&h, ProjectorSpec::new(0, KeptState::Zero)).is_err());
        assert!(restrict_operator(&h, ProjectorSpec::new(3, KeptState::Zero)).is_err());
    }

    #[test]
    fn lift_state_is_an_isometry() {
        // lifted reduced basis states stay orthonormal, at any pin position
        for qubit in 1..=3usize {
            for keep in [
                KeptState::Zero,
                KeptState::One,
                KeptState::Plus,
                KeptState::Minus,
            ] {
                let spec = ProjectorSpec::new(qubit, keep);
                let lifted: Vec<DVector<f64>> = (0..4)
                    .map(|s| {
                        let mut e = DVector::zeros(4);
                        e[s] = 1.0;
                        lift_state(&e, 3, spec).unwrap()
                    })
                    .collect();
                for a in 0..4 {
                    for b in 0..4 {
                        let expect = if a == b { 1.0 } else { 0.0 };
                        assert!((lifted[a].dot(&lifted[b]) - expect).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn parse_and_serialize_roundtrip() {
        let text = "# example\n0.5 ZIX\n-0.25 IXX\n1 IIZ\n\n";
        let h = OperatorSum::parse(text).unwrap();
        assert_eq!(h.n(), 3);
        assert_eq!(h.terms().len(), 3);
        let re = OperatorSum::parse(&h.serialize(&[])).unwrap();
        assert_eq!(h, re);
    }

    #[test]
    fn roundtrip_is_lossless_for_15_digit_coefficients() {
        let text = "0.123456789012345 ZX\n-9.87654321098765e-3 XZ\n";
        let h = OperatorSum::parse(text).unwrap();
        let re = OperatorSum::parse(&h.serialize(&[])).unwrap();
        for (a, b) in h.terms().iter().zip(re.terms()) {
            assert_eq!(a.coefficient, b.coefficient);
        }
    }

    #[test]
    fn zero_operator_roundtrips_via_header() {
        let z = OperatorSum::zero(3);
        let re = OperatorSum::parse(&z.serialize(&[])).unwrap();
        assert_eq!(re.n(), 3);
        assert!(re.terms().is_empty());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match OperatorSum::parse("0.5 ZI\noops\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(OperatorSum::parse("0.5 ZQ\n").is_err());
        assert!(OperatorSum::parse("0.5 ZI\n0.5 ZII\n").is_err());
        assert!(OperatorSum::parse("").is_err());
    }

    #[test]
    fn dense_limit_is_enforced() {
        let h = OperatorSum::zero(DEFAULT_DENSE_LIMIT + 1);
        assert!(matches!(h.to_dense(), Err(Error::DenseLimit { .. })));
    }

    #[test]
    fn apply_matches_dense_matrix_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for _ in 0..10 {
            let h = random_op(&mut rng, 4, 6, true);
            let m = h.to_dense().unwrap();
            let v = DVector::from_fn(16, |_, _| rng.gen_range(-1.0..1.0));
            let lhs = h.apply(&v).unwrap();
            let rhs = &m * &v;
            assert!((lhs - rhs).abs().max() < 1e-12);
        }
    }

    #[test]
    fn decompose_inverts_realization() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            let h = random_op(&mut rng, 3, 5, true).canonicalize();
            let back = pauli_decompose(&h.to_dense().unwrap(), 3)
                .unwrap()
                .canonicalize();
            assert_eq!(h.terms().len(), back.terms().len());
            for (a, b) in h.terms().iter().zip(back.terms()) {
                assert_eq!(a.word(), b.word());
                assert!((a.coefficient - b.coefficient).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn embed_places_letters() {
        let h = op(2, vec![term(1.5, "ZX")]);
        let e = h.embed(1, 4).unwrap();
        assert_eq!(e.terms()[0].word(), "IZXI");
        assert_eq!(e.n(), 4);
    }
}

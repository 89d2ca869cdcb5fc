//! Mediator-qubit gadgets: realize a 2-local coupling missing from a
//! restricted interaction set as the low-energy effective interaction of a
//! penalized three-qubit construction, and compile whole Hamiltonians into
//! the ZZXX or ZX sets.
//!
//! Three gadget kinds are provided:
//!
//! - `ZxFromZzxx`: a Z_i X_j coupling from ZZXX terms. The ancilla `k` is
//!   pinned to |0> by a penalty `delta |1><1|_k`; the perturbation is
//!   `V1 = [Y + D(X_j + 1)] - A Z_i (x) |0><0|_k`,
//!   `V2 = B(X_j + 1) (x) X_k`, `V3 = C Z_i (x) |1><1|_k`. The X_j factor
//!   riding along on virtual excitations combines with the V3 field at
//!   third order into the product coupling. Parameters:
//!   `A = alpha`, `B = (delta/Ebar)^(2/3) Ebar`,
//!   `C = (alpha/2)(delta/Ebar)^(2/3)`, `D = 2 delta^(1/3) Ebar^(2/3)`,
//!   which satisfy `2 B^2 C / delta^2 = alpha` exactly, so the local Z_i
//!   field generated at third order cancels `-A Z_i` at z = 0. The penalty
//!   scale follows `delta = Ebar eps^-3`.
//! - `ZzFromZx`: a Z_i Z_j coupling from ZX terms at second order, with
//!   `V1 = Y + A |0><0|_k`, `V2 = B(Z_i - Z_j) (x) X_k`, `A = |beta|`,
//!   `B = sqrt(|beta| delta / 2)` and `delta = Ebar eps^-1`. Negative
//!   couplings flip the relative sign in V2 to `(Z_i + Z_j)`, which flips
//!   the induced coupling sign; this extends the positive-coupling
//!   construction.
//! - `XxFromZx`: the same with x and z roles exchanged; the penalty is in
//!   the x basis, `(delta/2)(1 - X_k)`, pinning the ancilla to |+>.
//!
//! Each instance records a declared energy shift: the identity part of its
//! perturbation (`D` for the first kind, `A/2` for the other two). The
//! compiler drops exactly that identity from the emitted term list and
//! ledgers it, so `emitted + shift * 1 = penalty + perturbation` per gadget.

use crate::pauli::{
    InteractionSet, KeptState, Letter, OperatorSum, PauliString, ProjectorSpec, SetName,
};
use crate::{Error, Result};

/// Which coupling a gadget manufactures, and from which native set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GadgetKind {
    ZxFromZzxx,
    ZzFromZx,
    XxFromZx,
}

impl GadgetKind {
    pub fn label(self) -> &'static str {
        match self {
            GadgetKind::ZxFromZzxx => "zx-from-zzxx",
            GadgetKind::ZzFromZx => "zz-from-zx",
            GadgetKind::XxFromZx => "xx-from-zx",
        }
    }

    pub fn parse(s: &str) -> Result<GadgetKind> {
        match s {
            "zx-from-zzxx" | "zx_from_zzxx" => Ok(GadgetKind::ZxFromZzxx),
            "zz-from-zx" | "zz_from_zx" => Ok(GadgetKind::ZzFromZx),
            "xx-from-zx" | "xx_from_zx" => Ok(GadgetKind::XxFromZx),
            _ => Err(Error::Invalid(format!("unknown gadget kind `{s}`"))),
        }
    }

    /// Native interaction set of the gadget's physical terms.
    pub fn native_set(self) -> InteractionSet {
        match self {
            GadgetKind::ZxFromZzxx => InteractionSet::zzxx(),
            GadgetKind::ZzFromZx | GadgetKind::XxFromZx => InteractionSet::zx(),
        }
    }

    /// Exponent r in the penalty-scale rule `delta = Ebar eps^-r`.
    pub fn penalty_exponent(self) -> i32 {
        match self {
            GadgetKind::ZxFromZzxx => 3,
            GadgetKind::ZzFromZx | GadgetKind::XxFromZx => 1,
        }
    }

    /// Penalty scale for a requested error budget.
    pub fn delta_for(self, eps: f64, ebar: f64) -> f64 {
        ebar * eps.powi(-self.penalty_exponent())
    }
}

/// Coupling strengths, penalty gap, energy scale, error budget and
/// evaluation point of one gadget instance. `c` and `d` are zero for the
/// second-order kinds.
#[derive(Debug, Clone, Copy)]
pub struct GadgetParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub delta: f64,
    pub ebar: f64,
    pub eps: f64,
    pub z: f64,
}

impl GadgetParams {
    fn check(&self) -> Result<()> {
        if self.delta.is_nan() || self.delta <= 0.0 || self.ebar.is_nan() || self.ebar <= 0.0 {
            return Err(Error::Invalid("delta and ebar must be positive".into()));
        }
        if self.eps.is_nan() || self.eps <= 0.0 || self.eps >= 1.0 {
            return Err(Error::DeltaBound {
                delta: self.delta,
                ebar: self.ebar,
            });
        }
        Ok(())
    }
}

/// One instantiated gadget: penalty, perturbation parts, parameter block
/// and bookkeeping.
#[derive(Debug, Clone)]
pub struct GadgetInstance {
    pub kind: GadgetKind,
    /// System qubits the target coupling acts on (1-based).
    pub i: usize,
    pub j: usize,
    /// Ancilla qubit.
    pub k: usize,
    pub params: GadgetParams,
    /// Penalty Hamiltonian, `delta` times a rank-one ancilla projector.
    pub hp: OperatorSum,
    /// Perturbation parts (V1, V2[, V3]); their sum is the full V.
    pub v_parts: Vec<OperatorSum>,
    /// Coefficient of the coupling being manufactured.
    pub target_coefficient: f64,
    /// Identity energy omitted from compiled output, see module docs.
    pub declared_shift: f64,
}

impl GadgetInstance {
    /// Total qubit count of the instance operators.
    pub fn n(&self) -> usize {
        self.hp.n()
    }

    /// The full perturbation `V = sum of parts`.
    pub fn v(&self) -> OperatorSum {
        let mut v = OperatorSum::zero(self.n());
        for part in &self.v_parts {
            v = v.plus(part).unwrap();
        }
        v.canonicalize()
    }

    /// The physical Hamiltonian `Hp + V`.
    pub fn full(&self) -> OperatorSum {
        self.hp.plus(&self.v()).unwrap().canonicalize()
    }

    /// The target coupling as an operator on the same register.
    pub fn target_operator(&self) -> OperatorSum {
        let (li, lj) = match self.kind {
            GadgetKind::ZxFromZzxx => (Letter::Z, Letter::X),
            GadgetKind::ZzFromZx => (Letter::Z, Letter::Z),
            GadgetKind::XxFromZx => (Letter::X, Letter::X),
        };
        let term = PauliString::place(
            self.n(),
            &[(self.i, li), (self.j, lj)],
            self.target_coefficient,
        )
        .unwrap();
        OperatorSum::new(self.n(), vec![term]).unwrap()
    }

    /// Ancilla state spanning the low-energy subspace.
    pub fn low_state(&self) -> KeptState {
        match self.kind {
            GadgetKind::ZxFromZzxx | GadgetKind::ZzFromZx => KeptState::Zero,
            GadgetKind::XxFromZx => KeptState::Plus,
        }
    }

    /// Projector spec of the penalty partition (keeps the low subspace).
    pub fn partition(&self) -> ProjectorSpec {
        ProjectorSpec::new(self.k, self.low_state())
    }
}

fn check_gadget_geometry(y: &OperatorSum, i: usize, j: usize, k: usize) -> Result<()> {
    let n = y.n();
    for q in [i, j, k] {
        if q == 0 || q > n {
            return Err(Error::QubitRange { index: q, n });
        }
    }
    if i == j || i == k || j == k {
        return Err(Error::Invalid(format!(
            "gadget qubits must be distinct, got {i},{j},{k}"
        )));
    }
    Ok(())
}

/// A pre-existing interaction must live on the gadget's system pair and in
/// its native set.
fn check_background(y: &OperatorSum, i: usize, j: usize, set: &InteractionSet) -> Result<()> {
    let yc = y.canonicalize();
    for t in yc.terms() {
        if t.support().iter().any(|&q| q != i && q != j) {
            return Err(Error::Invalid(format!(
                "background term {} acts outside qubits {i},{j}",
                t.word()
            )));
        }
    }
    let violations = set.validate(&yc);
    if !violations.is_empty() {
        return Err(Error::InteractionViolation {
            set: set.name.label().to_string(),
            terms: violations
                .iter()
                .map(|t| t.word())
                .collect::<Vec<_>>()
                .join(", "),
        });
    }
    Ok(())
}

fn check_delta(delta: f64, ebar: f64) -> Result<()> {
    if ebar.is_nan() || ebar <= 0.0 {
        return Err(Error::Invalid("ebar must be positive".into()));
    }
    if delta.is_nan() || delta <= ebar {
        return Err(Error::DeltaBound { delta, ebar });
    }
    Ok(())
}

/// Build the third-order gadget producing `alpha Z_i X_j` from ZZXX terms.
pub fn zx_from_zzxx(
    alpha: f64,
    i: usize,
    j: usize,
    k: usize,
    delta: f64,
    ebar: f64,
    y: &OperatorSum,
) -> Result<GadgetInstance> {
    check_gadget_geometry(y, i, j, k)?;
    check_background(y, i, j, &InteractionSet::zzxx())?;
    check_delta(delta, ebar)?;
    let n = y.n();

    let ratio = (delta / ebar).powf(2.0 / 3.0);
    let params = GadgetParams {
        a: alpha,
        b: ratio * ebar,
        c: 0.5 * alpha * ratio,
        d: 2.0 * delta.powf(1.0 / 3.0) * ebar.powf(2.0 / 3.0),
        delta,
        ebar,
        eps: (ebar / delta).powf(1.0 / 3.0),
        z: 0.0,
    };
    params.check()?;

    let hp = OperatorSum::new(
        n,
        vec![
            PauliString::identity(n, 0.5 * delta),
            PauliString::single(n, k, Letter::Z, -0.5 * delta)?,
        ],
    )?;

    // V1 = [Y + D(X_j + 1)] (x) 1_k  -  A Z_i (x) |0><0|_k
    let mut v1_terms = y.canonicalize().terms().to_vec();
    v1_terms.push(PauliString::single(n, j, Letter::X, params.d)?);
    v1_terms.push(PauliString::identity(n, params.d));
    v1_terms.push(PauliString::single(n, i, Letter::Z, -0.5 * params.a)?);
    v1_terms.push(PauliString::place(
        n,
        &[(i, Letter::Z), (k, Letter::Z)],
        -0.5 * params.a,
    )?);
    let v1 = OperatorSum::new(n, v1_terms)?;

    // V2 = B (X_j + 1) (x) X_k
    let v2 = OperatorSum::new(
        n,
        vec![
            PauliString::place(n, &[(j, Letter::X), (k, Letter::X)], params.b)?,
            PauliString::single(n, k, Letter::X, params.b)?,
        ],
    )?;

    // V3 = C Z_i (x) |1><1|_k
    let v3 = OperatorSum::new(
        n,
        vec![
            PauliString::single(n, i, Letter::Z, 0.5 * params.c)?,
            PauliString::place(n, &[(i, Letter::Z), (k, Letter::Z)], -0.5 * params.c)?,
        ],
    )?;

    Ok(GadgetInstance {
        kind: GadgetKind::ZxFromZzxx,
        i,
        j,
        k,
        declared_shift: params.d,
        params,
        hp,
        v_parts: vec![v1, v2, v3],
        target_coefficient: alpha,
    })
}

/// Shared body of the two second-order gadgets: the penalty basis is z for
/// the ZZ coupling and x for the XX coupling.
#[allow(clippy::too_many_arguments)]
fn second_order_gadget(
    kind: GadgetKind,
    coefficient: f64,
    i: usize,
    j: usize,
    k: usize,
    delta: f64,
    ebar: f64,
    y: &OperatorSum,
) -> Result<GadgetInstance> {
    check_gadget_geometry(y, i, j, k)?;
    check_background(y, i, j, &InteractionSet::zx())?;
    check_delta(delta, ebar)?;
    if coefficient == 0.0 {
        return Err(Error::Invalid(
            "coupling coefficient must be nonzero".into(),
        ));
    }
    let n = y.n();
    let (field, cross) = match kind {
        GadgetKind::ZzFromZx => (Letter::Z, Letter::X),
        GadgetKind::XxFromZx => (Letter::X, Letter::Z),
        GadgetKind::ZxFromZzxx => unreachable!(),
    };

    let params = GadgetParams {
        a: coefficient.abs(),
        b: (coefficient.abs() * delta / 2.0).sqrt(),
        c: 0.0,
        d: 0.0,
        delta,
        ebar,
        eps: ebar / delta,
        z: 0.0,
    };
    params.check()?;
    let sign = coefficient.signum();

    // Hp = (delta/2)(1 - field_k), the rank-one penalty in the chosen basis
    let hp = OperatorSum::new(
        n,
        vec![
            PauliString::identity(n, 0.5 * delta),
            PauliString::single(n, k, field, -0.5 * delta)?,
        ],
    )?;

    // V1 = Y + A |low><low|_k
    let mut v1_terms = y.canonicalize().terms().to_vec();
    v1_terms.push(PauliString::identity(n, 0.5 * params.a));
    v1_terms.push(PauliString::single(n, k, field, 0.5 * params.a)?);
    let v1 = OperatorSum::new(n, v1_terms)?;

    // V2 = B (field_i -+ field_j) (x) cross_k; the minus sign realizes
    // positive couplings, the plus sign negative ones.
    let v2 = OperatorSum::new(
        n,
        vec![
            PauliString::place(n, &[(i, field), (k, cross)], params.b)?,
            PauliString::place(n, &[(j, field), (k, cross)], -sign * params.b)?,
        ],
    )?;

    Ok(GadgetInstance {
        kind,
        i,
        j,
        k,
        declared_shift: 0.5 * params.a,
        params,
        hp,
        v_parts: vec![v1, v2],
        target_coefficient: coefficient,
    })
}

/// Build the second-order gadget producing `beta Z_i Z_j` from ZX terms.
pub fn zz_from_zx(
    beta: f64,
    i: usize,
    j: usize,
    k: usize,
    delta: f64,
    ebar: f64,
    y: &OperatorSum,
) -> Result<GadgetInstance> {
    second_order_gadget(GadgetKind::ZzFromZx, beta, i, j, k, delta, ebar, y)
}

/// Build the second-order gadget producing `gamma X_i X_j` from ZX terms.
pub fn xx_from_zx(
    gamma: f64,
    i: usize,
    j: usize,
    k: usize,
    delta: f64,
    ebar: f64,
    y: &OperatorSum,
) -> Result<GadgetInstance> {
    second_order_gadget(GadgetKind::XxFromZx, gamma, i, j, k, delta, ebar, y)
}

/// Coefficient table of a 2-local background interaction on the gadget's
/// system pair. `j_ij` and `k_ij` are the native 2-local couplings of the
/// model at hand (ZZ/XX for ZZXX, ZX/XZ for ZX).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Couplings {
    pub h_i: f64,
    pub h_j: f64,
    pub delta_i: f64,
    pub delta_j: f64,
    pub j_ij: f64,
    pub k_ij: f64,
}

impl Couplings {
    /// Read the table off a canonicalized background interaction.
    fn extract(y: &OperatorSum, i: usize, j: usize, set: SetName) -> Result<Couplings> {
        let mut c = Couplings {
            h_i: 0.0,
            h_j: 0.0,
            delta_i: 0.0,
            delta_j: 0.0,
            j_ij: 0.0,
            k_ij: 0.0,
        };
        for t in y.canonicalize().terms() {
            let support = t.support();
            match support.as_slice() {
                [] => {
                    return Err(Error::Invalid(
                        "identity term in background interaction is outside the dressing maps"
                            .into(),
                    ))
                }
                [q] if *q == i || *q == j => {
                    let l = t.letters()[q - 1];
                    let slot = match (l, *q == i) {
                        (Letter::Z, true) => &mut c.h_i,
                        (Letter::Z, false) => &mut c.h_j,
                        (Letter::X, true) => &mut c.delta_i,
                        (Letter::X, false) => &mut c.delta_j,
                        _ => {
                            return Err(Error::Invalid(format!(
                                "unexpected letter in {}",
                                t.word()
                            )))
                        }
                    };
                    *slot += t.coefficient;
                }
                [q] => return Err(Error::Invalid(format!("term on qubit {q} is off the pair"))),
                [p, q] => {
                    let (lp, lq) = (t.letters()[p - 1], t.letters()[q - 1]);
                    // orient the pattern as (letter at i, letter at j)
                    let (li, lj) = if *p == i { (lp, lq) } else { (lq, lp) };
                    let slot = match (set, li, lj) {
                        (SetName::Zzxx, Letter::Z, Letter::Z) => &mut c.j_ij,
                        (SetName::Zzxx, Letter::X, Letter::X) => &mut c.k_ij,
                        (SetName::Zx, Letter::Z, Letter::X) => &mut c.j_ij,
                        (SetName::Zx, Letter::X, Letter::Z) => &mut c.k_ij,
                        _ => {
                            return Err(Error::Invalid(format!(
                                "pattern {} is not native to {}",
                                t.word(),
                                set.label()
                            )))
                        }
                    };
                    *slot += t.coefficient;
                }
                _ => return Err(Error::Invalid(format!("{} is more than 2-local", t.word()))),
            }
        }
        Ok(c)
    }
}

/// Dressing of a background interaction by virtual excitations through the
/// penalized subspace: the modified coefficient table plus any induced
/// couplings outside it.
#[derive(Debug, Clone)]
pub struct DressedCouplings {
    pub couplings: Couplings,
    /// Induced constant energy offset.
    pub extra_identity: f64,
    /// Induced terms outside the native coefficient table (full-register
    /// strings).
    pub extra_terms: Vec<PauliString>,
}

/// Closed-form dressed coupling strengths for a gadget's background
/// interaction, evaluated at energy `z`.
///
/// For `ZxFromZzxx` every coefficient that commutes with the virtual-hop
/// factor `(X_j + 1)` is scaled by `1 + eta` with
/// `eta = 2 B^2 / (z - delta)^2`, the X_i and XX couplings mix, and two
/// extras appear: a constant `eta delta_j` and a coupling
/// `eta h_i Z_i X_j`. For the second-order kinds only the local fields in
/// the penalty basis are modified: `h -> h + eta (h_i - h_j)` and its
/// mirror image.
pub fn dressed_couplings(g: &GadgetInstance, y: &OperatorSum, z: f64) -> Result<DressedCouplings> {
    if y.n() != g.n() {
        return Err(Error::QubitMismatch(format!(
            "background on {} qubits, gadget register has {}",
            y.n(),
            g.n()
        )));
    }
    check_background(y, g.i, g.j, &g.kind.native_set())?;
    let set = g.kind.native_set().name;
    let c = Couplings::extract(y, g.i, g.j, set)?;
    let denom = z - g.params.delta;
    if denom == 0.0 {
        return Err(Error::SingularResolvent { z });
    }
    let eta = 2.0 * g.params.b * g.params.b / (denom * denom);

    match g.kind {
        GadgetKind::ZxFromZzxx => {
            let dressed = Couplings {
                h_i: c.h_i * (1.0 + eta),
                h_j: c.h_j,
                delta_i: c.delta_i * (1.0 + eta) + eta * c.k_ij,
                delta_j: c.delta_j * (1.0 + eta),
                j_ij: c.j_ij,
                k_ij: c.k_ij * (1.0 + eta) + eta * c.delta_i,
            };
            let mut extra_terms = Vec::new();
            if c.h_i != 0.0 {
                extra_terms.push(PauliString::place(
                    g.n(),
                    &[(g.i, Letter::Z), (g.j, Letter::X)],
                    eta * c.h_i,
                )?);
            }
            Ok(DressedCouplings {
                couplings: dressed,
                extra_identity: eta * c.delta_j,
                extra_terms,
            })
        }
        GadgetKind::ZzFromZx => Ok(DressedCouplings {
            couplings: Couplings {
                h_i: c.h_i + eta * (c.h_i - c.h_j),
                h_j: c.h_j + eta * (c.h_j - c.h_i),
                ..c
            },
            extra_identity: 0.0,
            extra_terms: Vec::new(),
        }),
        GadgetKind::XxFromZx => Ok(DressedCouplings {
            couplings: Couplings {
                delta_i: c.delta_i + eta * (c.delta_i - c.delta_j),
                delta_j: c.delta_j + eta * (c.delta_j - c.delta_i),
                ..c
            },
            extra_identity: 0.0,
            extra_terms: Vec::new(),
        }),
    }
}

/// A Hamiltonian compiled into a restricted interaction set: native terms
/// pass through, every other term is realized by one gadget on a fresh
/// ancilla following the system block.
#[derive(Debug, Clone)]
pub struct CompiledHamiltonian {
    /// Canonical, model-valid operator on `system_qubits + gadgets` qubits.
    pub hamiltonian: OperatorSum,
    pub model: SetName,
    pub system_qubits: usize,
    /// Replaced target terms (on the system register) with their ancillas.
    pub ancilla_map: Vec<(PauliString, usize)>,
    pub gadgets: Vec<GadgetInstance>,
    /// Sum of per-gadget declared shifts; `hamiltonian + shift * 1`
    /// reproduces the exact sum of penalties and perturbations.
    pub total_declared_shift: f64,
    pub eps: f64,
    pub ebar: f64,
}

impl CompiledHamiltonian {
    pub fn total_qubits(&self) -> usize {
        self.hamiltonian.n()
    }

    pub fn ancilla_count(&self) -> usize {
        self.gadgets.len()
    }

    /// The emitted operator with its declared shift restored.
    pub fn physical_hamiltonian(&self) -> OperatorSum {
        let id = PauliString::identity(self.total_qubits(), self.total_declared_shift);
        self.hamiltonian
            .plus(&OperatorSum::new(self.total_qubits(), vec![id]).unwrap())
            .unwrap()
            .canonicalize()
    }

    /// Sidecar report: per-gadget parameters, ancilla assignments, declared
    /// shifts.
    pub fn report(&self) -> String {
        use crate::fmt_sig12 as f;
        let mut out = String::new();
        out.push_str(&format!("model: {}\n", self.model.label().to_lowercase()));
        out.push_str(&format!("system qubits: {}\n", self.system_qubits));
        out.push_str(&format!("ancilla qubits: {}\n", self.ancilla_count()));
        out.push_str(&format!("eps: {}\n", f(self.eps)));
        out.push_str(&format!("ebar: {}\n", f(self.ebar)));
        out.push_str(&format!(
            "total declared shift: {}\n",
            f(self.total_declared_shift)
        ));
        for (idx, g) in self.gadgets.iter().enumerate() {
            let (term, anc) = &self.ancilla_map[idx];
            out.push_str(&format!(
                "gadget {}: kind={} target_term=\"{} {}\" i={} j={} ancilla={} delta={} A={} B={} C={} D={} shift={}\n",
                idx + 1,
                g.kind.label(),
                term.coefficient,
                term.word(),
                g.i,
                g.j,
                anc,
                f(g.params.delta),
                f(g.params.a),
                f(g.params.b),
                f(g.params.c),
                f(g.params.d),
                f(g.declared_shift),
            ));
        }
        out
    }
}

/// Compile a real-subset target Hamiltonian into the given model. Every
/// non-native term gets one gadget with a fresh ancilla; gadgets compose in
/// parallel with independent penalties, in target term order.
pub fn compile(
    target: &OperatorSum,
    model: SetName,
    eps: f64,
    ebar: f64,
) -> Result<CompiledHamiltonian> {
    if model == SetName::RealSubset {
        return Err(Error::Invalid(
            "compile target model must be zzxx or zx".into(),
        ));
    }
    if eps.is_nan() || eps <= 0.0 || eps >= 1.0 {
        return Err(Error::Invalid(format!("eps must lie in (0,1), got {eps}")));
    }
    if ebar.is_nan() || ebar <= 0.0 {
        return Err(Error::Invalid("ebar must be positive".into()));
    }
    let canon = target.canonicalize();
    let violations = InteractionSet::real_subset().validate(&canon);
    if !violations.is_empty() {
        return Err(Error::InteractionViolation {
            set: SetName::RealSubset.label().to_string(),
            terms: violations
                .iter()
                .map(|t| t.word())
                .collect::<Vec<_>>()
                .join(", "),
        });
    }

    let set = InteractionSet::named(model);
    let native: Vec<&PauliString> = canon.terms().iter().filter(|t| set.allows(t)).collect();
    let replaced: Vec<&PauliString> = canon.terms().iter().filter(|t| !set.allows(t)).collect();

    let n_sys = canon.n();
    let n_total = n_sys + replaced.len();

    let mut hamiltonian = OperatorSum::zero(n_total);
    for t in &native {
        let e = t.embed(0, n_total)?;
        hamiltonian = hamiltonian.plus(&OperatorSum::new(n_total, vec![e])?)?;
    }

    let mut gadgets = Vec::new();
    let mut ancilla_map = Vec::new();
    let mut total_declared_shift = 0.0;
    for (g_idx, term) in replaced.iter().enumerate() {
        let k = n_sys + g_idx + 1;
        let support = term.support();
        let (p, q) = (support[0], support[1]);
        let lp = term.letters()[p - 1];
        let y = OperatorSum::zero(n_total);
        let g = match model {
            SetName::Zzxx => {
                // one Z and one X letter; the Z qubit plays the role of i
                let delta = GadgetKind::ZxFromZzxx.delta_for(eps, ebar);
                let (zi, xj) = if lp == Letter::Z { (p, q) } else { (q, p) };
                zx_from_zzxx(term.coefficient, zi, xj, k, delta, ebar, &y)?
            }
            SetName::Zx => {
                let delta = GadgetKind::ZzFromZx.delta_for(eps, ebar);
                match lp {
                    Letter::Z => zz_from_zx(term.coefficient, p, q, k, delta, ebar, &y)?,
                    _ => xx_from_zx(term.coefficient, p, q, k, delta, ebar, &y)?,
                }
            }
            SetName::RealSubset => unreachable!(),
        };
        // emitted terms: penalty + perturbation minus the declared shift
        let mut emitted = g.hp.plus(&g.v())?;
        emitted = emitted.plus(&OperatorSum::new(
            n_total,
            vec![PauliString::identity(n_total, -g.declared_shift)],
        )?)?;
        hamiltonian = hamiltonian.plus(&emitted)?;
        total_declared_shift += g.declared_shift;
        ancilla_map.push(((*term).clone(), k));
        gadgets.push(g);
    }

    let hamiltonian = hamiltonian.canonicalize();
    debug_assert!(set.validate(&hamiltonian).is_empty());
    Ok(CompiledHamiltonian {
        hamiltonian,
        model,
        system_qubits: n_sys,
        ancilla_map,
        gadgets,
        total_declared_shift,
        eps,
        ebar,
    })
}

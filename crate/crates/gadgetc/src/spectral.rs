//! Eigenanalysis: dense and iterative extremal eigensolvers, exact and
//! series self-energy operators, adiabatic interpolation gap sweeps, and
//! ground-space overlaps.
//!
//! Operators realize densely up to the qubit cap of [`crate::pauli`]; above
//! it the extremal path runs a restarted Lanczos iteration with full
//! reorthogonalization on the term-wise matrix-vector product, deflating
//! converged pairs.

use nalgebra::{DMatrix, DVector};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::gadget::{self, GadgetInstance, GadgetKind};
use crate::pauli::{
    dense_qubit_limit, lift_state, restrict_matrix, Letter, OperatorSum, PauliString, ProjectorSpec,
};
use crate::{Error, Result};

/// Iterative-solver settings: residual tolerance, iteration budget factor
/// (times the dimension), and the Krylov subspace cap between restarts.
const LANCZOS_TOL: f64 = 1e-8;
const LANCZOS_MAX_ITER_FACTOR: usize = 10;
const LANCZOS_SUBSPACE: usize = 300;

/// Eigenvalues within this distance of the lowest count as ground space.
const DEGENERACY_TOL: f64 = 1e-9;

/// Certification record of one eigenanalysis.
#[derive(Debug, Clone)]
pub struct SpectralReport {
    /// The k requested lowest eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    pub ground_vector: DVector<f64>,
    /// First excitation gap, `lambda_1 - lambda_0`.
    pub gap: f64,
    /// Named squared overlaps `|<ref|psi_0>|^2`.
    pub overlaps: Vec<(String, f64)>,
    /// Named residual norms, one `|Hv - lambda v|` entry per pair.
    pub residuals: Vec<(String, f64)>,
}

/// Largest singular value.
pub fn operator_norm(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    m.clone().singular_values().max()
}

/// k lowest eigenpairs of a dense symmetric matrix.
pub fn eigensolve_dense(m: &DMatrix<f64>, k: usize) -> Result<SpectralReport> {
    let dim = m.nrows();
    if m.ncols() != dim || dim == 0 {
        return Err(Error::Invalid("eigensolve needs a square matrix".into()));
    }
    if (m - m.transpose()).abs().max() > 1e-10 {
        return Err(Error::NotHermitian);
    }
    let k = k.max(1).min(dim);
    let se = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].partial_cmp(&se.eigenvalues[b]).unwrap());

    let eigenvalues: Vec<f64> = order.iter().take(k).map(|&i| se.eigenvalues[i]).collect();
    let ground_vector: DVector<f64> = se.eigenvectors.column(order[0]).into();
    let gap = if dim >= 2 {
        se.eigenvalues[order[1]] - se.eigenvalues[order[0]]
    } else {
        0.0
    };

    let mut residuals = Vec::with_capacity(k);
    for (p, &idx) in order.iter().take(k).enumerate() {
        let v: DVector<f64> = se.eigenvectors.column(idx).into();
        let r = (m * &v - &v * se.eigenvalues[idx]).norm();
        residuals.push((format!("pair_{p}"), r));
    }
    Ok(SpectralReport {
        eigenvalues,
        ground_vector,
        gap,
        overlaps: Vec::new(),
        residuals,
    })
}

/// k lowest eigenpairs of an operator; dense up to the qubit cap, Lanczos
/// above it.
pub fn eigensolve(h: &OperatorSum, k: usize) -> Result<SpectralReport> {
    if let Some(bad) = h.terms().iter().find(|t| !t.is_real()) {
        return Err(Error::NonReal(bad.word()));
    }
    if h.n() <= dense_qubit_limit() {
        eigensolve_dense(&h.to_dense()?, k)
    } else {
        eigensolve_lanczos(h, k)
    }
}

/// Restarted, fully reorthogonalized Lanczos with deflation for k > 1.
pub fn eigensolve_lanczos(h: &OperatorSum, k: usize) -> Result<SpectralReport> {
    let dim = 1usize << h.n();
    let k_solve = k.max(2).min(dim);
    let apply = |v: &DVector<f64>| h.apply(v).expect("real operator");

    let mut values = Vec::with_capacity(k_solve);
    let mut vectors: Vec<DVector<f64>> = Vec::with_capacity(k_solve);
    let mut residuals = Vec::with_capacity(k_solve);
    for pair in 0..k_solve {
        let (lambda, vec, res) = lanczos_one(&apply, dim, &vectors, pair as u64)?;
        values.push(lambda);
        vectors.push(vec);
        residuals.push((format!("pair_{pair}"), res));
    }
    let gap = values[1.min(values.len() - 1)] - values[0];
    let k = k.max(1).min(dim);
    Ok(SpectralReport {
        eigenvalues: values[..k].to_vec(),
        ground_vector: vectors[0].clone(),
        gap: gap.max(0.0),
        overlaps: Vec::new(),
        residuals: residuals[..k].to_vec(),
    })
}

fn orthogonalize(v: &mut DVector<f64>, against: &[&DVector<f64>]) {
    // two passes of classical Gram-Schmidt
    for _ in 0..2 {
        for b in against {
            let c = b.dot(v);
            v.axpy(-c, b, 1.0);
        }
    }
}

/// Lowest eigenpair in the orthogonal complement of `deflated`.
fn lanczos_one(
    apply: &dyn Fn(&DVector<f64>) -> DVector<f64>,
    dim: usize,
    deflated: &[DVector<f64>],
    seed: u64,
) -> Result<(f64, DVector<f64>, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a2b_c0de ^ seed);
    let max_iter = LANCZOS_MAX_ITER_FACTOR * dim;
    let subspace = LANCZOS_SUBSPACE.min(dim - deflated.len());
    let mut total_iter = 0usize;

    let fresh_start = |rng: &mut ChaCha8Rng| -> DVector<f64> {
        let mut v = DVector::from_fn(dim, |_, _| rng.gen_range(-1.0..1.0));
        let refs: Vec<&DVector<f64>> = deflated.iter().collect();
        orthogonalize(&mut v, &refs);
        v /= v.norm();
        v
    };

    let mut v = fresh_start(&mut rng);
    loop {
        let mut basis: Vec<DVector<f64>> = vec![v.clone()];
        let mut alphas: Vec<f64> = Vec::new();
        let mut betas: Vec<f64> = Vec::new();

        loop {
            let m = basis.len();
            let mut w = apply(&basis[m - 1]);
            total_iter += 1;
            let alpha = basis[m - 1].dot(&w);
            alphas.push(alpha);
            let refs: Vec<&DVector<f64>> = deflated.iter().chain(basis.iter()).collect();
            orthogonalize(&mut w, &refs);
            let beta = w.norm();

            let breakdown = beta < 1e-12;
            let check_now = breakdown || m == subspace || m.is_multiple_of(10);
            if check_now {
                let (theta, s) = tridiag_lowest(&alphas, &betas);
                let bound = if breakdown {
                    0.0
                } else {
                    (beta * s[m - 1]).abs()
                };
                if bound < LANCZOS_TOL * 0.1 || breakdown || m == subspace {
                    // assemble the Ritz vector and measure the true residual
                    let mut y = DVector::<f64>::zeros(dim);
                    for (c, b) in s.iter().zip(&basis) {
                        y.axpy(*c, b, 1.0);
                    }
                    let refs: Vec<&DVector<f64>> = deflated.iter().collect();
                    orthogonalize(&mut y, &refs);
                    y /= y.norm();
                    let hy = apply(&y);
                    total_iter += 1;
                    let res = (&hy - &y * theta).norm();
                    if res <= LANCZOS_TOL || breakdown {
                        return Ok((theta, y, res));
                    }
                    if m == subspace {
                        // restart from the best Ritz vector
                        v = y;
                        break;
                    }
                }
            }
            if total_iter > max_iter {
                return Err(Error::NoConvergence {
                    iterations: total_iter,
                });
            }
            betas.push(beta);
            basis.push(w / beta);
        }
    }
}

/// Lowest eigenpair of the symmetric tridiagonal matrix built from the
/// Lanczos coefficients.
fn tridiag_lowest(alphas: &[f64], betas: &[f64]) -> (f64, Vec<f64>) {
    let m = alphas.len();
    let mut t = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alphas[i];
        if i + 1 < m {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let se = t.symmetric_eigen();
    let mut best = 0;
    for i in 1..m {
        if se.eigenvalues[i] < se.eigenvalues[best] {
            best = i;
        }
    }
    (
        se.eigenvalues[best],
        se.eigenvectors.column(best).iter().copied().collect(),
    )
}

/// Squared overlap of a unit reference state with the ground space of `H`.
/// With a degenerate lowest eigenvalue this is the squared norm of the
/// projection onto the whole eigenspace within 1e-9 of it.
pub fn ground_overlap(h: &OperatorSum, psi_ref: &DVector<f64>) -> Result<f64> {
    if (psi_ref.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::Invalid("reference state must be unit-norm".into()));
    }
    if h.n() <= dense_qubit_limit() {
        Ok(ground_space_overlap(&h.to_dense()?, psi_ref))
    } else {
        // best-effort beyond the dense cap: resolve up to 8 pairs by
        // deflation and project onto the near-degenerate leading set
        let apply = |v: &DVector<f64>| h.apply(v).expect("real operator");
        let dim = 1usize << h.n();
        let mut found: Vec<DVector<f64>> = Vec::new();
        let mut values: Vec<f64> = Vec::new();
        for pair in 0..8.min(dim) {
            let (lam, vec, _) = lanczos_one(&apply, dim, &found, pair as u64)?;
            values.push(lam);
            found.push(vec);
        }
        let mut acc = 0.0;
        for (lam, vec) in values.iter().zip(&found) {
            if lam - values[0] <= DEGENERACY_TOL {
                acc += vec.dot(psi_ref).powi(2);
            }
        }
        Ok(acc)
    }
}

/// Dense-path ground-space overlap.
pub fn ground_space_overlap(m: &DMatrix<f64>, psi_ref: &DVector<f64>) -> f64 {
    let se = m.clone().symmetric_eigen();
    let lambda0 = se.eigenvalues.min();
    let mut acc = 0.0;
    for i in 0..se.eigenvalues.len() {
        if se.eigenvalues[i] - lambda0 <= DEGENERACY_TOL {
            acc += se.eigenvectors.column(i).dot(psi_ref).powi(2);
        }
    }
    acc
}

/// Isometry from the kept subspace into the full register; columns are the
/// lifted reduced basis states.
fn subspace_isometry(n: usize, spec: ProjectorSpec) -> Result<DMatrix<f64>> {
    let dim = 1usize << n;
    let sub = dim / 2;
    let mut w = DMatrix::<f64>::zeros(dim, sub);
    for s in 0..sub {
        let mut e = DVector::<f64>::zeros(sub);
        e[s] = 1.0;
        let col = lift_state(&e, n, spec)?;
        w.set_column(s, &col);
    }
    Ok(w)
}

/// Exact self-energy on the kept subspace,
/// `Sigma(z) = z 1 - (P (z 1 - H)^-1 P)^-1`.
pub fn exact_self_energy(
    h_full: &DMatrix<f64>,
    n: usize,
    partition: ProjectorSpec,
    z: f64,
) -> Result<DMatrix<f64>> {
    let dim = 1usize << n;
    if h_full.nrows() != dim || h_full.ncols() != dim {
        return Err(Error::QubitMismatch(format!(
            "matrix is {}x{}, expected {dim}x{dim}",
            h_full.nrows(),
            h_full.ncols()
        )));
    }
    let resolvent = (DMatrix::<f64>::identity(dim, dim) * z - h_full)
        .try_inverse()
        .ok_or(Error::SingularResolvent { z })?;
    let block = restrict_matrix(&resolvent, n, partition)?;
    let inv = block.try_inverse().ok_or(Error::SingularResolvent { z })?;
    Ok(DMatrix::<f64>::identity(dim / 2, dim / 2) * z - inv)
}

/// Self-energy series checked against the exact operator.
#[derive(Debug, Clone)]
pub struct SelfEnergyResult {
    /// Exact `Sigma(z)` on the kept subspace.
    pub exact: DMatrix<f64>,
    /// Series terms by order, `series[0]` being the penalty restriction.
    pub series: Vec<DMatrix<f64>>,
    pub z: f64,
    /// Operator-norm distance between the exact operator and the summed
    /// series.
    pub residual: f64,
}

impl SelfEnergyResult {
    /// Sum of the computed series orders.
    pub fn series_sum(&self) -> DMatrix<f64> {
        let mut acc = self.series[0].clone();
        for term in &self.series[1..] {
            acc += term;
        }
        acc
    }
}

/// Self-energy series through `order <= 3` for a penalty/perturbation pair,
/// using the scalar resolvent `(z - delta)^-1` on the penalized subspace.
pub fn perturbative_self_energy(
    hp: &OperatorSum,
    v: &OperatorSum,
    partition: ProjectorSpec,
    z: f64,
    order: usize,
) -> Result<SelfEnergyResult> {
    if hp.n() != v.n() {
        return Err(Error::QubitMismatch(format!(
            "penalty on {} qubits, perturbation on {}",
            hp.n(),
            v.n()
        )));
    }
    if order > 3 {
        return Err(Error::Invalid(
            "self-energy series is implemented through order 3".into(),
        ));
    }
    let n = hp.n();
    let hp_m = hp.to_dense()?;
    let v_m = v.to_dense()?;

    let w_low = subspace_isometry(n, partition)?;
    let high = ProjectorSpec::new(partition.qubit, partition.keep.complement());
    let w_high = subspace_isometry(n, high)?;

    // the penalty must be scalar on the penalized subspace
    let hp_high = w_high.transpose() * &hp_m * &w_high;
    let delta = hp_high.trace() / hp_high.nrows() as f64;
    let dev = (&hp_high - DMatrix::<f64>::identity(hp_high.nrows(), hp_high.ncols()) * delta)
        .abs()
        .max();
    if dev > 1e-9 * (1.0 + delta.abs()) {
        return Err(Error::Invalid(
            "penalty is not proportional to a projector on the partition".into(),
        ));
    }
    if z == delta {
        return Err(Error::SingularResolvent { z });
    }
    let g = 1.0 / (z - delta);

    let mut series = Vec::with_capacity(order + 1);
    series.push(w_low.transpose() * &hp_m * &w_low);
    if order >= 1 {
        series.push(w_low.transpose() * &v_m * &w_low);
    }
    let v_low_high = w_low.transpose() * &v_m * &w_high;
    let v_high_low = w_high.transpose() * &v_m * &w_low;
    if order >= 2 {
        series.push(&v_low_high * &v_high_low * g);
    }
    if order >= 3 {
        let v_high = w_high.transpose() * &v_m * &w_high;
        series.push(&v_low_high * v_high * &v_high_low * (g * g));
    }

    let h_full = &hp_m + &v_m;
    let exact = exact_self_energy(&h_full, n, partition, z)?;
    let mut sum = series[0].clone();
    for term in &series[1..] {
        sum += term;
    }
    let residual = operator_norm(&(exact.clone() - sum));
    Ok(SelfEnergyResult {
        exact,
        series,
        z,
        residual,
    })
}

/// Gap table of the interpolation `(1-s) H_i + s H_f`.
#[derive(Debug, Clone)]
pub struct GapSweep {
    /// `(s, gap)` rows in grid order.
    pub rows: Vec<(f64, f64)>,
    pub min_gap: f64,
    pub argmin_s: f64,
}

impl GapSweep {
    /// CSV with the exact header `s,gap`.
    pub fn to_csv(&self, comments: &[String]) -> String {
        let mut out = String::new();
        for c in comments {
            out.push_str(&format!("# {c}\n"));
        }
        out.push_str("s,gap\n");
        for (s, gap) in &self.rows {
            out.push_str(&format!(
                "{},{}\n",
                crate::fmt_sig12(*s),
                crate::fmt_sig12(*gap)
            ));
        }
        out
    }
}

/// Uniform grid on [0, 1] with the given number of points.
pub fn uniform_grid(points: usize) -> Vec<f64> {
    assert!(points >= 2);
    (0..points)
        .map(|i| i as f64 / (points - 1) as f64)
        .collect()
}

/// Sweep the interpolation gap `lambda_1(s) - lambda_0(s)` over a grid.
/// A degenerate ground state reports gap 0 at that point.
pub fn gap_sweep(hi: &OperatorSum, hf: &OperatorSum, grid: &[f64]) -> Result<GapSweep> {
    if hi.n() != hf.n() {
        return Err(Error::QubitMismatch(format!(
            "initial operator on {} qubits, final on {}",
            hi.n(),
            hf.n()
        )));
    }
    if grid.is_empty() {
        return Err(Error::Invalid("empty interpolation grid".into()));
    }
    let mi = hi.to_dense()?;
    let mf = hf.to_dense()?;
    let mut rows = Vec::with_capacity(grid.len());
    for &s in grid {
        let m = &mi * (1.0 - s) + &mf * s;
        let mut eigs: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let gap = if eigs.len() >= 2 {
            (eigs[1] - eigs[0]).max(0.0)
        } else {
            0.0
        };
        rows.push((s, gap));
    }
    let (argmin_s, min_gap) = rows
        .iter()
        .copied()
        .reduce(|best, cur| if cur.1 < best.1 { cur } else { best })
        .unwrap();
    Ok(GapSweep {
        rows,
        min_gap,
        argmin_s,
    })
}

/// One row of a gadget error sweep.
#[derive(Debug, Clone, Copy)]
pub struct SweepRow {
    pub eps: f64,
    pub delta: f64,
    pub lambda_target: f64,
    pub lambda_gadget: f64,
    pub abs_error: f64,
    pub overlap: f64,
}

/// Certify one gadget kind across an error-budget sweep: per point, build
/// the standalone three-qubit instance at `delta = Ebar eps^-r`, compare
/// its lowest eigenvalue against the bare target coupling, and measure the
/// ground-space overlap with `target ground (x) |low>_k`.
pub fn gadget_error_sweep(
    kind: GadgetKind,
    coefficient: f64,
    eps_list: &[f64],
    ebar: f64,
) -> Result<Vec<SweepRow>> {
    if eps_list.is_empty() {
        return Err(Error::Invalid("empty eps list".into()));
    }
    let mut rows = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        if eps.is_nan() || eps <= 0.0 || eps >= 1.0 {
            return Err(Error::Invalid(format!("eps must lie in (0,1), got {eps}")));
        }
        let delta = kind.delta_for(eps, ebar);
        let y = OperatorSum::zero(3);
        let g = match kind {
            GadgetKind::ZxFromZzxx => gadget::zx_from_zzxx(coefficient, 1, 2, 3, delta, ebar, &y)?,
            GadgetKind::ZzFromZx => gadget::zz_from_zx(coefficient, 1, 2, 3, delta, ebar, &y)?,
            GadgetKind::XxFromZx => gadget::xx_from_zx(coefficient, 1, 2, 3, delta, ebar, &y)?,
        };
        rows.push(certify_gadget(&g)?);
    }
    Ok(rows)
}

/// Spectral-error and overlap record for one gadget instance.
pub fn certify_gadget(g: &GadgetInstance) -> Result<SweepRow> {
    let (li, lj) = match g.kind {
        GadgetKind::ZxFromZzxx => (Letter::Z, Letter::X),
        GadgetKind::ZzFromZx => (Letter::Z, Letter::Z),
        GadgetKind::XxFromZx => (Letter::X, Letter::X),
    };
    // bare target on the system pair alone
    let target2 = OperatorSum::new(
        2,
        vec![PauliString::place(2, &[(1, li), (2, lj)], g.target_coefficient).unwrap()],
    )
    .unwrap();
    let tm = target2.to_dense()?;
    let t_eig = tm.clone().symmetric_eigen();
    let lambda_target = t_eig.eigenvalues.min();

    let full = g.full().to_dense()?;
    let f_report = eigensolve_dense(&full, 1)?;
    let lambda_gadget = f_report.eigenvalues[0];

    // projector onto target ground space tensored with the low ancilla state
    let mut overlap = 0.0;
    for idx in 0..t_eig.eigenvalues.len() {
        if t_eig.eigenvalues[idx] - lambda_target <= DEGENERACY_TOL {
            let sub: DVector<f64> = t_eig.eigenvectors.column(idx).into();
            let lifted = lift_state(&sub, 3, g.partition())?;
            overlap += lifted.dot(&f_report.ground_vector).powi(2);
        }
    }

    Ok(SweepRow {
        eps: g.params.eps,
        delta: g.params.delta,
        lambda_target,
        lambda_gadget,
        abs_error: (lambda_gadget - lambda_target).abs(),
        overlap,
    })
}

/// Non-increasing error check. The slack term is the eigenvalue noise
/// floor at the row's penalty scale (relative machine precision times
/// `delta`); measured errors below it are indistinguishable from zero.
pub fn errors_non_increasing(rows: &[SweepRow]) -> bool {
    rows.windows(2).all(|w| {
        let floor = 1e-13 * w[1].delta.max(1.0);
        w[1].abs_error <= w[0].abs_error + floor
    })
}

/// CSV for gadget sweeps; the monotonicity verdict rides in a trailing
/// comment row.
pub fn sweep_csv(rows: &[SweepRow], comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str(&format!("# {c}\n"));
    }
    out.push_str("epsilon,delta,lambda_target,lambda_gadget,abs_error,overlap\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            crate::fmt_sig12(r.eps),
            crate::fmt_sig12(r.delta),
            crate::fmt_sig12(r.lambda_target),
            crate::fmt_sig12(r.lambda_gadget),
            crate::fmt_sig12(r.abs_error),
            crate::fmt_sig12(r.overlap),
        ));
    }
    out.push_str(&format!(
        "# error-non-increasing: {}\n",
        errors_non_increasing(rows)
    ));
    out
}

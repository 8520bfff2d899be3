//! Leading eigenpairs of the truncated representations with adaptive
//! truncation, operator norms, and boundary traces of eigenfunctions.
//!
//! Every representation factors as `K diag(lambda)` with `K` Hermitian positive
//! definite and `lambda` of one sign. For a real Moebius parameter the
//! similarity `|D|^{1/2} K |D|^{1/2}`, `D = diag(lambda)`, is real symmetric, so
//! the solve reduces to a symmetric problem. Reflection `theta -> -theta`
//! (basis index `n -> -n`) commutes with it, which splits the problem further
//! into even and odd halves and makes the double eigenvalues exact pairs.

use std::cmp::Ordering;
use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{angle_map, jacobian_sqrt_boundary, Inclusion, FOURIER_NORM};
use crate::operator_matrix::{build, rotate_to_real, Kernel, OperatorKind, TruncatedOperatorMatrix};
use crate::tridiag::SymTridiagonal;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_N_MAX: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Absolute tolerance on the change of the leading magnitudes between
    /// successive truncations.
    pub tol: f64,
    pub n_max: usize,
    /// First truncation; defaults to `max(16, 2k)`.
    pub n_start: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            n_max: DEFAULT_N_MAX,
            n_start: None,
        }
    }
}

/// Which algorithm handles a given truncated matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverPath {
    SymmetricTridiagonal,
    SymmetricDense,
    GeneralDense,
}

pub fn solver_path(matrix: &TruncatedOperatorMatrix) -> SolverPath {
    if !matrix.has_real_parameter() || matrix.single_sign().is_none() {
        return SolverPath::GeneralDense;
    }
    match matrix.kernel {
        Kernel::Tridiagonal { .. } => SolverPath::SymmetricTridiagonal,
        Kernel::Dense(_) => SolverPath::SymmetricDense,
    }
}

/// Converged leading part of a spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub kind: OperatorKind,
    /// Sorted by magnitude, descending; ties keep positive values first.
    pub eigenvalues: Vec<f64>,
    /// Basis coefficients over `indices`, unit Euclidean norm, with the largest
    /// coefficient made real positive.
    pub eigenvectors: Vec<Vec<Complex64>>,
    pub indices: Vec<i64>,
    /// Truncation `N` of the returned solve.
    pub truncation: usize,
    pub converged: bool,
    /// Largest change of a requested magnitude between the last two truncations.
    pub residual: f64,
    /// Moebius parameter of the basis the eigenvectors refer to.
    pub basis_parameter: Complex64,
    /// Rotation from the basis frame back to the physical frame.
    pub rotation: f64,
}

impl SpectrumResult {
    pub fn magnitudes(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|v| v.abs()).collect()
    }
}

/// Operator norm of a difference map together with its truncation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormEstimate {
    pub value: f64,
    pub converged: bool,
    pub truncation: usize,
    pub residual: f64,
}

fn order(a: f64, b: f64) -> Ordering {
    b.abs()
        .partial_cmp(&a.abs())
        .unwrap_or(Ordering::Equal)
        .then_with(|| {
            // positive first
            (b > 0.0).cmp(&(a > 0.0))
        })
}

fn fix_phase(v: &mut [Complex64]) {
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return;
    }
    let pivot = v
        .iter()
        .copied()
        .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap_or(Ordering::Equal))
        .unwrap();
    let phase = pivot.conj() / pivot.norm() / norm;
    for c in v.iter_mut() {
        *c *= phase;
    }
}

/// Top-`k` eigenpairs of one truncated matrix, sorted and phase-fixed.
pub fn solve_truncated(
    matrix: &TruncatedOperatorMatrix,
    k: usize,
) -> Result<(Vec<f64>, Vec<Vec<Complex64>>)> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let k = k.min(matrix.dim());
    let mut pairs = match solver_path(matrix) {
        SolverPath::SymmetricTridiagonal => dn_symmetric(matrix, k),
        SolverPath::SymmetricDense => nd_symmetric(matrix, k),
        SolverPath::GeneralDense => general_dense(matrix, k)?,
    };
    pairs.sort_by(|a, b| order(a.0, b.0));
    pairs.truncate(k);
    let (values, mut vectors): (Vec<f64>, Vec<Vec<Complex64>>) = pairs.into_iter().unzip();
    for v in vectors.iter_mut() {
        fix_phase(v);
    }
    Ok((values, vectors))
}

/// Maps an eigenvector `w` of the symmetrised matrix to one of `K diag(lambda)`:
/// `v = K |D|^{1/2} w`.
fn lift(matrix: &TruncatedOperatorMatrix, w: &[f64]) -> Vec<Complex64> {
    let scaled: Vec<Complex64> = w
        .iter()
        .zip(&matrix.concentric)
        .map(|(x, lam)| Complex64::new(x * lam.abs().sqrt(), 0.0))
        .collect();
    matrix.kernel_apply(&scaled)
}

/// Writes the even (`parity = 1`) or odd combination of modes `n` and `-n`.
/// For a vanishing parameter the modes decouple and the pure modes are used
/// instead, `n` for the first of the pair and `-n` for the second.
fn place(w: &mut [f64], plus: usize, minus: usize, parity: f64, x: f64, decoupled: bool) {
    if decoupled {
        if parity > 0.0 {
            w[plus] = x;
        } else {
            w[minus] = x;
        }
    } else {
        w[plus] = x;
        w[minus] = parity * x;
    }
}

fn dn_symmetric(matrix: &TruncatedOperatorMatrix, k: usize) -> Vec<(f64, Vec<Complex64>)> {
    let (diag, upper) = match matrix.kernel {
        Kernel::Tridiagonal { diag, upper, .. } => (diag.re, upper.re),
        Kernel::Dense(_) => unreachable!("tridiagonal path on dense kernel"),
    };
    let sign = matrix.single_sign().unwrap_or(1.0);
    let decoupled = matrix.mobius.rho == 0.0;
    let t = matrix.truncation;
    // positive half, indices 1..=N; the negative half is its mirror image
    let half: Vec<f64> = (1..=t)
        .map(|n| matrix.concentric[t + n].abs())
        .collect();
    let scale: Vec<f64> = half.iter().map(|l| l.sqrt()).collect();
    let tri = SymTridiagonal::new(
        half.iter().map(|l| diag * l).collect(),
        (0..t - 1).map(|i| upper * scale[i] * scale[i + 1]).collect(),
    );

    let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
    let blocks = tri.unreduced_blocks();
    let need = k.div_ceil(2);
    for (b, &(start, end)) in blocks.iter().enumerate() {
        let block = SymTridiagonal::new(
            tri.diag[start..end].to_vec(),
            tri.off[start..end - 1].to_vec(),
        );
        for mu in block.largest_eigenvalues(need) {
            candidates.push((mu, b, start));
        }
    }
    candidates.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(Ordering::Equal));
    candidates.truncate(need);

    let dim = matrix.dim();
    let mut out = Vec::with_capacity(2 * need + 1);
    for (mu, b, start) in candidates {
        let (s, e) = blocks[b];
        let block = SymTridiagonal::new(tri.diag[s..e].to_vec(), tri.off[s..e - 1].to_vec());
        let local = block.eigenvector(mu);
        for parity in [1.0, -1.0] {
            let mut w = vec![0.0; dim];
            for (j, &x) in local.iter().enumerate() {
                let n = start + j + 1;
                place(&mut w, t + n, t - n, parity, x, decoupled);
            }
            out.push((sign * mu, lift(matrix, &w)));
        }
    }
    if out.len() < k {
        // the zero mode carried by index 0
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[t] = Complex64::new(1.0, 0.0);
        out.push((0.0, v));
    }
    out
}

fn nd_symmetric(matrix: &TruncatedOperatorMatrix, k: usize) -> Vec<(f64, Vec<Complex64>)> {
    let kernel = match &matrix.kernel {
        Kernel::Dense(m) => m,
        Kernel::Tridiagonal { .. } => unreachable!("dense path on tridiagonal kernel"),
    };
    let sign = matrix.single_sign().unwrap_or(1.0);
    let decoupled = matrix.mobius.rho == 0.0;
    let t = matrix.truncation;
    let pos = |n: i64| matrix.position(n).unwrap();
    let scale: Vec<f64> = matrix.concentric.iter().map(|l| l.abs().sqrt()).collect();
    let sym = |n: i64, m: i64| {
        let (i, j) = (pos(n), pos(m));
        scale[i] * kernel[(i, j)].re * scale[j]
    };
    let dim = matrix.dim();
    let mut out = Vec::new();
    for parity in [1.0, -1.0] {
        let half = DMatrix::from_fn(t, t, |i, j| {
            let (n, m) = (i as i64 + 1, j as i64 + 1);
            sym(n, m) + parity * sym(n, -m)
        });
        let eig = SymmetricEigen::new(half);
        for (idx, &mu) in eig.eigenvalues.iter().enumerate() {
            let u = eig.eigenvectors.column(idx);
            let mut w = vec![0.0; dim];
            for i in 0..t {
                let n = i as i64 + 1;
                place(&mut w, pos(n), pos(-n), parity, u[i], decoupled);
            }
            out.push((sign * mu, w));
        }
    }
    out.sort_by(|a, b| order(a.0, b.0));
    out.truncate(k);
    out.into_iter()
        .map(|(lam, w)| (lam, lift(matrix, &w)))
        .collect()
}

/// All eigenvalues of the truncated matrix from a complex Schur decomposition.
pub fn general_eigenvalues(matrix: &TruncatedOperatorMatrix) -> Result<Vec<Complex64>> {
    let dense = matrix.to_dense();
    let schur = Schur::try_new(dense, f64::EPSILON, 10_000).ok_or_else(|| {
        Error::InvalidInput("complex Schur decomposition did not converge".into())
    })?;
    let (_, tri) = schur.unpack();
    Ok(tri.diagonal().iter().copied().collect())
}

fn general_dense(matrix: &TruncatedOperatorMatrix, k: usize) -> Result<Vec<(f64, Vec<Complex64>)>> {
    let mut values = general_eigenvalues(matrix)?;
    values.sort_by(|a, b| order(a.re, b.re));
    values.truncate(k);
    let dense = matrix.to_dense();
    let dim = matrix.dim();
    let scale = dense.iter().fold(0.0f64, |m, c| m.max(c.norm())).max(f64::MIN_POSITIVE);
    let mut out = Vec::with_capacity(k);
    for lam in values {
        // inverse iteration with a slightly perturbed shift
        let shift = lam + Complex64::new(f64::EPSILON * scale, 0.0) * 16.0;
        let shifted = &dense - DMatrix::from_diagonal_element(dim, dim, shift);
        let lu = shifted.lu();
        let mut x = DVector::from_fn(dim, |i, _| Complex64::new(1.0 + 0.01 * i as f64, 0.0));
        for _ in 0..3 {
            if let Some(y) = lu.solve(&x) {
                let n = y.norm();
                if n > 0.0 && n.is_finite() {
                    x = y / Complex64::new(n, 0.0);
                }
            }
        }
        out.push((lam.re, x.iter().copied().collect()));
    }
    Ok(out)
}

/// Doubles the truncation from `max(16, 2k)` until the `k` leading magnitudes
/// change by less than `tol` or the next truncation would exceed `n_max`.
/// Non-convergence is reported through the flag, not as an error.
pub fn leading_eigenpairs<F>(builder: F, k: usize, opts: &SolveOptions) -> Result<SpectrumResult>
where
    F: Fn(usize) -> Result<TruncatedOperatorMatrix>,
{
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let mut n = opts.n_start.unwrap_or_else(|| (2 * k).max(16)).max(1);
    if n > opts.n_max {
        return Err(Error::InvalidParameter(format!(
            "starting truncation {n} exceeds N_max = {}",
            opts.n_max
        )));
    }
    let mut matrix = builder(n)?;
    let (mut values, mut vectors) = solve_truncated(&matrix, k)?;
    let mut residual = f64::INFINITY;
    let mut converged = false;
    while 2 * n <= opts.n_max {
        let next_n = 2 * n;
        let next = builder(next_n)?;
        let (next_values, next_vectors) = solve_truncated(&next, k)?;
        residual = next_values
            .iter()
            .zip(&values)
            .map(|(a, b)| (a.abs() - b.abs()).abs())
            .fold(0.0, f64::max);
        if next_values.len() != values.len() {
            residual = f64::INFINITY;
        }
        n = next_n;
        matrix = next;
        values = next_values;
        vectors = next_vectors;
        if residual < opts.tol {
            converged = true;
            break;
        }
    }
    Ok(SpectrumResult {
        kind: matrix.kind,
        eigenvalues: values,
        eigenvectors: vectors,
        indices: matrix.indices.clone(),
        truncation: n,
        converged,
        residual,
        basis_parameter: matrix.mobius.a,
        rotation: 0.0,
    })
}

/// Leading spectrum of the representation of `kind` for `inc`, solved in the
/// frame where the Moebius parameter is real.
pub fn spectrum(
    inc: &Inclusion,
    kind: OperatorKind,
    k: usize,
    opts: &SolveOptions,
) -> Result<SpectrumResult> {
    let (rotated, zeta) = rotate_to_real(inc);
    let mut result = leading_eigenpairs(|n| build(&rotated, n, kind), k, opts)?;
    result.rotation = zeta;
    Ok(result)
}

/// Largest eigenvalue magnitude, which is the `L^2` operator norm of the
/// (self-adjoint, compact) map.
pub fn operator_norm(inc: &Inclusion, kind: OperatorKind, opts: &SolveOptions) -> Result<NormEstimate> {
    if inc.contrast == 0.0 {
        return Err(Error::InvalidParameter(
            "distinguishability requires a nonzero contrast".into(),
        ));
    }
    let res = spectrum(inc, kind, 1, opts)?;
    Ok(NormEstimate {
        value: res.eigenvalues[0].abs(),
        converged: res.converged,
        truncation: res.truncation,
        residual: res.residual,
    })
}

/// Samples of an eigenfunction on a uniform grid, normalised in `L^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenfunctionTrace {
    pub theta: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl EigenfunctionTrace {
    /// Trapezoidal `L^2` norm on the boundary.
    pub fn quadrature_norm(&self) -> f64 {
        let h = TAU / self.values.len() as f64;
        (h * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt()
    }

    /// Grid angle where `|f|` is largest.
    pub fn peak_angle(&self) -> f64 {
        let (j, _) = self
            .values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap_or(Ordering::Equal))
            .unwrap();
        self.theta[j]
    }

    pub fn peak_amplitude(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Evaluates eigenfunction `index` of `result` on `grid` uniform angles in
/// `[0, 2pi)`, in the physical frame, scaled to unit `L^2` norm.
pub fn eigenfunction_trace(result: &SpectrumResult, index: usize, grid: usize) -> Result<EigenfunctionTrace> {
    if grid < 64 {
        return Err(Error::InvalidParameter(format!(
            "grid size must be at least 64, got {grid}"
        )));
    }
    let coeffs = result.eigenvectors.get(index).ok_or_else(|| {
        Error::InvalidIndex(format!(
            "eigenfunction {index} not computed ({} available)",
            result.eigenvectors.len()
        ))
    })?;
    let a = result.basis_parameter;
    let nd = result.kind.is_nd();
    let theta: Vec<f64> = (0..grid).map(|j| TAU * j as f64 / grid as f64).collect();
    let mut values: Vec<Complex64> = theta
        .iter()
        .map(|&t| {
            let local = t - result.rotation;
            let w = Complex64::from_polar(1.0, angle_map(a, local));
            let weight = if nd { jacobian_sqrt_boundary(a, local) } else { 1.0 };
            let s: Complex64 = result
                .indices
                .iter()
                .zip(coeffs)
                .map(|(&n, &c)| c * w.powi(n as i32))
                .sum();
            s * FOURIER_NORM * weight
        })
        .collect();
    let h = TAU / grid as f64;
    let norm = (h * values.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt();
    if norm > 0.0 {
        for v in values.iter_mut() {
            *v /= norm;
        }
    }
    Ok(EigenfunctionTrace { theta, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::ConcentricSpec;

    fn inc(c: Complex64, r: f64, a: f64) -> Inclusion {
        Inclusion::new(c, r, a).unwrap()
    }

    #[test]
    fn concentric_dn_spectrum_is_the_closed_form() {
        let i = inc(Complex64::new(0.0, 0.0), 0.5, 2.0);
        let res = spectrum(&i, OperatorKind::DnDiff, 6, &SolveOptions::default()).unwrap();
        assert!(res.converged);
        let spec = ConcentricSpec::new(0.5, 2.0).unwrap();
        let mut expected: Vec<f64> = (1..=40).map(|n| spec.dn_diff_eigenvalue(n)).collect();
        expected.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (j, v) in res.eigenvalues.iter().enumerate() {
            assert!((v - expected[j / 2]).abs() < 1e-15, "{j}: {v}");
        }
    }

    #[test]
    fn concentric_norm_matches_scan() {
        for &(r, a) in &[(0.95, 2.0), (0.3, -0.5), (0.7, 10.0)] {
            let i = inc(Complex64::new(0.0, 0.0), r, a);
            let spec = ConcentricSpec::new(r, a).unwrap();
            let est = operator_norm(&i, OperatorKind::DnDiff, &SolveOptions::default()).unwrap();
            assert!((est.value - spec.max_abs_dn_diff().1).abs() < 1e-14);
            let est = operator_norm(&i, OperatorKind::NdDiff, &SolveOptions::default()).unwrap();
            assert!((est.value - spec.max_abs_nd_diff()).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_contrast_norm_is_rejected() {
        let i = inc(Complex64::new(0.3, 0.0), 0.2, 0.0);
        assert!(operator_norm(&i, OperatorKind::DnDiff, &SolveOptions::default()).is_err());
    }

    #[test]
    fn eigenvectors_satisfy_the_eigen_equation() {
        for kind in [OperatorKind::DnDiff, OperatorKind::NdDiff, OperatorKind::NdFull] {
            let i = inc(Complex64::new(0.5, 0.0), 0.2, 2.0);
            let m = build(&i, 24, kind).unwrap();
            let (vals, vecs) = solve_truncated(&m, 6).unwrap();
            for (lam, v) in vals.iter().zip(&vecs) {
                let mv = m.apply(v);
                let err: f64 = mv
                    .iter()
                    .zip(v)
                    .map(|(a, b)| (a - b * *lam).norm())
                    .fold(0.0, f64::max);
                assert!(err < 1e-12 * lam.abs().max(1e-3), "{kind}: {lam} err {err}");
            }
        }
    }

    #[test]
    fn symmetric_and_general_paths_agree() {
        for kind in [OperatorKind::DnDiff, OperatorKind::NdDiff] {
            for contrast in [2.0, -0.5] {
                let i = inc(Complex64::new(0.6, 0.0), 0.2, contrast);
                let m = build(&i, 20, kind).unwrap();
                assert_ne!(solver_path(&m), SolverPath::GeneralDense);
                let (sym, _) = solve_truncated(&m, 10).unwrap();
                let general = general_dense(&m, 10).unwrap();
                let mut gen: Vec<f64> = general.iter().map(|p| p.0).collect();
                gen.sort_by(|a, b| order(*a, *b));
                for (a, b) in sym.iter().zip(&gen) {
                    assert!((a - b).abs() < 1e-11, "{kind} {contrast}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn complex_parameter_uses_general_path() {
        let i = inc(Complex64::from_polar(0.5, 1.0), 0.2, 2.0);
        let m = build(&i, 12, OperatorKind::DnDiff).unwrap();
        assert_eq!(solver_path(&m), SolverPath::GeneralDense);
        let (vals, vecs) = solve_truncated(&m, 4).unwrap();
        let (rot, _) = rotate_to_real(&i);
        let (ref_vals, _) = solve_truncated(&build(&rot, 12, OperatorKind::DnDiff).unwrap(), 4).unwrap();
        for (a, b) in vals.iter().zip(&ref_vals) {
            assert!((a - b).abs() < 1e-11);
        }
        let mv = m.apply(&vecs[0]);
        for (x, y) in mv.iter().zip(&vecs[0]) {
            assert!((x - y * vals[0]).norm() < 1e-10);
        }
    }

    #[test]
    fn eigenfunction_of_concentric_problem_is_an_exponential() {
        let i = inc(Complex64::new(0.0, 0.0), 0.5, 2.0);
        let res = spectrum(&i, OperatorKind::DnDiff, 2, &SolveOptions::default()).unwrap();
        let tr = eigenfunction_trace(&res, 0, 256).unwrap();
        assert!((tr.quadrature_norm() - 1.0).abs() < 1e-12);
        for v in &tr.values {
            assert!((v.norm() - FOURIER_NORM).abs() < 1e-12);
        }
        assert!(eigenfunction_trace(&res, 5, 256).is_err());
        assert!(eigenfunction_trace(&res, 0, 32).is_err());
    }

    #[test]
    fn eigenfunction_localises_towards_the_inclusion() {
        let mut amplitudes = Vec::new();
        for c in [0.3, 0.5, 0.7] {
            let i = inc(Complex64::new(c, 0.0), 0.1, 2.0);
            let res = spectrum(&i, OperatorKind::DnDiff, 1, &SolveOptions::default()).unwrap();
            let tr = eigenfunction_trace(&res, 0, 1024).unwrap();
            assert!((tr.quadrature_norm() - 1.0).abs() < 1e-8);
            if c == 0.5 {
                assert_eq!(tr.peak_angle(), 0.0);
            }
            amplitudes.push(tr.peak_amplitude());
        }
        assert!(amplitudes[0] < amplitudes[1] && amplitudes[1] < amplitudes[2]);

        // the trace follows the inclusion when it is rotated
        let i = inc(Complex64::from_polar(0.5, 2.0), 0.1, 2.0);
        let res = spectrum(&i, OperatorKind::DnDiff, 1, &SolveOptions::default()).unwrap();
        let tr = eigenfunction_trace(&res, 0, 1024).unwrap();
        assert!((tr.peak_angle() - 2.0).abs() < TAU / 1024.0);
    }

    #[test]
    fn norms_compare_with_the_linked_concentric_ball() {
        let i = inc(Complex64::new(0.7, 0.0), 0.2, 2.0);
        let r = i.mobius().unwrap().r;
        let spec = ConcentricSpec::new(r, 2.0).unwrap();
        let opts = SolveOptions::default();
        let dn = operator_norm(&i, OperatorKind::DnDiff, &opts).unwrap();
        assert!(dn.converged && dn.value.is_finite());
        assert!(dn.value > spec.max_abs_dn_diff().1);
        let nd = operator_norm(&i, OperatorKind::NdDiff, &opts).unwrap();
        assert!(nd.value <= spec.max_abs_nd_diff());
    }

    #[test]
    fn non_convergence_is_flagged() {
        let i = inc(Complex64::new(0.7, 0.0), 0.25, 2.0);
        let opts = SolveOptions { tol: 1e-12, n_max: 4, n_start: Some(2) };
        let res = spectrum(&i, OperatorKind::DnDiff, 3, &opts).unwrap();
        assert!(!res.converged);
        assert_eq!(res.truncation, 4);
        assert!(spectrum(&i, OperatorKind::DnDiff, 0, &opts).is_err());
    }
}

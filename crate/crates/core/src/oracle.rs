//! Independent verification path working on boundary samples.
//!
//! Operators are applied through the transformation law
//! `Lambda(gamma_{C,R}) = J_a^{1/2} M_a Lambda(gamma_{0,r}) M_a` (and its ND
//! counterpart with the mean projection), with `M_a f = f o M_a` evaluated
//! pointwise at the mapped angles. Fourier analysis uses direct transforms.
//! Nothing here touches the closed-form matrix entries.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{angle_map, basis_phi, basis_psi, jacobian_sqrt_boundary, Inclusion};
use crate::operator_matrix::OperatorKind;
use crate::spectra::ConcentricSpec;

/// Relative tail energy above which an application is flagged as degraded.
pub const ALIASING_TOL: f64 = 1e-10;
const MEAN_FREE_TOL: f64 = 1e-12;

/// Grid size paired with a concentric truncation `k`: `max(1024, 8k)`,
/// rounded up to a power of two.
pub fn grid_size(k: usize) -> usize {
    (8 * k).max(1024).next_power_of_two()
}

/// Complex samples on the uniform grid `theta_j = 2 pi j / M`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryFunction {
    pub samples: Vec<Complex64>,
}

impl BoundaryFunction {
    pub fn new(samples: Vec<Complex64>) -> Result<Self> {
        let m = samples.len();
        if m < 2 || !m.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "grid size must be a power of two >= 2, got {m}"
            )));
        }
        Ok(Self { samples })
    }

    pub fn from_fn(m: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        Self::new(grid(m).into_iter().map(f).collect())
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn theta(&self, j: usize) -> f64 {
        TAU * j as f64 / self.len() as f64
    }

    pub fn mean(&self) -> Complex64 {
        self.samples.iter().sum::<Complex64>() / self.len() as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_mean_free(&self) -> bool {
        self.mean().norm() <= MEAN_FREE_TOL * self.max_abs()
    }

    /// Unweighted `L^2` product by the trapezoidal rule.
    pub fn inner(&self, other: &Self) -> Complex64 {
        let h = TAU / self.len() as f64;
        self.samples
            .iter()
            .zip(&other.samples)
            .map(|(f, g)| f * g.conj())
            .sum::<Complex64>()
            * h
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).re.max(0.0).sqrt()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            samples: self.samples.iter().map(|v| v * s).collect(),
        }
    }

    /// Direct DFT coefficients `c_n`, `|n| < M/2`, with `f = sum c_n e^{i n theta}`.
    pub fn coefficients(&self) -> Vec<Complex64> {
        let m = self.len();
        let half = (m / 2) as i64;
        dft(&self.samples, half - 1)
    }

    /// Trigonometric interpolant evaluated at arbitrary angles.
    pub fn interpolant(&self) -> Interpolant {
        let m = self.len();
        Interpolant {
            coeffs: self.coefficients(),
            degree: (m / 2 - 1) as i64,
        }
    }

    /// `f o M_a`, sampled at the mapped angles on the same grid.
    pub fn compose(&self, a: Complex64) -> Self {
        let interp = self.interpolant();
        Self {
            samples: (0..self.len())
                .map(|j| interp.eval(angle_map(a, self.theta(j))))
                .collect(),
        }
    }
}

fn grid(m: usize) -> Vec<f64> {
    (0..m).map(|j| TAU * j as f64 / m as f64).collect()
}

/// `c_n = (1/M) sum_j f_j e^{-i n theta_j}` for `|n| <= k`, indexed by `n + k`.
fn dft(samples: &[Complex64], k: i64) -> Vec<Complex64> {
    let m = samples.len();
    (-k..=k)
        .map(|n| {
            let step = Complex64::from_polar(1.0, -TAU * n as f64 / m as f64);
            let mut w = Complex64::new(1.0, 0.0);
            let mut s = Complex64::new(0.0, 0.0);
            for (j, f) in samples.iter().enumerate() {
                if j % 64 == 0 {
                    // refresh to keep the twiddle recurrence accurate
                    w = Complex64::from_polar(1.0, -TAU * ((n * j as i64) % m as i64) as f64 / m as f64);
                }
                s += f * w;
                w *= step;
            }
            s / m as f64
        })
        .collect()
}

/// `sum_{|n| <= degree} c_n e^{i n theta}`.
#[derive(Debug, Clone)]
pub struct Interpolant {
    coeffs: Vec<Complex64>,
    degree: i64,
}

impl Interpolant {
    pub fn from_coefficients(coeffs: Vec<Complex64>) -> Self {
        let degree = (coeffs.len() / 2) as i64;
        assert_eq!(coeffs.len(), 2 * degree as usize + 1);
        Self { coeffs, degree }
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        let z = Complex64::from_polar(1.0, theta);
        let d = self.degree as usize;
        // Horner in z for n >= 0 and in conj(z) for n < 0
        let mut pos = Complex64::new(0.0, 0.0);
        for n in (0..=d).rev() {
            pos = pos * z + self.coeffs[d + n];
        }
        let zc = z.conj();
        let mut neg = Complex64::new(0.0, 0.0);
        for n in (1..=d).rev() {
            neg = neg * zc + self.coeffs[d - n];
        }
        pos + neg * zc
    }
}

/// Weight exponent of the products `<f, g>_{+-1/2} = int f conj(g) J_a^{+-1/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightedProduct {
    Half,
    MinusHalf,
}

impl WeightedProduct {
    pub fn for_kind(kind: OperatorKind) -> Self {
        if kind.is_nd() {
            WeightedProduct::MinusHalf
        } else {
            WeightedProduct::Half
        }
    }

    pub fn inner(self, a: Complex64, f: &BoundaryFunction, g: &BoundaryFunction) -> Complex64 {
        let m = f.len();
        let h = TAU / m as f64;
        (0..m)
            .map(|j| {
                let w = jacobian_sqrt_boundary(a, f.theta(j));
                let w = match self {
                    WeightedProduct::Half => w,
                    WeightedProduct::MinusHalf => 1.0 / w,
                };
                f.samples[j] * g.samples[j].conj() * w
            })
            .sum::<Complex64>()
            * h
    }
}

/// Result of an operator application on samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Application {
    pub value: BoundaryFunction,
    /// Relative energy of the transformed input beyond the concentric truncation.
    pub tail: f64,
    pub degraded: bool,
}

fn check_k(k: usize) -> Result<()> {
    if k < 1 {
        return Err(Error::InvalidParameter("concentric truncation K must be >= 1".into()));
    }
    Ok(())
}

/// Shared core: given samples of the function fed to the concentric operator,
/// multiply its Fourier modes `|n| <= k` by `lambda(n)`, then compose the result
/// with `M_a` and multiply by `weight(theta)`.
fn concentric_sandwich(
    a: Complex64,
    fed: &[Complex64],
    k: usize,
    lambda: impl Fn(i64) -> f64,
    weight: impl Fn(f64) -> f64,
) -> (Vec<Complex64>, f64) {
    let m = fed.len();
    let kk = k.min(m / 2 - 1) as i64;
    let coeffs = dft(fed, kk);
    let total: f64 = fed.iter().map(|v| v.norm_sqr()).sum::<f64>() / m as f64;
    let kept: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    let tail = if total > 0.0 {
        ((total - kept) / total).max(0.0)
    } else {
        0.0
    };
    let out = Interpolant::from_coefficients(
        coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * lambda(i as i64 - kk))
            .collect(),
    );
    let values = grid(m)
        .into_iter()
        .map(|t| out.eval(angle_map(a, t)) * weight(t))
        .collect();
    (values, tail)
}

/// `(Lambda(gamma_{C,R}) - Lambda(1)) f` via the transformation law, with the
/// input evaluated at mapped angles by its trigonometric interpolant.
pub fn apply_dn_diff(inc: &Inclusion, f: &BoundaryFunction, k: usize) -> Result<Application> {
    let interp = f.interpolant();
    apply_dn_diff_with(inc, f.len(), k, |t| interp.eval(t))
}

/// As [`apply_dn_diff`], for an input given pointwise.
pub fn apply_dn_diff_with(
    inc: &Inclusion,
    m: usize,
    k: usize,
    f: impl Fn(f64) -> Complex64,
) -> Result<Application> {
    check_k(k)?;
    let p = inc.mobius()?;
    let spec = ConcentricSpec::new(p.r, inc.contrast)?;
    let a = p.a;
    let fed: Vec<Complex64> = grid(m).into_iter().map(|t| f(angle_map(a, t))).collect();
    let (values, tail) = concentric_sandwich(
        a,
        &fed,
        k,
        |n| spec.dn_diff_eigenvalue(n),
        |t| jacobian_sqrt_boundary(a, t),
    );
    Ok(Application {
        value: BoundaryFunction::new(values)?,
        tail,
        degraded: tail > ALIASING_TOL,
    })
}

/// `(R(gamma_{C,R}) - R(1)) g` for mean-free `g`, via `P M_a R(gamma_{0,r}) J_a^{1/2} M_a`.
pub fn apply_nd_diff(inc: &Inclusion, g: &BoundaryFunction, k: usize) -> Result<Application> {
    if !g.is_mean_free() {
        return Err(Error::InvalidInput(format!(
            "ND input must be mean-free, mean = {:e}",
            g.mean().norm()
        )));
    }
    let interp = g.interpolant();
    apply_nd_diff_with(inc, g.len(), k, |t| interp.eval(t))
}

/// As [`apply_nd_diff`], for a mean-free input given pointwise.
pub fn apply_nd_diff_with(
    inc: &Inclusion,
    m: usize,
    k: usize,
    g: impl Fn(f64) -> Complex64,
) -> Result<Application> {
    check_k(k)?;
    let p = inc.mobius()?;
    let spec = ConcentricSpec::new(p.r, inc.contrast)?;
    let a = p.a;
    let fed: Vec<Complex64> = grid(m)
        .into_iter()
        .map(|t| g(angle_map(a, t)) * jacobian_sqrt_boundary(a, t))
        .collect();
    let (mut values, tail) = concentric_sandwich(
        a,
        &fed,
        k,
        |n| spec.nd_diff_eigenvalue(n).unwrap_or(0.0),
        |_| 1.0,
    );
    let mean = values.iter().sum::<Complex64>() / m as f64;
    for v in values.iter_mut() {
        *v -= mean;
    }
    Ok(Application {
        value: BoundaryFunction::new(values)?,
        tail,
        degraded: tail > ALIASING_TOL,
    })
}

/// Matrix of `<H b_m, b_n>_{+-1/2}` by quadrature, in operator orientation
/// (row = `n`, column = `m`) over the signed indices of `kind` at truncation
/// `n_trunc`. `H` is applied through the transformation law.
#[derive(Debug, Clone)]
pub struct QuadratureMatrix {
    pub indices: Vec<i64>,
    pub values: DMatrix<Complex64>,
}

impl QuadratureMatrix {
    pub fn entry(&self, m: i64, n: i64) -> Option<Complex64> {
        let col = self.indices.iter().position(|&i| i == m)?;
        let row = self.indices.iter().position(|&i| i == n)?;
        Some(self.values[(row, col)])
    }
}

pub fn quadrature_matrix(inc: &Inclusion, kind: OperatorKind, n_trunc: usize) -> Result<QuadratureMatrix> {
    if kind == OperatorKind::NdFull {
        return Err(Error::InvalidParameter(
            "the quadrature oracle covers the difference maps only".into(),
        ));
    }
    if n_trunc < 1 {
        return Err(Error::InvalidParameter("truncation N must be at least 1".into()));
    }
    let p = inc.mobius()?;
    let a = p.a;
    let k = 4 * n_trunc;
    let m = oracle_grid(p.rho, n_trunc, k);
    let indices = kind.indices(n_trunc);
    let basis = |n: i64, t: f64| match kind {
        OperatorKind::DnDiff => basis_phi(a, n, t),
        _ => basis_psi(a, n, t).unwrap_or_default(),
    };
    let sampled: Vec<BoundaryFunction> = indices
        .iter()
        .map(|&n| BoundaryFunction::from_fn(m, |t| basis(n, t)))
        .collect::<Result<_>>()?;
    let product = WeightedProduct::for_kind(kind);
    let d = indices.len();
    let mut values = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
    for (col, &mi) in indices.iter().enumerate() {
        let image = match kind {
            OperatorKind::DnDiff => apply_dn_diff_with(inc, m, k, |t| basis(mi, t))?,
            _ => apply_nd_diff_with(inc, m, k, |t| basis(mi, t))?,
        };
        for (row, b) in sampled.iter().enumerate() {
            values[(row, col)] = product.inner(a, &image.value, b);
        }
    }
    Ok(QuadratureMatrix { indices, values })
}

/// Grid large enough that basis functions of degree up to `n` (whose Fourier
/// coefficients decay like `|k|^n rho^|k|`) are resolved.
fn oracle_grid(rho: f64, n: usize, k: usize) -> usize {
    let mut m = grid_size(k);
    if rho == 0.0 {
        return m;
    }
    let decay = -rho.ln();
    while (m / 2) as f64 * decay < 60.0 + n as f64 * ((m / 2) as f64).ln() && m < (1 << 16) {
        m *= 2;
    }
    m
}

/// Outcome of a power iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerEstimate {
    /// `|Rayleigh quotient|` at the final iterate.
    pub value: f64,
    pub rayleigh: f64,
    pub iterations: usize,
    /// Relative change of the last step still above `1e-6`.
    pub stagnated: bool,
}

/// Largest `|eigenvalue|` of a self-adjoint sample-level operator by power
/// iteration with Rayleigh quotients. Starts from a seeded random band-limited
/// mean-free function with modes `1 <= |n| <= 16`.
pub fn norm_by_power_iteration<F>(
    mut apply: F,
    m: usize,
    iterations: usize,
    seed: u64,
) -> Result<PowerEstimate>
where
    F: FnMut(&BoundaryFunction) -> Result<BoundaryFunction>,
{
    if iterations < 50 {
        return Err(Error::InvalidParameter(format!(
            "power iteration needs at least 50 iterations, got {iterations}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let band = 16i64.min((m / 2 - 1) as i64);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * band as usize + 1];
    for (i, c) in coeffs.iter_mut().enumerate() {
        if i as i64 != band {
            *c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
    }
    let start = Interpolant::from_coefficients(coeffs);
    let mut x = BoundaryFunction::from_fn(m, |t| start.eval(t))?;
    x = x.scale(Complex64::new(1.0 / x.norm(), 0.0));

    let mut previous = f64::NAN;
    let mut rayleigh = 0.0;
    let mut change = f64::INFINITY;
    let mut done = 0;
    for it in 1..=iterations {
        let y = apply(&x)?;
        rayleigh = y.inner(&x).re;
        let ny = y.norm();
        done = it;
        if ny == 0.0 {
            change = 0.0;
            break;
        }
        if previous.is_finite() {
            change = (rayleigh - previous).abs() / rayleigh.abs().max(f64::MIN_POSITIVE);
        }
        previous = rayleigh;
        x = y.scale(Complex64::new(1.0 / ny, 0.0));
        if it >= 50 && change < 1e-14 {
            break;
        }
    }
    Ok(PowerEstimate {
        value: rayleigh.abs(),
        rayleigh,
        iterations: done,
        stagnated: change > 1e-6,
    })
}

/// Power-iteration norm of a difference map for `inc`, with concentric
/// truncation `k` on the grid `grid_size(k)`.
pub fn oracle_norm(
    inc: &Inclusion,
    kind: OperatorKind,
    k: usize,
    iterations: usize,
    seed: u64,
) -> Result<PowerEstimate> {
    let m = grid_size(k);
    match kind {
        OperatorKind::DnDiff => {
            norm_by_power_iteration(|f| Ok(apply_dn_diff(inc, f, k)?.value), m, iterations, seed)
        }
        OperatorKind::NdDiff => {
            norm_by_power_iteration(|g| Ok(apply_nd_diff(inc, g, k)?.value), m, iterations, seed)
        }
        OperatorKind::NdFull => Err(Error::InvalidParameter(
            "the oracle norm covers the difference maps only".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inc(c: Complex64, r: f64, a: f64) -> Inclusion {
        Inclusion::new(c, r, a).unwrap()
    }

    fn exp_mode(n: i64) -> impl Fn(f64) -> Complex64 {
        move |t| Complex64::from_polar(1.0, n as f64 * t)
    }

    #[test]
    fn dft_recovers_modes() {
        let f = BoundaryFunction::from_fn(64, |t| exp_mode(3)(t) * 2.0 + exp_mode(-5)(t)).unwrap();
        let c = f.coefficients();
        let off = 31;
        assert!((c[off + 3] - 2.0).norm() < 1e-14);
        assert!((c[off - 5] - 1.0).norm() < 1e-14);
        let interp = f.interpolant();
        assert!((interp.eval(0.123) - f_at(0.123)).norm() < 1e-13);
        fn f_at(t: f64) -> Complex64 {
            Complex64::from_polar(2.0, 3.0 * t) + Complex64::from_polar(1.0, -5.0 * t)
        }
    }

    #[test]
    fn concentric_application_is_a_multiplier() {
        let i = inc(Complex64::new(0.0, 0.0), 0.5, 2.0);
        let spec = ConcentricSpec::new(0.5, 2.0).unwrap();
        for n in [1i64, -2, 3] {
            let f = BoundaryFunction::from_fn(1024, exp_mode(n)).unwrap();
            let out = apply_dn_diff(&i, &f, 16).unwrap();
            let expected = spec.dn_diff_eigenvalue(n);
            for j in (0..1024).step_by(97) {
                let v = out.value.samples[j] - f.samples[j] * expected;
                assert!(v.norm() < 1e-12);
            }
            let out = apply_nd_diff(&i, &f, 16).unwrap();
            let expected = spec.nd_diff_eigenvalue(n).unwrap();
            for j in (0..1024).step_by(97) {
                assert!((out.value.samples[j] - f.samples[j] * expected).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_contrast_gives_zero() {
        let i = inc(Complex64::new(0.3, 0.2), 0.2, 0.0);
        let f = BoundaryFunction::from_fn(1024, exp_mode(2)).unwrap();
        let out = apply_dn_diff(&i, &f, 16).unwrap();
        assert!(out.value.max_abs() < 1e-300);
    }

    #[test]
    fn non_mean_free_input_is_rejected() {
        let i = inc(Complex64::new(0.3, 0.0), 0.2, 2.0);
        let f = BoundaryFunction::from_fn(1024, |_| Complex64::new(1.0, 0.0)).unwrap();
        assert!(matches!(apply_nd_diff(&i, &f, 16), Err(Error::InvalidInput(_))));
        assert!(BoundaryFunction::new(vec![Complex64::default(); 100]).is_err());
    }

    #[test]
    fn aliasing_guard_flags_truncated_input() {
        let i = inc(Complex64::new(0.5, 0.0), 0.1, 2.0);
        let f = BoundaryFunction::from_fn(1024, exp_mode(20)).unwrap();
        assert!(apply_dn_diff(&i, &f, 4).unwrap().degraded);
    }

    #[test]
    fn concentric_power_iteration() {
        let i = inc(Complex64::new(0.0, 0.0), 0.6, 2.0);
        let spec = ConcentricSpec::new(0.6, 2.0).unwrap();
        let est = oracle_norm(&i, OperatorKind::DnDiff, 64, 400, 7).unwrap();
        assert!((est.value - spec.max_abs_dn_diff().1).abs() < 1e-8);
        let est = oracle_norm(&i, OperatorKind::NdDiff, 64, 400, 7).unwrap();
        assert!((est.value - spec.max_abs_nd_diff()).abs() < 1e-8);
        assert!(norm_by_power_iteration(|f| Ok(f.clone()), 1024, 10, 0).is_err());
    }
}

//! Depth-dependent bounds on distinguishability and their numerical checks.
//!
//! For a ball whose Moebius parameter has modulus `rho`, the ratio
//! `||concentric difference|| / ||non-concentric difference||` lies in
//! `[(1-rho)/(1+rho), sqrt((1-rho^2)/(1+rho^2))]` for the DN map and in
//! `[(1-rho)/(1+rho), sqrt(1+rho^2)/(1-rho^2)]` for the ND map.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::eigensolve::{operator_norm, spectrum, NormEstimate, SolveOptions};
use crate::error::{Error, Result};
use crate::geometry::{check_contrast, from_concentric, Inclusion};
use crate::operator_matrix::OperatorKind;

/// Default cap on `rho` for sweeps; the DN norm blows up and truncation cost
/// explodes as `rho -> 1`.
pub const RHO_MAX: f64 = 0.99;
/// Relative slack on bound membership.
pub const BOUND_SLACK: f64 = 1e-9;
/// Relative tolerance of the nondecreasing checks.
pub const MONOTONE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MapKind {
    Dn,
    Nd,
}

impl MapKind {
    pub fn operator_kind(self) -> OperatorKind {
        match self {
            MapKind::Dn => OperatorKind::DnDiff,
            MapKind::Nd => OperatorKind::NdDiff,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            MapKind::Dn => "dn",
            MapKind::Nd => "nd",
        }
    }

    pub fn interval(self, rho: f64) -> Result<(f64, f64)> {
        match self {
            MapKind::Dn => dn_bound_interval(rho),
            MapKind::Nd => nd_bound_interval(rho),
        }
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::InvalidParameter(format!(
            "rho must lie in [0, 1), got {rho}"
        )));
    }
    Ok(())
}

/// `((1-rho)/(1+rho), sqrt((1-rho^2)/(1+rho^2)))`.
pub fn dn_bound_interval(rho: f64) -> Result<(f64, f64)> {
    check_rho(rho)?;
    let r2 = rho * rho;
    Ok(((1.0 - rho) / (1.0 + rho), ((1.0 - r2) / (1.0 + r2)).sqrt()))
}

/// `((1-rho)/(1+rho), sqrt(1+rho^2)/(1-rho^2))`.
pub fn nd_bound_interval(rho: f64) -> Result<(f64, f64)> {
    check_rho(rho)?;
    let r2 = rho * rho;
    Ok(((1.0 - rho) / (1.0 + rho), (1.0 + r2).sqrt() / (1.0 - r2)))
}

/// One point of a bounds sweep. `ratio` is concentric over non-concentric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsReport {
    pub kind: MapKind,
    pub rho: f64,
    pub center: Complex64,
    pub radius: f64,
    pub concentric_norm: f64,
    pub norm: f64,
    pub ratio: f64,
    pub lower: f64,
    pub upper: f64,
    pub in_bounds: bool,
    pub converged: bool,
}

impl BoundsReport {
    /// Unconverged points are excluded from pass/fail.
    pub fn passes(&self) -> bool {
        !self.converged || self.in_bounds
    }
}

fn within(ratio: f64, lower: f64, upper: f64) -> bool {
    let eps = BOUND_SLACK * upper;
    lower - eps <= ratio && ratio <= upper + eps
}

fn check_sweep_params(r: f64, contrast: f64) -> Result<()> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "concentric radius must lie in (0, 1), got {r}"
        )));
    }
    check_contrast(contrast)?;
    if contrast == 0.0 {
        return Err(Error::InvalidParameter(
            "distinguishability requires a nonzero contrast".into(),
        ));
    }
    Ok(())
}

/// Ratio check at one `rho`, with the ball `M_rho(B(0, r))` centred on the
/// positive real axis.
pub fn bounds_point(kind: MapKind, r: f64, contrast: f64, rho: f64, opts: &SolveOptions) -> Result<BoundsReport> {
    check_sweep_params(r, contrast)?;
    if rho > RHO_MAX {
        return Err(Error::InvalidParameter(format!(
            "rho = {rho} exceeds the sweep cap {RHO_MAX}"
        )));
    }
    let (lower, upper) = kind.interval(rho)?;
    let (center, radius) = from_concentric(Complex64::new(rho, 0.0), r)?;
    let op = kind.operator_kind();
    let concentric = operator_norm(&Inclusion::new(Complex64::new(0.0, 0.0), r, contrast)?, op, opts)?;
    let shifted = operator_norm(&Inclusion::new(center, radius, contrast)?, op, opts)?;
    let ratio = concentric.value / shifted.value;
    Ok(BoundsReport {
        kind,
        rho,
        center,
        radius,
        concentric_norm: concentric.value,
        norm: shifted.value,
        ratio,
        lower,
        upper,
        in_bounds: within(ratio, lower, upper),
        converged: concentric.converged && shifted.converged,
    })
}

/// Bounds check over a `rho` grid; reports come back in grid order.
pub fn verify_bounds(
    kind: MapKind,
    r: f64,
    contrast: f64,
    rho_grid: &[f64],
    opts: &SolveOptions,
) -> Result<Vec<BoundsReport>> {
    check_sweep_params(r, contrast)?;
    rho_grid
        .par_iter()
        .map(|&rho| bounds_point(kind, r, contrast, rho, opts))
        .collect()
}

/// One centre of a fixed-radius sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedSizeReport {
    pub kind: MapKind,
    pub center_abs: f64,
    /// Moebius parameter modulus of the smaller ball `B(C, R')` that is
    /// mapped onto `B(0, r)`.
    pub rho: f64,
    pub inner_radius: f64,
    /// Norm for `B(0, r)`.
    pub concentric_norm: f64,
    /// Norm for `B(C, R')`.
    pub inner_norm: f64,
    /// Norm for `B(C, r)`.
    pub norm: f64,
    /// Leading eigenvalue magnitudes for `B(C, r)`.
    pub leading: Vec<f64>,
    pub bound_holds: bool,
    pub converged: bool,
}

/// `rho` with `rho (1 - r^2) / (1 - rho^2 r^2) = c`: the positive root of
/// `c r^2 rho^2 + (1 - r^2) rho - c = 0`.
pub fn fixed_size_rho(c: f64, r: f64) -> f64 {
    if c == 0.0 {
        return 0.0;
    }
    let b = 1.0 - r * r;
    let disc = (b * b + 4.0 * c * c * r * r).sqrt();
    // 2c / (b + disc) is the cancellation-free form of (-b + disc) / (2 c r^2)
    2.0 * c / (b + disc)
}

/// For a fixed radius `r` and centres `|C|` on the positive real axis, checks
/// `||(0, r)|| <= u(rho) ||(C, R')|| <= u(rho) ||(C, r)||` with `u` the DN upper
/// bound and `B(C, R')` the ball mapped onto `B(0, r)` (for ND the ND interval
/// is checked on `||(0, r)|| / ||(C, R')||`), and records the `k` leading
/// eigenvalue magnitudes of `B(C, r)`.
pub fn verify_fixed_size(
    kind: MapKind,
    r: f64,
    contrast: f64,
    c_grid: &[f64],
    k: usize,
    opts: &SolveOptions,
) -> Result<Vec<FixedSizeReport>> {
    check_sweep_params(r, contrast)?;
    for &c in c_grid {
        if !(c >= 0.0) {
            return Err(Error::InvalidParameter(format!("|C| must be >= 0, got {c}")));
        }
        if c + r >= 1.0 {
            return Err(Error::InvalidGeometry(c + r));
        }
    }
    let op = kind.operator_kind();
    let concentric = operator_norm(&Inclusion::new(Complex64::new(0.0, 0.0), r, contrast)?, op, opts)?;
    c_grid
        .par_iter()
        .map(|&c| {
            let rho = fixed_size_rho(c, r);
            let (inner_center, inner_radius) = from_concentric(Complex64::new(rho, 0.0), r)?;
            let inner = operator_norm(&Inclusion::new(inner_center, inner_radius, contrast)?, op, opts)?;
            let outer_inc = Inclusion::new(Complex64::new(c, 0.0), r, contrast)?;
            let outer = spectrum(&outer_inc, op, k.max(1), opts)?;
            let norm = outer.eigenvalues[0].abs();
            let (lower, upper) = kind.interval(rho)?;
            let slack = BOUND_SLACK * upper;
            let bound_holds = match kind {
                MapKind::Dn => {
                    concentric.value <= (upper + slack) * inner.value
                        && inner.value <= norm * (1.0 + BOUND_SLACK)
                }
                MapKind::Nd => within(concentric.value / inner.value, lower, upper),
            };
            Ok(FixedSizeReport {
                kind,
                center_abs: c,
                rho,
                inner_radius,
                concentric_norm: concentric.value,
                inner_norm: inner.value,
                norm,
                leading: outer.magnitudes(),
                bound_holds,
                converged: concentric.converged && inner.converged && outer.converged,
            })
        })
        .collect()
}

/// Whether `values` is nondecreasing up to a relative tolerance.
pub fn is_nondecreasing(values: &[f64], rel_tol: f64) -> bool {
    values
        .windows(2)
        .all(|w| w[1] >= w[0] - rel_tol * w[0].abs().max(w[1].abs()))
}

/// Whether every leading magnitude (by rank) is nondecreasing across reports.
pub fn leading_nondecreasing(reports: &[FixedSizeReport], rel_tol: f64) -> bool {
    let k = reports.iter().map(|r| r.leading.len()).min().unwrap_or(0);
    (0..k).all(|j| {
        let series: Vec<f64> = reports.iter().map(|r| r.leading[j]).collect();
        is_nondecreasing(&series, rel_tol)
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    pub kind: MapKind,
    pub center: Complex64,
    pub radii: Vec<f64>,
    pub norms: Vec<NormEstimate>,
    pub nondecreasing: bool,
    pub strictly_increasing: bool,
}

/// Norms of nested balls `B(center, R_i)` for ascending radii.
pub fn verify_monotonicity(
    kind: MapKind,
    center: Complex64,
    radii: &[f64],
    contrast: f64,
    opts: &SolveOptions,
) -> Result<MonotonicityReport> {
    if radii.is_empty() {
        return Err(Error::InvalidParameter("no radii given".into()));
    }
    if radii.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter("radii must be ascending".into()));
    }
    let incs = radii
        .iter()
        .map(|&r| Inclusion::new(center, r, contrast))
        .collect::<Result<Vec<_>>>()?;
    let op = kind.operator_kind();
    let norms = incs
        .par_iter()
        .map(|inc| operator_norm(inc, op, opts))
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = norms.iter().map(|n| n.value).collect();
    Ok(MonotonicityReport {
        kind,
        center,
        radii: radii.to_vec(),
        nondecreasing: is_nondecreasing(&values, MONOTONE_TOL),
        strictly_increasing: values.windows(2).all(|w| w[1] > w[0]),
        norms,
    })
}

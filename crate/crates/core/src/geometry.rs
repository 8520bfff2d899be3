//! Moebius automorphisms of the unit disk and the geometry of ball inclusions.
//!
//! Points of the plane are identified with complex numbers. The family used
//! throughout is the involutive disk automorphism
//!
//! ```text
//! M_a(x) = (x - a) / (conj(a) x - 1),   |a| < 1,
//! ```
//!
//! which maps every ball `B(C, R)` compactly contained in the disk onto a
//! concentric ball `B(0, r)` for exactly one `a`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A point `x1 + i x2` of the plane.
pub type ComplexPoint = Complex64;

/// `1 / sqrt(2 pi)`, the normalisation of the Fourier basis on the unit circle.
pub const FOURIER_NORM: f64 = 0.398_942_280_401_432_7;

const SINGULAR_EPS: f64 = 1e-15;
const RADICAND_CLAMP: f64 = 1e-15;

/// Conductivity `1 + A` on the open ball `B(center, radius)`, `1` elsewhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inclusion {
    pub center: ComplexPoint,
    pub radius: f64,
    pub contrast: f64,
}

impl Inclusion {
    pub fn new(center: ComplexPoint, radius: f64, contrast: f64) -> Result<Self> {
        if !(center.re.is_finite() && center.im.is_finite() && radius.is_finite()) {
            return Err(Error::InvalidParameter(
                "inclusion geometry must be finite".into(),
            ));
        }
        if radius <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "radius must be positive, got {radius}"
            )));
        }
        let reach = center.norm() + radius;
        if reach >= 1.0 {
            return Err(Error::InvalidGeometry(reach));
        }
        check_contrast(contrast)?;
        Ok(Self {
            center,
            radius,
            contrast,
        })
    }

    /// The inclusion that `M_a` produces from the concentric ball `B(0, r)`.
    pub fn from_mobius(a: ComplexPoint, r: f64, contrast: f64) -> Result<Self> {
        let (center, radius) = from_concentric(a, r)?;
        Self::new(center, radius, contrast)
    }

    pub fn mobius(&self) -> Result<MobiusParam> {
        to_concentric(self.center, self.radius)
    }

    /// Whether `x` lies in the open ball.
    pub fn contains(&self, x: ComplexPoint) -> bool {
        (x - self.center).norm() < self.radius
    }
}

pub(crate) fn check_contrast(contrast: f64) -> Result<()> {
    if !contrast.is_finite() || contrast <= -1.0 {
        return Err(Error::InvalidParameter(format!(
            "contrast must be finite and > -1, got {contrast}"
        )));
    }
    Ok(())
}

/// Moebius parameter `a = rho e^{i zeta}` together with the radius `r` of the
/// concentric ball it links to. The polar form is cached at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusParam {
    pub a: ComplexPoint,
    pub rho: f64,
    /// Argument of `a`, normalised to `(-pi, pi]`; zero when `a = 0`.
    pub zeta: f64,
    pub r: f64,
}

impl MobiusParam {
    pub fn new(a: ComplexPoint, r: f64) -> Result<Self> {
        let (rho, zeta) = polar(a)?;
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "concentric radius must lie in (0, 1), got {r}"
            )));
        }
        Ok(Self { a, rho, zeta, r })
    }
}

fn polar(a: ComplexPoint) -> Result<(f64, f64)> {
    let rho = a.norm();
    if !rho.is_finite() || rho >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "Moebius parameter must satisfy |a| < 1, got |a| = {rho}"
        )));
    }
    Ok((rho, normalize_angle(a.arg())))
}

/// Maps an angle to `(-pi, pi]`.
pub fn normalize_angle(theta: f64) -> f64 {
    let mut t = theta % TAU;
    if t <= -PI {
        t += TAU;
    } else if t > PI {
        t -= TAU;
    }
    t
}

/// `M_a(x) = (x - a) / (conj(a) x - 1)`.
pub fn mobius_apply(a: ComplexPoint, x: ComplexPoint) -> Result<ComplexPoint> {
    polar(a)?;
    let den = a.conj() * x - 1.0;
    let den_abs = den.norm();
    if den_abs < SINGULAR_EPS {
        return Err(Error::Singularity(den_abs));
    }
    Ok((x - a) / den)
}

/// Angle of `M_a(e^{i theta})`; the boundary circle is mapped onto itself.
pub fn angle_map(a: ComplexPoint, theta: f64) -> f64 {
    let x = Complex64::from_polar(1.0, theta);
    ((x - a) / (a.conj() * x - 1.0)).arg()
}

/// The unique `a` and `r` with `M_a(B(C, R)) = B(0, r)`.
///
/// `r` is evaluated as `2R / (h + sqrt(((1-R)^2 - c^2)((1+R)^2 - c^2)))` with
/// `h = 1 + R^2 - c^2`, the rationalised form of the root expression, which
/// avoids cancellation for small `R`.
pub fn to_concentric(center: ComplexPoint, radius: f64) -> Result<MobiusParam> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "radius must be positive, got {radius}"
        )));
    }
    let c = center.norm();
    if !c.is_finite() || c + radius >= 1.0 {
        return Err(Error::InvalidGeometry(c + radius));
    }
    let c2 = c * c;
    let h = 1.0 + radius * radius - c2;
    let mut radicand = ((1.0 - radius).powi(2) - c2) * ((1.0 + radius).powi(2) - c2);
    if radicand < 0.0 && radicand > -RADICAND_CLAMP {
        radicand = 0.0;
    }
    let r = 2.0 * radius / (h + radicand.sqrt());
    let a = center / (1.0 - radius * r);
    MobiusParam::new(a, r)
}

/// Centre and radius of `M_a(B(0, r))`.
pub fn from_concentric(a: ComplexPoint, r: f64) -> Result<(ComplexPoint, f64)> {
    let (rho, zeta) = polar(a)?;
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "concentric radius must lie in (0, 1), got {r}"
        )));
    }
    let den = 1.0 - rho * rho * r * r;
    let c = rho * (1.0 - r * r) / den;
    let radius = r * (1.0 - rho * rho) / den;
    Ok((Complex64::from_polar(c, zeta), radius))
}

/// Boundary stretching factor `J_a^{1/2}(theta) = (1 - rho^2) / |e^{i theta} - a|^2`.
pub fn jacobian_sqrt_boundary(a: ComplexPoint, theta: f64) -> f64 {
    let rho = a.norm();
    let half = 0.5 * (theta - a.arg());
    let s = half.sin();
    // 1 + rho^2 - 2 rho cos(phi) written without cancellation near rho = 1
    (1.0 - rho * rho) / ((1.0 - rho).powi(2) + 4.0 * rho * s * s)
}

/// Fourier coefficient `h_n = (1/2pi) int J_a^{1/2} e^{-i n theta} dtheta`.
pub fn fourier_coeff_h(a: ComplexPoint, n: i64) -> ComplexPoint {
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let rho = a.norm();
    let zeta = a.arg();
    let k = n.unsigned_abs() as f64;
    let modulus = if rho == 0.0 { 0.0 } else { (k * rho.ln()).exp() };
    if n > 0 {
        Complex64::from_polar(modulus, -k * zeta)
    } else {
        Complex64::from_polar(modulus, k * zeta)
    }
}

/// `phi_n = f_n o M_a`, orthonormal in the `J_a^{1/2}`-weighted product.
pub fn basis_phi(a: ComplexPoint, n: i64, theta: f64) -> ComplexPoint {
    Complex64::from_polar(FOURIER_NORM, n as f64 * angle_map(a, theta))
}

/// `psi_n = J_a^{1/2} (f_n o M_a)`, orthonormal in the `J_a^{-1/2}`-weighted
/// product on mean-free functions. `n = 0` is excluded.
pub fn basis_psi(a: ComplexPoint, n: i64, theta: f64) -> Result<ComplexPoint> {
    if n == 0 {
        return Err(Error::InvalidIndex(
            "psi_0 is not part of the mean-free basis".into(),
        ));
    }
    Ok(jacobian_sqrt_boundary(a, theta) * basis_phi(a, n, theta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn trapezoid(m: usize, f: impl Fn(f64) -> Complex64) -> Complex64 {
        let h = TAU / m as f64;
        (0..m).map(|j| f(j as f64 * h)).sum::<Complex64>() * h
    }

    #[test]
    fn mobius_examples() {
        let x = Complex64::new(0.3, 0.4);
        let y = mobius_apply(Complex64::new(0.0, 0.0), x).unwrap();
        assert!((y + x).norm() < 1e-16);

        let a = Complex64::new(0.6, 0.0);
        assert!(mobius_apply(a, a).unwrap().norm() < 1e-16);

        let x = Complex64::from_polar(1.0, PI / 3.0);
        let y = mobius_apply(Complex64::new(0.5, 0.0), x).unwrap();
        assert!((y.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mobius_rejects_outside_parameter() {
        let err = mobius_apply(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        assert!(matches!(err, Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn concentric_fixed_point() {
        let p = to_concentric(Complex64::new(0.0, 0.0), 0.3).unwrap();
        assert_eq!(p.a, Complex64::new(0.0, 0.0));
        assert!((p.r - 0.3).abs() < 1e-16);
        assert_eq!(p.zeta, 0.0);
    }

    #[test]
    fn three_point_circle_check() {
        let p = to_concentric(Complex64::new(0.7, 0.0), 0.2).unwrap();
        for x in [
            Complex64::new(0.9, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.7, 0.2),
        ] {
            let y = mobius_apply(p.a, x).unwrap();
            assert!((y.norm() - p.r).abs() < 1e-13, "{} vs {}", y.norm(), p.r);
        }
        let inc = Inclusion::new(Complex64::new(0.7, 0.0), 0.2, 2.0).unwrap();
        assert!(inc.contains(p.a));
    }

    #[test]
    fn rotation_equivariance_of_parameter() {
        let base = to_concentric(Complex64::new(0.35, 0.0), 0.1).unwrap();
        let rot = to_concentric(Complex64::from_polar(0.35, FRAC_PI_4), 0.1).unwrap();
        let expected = Complex64::from_polar(1.0, FRAC_PI_4) * base.a;
        assert!((rot.a - expected).norm() < 1e-15);
        assert!((rot.r - base.r).abs() < 1e-15);
        assert!((rot.zeta - FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn rejects_inclusion_touching_boundary() {
        assert!(matches!(
            to_concentric(Complex64::new(0.9, 0.0), 0.2),
            Err(Error::InvalidGeometry(_))
        ));
        assert!(Inclusion::new(Complex64::new(0.0, 0.0), 0.2, -1.0).is_err());
        assert!(Inclusion::new(Complex64::new(0.0, 0.0), 0.0, 1.0).is_err());
    }

    #[test]
    fn from_concentric_examples() {
        let (c, r) = from_concentric(Complex64::new(0.0, 0.0), 0.3).unwrap();
        assert_eq!(c, Complex64::new(0.0, 0.0));
        assert!((r - 0.3).abs() < 1e-16);

        // both closed forms evaluate to 0.375 / 0.9375
        let (c, r) = from_concentric(Complex64::new(0.5, 0.0), 0.5).unwrap();
        assert!((c - Complex64::new(0.4, 0.0)).norm() < 1e-15);
        assert!((r - 0.4).abs() < 1e-15);
        let back = to_concentric(c, r).unwrap();
        assert!((back.a - Complex64::new(0.5, 0.0)).norm() < 1e-14);
        assert!((back.r - 0.5).abs() < 1e-14);
    }

    #[test]
    fn angle_normalisation() {
        assert_eq!(normalize_angle(-PI), PI);
        assert_eq!(normalize_angle(PI), PI);
        assert!((normalize_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        let p = MobiusParam::new(Complex64::new(-0.5, 0.0), 0.2).unwrap();
        assert_eq!(p.zeta, PI);
    }

    #[test]
    fn jacobian_examples() {
        let zero = Complex64::new(0.0, 0.0);
        assert_eq!(jacobian_sqrt_boundary(zero, 1.234), 1.0);
        let a = Complex64::new(0.5, 0.0);
        assert!((jacobian_sqrt_boundary(a, 0.0) - 3.0).abs() < 1e-15);
        assert!((jacobian_sqrt_boundary(a, PI) - 1.0 / 3.0).abs() < 1e-15);
        let a = Complex64::from_polar(0.5, 1.0);
        assert!((jacobian_sqrt_boundary(a, 1.0) - 3.0).abs() < 1e-14);
    }

    #[test]
    fn jacobian_normalisation_by_quadrature() {
        for a in [
            Complex64::new(0.0, 0.0),
            Complex64::from_polar(0.5, 0.3),
            Complex64::from_polar(0.9, -2.0),
        ] {
            let rho = a.norm();
            let s = trapezoid(4096, |t| Complex64::new(jacobian_sqrt_boundary(a, t), 0.0));
            assert!((s.re - TAU).abs() < 1e-12);
            let s = trapezoid(4096, |t| {
                Complex64::new(1.0 / jacobian_sqrt_boundary(a, t), 0.0)
            });
            let expected = TAU * (1.0 + rho * rho) / (1.0 - rho * rho);
            assert!((s.re - expected).abs() < 1e-10);
        }
    }

    #[test]
    fn fourier_coefficients_match_quadrature() {
        let zero = Complex64::new(0.0, 0.0);
        assert_eq!(fourier_coeff_h(zero, 3), zero);
        assert!((fourier_coeff_h(Complex64::new(0.5, 0.0), 2) - 0.25).norm() < 1e-16);
        let a = Complex64::from_polar(0.3, PI / 2.0);
        assert!((fourier_coeff_h(a, -1) - Complex64::new(0.0, 0.3)).norm() < 1e-15);

        for a in [a, Complex64::from_polar(0.7, 2.5)] {
            for n in -6..=6 {
                let q = trapezoid(4096, |t| {
                    jacobian_sqrt_boundary(a, t) * Complex64::from_polar(1.0, -(n as f64) * t)
                }) / TAU;
                assert!((q - fourier_coeff_h(a, n)).norm() < 1e-12, "n = {n}");
            }
        }
    }

    #[test]
    fn basis_examples() {
        let zero = Complex64::new(0.0, 0.0);
        for n in -3..=3 {
            for t in [0.0, 0.7, 2.0] {
                let expected =
                    FOURIER_NORM * (-1.0f64).powi(n as i32) * Complex64::from_polar(1.0, n as f64 * t);
                assert!((basis_phi(zero, n, t) - expected).norm() < 1e-15);
            }
        }
        let a = Complex64::new(0.5, 0.0);
        assert!((basis_phi(a, 0, 1.3) - FOURIER_NORM).norm() < 1e-16);
        assert!((basis_phi(a, 1, 0.0) + FOURIER_NORM).norm() < 1e-15);
        assert!(matches!(basis_psi(a, 0, 0.0), Err(Error::InvalidIndex(_))));
        let t = 0.4;
        let psi = basis_psi(a, 2, t).unwrap();
        assert!((psi - jacobian_sqrt_boundary(a, t) * basis_phi(a, 2, t)).norm() < 1e-16);
    }
}

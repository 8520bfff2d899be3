//! Closed-form spectra of the boundary maps for a concentric inclusion.
//!
//! For `gamma = 1 + A chi_{B(0,r)}` the Fourier modes `e^{i n theta}` diagonalise
//! both the Dirichlet-to-Neumann (DN) and the Neumann-to-Dirichlet (ND) map.

use crate::error::{Error, Result};
use crate::geometry::check_contrast;

/// Concentric radius `r` and contrast `A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcentricSpec {
    pub r: f64,
    pub contrast: f64,
}

impl ConcentricSpec {
    pub fn new(r: f64, contrast: f64) -> Result<Self> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "concentric radius must lie in (0, 1), got {r}"
            )));
        }
        check_contrast(contrast)?;
        Ok(Self { r, contrast })
    }

    /// `r^{2|n|}`, evaluated through the logarithm so large `|n|` do not drift.
    fn r_pow(&self, n: i64) -> f64 {
        (2.0 * n.unsigned_abs() as f64 * self.r.ln()).exp()
    }

    /// Eigenvalue of `Lambda(gamma_{0,r})` for the mode `n`.
    pub fn dn_eigenvalue(&self, n: i64) -> f64 {
        let k = n.unsigned_abs() as f64;
        let p = self.r_pow(n);
        let a = self.contrast;
        k * (2.0 + a * (1.0 + p)) / (2.0 + a * (1.0 - p))
    }

    /// Eigenvalue of `Lambda(gamma_{0,r}) - Lambda(1)`.
    pub fn dn_diff_eigenvalue(&self, n: i64) -> f64 {
        let k = n.unsigned_abs() as f64;
        let p = self.r_pow(n);
        let a = self.contrast;
        2.0 * a * p * k / (2.0 + a * (1.0 - p))
    }

    /// Eigenvalue of `R(gamma_{0,r})` on the mean-free space.
    pub fn nd_eigenvalue(&self, n: i64) -> Result<f64> {
        let k = nonzero_index(n)?;
        let p = self.r_pow(n);
        let a = self.contrast;
        Ok((2.0 + a * (1.0 - p)) / ((2.0 + a * (1.0 + p)) * k))
    }

    /// Eigenvalue of `R(gamma_{0,r}) - R(1)`; its magnitude decays monotonically in `|n|`.
    pub fn nd_diff_eigenvalue(&self, n: i64) -> Result<f64> {
        let k = nonzero_index(n)?;
        let p = self.r_pow(n);
        let a = self.contrast;
        Ok(-2.0 * a * p / ((2.0 + a * (1.0 + p)) * k))
    }

    /// Largest `|dn_diff_eigenvalue(n)|` over `n >= 1` and the first index attaining it.
    ///
    /// The scan stops once the envelope `2|A| n r^{2n}` has passed its peak and
    /// dropped below the running maximum.
    pub fn max_abs_dn_diff(&self) -> (i64, f64) {
        let mut best = (1, self.dn_diff_eigenvalue(1).abs());
        let peak = (-1.0 / (2.0 * self.r.ln())).ceil() as i64;
        let mut n = 2;
        loop {
            let v = self.dn_diff_eigenvalue(n).abs();
            if v > best.1 {
                best = (n, v);
            }
            let envelope = 2.0 * self.contrast.abs() * n as f64 * self.r_pow(n);
            if n > peak && envelope < best.1 {
                return best;
            }
            n += 1;
        }
    }

    /// Largest `|nd_diff_eigenvalue(n)|`, attained at `|n| = 1`.
    pub fn max_abs_nd_diff(&self) -> f64 {
        self.nd_diff_eigenvalue(1).map(f64::abs).unwrap_or(0.0)
    }
}

fn nonzero_index(n: i64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidIndex(
            "the ND map acts on mean-free functions; n = 0 is excluded".into(),
        ));
    }
    Ok(n.unsigned_abs() as f64)
}

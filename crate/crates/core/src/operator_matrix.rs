//! Exact truncated matrix representations of the boundary-map differences of a
//! ball inclusion, in Moebius-transformed Fourier bases.
//!
//! Every matrix here factors as `K diag(lambda)`, where `lambda` holds the
//! concentric eigenvalues of the linked ball `B(0, r)` and `K` depends only on
//! the Moebius parameter `a`:
//!
//! * DN difference, basis `phi_n = f_n o M_a`: `K` is the tridiagonal Toeplitz
//!   matrix of multiplication by `J_a^{-1/2}`.
//! * ND maps, basis `psi_n = J_a^{1/2} (f_n o M_a)`, `n != 0`: `K_{n,m} =
//!   h_{n-m} - conj(h_m) h_n` with `h` the Fourier coefficients of `J_a^{1/2}`.
//!
//! Both kernels are Hermitian and positive definite, so the spectrum is real.

use std::fmt;
use std::io::{self, Write};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{fourier_coeff_h, normalize_angle, Inclusion, MobiusParam};
use crate::spectra::ConcentricSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorKind {
    /// `Lambda(gamma_{C,R}) - Lambda(1)`.
    DnDiff,
    /// `R(gamma_{C,R}) - R(1)` on mean-free functions.
    NdDiff,
    /// `R(gamma_{C,R})` on mean-free functions.
    NdFull,
}

impl OperatorKind {
    pub fn label(self) -> &'static str {
        match self {
            OperatorKind::DnDiff => "dn-diff",
            OperatorKind::NdDiff => "nd-diff",
            OperatorKind::NdFull => "nd-full",
        }
    }

    pub fn is_nd(self) -> bool {
        !matches!(self, OperatorKind::DnDiff)
    }

    /// Signed Fourier indices of the truncated basis.
    pub fn indices(self, truncation: usize) -> Vec<i64> {
        let n = truncation as i64;
        match self {
            OperatorKind::DnDiff => (-n..=n).collect(),
            _ => (-n..=n).filter(|&i| i != 0).collect(),
        }
    }

    /// Concentric eigenvalue attached to basis index `n`.
    pub fn concentric_eigenvalue(self, spec: &ConcentricSpec, n: i64) -> Result<f64> {
        match self {
            OperatorKind::DnDiff => Ok(spec.dn_diff_eigenvalue(n)),
            OperatorKind::NdDiff => spec.nd_diff_eigenvalue(n),
            OperatorKind::NdFull => spec.nd_eigenvalue(n),
        }
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The `lambda`-free factor `K`, stored in operator orientation: row = output
/// basis index, column = input basis index.
#[derive(Debug, Clone, PartialEq)]
pub enum Kernel {
    Tridiagonal {
        diag: Complex64,
        /// `K[i][i+1]`
        upper: Complex64,
        /// `K[i+1][i]`
        lower: Complex64,
    },
    Dense(DMatrix<Complex64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperatorMatrix {
    pub kind: OperatorKind,
    pub truncation: usize,
    pub indices: Vec<i64>,
    pub inclusion: Inclusion,
    pub mobius: MobiusParam,
    /// Concentric eigenvalue for each entry of `indices`.
    pub concentric: Vec<f64>,
    pub kernel: Kernel,
}

impl TruncatedOperatorMatrix {
    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    /// Position of a signed basis index in `indices`.
    pub fn position(&self, n: i64) -> Option<usize> {
        let t = self.truncation as i64;
        if n.abs() > t {
            return None;
        }
        match self.kind {
            OperatorKind::DnDiff => Some((n + t) as usize),
            _ if n == 0 => None,
            _ if n < 0 => Some((n + t) as usize),
            _ => Some((n + t - 1) as usize),
        }
    }

    fn kernel_at(&self, row: usize, col: usize) -> Complex64 {
        match &self.kernel {
            Kernel::Tridiagonal { diag, upper, lower } => {
                if row == col {
                    *diag
                } else if row + 1 == col {
                    *upper
                } else if col + 1 == row {
                    *lower
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            Kernel::Dense(k) => k[(row, col)],
        }
    }

    /// Entry at storage position (`row`, `col`): the coefficient of basis
    /// function `indices[row]` in the image of basis function `indices[col]`.
    pub fn at(&self, row: usize, col: usize) -> Complex64 {
        self.kernel_at(row, col) * self.concentric[col]
    }

    /// `<H b_m, b_n>` in the weighted product the basis is orthonormal for.
    ///
    /// For the DN kind this is `(1+rho^2)/(1-rho^2) lambda_m` on the diagonal,
    /// `-a/(1-rho^2) lambda_m` for `m - n = 1` and `-conj(a)/(1-rho^2) lambda_m`
    /// for `m - n = -1`. For the ND kinds it is `lambda_m (h_{n-m} - conj(h_m) h_n)`.
    pub fn entry(&self, m: i64, n: i64) -> Result<Complex64> {
        let col = self
            .position(m)
            .ok_or_else(|| Error::InvalidIndex(format!("index {m} outside the truncated basis")))?;
        let row = self
            .position(n)
            .ok_or_else(|| Error::InvalidIndex(format!("index {n} outside the truncated basis")))?;
        Ok(self.at(row, col))
    }

    /// Dense copy in operator orientation (row = output index).
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let d = self.dim();
        match &self.kernel {
            Kernel::Dense(k) => {
                let mut out = k.clone();
                for (j, &lam) in self.concentric.iter().enumerate() {
                    out.column_mut(j).scale_mut(lam);
                }
                out
            }
            Kernel::Tridiagonal { .. } => DMatrix::from_fn(d, d, |i, j| {
                if i.abs_diff(j) <= 1 {
                    self.at(i, j)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }),
        }
    }

    /// Applies the kernel `K` (without the concentric eigenvalues) to `x`.
    pub fn kernel_apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let d = self.dim();
        assert_eq!(x.len(), d);
        match &self.kernel {
            Kernel::Tridiagonal { diag, upper, lower } => (0..d)
                .map(|i| {
                    let mut s = *diag * x[i];
                    if i + 1 < d {
                        s += *upper * x[i + 1];
                    }
                    if i > 0 {
                        s += *lower * x[i - 1];
                    }
                    s
                })
                .collect(),
            Kernel::Dense(k) => {
                let v = nalgebra::DVector::from_column_slice(x);
                (k * v).iter().copied().collect()
            }
        }
    }

    /// Matrix-vector product with the full representation.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let scaled: Vec<Complex64> = x
            .iter()
            .zip(&self.concentric)
            .map(|(v, &lam)| v * lam)
            .collect();
        self.kernel_apply(&scaled)
    }

    /// Whether the Moebius parameter is real, which makes the kernel real.
    pub fn has_real_parameter(&self) -> bool {
        self.mobius.a.im == 0.0
    }

    /// Common sign of the nonzero concentric eigenvalues, if they share one.
    pub fn single_sign(&self) -> Option<f64> {
        let pos = self.concentric.iter().any(|&l| l > 0.0);
        let neg = self.concentric.iter().any(|&l| l < 0.0);
        match (pos, neg) {
            (true, false) => Some(1.0),
            (false, true) => Some(-1.0),
            (false, false) => Some(1.0),
            (true, true) => None,
        }
    }

    /// `D M D^{-1}` with `D = diag(sqrt|lambda_m|)`, restricted to the indices
    /// with `lambda_m != 0`. Returns the retained signed indices and the matrix.
    pub fn similarity_symmetrized(&self) -> (Vec<i64>, DMatrix<Complex64>) {
        let keep: Vec<usize> = (0..self.dim())
            .filter(|&i| self.concentric[i] != 0.0)
            .collect();
        let scale: Vec<f64> = keep.iter().map(|&i| self.concentric[i].abs().sqrt()).collect();
        let m = DMatrix::from_fn(keep.len(), keep.len(), |i, j| {
            self.at(keep[i], keep[j]) * scale[i] / scale[j]
        });
        (keep.iter().map(|&i| self.indices[i]).collect(), m)
    }

    /// The ND representation on all of `L^2`, i.e. of `H P`, with the `n = 0`
    /// row and column added: row 0 vanishes and column 0 is
    /// `-sum_{k != 0} h_k A_{n,k}` (the sum truncated to `|k| <= N`).
    /// Indices of the result run over `-N..=N`.
    pub fn nd_augmented(&self) -> Result<DMatrix<Complex64>> {
        if !self.kind.is_nd() {
            return Err(Error::InvalidParameter(
                "the n = 0 augmentation only exists for ND representations".into(),
            ));
        }
        let t = self.truncation as i64;
        let d = 2 * self.truncation + 1;
        let a = self.mobius.a;
        let mut out = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
        for n in (-t..=t).filter(|&n| n != 0) {
            let row = self.position(n).unwrap();
            let mut zero_col = Complex64::new(0.0, 0.0);
            for m in (-t..=t).filter(|&m| m != 0) {
                let col = self.position(m).unwrap();
                let v = self.at(row, col);
                out[((n + t) as usize, (m + t) as usize)] = v;
                zero_col -= fourier_coeff_h(a, m) * v;
            }
            out[((n + t) as usize, t as usize)] = zero_col;
        }
        Ok(out)
    }

    /// Writes the plain-text export: a `#` header with kind, truncation and
    /// parameters, then one `m n re im` line per nonzero entry `<H b_m, b_n>`.
    pub fn write_export<W: Write>(&self, mut w: W) -> io::Result<()> {
        let inc = &self.inclusion;
        let p = &self.mobius;
        writeln!(w, "# eit-disting matrix export v1")?;
        writeln!(
            w,
            "# kind={} truncation={} dim={}",
            self.kind,
            self.truncation,
            self.dim()
        )?;
        writeln!(
            w,
            "# center={},{} radius={} contrast={}",
            fmt_f64(inc.center.re),
            fmt_f64(inc.center.im),
            fmt_f64(inc.radius),
            fmt_f64(inc.contrast)
        )?;
        writeln!(
            w,
            "# a={},{} rho={} zeta={} r={}",
            fmt_f64(p.a.re),
            fmt_f64(p.a.im),
            fmt_f64(p.rho),
            fmt_f64(p.zeta),
            fmt_f64(p.r)
        )?;
        writeln!(w, "# entry(m,n) = <H b_m, b_n> (coefficient n of H applied to basis function m)")?;
        writeln!(w, "# m n re im")?;
        for (col, &m) in self.indices.iter().enumerate() {
            for (row, &n) in self.indices.iter().enumerate() {
                if matches!(self.kernel, Kernel::Tridiagonal { .. }) && row.abs_diff(col) > 1 {
                    continue;
                }
                let v = self.at(row, col);
                if v.re != 0.0 || v.im != 0.0 {
                    writeln!(w, "{m} {n} {} {}", fmt_f64(v.re), fmt_f64(v.im))?;
                }
            }
        }
        Ok(())
    }
}

/// Fixed float formatting used in every text output: 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn check_truncation(truncation: usize) -> Result<()> {
    if truncation < 1 {
        return Err(Error::InvalidParameter(
            "truncation N must be at least 1".into(),
        ));
    }
    Ok(())
}

/// Tridiagonal representation of `Lambda(gamma_{C,R}) - Lambda(1)` in the
/// basis `phi_n`, `|n| <= N`.
pub fn build_dn_diff(inc: &Inclusion, truncation: usize) -> Result<TruncatedOperatorMatrix> {
    check_truncation(truncation)?;
    let mobius = inc.mobius()?;
    let spec = ConcentricSpec::new(mobius.r, inc.contrast)?;
    let indices = OperatorKind::DnDiff.indices(truncation);
    let concentric = indices.iter().map(|&n| spec.dn_diff_eigenvalue(n)).collect();
    let rho2 = mobius.rho * mobius.rho;
    let inv = 1.0 / (1.0 - rho2);
    let kernel = Kernel::Tridiagonal {
        diag: Complex64::new((1.0 + rho2) * inv, 0.0),
        // K[n][n+1] = entry(m = n+1, n): the m - n = 1 case
        upper: -mobius.a * inv,
        lower: -mobius.a.conj() * inv,
    };
    Ok(TruncatedOperatorMatrix {
        kind: OperatorKind::DnDiff,
        truncation,
        indices,
        inclusion: *inc,
        mobius,
        concentric,
        kernel,
    })
}

/// Dense representation of `R(gamma_{C,R}) - R(1)` (`NdDiff`) or `R(gamma_{C,R})`
/// (`NdFull`) in the basis `psi_n`, `0 < |n| <= N`.
pub fn build_nd(
    inc: &Inclusion,
    truncation: usize,
    kind: OperatorKind,
) -> Result<TruncatedOperatorMatrix> {
    check_truncation(truncation)?;
    if !kind.is_nd() {
        return Err(Error::InvalidParameter(format!(
            "build_nd needs an ND kind, got {kind}"
        )));
    }
    let mobius = inc.mobius()?;
    let spec = ConcentricSpec::new(mobius.r, inc.contrast)?;
    let indices = kind.indices(truncation);
    let concentric = indices
        .iter()
        .map(|&n| kind.concentric_eigenvalue(&spec, n))
        .collect::<Result<Vec<_>>>()?;
    let a = mobius.a;
    let t = truncation as i64;
    let h: Vec<Complex64> = (-2 * t..=2 * t).map(|k| fourier_coeff_h(a, k)).collect();
    let hk = |k: i64| h[(k + 2 * t) as usize];
    let d = indices.len();
    let kernel = DMatrix::from_fn(d, d, |row, col| {
        let n = indices[row];
        let m = indices[col];
        hk(n - m) - hk(m).conj() * hk(n)
    });
    Ok(TruncatedOperatorMatrix {
        kind,
        truncation,
        indices,
        inclusion: *inc,
        mobius,
        concentric,
        kernel: Kernel::Dense(kernel),
    })
}

/// Builds the representation of the requested kind.
pub fn build(inc: &Inclusion, truncation: usize, kind: OperatorKind) -> Result<TruncatedOperatorMatrix> {
    match kind {
        OperatorKind::DnDiff => build_dn_diff(inc, truncation),
        _ => build_nd(inc, truncation, kind),
    }
}

/// Rotates the inclusion about the origin so that its centre is real and
/// nonnegative. Returns the rotated inclusion and the rotation angle `zeta`,
/// so that the original centre is `e^{i zeta} |C|`.
pub fn rotate_to_real(inc: &Inclusion) -> (Inclusion, f64) {
    let c = inc.center.norm();
    let zeta = if c == 0.0 {
        0.0
    } else {
        normalize_angle(inc.center.arg())
    };
    let rotated = Inclusion {
        center: Complex64::new(c, 0.0),
        ..*inc
    };
    (rotated, zeta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, TAU};

    fn inc(c: Complex64, r: f64, a: f64) -> Inclusion {
        Inclusion::new(c, r, a).unwrap()
    }

    #[test]
    fn concentric_dn_is_diagonal() {
        let i = inc(Complex64::new(0.0, 0.0), 0.4, 2.0);
        let m = build_dn_diff(&i, 6).unwrap();
        let spec = ConcentricSpec::new(0.4, 2.0).unwrap();
        for &p in &m.indices {
            for &q in &m.indices {
                let e = m.entry(p, q).unwrap();
                if p == q {
                    assert!((e.re - spec.dn_diff_eigenvalue(p)).abs() < 1e-16);
                    assert_eq!(e.im, 0.0);
                } else {
                    assert_eq!(e, Complex64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn dn_entries_follow_closed_form_and_quadrature() {
        let i = inc(Complex64::new(0.7, 0.0), 0.2, 2.0);
        let m = build_dn_diff(&i, 2).unwrap();
        let p = i.mobius().unwrap();
        let spec = ConcentricSpec::new(p.r, 2.0).unwrap();
        let rho2 = p.rho * p.rho;
        let l1 = spec.dn_diff_eigenvalue(1);
        assert!((m.entry(1, 1).unwrap().re - (1.0 + rho2) / (1.0 - rho2) * l1).abs() < 1e-15);

        // (lambda_m / 2pi) int e^{i(m-n)t} (1 + rho^2 - 2 rho cos(t - zeta)) / (1 - rho^2) dt
        let quad = |mm: i64, nn: i64| {
            let k = 2048;
            let h = TAU / k as f64;
            let s: Complex64 = (0..k)
                .map(|j| {
                    let t = j as f64 * h;
                    let w = (1.0 + rho2 - 2.0 * p.rho * (t - p.zeta).cos()) / (1.0 - rho2);
                    Complex64::from_polar(w, (mm - nn) as f64 * t)
                })
                .sum();
            s * h * spec.dn_diff_eigenvalue(mm) / TAU
        };
        for mm in -2..=2 {
            for nn in -2..=2 {
                let e = m.entry(mm, nn).unwrap();
                assert!((e - quad(mm, nn)).norm() < 1e-14, "({mm},{nn})");
            }
        }
        // the image of b_0 vanishes identically
        for nn in -2..=2 {
            assert_eq!(m.entry(0, nn).unwrap(), Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn dn_is_tridiagonal_and_export_is_sparse() {
        let i = inc(Complex64::from_polar(0.5, 1.0), 0.2, 2.0);
        let m = build_dn_diff(&i, 5).unwrap();
        let dense = m.to_dense();
        for r in 0..m.dim() {
            for c in 0..m.dim() {
                if r.abs_diff(c) >= 2 {
                    assert_eq!(dense[(r, c)], Complex64::new(0.0, 0.0));
                }
            }
        }
        let mut buf = Vec::new();
        m.write_export(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines = text.lines().filter(|l| !l.starts_with('#')).count();
        assert!(lines <= 3 * (2 * 5 + 1));
        assert!(text.contains("kind=dn-diff truncation=5"));
    }

    #[test]
    fn nd_concentric_is_diagonal() {
        let i = inc(Complex64::new(0.0, 0.0), 0.3, 2.0);
        let m = build_nd(&i, 4, OperatorKind::NdDiff).unwrap();
        let dense = m.to_dense();
        for r in 0..m.dim() {
            for c in 0..m.dim() {
                if r != c {
                    assert_eq!(dense[(r, c)].norm(), 0.0);
                }
            }
        }
        assert!(m.position(0).is_none());
        assert!(m.entry(0, 1).is_err());
    }

    #[test]
    fn nd_entry_example() {
        // a = 0.5, r = 0.3
        let i = Inclusion::from_mobius(Complex64::new(0.5, 0.0), 0.3, 2.0).unwrap();
        let m = build_nd(&i, 3, OperatorKind::NdDiff).unwrap();
        let spec = ConcentricSpec::new(0.3, 2.0).unwrap();
        let l1 = spec.nd_diff_eigenvalue(1).unwrap();
        let e = m.entry(1, 1).unwrap();
        assert!((e - Complex64::new(l1 * 0.75, 0.0)).norm() < 1e-15);

        let full = build_nd(&i, 3, OperatorKind::NdFull).unwrap();
        let l1 = spec.nd_eigenvalue(1).unwrap();
        assert!((full.entry(1, 1).unwrap().re - 0.75 * l1).abs() < 1e-15);
    }

    #[test]
    fn nd_tiny_columns_vanish() {
        let i = inc(Complex64::new(0.3, 0.1), 0.01, 2.0);
        let m = build_nd(&i, 40, OperatorKind::NdDiff).unwrap();
        for (col, &lam) in m.concentric.iter().enumerate() {
            if lam.abs() < 1e-18 {
                for row in 0..m.dim() {
                    assert!(m.at(row, col).norm() < 1e-18);
                }
            }
        }
    }

    #[test]
    fn nd_augmentation_reproduces_the_zero_column() {
        let i = inc(Complex64::from_polar(0.4, -0.7), 0.2, 2.0);
        let m = build_nd(&i, 3, OperatorKind::NdDiff).unwrap();
        let aug = m.nd_augmented().unwrap();
        assert_eq!(aug.nrows(), 7);
        for j in 0..7 {
            assert_eq!(aug[(3, j)], Complex64::new(0.0, 0.0));
        }
        let a = m.mobius.a;
        let expected: Complex64 = [-3, -2, -1, 1, 2, 3]
            .iter()
            .map(|&k| -fourier_coeff_h(a, k) * m.entry(k, 2).unwrap())
            .sum();
        assert!((aug[(5, 3)] - expected).norm() < 1e-16);
        assert!(build_dn_diff(&i, 3).unwrap().nd_augmented().is_err());
    }

    #[test]
    fn invalid_truncation() {
        let i = inc(Complex64::new(0.1, 0.0), 0.2, 2.0);
        assert!(matches!(build_dn_diff(&i, 0), Err(Error::InvalidParameter(_))));
        assert!(matches!(
            build_nd(&i, 0, OperatorKind::NdDiff),
            Err(Error::InvalidParameter(_))
        ));
        assert!(build_nd(&i, 2, OperatorKind::DnDiff).is_err());
    }

    #[test]
    fn rotation_examples() {
        let i = inc(Complex64::new(0.4, 0.0), 0.2, 2.0);
        let (r, z) = rotate_to_real(&i);
        assert_eq!(r, i);
        assert_eq!(z, 0.0);
        let i = inc(Complex64::new(0.0, 0.5), 0.2, 2.0);
        let (r, z) = rotate_to_real(&i);
        assert!((r.center - Complex64::new(0.5, 0.0)).norm() < 1e-16);
        assert!((z - FRAC_PI_2).abs() < 1e-16);
    }

    #[test]
    fn symmetrized_form_is_symmetric_for_real_parameter() {
        for contrast in [2.0, -0.5] {
            let i = inc(Complex64::new(0.6, 0.0), 0.25, contrast);
            for m in [
                build_dn_diff(&i, 8).unwrap(),
                build_nd(&i, 8, OperatorKind::NdDiff).unwrap(),
            ] {
                let (_, s) = m.similarity_symmetrized();
                for r in 0..s.nrows() {
                    for c in 0..s.ncols() {
                        assert!((s[(r, c)] - s[(c, r)]).norm() < 1e-12);
                    }
                }
            }
        }
    }
}

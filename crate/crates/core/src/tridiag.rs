//! Real symmetric tridiagonal eigenproblems: Sturm-sequence bisection for the
//! largest eigenvalues and inverse iteration for their eigenvectors.
//!
//! The matrices produced by the DN representation are scaled diagonally
//! dominant (`D B D` with `B` diagonally dominant), for which bisection
//! delivers small eigenvalues to high relative accuracy.

/// Symmetric tridiagonal matrix with diagonal `diag` and off-diagonal `off`
/// (`off[i]` couples rows `i` and `i + 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

const MAX_BISECTIONS: usize = 400;

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert!(
            off.len() + 1 == diag.len() || (diag.is_empty() && off.is_empty()),
            "off-diagonal length must be one less than the diagonal"
        );
        Self { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Splits at exactly vanishing couplings; returns `(start, end)` ranges.
    pub fn unreduced_blocks(&self) -> Vec<(usize, usize)> {
        let mut blocks = Vec::new();
        let mut start = 0;
        for (i, &e) in self.off.iter().enumerate() {
            if e == 0.0 {
                blocks.push((start, i + 1));
                start = i + 1;
            }
        }
        if start < self.len() {
            blocks.push((start, self.len()));
        }
        blocks
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.off[i - 1].abs();
            }
            if i + 1 < n {
                r += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let pivmin = f64::MIN_POSITIVE;
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.len() {
            let e = self.off[i - 1];
            q = (self.diag[i] - x) - (e / q) * e;
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `j`-th smallest eigenvalue (0-based) by bisection.
    fn bisect(&self, j: usize, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..MAX_BISECTIONS {
            let mid = if lo > 0.0 && hi > 4.0 * lo {
                (lo * hi).sqrt()
            } else if hi < 0.0 && lo < 4.0 * hi {
                -(lo * hi).sqrt()
            } else {
                0.5 * (lo + hi)
            };
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
            let width = hi - lo;
            if width <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) || width < 1e-300 {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    /// The `k` largest eigenvalues in descending order.
    pub fn largest_eigenvalues(&self, k: usize) -> Vec<f64> {
        let n = self.len();
        let k = k.min(n);
        if k == 0 {
            return Vec::new();
        }
        if n == 1 {
            return vec![self.diag[0]];
        }
        let (mut lo, hi) = self.gershgorin();
        let span = (hi - lo).abs().max(hi.abs()).max(f64::MIN_POSITIVE);
        let hi = hi + 2.0 * f64::EPSILON * span;
        lo -= 2.0 * f64::EPSILON * span;
        // tighten to zero for positive definite inputs so the geometric midpoint applies
        if lo < 0.0 && self.count_below(0.0) == 0 {
            lo = 0.0;
        }
        (0..k).map(|i| self.bisect(n - 1 - i, lo, hi)).collect()
    }

    /// Unit eigenvector for the (accurately known) eigenvalue `lambda`, by
    /// inverse iteration with a partially pivoted tridiagonal LU.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.len();
        if n == 1 {
            return vec![1.0];
        }
        // only replaces exactly singular pivots
        let tiny = (f64::EPSILON * lambda.abs()).max(f64::MIN_POSITIVE);
        let lu = TridiagonalLu::factor(self, lambda, tiny);
        // deterministic, generic start vector
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i * 7919 % 17) as f64)).collect();
        normalize(&mut x);
        for _ in 0..4 {
            lu.solve(&mut x);
            normalize(&mut x);
        }
        x
    }
}

fn normalize(x: &mut [f64]) {
    let big = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if big == 0.0 || !big.is_finite() {
        return;
    }
    for v in x.iter_mut() {
        *v /= big;
    }
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    for v in x.iter_mut() {
        *v /= norm;
    }
}

/// LU factorisation of `T - shift I` with partial pivoting (LAPACK `gttrf` layout).
struct TridiagonalLu {
    /// multipliers
    l: Vec<f64>,
    /// U diagonal, first and second superdiagonals
    u0: Vec<f64>,
    u1: Vec<f64>,
    u2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagonalLu {
    fn factor(t: &SymTridiagonal, shift: f64, tiny: f64) -> Self {
        let n = t.len();
        let mut d: Vec<f64> = t.diag.iter().map(|v| v - shift).collect();
        let mut du = t.off.clone();
        let mut dl = t.off.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        let mut l = vec![0.0; n.saturating_sub(1)];
        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let f = dl[i] / d[i];
                l[i] = f;
                d[i + 1] -= f * du[i];
            } else {
                let f = d[i] / dl[i];
                d[i] = dl[i];
                l[i] = f;
                let tmp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = tmp - f * d[i + 1];
                if i + 1 < n - 1 {
                    du2[i] = du[i + 1];
                    du[i + 1] = -f * du2[i];
                }
                swapped[i] = true;
            }
            dl[i] = 0.0;
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = tiny;
        }
        Self {
            l,
            u0: d,
            u1: du,
            u2: du2,
            swapped,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = b.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                b.swap(i, i + 1);
            }
            b[i + 1] -= self.l[i] * b[i];
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            if i + 1 < n {
                s -= self.u1[i] * b[i + 1];
            }
            if i + 2 < n {
                s -= self.u2[i] * b[i + 2];
            }
            b[i] = s / self.u0[i];
        }
    }
}

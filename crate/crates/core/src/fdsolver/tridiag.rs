//! Symmetric tridiagonal matrices: Sturm counts, bisection, inverse iteration.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct TridiagonalSym {
    pub diag: Vec<f64>,
    /// `off[i]` couples rows `i` and `i + 1`.
    pub off: Vec<f64>,
}

impl TridiagonalSym {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::Dimension(format!(
                "tridiagonal needs off.len() + 1 == diag.len() > 0, got {} and {}",
                off.len(),
                diag.len()
            )));
        }
        Ok(TridiagonalSym { diag, off })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn norm_inf(&self) -> f64 {
        (0..self.dim())
            .map(|i| {
                let l = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
                let r = self.off.get(i).map_or(0.0, |x| x.abs());
                self.diag[i].abs() + l + r
            })
            .fold(0.0, f64::max)
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(x.len(), n);
        (0..n)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if i > 0 {
                    y += self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.off[i] * x[i + 1];
                }
                y
            })
            .collect()
    }

    /// Gershgorin interval.
    pub fn bounds(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let l = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let r = self.off.get(i).map_or(0.0, |x| x.abs());
            lo = lo.min(self.diag[i] - l - r);
            hi = hi.max(self.diag[i] + l + r);
        }
        (lo, hi)
    }

    fn pivmin(&self) -> f64 {
        let m = self.off.iter().map(|e| e * e).fold(1.0f64, f64::max);
        f64::MIN_POSITIVE * m
    }

    /// Number of eigenvalues strictly below `lambda` (negative pivots of
    /// `T - λ = L D Lᵀ`).
    pub fn sturm_count(&self, lambda: f64) -> usize {
        let pivmin = self.pivmin();
        let mut count = 0;
        let mut q = self.diag[0] - lambda;
        for i in 0..self.dim() {
            if i > 0 {
                q = self.diag[i] - lambda - self.off[i - 1] * self.off[i - 1] / q;
            }
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k`-th smallest eigenvalue (0-based), bisected until the
    /// bracket cannot shrink any further in floating point.
    pub fn eigenvalue(&self, k: usize) -> Result<f64> {
        if k >= self.dim() {
            return Err(Error::Dimension(format!("eigenvalue {k} requested from a {}×{} matrix", self.dim(), self.dim())));
        }
        let (mut lo, mut hi) = self.bounds();
        let pad = f64::EPSILON * self.norm_inf().max(f64::MIN_POSITIVE) * 4.0;
        lo -= pad;
        hi += pad;
        for _ in 0..2000 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.sturm_count(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// The `levels` smallest eigenvalues, nondecreasing.
    pub fn eigen_lowest(&self, levels: usize) -> Result<Vec<f64>> {
        if levels > self.dim() {
            return Err(Error::Dimension(format!("{levels} levels requested from a {}×{} matrix", self.dim(), self.dim())));
        }
        (0..levels).map(|k| self.eigenvalue(k)).collect()
    }

    /// Unit eigenvector for a (converged) eigenvalue, by inverse iteration.
    /// The sign is fixed so that the largest-magnitude entry is positive.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.dim();
        let tiny = f64::EPSILON * self.norm_inf().max(f64::MIN_POSITIVE);
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + ((i * 7919) % 13) as f64 / 13.0).collect();
        normalize(&mut x);
        for _ in 0..4 {
            x = self.shifted_solve(lambda, &x, tiny);
            normalize(&mut x);
        }
        let imax = (0..n).max_by(|&a, &b| x[a].abs().total_cmp(&x[b].abs())).unwrap_or(0);
        if x[imax] < 0.0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
        x
    }

    /// Solves `(T - λ) y = b` with partial pivoting; zero pivots become `tiny`.
    fn shifted_solve(&self, lambda: f64, b: &[f64], tiny: f64) -> Vec<f64> {
        let n = self.dim();
        // U has up to two superdiagonals after pivoting.
        let mut u0 = vec![0.0; n];
        let mut u1 = vec![0.0; n];
        let mut u2 = vec![0.0; n];
        let mut rhs = b.to_vec();
        let mut d = self.diag[0] - lambda;
        let mut e = if n > 1 { self.off[0] } else { 0.0 };
        let mut f = 0.0;
        for i in 0..n {
            if i + 1 < n {
                let sub = self.off[i];
                let nd = self.diag[i + 1] - lambda;
                let ne = if i + 2 < n { self.off[i + 1] } else { 0.0 };
                if sub.abs() > d.abs() {
                    // swap rows i and i+1
                    let m = d / sub;
                    u0[i] = sub;
                    u1[i] = nd;
                    u2[i] = ne;
                    rhs.swap(i, i + 1);
                    let r = rhs[i];
                    rhs[i + 1] -= m * r;
                    d = e - m * nd;
                    e = f - m * ne;
                    f = 0.0;
                } else {
                    if d == 0.0 {
                        d = tiny;
                    }
                    let m = sub / d;
                    u0[i] = d;
                    u1[i] = e;
                    u2[i] = f;
                    let r = rhs[i];
                    rhs[i + 1] -= m * r;
                    d = nd - m * e;
                    e = ne - m * f;
                    f = 0.0;
                }
            } else {
                u0[i] = if d == 0.0 { tiny } else { d };
            }
        }
        let mut y = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = rhs[i];
            if i + 1 < n {
                s -= u1[i] * y[i + 1];
            }
            if i + 2 < n {
                s -= u2[i] * y[i + 2];
            }
            let p = if u0[i].abs() < tiny { tiny.copysign(u0[i]) } else { u0[i] };
            y[i] = s / p;
        }
        y
    }
}

fn normalize(x: &mut [f64]) {
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if n > 0.0 {
        x.iter_mut().for_each(|v| *v /= n);
    }
}

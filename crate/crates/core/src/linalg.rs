//! Small dense linear algebra kernels used by the surrogate and chaos code.
//!
//! Matrices are row-major `Vec<T>` of `n * n` entries. Only what the crate
//! needs lives here: a Cholesky factor with its triangular solves and a
//! symmetric tridiagonal eigen-solver for Golub-Welsch quadrature.

use crate::Scalar;

/// Lower-triangular Cholesky factor `L` with `L Lᵀ = A`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cholesky<T> {
    n: usize,
    lower: Vec<T>,
}

impl<T: Scalar> Cholesky<T> {
    /// Factorizes a symmetric matrix. Returns `None` when a pivot is not
    /// strictly positive (matrix not numerically positive definite).
    pub fn factor(a: &[T], n: usize) -> Option<Self> {
        assert_eq!(a.len(), n * n, "matrix must be n x n");
        let mut l = vec![T::zero(); n * n];
        for j in 0..n {
            let mut d = a[j * n + j];
            for k in 0..j {
                d = d - l[j * n + k] * l[j * n + k];
            }
            if !(d > T::zero()) || !d.is_finite() {
                return None;
            }
            let djj = d.sqrt();
            l[j * n + j] = djj;
            for i in (j + 1)..n {
                let mut s = a[i * n + j];
                for k in 0..j {
                    s = s - l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / djj;
            }
        }
        Some(Self { n, lower: l })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.lower[i * self.n + j]
    }

    /// Solves `L z = b`.
    pub fn solve_lower(&self, b: &[T]) -> Vec<T> {
        let n = self.n;
        let mut z = b.to_vec();
        for i in 0..n {
            let row = &self.lower[i * n..i * n + i];
            let mut s = z[i];
            for (lk, zk) in row.iter().zip(&z[..i]) {
                s = s - *lk * *zk;
            }
            z[i] = s / self.lower[i * n + i];
        }
        z
    }

    /// Solves `Lᵀ x = z`.
    pub fn solve_upper(&self, z: &[T]) -> Vec<T> {
        let n = self.n;
        let mut x = z.to_vec();
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in (i + 1)..n {
                s = s - self.lower[k * n + i] * x[k];
            }
            x[i] = s / self.lower[i * n + i];
        }
        x
    }

    /// Solves `A x = b` with `A = L Lᵀ`.
    pub fn solve(&self, b: &[T]) -> Vec<T> {
        self.solve_upper(&self.solve_lower(b))
    }

    /// `log det A = 2 Σ log L_ii`.
    pub fn log_det(&self) -> T {
        let two = T::lit(2.0);
        (0..self.n)
            .map(|i| self.lower[i * self.n + i].ln())
            .fold(T::zero(), |acc, v| acc + v)
            * two
    }

    /// Rebuilds `L Lᵀ`.
    pub fn reconstruct(&self) -> Vec<T> {
        let n = self.n;
        let mut a = vec![T::zero(); n * n];
        for i in 0..n {
            for j in 0..=i {
                let mut s = T::zero();
                for k in 0..=j {
                    s = s + self.lower[i * n + k] * self.lower[j * n + k];
                }
                a[i * n + j] = s;
                a[j * n + i] = s;
            }
        }
        a
    }
}

/// Eigen-decomposition of a symmetric tridiagonal matrix by implicit QL
/// with Wilkinson shifts.
///
/// `diag` has length `n`, `off` has length `n - 1` (sub-diagonal). Returns the
/// eigenvalues together with the first component of each normalized
/// eigenvector, which is all Golub-Welsch needs.
pub fn tridiagonal_eigen<T: Scalar>(diag: &[T], off: &[T]) -> (Vec<T>, Vec<T>) {
    let n = diag.len();
    assert!(n == 0 || off.len() + 1 == n, "off-diagonal must have n-1 entries");
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(T::zero());
    // first row of the accumulated eigenvector matrix
    let mut z: Vec<T> = (0..n)
        .map(|i| if i == 0 { T::one() } else { T::zero() })
        .collect();
    let two = T::lit(2.0);

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + if g >= T::zero() { r.abs() } else { -r.abs() });
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if underflow {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    (d, z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cholesky_solves_spd_system() {
        let a = vec![4.0, 2.0, 0.6, 2.0, 5.0, 1.0, 0.6, 1.0, 3.0];
        let c = Cholesky::factor(&a, 3).unwrap();
        let b = [1.0, -2.0, 0.5];
        let x = c.solve(&b);
        for i in 0..3 {
            let r: f64 = (0..3).map(|j| a[i * 3 + j] * x[j]).sum::<f64>() - b[i];
            assert!(r.abs() < 1e-14);
        }
        let back = c.reconstruct();
        for (u, v) in back.iter().zip(&a) {
            assert!((u - v).abs() < 1e-14);
        }
        // det = 4*(15-1) - 2*(6-0.6) + 0.6*(2-3) = 56 - 10.8 - 0.6
        assert!((c.log_det() - 44.6f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = vec![1.0, 2.0, 2.0, 1.0];
        assert!(Cholesky::factor(&a, 2).is_none());
    }

    #[test]
    fn tridiagonal_eigen_matches_two_by_two() {
        // [[2, 1], [1, 2]] has eigenvalues 1 and 3 with first components ±1/√2
        let (mut vals, z) = tridiagonal_eigen::<f64>(&[2.0, 2.0], &[1.0]);
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((vals[0] - 1.0).abs() < 1e-14);
        assert!((vals[1] - 3.0).abs() < 1e-14);
        for zi in z {
            assert!((zi * zi - 0.5).abs() < 1e-14);
        }
    }
}

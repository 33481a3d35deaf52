use crate::Scalar;

/// Orthonormal probabilists' Hermite polynomial `He_k(t) / √(k!)`.
///
/// Uses `ψ_{k+1} = (t ψ_k − √k ψ_{k−1}) / √(k+1)`.
pub fn hermite_value<T: Scalar>(k: usize, t: T) -> T {
    let mut prev = T::zero();
    let mut cur = T::one();
    for j in 0..k {
        let jt = T::from_usize_lossy(j);
        let next = (t * cur - jt.sqrt() * prev) / (jt + T::one()).sqrt();
        prev = cur;
        cur = next;
    }
    cur
}

/// `[ψ_0(t), ..., ψ_m(t)]`.
pub fn hermite_values<T: Scalar>(m: usize, t: T) -> Vec<T> {
    let mut out = Vec::with_capacity(m + 1);
    out.push(T::one());
    if m >= 1 {
        out.push(t);
    }
    for j in 1..m {
        let jt = T::from_usize_lossy(j);
        let next = (t * out[j] - jt.sqrt() * out[j - 1]) / (jt + T::one()).sqrt();
        out.push(next);
    }
    out
}

/// Total-degree tensor Hermite basis in two variables:
/// `φ_(k1,k2)(t) = ψ_k1(t1) ψ_k2(t2)` with `k1 + k2 ≤ order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermiteBasis {
    order: usize,
    terms: Vec<(usize, usize)>,
}

impl HermiteBasis {
    pub const DIM: usize = 2;

    /// Terms are graded by total degree, then by descending `k1`;
    /// `(0, 0)` comes first.
    pub fn total_degree(order: usize) -> Self {
        let mut terms = Vec::with_capacity((order + 1) * (order + 2) / 2);
        for deg in 0..=order {
            for k2 in 0..=deg {
                terms.push((deg - k2, k2));
            }
        }
        Self { order, terms }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        Self::DIM
    }

    pub fn terms(&self) -> &[(usize, usize)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// All basis functions at one standardized point, in term order.
    pub fn eval<T: Scalar>(&self, t: [T; 2]) -> Vec<T> {
        let a = hermite_values(self.order, t[0]);
        let b = hermite_values(self.order, t[1]);
        self.terms.iter().map(|&(i, j)| a[i] * b[j]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pce::gauss_hermite_1d;

    #[test]
    fn low_degrees() {
        assert_eq!(hermite_value(0, 3.7), 1.0);
        assert_eq!(hermite_value(1, -0.4), -0.4);
        assert!((hermite_value(2, 0.0) + 1.0 / 2f64.sqrt()).abs() < 1e-15);
        // He_3(t) = t³ − 3t, normalized by √6
        let t = 1.3f64;
        assert!((hermite_value(3, t) - (t.powi(3) - 3.0 * t) / 6f64.sqrt()).abs() < 1e-14);
        assert_eq!(hermite_values(3, t)[3], hermite_value(3, t));
    }

    #[test]
    fn orthonormal_under_gaussian_weight() {
        let (nodes, weights) = gauss_hermite_1d::<f64>(30);
        for a in 0..12 {
            for b in 0..12 {
                let ip: f64 = nodes
                    .iter()
                    .zip(&weights)
                    .map(|(&t, &w)| w * hermite_value(a, t) * hermite_value(b, t))
                    .sum();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((ip - want).abs() < 1e-8, "<{a},{b}> = {ip}");
            }
        }
    }

    #[test]
    fn basis_size() {
        for m in 0..9 {
            let b = HermiteBasis::total_degree(m);
            assert_eq!(b.len(), (m + 1) * (m + 2) / 2);
            assert_eq!(b.terms()[0], (0, 0));
            assert!(b.terms().iter().all(|&(i, j)| i + j <= m));
        }
    }
}

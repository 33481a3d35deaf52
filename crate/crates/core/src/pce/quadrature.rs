use crate::linalg::tridiagonal_eigen;
use crate::Scalar;

/// Tensor-product rule for the standard normal measure. Nodes are stored
/// flat with stride `dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<T> {
    dim: usize,
    nodes: Vec<T>,
    weights: Vec<T>,
    points_per_dim: usize,
}

impl<T: Scalar> QuadratureRule<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn points_per_dim(&self) -> usize {
        self.points_per_dim
    }

    /// Polynomials up to this degree per coordinate integrate exactly.
    pub fn exactness_degree(&self) -> usize {
        2 * self.points_per_dim - 1
    }

    pub fn node(&self, q: usize) -> &[T] {
        &self.nodes[q * self.dim..(q + 1) * self.dim]
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[T], T)> + '_ {
        self.nodes.chunks(self.dim).zip(self.weights.iter().copied())
    }

    /// `Σ_q w_q f(node_q)`.
    pub fn integrate<F: FnMut(&[T]) -> T>(&self, mut f: F) -> T {
        self.iter().fold(T::zero(), |acc, (n, w)| acc + w * f(n))
    }

    /// Largest `|node coordinate|`, i.e. the furthest offset in units of σ.
    pub fn max_abs_node(&self) -> T {
        self.nodes.iter().fold(T::zero(), |a, &v| a.max(v.abs()))
    }
}

/// 1-D Gauss-Hermite nodes and weights for `N(0, 1)` by Golub-Welsch.
/// Weights sum to one; nodes are ascending and exactly symmetric.
pub fn gauss_hermite_1d<T: Scalar>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n >= 1, "need at least one node");
    let diag = vec![T::zero(); n];
    let off: Vec<T> = (1..n).map(|k| T::from_usize_lossy(k).sqrt()).collect();
    let (vals, first) = tridiagonal_eigen(&diag, &off);
    let mut pairs: Vec<(T, T)> = vals.into_iter().zip(first.into_iter().map(|z| z * z)).collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));

    let half = T::lit(0.5);
    let mut nodes: Vec<T> = pairs.iter().map(|p| p.0).collect();
    let mut weights: Vec<T> = pairs.iter().map(|p| p.1).collect();
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let x = (nodes[j] - nodes[i]) * half;
        let w = (weights[i] + weights[j]) * half;
        nodes[i] = -x;
        nodes[j] = x;
        weights[i] = w;
        weights[j] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = T::zero();
    }
    let total = weights.iter().fold(T::zero(), |a, &w| a + w);
    for w in weights.iter_mut() {
        *w = *w / total;
    }
    (nodes, weights)
}

/// Tensor-product Gauss-Hermite rule in standardized coordinates; the last
/// coordinate varies fastest.
pub fn gauss_hermite_rule<T: Scalar>(points_per_dim: usize, dim: usize) -> QuadratureRule<T> {
    assert!(dim >= 1, "dimension must be positive");
    let (x, w) = gauss_hermite_1d::<T>(points_per_dim);
    let total = points_per_dim.pow(dim as u32);
    let mut nodes = Vec::with_capacity(total * dim);
    let mut weights = Vec::with_capacity(total);
    let mut idx = vec![0usize; dim];
    for _ in 0..total {
        let mut wt = T::one();
        for &i in &idx {
            nodes.push(x[i]);
            wt = wt * w[i];
        }
        weights.push(wt);
        for d in (0..dim).rev() {
            idx[d] += 1;
            if idx[d] < points_per_dim {
                break;
            }
            idx[d] = 0;
        }
    }
    QuadratureRule {
        dim,
        nodes,
        weights,
        points_per_dim,
    }
}

//! Evenly spaced evaluation grids over rectangular domains.

use serde::{Deserialize, Serialize};

use crate::dataset::DesignPoint;
use crate::Scalar;

/// Axis-aligned box `[x1_lo, x1_hi] × [x2_lo, x2_hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain<T> {
    pub x1: (T, T),
    pub x2: (T, T),
}

impl<T: Scalar> Domain<T> {
    /// The optimization box `[0, 1]²`.
    pub fn unit() -> Self {
        Self {
            x1: (T::zero(), T::one()),
            x2: (T::zero(), T::one()),
        }
    }

    /// `[0, 1]²` grown by `margin` on every side.
    pub fn extended(margin: T) -> Self {
        Self {
            x1: (-margin, T::one() + margin),
            x2: (-margin, T::one() + margin),
        }
    }

    pub fn contains(&self, p: &DesignPoint<T>) -> bool {
        p.x1 >= self.x1.0 && p.x1 <= self.x1.1 && p.x2 >= self.x2.0 && p.x2 <= self.x2.1
    }

    pub fn clamp(&self, p: DesignPoint<T>) -> DesignPoint<T> {
        DesignPoint::new(
            p.x1.max(self.x1.0).min(self.x1.1),
            p.x2.max(self.x2.0).min(self.x2.1),
        )
    }

    /// Row-major grid (`x1` fastest) with `n1 × n2` points including the
    /// edges. A single point along an axis sits at the lower edge.
    pub fn grid(&self, n1: usize, n2: usize) -> Vec<DesignPoint<T>> {
        let a = linspace(self.x1.0, self.x1.1, n1);
        let b = linspace(self.x2.0, self.x2.1, n2);
        b.iter()
            .flat_map(|&x2| a.iter().map(move |&x1| DesignPoint::new(x1, x2)))
            .collect()
    }
}

pub fn linspace<T: Scalar>(lo: T, hi: T, n: usize) -> Vec<T> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let last = T::from_usize_lossy(n - 1);
            (0..n)
                .map(|i| {
                    if i == n - 1 {
                        hi
                    } else {
                        lo + (hi - lo) * T::from_usize_lossy(i) / last
                    }
                })
                .collect()
        }
    }
}

/// `‖v‖ = (1/N) √(Σ v²)`, the grid norm used for the noise studies.
pub fn grid_norm<T: Scalar>(values: &[T]) -> T {
    if values.is_empty() {
        return T::zero();
    }
    let ss = values.iter().fold(T::zero(), |acc, &v| acc + v * v);
    ss.sqrt() / T::from_usize_lossy(values.len())
}

use alloc::vec::Vec;

use super::gates::{unitarity_defect4, Mat4};
use crate::math::sqrt;
use crate::tensor::{AxisLabel, Tensor, TensorError};
use crate::C64;

/// A two-qubit gate written as `sum_s P[s_k', s_k, s] Q[s_l', s_l, s]`.
#[derive(Debug, Clone)]
pub struct SplitGate {
    /// Axes `(s_k', s_k, s)`.
    pub p: Tensor,
    /// Axes `(s_l', s_l, s)`.
    pub q: Tensor,
    /// Number of kept singular values.
    pub rank: usize,
    /// Deviation of the input from unitarity; callers may warn when large.
    pub unitarity_defect: f64,
}

pub(crate) const OUT: AxisLabel = AxisLabel(0);
pub(crate) const IN: AxisLabel = AxisLabel(1);
pub(crate) const GATE: AxisLabel = AxisLabel(2);

/// Operator-Schmidt split of a two-qubit gate by SVD of the matrix regrouped
/// as `(s_k' s_k) x (s_l' s_l)`. Each factor absorbs the square root of the
/// singular values.
pub fn gate_split(matrix: &Mat4, tolerance: f64) -> Result<SplitGate, TensorError> {
    if !super::gates::is_finite(matrix) {
        return Err(TensorError::NonFinite);
    }
    if tolerance.is_nan() || tolerance < 0.0 {
        return Err(TensorError::NegativeTolerance);
    }
    // regroup: row = 2 s_k' + s_k, col = 2 s_l' + s_l
    let mut m = [C64::new(0.0, 0.0); 16];
    for ko in 0..2 {
        for lo in 0..2 {
            for ki in 0..2 {
                for li in 0..2 {
                    m[(2 * ko + ki) * 4 + 2 * lo + li] = matrix[(2 * ko + lo) * 4 + 2 * ki + li];
                }
            }
        }
    }
    let svd = crate::linalg::svd(&m, 4, 4);
    let rank = crate::linalg::kept_rank(&svd.s, tolerance);
    let roots: Vec<f64> = svd.s[..rank].iter().map(|&s| sqrt(s)).collect();

    let mut p = Vec::with_capacity(4 * rank);
    for row in 0..4 {
        p.extend(roots.iter().enumerate().map(|(s, r)| svd.u[row * 4 + s] * r));
    }
    // q is stored (s_l', s_l, s): transpose the kept rows of vh
    let mut q = Vec::with_capacity(4 * rank);
    for col in 0..4 {
        q.extend(roots.iter().enumerate().map(|(s, r)| svd.vh[s * 4 + col] * r));
    }
    Ok(SplitGate {
        p: Tensor::new(alloc::vec![2, 2, rank], p, alloc::vec![OUT, IN, GATE])?,
        q: Tensor::new(alloc::vec![2, 2, rank], q, alloc::vec![OUT, IN, GATE])?,
        rank,
        unitarity_defect: unitarity_defect4(matrix),
    })
}

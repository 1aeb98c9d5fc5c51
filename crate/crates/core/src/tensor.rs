//! Dense complex tensors with labelled axes.
//!
//! Storage is row-major over `dims` (the last axis varies fastest). Every
//! reshape and permutation is explicit; nothing is ever implicitly transposed.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::C64;

/// Opaque axis identifier. Callers decide what the value means (physical
/// index, graph edge, gate index...); the tensor only requires labels to be
/// unique within itself.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AxisLabel(pub u64);

impl AxisLabel {
    /// Label given to the fresh axis created by [`svd_factorize`].
    pub const SVD_BOND: AxisLabel = AxisLabel(u64::MAX);
}

impl fmt::Debug for AxisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("data length {actual} does not match product of dims {expected}")]
    DataLength { expected: usize, actual: usize },
    #[error("axis extent must be at least 1")]
    ZeroExtent,
    #[error("expected {expected} axis labels, got {actual}")]
    LabelCount { expected: usize, actual: usize },
    #[error("axis label {0:?} appears twice")]
    DuplicateLabel(AxisLabel),
    #[error("axis {axis} out of range for rank-{rank} tensor")]
    AxisOutOfRange { axis: usize, rank: usize },
    #[error("axis {0} is used twice")]
    AxisReused(usize),
    #[error("extent mismatch on paired axes: {left} vs {right}")]
    ExtentMismatch { left: usize, right: usize },
    #[error("invalid permutation")]
    BadPermutation,
    #[error("index {index} out of range for axis of extent {extent}")]
    IndexOutOfRange { index: usize, extent: usize },
    #[error("row axes must be a proper nonempty subset of the tensor axes")]
    BadRowAxes,
    #[error("tensor contains non-finite values")]
    NonFinite,
    #[error("negative SVD tolerance")]
    NegativeTolerance,
    #[error("contraction cost overflows 128 bits")]
    CostOverflow,
}

/// Dense complex tensor.
#[derive(Clone, PartialEq)]
pub struct Tensor {
    dims: Vec<usize>,
    data: Vec<C64>,
    labels: Vec<AxisLabel>,
}

impl fmt::Debug for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Tensor")
            .field("dims", &self.dims)
            .field("labels", &self.labels)
            .finish_non_exhaustive()
    }
}

fn check_labels(labels: &[AxisLabel]) -> Result<(), TensorError> {
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(TensorError::DuplicateLabel(*l));
        }
    }
    Ok(())
}

/// Row-major strides for `dims`.
pub fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

impl Tensor {
    pub fn new(
        dims: Vec<usize>,
        data: Vec<C64>,
        labels: Vec<AxisLabel>,
    ) -> Result<Self, TensorError> {
        if dims.contains(&0) {
            return Err(TensorError::ZeroExtent);
        }
        let expected: usize = dims.iter().product();
        if expected != data.len() {
            return Err(TensorError::DataLength {
                expected,
                actual: data.len(),
            });
        }
        if labels.len() != dims.len() {
            return Err(TensorError::LabelCount {
                expected: dims.len(),
                actual: labels.len(),
            });
        }
        check_labels(&labels)?;
        Ok(Tensor { dims, data, labels })
    }

    /// Tensor with labels `0..rank`.
    pub fn from_data(dims: Vec<usize>, data: Vec<C64>) -> Result<Self, TensorError> {
        let labels = (0..dims.len() as u64).map(AxisLabel).collect();
        Tensor::new(dims, data, labels)
    }

    pub fn zeros(dims: Vec<usize>, labels: Vec<AxisLabel>) -> Result<Self, TensorError> {
        let n = dims.iter().product();
        Tensor::new(dims, vec![C64::new(0.0, 0.0); n], labels)
    }

    pub fn scalar(value: C64) -> Self {
        Tensor {
            dims: Vec::new(),
            data: vec![value],
            labels: Vec::new(),
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<C64> {
        self.data
    }

    pub fn labels(&self) -> &[AxisLabel] {
        &self.labels
    }

    pub fn rank(&self) -> usize {
        self.dims.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn axis_of(&self, label: AxisLabel) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    /// Value of a rank-0 tensor (or the first element otherwise).
    pub fn scalar_value(&self) -> C64 {
        self.data[0]
    }

    pub fn get(&self, index: &[usize]) -> Option<C64> {
        if index.len() != self.dims.len() || index.iter().zip(&self.dims).any(|(i, d)| i >= d) {
            return None;
        }
        let off = index
            .iter()
            .zip(strides(&self.dims))
            .map(|(i, s)| i * s)
            .sum::<usize>();
        Some(self.data[off])
    }

    pub fn set_labels(&mut self, labels: Vec<AxisLabel>) -> Result<(), TensorError> {
        if labels.len() != self.dims.len() {
            return Err(TensorError::LabelCount {
                expected: self.dims.len(),
                actual: labels.len(),
            });
        }
        check_labels(&labels)?;
        self.labels = labels;
        Ok(())
    }

    pub fn relabel(&mut self, axis: usize, label: AxisLabel) -> Result<(), TensorError> {
        let rank = self.rank();
        if axis >= rank {
            return Err(TensorError::AxisOutOfRange { axis, rank });
        }
        let mut labels = self.labels.clone();
        labels[axis] = label;
        self.set_labels(labels)
    }

    pub fn conj(&self) -> Tensor {
        Tensor {
            dims: self.dims.clone(),
            data: self.data.iter().map(|z| z.conj()).collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn scale(&self, alpha: C64) -> Tensor {
        Tensor {
            dims: self.dims.clone(),
            data: self.data.iter().map(|z| z * alpha).collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        crate::math::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Reinterpret the same row-major data under new extents.
    pub fn reshape(self, dims: Vec<usize>, labels: Vec<AxisLabel>) -> Result<Tensor, TensorError> {
        Tensor::new(dims, self.data, labels)
    }

    /// Output axis `i` is input axis `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Tensor, TensorError> {
        let rank = self.rank();
        if perm.len() != rank {
            return Err(TensorError::BadPermutation);
        }
        let mut seen = vec![false; rank];
        for &p in perm {
            if p >= rank || seen[p] {
                return Err(TensorError::BadPermutation);
            }
            seen[p] = true;
        }
        if perm.iter().enumerate().all(|(i, &p)| i == p) {
            return Ok(self.clone());
        }
        let in_strides = strides(&self.dims);
        let dims: Vec<usize> = perm.iter().map(|&p| self.dims[p]).collect();
        let src_strides: Vec<usize> = perm.iter().map(|&p| in_strides[p]).collect();
        let labels = perm.iter().map(|&p| self.labels[p]).collect();
        let data = gather(&self.data, &dims, &src_strides);
        Ok(Tensor { dims, data, labels })
    }

    /// Fix `axis` to `index`, dropping the axis.
    pub fn select(&self, axis: usize, index: usize) -> Result<Tensor, TensorError> {
        let rank = self.rank();
        if axis >= rank {
            return Err(TensorError::AxisOutOfRange { axis, rank });
        }
        let extent = self.dims[axis];
        if index >= extent {
            return Err(TensorError::IndexOutOfRange { index, extent });
        }
        let outer: usize = self.dims[..axis].iter().product();
        let inner: usize = self.dims[axis + 1..].iter().product();
        let mut data = Vec::with_capacity(outer * inner);
        for o in 0..outer {
            let base = (o * extent + index) * inner;
            data.extend_from_slice(&self.data[base..base + inner]);
        }
        let mut dims = self.dims.clone();
        dims.remove(axis);
        let mut labels = self.labels.clone();
        labels.remove(axis);
        Ok(Tensor { dims, data, labels })
    }
}

// Walks the output in row-major order, reading the source through `src_strides`.
fn gather(src: &[C64], dims: &[usize], src_strides: &[usize]) -> Vec<C64> {
    let total: usize = dims.iter().product();
    let mut out = Vec::with_capacity(total);
    if dims.is_empty() {
        out.push(src[0]);
        return out;
    }
    let rank = dims.len();
    let last = rank - 1;
    let mut idx = vec![0usize; rank];
    let mut off = 0usize;
    let inner = dims[last];
    let inner_stride = src_strides[last];
    loop {
        for k in 0..inner {
            out.push(src[off + k * inner_stride]);
        }
        // odometer over the outer axes
        let mut ax = last;
        loop {
            if ax == 0 {
                return out;
            }
            ax -= 1;
            idx[ax] += 1;
            off += src_strides[ax];
            if idx[ax] < dims[ax] {
                break;
            }
            off -= src_strides[ax] * dims[ax];
            idx[ax] = 0;
        }
    }
}

fn validate_pairs(a: &[usize], b: &[usize], pairs: &[(usize, usize)]) -> Result<(), TensorError> {
    let mut used_a = vec![false; a.len()];
    let mut used_b = vec![false; b.len()];
    for &(i, j) in pairs {
        if i >= a.len() {
            return Err(TensorError::AxisOutOfRange {
                axis: i,
                rank: a.len(),
            });
        }
        if j >= b.len() {
            return Err(TensorError::AxisOutOfRange {
                axis: j,
                rank: b.len(),
            });
        }
        if used_a[i] {
            return Err(TensorError::AxisReused(i));
        }
        if used_b[j] {
            return Err(TensorError::AxisReused(j));
        }
        used_a[i] = true;
        used_b[j] = true;
        if a[i] != b[j] {
            return Err(TensorError::ExtentMismatch {
                left: a[i],
                right: b[j],
            });
        }
    }
    Ok(())
}

/// Contract `a` with `b` over the listed `(axis of a, axis of b)` pairs.
///
/// The result carries the unpaired axes of `a` followed by the unpaired axes
/// of `b`, in their original order and with their labels.
pub fn contract_pair(
    a: &Tensor,
    b: &Tensor,
    pairs: &[(usize, usize)],
) -> Result<Tensor, TensorError> {
    validate_pairs(&a.dims, &b.dims, pairs)?;
    let free_a: Vec<usize> = (0..a.rank())
        .filter(|i| !pairs.iter().any(|p| p.0 == *i))
        .collect();
    let free_b: Vec<usize> = (0..b.rank())
        .filter(|j| !pairs.iter().any(|p| p.1 == *j))
        .collect();

    let mut labels: Vec<AxisLabel> = free_a.iter().map(|&i| a.labels[i]).collect();
    labels.extend(free_b.iter().map(|&j| b.labels[j]));
    check_labels(&labels)?;
    let mut dims: Vec<usize> = free_a.iter().map(|&i| a.dims[i]).collect();
    dims.extend(free_b.iter().map(|&j| b.dims[j]));

    let perm_a: Vec<usize> = free_a
        .iter()
        .copied()
        .chain(pairs.iter().map(|p| p.0))
        .collect();
    let perm_b: Vec<usize> = pairs
        .iter()
        .map(|p| p.1)
        .chain(free_b.iter().copied())
        .collect();
    let pa = a.permute(&perm_a)?;
    let pb = b.permute(&perm_b)?;

    let m: usize = free_a.iter().map(|&i| a.dims[i]).product();
    let n: usize = free_b.iter().map(|&j| b.dims[j]).product();
    let k: usize = pairs.iter().map(|p| a.dims[p.0]).product();
    let data = matmul(&pa.data, &pb.data, m, k, n);
    Ok(Tensor { dims, data, labels })
}

/// Row-major `(m x k) * (k x n)`.
pub(crate) fn matmul(a: &[C64], b: &[C64], m: usize, k: usize, n: usize) -> Vec<C64> {
    let zero = C64::new(0.0, 0.0);
    let mut out = vec![zero; m * n];
    for i in 0..m {
        let row = &mut out[i * n..(i + 1) * n];
        for p in 0..k {
            let x = a[i * k + p];
            if x == zero {
                continue;
            }
            let brow = &b[p * n..(p + 1) * n];
            for (o, y) in row.iter_mut().zip(brow) {
                *o += x * y;
            }
        }
    }
    out
}

/// Multiply count of [`contract_pair`] on tensors with the given extents:
/// free extents of `a` times free extents of `b` times shared extents.
pub fn contraction_cost(
    dims_a: &[usize],
    dims_b: &[usize],
    shared: &[(usize, usize)],
) -> Result<u128, TensorError> {
    validate_pairs(dims_a, dims_b, shared)?;
    let mut cost: u128 = 1;
    let mut mul = |d: usize| -> Result<(), TensorError> {
        cost = cost
            .checked_mul(d as u128)
            .ok_or(TensorError::CostOverflow)?;
        Ok(())
    };
    for (i, &d) in dims_a.iter().enumerate() {
        if !shared.iter().any(|p| p.0 == i) {
            mul(d)?;
        }
    }
    for (j, &d) in dims_b.iter().enumerate() {
        if !shared.iter().any(|p| p.1 == j) {
            mul(d)?;
        }
    }
    for &(i, _) in shared {
        mul(dims_a[i])?;
    }
    Ok(cost)
}

/// Result of [`svd_factorize`].
#[derive(Debug, Clone)]
pub struct Factorization {
    /// Row axes followed by a new axis of extent `kept_rank`.
    pub u: Tensor,
    /// All singular values, non-increasing.
    pub s: Vec<f64>,
    /// New axis of extent `kept_rank` followed by the remaining axes.
    pub v: Tensor,
    pub kept_rank: usize,
}

/// SVD of `t` viewed as a matrix (row_axes x remaining axes).
///
/// Singular values `s_i > tolerance * s_max` are kept; at least one is always
/// kept so the factors stay valid network tensors. The new axis carries
/// [`AxisLabel::SVD_BOND`] on both factors.
pub fn svd_factorize(
    t: &Tensor,
    row_axes: &[usize],
    tolerance: f64,
) -> Result<Factorization, TensorError> {
    let rank = t.rank();
    if row_axes.is_empty() || row_axes.len() >= rank {
        return Err(TensorError::BadRowAxes);
    }
    let mut seen = vec![false; rank];
    for &r in row_axes {
        if r >= rank || seen[r] {
            return Err(TensorError::BadRowAxes);
        }
        seen[r] = true;
    }
    if tolerance.is_nan() || tolerance < 0.0 {
        return Err(TensorError::NegativeTolerance);
    }
    if !t.is_finite() {
        return Err(TensorError::NonFinite);
    }
    let col_axes: Vec<usize> = (0..rank).filter(|i| !seen[*i]).collect();
    let perm: Vec<usize> = row_axes.iter().chain(&col_axes).copied().collect();
    let p = t.permute(&perm)?;
    let m: usize = row_axes.iter().map(|&i| t.dims[i]).product();
    let n: usize = col_axes.iter().map(|&i| t.dims[i]).product();

    let svd = crate::linalg::svd(&p.data, m, n);
    let kept = crate::linalg::kept_rank(&svd.s, tolerance);
    let k = svd.s.len();

    let mut u_data = Vec::with_capacity(m * kept);
    for i in 0..m {
        u_data.extend_from_slice(&svd.u[i * k..i * k + kept]);
    }
    let v_data = svd.vh[..kept * n].to_vec();

    let mut u_dims: Vec<usize> = row_axes.iter().map(|&i| t.dims[i]).collect();
    u_dims.push(kept);
    let mut u_labels: Vec<AxisLabel> = row_axes.iter().map(|&i| t.labels[i]).collect();
    u_labels.push(AxisLabel::SVD_BOND);
    let mut v_dims = vec![kept];
    v_dims.extend(col_axes.iter().map(|&i| t.dims[i]));
    let mut v_labels = vec![AxisLabel::SVD_BOND];
    v_labels.extend(col_axes.iter().map(|&i| t.labels[i]));

    Ok(Factorization {
        u: Tensor::new(u_dims, u_data, u_labels)?,
        s: svd.s,
        v: Tensor::new(v_dims, v_data, v_labels)?,
        kept_rank: kept,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn labels(start: u64, n: usize) -> Vec<AxisLabel> {
        (start..start + n as u64).map(AxisLabel).collect()
    }

    fn random(dims: &[usize], first_label: u64, rng: &mut ChaCha8Rng) -> Tensor {
        let n = dims.iter().product();
        let data = (0..n)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        Tensor::new(dims.to_vec(), data, labels(first_label, dims.len())).unwrap()
    }

    // Independent oracle: enumerate every output and summed index explicitly.
    fn naive_contract(a: &Tensor, b: &Tensor, pairs: &[(usize, usize)]) -> Vec<C64> {
        let free_a: Vec<usize> = (0..a.rank())
            .filter(|i| !pairs.iter().any(|p| p.0 == *i))
            .collect();
        let free_b: Vec<usize> = (0..b.rank())
            .filter(|j| !pairs.iter().any(|p| p.1 == *j))
            .collect();
        let out_dims: Vec<usize> = free_a
            .iter()
            .map(|&i| a.dims()[i])
            .chain(free_b.iter().map(|&j| b.dims()[j]))
            .collect();
        let sum_dims: Vec<usize> = pairs.iter().map(|p| a.dims()[p.0]).collect();
        let out_n: usize = out_dims.iter().product();
        let sum_n: usize = sum_dims.iter().product();
        let mut out = Vec::new();
        for o in 0..out_n {
            let oi = unravel(o, &out_dims);
            let mut acc = C64::new(0.0, 0.0);
            for s in 0..sum_n {
                let si = unravel(s, &sum_dims);
                let mut ia = vec![0; a.rank()];
                let mut ib = vec![0; b.rank()];
                for (k, &ax) in free_a.iter().enumerate() {
                    ia[ax] = oi[k];
                }
                for (k, &ax) in free_b.iter().enumerate() {
                    ib[ax] = oi[free_a.len() + k];
                }
                for (k, p) in pairs.iter().enumerate() {
                    ia[p.0] = si[k];
                    ib[p.1] = si[k];
                }
                acc += a.get(&ia).unwrap() * b.get(&ib).unwrap();
            }
            out.push(acc);
        }
        out
    }

    fn unravel(mut x: usize, dims: &[usize]) -> Vec<usize> {
        let mut idx = vec![0; dims.len()];
        for i in (0..dims.len()).rev() {
            idx[i] = x % dims[i];
            x /= dims[i];
        }
        idx
    }

    fn max_diff(a: &[C64], b: &[C64]) -> f64 {
        assert_eq!(a.len(), b.len());
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn identity_times_vector() {
        let id = Tensor::new(
            vec![2, 2],
            vec![c(1.0), c(0.0), c(0.0), c(1.0)],
            labels(0, 2),
        )
        .unwrap();
        let v = Tensor::new(vec![2], vec![c(3.0), c(4.0)], labels(10, 1)).unwrap();
        let r = contract_pair(&id, &v, &[(1, 0)]).unwrap();
        assert_eq!(r.dims(), &[2]);
        assert_eq!(r.data(), &[c(3.0), c(4.0)]);
        assert_eq!(r.labels(), &[AxisLabel(0)]);
    }

    #[test]
    fn dot_product() {
        let a = Tensor::new(vec![2], vec![c(1.0), c(2.0)], labels(0, 1)).unwrap();
        let b = Tensor::new(vec![2], vec![c(3.0), c(4.0)], labels(1, 1)).unwrap();
        let r = contract_pair(&a, &b, &[(0, 0)]).unwrap();
        assert_eq!(r.rank(), 0);
        assert_eq!(r.scalar_value(), c(11.0));
    }

    #[test]
    fn three_way_against_loops() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random(&[2, 4, 2], 0, &mut rng);
        let b = random(&[2, 2, 3], 10, &mut rng);
        let r = contract_pair(&a, &b, &[(2, 1)]).unwrap();
        assert_eq!(r.dims(), &[2, 4, 2, 3]);
        assert!(max_diff(r.data(), &naive_contract(&a, &b, &[(2, 1)])) < 1e-12);
    }

    #[test]
    fn contraction_errors() {
        let a = Tensor::from_data(vec![2, 3], vec![c(0.0); 6]).unwrap();
        let b = Tensor::new(vec![2], vec![c(0.0); 2], labels(5, 1)).unwrap();
        assert!(matches!(
            contract_pair(&a, &b, &[(1, 0)]),
            Err(TensorError::ExtentMismatch { .. })
        ));
        assert!(matches!(
            contract_pair(&a, &b, &[(2, 0)]),
            Err(TensorError::AxisOutOfRange { .. })
        ));
        assert!(matches!(
            contract_pair(&a, &a, &[(0, 0), (0, 1)]),
            Err(TensorError::AxisReused(0))
        ));
    }

    #[test]
    fn tensor_invariants() {
        assert!(matches!(
            Tensor::from_data(vec![2, 0], vec![]),
            Err(TensorError::ZeroExtent)
        ));
        assert!(matches!(
            Tensor::from_data(vec![2, 2], vec![c(0.0); 3]),
            Err(TensorError::DataLength { .. })
        ));
        assert!(matches!(
            Tensor::new(
                vec![2, 2],
                vec![c(0.0); 4],
                vec![AxisLabel(1), AxisLabel(1)]
            ),
            Err(TensorError::DuplicateLabel(_))
        ));
    }

    #[test]
    fn cost_examples() {
        assert_eq!(contraction_cost(&[2, 2], &[2, 2], &[(1, 0)]).unwrap(), 8);
        assert_eq!(
            contraction_cost(&[4, 4, 2], &[2, 4], &[(2, 0)]).unwrap(),
            128
        );
        assert_eq!(contraction_cost(&[2, 2], &[3], &[]).unwrap(), 12);
        assert!(contraction_cost(&[2, 3], &[2], &[(1, 0)]).is_err());
        assert_eq!(
            contraction_cost(&[1 << 40, 1 << 40], &[1 << 40, 1 << 40], &[]),
            Err(TensorError::CostOverflow)
        );
    }

    #[test]
    fn permute_round_trip_and_select() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let t = random(&[2, 3, 4], 0, &mut rng);
        let p = t.permute(&[2, 0, 1]).unwrap();
        assert_eq!(p.dims(), &[4, 2, 3]);
        assert_eq!(p.get(&[3, 1, 2]), t.get(&[1, 2, 3]));
        assert_eq!(p.permute(&[1, 2, 0]).unwrap(), t);
        let s = t.select(1, 2).unwrap();
        assert_eq!(s.dims(), &[2, 4]);
        assert_eq!(s.get(&[1, 3]), t.get(&[1, 2, 3]));
        assert_eq!(s.labels(), &[AxisLabel(0), AxisLabel(2)]);
        assert!(t.select(1, 3).is_err());
    }

    #[test]
    fn svd_identity_and_rank_one() {
        let id = Tensor::from_data(vec![2, 2], vec![c(1.0), c(0.0), c(0.0), c(1.0)]).unwrap();
        let f = svd_factorize(&id, &[0], 0.0).unwrap();
        assert_eq!(f.kept_rank, 2);
        assert!((f.s[0] - 1.0).abs() < 1e-15 && (f.s[1] - 1.0).abs() < 1e-15);

        // outer([1,0],[0,1])
        let outer = Tensor::from_data(vec![2, 2], vec![c(0.0), c(1.0), c(0.0), c(0.0)]).unwrap();
        assert_eq!(svd_factorize(&outer, &[0], 1e-12).unwrap().kept_rank, 1);

        let zero = Tensor::from_data(vec![2, 3], vec![c(0.0); 6]).unwrap();
        assert_eq!(svd_factorize(&zero, &[0], 1e-12).unwrap().kept_rank, 1);
    }

    #[test]
    fn svd_errors() {
        let t = Tensor::from_data(vec![2, 2], vec![c(1.0); 4]).unwrap();
        assert_eq!(
            svd_factorize(&t, &[], 0.0).unwrap_err(),
            TensorError::BadRowAxes
        );
        assert_eq!(
            svd_factorize(&t, &[0, 1], 0.0).unwrap_err(),
            TensorError::BadRowAxes
        );
        assert_eq!(
            svd_factorize(&t, &[0], -1.0).unwrap_err(),
            TensorError::NegativeTolerance
        );
        let nan = Tensor::from_data(vec![2, 2], vec![C64::new(f64::NAN, 0.0); 4]).unwrap();
        assert_eq!(
            svd_factorize(&nan, &[0], 0.0).unwrap_err(),
            TensorError::NonFinite
        );
    }

    fn reconstruct(f: &Factorization) -> Tensor {
        let k = f.kept_rank;
        let mut sv = f.v.clone();
        let inner = sv.len() / k;
        for (i, z) in sv.data_mut().iter_mut().enumerate() {
            *z *= f.s[i / inner];
        }
        let mut u = f.u.clone();
        u.relabel(u.rank() - 1, AxisLabel(1 << 40)).unwrap();
        contract_pair(&u, &sv, &[(u.rank() - 1, 0)]).unwrap()
    }

    #[test]
    fn svd_reconstructs_random_tensors() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for shape in [vec![2, 3, 4], vec![4, 4], vec![3, 2, 2, 2], vec![1, 5, 2]] {
            let t = random(&shape, 0, &mut rng);
            for rows in [vec![0], vec![1, 0], vec![shape.len() - 1]] {
                if rows.len() >= shape.len() {
                    continue;
                }
                let f = svd_factorize(&t, &rows, 1e-12).unwrap();
                assert!(f.s.windows(2).all(|w| w[0] >= w[1]));
                let r = reconstruct(&f);
                // r has axes rows ++ cols; bring t into that order
                let cols: Vec<usize> = (0..t.rank()).filter(|i| !rows.contains(i)).collect();
                let perm: Vec<usize> = rows.iter().chain(&cols).copied().collect();
                let tp = t.permute(&perm).unwrap();
                let err = max_diff(r.data(), tp.data());
                assert!(err <= 1e-12 * t.frobenius_norm().max(1.0), "err {err}");
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn shape() -> impl Strategy<Value = Vec<usize>> {
            proptest::collection::vec(1usize..=4, 1..=3)
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn matches_loop_oracle_and_is_bilinear(
                da in shape(), db in shape(), npairs in 0usize..=3, seed in any::<u64>(), alpha_re in -2.0f64..2.0
            ) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut db = db;
                let npairs = npairs.min(da.len()).min(db.len());
                // force paired extents to agree
                for k in 0..npairs {
                    db[k] = da[da.len() - 1 - k];
                }
                let a = random(&da, 0, &mut rng);
                let b = random(&db, 100, &mut rng);
                let pairs: Vec<(usize, usize)> = (0..npairs).map(|k| (da.len() - 1 - k, k)).collect();
                let r = contract_pair(&a, &b, &pairs).unwrap();
                prop_assert!(max_diff(r.data(), &naive_contract(&a, &b, &pairs)) < 1e-12);

                let alpha = C64::new(alpha_re, 0.5);
                let scaled = contract_pair(&a.scale(alpha), &b, &pairs).unwrap();
                let expect: Vec<C64> = r.data().iter().map(|z| z * alpha).collect();
                prop_assert!(max_diff(scaled.data(), &expect) < 1e-12);

                let ca = contraction_cost(&da, &db, &pairs).unwrap();
                let swapped: Vec<(usize, usize)> = pairs.iter().map(|&(i, j)| (j, i)).collect();
                prop_assert_eq!(ca, contraction_cost(&db, &da, &swapped).unwrap());
            }

            #[test]
            fn svd_reconstruction_bound(d in proptest::collection::vec(1usize..=4, 2..=4), seed in any::<u64>(), tol in prop_oneof![Just(0.0), Just(1e-12), Just(1e-6)]) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let t = random(&d, 0, &mut rng);
                let f = svd_factorize(&t, &[0], tol).unwrap();
                let r = reconstruct(&f);
                let diff: f64 = r.data().iter().zip(t.data()).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
                prop_assert!(diff <= f64::max(tol, 1e-12) * t.frobenius_norm());
            }
        }
    }
}

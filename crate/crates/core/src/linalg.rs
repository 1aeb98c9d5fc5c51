//! Complex singular value decomposition by one-sided Jacobi rotations.
//!
//! The routine orthogonalises the columns of a tall matrix with a sequence of
//! unitary 2x2 rotations (Hestenes). Column norms converge to the singular
//! values to high relative accuracy, which is what the rank decisions in the
//! compression step rely on. Wide matrices are handled through their
//! conjugate transpose.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{abs, sqrt};
use crate::C64;

const MAX_SWEEPS: usize = 80;

/// Thin SVD `a = u * diag(s) * vh` of a row-major `m x n` matrix, with
/// `k = min(m, n)`.
#[derive(Debug, Clone)]
pub struct MatrixSvd {
    /// Row-major `m x k`.
    pub u: Vec<C64>,
    /// Non-increasing.
    pub s: Vec<f64>,
    /// Row-major `k x n`.
    pub vh: Vec<C64>,
    pub rows: usize,
    pub cols: usize,
}

/// Number of singular values above `tolerance * s_max`, never less than one.
pub fn kept_rank(s: &[f64], tolerance: f64) -> usize {
    let smax = s.first().copied().unwrap_or(0.0);
    s.iter()
        .filter(|&&x| x > tolerance * smax && x > 0.0)
        .count()
        .max(1)
}

pub fn svd(a: &[C64], m: usize, n: usize) -> MatrixSvd {
    assert_eq!(a.len(), m * n, "matrix data length");
    if m >= n {
        svd_tall(a, m, n)
    } else {
        // a^H = u' s vh'  =>  a = vh'^H s u'^H
        let mut ah = vec![C64::new(0.0, 0.0); m * n];
        for i in 0..m {
            for j in 0..n {
                ah[j * m + i] = a[i * n + j].conj();
            }
        }
        let t = svd_tall(&ah, n, m);
        let k = m;
        let mut u = vec![C64::new(0.0, 0.0); m * k];
        for r in 0..k {
            for i in 0..m {
                u[i * k + r] = t.vh[r * m + i].conj();
            }
        }
        let mut vh = vec![C64::new(0.0, 0.0); k * n];
        for r in 0..k {
            for j in 0..n {
                vh[r * n + j] = t.u[j * k + r].conj();
            }
        }
        MatrixSvd {
            u,
            s: t.s,
            vh,
            rows: m,
            cols: n,
        }
    }
}

fn svd_tall(a: &[C64], m: usize, n: usize) -> MatrixSvd {
    let zero = C64::new(0.0, 0.0);
    // column-major working copies
    let mut g: Vec<Vec<C64>> = (0..n)
        .map(|j| (0..m).map(|i| a[i * n + j]).collect())
        .collect();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            let mut col = vec![zero; n];
            col[j] = C64::new(1.0, 0.0);
            col
        })
        .collect();

    let eps = f64::EPSILON;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = g[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = g[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = g[p].iter().zip(&g[q]).map(|(x, y)| x.conj() * y).sum();
                let gabs = abs(gamma);
                if gabs == 0.0 || gabs <= eps * sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let phase = gamma / gabs;
                let zeta = (beta - alpha) / (2.0 * gabs);
                let t = zeta.signum() / (zeta.abs() + sqrt(1.0 + zeta * zeta));
                let c = 1.0 / sqrt(1.0 + t * t);
                let s = c * t;
                rotate(&mut g, p, q, phase.conj(), c, s);
                rotate(&mut v, p, q, phase.conj(), c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = g
        .iter()
        .map(|col| sqrt(col.iter().map(|z| z.norm_sqr()).sum()))
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    // stable: equal values keep column order
    order.sort_by(|&i, &j| {
        norms[j]
            .partial_cmp(&norms[i])
            .unwrap_or(core::cmp::Ordering::Equal)
    });

    let k = n;
    let mut u = vec![zero; m * k];
    let mut s = Vec::with_capacity(k);
    let mut vh = vec![zero; k * n];
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(k);
    for (r, &j) in order.iter().enumerate() {
        let sj = norms[j];
        s.push(sj);
        let col: Vec<C64> = if sj > 0.0 {
            g[j].iter().map(|z| z / sj).collect()
        } else {
            complete_basis(&basis, m)
        };
        for i in 0..m {
            u[i * k + r] = col[i];
        }
        basis.push(col);
        for (c, x) in v[j].iter().enumerate() {
            vh[r * n + c] = x.conj();
        }
    }
    MatrixSvd {
        u,
        s,
        vh,
        rows: m,
        cols: n,
    }
}

// [x_p, x_q] <- [x_p, x_q * phase] * [[c, s], [-s, c]]
fn rotate(cols: &mut [Vec<C64>], p: usize, q: usize, phase: C64, c: f64, s: f64) {
    let (left, right) = cols.split_at_mut(q);
    let xp = &mut left[p];
    let xq = &mut right[0];
    for (a, b) in xp.iter_mut().zip(xq.iter_mut()) {
        let bq = *b * phase;
        let ap = *a;
        *a = ap * c - bq * s;
        *b = ap * s + bq * c;
    }
}

// A unit vector orthogonal to `basis`, by Gram-Schmidt over the standard basis.
fn complete_basis(basis: &[Vec<C64>], m: usize) -> Vec<C64> {
    let zero = C64::new(0.0, 0.0);
    for e in 0..m {
        let mut x = vec![zero; m];
        x[e] = C64::new(1.0, 0.0);
        for b in basis {
            let proj: C64 = b.iter().zip(&x).map(|(bi, xi)| bi.conj() * xi).sum();
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi -= proj * bi;
            }
        }
        let nrm = sqrt(x.iter().map(|z| z.norm_sqr()).sum());
        if nrm > 1e-8 {
            return x.into_iter().map(|z| z / nrm).collect();
        }
    }
    vec![zero; m]
}

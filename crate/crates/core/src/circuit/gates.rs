//! Standard gate matrices.
//!
//! A [`Mat4`] is row-major over `(s_k' s_l') x (s_k s_l)` with qubit `k` as
//! the more significant index; a [`Mat2`] is row-major over `s' x s`.

use crate::math::{cis, cos, sin, sqrt};
use crate::C64;

pub type Mat2 = [C64; 4];
pub type Mat4 = [C64; 16];

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };
const I: C64 = C64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    Cz,
    Iswap,
    Fsim {
        theta: f64,
        phi: f64,
    },
    Identity,
    /// Arbitrary matrix supplied by the caller (or produced by fusion).
    Matrix,
}

impl GateKind {
    /// Matrix of a named gate. [`GateKind::Matrix`] has no intrinsic matrix
    /// and yields the identity.
    pub fn matrix(&self) -> Mat4 {
        match *self {
            GateKind::Cz => cz(),
            GateKind::Iswap => iswap(),
            GateKind::Fsim { theta, phi } => fsim(theta, phi),
            GateKind::Identity | GateKind::Matrix => identity4(),
        }
    }
}

pub fn identity2() -> Mat2 {
    [ONE, ZERO, ZERO, ONE]
}

pub fn identity4() -> Mat4 {
    let mut m = [ZERO; 16];
    for i in 0..4 {
        m[i * 5] = ONE;
    }
    m
}

pub fn cz() -> Mat4 {
    let mut m = identity4();
    m[15] = -ONE;
    m
}

pub fn iswap() -> Mat4 {
    let mut m = [ZERO; 16];
    m[0] = ONE;
    m[4 + 2] = I;
    m[2 * 4 + 1] = I;
    m[15] = ONE;
    m
}

/// fSim(theta, phi): iSWAP-like rotation by `theta` on |01>,|10> and a
/// conditional phase `e^{-i phi}` on |11>.
pub fn fsim(theta: f64, phi: f64) -> Mat4 {
    let mut m = [ZERO; 16];
    m[0] = ONE;
    m[5] = C64::new(cos(theta), 0.0);
    m[6] = C64::new(0.0, -sin(theta));
    m[9] = C64::new(0.0, -sin(theta));
    m[10] = C64::new(cos(theta), 0.0);
    m[15] = cis(-phi);
    m
}

pub fn hadamard() -> Mat2 {
    let h = 1.0 / sqrt(2.0);
    [
        C64::new(h, 0.0),
        C64::new(h, 0.0),
        C64::new(h, 0.0),
        C64::new(-h, 0.0),
    ]
}

pub fn pauli_x() -> Mat2 {
    [ZERO, ONE, ONE, ZERO]
}

pub fn pauli_y() -> Mat2 {
    [ZERO, -I, I, ZERO]
}

/// `(X + Y) / sqrt(2)`
pub fn pauli_w() -> Mat2 {
    let h = 1.0 / sqrt(2.0);
    [ZERO, C64::new(h, -h), C64::new(h, h), ZERO]
}

/// Principal square root of an involutory Hermitian `p`:
/// `e^{i pi/4} (I - i p) / sqrt(2)`.
pub fn sqrt_of_involution(p: &Mat2) -> Mat2 {
    let pre = cis(core::f64::consts::FRAC_PI_4) / sqrt(2.0);
    let id = identity2();
    let mut out = [ZERO; 4];
    for i in 0..4 {
        out[i] = pre * (id[i] - I * p[i]);
    }
    out
}

pub fn mul2(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [ZERO; 4];
    for i in 0..2 {
        for j in 0..2 {
            out[i * 2 + j] = a[i * 2] * b[j] + a[i * 2 + 1] * b[2 + j];
        }
    }
    out
}

pub fn mul4(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [ZERO; 16];
    for i in 0..4 {
        for j in 0..4 {
            let mut acc = ZERO;
            for p in 0..4 {
                acc += a[i * 4 + p] * b[p * 4 + j];
            }
            out[i * 4 + j] = acc;
        }
    }
    out
}

/// `a (x) b` with `a` on the more significant qubit.
pub fn kron2(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut out = [ZERO; 16];
    for r in 0..4 {
        for c in 0..4 {
            out[r * 4 + c] = a[(r / 2) * 2 + c / 2] * b[(r % 2) * 2 + c % 2];
        }
    }
    out
}

pub fn dagger2(a: &Mat2) -> Mat2 {
    [a[0].conj(), a[2].conj(), a[1].conj(), a[3].conj()]
}

pub fn dagger4(a: &Mat4) -> Mat4 {
    let mut out = [ZERO; 16];
    for i in 0..4 {
        for j in 0..4 {
            out[j * 4 + i] = a[i * 4 + j].conj();
        }
    }
    out
}

/// Max-entry deviation of `a^H a` from the identity.
pub fn unitarity_defect4(a: &Mat4) -> f64 {
    let p = mul4(&dagger4(a), a);
    let id = identity4();
    sqrt(
        p.iter()
            .zip(id.iter())
            .map(|(x, y)| (x - y).norm_sqr())
            .fold(0.0, f64::max),
    )
}

pub fn unitarity_defect2(a: &Mat2) -> f64 {
    let p = mul2(&dagger2(a), a);
    let id = identity2();
    sqrt(
        p.iter()
            .zip(id.iter())
            .map(|(x, y)| (x - y).norm_sqr())
            .fold(0.0, f64::max),
    )
}

pub(crate) fn is_finite(m: &[C64]) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

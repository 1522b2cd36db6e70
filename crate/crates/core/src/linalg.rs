//! Small dense helpers for the 4×4 symmetric matrices used by the
//! Mahalanobis baseline.

#![allow(clippy::needless_range_loop)]

pub type Mat4 = [[f64; 4]; 4];
pub type Vec4 = [f64; 4];

pub const IDENTITY: Mat4 = [
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
];

pub const ZERO: Mat4 = [[0.0; 4]; 4];

pub fn quadratic_form(m: &Mat4, v: &Vec4) -> f64 {
    let mut acc = 0.0;
    for i in 0..4 {
        let mut row = 0.0;
        for j in 0..4 {
            row += m[i][j] * v[j];
        }
        acc += v[i] * row;
    }
    acc
}

pub fn outer(v: &Vec4) -> Mat4 {
    let mut out = ZERO;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = v[i] * v[j];
        }
    }
    out
}

pub fn add_scaled(a: &Mat4, b: &Mat4, scale: f64) -> Mat4 {
    let mut out = *a;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] += scale * b[i][j];
        }
    }
    out
}

pub fn scale(a: &Mat4, s: f64) -> Mat4 {
    add_scaled(&ZERO, a, s)
}

/// `tr(A B)` for symmetric `B`, i.e. the Frobenius inner product.
pub fn inner(a: &Mat4, b: &Mat4) -> f64 {
    let mut acc = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            acc += a[i][j] * b[i][j];
        }
    }
    acc
}

pub fn frobenius(a: &Mat4) -> f64 {
    libm::sqrt(inner(a, a))
}

pub fn max_asymmetry(a: &Mat4) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in (i + 1)..4 {
            worst = worst.max((a[i][j] - a[j][i]).abs());
        }
    }
    worst
}

pub fn symmetrize(a: &Mat4) -> Mat4 {
    let mut out = *a;
    for i in 0..4 {
        for j in (i + 1)..4 {
            let m = 0.5 * (a[i][j] + a[j][i]);
            out[i][j] = m;
            out[j][i] = m;
        }
    }
    out
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues and a matrix whose columns are the matching
/// orthonormal eigenvectors. Only the upper triangle is trusted.
pub fn sym_eigen(a: &Mat4) -> (Vec4, Mat4) {
    let mut m = symmetrize(a);
    let mut v = IDENTITY;
    let scale = frobenius(&m);
    if scale == 0.0 {
        return ([0.0; 4], v);
    }
    for _sweep in 0..64 {
        let mut off = 0.0;
        for p in 0..4 {
            for q in (p + 1)..4 {
                off += m[p][q] * m[p][q];
            }
        }
        if off <= (1e-17 * scale) * (1e-17 * scale) {
            break;
        }
        for p in 0..4 {
            for q in (p + 1)..4 {
                let apq = m[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for row in m.iter_mut() {
                    let (kp, kq) = (row[p], row[q]);
                    row[p] = c * kp - s * kq;
                    row[q] = s * kp + c * kq;
                }
                for k in 0..4 {
                    let (pk, qk) = (m[p][k], m[q][k]);
                    m[p][k] = c * pk - s * qk;
                    m[q][k] = s * pk + c * qk;
                }
                m[p][q] = 0.0;
                m[q][p] = 0.0;
                for row in v.iter_mut() {
                    let (kp, kq) = (row[p], row[q]);
                    row[p] = c * kp - s * kq;
                    row[q] = s * kp + c * kq;
                }
            }
        }
    }
    ([m[0][0], m[1][1], m[2][2], m[3][3]], v)
}

/// `V diag(values) Vᵀ`, symmetrized.
pub fn reconstruct(values: &Vec4, vectors: &Mat4) -> Mat4 {
    let mut out = ZERO;
    for i in 0..4 {
        for j in i..4 {
            let mut acc = 0.0;
            for k in 0..4 {
                acc += vectors[i][k] * values[k] * vectors[j][k];
            }
            out[i][j] = acc;
            out[j][i] = acc;
        }
    }
    out
}

pub fn min_eigenvalue(a: &Mat4) -> f64 {
    let (values, _) = sym_eigen(a);
    values.iter().copied().fold(f64::INFINITY, f64::min)
}

//! Small dense linear algebra: cyclic Jacobi eigensolvers for real symmetric
//! and complex Hermitian matrices, plus 4×4 complex matrix helpers.
//!
//! Matrices here are tiny (3×3 correlation matrices, 4×4 density matrices),
//! so fixed-size arrays and full-row/column rotations are used throughout.

use num_complex::Complex64;

/// 4×4 complex matrix, row-major.
pub type CMat4 = [[Complex64; 4]; 4];

const JACOBI_REL_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a real symmetric matrix.
///
/// `values` are sorted in descending order; `vectors[i]` is the unit
/// eigenvector belonging to `values[i]`.
#[derive(Debug, Clone, Copy)]
pub struct SymmetricEigen<const N: usize> {
    pub values: [f64; N],
    pub vectors: [[f64; N]; N],
}

/// Eigen-decomposition of a complex Hermitian matrix, sorted like [`SymmetricEigen`].
#[derive(Debug, Clone, Copy)]
pub struct HermitianEigen<const N: usize> {
    pub values: [f64; N],
    pub vectors: [[Complex64; N]; N],
}

/// Cyclic Jacobi iteration for a real symmetric matrix.
///
/// Only the upper triangle is trusted; the input is symmetrized first.
pub fn jacobi_symmetric<const N: usize>(input: &[[f64; N]; N]) -> SymmetricEigen<N> {
    let mut a = [[0.0; N]; N];
    for i in 0..N {
        for j in 0..N {
            a[i][j] = if i <= j { input[i][j] } else { input[j][i] };
        }
    }
    let mut v = [[0.0; N]; N];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }

    let scale: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..N)
            .flat_map(|p| (p + 1..N).map(move |q| (p, q)))
            .map(|(p, q)| a[p][q] * a[p][q])
            .sum::<f64>()
            .sqrt();
        if off == 0.0 || off <= JACOBI_REL_TOL * scale {
            break;
        }
        for p in 0..N {
            for q in p + 1..N {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let (c, s) = rotation(a[p][p], a[q][q], apq);
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for row in v.iter_mut() {
                    let (vkp, vkq) = (row[p], row[q]);
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..N).collect();
    order.sort_by(|&i, &j| a[j][j].total_cmp(&a[i][i]));
    let mut values = [0.0; N];
    let mut vectors = [[0.0; N]; N];
    for (slot, &idx) in order.iter().enumerate() {
        values[slot] = a[idx][idx];
        for k in 0..N {
            vectors[slot][k] = v[k][idx];
        }
    }
    SymmetricEigen { values, vectors }
}

/// Cyclic complex Jacobi iteration for a Hermitian matrix.
///
/// Each pivot is first made real by a diagonal phase, then annihilated by a
/// real plane rotation.
pub fn jacobi_hermitian<const N: usize>(input: &[[Complex64; N]; N]) -> HermitianEigen<N> {
    let zero = Complex64::new(0.0, 0.0);
    let mut a = [[zero; N]; N];
    for i in 0..N {
        a[i][i] = Complex64::new(input[i][i].re, 0.0);
        for j in i + 1..N {
            a[i][j] = input[i][j];
            a[j][i] = input[i][j].conj();
        }
    }
    let mut v = [[zero; N]; N];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = Complex64::new(1.0, 0.0);
    }

    let scale: f64 = a.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..N)
            .flat_map(|p| (p + 1..N).map(move |q| (p, q)))
            .map(|(p, q)| a[p][q].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off == 0.0 || off <= JACOBI_REL_TOL * scale {
            break;
        }
        for p in 0..N {
            for q in p + 1..N {
                let b = a[p][q].norm();
                if b == 0.0 {
                    continue;
                }
                // column q *= e^{-i phi}, row q *= e^{+i phi} makes a[p][q] = b
                let phase = a[p][q] / b;
                let col_phase = phase.conj();
                for row in a.iter_mut() {
                    row[q] *= col_phase;
                }
                for k in 0..N {
                    a[q][k] *= phase;
                }
                for row in v.iter_mut() {
                    row[q] *= col_phase;
                }

                let (c, s) = rotation(a[p][p].re, a[q][q].re, b);
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = akp * c - akq * s;
                    row[q] = akp * s + akq * c;
                }
                for k in 0..N {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = apk * c - aqk * s;
                    a[q][k] = apk * s + aqk * c;
                }
                a[p][q] = zero;
                a[q][p] = zero;
                a[p][p].im = 0.0;
                a[q][q].im = 0.0;
                for row in v.iter_mut() {
                    let (vkp, vkq) = (row[p], row[q]);
                    row[p] = vkp * c - vkq * s;
                    row[q] = vkp * s + vkq * c;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..N).collect();
    order.sort_by(|&i, &j| a[j][j].re.total_cmp(&a[i][i].re));
    let mut values = [0.0; N];
    let mut vectors = [[zero; N]; N];
    for (slot, &idx) in order.iter().enumerate() {
        values[slot] = a[idx][idx].re;
        for k in 0..N {
            vectors[slot][k] = v[k][idx];
        }
    }
    HermitianEigen { values, vectors }
}

/// Singular values of a complex square matrix, descending, by one-sided
/// (Hestenes) Jacobi orthogonalization of the columns.
///
/// Small singular values come out with absolute accuracy near machine
/// precision times the largest one, without squaring the matrix.
pub fn singular_values<const N: usize>(input: &[[Complex64; N]; N]) -> [f64; N] {
    let mut a = *input;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..N {
            for q in p + 1..N {
                let (mut alpha, mut beta) = (0.0, 0.0);
                let mut gamma = Complex64::new(0.0, 0.0);
                for row in a.iter() {
                    alpha += row[p].norm_sqr();
                    beta += row[q].norm_sqr();
                    gamma += row[p].conj() * row[q];
                }
                let g = gamma.norm();
                if g == 0.0 || g <= JACOBI_REL_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = (gamma / g).conj();
                let (c, s) = rotation(alpha, beta, g);
                for row in a.iter_mut() {
                    let (ap, aq) = (row[p], row[q] * phase);
                    row[p] = ap * c - aq * s;
                    row[q] = ap * s + aq * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut out = [0.0; N];
    for (k, value) in out.iter_mut().enumerate() {
        *value = a.iter().map(|row| row[k].norm_sqr()).sum::<f64>().sqrt();
    }
    out.sort_by(|x, y| y.total_cmp(x));
    out
}

/// (cos, sin) of the Jacobi rotation annihilating the off-diagonal `apq`.
fn rotation(app: f64, aqq: f64, apq: f64) -> (f64, f64) {
    let theta = (aqq - app) / (2.0 * apq);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    (c, t * c)
}

pub fn cmat_zero() -> CMat4 {
    [[Complex64::new(0.0, 0.0); 4]; 4]
}

pub fn cmat_identity() -> CMat4 {
    let mut m = cmat_zero();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Complex64::new(1.0, 0.0);
    }
    m
}

pub fn cmat_mul(a: &CMat4, b: &CMat4) -> CMat4 {
    let mut out = cmat_zero();
    for i in 0..4 {
        for k in 0..4 {
            let aik = a[i][k];
            if aik == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..4 {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn cmat_dagger(a: &CMat4) -> CMat4 {
    let mut out = cmat_zero();
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = a[j][i].conj();
        }
    }
    out
}

pub fn cmat_trace(a: &CMat4) -> Complex64 {
    (0..4).map(|i| a[i][i]).sum()
}

/// Kronecker product of two 2×2 matrices, left factor most significant.
pub fn kron2(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> CMat4 {
    let mut out = cmat_zero();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

/// Squared Frobenius (Hilbert–Schmidt) norm.
pub fn frobenius_sqr(a: &CMat4) -> f64 {
    a.iter().flatten().map(|z| z.norm_sqr()).sum()
}

/// Matrix function of a Hermitian matrix through its eigen-decomposition.
pub fn hermitian_map(a: &CMat4, f: impl Fn(f64) -> f64) -> CMat4 {
    let eig = jacobi_hermitian(a);
    let mut out = cmat_zero();
    for (lambda, vec) in eig.values.iter().zip(eig.vectors.iter()) {
        let fl = f(*lambda);
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] += vec[i] * vec[j].conj() * fl;
            }
        }
    }
    out
}

//! Small dense kernels: symmetric 3×3 eigen-decomposition and a pivoted 4×4
//! determinant.

use nalgebra::{Matrix3, Matrix4, Vector3};

const JACOBI_SWEEPS: usize = 64;

/// Eigen-decomposition of a symmetric 3×3 matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues sorted descending and the matching unit eigenvectors as
/// columns. Equal eigenvalues keep the order the rotations produced them in.
pub fn sym3_eigen(m: &Matrix3<f64>) -> (Vector3<f64>, Matrix3<f64>) {
    let mut a = symmetrized(m);
    let mut v = Matrix3::identity();

    for _ in 0..JACOBI_SWEEPS {
        let off = a[(0, 1)].powi(2) + a[(0, 2)].powi(2) + a[(1, 2)].powi(2);
        let diag = a[(0, 0)].powi(2) + a[(1, 1)].powi(2) + a[(2, 2)].powi(2);
        if off == 0.0 || off <= f64::EPSILON * f64::EPSILON * diag * 1e-4 {
            break;
        }
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let apq = a[(p, q)];
            if apq == 0.0 {
                continue;
            }
            let app = a[(p, p)];
            let aqq = a[(q, q)];
            let theta = (aqq - app) / (2.0 * apq);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let t = if theta == 0.0 { 1.0 } else { t };
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;

            // A <- Jᵀ A J with J the (p, q) Givens rotation.
            for k in 0..3 {
                let akp = a[(k, p)];
                let akq = a[(k, q)];
                a[(k, p)] = c * akp - s * akq;
                a[(k, q)] = s * akp + c * akq;
            }
            for k in 0..3 {
                let apk = a[(p, k)];
                let aqk = a[(q, k)];
                a[(p, k)] = c * apk - s * aqk;
                a[(q, k)] = s * apk + c * aqk;
            }
            a[(p, q)] = 0.0;
            a[(q, p)] = 0.0;

            for k in 0..3 {
                let vkp = v[(k, p)];
                let vkq = v[(k, q)];
                v[(k, p)] = c * vkp - s * vkq;
                v[(k, q)] = s * vkp + c * vkq;
            }
        }
    }

    let mut order = [0usize, 1, 2];
    // Stable sort keeps solver order among ties.
    order.sort_by(|&i, &j| a[(j, j)].partial_cmp(&a[(i, i)]).unwrap_or(std::cmp::Ordering::Equal));
    let values = Vector3::new(a[(order[0], order[0])], a[(order[1], order[1])], a[(order[2], order[2])]);
    let vectors = Matrix3::from_columns(&[v.column(order[0]), v.column(order[1]), v.column(order[2])]);
    (values, vectors)
}

/// Eigenvalues of a symmetric 3×3 matrix, descending.
pub fn eigenvalues_sym3(m: &Matrix3<f64>) -> [f64; 3] {
    let (vals, _) = sym3_eigen(m);
    [vals[0], vals[1], vals[2]]
}

fn symmetrized(m: &Matrix3<f64>) -> Matrix3<f64> {
    (m + m.transpose()) * 0.5
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det4(m: &Matrix4<f64>) -> f64 {
    let mut a = *m;
    let mut det = 1.0;
    for col in 0..4 {
        let mut pivot = col;
        let mut best = a[(col, col)].abs();
        for row in col + 1..4 {
            let v = a[(row, col)].abs();
            if v > best {
                best = v;
                pivot = row;
            }
        }
        if best == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap_rows(pivot, col);
            det = -det;
        }
        let p = a[(col, col)];
        det *= p;
        for row in col + 1..4 {
            let f = a[(row, col)] / p;
            if f != 0.0 {
                for k in col + 1..4 {
                    a[(row, k)] -= f * a[(col, k)];
                }
            }
        }
    }
    det
}

pub fn det3(m: &Matrix3<f64>) -> f64 {
    m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
        - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
        + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)])
}

/// The 3×3 principal minor of `m` obtained by deleting row and column `skip`.
pub fn principal_minor3(m: &Matrix4<f64>, skip: usize) -> f64 {
    let idx: Vec<usize> = (0..4).filter(|&i| i != skip).collect();
    let sub = Matrix3::from_fn(|r, c| m[(idx[r], idx[c])]);
    det3(&sub)
}

pub fn max_abs3(m: &Matrix3<f64>) -> f64 {
    m.iter().fold(0.0, |acc: f64, v| acc.max(v.abs()))
}

pub fn max_abs4(m: &Matrix4<f64>) -> f64 {
    m.iter().fold(0.0, |acc: f64, v| acc.max(v.abs()))
}

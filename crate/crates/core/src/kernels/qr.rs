//! Householder QR with the full orthogonal factor.

use crate::matrix::Matrix;
use crate::scalar::Real;

/// `a = q · [r; 0]` with `q` of order `rows` and `r` upper triangular of order
/// `cols` with a nonnegative diagonal. Requires `rows >= cols`.
pub fn householder_qr<T: Real>(a: &Matrix<T>) -> (Matrix<T>, Matrix<T>) {
    let (m, n) = (a.rows(), a.cols());
    assert!(m >= n, "householder_qr needs rows >= cols");
    let zero = a[(0, 0)].zero_like();
    let one = zero.one_like();
    let two = zero.int_like(2);
    let mut w = a.clone();
    let mut reflectors: Vec<(usize, Vec<T>, T)> = Vec::new();

    for k in 0..n.min(m - 1) {
        let mut alpha = zero.clone();
        for i in k..m {
            alpha = alpha.hypot(&w[(i, k)]);
        }
        if alpha.is_zero() {
            continue;
        }
        let alpha = -alpha.copysign(&w[(k, k)]);
        let mut v: Vec<T> = (k..m).map(|i| w[(i, k)].clone()).collect();
        v[0] = v[0].clone() - &alpha;
        let mut vtv = zero.clone();
        for vi in &v {
            vtv = vtv + &(vi.clone() * vi);
        }
        if vtv.is_zero() {
            continue;
        }
        let beta = two.clone() / &vtv;
        for j in k..n {
            let mut dot = zero.clone();
            for (t, vi) in v.iter().enumerate() {
                dot = dot + &(vi.clone() * &w[(k + t, j)]);
            }
            let f = dot * &beta;
            for (t, vi) in v.iter().enumerate() {
                let nv = w[(k + t, j)].clone() - &(f.clone() * vi);
                w[(k + t, j)] = nv;
            }
        }
        for i in k + 1..m {
            w[(i, k)] = zero.clone();
        }
        w[(k, k)] = alpha;
        reflectors.push((k, v, beta));
    }

    // q = H_1 H_2 ⋯ H_n applied to the identity from the right end.
    let mut q = Matrix::from_fn(m, m, |i, j| if i == j { one.clone() } else { zero.clone() });
    for (k, v, beta) in reflectors.iter().rev() {
        for j in 0..m {
            let mut dot = zero.clone();
            for (t, vi) in v.iter().enumerate() {
                dot = dot + &(vi.clone() * &q[(k + t, j)]);
            }
            if dot.is_zero() {
                continue;
            }
            let f = dot * beta;
            for (t, vi) in v.iter().enumerate() {
                let nv = q[(k + t, j)].clone() - &(f.clone() * vi);
                q[(k + t, j)] = nv;
            }
        }
    }

    let mut r = Matrix::from_fn(n, n, |i, j| {
        if j >= i {
            w[(i, j)].clone()
        } else {
            zero.clone()
        }
    });
    for k in 0..n {
        if r[(k, k)] < zero {
            for j in k..n {
                r[(k, j)] = -r[(k, j)].clone();
            }
            for i in 0..m {
                q[(i, k)] = -q[(i, k)].clone();
            }
        }
    }
    (q, r)
}

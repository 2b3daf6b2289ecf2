//! Eigenvalues of a real square matrix: Householder reduction to upper
//! Hessenberg form followed by the Francis double-shift QR iteration.
//!
//! Generic over [`Real`], so the same code runs in doubles (the baseline)
//! and at any multiprecision working precision.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Real;

/// Reduces `a` to upper Hessenberg form by orthogonal similarity.
pub fn hessenberg<T: Real>(a: &Matrix<T>) -> Matrix<T> {
    assert!(a.is_square());
    let n = a.rows();
    let mut h = a.clone();
    if n < 3 {
        return h;
    }
    let zero = h[(0, 0)].zero_like();
    for k in 0..n - 2 {
        let mut alpha = zero.clone();
        for i in k + 1..n {
            alpha = alpha.hypot(&h[(i, k)]);
        }
        if alpha.is_zero() {
            continue;
        }
        let alpha = -alpha.copysign(&h[(k + 1, k)]);
        let mut v: Vec<T> = (k + 1..n).map(|i| h[(i, k)].clone()).collect();
        v[0] = v[0].clone() - &alpha;
        let mut vtv = zero.clone();
        for vi in &v {
            vtv = vtv + &(vi.clone() * vi);
        }
        if vtv.is_zero() {
            continue;
        }
        let two = zero.int_like(2);
        let beta = two / &vtv;

        // H ← (I - β v vᵀ) H on rows k+1.., columns k..
        for j in k..n {
            let mut dot = zero.clone();
            for (t, vi) in v.iter().enumerate() {
                dot = dot + &(vi.clone() * &h[(k + 1 + t, j)]);
            }
            let f = dot * &beta;
            for (t, vi) in v.iter().enumerate() {
                let nv = h[(k + 1 + t, j)].clone() - &(f.clone() * vi);
                h[(k + 1 + t, j)] = nv;
            }
        }
        // H ← H (I - β v vᵀ) on columns k+1.., all rows
        for i in 0..n {
            let mut dot = zero.clone();
            for (t, vi) in v.iter().enumerate() {
                dot = dot + &(vi.clone() * &h[(i, k + 1 + t)]);
            }
            let f = dot * &beta;
            for (t, vi) in v.iter().enumerate() {
                let nv = h[(i, k + 1 + t)].clone() - &(f.clone() * vi);
                h[(i, k + 1 + t)] = nv;
            }
        }
        for i in k + 2..n {
            h[(i, k)] = zero.clone();
        }
        h[(k + 1, k)] = alpha;
    }
    h
}

/// All eigenvalues of `a` as `(re, im)` pairs, in the order they deflate.
///
/// A subdiagonal entry is treated as zero once it falls below the unit
/// roundoff of the working precision times its two diagonal neighbours.
/// Fails with [`Error::NoConvergence`] after `500·n` QR sweeps.
#[allow(clippy::needless_range_loop)]
pub fn eigenvalues<T: Real>(a: &Matrix<T>) -> Result<Vec<(T, T)>> {
    let n = a.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let h = hessenberg(a);
    let zero = h[(0, 0)].zero_like();
    let eps = zero.unit_roundoff();
    let half = zero.f64_like(0.5);

    // 1-based working copy keeps the deflation logic readable.
    let mut m = vec![vec![zero.clone(); n + 1]; n + 1];
    for i in 0..n {
        for j in 0..n {
            m[i + 1][j + 1] = h[(i, j)].clone();
        }
    }
    let mut anorm = zero.clone();
    for i in 1..=n {
        for j in i.saturating_sub(1).max(1)..=n {
            anorm = anorm + &m[i][j].abs();
        }
    }

    let mut wr = vec![zero.clone(); n + 1];
    let mut wi = vec![zero.clone(); n + 1];
    let cap = 500 * n;
    let mut sweeps = 0usize;
    let mut nn = n;
    let mut t = zero.clone();
    let mut its = 0usize;

    while nn >= 1 {
        let mut l = nn;
        while l >= 2 {
            let mut s = m[l - 1][l - 1].abs() + &m[l][l].abs();
            if s.is_zero() {
                s = anorm.clone();
            }
            if m[l][l - 1].abs() <= eps.clone() * &s {
                m[l][l - 1] = zero.clone();
                break;
            }
            l -= 1;
        }
        let mut x = m[nn][nn].clone();
        if l == nn {
            wr[nn] = x + &t;
            wi[nn] = zero.clone();
            nn -= 1;
            its = 0;
            continue;
        }
        let mut y = m[nn - 1][nn - 1].clone();
        let mut w = m[nn][nn - 1].clone() * &m[nn - 1][nn];
        if l == nn - 1 {
            let p = half.clone() * &(y - &x);
            let q = p.clone() * &p + &w;
            let mut z = q.abs().sqrt();
            x = x + &t;
            if q >= zero {
                z = p.clone() + &z.copysign(&p);
                wr[nn - 1] = x.clone() + &z;
                wr[nn] = wr[nn - 1].clone();
                if !z.is_zero() {
                    wr[nn] = x - &(w / &z);
                }
                wi[nn - 1] = zero.clone();
                wi[nn] = zero.clone();
            } else {
                wr[nn - 1] = x.clone() + &p;
                wr[nn] = x + &p;
                wi[nn - 1] = -z.clone();
                wi[nn] = z;
            }
            nn -= 2;
            its = 0;
            continue;
        }

        if sweeps >= cap {
            return Err(Error::NoConvergence { iterations: sweeps });
        }
        if its > 0 && its.is_multiple_of(10) {
            // Exceptional shift.
            t = t + &x;
            for i in 1..=nn {
                m[i][i] = m[i][i].clone() - &x;
            }
            let s = m[nn][nn - 1].abs() + &m[nn - 1][nn - 2].abs();
            x = zero.f64_like(0.75) * &s;
            y = x.clone();
            w = zero.f64_like(-0.4375) * &s * &s;
        }
        its += 1;
        sweeps += 1;

        let (mut p, mut q, mut r): (T, T, T);
        let mut z;
        let mut mm = nn - 2;
        loop {
            z = m[mm][mm].clone();
            let rr = x.clone() - &z;
            let ss = y.clone() - &z;
            p = (rr.clone() * &ss - &w) / &m[mm + 1][mm] + &m[mm][mm + 1];
            q = m[mm + 1][mm + 1].clone() - &z - &rr - &ss;
            r = m[mm + 2][mm + 1].clone();
            let s = p.abs() + &q.abs() + &r.abs();
            p = p / &s;
            q = q / &s;
            r = r / &s;
            if mm == l {
                break;
            }
            let u = m[mm][mm - 1].abs() * &(q.abs() + &r.abs());
            let v = p.abs() * &(m[mm - 1][mm - 1].abs() + &z.abs() + &m[mm + 1][mm + 1].abs());
            if u <= eps.clone() * &v {
                break;
            }
            mm -= 1;
        }
        for i in mm + 2..=nn {
            m[i][i - 2] = zero.clone();
            if i != mm + 2 {
                m[i][i - 3] = zero.clone();
            }
        }
        for k in mm..nn {
            if k != mm {
                p = m[k][k - 1].clone();
                q = m[k + 1][k - 1].clone();
                r = zero.clone();
                if k != nn - 1 {
                    r = m[k + 2][k - 1].clone();
                }
                x = p.abs() + &q.abs() + &r.abs();
                if !x.is_zero() {
                    p = p / &x;
                    q = q / &x;
                    r = r / &x;
                }
            }
            let s = (p.clone() * &p + &(q.clone() * &q) + &(r.clone() * &r))
                .sqrt()
                .copysign(&p);
            if s.is_zero() {
                continue;
            }
            if k == mm {
                if l != mm {
                    m[k][k - 1] = -m[k][k - 1].clone();
                }
            } else {
                m[k][k - 1] = -(s.clone() * &x);
            }
            p = p + &s;
            x = p.clone() / &s;
            y = q.clone() / &s;
            z = r.clone() / &s;
            q = q / &p;
            r = r / &p;
            for j in k..=nn {
                p = m[k][j].clone() + &(q.clone() * &m[k + 1][j]);
                if k != nn - 1 {
                    p = p + &(r.clone() * &m[k + 2][j]);
                    m[k + 2][j] = m[k + 2][j].clone() - &(p.clone() * &z);
                }
                m[k + 1][j] = m[k + 1][j].clone() - &(p.clone() * &y);
                m[k][j] = m[k][j].clone() - &(p.clone() * &x);
            }
            let mmin = nn.min(k + 3);
            for i in l..=mmin {
                p = x.clone() * &m[i][k] + &(y.clone() * &m[i][k + 1]);
                if k != nn - 1 {
                    p = p + &(z.clone() * &m[i][k + 2]);
                    m[i][k + 2] = m[i][k + 2].clone() - &(p.clone() * &r);
                }
                m[i][k + 1] = m[i][k + 1].clone() - &(p.clone() * &q);
                m[i][k] = m[i][k].clone() - &p;
            }
        }
    }

    Ok(wr.into_iter().zip(wi).skip(1).collect())
}

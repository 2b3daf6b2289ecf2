//! Singular values by Golub–Kahan Householder bidiagonalization followed by
//! implicitly shifted QR sweeps on the bidiagonal (the Golub–Reinsch scheme).
//! Only values are accumulated; no singular vectors are formed.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Real;

/// Singular values of `a`, sorted descending. Fails with
/// [`Error::NoConvergence`] after `500·min(rows, cols)` QR sweeps.
pub fn singular_values<T: Real>(a: &Matrix<T>) -> Result<Vec<T>> {
    if a.rows() < a.cols() {
        return singular_values(&a.transpose());
    }
    let (m, n) = (a.rows(), a.cols());
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut a = a.clone();
    let zero = a[(0, 0)].zero_like();
    let one = zero.one_like();

    let mut s = vec![zero.clone(); (m + 1).min(n)];
    let mut e = vec![zero.clone(); n];
    let mut work = vec![zero.clone(); m];
    let nct = (m - 1).min(n);
    let nrt = n.saturating_sub(2).min(m);

    for k in 0..nct.max(nrt) {
        if k < nct {
            // Column reflector: zero a[k+1.., k].
            s[k] = zero.clone();
            for i in k..m {
                s[k] = s[k].hypot(&a[(i, k)]);
            }
            if !s[k].is_zero() {
                if a[(k, k)] < zero {
                    s[k] = -s[k].clone();
                }
                for i in k..m {
                    a[(i, k)] = a[(i, k)].clone() / &s[k];
                }
                a[(k, k)] = a[(k, k)].clone() + &one;
            }
            s[k] = -s[k].clone();
        }
        for j in k + 1..n {
            if k < nct && !s[k].is_zero() {
                let mut t = zero.clone();
                for i in k..m {
                    t = t + &(a[(i, k)].clone() * &a[(i, j)]);
                }
                t = -t / &a[(k, k)];
                for i in k..m {
                    a[(i, j)] = a[(i, j)].clone() + &(t.clone() * &a[(i, k)]);
                }
            }
            e[j] = a[(k, j)].clone();
        }
        if k < nrt {
            // Row reflector: zero e[k+2..].
            e[k] = zero.clone();
            for i in k + 1..n {
                e[k] = e[k].hypot(&e[i]);
            }
            if !e[k].is_zero() {
                if e[k + 1] < zero {
                    e[k] = -e[k].clone();
                }
                for i in k + 1..n {
                    e[i] = e[i].clone() / &e[k];
                }
                e[k + 1] = e[k + 1].clone() + &one;
            }
            e[k] = -e[k].clone();
            if k + 1 < m && !e[k].is_zero() {
                for w in work.iter_mut().skip(k + 1) {
                    *w = zero.clone();
                }
                for j in k + 1..n {
                    for i in k + 1..m {
                        work[i] = work[i].clone() + &(e[j].clone() * &a[(i, j)]);
                    }
                }
                for j in k + 1..n {
                    let t = -e[j].clone() / &e[k + 1];
                    for i in k + 1..m {
                        a[(i, j)] = a[(i, j)].clone() + &(t.clone() * &work[i]);
                    }
                }
            }
        }
    }

    let mut p = n.min(m + 1);
    if nct < n {
        s[nct] = a[(nct, nct)].clone();
    }
    if m < p {
        s[p - 1] = zero.clone();
    }
    if nrt + 1 < p {
        e[nrt] = a[(nrt, p - 1)].clone();
    }
    e[p - 1] = zero.clone();

    let eps = zero.unit_roundoff() * &zero.int_like(2);
    let tiny = zero.f64_like(2f64.powi(-966));
    let cap = 500 * n;
    let mut sweeps = 0usize;
    let pp = p - 1;

    while p > 0 {
        // Find the largest k < p-1 with negligible e[k]; -1 if none.
        let mut k: isize = p as isize - 2;
        while k >= 0 {
            let ku = k as usize;
            if e[ku].abs() <= tiny.clone() + &(eps.clone() * &(s[ku].abs() + &s[ku + 1].abs())) {
                e[ku] = zero.clone();
                break;
            }
            k -= 1;
        }
        let kase;
        if k == p as isize - 2 {
            kase = 4;
        } else {
            let mut ks: isize = p as isize - 1;
            while ks > k {
                let ksu = ks as usize;
                let mut t = zero.clone();
                if ksu != p {
                    t = t + &e[ksu].abs();
                }
                if ks != k + 1 {
                    t = t + &e[ksu - 1].abs();
                }
                if s[ksu].abs() <= tiny.clone() + &(eps.clone() * &t) {
                    s[ksu] = zero.clone();
                    break;
                }
                ks -= 1;
            }
            if ks == k {
                kase = 3;
            } else if ks == p as isize - 1 {
                kase = 1;
            } else {
                kase = 2;
                k = ks;
            }
        }
        let k = (k + 1) as usize;

        match kase {
            1 => {
                // Deflate negligible s[p-1].
                let mut f = e[p - 2].clone();
                e[p - 2] = zero.clone();
                let mut j = p - 2;
                loop {
                    let t = s[j].hypot(&f);
                    let cs = s[j].clone() / &t;
                    let sn = f.clone() / &t;
                    s[j] = t;
                    if j != k {
                        f = -(sn * &e[j - 1]);
                        e[j - 1] = cs * &e[j - 1];
                    }
                    if j == k {
                        break;
                    }
                    j -= 1;
                }
            }
            2 => {
                // Split at negligible s[k-1].
                let mut f = e[k - 1].clone();
                e[k - 1] = zero.clone();
                for j in k..p {
                    let t = s[j].hypot(&f);
                    let cs = s[j].clone() / &t;
                    let sn = f.clone() / &t;
                    s[j] = t;
                    f = -(sn * &e[j]);
                    e[j] = cs * &e[j];
                }
            }
            3 => {
                if sweeps >= cap {
                    return Err(Error::NoConvergence { iterations: sweeps });
                }
                sweeps += 1;
                let mut scale = s[p - 1].abs();
                for v in [&s[p - 2], &e[p - 2], &s[k], &e[k]] {
                    let av = v.abs();
                    if av > scale {
                        scale = av;
                    }
                }
                let sp = s[p - 1].clone() / &scale;
                let spm1 = s[p - 2].clone() / &scale;
                let epm1 = e[p - 2].clone() / &scale;
                let sk = s[k].clone() / &scale;
                let ek = e[k].clone() / &scale;
                let b = ((spm1.clone() + &sp) * &(spm1.clone() - &sp) + &(epm1.clone() * &epm1))
                    / &zero.int_like(2);
                let c = (sp.clone() * &epm1) * &(sp.clone() * &epm1);
                let mut shift = zero.clone();
                if !b.is_zero() || !c.is_zero() {
                    shift = (b.clone() * &b + &c).sqrt();
                    if b < zero {
                        shift = -shift;
                    }
                    shift = c / &(b + &shift);
                }
                let mut g = sk.clone() * &ek;
                let mut f = (sk.clone() + &sp) * &(sk - &sp) + &shift;
                for j in k..p - 1 {
                    let mut t = f.hypot(&g);
                    let mut cs = f.clone() / &t;
                    let mut sn = g.clone() / &t;
                    if j != k {
                        e[j - 1] = t;
                    }
                    f = cs.clone() * &s[j] + &(sn.clone() * &e[j]);
                    e[j] = cs.clone() * &e[j] - &(sn.clone() * &s[j]);
                    g = sn.clone() * &s[j + 1];
                    s[j + 1] = cs.clone() * &s[j + 1];
                    t = f.hypot(&g);
                    cs = f.clone() / &t;
                    sn = g.clone() / &t;
                    s[j] = t;
                    f = cs.clone() * &e[j] + &(sn.clone() * &s[j + 1]);
                    s[j + 1] = -(sn.clone() * &e[j]) + &(cs.clone() * &s[j + 1]);
                    g = sn * &e[j + 1];
                    e[j + 1] = cs * &e[j + 1];
                }
                e[p - 2] = f;
            }
            _ => {
                // Convergence: make s[k] nonnegative and bubble it into order.
                if s[k] < zero {
                    s[k] = -s[k].clone();
                }
                let mut kk = k;
                while kk < pp {
                    if s[kk] >= s[kk + 1] {
                        break;
                    }
                    s.swap(kk, kk + 1);
                    kk += 1;
                }
                p -= 1;
            }
        }
    }
    s.truncate(n);
    Ok(s)
}

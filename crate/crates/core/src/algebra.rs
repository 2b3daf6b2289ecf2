//! Operations on a Bernstein–Vandermonde matrix held as its bidiagonal
//! decomposition. The factors are applied implicitly from the packed array;
//! neither the factors nor `A⁻¹` are ever materialized.

use crate::bd::BdMatrix;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Field;

/// `A = F_l⋯F_1 · D · G_1⋯G_n` as a dense `(l+1) x (n+1)` matrix.
///
/// `F_s` is unit lower bidiagonal with `M[r][r-s]` at `(r, r-1)`, and `G_s` is
/// unit upper bidiagonal with `M[r-s][r]` at `(r-1, r)`. Starting from `D`,
/// the `F` factors are applied on the left innermost first, then the `G`
/// factors on the right; every operation adds products of nonnegative numbers.
pub fn expand<T: Field>(bd: &BdMatrix<T>) -> Matrix<T> {
    let (rows, cols) = (bd.rows(), bd.cols());
    let n = cols - 1;
    let zero = bd.get(0, 0).zero_like();
    let mut a = Matrix::from_fn(rows, cols, |i, j| {
        if i == j {
            bd.pivot(i).clone()
        } else {
            zero.clone()
        }
    });

    for s in 1..rows {
        let last = (s + n).min(rows - 1);
        for r in (s..=last).rev() {
            let f = bd.get(r, r - s);
            for c in 0..cols {
                if a[(r - 1, c)].is_zero() {
                    continue;
                }
                let v = a[(r, c)].clone() + &(f.clone() * &a[(r - 1, c)]);
                a[(r, c)] = v;
            }
        }
    }

    for s in 1..cols {
        for c in (s..=n).rev() {
            let g = bd.get(c - s, c);
            for r in 0..rows {
                if a[(r, c - 1)].is_zero() {
                    continue;
                }
                let v = a[(r, c)].clone() + &(g.clone() * &a[(r, c - 1)]);
                a[(r, c)] = v;
            }
        }
    }
    a
}

/// `A·v` through the factors of [`expand`], without forming `A`.
pub fn matvec<T: Field>(bd: &BdMatrix<T>, v: &[T]) -> Result<Vec<T>> {
    let (rows, cols) = (bd.rows(), bd.cols());
    if v.len() != cols {
        return Err(Error::DimensionMismatch {
            expected: cols,
            found: v.len(),
        });
    }
    let n = cols - 1;
    let mut y = v.to_vec();
    for s in (1..cols).rev() {
        for c in s..=n {
            let t = y[c - 1].clone() + &(bd.get(c - s, c).clone() * &y[c]);
            y[c - 1] = t;
        }
    }
    let zero = bd.get(0, 0).zero_like();
    let mut z: Vec<T> = (0..rows)
        .map(|i| {
            if i < cols {
                bd.pivot(i).clone() * &y[i]
            } else {
                zero.clone()
            }
        })
        .collect();
    for s in 1..rows {
        let last = (s + n).min(rows - 1);
        for r in (s..=last).rev() {
            let t = z[r].clone() + &(bd.get(r, r - s).clone() * &z[r - 1]);
            z[r] = t;
        }
    }
    Ok(z)
}

/// `det A`, the product of the diagonal pivots. Square matrices only.
pub fn determinant<T: Field>(bd: &BdMatrix<T>) -> Result<T> {
    require_square(bd)?;
    let mut d = bd.pivot(0).clone();
    for i in 1..bd.cols() {
        d = d * bd.pivot(i);
    }
    Ok(d)
}

/// Solves `A x = b` as `x = G_1⋯G_n · D⁻¹ · F_n⋯F_1 · b`.
///
/// Here `F_s` subtracts `M[r][s-1]·y[r-1]` from `y[r]` for `r >= s` (one step
/// of the Neville elimination of `A`) and `G_s` subtracts `M[s-1][r]·y[r]`
/// from `y[r-1]`. Cost `O(n²)`.
pub fn solve_system<T: Field>(bd: &BdMatrix<T>, b: &[T]) -> Result<Vec<T>> {
    require_square(bd)?;
    let size = bd.cols();
    if b.len() != size {
        return Err(Error::DimensionMismatch {
            expected: size,
            found: b.len(),
        });
    }
    let n = size - 1;
    let mut y = b.to_vec();
    for s in 1..=n {
        for r in (s..=n).rev() {
            let t = y[r].clone() - &(bd.get(r, s - 1).clone() * &y[r - 1]);
            y[r] = t;
        }
    }
    for (r, yr) in y.iter_mut().enumerate() {
        *yr = yr.clone() / bd.pivot(r);
    }
    for s in (1..=n).rev() {
        for r in s..=n {
            let t = y[r - 1].clone() - &(bd.get(s - 1, r).clone() * &y[r]);
            y[r - 1] = t;
        }
    }
    Ok(y)
}

fn require_square<T>(bd: &BdMatrix<T>) -> Result<()> {
    if bd.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare {
            rows: bd.rows(),
            cols: bd.cols(),
        })
    }
}

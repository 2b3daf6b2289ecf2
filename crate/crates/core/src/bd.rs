//! Bidiagonal decomposition of a Bernstein–Vandermonde matrix, computed from
//! the nodes alone.
//!
//! The packed matrix `M` (0-based indices) holds
//!
//! * `M[i][i]`, `i <= n`: the diagonal pivot of the Neville elimination of `A`,
//! * `M[i][j]`, `i > j`: the multiplier of the Neville elimination of `A`
//!   that annihilates position `(i, j)` using row `i - 1`,
//! * `M[i][j]`, `i < j`: the multiplier of the Neville elimination of `Aᵀ`
//!   at position `(j, i)`.
//!
//! The same array describes both `A = F_l⋯F_1·D·G_1⋯G_n` and
//! `A⁻¹ = G_1⋯G_n·D⁻¹·F_n⋯F_1`; see [`crate::algebra`].
//!
//! Every entry is a product or quotient of node differences `x_i - x_k`
//! (`i > k`) and complements `1 - x_i`, all strictly positive, so no
//! cancellation ever happens after the first subtraction on the input data.

use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::nodes::{check_ordered, BasisDegree, NodeSet};
use crate::scalar::{pow_u, rational_to_f64, Field};

/// Packed pivots and multipliers, `(l+1) x (n+1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct BdMatrix<T = f64> {
    entries: Matrix<T>,
}

impl<T> BdMatrix<T> {
    /// Wraps an already packed array. The shape must satisfy `rows >= cols >= 1`.
    pub fn from_entries(entries: Matrix<T>) -> Result<Self> {
        if entries.cols() == 0 {
            return Err(Error::Empty);
        }
        if entries.cols() > entries.rows() {
            return Err(Error::DegreeExceedsRows {
                degree: entries.cols() - 1,
                max: entries.rows().saturating_sub(1),
            });
        }
        Ok(Self { entries })
    }

    pub fn rows(&self) -> usize {
        self.entries.rows()
    }

    pub fn cols(&self) -> usize {
        self.entries.cols()
    }

    /// The basis degree `n`.
    pub fn degree(&self) -> usize {
        self.cols() - 1
    }

    pub fn is_square(&self) -> bool {
        self.entries.is_square()
    }

    pub fn entries(&self) -> &Matrix<T> {
        &self.entries
    }

    pub fn into_entries(self) -> Matrix<T> {
        self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[(i, j)]
    }

    /// Diagonal pivot `p(i,i)`.
    pub fn pivot(&self, i: usize) -> &T {
        &self.entries[(i, i)]
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> BdMatrix<U> {
        BdMatrix {
            entries: self.entries.map(f),
        }
    }
}

impl BdMatrix<f64> {
    /// Rejects packed arrays with entries that are not positive, normal and
    /// finite.
    pub fn checked(entries: Matrix<f64>) -> Result<Self> {
        let bd = Self::from_entries(entries)?;
        bd.check_positive()?;
        Ok(bd)
    }

    fn check_positive(&self) -> Result<()> {
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                let v = self.entries[(i, j)];
                if !(v >= f64::MIN_POSITIVE && v.is_finite()) {
                    return Err(Error::UnderflowDetected { row: i, col: j });
                }
            }
        }
        Ok(())
    }
}

/// Working precision of [`compute_bd`].
pub const WORK_BITS: u32 = 128;

/// Computes `BD(A)` in `O(l·n)` operations.
///
/// The closed forms are evaluated with [`WORK_BITS`]-bit floats and each
/// entry is rounded once to the nearest double, so the result is within
/// about half an ulp of the exact decomposition of the given double nodes.
/// Evaluating them in doubles instead loses up to `O(n)` ulps, mostly to the
/// rounding of `1 - x_i` raised to powers up to `n`.
pub fn compute_bd(nodes: &NodeSet, degree: BasisDegree) -> Result<BdMatrix<f64>> {
    let x: Vec<Float> = nodes
        .as_slice()
        .iter()
        .map(|v| Float::with_val(WORK_BITS, v))
        .collect();
    let bd = BdMatrix {
        entries: bd_entries(&x, degree.get()).map(Float::to_f64),
    };
    bd.check_positive()?;
    Ok(bd)
}

/// The same closed forms evaluated in exact rational arithmetic.
pub fn compute_bd_exact(nodes: &[Rational], degree: usize) -> Result<BdMatrix<Rational>> {
    let zero = Rational::new();
    let one = Rational::from(1);
    check_ordered(nodes, |x| *x > zero && *x < one, rational_to_f64)?;
    BasisDegree::for_len(degree, nodes.len())?;
    Ok(BdMatrix {
        entries: bd_entries(nodes, degree),
    })
}

/// `BD(A)` for exact rational nodes, each entry rounded once to the nearest
/// double. Avoids the error of rounding the nodes themselves, which is
/// amplified in differences of close nodes.
pub fn compute_bd_rounded(nodes: &[Rational], degree: usize) -> Result<BdMatrix<f64>> {
    let bd = compute_bd_exact(nodes, degree)?.map(rational_to_f64);
    bd.check_positive()?;
    Ok(bd)
}

/// Evaluates the closed-form pivots and multipliers in any field.
///
/// Row `i` of the lower part is swept left to right with the running ratio
/// `Π_{k=1..j} (x_i - x_{i-k}) / (x_{i-1} - x_{i-1-k})`, so each multiplier
/// costs `O(1)` beyond a per-row table of powers of `(1-x_i)/(1-x_{i-1})`.
pub fn bd_entries<T: Field>(x: &[T], n: usize) -> Matrix<T> {
    let rows = x.len();
    let cols = n + 1;
    debug_assert!(cols <= rows);
    let one = x[0].one_like();
    let comp: Vec<T> = x.iter().map(|xi| one.clone() - xi).collect();
    let mut m = Matrix::from_fn(rows, cols, |_, _| one.zero_like());

    // Diagonal pivots: C(n,i) (1-x_i)^(n-i) Π_{k<i} (x_i - x_k)/(1 - x_k).
    let mut binom = one.clone();
    for i in 0..cols {
        if i > 0 {
            binom = binom * &one.int_like((n - i + 1) as i64) / &one.int_like(i as i64);
        }
        let mut p = binom.clone() * &pow_u(&comp[i], (n - i) as u32);
        for k in 0..i {
            p = p * &(x[i].clone() - &x[k]) / &comp[k];
        }
        m[(i, i)] = p;
    }

    // Lower multipliers m(i,j) = q^(n-j) (1-x_{i-j-1})/(1-x_{i-1}) Π ratio.
    for i in 1..rows {
        let jmax = (i - 1).min(n);
        let q = comp[i].clone() / &comp[i - 1];
        let mut qpow = Vec::with_capacity(n + 1);
        qpow.push(one.clone());
        for e in 1..=n {
            let prev: &T = &qpow[e - 1];
            qpow.push(prev.clone() * &q);
        }
        let mut ratio = one.clone();
        for j in 0..=jmax {
            if j > 0 {
                ratio = ratio * &(x[i].clone() - &x[i - j]) / &(x[i - 1].clone() - &x[i - 1 - j]);
            }
            m[(i, j)] = qpow[n - j].clone() * &comp[i - 1 - j] / &comp[i - 1] * &ratio;
        }
    }

    // Upper multipliers: M[i][j] = (n-j+1) x_i / (j (1-x_i)), i < j.
    for i in 0..cols {
        let odds = x[i].clone() / &comp[i];
        for j in i + 1..cols {
            m[(i, j)] = odds.clone() * &one.int_like((n - j + 1) as i64) / &one.int_like(j as i64);
        }
    }
    m
}

//! Ground truth: exact rational Neville elimination, exact minors and
//! high-precision reference spectra.
//!
//! Nothing here uses the closed-form pivot and multiplier formulas; the
//! matrix is always built by evaluating the Bernstein basis directly.

use std::cmp::Ordering;

use rug::ops::Pow;
use rug::{Float, Rational};
use serde::Serialize;

use crate::bd::BdMatrix;
use crate::error::{Error, Result};
use crate::kernels;
use crate::matrix::Matrix;
use crate::nodes::{check_ordered, validate_nodes, BasisDegree, NodeSet};
use crate::scalar::{rational_to_f64, Field};
use crate::spectral::{refine, Candidate, Outcome, Spectrum};

/// Strictly increasing exact rational nodes in `(0, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalNodeSet(Vec<Rational>);

impl RationalNodeSet {
    pub fn new(nodes: Vec<Rational>) -> Result<Self> {
        let (zero, one) = (Rational::new(), Rational::from(1));
        check_ordered(&nodes, |x| *x > zero && *x < one, Rational::to_f64)?;
        Ok(Self(nodes))
    }

    /// Convenience constructor from `(numerator, denominator)` pairs.
    pub fn from_pairs(pairs: &[(i64, i64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(p, q)| Rational::from((p, q))).collect())
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Each node rounded to the nearest double.
    pub fn to_f64(&self) -> Result<NodeSet> {
        let raw: Vec<f64> = self.0.iter().map(rational_to_f64).collect();
        validate_nodes(&raw)
    }
}

/// The Bernstein–Vandermonde matrix `C(n,j) x_i^j (1-x_i)^(n-j)`, exactly.
pub fn bernstein_vandermonde_exact(
    nodes: &RationalNodeSet,
    degree: usize,
) -> Result<Matrix<Rational>> {
    BasisDegree::for_len(degree, nodes.len())?;
    let x = nodes.as_slice();
    Ok(Matrix::from_fn(x.len(), degree + 1, |i, j| {
        let binom = Rational::from(rug::Integer::from(degree).binomial(j as u32));
        let one_minus = Rational::from(1) - &x[i];
        let mut v = binom;
        for _ in 0..j {
            v *= &x[i];
        }
        for _ in 0..degree - j {
            v *= &one_minus;
        }
        v
    }))
}

/// Pivots of the Neville elimination of `A` and of `Uᵀ`.
#[derive(Clone, Debug, PartialEq)]
pub struct PivotTable {
    /// `p(i,j)` for `i >= j` (zero above the diagonal), `(l+1) x (n+1)`.
    pub pivots: Matrix<Rational>,
    /// Pivots of the Neville elimination of `Uᵀ`, `(n+1) x (n+1)`, lower part.
    pub transposed_pivots: Matrix<Rational>,
}

impl PivotTable {
    /// `m(i,j) = p(i,j) / p(i-1,j)` for `i > j`.
    pub fn multiplier(&self, i: usize, j: usize) -> Rational {
        assert!(i > j);
        self.pivots[(i, j)].clone() / &self.pivots[(i - 1, j)]
    }

    /// Multiplier of the elimination of `Uᵀ` at `(i, j)`, `i > j`.
    pub fn transposed_multiplier(&self, i: usize, j: usize) -> Rational {
        assert!(i > j);
        self.transposed_pivots[(i, j)].clone() / &self.transposed_pivots[(i - 1, j)]
    }
}

/// Neville elimination without row exchanges. Returns the pivot table and
/// the final upper trapezoidal matrix.
pub fn neville_elimination(a: &Matrix<Rational>) -> Result<(Matrix<Rational>, Matrix<Rational>)> {
    let (rows, cols) = (a.rows(), a.cols());
    let mut w = a.clone();
    let mut pivots = Matrix::from_fn(rows, cols, |_, _| Rational::new());
    for t in 0..cols.min(rows) {
        for i in t..rows {
            if w[(i, t)].is_zero() {
                return Err(Error::ZeroPivot { row: i, col: t });
            }
            pivots[(i, t)] = w[(i, t)].clone();
        }
        // Bottom-up so that row i-1 still holds its step-t value.
        for i in (t + 1..rows).rev() {
            let mult = w[(i, t)].clone() / &w[(i - 1, t)];
            for j in t..cols {
                let v = w[(i, j)].clone() - &(mult.clone() * &w[(i - 1, j)]);
                w[(i, j)] = v;
            }
        }
    }
    Ok((pivots, w))
}

/// Complete Neville elimination of the exact Bernstein–Vandermonde matrix.
pub fn neville_exact(
    nodes: &RationalNodeSet,
    degree: usize,
) -> Result<(BdMatrix<Rational>, PivotTable)> {
    let a = bernstein_vandermonde_exact(nodes, degree)?;
    let (rows, cols) = (a.rows(), a.cols());
    let (pivots, u) = neville_elimination(&a)?;
    let ut = Matrix::from_fn(cols, cols, |i, j| u[(j, i)].clone());
    let (transposed_pivots, _) = neville_elimination(&ut)?;
    let table = PivotTable {
        pivots,
        transposed_pivots,
    };

    let m = Matrix::from_fn(rows, cols, |i, j| match i.cmp(&j) {
        Ordering::Equal => table.pivots[(i, i)].clone(),
        Ordering::Greater => table.multiplier(i, j),
        Ordering::Less => table.transposed_multiplier(j, i),
    });
    Ok((BdMatrix::from_entries(m)?, table))
}

/// Exact determinant by Gaussian elimination with nonzero pivot search.
pub fn determinant_exact(a: &Matrix<Rational>) -> Rational {
    assert!(a.is_square());
    let n = a.rows();
    let mut w = a.clone();
    let mut det = Rational::from(1);
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !w[(i, k)].is_zero()) else {
            return Rational::new();
        };
        if p != k {
            for j in 0..n {
                w.swap((p, j), (k, j));
            }
            det = -det;
        }
        det *= &w[(k, k)];
        for i in k + 1..n {
            let f = w[(i, k)].clone() / &w[(k, k)];
            for j in k..n {
                let v = w[(i, j)].clone() - &(f.clone() * &w[(k, j)]);
                w[(i, j)] = v;
            }
        }
    }
    det
}

/// Exact solution of `A x = b` by Gaussian elimination on the formed matrix.
pub fn solve_exact(nodes: &RationalNodeSet, b: &[Rational]) -> Result<Vec<Rational>> {
    let n = nodes.len();
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.len(),
        });
    }
    let a = bernstein_vandermonde_exact(nodes, n - 1)?;
    let mut w = Matrix::from_fn(n, n + 1, |i, j| {
        if j < n {
            a[(i, j)].clone()
        } else {
            b[i].clone()
        }
    });
    for k in 0..n {
        let p = (k..n)
            .find(|&i| !w[(i, k)].is_zero())
            .ok_or(Error::ZeroPivot { row: k, col: k })?;
        for j in 0..=n {
            w.swap((p, j), (k, j));
        }
        for i in k + 1..n {
            let f = w[(i, k)].clone() / &w[(k, k)];
            for j in k..=n {
                let v = w[(i, j)].clone() - &(f.clone() * &w[(k, j)]);
                w[(i, j)] = v;
            }
        }
    }
    let mut x = vec![Rational::new(); n];
    for i in (0..n).rev() {
        let mut s = w[(i, n)].clone();
        for j in i + 1..n {
            s -= w[(i, j)].clone() * &x[j];
        }
        x[i] = s / &w[(i, i)];
    }
    Ok(x)
}

fn submatrix(
    a: &Matrix<Rational>,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Matrix<Rational> {
    let (r0, c0) = (rows.start, cols.start);
    Matrix::from_fn(rows.len(), cols.len(), |i, j| a[(r0 + i, c0 + j)].clone())
}

/// A pivot that disagrees with its quotient of minors.
#[derive(Clone, Debug, PartialEq)]
pub struct MinorMismatch {
    /// Whether the pivot belongs to the elimination of `Aᵀ`.
    pub transposed: bool,
    pub row: usize,
    pub col: usize,
    pub pivot: Rational,
    pub minor_quotient: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinorCheck {
    pub holds: bool,
    pub counterexample: Option<MinorMismatch>,
}

/// Verifies `p(i,j) = det A[i-j..=i | 0..=j] / det A[i-j..i | 0..j]` for
/// every pivot of `A` and of the square leading block of `Aᵀ`, with minors
/// evaluated independently of the elimination. Intended for `l <= 8`.
pub fn check_pivot_minors(nodes: &RationalNodeSet, degree: usize) -> Result<MinorCheck> {
    let a = bernstein_vandermonde_exact(nodes, degree)?;
    let (_, table) = neville_exact(nodes, degree)?;
    let cols = a.cols();
    let at = Matrix::from_fn(cols, cols, |i, j| a[(j, i)].clone());

    let checks = [
        (false, &a, &table.pivots),
        (true, &at, &table.transposed_pivots),
    ];
    for (transposed, mat, pivots) in checks {
        for j in 0..mat.cols() {
            for i in j..mat.rows() {
                let num = determinant_exact(&submatrix(mat, i - j..i + 1, 0..j + 1));
                let den = if j == 0 {
                    Rational::from(1)
                } else {
                    determinant_exact(&submatrix(mat, i - j..i, 0..j))
                };
                let quotient = num / den;
                if quotient != pivots[(i, j)] {
                    return Ok(MinorCheck {
                        holds: false,
                        counterexample: Some(MinorMismatch {
                            transposed,
                            row: i,
                            col: j,
                            pivot: pivots[(i, j)].clone(),
                            minor_quotient: quotient,
                        }),
                    });
                }
            }
        }
    }
    Ok(MinorCheck {
        holds: true,
        counterexample: None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SpectrumKind {
    Eigen,
    Singular,
}

/// High-precision spectrum of the exact matrix, sorted descending.
#[derive(Clone, Debug, PartialEq)]
pub struct ReferenceSpectrum {
    pub values: Vec<Float>,
    /// Working precision of the returned values.
    pub bits: u32,
    pub kind: SpectrumKind,
}

impl ReferenceSpectrum {
    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(Float::to_f64).collect()
    }

    /// `σ_max / σ_min` (or `λ_max / λ_min`).
    pub fn extreme_ratio(&self) -> f64 {
        let last = self.values.last().expect("nonempty spectrum");
        (self.values[0].clone() / last).to_f64()
    }
}

/// Bits of working precision for `digits` decimal digits plus 10 guard bits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 10
}

/// Spectrum of the exact Bernstein–Vandermonde matrix to `digits` decimal
/// digits. The exact matrix is rounded to `bits_for_digits(digits)` bits and
/// the dense kernels run at that precision; the precision is doubled until
/// two successive runs agree to `10^-digits` relatively on every value.
pub fn reference_spectrum(
    nodes: &RationalNodeSet,
    degree: usize,
    kind: SpectrumKind,
    digits: u32,
) -> Result<ReferenceSpectrum> {
    let exact = bernstein_vandermonde_exact(nodes, degree)?;
    if kind == SpectrumKind::Eigen && !exact.is_square() {
        return Err(Error::NotSquare {
            rows: exact.rows(),
            cols: exact.cols(),
        });
    }
    let start = bits_for_digits(digits);
    let tol = Float::with_val(start, 10).pow(-(digits as i32));
    let outcome = refine(
        start,
        start * 32,
        |bits| {
            let a = exact.map(|r| Float::with_val(bits, r));
            let (mut values, usable) = match kind {
                SpectrumKind::Eigen => {
                    let pairs = kernels::eigenvalues(&a)?;
                    let usable = pairs.iter().all(|(_, im)| im.is_zero());
                    (
                        pairs.into_iter().map(|(re, _)| re).collect::<Vec<_>>(),
                        usable,
                    )
                }
                SpectrumKind::Singular => (kernels::singular_values(&a)?, true),
            };
            values.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
            Ok(Candidate {
                value: values,
                usable,
            })
        },
        |a: &Vec<Float>, b: &Vec<Float>| {
            a.len() == b.len()
                && a.iter().zip(b).all(|(x, y)| {
                    let prec = x.prec().max(y.prec());
                    let (ax, ay) = (
                        Float::with_val(prec, x.abs_ref()),
                        Float::with_val(prec, y.abs_ref()),
                    );
                    let scale = if ax < ay { ax } else { ay };
                    Float::with_val(prec, x - y).abs() <= scale * &tol
                })
        },
    )?;
    match outcome {
        Outcome::Stable(values, bits) => Ok(ReferenceSpectrum { values, bits, kind }),
        Outcome::Exhausted(_, bits) => Err(Error::NoConvergence {
            iterations: bits as usize,
        }),
    }
}

/// One line of a relative-error table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorRow {
    pub reference: f64,
    pub computed: f64,
    pub relative_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorReport {
    pub rows: Vec<ErrorRow>,
}

impl ErrorReport {
    pub fn max_relative_error(&self) -> f64 {
        self.rows.iter().fold(0.0, |m, r| m.max(r.relative_error))
    }
}

/// `|computed - reference| / |reference|` per value, the difference taken
/// at the reference precision.
pub fn relative_errors(reference: &[Float], computed: &Spectrum) -> Result<ErrorReport> {
    if reference.len() != computed.values.len() {
        return Err(Error::LengthMismatch {
            reference: reference.len(),
            computed: computed.values.len(),
        });
    }
    let rows = reference
        .iter()
        .zip(&computed.values)
        .map(|(r, c)| {
            let prec = r.prec().max(64);
            let diff = Float::with_val(prec, Float::with_val(prec, *c) - r).abs();
            let rel = diff / Float::with_val(prec, r.abs_ref());
            ErrorRow {
                reference: r.to_f64(),
                computed: *c,
                relative_error: rel.to_f64(),
            }
        })
        .collect();
    Ok(ErrorReport { rows })
}

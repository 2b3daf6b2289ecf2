//! Eigenvalues, singular values, QR and least squares of a Bernstein–Vandermonde
//! matrix given its bidiagonal decomposition.
//!
//! The accurate routines expand `BD(A)` into a dense matrix at `p` bits of
//! working precision, run a backward-stable dense kernel at the same
//! precision, and double `p` until two successive precisions agree. The
//! expansion only adds products of positive numbers, so at every precision the
//! dense matrix is relatively accurate to about `2^-p` entrywise and its
//! spectrum is determined by `BD(A)` rather than by a rounded copy of `A`.
//! The expansion is redone from `BD(A)` at each precision.
//!
//! The `baseline_*` routines are plain double-precision runs of the same
//! kernels on an already formed matrix, for comparison.

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::algebra::expand;
use crate::bd::BdMatrix;
use crate::error::{Error, Result};
use crate::kernels;
use crate::matrix::{DenseMatrix, Matrix};
use crate::scalar::{relative_gap, Real};

/// Environment variable overriding [`PrecisionPolicy::max_bits`].
pub const MAX_BITS_ENV: &str = "BVTN_MAX_BITS";

/// Working-precision schedule for the adaptive kernels.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    pub start_bits: u32,
    pub max_bits: u32,
    pub stabilization_rtol: f64,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        Self {
            start_bits: 106,
            max_bits: 1024,
            stabilization_rtol: 1e-15,
        }
    }
}

impl PrecisionPolicy {
    pub fn validate(&self) -> Result<()> {
        if self.start_bits < 53 {
            return Err(Error::InvalidPolicy(format!(
                "start_bits = {} is below 53",
                self.start_bits
            )));
        }
        if self.start_bits > self.max_bits {
            return Err(Error::InvalidPolicy(format!(
                "start_bits = {} exceeds max_bits = {}",
                self.start_bits, self.max_bits
            )));
        }
        let rtol = self.stabilization_rtol;
        if !(rtol > 0.0 && rtol < 1.0) {
            return Err(Error::InvalidPolicy(format!(
                "stabilization_rtol = {rtol} is not in (0, 1)"
            )));
        }
        Ok(())
    }

    /// Applies `BVTN_MAX_BITS` when it is set to an integer.
    pub fn with_env_overrides(mut self) -> Self {
        if let Some(bits) = std::env::var(MAX_BITS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u32>().ok())
        {
            self.max_bits = bits;
        }
        self
    }
}

/// Eigenvalues or singular values, sorted descending.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub values: Vec<f64>,
    /// Working precision of the returned values (53 for the baselines).
    pub achieved_bits: u32,
    /// Whether two successive precisions agreed to the policy tolerance.
    pub stabilized: bool,
}

impl Spectrum {
    pub fn is_strictly_positive(&self) -> bool {
        self.values.iter().all(|v| *v > 0.0)
    }

    pub fn is_strictly_decreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] > w[1])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QrResult {
    /// Orthogonal factor of order `l+1`.
    pub q: DenseMatrix,
    /// Upper triangular factor of order `n+1` with positive diagonal.
    pub r: DenseMatrix,
    pub achieved_bits: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LsqSolution {
    pub coefficients: Vec<f64>,
    /// `f - A·c`.
    pub residual: Vec<f64>,
    /// `‖d_2‖₂` where `(d_1; d_2) = Qᵀ f`.
    pub residual_norm: f64,
    pub achieved_bits: u32,
}

pub(crate) struct Candidate<V> {
    pub value: V,
    /// False when the result at this precision is unusable (e.g. a complex
    /// pair appeared among eigenvalues that must be real).
    pub usable: bool,
}

pub(crate) enum Outcome<V> {
    Stable(V, u32),
    Exhausted(V, u32),
}

/// Runs `attempt` at `start, 2·start, …` (capped at `max`) until two
/// successive usable results satisfy `agree`.
pub(crate) fn refine<V>(
    start: u32,
    max: u32,
    mut attempt: impl FnMut(u32) -> Result<Candidate<V>>,
    agree: impl Fn(&V, &V) -> bool,
) -> Result<Outcome<V>> {
    let mut bits = start;
    let mut prev: Option<Candidate<V>> = None;
    loop {
        let cur = attempt(bits)?;
        if let Some(p) = &prev {
            if p.usable && cur.usable && agree(&p.value, &cur.value) {
                return Ok(Outcome::Stable(cur.value, bits));
            }
        }
        if bits >= max {
            return Ok(Outcome::Exhausted(cur.value, bits));
        }
        prev = Some(cur);
        bits = bits.saturating_mul(2).min(max);
    }
}

/// `BD(A)` expanded to a dense matrix at `bits` of working precision.
pub fn expand_at(bd: &BdMatrix<f64>, bits: u32) -> Matrix<Float> {
    expand(&bd.map(|v| Float::with_val(bits, *v)))
}

fn spectra_agree(rtol: f64) -> impl Fn(&Vec<f64>, &Vec<f64>) -> bool {
    move |a, b| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| relative_gap(*x, *y) <= rtol)
}

fn sort_descending(v: &mut [f64]) {
    v.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
}

fn finish_spectrum(outcome: Outcome<Vec<f64>>) -> Result<Spectrum> {
    match outcome {
        Outcome::Stable(values, bits) => Ok(Spectrum {
            values,
            achieved_bits: bits,
            stabilized: true,
        }),
        Outcome::Exhausted(values, bits) => Err(Error::PrecisionExhausted {
            bits,
            partial: Some(Box::new(Spectrum {
                values,
                achieved_bits: bits,
                stabilized: false,
            })),
        }),
    }
}

/// Eigenvalues of a square `A` from `BD(A)`, accurate relative to each value.
pub fn eigenvalues(bd: &BdMatrix<f64>, policy: &PrecisionPolicy) -> Result<Spectrum> {
    policy.validate()?;
    if !bd.is_square() {
        return Err(Error::NotSquare {
            rows: bd.rows(),
            cols: bd.cols(),
        });
    }
    let outcome = refine(
        policy.start_bits,
        policy.max_bits,
        |bits| {
            let pairs = kernels::eigenvalues(&expand_at(bd, bits))?;
            let usable = pairs.iter().all(|(_, im)| im.is_zero());
            let mut values: Vec<f64> = pairs.iter().map(|(re, _)| re.to_f64()).collect();
            sort_descending(&mut values);
            Ok(Candidate {
                value: values,
                usable,
            })
        },
        spectra_agree(policy.stabilization_rtol),
    )?;
    finish_spectrum(outcome)
}

/// Singular values of `A` from `BD(A)`, accurate relative to each value.
pub fn singular_values(bd: &BdMatrix<f64>, policy: &PrecisionPolicy) -> Result<Spectrum> {
    policy.validate()?;
    let outcome = refine(
        policy.start_bits,
        policy.max_bits,
        |bits| {
            let sv = kernels::singular_values(&expand_at(bd, bits))?;
            let mut values: Vec<f64> = sv.iter().map(Real::to_f64).collect();
            sort_descending(&mut values);
            Ok(Candidate {
                value: values,
                usable: true,
            })
        },
        spectra_agree(policy.stabilization_rtol),
    )?;
    finish_spectrum(outcome)
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn to_dense(m: &Matrix<Float>) -> DenseMatrix {
    m.map(Real::to_f64)
}

/// Full QR factorization `A = Q·[R; 0]` computed from `BD(A)`.
///
/// Stabilization is normwise: successive `Q` agree to `rtol` in max norm and
/// successive `R` to `rtol·‖R‖_max`.
pub fn qr(bd: &BdMatrix<f64>, policy: &PrecisionPolicy) -> Result<QrResult> {
    policy.validate()?;
    let rtol = policy.stabilization_rtol;
    let outcome = refine(
        policy.start_bits,
        policy.max_bits,
        |bits| {
            let (q, r) = kernels::householder_qr(&expand_at(bd, bits));
            Ok(Candidate {
                value: (to_dense(&q), to_dense(&r)),
                usable: true,
            })
        },
        |(q0, r0): &(DenseMatrix, DenseMatrix), (q1, r1)| {
            max_abs_diff(q0.as_slice(), q1.as_slice()) <= rtol
                && max_abs_diff(r0.as_slice(), r1.as_slice()) <= rtol * max_abs(r1.as_slice())
        },
    )?;
    match outcome {
        Outcome::Stable((q, r), bits) => Ok(QrResult {
            q,
            r,
            achieved_bits: bits,
        }),
        Outcome::Exhausted(_, bits) => Err(Error::PrecisionExhausted {
            bits,
            partial: None,
        }),
    }
}

/// Minimizes `‖A·c - f‖₂` for `l > n` through the full QR factorization:
/// `(d_1; d_2) = Qᵀf`, `R c = d_1`, `r = Q·(0; d_2)`.
///
/// Stabilization is normwise on `c` (relative to `‖c‖∞`) and on `r`
/// (relative to `‖f‖∞`).
pub fn least_squares(
    bd: &BdMatrix<f64>,
    f: &[f64],
    policy: &PrecisionPolicy,
) -> Result<LsqSolution> {
    policy.validate()?;
    let (rows, cols) = (bd.rows(), bd.cols());
    if rows <= cols {
        return Err(Error::NotOverdetermined { rows, cols });
    }
    if f.len() != rows {
        return Err(Error::DimensionMismatch {
            expected: rows,
            found: f.len(),
        });
    }
    let rtol = policy.stabilization_rtol;
    let fscale = max_abs(f).max(f64::MIN_POSITIVE);
    let outcome = refine(
        policy.start_bits,
        policy.max_bits,
        |bits| {
            Ok(Candidate {
                value: lsq_at(bd, f, bits),
                usable: true,
            })
        },
        |a: &LsqSolution, b: &LsqSolution| {
            let cscale = max_abs(&b.coefficients).max(f64::MIN_POSITIVE);
            max_abs_diff(&a.coefficients, &b.coefficients) <= rtol * cscale
                && max_abs_diff(&a.residual, &b.residual) <= rtol * fscale
        },
    )?;
    match outcome {
        Outcome::Stable(sol, bits) => Ok(LsqSolution {
            achieved_bits: bits,
            ..sol
        }),
        Outcome::Exhausted(_, bits) => Err(Error::PrecisionExhausted {
            bits,
            partial: None,
        }),
    }
}

fn lsq_at(bd: &BdMatrix<f64>, f: &[f64], bits: u32) -> LsqSolution {
    let a = expand_at(bd, bits);
    let (m, n) = (a.rows(), a.cols());
    let (q, r) = kernels::householder_qr(&a);
    let zero = Float::new(bits);
    let fp: Vec<Float> = f.iter().map(|v| Float::with_val(bits, *v)).collect();

    let d: Vec<Float> = (0..m)
        .map(|j| {
            let mut s = zero.clone();
            for i in 0..m {
                s += q[(i, j)].clone() * &fp[i];
            }
            s
        })
        .collect();

    let mut c = vec![zero.clone(); n];
    for i in (0..n).rev() {
        let mut s = d[i].clone();
        for j in i + 1..n {
            s -= r[(i, j)].clone() * &c[j];
        }
        c[i] = s / &r[(i, i)];
    }

    let residual: Vec<Float> = (0..m)
        .map(|i| {
            let mut s = zero.clone();
            for j in n..m {
                s += q[(i, j)].clone() * &d[j];
            }
            s
        })
        .collect();
    let mut norm = zero.clone();
    for dj in &d[n..] {
        norm = norm.hypot(dj);
    }

    LsqSolution {
        coefficients: c.iter().map(Float::to_f64).collect(),
        residual: residual.iter().map(Float::to_f64).collect(),
        residual_norm: norm.to_f64(),
        achieved_bits: bits,
    }
}

/// Double-precision Hessenberg QR eigenvalues of a formed matrix. Complex
/// pairs are reported by their real parts.
pub fn baseline_eigenvalues(a: &DenseMatrix) -> Result<Spectrum> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let mut values: Vec<f64> = kernels::eigenvalues(a)?
        .into_iter()
        .map(|(re, _)| re)
        .collect();
    sort_descending(&mut values);
    Ok(Spectrum {
        values,
        achieved_bits: f64::MANTISSA_DIGITS,
        stabilized: false,
    })
}

/// Double-precision Golub–Kahan SVD values of a formed matrix.
pub fn baseline_singular_values(a: &DenseMatrix) -> Result<Spectrum> {
    let mut values = kernels::singular_values(a)?;
    sort_descending(&mut values);
    Ok(Spectrum {
        values,
        achieved_bits: f64::MANTISSA_DIGITS,
        stabilized: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bd::compute_bd;
    use crate::nodes::{validate_nodes, BasisDegree};

    fn bd_of(x: &[f64], n: usize) -> BdMatrix<f64> {
        let nodes = validate_nodes(x).unwrap();
        compute_bd(&nodes, BasisDegree::new(n, &nodes).unwrap()).unwrap()
    }

    fn unit() -> BdMatrix<f64> {
        BdMatrix::checked(Matrix::from_rows(vec![vec![1.0]])).unwrap()
    }

    #[test]
    fn policy_validation() {
        assert!(PrecisionPolicy::default().validate().is_ok());
        let bad = [
            PrecisionPolicy {
                start_bits: 40,
                ..Default::default()
            },
            PrecisionPolicy {
                start_bits: 2048,
                ..Default::default()
            },
            PrecisionPolicy {
                stabilization_rtol: 0.0,
                ..Default::default()
            },
            PrecisionPolicy {
                stabilization_rtol: 1.0,
                ..Default::default()
            },
        ];
        for p in bad {
            assert!(
                matches!(p.validate(), Err(Error::InvalidPolicy(_))),
                "{p:?}"
            );
        }
    }

    #[test]
    fn eigenvalues_two_by_two() {
        let s = eigenvalues(&bd_of(&[0.25, 0.5], 1), &PrecisionPolicy::default()).unwrap();
        assert_eq!(s.values, vec![1.0, 0.25]);
        assert!(s.stabilized);
        assert_eq!(s.achieved_bits, 212);
    }

    #[test]
    fn unit_cases() {
        let p = PrecisionPolicy::default();
        assert_eq!(eigenvalues(&unit(), &p).unwrap().values, vec![1.0]);
        assert_eq!(singular_values(&unit(), &p).unwrap().values, vec![1.0]);
        let qr = qr(&unit(), &p).unwrap();
        assert_eq!(qr.q.as_slice(), &[1.0]);
        assert_eq!(qr.r.as_slice(), &[1.0]);
    }

    #[test]
    fn singular_values_two_by_two() {
        let s = singular_values(&bd_of(&[0.25, 0.5], 1), &PrecisionPolicy::default()).unwrap();
        let r = 65f64.sqrt();
        assert!(relative_gap(s.values[0], ((9.0 + r) / 16.0).sqrt()) < 4e-16);
        assert!(relative_gap(s.values[1], ((9.0 - r) / 16.0).sqrt()) < 4e-16);
    }

    #[test]
    fn single_column_of_ones() {
        let s = singular_values(
            &bd_of(&[0.1, 0.4, 0.6, 0.9], 0),
            &PrecisionPolicy::default(),
        )
        .unwrap();
        assert_eq!(s.values, vec![2.0]);
    }

    #[test]
    fn eigenvalues_need_square() {
        let err =
            eigenvalues(&bd_of(&[0.2, 0.4, 0.6], 1), &PrecisionPolicy::default()).unwrap_err();
        assert!(matches!(err, Error::NotSquare { rows: 3, cols: 2 }));
    }

    #[test]
    fn exhausted_precision_reports_partial() {
        // A single precision step can never stabilize.
        let p = PrecisionPolicy {
            start_bits: 64,
            max_bits: 64,
            stabilization_rtol: 1e-15,
        };
        match eigenvalues(&bd_of(&[0.25, 0.5], 1), &p) {
            Err(Error::PrecisionExhausted {
                bits: 64,
                partial: Some(s),
            }) => {
                assert!(!s.stabilized);
                assert_eq!(s.values.len(), 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn least_squares_three_by_two() {
        let bd = bd_of(&[0.25, 0.5, 0.75], 1);
        let sol = least_squares(&bd, &[1.0, 0.0, 0.0], &PrecisionPolicy::default()).unwrap();
        let want_c = [4.0 / 3.0, -2.0 / 3.0];
        let want_r = [1.0 / 6.0, -1.0 / 3.0, 1.0 / 6.0];
        for (g, w) in sol.coefficients.iter().zip(want_c) {
            assert!((g - w).abs() < 1e-15);
        }
        for (g, w) in sol.residual.iter().zip(want_r) {
            assert!((g - w).abs() < 1e-15);
        }
        assert!((sol.residual_norm - (1.0f64 / 6.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn qr_factor_is_orthonormal() {
        let x: Vec<f64> = (1..=12).map(|k| k as f64 / 13.0).collect();
        let f = qr(&bd_of(&x, 7), &PrecisionPolicy::default()).unwrap();
        let gram = f.q.transpose().matmul(&f.q);
        let mut off = 0.0f64;
        for i in 0..gram.rows() {
            for j in 0..gram.cols() {
                let id = if i == j { 1.0 } else { 0.0 };
                off = off.max((gram[(i, j)] - id).abs());
            }
        }
        assert!(off <= 1e-14 * 13.0, "{off:e}");
    }

    #[test]
    fn least_squares_consistent_data() {
        let x: Vec<f64> = (1..=9).map(|k| k as f64 / 10.0).collect();
        let bd = bd_of(&x, 4);
        let p = PrecisionPolicy::default();

        // The basis sums to one, so f = 1 is fitted exactly by c = 1.
        let ones = least_squares(&bd, &[1.0; 9], &p).unwrap();
        for c in &ones.coefficients {
            assert!((c - 1.0).abs() < 1e-13, "{c}");
        }
        assert!(ones.residual_norm < 1e-13);

        let c0 = [0.5, -1.0, 2.0, 0.25, -0.75];
        let f = crate::algebra::matvec(&bd, &c0).unwrap();
        let sol = least_squares(&bd, &f, &p).unwrap();
        for (g, w) in sol.coefficients.iter().zip(c0) {
            assert!((g - w).abs() < 1e-13, "{g} vs {w}");
        }
        assert!(sol.residual_norm < 1e-13);
    }

    #[test]
    fn least_squares_errors() {
        let p = PrecisionPolicy::default();
        assert!(matches!(
            least_squares(&bd_of(&[0.25, 0.5], 1), &[1.0, 1.0], &p),
            Err(Error::NotOverdetermined { .. })
        ));
        assert!(matches!(
            least_squares(&bd_of(&[0.25, 0.5, 0.75], 1), &[1.0, 1.0], &p),
            Err(Error::DimensionMismatch {
                expected: 3,
                found: 2
            })
        ));
    }

    #[test]
    fn baselines_on_small_cases() {
        let a = Matrix::from_rows(vec![vec![0.75, 0.25], vec![0.5, 0.5]]);
        let s = baseline_eigenvalues(&a).unwrap();
        assert!((s.values[0] - 1.0).abs() < 1e-15 && (s.values[1] - 0.25).abs() < 1e-15);
        let id = DenseMatrix::identity(3);
        assert_eq!(baseline_eigenvalues(&id).unwrap().values, vec![1.0; 3]);
        assert_eq!(baseline_singular_values(&id).unwrap().values, vec![1.0; 3]);
        let wide = Matrix::from_rows(vec![vec![1.0, 2.0]]);
        assert!(matches!(
            baseline_eigenvalues(&wide),
            Err(Error::NotSquare { .. })
        ));
    }
}

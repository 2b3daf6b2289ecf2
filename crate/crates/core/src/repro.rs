//! The two reference experiments: eigenvalues of the order-21
//! Bernstein–Vandermonde matrix on a fixed node list, and singular values of
//! the 21×16 matrix on the same nodes.
//!
//! Each run compares the adaptive-precision pipeline and the double-precision
//! baseline against a 50-digit reference built from the exact rational nodes.
//! Both start from `BD(A)` of the exact nodes rounded entrywise to doubles
//! ([`compute_bd_rounded`]); [`run_with_double_nodes`] instead rounds the
//! nodes first and goes through [`compute_bd`].

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::expand;
use crate::bd::{compute_bd, compute_bd_rounded, BdMatrix};
use crate::error::Result;
use crate::nodes::BasisDegree;
use crate::oracle::{reference_spectrum, relative_errors, RationalNodeSet, SpectrumKind};
use crate::spectral::{self, PrecisionPolicy, Spectrum};

/// Digits carried by the reference spectra.
pub const REFERENCE_DIGITS: u32 = 50;

/// The 21 nodes shared by both experiments, as `(numerator, denominator)`.
pub const NODES: [(i64, i64); 21] = [
    (1, 22),
    (1, 20),
    (1, 18),
    (1, 16),
    (1, 14),
    (1, 12),
    (1, 10),
    (1, 8),
    (1, 6),
    (1, 4),
    (1, 2),
    (23, 42),
    (21, 38),
    (19, 34),
    (17, 30),
    (15, 26),
    (13, 22),
    (11, 18),
    (9, 14),
    (7, 10),
    (5, 6),
];

pub fn nodes() -> RationalNodeSet {
    RationalNodeSet::from_pairs(&NODES).expect("hard-coded nodes are valid")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Example {
    /// Eigenvalues, `n = 20`, order 21.
    #[serde(rename = "example5.1")]
    Eigenvalues,
    /// Singular values, `n = 15`, 21×16. The basis is read as degree 15
    /// since the matrix has 16 columns.
    #[serde(rename = "example5.2")]
    SingularValues,
}

impl Example {
    pub fn degree(self) -> usize {
        match self {
            Example::Eigenvalues => 20,
            Example::SingularValues => 15,
        }
    }

    pub fn kind(self) -> SpectrumKind {
        match self {
            Example::Eigenvalues => SpectrumKind::Eigen,
            Example::SingularValues => SpectrumKind::Singular,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Example::Eigenvalues => "example5.1",
            Example::SingularValues => "example5.2",
        }
    }

    /// Column name of the reference values.
    pub fn value_label(self) -> &'static str {
        match self {
            Example::Eigenvalues => "lambda_ref",
            Example::SingularValues => "sigma_ref",
        }
    }
}

impl fmt::Display for Example {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Example {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "example5.1" => Ok(Example::Eigenvalues),
            "example5.2" => Ok(Example::SingularValues),
            other => Err(format!(
                "unknown example `{other}` (expected example5.1 or example5.2)"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReproRow {
    pub reference: f64,
    pub mm_rel_err: f64,
    pub baseline_rel_err: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReproReport {
    pub example: Example,
    pub rows_of_a: usize,
    pub cols_of_a: usize,
    pub rows: Vec<ReproRow>,
    /// `σ_max / σ_min` of the reference singular values of the same matrix.
    pub kappa2: f64,
    pub achieved_bits: u32,
    pub reference_bits: u32,
}

impl ReproReport {
    pub fn max_mm_rel_err(&self) -> f64 {
        self.rows.iter().fold(0.0, |m, r| m.max(r.mm_rel_err))
    }

    /// Baseline error on the smallest value (the last row).
    pub fn baseline_rel_err_at_min(&self) -> f64 {
        self.rows.last().map_or(0.0, |r| r.baseline_rel_err)
    }
}

pub fn run(example: Example, policy: &PrecisionPolicy) -> Result<ReproReport> {
    let exact = nodes();
    let bd = compute_bd_rounded(exact.as_slice(), example.degree())?;
    run_on(example, &exact, &bd, policy)
}

/// As [`run`], with the nodes rounded to doubles before computing `BD(A)`.
/// The reference still uses the exact nodes.
pub fn run_with_double_nodes(example: Example, policy: &PrecisionPolicy) -> Result<ReproReport> {
    let exact = nodes();
    let x = exact.to_f64()?;
    let bd = compute_bd(&x, BasisDegree::new(example.degree(), &x)?)?;
    run_on(example, &exact, &bd, policy)
}

fn run_on(
    example: Example,
    exact: &RationalNodeSet,
    bd: &BdMatrix<f64>,
    policy: &PrecisionPolicy,
) -> Result<ReproReport> {
    let n = example.degree();
    let dense = expand(bd);

    let (computed, baseline): (Spectrum, Spectrum) = match example {
        Example::Eigenvalues => (
            spectral::eigenvalues(bd, policy)?,
            spectral::baseline_eigenvalues(&dense)?,
        ),
        Example::SingularValues => (
            spectral::singular_values(bd, policy)?,
            spectral::baseline_singular_values(&dense)?,
        ),
    };

    let reference = reference_spectrum(exact, n, example.kind(), REFERENCE_DIGITS)?;
    let mm = relative_errors(&reference.values, &computed)?;
    let base = relative_errors(&reference.values, &baseline)?;
    let kappa2 = match example {
        Example::SingularValues => reference.extreme_ratio(),
        Example::Eigenvalues => {
            reference_spectrum(exact, n, SpectrumKind::Singular, REFERENCE_DIGITS)?.extreme_ratio()
        }
    };

    let rows = mm
        .rows
        .iter()
        .zip(&base.rows)
        .map(|(a, b)| ReproRow {
            reference: a.reference,
            mm_rel_err: a.relative_error,
            baseline_rel_err: b.relative_error,
        })
        .collect();
    Ok(ReproReport {
        example,
        rows_of_a: bd.rows(),
        cols_of_a: bd.cols(),
        rows,
        kappa2,
        achieved_bits: computed.achieved_bits,
        reference_bits: reference.bits,
    })
}

//! Accurate linear algebra with totally positive Bernstein–Vandermonde matrices.
//!
//! The central object is [`BdMatrix`], the bidiagonal decomposition of
//! `A = (C(n,j) x_i^j (1-x_i)^(n-j))`, computed directly from the nodes by
//! [`compute_bd`] without forming `A`. Everything else consumes it:
//!
//! * [`algebra`]: expansion, products, determinant and the `O(n²)` solver,
//! * [`spectral`]: eigenvalues, singular values, QR and least squares,
//! * [`oracle`]: exact rational and high-precision references,
//! * [`repro`]: the two reference experiments (orders 21 and 21×16).
//!
//! ```
//! use bvtn::{compute_bd, validate_nodes, BasisDegree};
//!
//! let nodes = validate_nodes(&[0.25, 0.5]).unwrap();
//! let bd = compute_bd(&nodes, BasisDegree::new(1, &nodes).unwrap()).unwrap();
//! let x = bvtn::algebra::solve_system(&bd, &[1.0, 0.0]).unwrap();
//! assert_eq!(x, vec![2.0, -2.0]);
//! ```

pub mod algebra;
pub mod bd;
pub mod cli;
pub mod error;
pub mod kernels;
pub mod matrix;
pub mod nodes;
pub mod oracle;
pub mod repro;
pub mod scalar;
pub mod spectral;

pub use bd::{compute_bd, compute_bd_exact, compute_bd_rounded, BdMatrix};
pub use error::{Error, Result};
pub use matrix::{DenseMatrix, Matrix};
pub use nodes::{validate_nodes, BasisDegree, NodeSet};
pub use oracle::RationalNodeSet;
pub use spectral::{LsqSolution, PrecisionPolicy, QrResult, Spectrum};

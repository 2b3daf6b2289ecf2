//! Dense backward-stable kernels, generic over the working precision.

pub mod eigen;
pub mod qr;
pub mod svd;

pub use eigen::{eigenvalues, hessenberg};
pub use qr::householder_qr;
pub use svd::singular_values;

//! Certified dense complex linear algebra.
//!
//! Every SVD used anywhere in the pipeline goes through
//! [`svd::svd_verified`], which recomputes the reconstruction and unitarity
//! residuals of the returned factors and refuses to hand back a
//! decomposition that misses the accuracy contract. Band classification of
//! singular values ([`svd::classify_gap`]) then turns verified decompositions
//! into certified rank statements.

pub mod irrep;
pub mod quadric;
pub mod svd;

pub use irrep::IrrepBasis;
pub use quadric::{monomial_vector, Quadric15, MONO_PAIRS};
pub use svd::{classify_gap, svd_verified, Bands, CertifiedSvd, GapCounts, SvdError};

use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = nalgebra::DMatrix<C64>;
pub type CVec = nalgebra::DVector<C64>;

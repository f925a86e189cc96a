//! Certified computation of the Steiner-class structure and the quadric ideal
//! of the Wiman curve W160.
//!
//! The library is organized around one pipeline:
//!
//! 1. [`wiman`] builds the exact model: 40 special points, 160 odd theta
//!    characteristics, the order-80 symmetry group, and the diagonal quadrics.
//! 2. [`partition`] sweeps all 4-subsets of the 160 thetas (up to symmetry),
//!    applies the three-stage gap-certified tangency test from [`tangency`],
//!    and assembles the 510-class pair partition.
//! 3. [`f2`] predicts the same combinatorics from a 10-dimensional symplectic
//!    model over GF(2) and cross-validates the numerical result.
//! 4. [`ic2`] reconstructs the quadric ideal from theta-hyperplane products
//!    and certifies that the intersection of Steiner spans is 3-dimensional.
//! 5. [`witness`] reduces class membership to exact rank computations over
//!    the number field Q(i, a) in [`field`], with no floating point at all.
//!
//! All floating-point linear algebra goes through [`linalg::svd`], which
//! verifies reconstruction and unitarity residuals on every decomposition it
//! returns.

pub mod field;
pub mod ic2;
pub mod linalg;
pub mod par;
pub mod partition;
pub mod tangency;
pub mod f2;
pub mod wiman;
pub mod witness;

pub use field::{ExactMatrix, FieldElem, Rat};

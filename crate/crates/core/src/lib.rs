//! Quadratic residues of odd-characteristic finite fields and their
//! additive decompositions.
//!
//! The crate is organised bottom-up:
//!
//! - [`field`]: construction of `F_q` for odd prime powers `q = p^n`, element
//!   arithmetic over canonical indices, and the quadratic character table.
//! - [`set`]: subsets of `F_q` as fixed-width bit vectors, sumsets and the
//!   maximal compatible partner `B*(A)`.
//! - [`charsum`]: double character sums, the Karatsuba-type bound and the
//!   filter sets `U(V)`, with seeded sampling reports.
//! - [`search`]: exhaustive decision, enumeration and counting of
//!   decompositions `Q = A + B`, the `A = B` special case and a brute-force
//!   oracle.
//! - [`bounds`]: size windows and binomial counting bounds.
//! - [`certificate`]: the JSON certificate format and its independent
//!   verifier.

pub mod bounds;
pub mod certificate;
pub mod charsum;
mod error;
pub mod field;
pub mod poly;
pub mod sample;
pub mod search;
pub mod set;

pub use error::{Error, Result};
pub use field::{build_field, Element, Field};
pub use set::ElementSet;

/// Version string recorded in every emitted document.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

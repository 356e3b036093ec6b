//! Mixed Bohr radii `K(B_{ℓ_p^n}, B_{ℓ_q^n})` and mixed unconditionality
//! constants of the monomial basis for homogeneous polynomials.
//!
//! The crate is organised bottom-up:
//!
//! - [`multiindex`]: the index sets `Λ(m,n)`, `𝒥(m,n)` and their counts.
//! - [`polynomial`]: sparse homogeneous polynomials and truncated series.
//! - [`optimize`]: multi-start ascent for sup-norms and majorant sums.
//! - [`bounds`]: closed-form sums, envelopes and the region map.
//! - [`witness`]: sign searches and brackets for `χ_M`.
//! - [`bohr`]: Bohr-radius brackets and Wiener checks.
//!
//! Norm values coming out of the optimizer are always attained at an explicit
//! witness, so they are lower bounds on the true supremum.

pub mod error;
pub mod bohr;
pub mod bounds;
pub mod exponent;
pub mod multiindex;
pub mod optimize;
pub mod polynomial;
pub mod witness;

pub use error::{Error, Result};
pub use exponent::{Exponent, ExponentPair, Rational};

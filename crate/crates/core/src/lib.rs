//! Exact arithmetic for indefinite unimodular lattices.
//!
//! Sign reversal of index-one forms, orthogonal complements inside
//! `I_{p,q}`, certified successive minima, isometry testing, and the Lorentz
//! deformation that trades the second minimum of a sign-reversed form for
//! its first.

pub mod catalog;
pub mod error;
pub mod forms;
pub mod isometry;
pub mod lattice;
pub mod linalg;
pub mod lorentz;
pub mod reduction;
pub mod scalars;

pub use error::{Error, Result};
pub use forms::{QForm, Signature};
pub use scalars::{QuadExt, Rational, Scalar};

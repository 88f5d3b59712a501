//! Subdiagonal Padé approximation of `C_0`-semigroups.
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod approximator;
pub mod bounds;
pub mod cli;
pub mod error;
pub mod instances;
pub mod laplace;
pub mod operators;
pub mod pade;
pub mod partial_fractions;
pub mod precision;
pub mod quadrature;
pub mod roots;
pub mod verify;

pub use error::{Error, Result};
pub use precision::{Precision, C64};

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod beam;
pub mod contact;
pub mod error;
pub mod interaction;
pub mod linalg;
pub mod model;
pub mod quadrature;
pub mod scenario;
pub mod solver;

pub use error::{Error, Result};

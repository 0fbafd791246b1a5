#![allow(
    clippy::excessive_precision,
    clippy::neg_cmp_op_on_partial_ord,
    clippy::too_many_arguments
)]

pub mod bounds;
pub mod error;
pub mod polynomials;
pub mod quadrature;
pub mod special;
pub mod sublevel;

pub use error::{Error, Result};

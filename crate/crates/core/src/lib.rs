#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod groups;
pub mod lorentz_geom;
pub mod specfun;
pub mod spherical;
pub mod tree_radial;

pub use error::{Error, Result};
pub use num_complex::Complex64;

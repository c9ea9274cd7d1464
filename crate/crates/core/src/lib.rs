// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod closed_forms;
pub mod error;
pub mod expr;
pub mod function;
pub mod mellin;
pub mod numerics;
pub mod operators;
pub mod series;
pub mod specfun;
pub mod theorems;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use function::{FunctionHandle, Interval, Regularity};
pub use numerics::{EvalReport, QuadratureSpec};
pub use specfun::SeriesSpec;

//! Exact construction and p-adic certification of linear forms in 1 and
//! p-adic zeta values.

pub mod bernoulli;
pub mod certificates;
pub mod cli;
pub mod constants;
pub mod error;
pub mod exact;
pub mod forms;
pub mod kernel;
pub mod padic;
pub mod poly;
pub mod zeta;

pub use error::{Error, Result};

pub mod arith;
pub mod dm_strata;
pub mod error;
pub mod gluing_engine;
pub mod linear_strata;
pub mod plumbing;
pub mod stable_graphs;

pub use error::{Error, Result};

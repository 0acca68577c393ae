pub mod asymptotics;
pub mod bessel;
pub mod cache;
pub mod cli;
pub mod error;
pub mod spectrum;
pub mod thermo;
pub mod weyl;

pub use error::{Error, Result};

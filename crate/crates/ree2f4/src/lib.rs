pub mod algebra;
pub mod bounds;
pub mod catalog;
pub mod cli;
pub mod decomp;
pub mod degrees;
pub mod error;
pub mod hecke;
pub mod paper_data;

pub use error::{Error, Result};

pub mod cli;
pub mod drinfeld;
pub mod error;
pub mod json;
pub mod linalg;
pub mod poly;
pub mod report;
pub mod scalar;
pub mod td;
pub mod uq;

pub use error::{Error, Result};

pub mod chain;
pub mod circle;
pub mod error;
pub mod rewriting;
pub mod shell_lab;
pub mod simplex;

pub use error::{Error, Result};

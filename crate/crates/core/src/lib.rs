pub mod error;
pub mod gf;
pub mod poly;
pub mod algebra;
pub mod circuit;
pub mod solve;
pub mod translate;
pub mod verify;

pub use error::{Error, ErrorKind, Limits, Result};

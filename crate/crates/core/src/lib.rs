pub mod attacks;
pub mod braid;
pub mod error;
pub mod ld;
pub mod protocol;
pub mod seed;
pub mod treeword;

pub use error::{Error, Result};

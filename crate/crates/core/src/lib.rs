pub mod error;
pub mod linalg;
pub mod measures;
pub mod projectors;
pub mod protocol;
pub mod random;
pub mod scenario;
pub mod states;

pub use error::{Error, Result};

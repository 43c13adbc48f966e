pub mod analysis;
pub mod complex;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod module;
pub mod ring;
pub mod serde_int;

pub use error::{Error, Result};

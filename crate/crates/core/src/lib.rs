pub mod arena;
pub mod error;
pub mod mechanisms;
pub mod risk;
pub mod rng;
pub mod suite;
pub mod universe;
pub mod vcdim;

pub use error::{Error, Result};

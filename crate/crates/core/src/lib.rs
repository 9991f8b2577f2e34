//! Key encapsulation over Latin-square low-density lattice codes, with the
//! matching decoders, attacks and benchmarks.

pub mod attacks;
pub mod bench;
pub mod decoder;
pub mod error;
pub mod kem;
pub mod ldlc;
pub mod params;
pub mod rng;

pub use error::{KemError, Result};
pub use params::CodeParams;

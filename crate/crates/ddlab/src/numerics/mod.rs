//! Deterministic complex linear algebra, transforms, counter-based random
//! streams, and constellations that every other module builds on.

pub mod constellation;
pub mod matrix;
pub mod rng;
pub mod transform;

pub use constellation::Constellation;
pub use matrix::ComplexMatrix;
pub use rng::{awgn, RngStream};
pub use transform::{dft, idft};

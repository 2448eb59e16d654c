//! Exact computations for zig-zag interval maps: postcritical orbits, digit
//! polynomials, Markov partitions, the permutation classification, Galois
//! lifts with their limit sets, the Salem family and SVG figures.

pub mod error;
pub mod exact;

pub use error::{Error, Result};
pub mod markov;
pub mod perm;
pub mod zigzag;
pub mod classify;
pub mod galois;
pub mod salem;
pub mod render;

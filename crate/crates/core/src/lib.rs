//! Exact lattice analysis of fractal imaginary cubes.
//!
//! A fractal imaginary cube of degree `k` is the attractor of
//! `x ↦ (x + d)/k` over `k²` digits `d`, chosen so the attractor projects to
//! a square along each coordinate axis. This crate builds those digit sets,
//! decides whether a projection along a given direction has positive area,
//! checks the expansion-set identities behind that decision, counts the
//! cubes of each degree up to congruence, and rasterizes projected images.

pub mod classify;
pub mod cli;
pub mod digits;
pub mod enumerate;
pub mod error;
pub mod expansion;
pub mod json;
pub mod lattice;
pub mod render;

pub use error::{Error, Result};

//! Geometry monoids of algebraic laws.

pub mod error;
pub mod term;
pub mod unify;
pub mod laws;
pub mod operator;
pub mod words;
pub mod confluence;
pub mod group;
pub mod blueprint;
pub mod suite;

pub use error::{Error, Result};

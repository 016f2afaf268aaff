//! Symbolic-numeric engine for second-fundamental-form Laplace operators on
//! tubes, anchor rings, and spheres.

pub mod cli;
pub mod error;
pub mod finitetype;
pub mod frames;
pub mod geometry;
pub mod numeric;
pub mod operator;
pub mod report;
pub mod symexpr;

pub use error::{EngineError, Result};

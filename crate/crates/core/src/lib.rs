//! Windowed asymptotic-dimension machinery for finitely generated groups.

pub mod certificate;
pub mod cover;
pub mod engine;
pub mod error;
pub mod group;
pub mod metric;
pub mod tree;

pub use error::{Error, Result};
pub use group::{Element, Group, GroupSpec};

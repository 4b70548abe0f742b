//! Global residues of polynomial and Laurent-polynomial systems.

pub mod cli;
pub mod conditions;
pub mod division;
pub mod error;
pub mod newton;
pub mod poly;
pub mod residues;
pub mod vanishing;
pub mod zeros;

pub use error::{Error, Result};

//! Technical-debt analysis for source trees: identification, representation,
//! estimation, pricing and monitoring.

pub mod analysis;
pub mod cli;
pub mod clones;
pub mod config;
pub mod coverage;
pub mod debt;
pub mod error;
pub mod ingest;
pub mod lexer;
pub mod metrics;
pub mod monitor;
pub mod report;
pub mod rules;

pub use error::{Error, Result};

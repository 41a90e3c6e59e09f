//! Shared test helpers: independent oracles and corpus generators.
#![allow(dead_code)]

pub mod clone_oracle;
pub mod corpus;
pub mod cost_oracle;
pub mod project;
pub mod rule_fixtures;
pub mod snapshots;

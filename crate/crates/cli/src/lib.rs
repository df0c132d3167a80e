//! Shared plumbing for the command-line front end: pinned reference data,
//! the on-disk series cache, and the standard pipelines wiring the exact
//! and numerical components together.

pub mod cache;
pub mod golden;
pub mod pipeline;

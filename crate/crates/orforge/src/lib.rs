//! IO, generation client, dataset build orchestration, and CLI for the
//! solver-validated dialogue synthesis pipeline in `orforge-core`.

pub mod batch;
pub mod cli;
pub mod client;
pub mod config;
pub mod dataset;
pub mod files;

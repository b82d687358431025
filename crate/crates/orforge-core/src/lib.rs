//! Building blocks for synthesizing solver-validated operations-research
//! dialogues: exact solvers for seven problem families, deterministic
//! instance sampling, prompt rendering, a tool-call grammar with a
//! dispatcher, and dataset filtering plus execution-accuracy scoring.
//!
//! The crate is `no_std`-compatible (alloc required); IO, HTTP, and the CLI
//! live in the companion `orforge` crate.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod dialogue;
pub mod eval;
pub mod gen;
pub mod instance;
pub mod render;
pub mod rng;
pub mod sampler;
pub mod schema;
pub mod solver;
pub mod toolcall;

mod num;

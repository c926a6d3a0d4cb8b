//! Exact branch-and-cut solver for the multiple probabilistic covering
//! location problem: open K facilities (co-location allowed) over candidate
//! locations to maximize demand-weighted joint coverage probability.

// Dense linear-algebra kernels read better as index loops.
#![allow(clippy::needless_range_loop)]

pub mod bnc;
pub mod cli;
pub mod cuts;
pub mod error;
pub mod instance;
pub mod lp;
pub mod objective;
pub mod oracle;
pub mod report;
pub mod verify;

pub use error::{Error, Result};

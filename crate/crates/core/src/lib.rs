#![allow(clippy::needless_range_loop)]

pub mod bicat;
pub mod bridge;
pub mod cli;
pub mod enrichment;
pub mod fincat;
pub mod localize;
pub mod pathcat;
pub mod simplex;

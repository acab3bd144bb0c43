//! File formats, Monte Carlo experiments and the command line on top of
//! `maximin-core`.

pub mod cli;
pub mod experiments;
pub mod io;
pub mod solve;

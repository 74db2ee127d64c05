//! Wire formats and the command line front end for `endkit_core`.

pub mod cli;
pub mod dot;
pub mod wire;

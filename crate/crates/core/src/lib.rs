//! Finitely presented non-compact orientable surfaces.
//!
//! A surface is given as a regular rule system over three building blocks
//! glued onto an implicit disk. From that presentation the crate computes
//! genus, the space of ends with its non-planar part, pants decompositions,
//! spines, a degree ledger for proper maps and a rewriting model of curve
//! configurations.
#![no_std]

extern crate alloc;

pub mod classify;
pub mod decompose;
pub mod degree;
pub mod ends;
mod graph;
pub mod num;
pub mod rewrite;
pub mod surface;

#[cfg(any(test, feature = "testkit"))]
pub mod testkit;

pub use num::Extended;
pub use surface::{BlockKind, Genus, SurfacePresentation};

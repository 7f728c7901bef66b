//! Constrained multilinear detection over the group algebra GF(2^b)[Z2^k],
//! and its application to functional motif discovery in vertex-colored graphs.

pub mod assignment;
pub mod cli;
pub mod circuit;
pub mod engine;
pub mod error;
pub mod gf2m;
pub mod graph;
pub mod group_algebra;
pub mod motif;
pub mod oracle;
pub mod selftest;

pub use error::{Error, Result};

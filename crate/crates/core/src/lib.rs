// Index loops mirror the matrix and hom-object notation; the reports carry wide tuples.
#![allow(
    clippy::needless_range_loop,
    clippy::too_many_arguments,
    clippy::type_complexity,
    clippy::large_enum_variant
)]

pub mod acceptance;
pub mod base;
pub mod basechange;
pub mod colimits;
pub mod commands;
pub mod dk;
pub mod error;
pub mod fp;
pub mod gen;
pub mod graph;
pub mod io;
pub mod report;
pub mod suites;
pub mod vcat;

pub use error::{Error, Result};

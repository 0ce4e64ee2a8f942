//! Instance files, seeded generators, benchmarks and the differential
//! self-test around [`tardy_core`].

pub mod bench;
pub mod cli;
pub mod config;
pub mod format;
pub mod gen;
pub mod run;
pub mod selftest;

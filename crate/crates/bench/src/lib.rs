//! Library surface of the benchmark harness: declarative configs, the
//! problem/method registries, bound checks, CSV/SVG emission and the
//! verification suite. The `fobench` binary is a thin shell over this.

pub mod acceptance;
pub mod checks;
pub mod config;
pub mod csv;
pub mod registry;
pub mod svg;

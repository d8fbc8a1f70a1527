//! Command-line driver: enumeration, evaluation, verification suites and
//! formula export on top of `coble-core`.

pub mod commands;
pub mod report;
pub mod suites;

pub use report::{CheckRecord, Measure, Report};
pub use suites::{run_suite, Suite};

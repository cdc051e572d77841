//! Std companion to `spark-forge-core`: the multi-threaded subset search,
//! CSV/JSON formats, JSON run reports, SVG rendering and the `spark-forge`
//! command line.

pub mod cli;
pub mod formats;
pub mod parallel;
pub mod render;
pub mod report;

pub use parallel::spark_bruteforce;

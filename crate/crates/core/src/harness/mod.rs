//! Task files, randomized batteries, family sweeps and reports.
pub mod random;
pub mod report;
pub mod run;
pub mod suites;
pub mod task;

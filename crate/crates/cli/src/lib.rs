//! Scenario loading, execution and reporting for the `fgverify` command.

pub mod battery;
pub mod report;
pub mod runner;
pub mod scenario;

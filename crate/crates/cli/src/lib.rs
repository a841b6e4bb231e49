//! File formats, threaded drivers and the reproduction report behind the
//! `entassist` binary.

pub mod commands;
pub mod files;
pub mod parallel;
pub mod report;

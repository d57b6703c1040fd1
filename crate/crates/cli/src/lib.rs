//! IO and orchestration companion to `firmplan-core`: scenario
//! configuration, file formats, report structures and the pipeline the
//! `firmplan` binary drives.

pub mod config;
pub mod error;
pub mod formats;
pub mod report;
pub mod scenario;

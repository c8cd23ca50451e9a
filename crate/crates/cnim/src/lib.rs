//! Std companion to `cnim-core`: table files and caching, a parallel shell
//! runner, exhaustive verification, the command line and the HTTP service.

pub mod cache;
pub mod cli;
pub mod explore;
pub mod parallel;
pub mod service;
pub mod table_file;
pub mod verify;

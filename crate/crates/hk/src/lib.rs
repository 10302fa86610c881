//! Standard-library companion to `hk-core`: JSON formats, catalog files,
//! thread-parallel drivers and the `hk` command line.

pub mod catalog;
pub mod cli;
pub mod io;
pub mod par;

//! Command-line front end: file I/O, one function per verb, and the
//! seeded consistency sweep.

pub mod commands;
pub mod gen;
pub mod sweep;

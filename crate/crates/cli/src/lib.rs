//! Report types and command implementations behind the `normsym` binary.

pub mod args;
pub mod commands;

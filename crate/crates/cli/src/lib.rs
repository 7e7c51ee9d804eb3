//! Case-file language, report records and command dispatch for the
//! `expoly` binary.

pub mod casefile;
pub mod commands;
pub mod lower;
pub mod report;
pub mod syntax;

pub use casefile::{CaseFile, Expect};
pub use commands::run;
pub use syntax::{ParseError, Pos};

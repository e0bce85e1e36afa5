//! Session parsing, reporting and command implementations behind the
//! `starlift` binary; exposed as a library for integration tests.

pub mod commands;
pub mod lexer;
pub mod parser;
pub mod report;
pub mod session;

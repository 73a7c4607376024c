//! Command-line front end for `su2n-core`.
//!
//! Exit codes: 0 when everything passes, 1 on a failed check, 2 on bad
//! arguments.

pub mod args;
mod commands;
mod output;

pub use args::{Cli, Command, Format};
pub use commands::run;
pub use output::fmt_f64;

/// Text to emit and whether every gate passed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub text: String,
    pub passed: bool,
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Runtime(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Runtime(_) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<su2n_core::Error> for Failure {
    fn from(e: su2n_core::Error) -> Self {
        use su2n_core::Error as E;
        match e {
            E::Parse(_) | E::InvalidArgument(_) | E::Domain { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

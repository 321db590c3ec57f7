use std::fmt;

use serde_json::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Config,
    Numerical,
    Io,
}

impl Kind {
    pub fn exit_code(self) -> u8 {
        match self {
            Kind::Config => 2,
            Kind::Numerical => 3,
            Kind::Io => 4,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Kind::Config => "config",
            Kind::Numerical => "numerical",
            Kind::Io => "io",
        }
    }
}

/// A failed command, reported on stderr as JSON.
#[derive(Debug, Clone)]
pub struct Failure {
    pub kind: Kind,
    pub message: String,
}

impl Failure {
    pub fn config(message: impl Into<String>) -> Self {
        Failure { kind: Kind::Config, message: message.into() }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Failure { kind: Kind::Numerical, message: message.into() }
    }

    pub fn io(context: impl fmt::Display, err: impl fmt::Display) -> Self {
        Failure { kind: Kind::Io, message: format!("{context}: {err}") }
    }

    pub fn to_json(&self) -> String {
        json!({
            "error": {
                "kind": self.kind.name(),
                "message": self.message,
                "exit_code": self.kind.exit_code(),
            }
        })
        .to_string()
    }
}

impl From<lescat::Error> for Failure {
    fn from(e: lescat::Error) -> Self {
        let kind = if e.is_numerical() { Kind::Numerical } else { Kind::Config };
        Failure { kind, message: e.to_string() }
    }
}

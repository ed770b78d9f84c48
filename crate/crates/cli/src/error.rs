use std::fmt;

use serde::Serialize;

/// Failure classes, each with its own exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorKind {
    Usage,
    Syntax,
    Schema,
    Input,
    Io,
    Budget,
    Property,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Usage => 2,
            ErrorKind::Syntax | ErrorKind::Schema | ErrorKind::Input | ErrorKind::Io => 3,
            ErrorKind::Budget => 4,
            ErrorKind::Property => 5,
        }
    }
}

/// A diagnostic, printed as one JSON object on stderr.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CliError {
    #[serde(rename = "error")]
    pub kind: ErrorKind,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
}

impl CliError {
    pub fn new(kind: ErrorKind, message: impl Into<String>) -> Self {
        CliError {
            kind,
            message: message.into(),
            path: None,
            line: None,
            column: None,
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::Usage, message)
    }

    pub fn input(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::Input, message)
    }

    pub fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        CliError {
            path: Some(path.into()),
            ..Self::new(ErrorKind::Schema, message)
        }
    }

    pub fn io(what: &std::path::Path, err: std::io::Error) -> Self {
        Self::new(ErrorKind::Io, format!("{}: {err}", what.display()))
    }

    pub fn exit_code(&self) -> i32 {
        self.kind.exit_code()
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("diagnostic serializes")
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.kind, self.message)?;
        if let Some(p) = &self.path {
            write!(f, " at {p}")?;
        }
        if let (Some(l), Some(c)) = (self.line, self.column) {
            write!(f, " (line {l}, column {c})")?;
        }
        Ok(())
    }
}

impl std::error::Error for CliError {}

impl From<besicovitch_core::Error> for CliError {
    fn from(e: besicovitch_core::Error) -> Self {
        use besicovitch_core::Error as E;
        let kind = match e {
            E::BudgetExceeded { .. } | E::LevelTooDeep { .. } => ErrorKind::Budget,
            _ => ErrorKind::Input,
        };
        CliError::new(kind, e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_statuses() {
        assert_eq!(CliError::usage("x").exit_code(), 2);
        assert_eq!(CliError::schema(".", "x").exit_code(), 3);
        assert_eq!(CliError::new(ErrorKind::Budget, "x").exit_code(), 4);
        assert_eq!(CliError::new(ErrorKind::Property, "x").exit_code(), 5);
    }

    #[test]
    fn diagnostic_is_one_json_line() {
        let e = CliError::schema("children[0]", "bad \"node\"");
        let line = e.to_json_line();
        assert!(!line.contains('\n'));
        assert_eq!(
            line,
            r#"{"error":"schema","message":"bad \"node\"","path":"children[0]"}"#
        );
    }
}

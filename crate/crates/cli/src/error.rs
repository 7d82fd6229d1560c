use std::fmt;

use serde_json::json;

/// Failure of a batch run.
#[derive(Debug)]
pub enum CliError {
    /// The configuration is malformed or out of range.
    Config {
        key: Option<String>,
        message: String,
    },
    /// A solver failed on a valid configuration.
    Run(manybody::Error),
    Io {
        path: String,
        message: String,
    },
}

impl CliError {
    pub fn config(key: Option<&str>, message: impl Into<String>) -> Self {
        CliError::Config {
            key: key.map(str::to_owned),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Run(_) | CliError::Io { .. } => 1,
        }
    }

    /// Machine-readable form written to the error stream.
    pub fn to_json(&self) -> serde_json::Value {
        let (kind, key, message) = match self {
            CliError::Config { key, message } => ("config", key.clone(), message.clone()),
            CliError::Run(e) => ("run", None, e.to_string()),
            CliError::Io { path, message } => ("io", Some(path.clone()), message.clone()),
        };
        json!({ "error": { "kind": kind, "key": key, "message": message } })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config {
                key: Some(k),
                message,
            } => write!(f, "config error at `{k}`: {message}"),
            CliError::Config { key: None, message } => write!(f, "config error: {message}"),
            CliError::Run(e) => write!(f, "{e}"),
            CliError::Io { path, message } => write!(f, "{path}: {message}"),
        }
    }
}

impl std::error::Error for CliError {}

/// First backtick-quoted name in a serde message, e.g. "unknown field `foo`".
fn quoted_key(message: &str) -> Option<String> {
    let start = message.find('`')? + 1;
    let len = message[start..].find('`')?;
    Some(message[start..start + len].to_owned())
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        let message = e.to_string();
        CliError::Config {
            key: quoted_key(&message),
            message,
        }
    }
}

impl From<manybody::Error> for CliError {
    fn from(e: manybody::Error) -> Self {
        use manybody::Error as E;
        match &e {
            E::InvalidParameter { name, .. } => CliError::config(Some(name), e.to_string()),
            E::SizeGuard { what, .. } => CliError::config(Some(what), e.to_string()),
            E::Parse { .. } => CliError::config(Some("circuit"), e.to_string()),
            E::DimensionMismatch { .. }
            | E::QubitOutOfRange { .. }
            | E::RepeatedQubit(_)
            | E::InvalidBipartition(_)
            | E::Unexponentiable(_) => CliError::config(None, e.to_string()),
            _ => CliError::Run(e),
        }
    }
}

use std::path::Path;

/// Failures routed to exit codes: usage problems exit 2, anything wrong
/// with the data (unreadable file, bad format, invalid knob) exits 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(Box<dyn std::error::Error + Send + Sync>),
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError::Usage(message.into())
    }

    pub fn data(message: impl Into<String>) -> Self {
        CliError::Data(message.into().into())
    }
}

impl From<codemix::Error> for CliError {
    fn from(e: codemix::Error) -> Self {
        CliError::Data(Box::new(e))
    }
}

pub fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::data(format!("i/o error on {}: {e}", path.display()))
}

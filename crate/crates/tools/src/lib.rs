//! File formats and the `chm6` command line for `chm6-core`.

pub mod cli;
pub mod format;

use std::fmt;

use chm6_core::search::SearchError;
use chm6_core::Error;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Search(SearchError),
    Io(std::io::Error),
    Json(serde_json::Error),
    Csv(csv::Error),
    /// Well-formed JSON that does not describe a valid object.
    Format(String),
    /// A reserved family tag with no constructor.
    UnsupportedFamily(String),
}

impl CliError {
    /// Variant name reported on stderr.
    pub fn name(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.name(),
            CliError::Search(e) => e.name(),
            CliError::Io(_) => "Io",
            CliError::Json(_) => "Json",
            CliError::Csv(_) => "Csv",
            CliError::Format(_) => "Malformed",
            CliError::UnsupportedFamily(_) => "UnsupportedFamily",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Search(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Json(e) => write!(f, "{e}"),
            CliError::Csv(e) => write!(f, "{e}"),
            CliError::Format(msg) => f.write_str(msg),
            CliError::UnsupportedFamily(tag) => write!(f, "family \"{tag}\" is reserved but not constructible"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        CliError::Search(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Json(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Csv(e)
    }
}

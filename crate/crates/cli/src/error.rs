use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{file}{}: {message}", location(*line, *column))]
    Input {
        file: String,
        line: Option<usize>,
        column: Option<usize>,
        message: String,
    },
    #[error(transparent)]
    Library(#[from] l2link::Error),
}

fn location(line: Option<usize>, column: Option<usize>) -> String {
    match (line, column) {
        (Some(l), Some(c)) => format!(":{}:{}", l, c),
        (Some(l), None) => format!(":{}", l),
        _ => String::new(),
    }
}

impl CliError {
    pub fn line(&self) -> Option<usize> {
        match self {
            CliError::Input { line, .. } => *line,
            _ => None,
        }
    }
}

use std::fmt;

use singlet_core::Error as CoreError;

/// Machine-readable failure class, printed as `ERROR <code> <detail>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorCode {
    Parse,
    UnknownKey,
    Range,
    Usage,
    Io,
    Degenerate,
    NotConverged,
    Stiff,
    Solver,
}

impl ErrorCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::Parse => "E_PARSE",
            ErrorCode::UnknownKey => "E_UNKNOWN_KEY",
            ErrorCode::Range => "E_RANGE",
            ErrorCode::Usage => "E_USAGE",
            ErrorCode::Io => "E_IO",
            ErrorCode::Degenerate => "E_DEGENERATE",
            ErrorCode::NotConverged => "E_NOT_CONVERGED",
            ErrorCode::Stiff => "E_STIFF",
            ErrorCode::Solver => "E_SOLVER",
        }
    }

    /// 1 for configuration and environment problems, 2 for solver failures.
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorCode::Parse | ErrorCode::UnknownKey | ErrorCode::Range | ErrorCode::Usage | ErrorCode::Io => 1,
            ErrorCode::Degenerate | ErrorCode::NotConverged | ErrorCode::Stiff | ErrorCode::Solver => 2,
        }
    }
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("{code} {detail}")]
pub struct CliError {
    pub code: ErrorCode,
    pub detail: String,
}

impl CliError {
    pub fn new(code: ErrorCode, detail: impl Into<String>) -> Self {
        Self {
            code,
            detail: detail.into(),
        }
    }

    pub fn parse(line: usize, detail: impl fmt::Display) -> Self {
        Self::new(ErrorCode::Parse, format!("line {line}: {detail}"))
    }

    pub fn range(field: &str, detail: impl fmt::Display) -> Self {
        Self::new(ErrorCode::Range, format!("{field} {detail}"))
    }

    pub fn exit_code(&self) -> i32 {
        self.code.exit_code()
    }
}

/// Solver-side failures; parameter errors surfacing here are range errors.
impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let code = match &e {
            CoreError::InvalidParam { name, .. } => return CliError::range(name, e.to_string()),
            CoreError::UnknownName { .. } => ErrorCode::Range,
            CoreError::DegenerateKernel(_) | CoreError::EmptyKernel { .. } => ErrorCode::Degenerate,
            CoreError::NotConverged { .. } => ErrorCode::NotConverged,
            CoreError::StepUnderflow { .. } | CoreError::NormUnderflow { .. } => ErrorCode::Stiff,
            _ => ErrorCode::Solver,
        };
        CliError::new(code, e.to_string())
    }
}

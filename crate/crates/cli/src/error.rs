use firebreak_core::analysis::AnalysisError;
use firebreak_core::groups::GroupError;
use firebreak_core::strategies::SearchError;
use firebreak_core::{GameError, GraphError, PlayError, StrategyError, TraceError};
use thiserror::Error;

/// Process exit status for each class of failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Usage = 1,
    Cap = 2,
    StrategyFault = 3,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{location}: {message}")]
    Config { location: String, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("invalid trace: {0}")]
    InvalidTrace(String),
    #[error("{0}")]
    Cap(String),
    #[error("{0}")]
    StrategyFault(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn config(location: &str, message: impl Into<String>) -> Self {
        CliError::Config {
            location: location.into(),
            message: message.into(),
        }
    }

    pub fn graph(location: &str, e: GraphError) -> Self {
        match e {
            GraphError::CapExceeded { .. } => CliError::Cap(e.to_string()),
            other => CliError::config(location, other.to_string()),
        }
    }

    pub fn status(&self) -> ExitStatus {
        match self {
            CliError::Cap(_) => ExitStatus::Cap,
            CliError::StrategyFault(_) => ExitStatus::StrategyFault,
            _ => ExitStatus::Usage,
        }
    }

    /// Short machine-readable class, used in suite error rows.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Config { .. } => "config",
            CliError::Io { .. } => "io",
            CliError::InvalidTrace(_) => "invalid-trace",
            CliError::Cap(_) => "cap-exceeded",
            CliError::StrategyFault(_) => "strategy-fault",
            CliError::Verification(_) => "verification",
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::Graph(g) => CliError::graph("graph", g),
            other => CliError::config("graph", other.to_string()),
        }
    }
}

impl From<GameError> for CliError {
    fn from(e: GameError) -> Self {
        match e {
            GameError::Graph(g) => CliError::graph("fire", g),
            other => CliError::config("fire", other.to_string()),
        }
    }
}

impl From<StrategyError> for CliError {
    fn from(e: StrategyError) -> Self {
        match e {
            StrategyError::Graph(g @ GraphError::CapExceeded { .. }) => {
                CliError::Cap(g.to_string())
            }
            other => CliError::StrategyFault(other.to_string()),
        }
    }
}

impl From<PlayError> for CliError {
    fn from(e: PlayError) -> Self {
        match e {
            PlayError::Setup(g) => g.into(),
            PlayError::ZeroHorizon => CliError::config("horizon", e.to_string()),
            PlayError::Strategy(s) => s.into(),
            PlayError::Graph { turn, error } => match error {
                GraphError::CapExceeded { .. } => CliError::Cap(format!("turn {turn}: {error}")),
                other => CliError::config("graph", format!("turn {turn}: {other}")),
            },
            fault @ PlayError::StrategyFault { .. } => CliError::StrategyFault(fault.to_string()),
        }
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::CapExceeded { .. } | SearchError::NodeLimit { .. } => {
                CliError::Cap(e.to_string())
            }
            SearchError::InvalidParameter(m) => CliError::config("certify", m),
            SearchError::Graph(g) => CliError::graph("certify", g),
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::TooLarge { .. } => CliError::Cap(e.to_string()),
            AnalysisError::InvalidParameter(m) => CliError::config("growth", m),
            AnalysisError::Graph(g) => CliError::graph("growth", g),
            AnalysisError::Play(p) => p.into(),
            AnalysisError::Strategy(s) => s.into(),
        }
    }
}

impl From<TraceError> for CliError {
    fn from(e: TraceError) -> Self {
        CliError::InvalidTrace(e.to_string())
    }
}

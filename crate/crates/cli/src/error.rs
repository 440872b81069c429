use serde_json::json;

/// Process exit codes.
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_IO: i32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] dronelink_core::Error),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        use dronelink_core::Error as E;
        match self {
            CliError::Config(_) | CliError::Core(E::InvalidParameter { .. } | E::ZeroVector) => "config",
            CliError::Core(E::InfeasibleOverhead { .. } | E::InfeasibleFrame { .. } | E::OutOfCoverage) => "infeasible",
            CliError::Io(_) => "io",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            "config" => EXIT_CONFIG,
            "infeasible" => EXIT_INFEASIBLE,
            _ => EXIT_IO,
        }
    }

    /// One-line JSON rendering for stderr.
    pub fn json_line(&self) -> String {
        json!({ "error": self.kind(), "exit_code": self.exit_code(), "message": self.to_string() }).to_string()
    }
}

use std::fmt::{self, Debug, Display};

use serde::Serialize;

use super::dsl::DslError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub code: String,
    pub location: String,
    pub detail: String,
}

/// Outcome of one command. Failing iff some finding is present.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub truncation: Option<usize>,
    pub findings: Vec<Finding>,
    pub stats: Vec<(String, String)>,
    #[serde(skip)]
    pub runtime_ms: u128,
}

impl Report {
    pub fn new(command: &str, truncation: Option<usize>) -> Self {
        Report {
            command: command.into(),
            status: Status::Pass,
            truncation,
            findings: Vec::new(),
            stats: Vec::new(),
            runtime_ms: 0,
        }
    }

    pub fn stat(&mut self, key: impl Into<String>, value: impl ToString) {
        self.stats.push((key.into(), value.to_string()));
    }

    pub fn fail(&mut self, code: impl Into<String>, location: impl Into<String>, detail: impl Into<String>) {
        self.findings.push(Finding { code: code.into(), location: location.into(), detail: detail.into() });
        self.status = Status::Fail;
    }

    /// Records a library error under its variant name.
    pub fn fail_with<E: Debug + Display>(&mut self, location: &str, e: &E) {
        self.fail(error_code(e), location, e.to_string());
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// The lines starting with `PASS` or `FAIL`.
    pub fn machine_lines(&self) -> Vec<String> {
        if self.findings.is_empty() {
            return vec!["PASS".into()];
        }
        self.findings.iter().map(|f| format!("FAIL {} {}", f.code, f.location)).collect()
    }
}

impl Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.truncation {
            Some(n) => writeln!(f, "# {} (N={n})", self.command)?,
            None => writeln!(f, "# {}", self.command)?,
        }
        for (k, v) in &self.stats {
            writeln!(f, "  {k}: {v}")?;
        }
        for x in &self.findings {
            writeln!(f, "  {}: {}", x.code, x.detail)?;
        }
        writeln!(f, "  runtime: {} ms", self.runtime_ms)?;
        for line in self.machine_lines() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// The innermost variant name of a nested error, read off its `Debug` form:
/// `Enrich(Bicat(M1Violation { .. }))` gives `M1Violation`.
pub fn error_code<E: Debug>(e: &E) -> String {
    const WRAPPERS: [&str; 8] = ["Bicat(", "FinCat(", "Path(", "Enrich(", "Localize(", "Bridge(", "Simplex(", "Dsl("];
    let text = format!("{e:?}");
    let mut rest = text.as_str();
    while let Some(inner) = WRAPPERS.iter().find_map(|w| rest.strip_prefix(w)) {
        rest = inner;
    }
    rest.chars().take_while(|c| c.is_alphanumeric() || *c == '_').collect()
}

/// Why a command could not produce a verdict. Exit code 2.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InputError {
    #[error(transparent)]
    Dsl(#[from] DslError),
    #[error("{0}")]
    UnknownCommand(String),
    #[error("missing argument {0}")]
    MissingArgument(String),
    #[error("{0}")]
    Invalid(String),
}

impl InputError {
    pub fn code(&self) -> &'static str {
        match self {
            InputError::Dsl(d) => d.code(),
            InputError::UnknownCommand(_) => "UnknownCommand",
            InputError::MissingArgument(_) => "MissingArgument",
            InputError::Invalid(_) => "InvalidInput",
        }
    }
}

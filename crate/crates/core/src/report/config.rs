use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::families::{VerifyOptions, DEFAULT_DIRECT_THRESHOLD};
use crate::forms::DEFAULT_FORM_CAP;
use crate::number::factor::{FactorBudget, DEFAULT_RHO_ITERATIONS};

pub const ENV_FACTORING_BUDGET: &str = "QUADCLASS_FACTORING_BUDGET";
pub const ENV_FORM_CAP: &str = "QUADCLASS_FORM_CAP";
pub const ENV_THRESHOLD: &str = "QUADCLASS_THRESHOLD";
pub const ENV_JOBS: &str = "QUADCLASS_JOBS";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    #[default]
    JsonLines,
    Csv,
    Pretty,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::JsonLines => "json-lines",
            OutputFormat::Csv => "csv",
            OutputFormat::Pretty => "pretty",
        })
    }
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json-lines" | "jsonl" => Ok(OutputFormat::JsonLines),
            "csv" => Ok(OutputFormat::Csv),
            "pretty" => Ok(OutputFormat::Pretty),
            other => Err(format!("unknown output format {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    /// Pollard rho iteration cap per factoring call.
    pub factoring_budget: u64,
    pub form_count_cap: u64,
    pub direct_check_threshold: u64,
    pub parallelism: usize,
    pub output_format: OutputFormat,
    pub timestamps: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            factoring_budget: DEFAULT_RHO_ITERATIONS,
            form_count_cap: DEFAULT_FORM_CAP,
            direct_check_threshold: DEFAULT_DIRECT_THRESHOLD,
            parallelism: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
            output_format: OutputFormat::JsonLines,
            timestamps: true,
        }
    }
}

impl RunConfig {
    /// Every numeric field must be positive.
    pub fn validate(&self) -> Result<(), String> {
        let fields = [
            ("factoring budget", self.factoring_budget),
            ("form count cap", self.form_count_cap),
            ("direct check threshold", self.direct_check_threshold),
            ("parallelism", self.parallelism as u64),
        ];
        for (name, value) in fields {
            if value == 0 {
                return Err(format!("{name} must be positive"));
            }
        }
        Ok(())
    }

    pub fn verify_options(&self) -> VerifyOptions {
        VerifyOptions {
            budget: FactorBudget::with_rho_iterations(self.factoring_budget),
            form_cap: self.form_count_cap,
            direct_threshold: self.direct_check_threshold,
        }
    }
}

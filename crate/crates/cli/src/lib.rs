//! Command-line front end: argument parsing, structured result records,
//! exit-code mapping and the batch runner.

pub mod args;
mod batch;
mod ops;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use clap::Parser;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub use args::{Cli, Command, Common};
pub use batch::{run_batch, BatchRow};

pub const SCHEMA: &str = "depchoice.result/1";
pub const BUDGET_ENV: &str = "DEPCHOICE_BUDGET";
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    /// A map handed to `verify` breaks its contract.
    Invalid(String),
    Lib(depchoice::Error),
}

impl From<depchoice::Error> for CliError {
    fn from(e: depchoice::Error) -> Self {
        CliError::Lib(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Invalid(m) => write!(f, "invalid embedding: {m}"),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    /// 1 usage, 2 hypothesis or precondition failure, 3 budget.
    pub fn exit_code(&self) -> i32 {
        use depchoice::Error as E;
        match self {
            CliError::Usage(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Lib(e) => match e {
                E::BudgetExceeded { .. } => 3,
                E::DegenerateInput(_) | E::InvalidGraph(_) | E::Unsupported(_) | E::Parse { .. } | E::Io(_) => 1,
                E::HypothesisFailure { .. }
                | E::Precondition(_)
                | E::WitnessNotFound { .. }
                | E::RetryExhausted { .. }
                | E::EmbeddingFailed(_)
                | E::Construction(_)
                | E::InvalidEmbedding(_) => 2,
            },
        }
    }

    pub fn kind(&self) -> &'static str {
        use depchoice::Error as E;
        match self {
            CliError::Usage(_) => "usage",
            CliError::Invalid(_) => "invalid-embedding",
            CliError::Lib(e) => match e {
                E::DegenerateInput(_) => "degenerate-input",
                E::InvalidGraph(_) => "invalid-graph",
                E::InvalidEmbedding(_) => "invalid-embedding",
                E::Precondition(_) => "precondition",
                E::HypothesisFailure { .. } => "hypothesis-failure",
                E::BudgetExceeded { .. } => "budget-exceeded",
                E::WitnessNotFound { .. } => "witness-not-found",
                E::RetryExhausted { .. } => "retry-exhausted",
                E::EmbeddingFailed(_) => "embedding-failed",
                E::Unsupported(_) => "unsupported",
                E::Construction(_) => "construction",
                E::Parse { .. } => "parse",
                E::Io(_) => "io",
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub kind: String,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub message: Option<String>,
}

/// One line of structured output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub schema: String,
    pub op: String,
    /// SHA-256 over every input file and inline graph spec, in read order.
    pub inputs_digest: String,
    pub params: BTreeMap<String, String>,
    pub seed: u64,
    pub outcome: Outcome,
    pub payload: Value,
    pub wall_ms: f64,
}

impl ResultRecord {
    /// SHA-256 of the payload; timing is excluded.
    pub fn payload_digest(&self) -> String {
        use sha2::{Digest, Sha256};
        format!("{:x}", Sha256::digest(self.payload.to_string().as_bytes()))
    }
}

/// An operation with its inputs and parameters, as stored on disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub op: String,
    /// Flag name to file path or inline graph spec (`host`, `pattern`, ...).
    #[serde(default)]
    pub inputs: BTreeMap<String, String>,
    #[serde(default)]
    pub params: BTreeMap<String, String>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "one")]
    pub trials: u64,
    #[serde(default)]
    pub budget: Option<u64>,
    /// Destination of a standalone run; batch rows ignore it.
    #[serde(default)]
    pub out: Option<String>,
}

fn one() -> u64 {
    1
}

impl ExperimentConfig {
    /// Command line for one trial. Flags whose value is `"true"` become
    /// bare switches. `trials` counts batch rows, so every run gets the
    /// default retry count.
    pub fn argv(&self, seed: u64) -> Vec<String> {
        let mut v = vec!["depchoice".to_string(), self.op.clone()];
        for (k, val) in self.inputs.iter().chain(&self.params) {
            v.push(format!("--{k}"));
            if val != "true" {
                v.push(val.clone());
            }
        }
        v.extend(["--seed".to_string(), seed.to_string()]);
        if let Some(b) = self.budget {
            v.extend(["--budget".to_string(), b.to_string()]);
        }
        v
    }
}

/// `--budget`, else `DEPCHOICE_BUDGET`, else the default.
pub fn resolve_budget(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{BUDGET_ENV}={s} is not an integer"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn params_of(cli: &Cli, budget: u64) -> (String, BTreeMap<String, String>) {
    let mut params = BTreeMap::new();
    let mut op = String::new();
    if let Ok(Value::Object(outer)) = serde_json::to_value(&cli.command) {
        for (name, inner) in outer {
            op = name;
            if let Value::Object(fields) = inner {
                for (k, v) in fields {
                    match v {
                        Value::Null => {}
                        Value::String(s) => {
                            params.insert(k, s);
                        }
                        other => {
                            params.insert(k, other.to_string());
                        }
                    }
                }
            }
        }
    }
    params.insert("trials".into(), cli.common.trials.to_string());
    params.insert("budget".into(), budget.to_string());
    (op, params)
}

/// Runs a parsed command; returns the record (or generated text for `gen`).
pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    let budget = resolve_budget(cli.common.budget)?;
    let c = &cli.common;
    if let Command::Gen(a) = &cli.command {
        return Ok(Output::Text(ops::generate(a, c.seed)?));
    }
    if let Command::Batch(a) = &cli.command {
        let text = std::fs::read_to_string(&a.config).map_err(depchoice::Error::from)?;
        let configs = parse_configs(&text)?;
        return Ok(Output::Table(run_batch(&configs)));
    }
    let (op, params) = params_of(cli, budget);
    let start = Instant::now();
    let mut ld = ops::Loader::new();
    let result = match &cli.command {
        Command::Drc(a) => ops::drc(a, c, budget, &mut ld),
        Command::Embed(a) => ops::embed(a, c, budget, &mut ld),
        Command::Oracle(a) => ops::oracle(a, budget, &mut ld),
        Command::Ramsey(a) => ops::ramsey(a, c, budget, &mut ld),
        Command::Certify(a) => ops::certify(a, c, &mut ld),
        Command::Verify(a) => ops::verify(a, &mut ld),
        Command::Gen(_) | Command::Batch(_) => unreachable!("handled above"),
    };
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let (outcome, payload) = match result {
        Ok(p) => (
            Outcome {
                kind: "success".into(),
                exit_code: 0,
                message: None,
            },
            p,
        ),
        Err(CliError::Usage(m)) => return Err(CliError::Usage(m)),
        Err(e) => (
            Outcome {
                kind: e.kind().into(),
                exit_code: e.exit_code(),
                message: Some(e.to_string()),
            },
            Value::Null,
        ),
    };
    Ok(Output::Record(Box::new(ResultRecord {
        schema: SCHEMA.into(),
        op,
        inputs_digest: ld.finish(),
        params,
        seed: c.seed,
        outcome,
        payload,
        wall_ms,
    })))
}

pub enum Output {
    Text(String),
    Record(Box<ResultRecord>),
    Table(Vec<BatchRow>),
}

impl Output {
    pub fn exit_code(&self) -> i32 {
        match self {
            Output::Record(r) => r.outcome.exit_code,
            Output::Text(_) | Output::Table(_) => 0,
        }
    }
}

/// JSON lines, or a single JSON array, of configurations.
pub fn parse_configs(text: &str) -> Result<Vec<ExperimentConfig>, CliError> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') {
        return serde_json::from_str(trimmed).map_err(|e| CliError::Usage(format!("config array: {e}")));
    }
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| CliError::Usage(format!("config line {}: {e}", i + 1)))
        })
        .collect()
}

fn emit(out: Option<&Path>, text: &str) -> std::io::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

/// Parses `argv`, runs the command, writes its output and returns the exit code.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let out = cli.common.out.clone();
    match execute(&cli) {
        Ok(output) => {
            let text = match &output {
                Output::Text(t) => t.clone(),
                Output::Record(r) => {
                    if let Some(m) = &r.outcome.message {
                        eprintln!("depchoice: {m}");
                    }
                    serde_json::to_string(r).expect("records serialize") + "\n"
                }
                Output::Table(rows) => batch::to_csv(rows),
            };
            if let Err(e) = emit(out.as_deref(), &text) {
                eprintln!("depchoice: cannot write output: {e}");
                return 1;
            }
            output.exit_code()
        }
        Err(e) => {
            eprintln!("depchoice: {e}");
            e.exit_code()
        }
    }
}

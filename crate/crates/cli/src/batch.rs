use clap::Parser;
use rayon::prelude::*;
use serde::Serialize;

use crate::{execute, Cli, ExperimentConfig, Output};

/// One trial of one configuration.
#[derive(Clone, Debug, Serialize)]
pub struct BatchRow {
    pub index: usize,
    pub config: usize,
    pub trial: u64,
    pub op: String,
    pub seed: u64,
    pub kind: String,
    pub exit_code: i32,
    pub success: bool,
    /// Whether every hypothesis along the way was checked and held.
    pub certified: bool,
    /// Size of the main result (count, embedded vertices, witness size).
    pub count: Option<String>,
    pub wall_ms: f64,
    pub payload_sha256: String,
    pub message: String,
}

fn certified(payload: &serde_json::Value) -> bool {
    match payload.get("rigor").and_then(|v| v.as_str()) {
        Some(r) => r == "strict",
        None => payload.get("flagged").and_then(|v| v.as_bool()) != Some(true),
    }
}

fn count_of(payload: &serde_json::Value) -> Option<String> {
    for key in ["count", "value", "size", "witness_size"] {
        if let Some(v) = payload.get(key) {
            return Some(v.to_string());
        }
    }
    payload
        .get("map")
        .and_then(|m| m.as_array())
        .map(|a| a.len().to_string())
}

fn run_one(config: usize, trial: u64, cfg: &ExperimentConfig) -> BatchRow {
    let seed = cfg.seed.wrapping_add(trial);
    let mut row = BatchRow {
        index: 0,
        config,
        trial,
        op: cfg.op.clone(),
        seed,
        kind: String::new(),
        exit_code: 1,
        success: false,
        certified: false,
        count: None,
        wall_ms: 0.0,
        payload_sha256: String::new(),
        message: String::new(),
    };
    let cli = match Cli::try_parse_from(cfg.argv(seed)) {
        Ok(c) => c,
        Err(e) => {
            row.kind = "usage".into();
            row.message = e.to_string().lines().next().unwrap_or("").to_string();
            return row;
        }
    };
    match execute(&cli) {
        Ok(Output::Record(r)) => {
            row.kind = r.outcome.kind.clone();
            row.exit_code = r.outcome.exit_code;
            row.success = r.outcome.exit_code == 0;
            row.certified = row.success && certified(&r.payload);
            row.count = count_of(&r.payload);
            row.wall_ms = r.wall_ms;
            row.payload_sha256 = r.payload_digest();
            row.message = r.outcome.message.clone().unwrap_or_default();
        }
        Ok(Output::Text(t)) => {
            use sha2::{Digest, Sha256};
            row.kind = "success".into();
            row.exit_code = 0;
            row.success = true;
            row.certified = true;
            row.payload_sha256 = format!("{:x}", Sha256::digest(t.as_bytes()));
        }
        Ok(Output::Table(_)) => {
            row.kind = "usage".into();
            row.message = "nested batch".into();
        }
        Err(e) => {
            row.kind = e.kind().into();
            row.exit_code = e.exit_code();
            row.message = e.to_string();
        }
    }
    row
}

/// Expands every configuration into its trials and runs them concurrently.
/// Rows keep configuration-then-trial order.
pub fn run_batch(configs: &[ExperimentConfig]) -> Vec<BatchRow> {
    let jobs: Vec<(usize, u64)> = configs
        .iter()
        .enumerate()
        .flat_map(|(i, c)| (0..c.trials).map(move |t| (i, t)))
        .collect();
    let mut rows: Vec<BatchRow> = jobs
        .par_iter()
        .map(|&(i, t)| run_one(i, t, &configs[i]))
        .collect();
    for (k, r) in rows.iter_mut().enumerate() {
        r.index = k;
    }
    rows
}

pub fn to_csv(rows: &[BatchRow]) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record([
        "index",
        "config",
        "trial",
        "op",
        "seed",
        "kind",
        "exit_code",
        "success",
        "certified",
        "count",
        "wall_ms",
        "payload_sha256",
        "message",
    ])
    .expect("in-memory write");
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

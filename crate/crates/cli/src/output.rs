//! Run manifests, exit codes and artifact writing.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use bernlab_core::{LabError, Verdict};
use serde::Serialize;
use serde_json::Value;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATED: u8 = 2;
pub const EXIT_INCONCLUSIVE: u8 = 3;
pub const EXIT_USAGE: u8 = 64;

#[derive(Debug)]
pub enum Failure {
    /// Bad flags, unreadable input, malformed JSON, violated preconditions.
    Usage(String),
    /// The computation ran but cannot decide (degenerate right side, roots
    /// that did not converge).
    Undecided(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Undecided(_) => EXIT_INCONCLUSIVE,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Undecided(m) => m,
        }
    }
}

impl From<LabError> for Failure {
    fn from(e: LabError) -> Self {
        match e {
            LabError::DegenerateRhs | LabError::RootsNotConverged => Failure::Undecided(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, Failure>;

pub fn exit_for(v: Verdict) -> u8 {
    match v {
        Verdict::Holds => EXIT_OK,
        Verdict::Violated => EXIT_VIOLATED,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: String,
    pub params: Value,
    pub seed: Option<u64>,
    pub threads: usize,
    pub wall_time_s: f64,
    pub warnings: Vec<String>,
}

pub struct Run {
    pub subcommand: String,
    pub params: Value,
    pub seed: Option<u64>,
    pub warnings: Vec<String>,
    started: Instant,
}

impl Run {
    pub fn start(subcommand: &str, params: Value, seed: Option<u64>) -> Self {
        Self {
            subcommand: subcommand.to_string(),
            params,
            seed,
            warnings: Vec::new(),
            started: Instant::now(),
        }
    }

    pub fn manifest(&self) -> RunManifest {
        RunManifest {
            tool: "bernlab",
            version: env!("CARGO_PKG_VERSION"),
            subcommand: self.subcommand.clone(),
            params: self.params.clone(),
            seed: self.seed,
            threads: rayon::current_num_threads(),
            wall_time_s: self.started.elapsed().as_secs_f64(),
            warnings: self.warnings.clone(),
        }
    }
}

pub fn read_input(path: Option<&Path>) -> CliResult<String> {
    match path {
        Some(p) => fs::read_to_string(p)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Usage(format!("cannot read stdin: {e}")))?;
            Ok(s)
        }
    }
}

pub fn write_output(path: Option<&Path>, text: &str) -> CliResult<()> {
    let mut body = text.to_string();
    if !body.ends_with('\n') {
        body.push('\n');
    }
    match path {
        Some(p) => fs::write(p, body)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(body.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Usage(format!("cannot write stdout: {e}")))
        }
    }
}

/// Serializes `body` with the manifest merged in under `"manifest"`.
pub fn with_manifest<T: Serialize>(body: &T, manifest: &RunManifest) -> CliResult<String> {
    let mut value = serde_json::to_value(body)
        .map_err(|e| Failure::Usage(format!("cannot serialize output: {e}")))?;
    if let Value::Object(map) = &mut value {
        map.insert(
            "manifest".to_string(),
            serde_json::to_value(manifest).expect("manifest serializes"),
        );
    }
    Ok(serde_json::to_string(&value).expect("value serializes"))
}

/// Sidecar path for artifacts that cannot embed a manifest (CSV).
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

pub fn finish(code: u8) -> ExitCode {
    ExitCode::from(code)
}

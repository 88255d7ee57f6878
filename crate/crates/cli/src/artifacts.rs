//! Config loading, digests and the text formats of every emitted file.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use archdam::geometry::DesignVector;
use archdam::mocss::{Candidate, IterationRecord};
use archdam::Config;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Bytes hashed when no configuration file is given.
const DEFAULT_CONFIG: &[u8] = b"{}";

pub struct LoadedConfig {
    pub config: Config,
    pub path: Option<PathBuf>,
    pub digest: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn read_bytes(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::read(path, e))
}

pub fn load_config(path: Option<&Path>) -> Result<LoadedConfig, CliError> {
    let bytes = match path {
        Some(p) => read_bytes(p)?,
        None => DEFAULT_CONFIG.to_vec(),
    };
    let source = path.map_or("default configuration".to_string(), |p| p.display().to_string());
    let text = std::str::from_utf8(&bytes).map_err(|e| CliError::Usage(format!("{source}: {e}")))?;
    let config = Config::from_json(text).map_err(|e| CliError::config(&source, e))?;
    Ok(LoadedConfig {
        config,
        path: path.map(Path::to_path_buf),
        digest: sha256_hex(&bytes),
    })
}

pub fn digest_line(digest: &str) -> String {
    format!("# config_sha256: {digest}\n")
}

/// Reads the digest from a leading `# config_sha256:` line, if any.
pub fn parse_digest_line(text: &str) -> Option<String> {
    text.lines()
        .next()?
        .strip_prefix("# config_sha256:")
        .map(|d| d.trim().to_string())
}

/// Fixed six-decimal rendering used by all plot-data files.
/// Values that round to zero print without a sign.
pub fn fmt6(v: f64) -> String {
    let v = if v.abs() < 5e-7 { 0.0 } else { v };
    format!("{v:.6}")
}

pub fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::write(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| CliError::write(path, e))
}

/// Writes to `out` or, without one, to standard output.
pub fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => write_file(p, text),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Runtime(format!("cannot write to stdout: {e}"))),
    }
}

pub const ARCHIVE_OBJECTIVE_COLUMNS: [&str; 4] = ["fit1", "fit2", "violation", "feasible"];

/// Archive members with floats in shortest round-trip form.
pub fn archive_csv(digest: &str, members: &[Candidate]) -> String {
    let mut out = digest_line(digest);
    let mut header: Vec<String> = DesignVector::names().to_vec();
    header.extend(ARCHIVE_OBJECTIVE_COLUMNS.iter().map(|s| s.to_string()));
    out.push_str(&header.join(","));
    out.push('\n');
    for m in members {
        let mut row: Vec<String> = m.position.iter().map(f64::to_string).collect();
        row.extend(m.fitness.objectives.iter().map(f64::to_string));
        row.push(m.fitness.violation.to_string());
        row.push(m.fitness.is_feasible().to_string());
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArchiveRow {
    pub variables: Vec<f64>,
    pub fit1: f64,
    pub fit2: f64,
    pub violation: f64,
    pub feasible: bool,
}

pub struct Archive {
    pub digest: Option<String>,
    pub rows: Vec<ArchiveRow>,
}

/// Parses an archive CSV. Columns are found by name; every column other
/// than the four objective columns is a design variable.
pub fn read_archive(path: &Path) -> Result<Archive, CliError> {
    let bytes = read_bytes(path)?;
    let bad = |msg: String| CliError::Usage(format!("{}: {msg}", path.display()));
    let text = String::from_utf8(bytes).map_err(|e| bad(e.to_string()))?;
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| bad(format!("missing column `{name}`")))
    };
    let (i1, i2) = (find("fit1")?, find("fit2")?);
    let iv = headers.iter().position(|h| h == "violation");
    let ifz = headers.iter().position(|h| h == "feasible");
    let mut rows = Vec::new();
    for (n, record) in reader.records().enumerate() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        let line = n + 1;
        let num = |i: usize| -> Result<f64, CliError> {
            let s = record.get(i).unwrap_or("");
            s.parse()
                .map_err(|_| bad(format!("row {line}, column `{}`: `{s}` is not a number", &headers[i])))
        };
        let violation = iv.map(num).transpose()?.unwrap_or(0.0);
        let feasible = match ifz.map(|i| record.get(i).unwrap_or("")) {
            None => violation == 0.0,
            Some("true" | "1") => true,
            Some("false" | "0") => false,
            Some(s) => return Err(bad(format!("row {line}: `{s}` is not a boolean"))),
        };
        let variables = (0..headers.len())
            .filter(|&i| ![Some(i1), Some(i2), iv, ifz].contains(&Some(i)))
            .map(num)
            .collect::<Result<_, _>>()?;
        rows.push(ArchiveRow {
            variables,
            fit1: num(i1)?,
            fit2: num(i2)?,
            violation,
            feasible,
        });
    }
    Ok(Archive {
        digest: parse_digest_line(&text),
        rows,
    })
}

#[derive(Serialize)]
struct LogHeader<'a> {
    config_sha256: &'a str,
    seed: u64,
}

/// Line-delimited JSON: a header object, then one record per iteration.
pub fn iteration_log(digest: &str, seed: u64, log: &[IterationRecord]) -> String {
    let mut out = serde_json::to_string(&LogHeader { config_sha256: digest, seed }).expect("header serializes");
    out.push('\n');
    for rec in log {
        out.push_str(&serde_json::to_string(rec).expect("record serializes"));
        out.push('\n');
    }
    out
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config_path: Option<String>,
    pub config_sha256: String,
    pub seed: u64,
    pub started_unix_ms: u128,
    pub finished_unix_ms: u128,
    pub outputs: Vec<String>,
}

pub fn unix_ms() -> u128 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0)
}

impl Manifest {
    pub fn new(command: &'static str, cfg: &LoadedConfig, seed: u64, started_unix_ms: u128) -> Self {
        Self {
            tool: env!("CARGO_BIN_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            config_path: cfg.path.as_ref().map(|p| p.display().to_string()),
            config_sha256: cfg.digest.clone(),
            seed,
            started_unix_ms,
            finished_unix_ms: 0,
            outputs: Vec::new(),
        }
    }

    /// Writes every `(file name, text)` pair into `dir`, then the manifest itself.
    pub fn write_all(mut self, dir: &Path, files: &[(&str, String)]) -> Result<PathBuf, CliError> {
        for (name, text) in files {
            let path = dir.join(name);
            write_file(&path, text)?;
            self.outputs.push(path.display().to_string());
        }
        self.finished_unix_ms = unix_ms();
        let path = dir.join("manifest.json");
        let mut text = serde_json::to_string_pretty(&self).expect("manifest serializes");
        text.push('\n');
        write_file(&path, &text)?;
        Ok(path)
    }
}

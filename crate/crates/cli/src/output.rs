use std::io::Write;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::args::{Global, OutFormat};

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or arguments (exit 2).
    #[error("{0}")]
    Usage(String),
    /// A requested check did not pass (exit 1).
    #[error("{0}")]
    Failed(String),
    #[error(transparent)]
    Core(#[from] ising_peel::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use ising_peel::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(E::Invalid(_) | E::OutOfRange(_) | E::Budget(_)) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

/// The format in effect, rejecting `text` where only tables make sense.
pub fn table_format(g: &Global, default: OutFormat) -> CliResult<OutFormat> {
    match g.format.unwrap_or(default) {
        OutFormat::Text => Err(CliError::Usage("text output is only available for map commands".into())),
        f => Ok(f),
    }
}

/// Writes to `--out` when given, to stdout otherwise.
pub fn emit(g: &Global, text: &str) -> CliResult {
    match &g.out {
        Some(path) => write_file(path, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> CliResult {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, text)?;
    Ok(())
}

pub fn csv_string<T: Serialize>(rows: &[T]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn json_string<T: Serialize + ?Sized>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Renders rows as CSV, or as JSON wrapped in `wrap` with the rows under
/// `key`.
pub fn rows_out<T: Serialize>(g: &Global, default: OutFormat, rows: &[T], wrap: serde_json::Value, key: &str) -> CliResult {
    let text = match table_format(g, default)? {
        OutFormat::Csv => csv_string(rows)?,
        _ => {
            let mut v = wrap;
            v[key] = serde_json::to_value(rows)?;
            json_string(&v)?
        }
    };
    emit(g, &text)
}

pub fn need_seed(seed: Option<u64>) -> CliResult<u64> {
    seed.ok_or_else(|| CliError::Usage("this command is randomized and needs --seed".into()))
}

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use genericlab::io::IoError;
use genericlab::rational::{decimal, parse_ratio, ratio_string};
use genericlab::Ratio;

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input, or a failed write.
    Input(String),
    /// Well-formed input that the construction rejects.
    Precondition(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Precondition(_) => 1,
            CliError::Input(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Precondition(m) => f.write_str(m),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Measure(_) | IoError::Tracing(_) => CliError::Precondition(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

/// Library errors on parsed input are precondition failures.
pub fn pre<E: fmt::Display>(e: E) -> CliError {
    CliError::Precondition(e.to_string())
}

pub fn read_json(path: &Path) -> Result<serde_json::Value, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn ratio_arg(name: &str, s: &str) -> Result<Ratio, CliError> {
    parse_ratio(s).map_err(|e| CliError::Input(format!("--{name}: {e}")))
}

/// `"p/q (decimal)"`.
pub fn both(r: &Ratio) -> String {
    format!("{} ({})", ratio_string(r), decimal(r))
}

/// Two CSV cells: the exact rational and its decimal.
pub fn cells(r: &Ratio) -> [String; 2] {
    [ratio_string(r), decimal(r)]
}

/// CSV writer to a file or standard output.
pub fn table(out: &Option<PathBuf>) -> Result<csv::Writer<Box<dyn Write>>, CliError> {
    let sink: Box<dyn Write> = match out {
        Some(p) => Box::new(io::BufWriter::new(
            fs::File::create(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    };
    Ok(csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(sink))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Stable pretty JSON with a trailing newline.
pub fn json_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

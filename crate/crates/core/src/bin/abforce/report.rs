//! Report envelope, CSV/JSON writers and CLI errors.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::args::Format;

pub const TOOL: &str = "abforce";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Lib(#[from] abforce::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 1 I/O, 2 usage, 3 domain, 4 convergence.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Usage(_) => 2,
            CliError::Lib(abforce::Error::Convergence { .. }) => 4,
            CliError::Lib(_) => 3,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Shortest round-trip text of a finite number: plain notation for
/// magnitudes in [1e-4, 1e7), exponent notation otherwise. Negative zero
/// prints as 0.
pub fn format_number(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 {
        "0".into()
    } else if (1e-4..1e7).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// One cell of an output table.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(usize),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    pub fn opt(v: Option<f64>) -> Cell {
        v.map_or(Cell::Empty, Cell::Num)
    }

    fn csv(&self) -> String {
        match self {
            Cell::Num(v) if v.is_finite() => format_number(*v),
            Cell::Num(_) => String::new(),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) if *v == 0.0 => json!(0.0),
            Cell::Num(v) if v.is_finite() => json!(v),
            Cell::Num(_) => Value::Null,
            Cell::Int(v) => json!(v),
            Cell::Bool(v) => json!(v),
            Cell::Text(s) => json!(s),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Rows as JSON objects keyed by the header.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .header
                        .iter()
                        .cloned()
                        .zip(row.iter().map(Cell::json))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    pub fn write_csv<W: Write>(&self, out: W) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv))?;
        }
        w.flush()
    }
}

/// Ordered key/value pairs, rendered as a JSON object or a two-column table.
#[derive(Debug, Clone, Default)]
pub struct Quantities(Vec<(String, Cell)>);

impl Quantities {
    pub fn put(&mut self, key: &str, value: impl Into<Cell>) {
        self.0.push((key.to_string(), value.into()));
    }

    pub fn to_json(&self) -> Value {
        Value::Object(self.0.iter().map(|(k, v)| (k.clone(), v.json())).collect())
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["quantity", "value"]);
        for (k, v) in &self.0 {
            t.push(vec![Cell::Text(k.clone()), v.clone()]);
        }
        t
    }
}

/// Everything a command produces.
pub struct Report {
    pub command: &'static str,
    /// Resolved parameters in the `--config` schema.
    pub parameters: Value,
    pub parameters_si: Value,
    /// Body of the JSON `results` field.
    pub results: Value,
    /// Body of the CSV output.
    pub table: Table,
    pub warnings: Vec<String>,
}

/// Output settings shared by all commands.
pub struct Sink {
    pub format: Format,
    pub out: Option<PathBuf>,
    pub timestamp: Option<String>,
}

impl Sink {
    pub fn open(&self) -> CliResult<Box<dyn Write>> {
        match &self.out {
            Some(p) => open_file(p),
            None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
        }
    }

    pub fn path_label(&self) -> PathBuf {
        self.out
            .clone()
            .unwrap_or_else(|| PathBuf::from("<stdout>"))
    }
}

pub fn open_file(path: &Path) -> CliResult<Box<dyn Write>> {
    let f = File::create(path).map_err(|e| CliError::io(path, e))?;
    Ok(Box::new(BufWriter::new(f)))
}

/// Drops null-valued keys so the echo lists only what was set or defaulted.
pub fn strip_nulls(v: Value) -> Value {
    match v {
        Value::Object(m) => Value::Object(
            m.into_iter()
                .filter(|(_, v)| !v.is_null())
                .map(|(k, v)| (k, strip_nulls(v)))
                .collect(),
        ),
        other => other,
    }
}

pub fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("parameters serialize")
}

impl Report {
    pub fn envelope(&self, timestamp: Option<&str>, results: Value) -> Value {
        let mut env = Map::new();
        env.insert("tool".into(), json!(TOOL));
        env.insert("version".into(), json!(VERSION));
        env.insert("command".into(), json!(self.command));
        if let Some(ts) = timestamp {
            env.insert("timestamp".into(), json!(ts));
        }
        env.insert("parameters".into(), self.parameters.clone());
        env.insert("parameters_si".into(), self.parameters_si.clone());
        env.insert("results".into(), results);
        env.insert("warnings".into(), json!(self.warnings));
        Value::Object(env)
    }

    /// `#` metadata lines that precede a CSV body.
    pub fn write_csv_preamble<W: Write>(
        &self,
        out: &mut W,
        timestamp: Option<&str>,
    ) -> io::Result<()> {
        writeln!(out, "# {TOOL} {VERSION} {}", self.command)?;
        if let Some(ts) = timestamp {
            writeln!(out, "# generated_at: {ts}")?;
        }
        writeln!(out, "# parameters: {}", self.parameters)?;
        for w in &self.warnings {
            writeln!(out, "# warning: {}", w.replace('\n', " "))?;
        }
        Ok(())
    }

    pub fn write(&self, sink: &Sink) -> CliResult<()> {
        let label = sink.path_label();
        let mut out = sink.open()?;
        let ts = sink.timestamp.as_deref();
        let res = match sink.format {
            Format::Json => write_json(&mut out, &self.envelope(ts, self.results.clone())),
            Format::Csv => self
                .write_csv_preamble(&mut out, ts)
                .and_then(|_| self.table.write_csv(&mut out)),
        };
        res.and_then(|_| out.flush())
            .map_err(|e| CliError::io(label, e))
    }
}

pub fn write_json<W: Write>(out: &mut W, v: &Value) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)
}

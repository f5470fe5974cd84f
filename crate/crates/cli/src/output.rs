//! Deterministic number formatting and output sinks.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde_json::Value;

/// Rounds to 12 significant digits. Negative zero becomes zero.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let r: f64 = format!("{x:.11e}").parse().expect("valid float literal");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// A float as a CSV/text cell: 12 significant digits, `.` separator.
pub fn fmt(x: f64) -> String {
    let r = round12(x);
    if r.is_nan() {
        "nan".into()
    } else if r.is_infinite() {
        if r > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{r}")
    }
}

pub fn fmt_list(xs: &[f64], sep: &str) -> String {
    xs.iter().map(|&x| fmt(x)).collect::<Vec<_>>().join(sep)
}

/// A float as JSON, rounded the same way. Non-finite values become null.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(round12(x))
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

/// Pretty JSON with a trailing newline.
pub fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

#[derive(Debug)]
pub struct WriteError {
    pub path: PathBuf,
    pub source: io::Error,
}

/// Writes to `path`, or to stdout when there is none.
pub fn emit(out: Option<&Path>, text: &str) -> Result<(), WriteError> {
    match out {
        Some(path) => {
            let wrap = |source| WriteError {
                path: path.to_path_buf(),
                source,
            };
            let mut f = File::create(path).map_err(wrap)?;
            f.write_all(text.as_bytes()).map_err(wrap)?;
            f.flush().map_err(wrap)
        }
        None => {
            let mut stdout = io::stdout().lock();
            match stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
                // a closed pipe (`| head`) is the reader's choice
                Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
                r => r.map_err(|source| WriteError {
                    path: PathBuf::from("<stdout>"),
                    source,
                }),
            }
        }
    }
}

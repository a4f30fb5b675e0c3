//! CSV formatting and all-or-nothing file output.

use std::io::Write;
use std::path::Path;

use super::CliError;

/// 12 significant digits in scientific notation.
pub fn sci(x: f64) -> String {
    format!("{x:.11e}")
}

/// Accumulates LF-terminated CSV lines.
#[derive(Debug, Default, Clone)]
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn with_header(header: &str) -> Self {
        let mut csv = Csv::default();
        csv.line(header);
        csv
    }

    pub fn line(&mut self, line: &str) {
        self.text.push_str(line);
        self.text.push('\n');
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let joined: Vec<String> = fields.into_iter().map(|s| s.as_ref().to_string()).collect();
        self.line(&joined.join(","));
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so a failure never leaves a truncated file behind.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io_err = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(contents.as_bytes()).map_err(io_err)?;
    tmp.flush().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

/// Sends `contents` to `path` when given, else to `stdout`.
pub fn emit(path: Option<&Path>, contents: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => write_atomic(p, contents),
        None => stdout
            .write_all(contents.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

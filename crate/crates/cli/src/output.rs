use std::io::Write;
use std::path::Path;

use tempfile::NamedTempFile;

use crate::error::CliError;

/// Writes `bytes` to `path` via a sibling temporary file and a rename, or to
/// stdout when no path is given.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = NamedTempFile::new_in(dir)?;
            tmp.write_all(bytes)?;
            tmp.as_file().sync_all()?;
            tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
        }
    }
    Ok(())
}

/// Shortest round-trip decimal, switching to exponent form for very small
/// or large magnitudes; integers lose their trailing `.0`.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let s = format!("{x:?}");
    match s.strip_suffix(".0") {
        Some(t) => t.to_string(),
        None => s,
    }
}

/// CSV with LF terminators and shortest round-trip float formatting.
pub fn csv_bytes<I, R>(header: &[&str], rows: I) -> Result<Vec<u8>, CliError>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.into_error()))
}

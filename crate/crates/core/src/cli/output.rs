use std::io::Write;
use std::path::Path;

use tempfile::NamedTempFile;

use super::CliError;

/// Rounds to 12 significant digits and prints the shortest decimal that
/// reads back to the rounded value.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0.0".into();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    format!("{rounded:?}")
}

/// CSV text with a header, one row per record and an optional trailing
/// comment line.
pub fn csv<I>(header: &str, rows: I, footer: Option<String>) -> String
where
    I: IntoIterator<Item = (String, f64)>,
{
    let mut out = String::new();
    out.push_str(header);
    out.push('\n');
    for (key, value) in rows {
        out.push_str(&key);
        out.push(',');
        out.push_str(&format_number(value));
        out.push('\n');
    }
    if let Some(f) = footer {
        out.push_str("# ");
        out.push_str(&f);
        out.push('\n');
    }
    out
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so a failed run never leaves a partial file behind.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::Runtime(format!("writing {}: {e}", path.display()));
    let mut tmp = NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

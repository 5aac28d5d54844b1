use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::{CliError, RunConfig};

/// Output file when one is configured, stdout otherwise.
pub(crate) fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::Input(format!("cannot create {}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

pub(crate) fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| CliError::Input(format!("JSON error: {e}")))?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

/// Comment line with the run configuration, then a header row and one row
/// per record.
pub(crate) fn write_csv<T: Serialize>(out: &mut dyn Write, config: &RunConfig, rows: &[T]) -> Result<(), CliError> {
    writeln!(out, "{}", config.comment_line())?;
    let mut w = csv::Writer::from_writer(&mut *out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    drop(w);
    out.flush()?;
    Ok(())
}

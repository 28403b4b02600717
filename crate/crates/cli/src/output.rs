//! File writers that stamp every output with the run configuration.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(BufWriter::new(file))
}

#[derive(Serialize)]
struct Stamped<'a, C, T> {
    config: &'a C,
    #[serde(flatten)]
    data: &'a T,
}

/// Pretty JSON with the config under a top-level `config` key.
pub fn write_json<C: Serialize, T: Serialize>(path: &Path, config: &C, data: &T) -> Result<()> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, &Stamped { config, data })?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

/// CSV whose first line is `# config: <json>`.
pub fn write_csv<C, F>(path: &Path, config: &C, body: F) -> Result<()>
where
    C: Serialize,
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    let mut out = create(path)?;
    writeln!(out, "# config: {}", serde_json::to_string(config)?)?;
    body(&mut out)?;
    out.flush()?;
    Ok(())
}

/// Serializes rows with a header through the csv crate.
pub fn rows<R: Serialize>(out: &mut dyn Write, rows: impl IntoIterator<Item = R>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

//! Deterministic file emission: CSV with a `#` metadata header block,
//! schema-versioned JSON reports, and OBJ meshes.

use std::io::Write;

use crate::error::Result;
use crate::space::SpaceParams;

pub const SCHEMA_VERSION: &str = "1";

/// Metadata block every CSV starts with.
#[derive(Debug, Clone)]
pub struct CsvMeta {
    pub command: String,
    pub space: Option<SpaceParams>,
    pub extra: Vec<(String, String)>,
}

impl CsvMeta {
    pub fn new(command: &str) -> Self {
        Self { command: command.to_string(), space: None, extra: Vec::new() }
    }

    pub fn with_space(mut self, sp: &SpaceParams) -> Self {
        self.space = Some(*sp);
        self
    }

    pub fn push(mut self, key: &str, value: impl std::fmt::Display) -> Self {
        self.extra.push((key.to_string(), value.to_string()));
        self
    }

    pub fn write(&self, out: &mut dyn Write) -> Result<()> {
        writeln!(out, "# rotcmc {} v{}", self.command, env!("CARGO_PKG_VERSION"))?;
        if let Some(sp) = &self.space {
            writeln!(out, "# space = {:?}, kappa = {}, tau = {}", sp.kind, sp.kappa, sp.tau)?;
        }
        for (k, v) in &self.extra {
            writeln!(out, "# {k} = {v}")?;
        }
        Ok(())
    }
}

/// Writes one CSV table: metadata block, header row, rows.  Floats use the
/// shortest round-trip formatting, so identical inputs give identical bytes.
pub fn write_csv(
    out: &mut dyn Write,
    meta: &CsvMeta,
    header: &[&str],
    rows: impl Iterator<Item = Vec<String>>,
) -> Result<()> {
    meta.write(out)?;
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v}")
    }
}

/// Wraps a serialisable report with the schema tag.
pub fn to_json<T: serde::Serialize>(command: &str, payload: &T) -> serde_json::Value {
    serde_json::json!({
        "schema": format!("rotcmc.{command}/{SCHEMA_VERSION}"),
        "version": env!("CARGO_PKG_VERSION"),
        "result": payload,
    })
}

pub fn write_json<T: serde::Serialize>(out: &mut dyn Write, command: &str, payload: &T) -> Result<()> {
    let value = to_json(command, payload);
    writeln!(out, "{}", serde_json::to_string_pretty(&value)?)?;
    Ok(())
}

impl From<serde_json::Error> for crate::error::Error {
    fn from(e: serde_json::Error) -> Self {
        crate::error::Error::Io(std::io::Error::other(e))
    }
}

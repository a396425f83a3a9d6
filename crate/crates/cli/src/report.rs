//! The machine-readable report shared by all subcommands.

use std::path::Path;

use ringpert::homology::HomologicalDims;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::descriptor::Descriptor;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub seed: Option<u64>,
    /// The descriptor as read, with command-line overrides applied.
    pub input: Option<Descriptor>,
    pub result: Value,
    /// False when a property violation or falsification was found.
    pub ok: bool,
    /// Informational; not covered by determinism guarantees.
    pub timing: Timing,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// The report without its `timing` field, for byte comparisons.
pub fn strip_timing(json: &str) -> Result<String, serde_json::Error> {
    let mut v: Value = serde_json::from_str(json)?;
    if let Value::Object(map) = &mut v {
        map.remove("timing");
    }
    serde_json::to_string_pretty(&v)
}

/// One line of the optional CSV output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub side: String,
    pub j: usize,
    pub beta: usize,
    pub mu: usize,
}

pub fn table_rows(side: &str, dims: &HomologicalDims) -> Vec<TableRow> {
    dims.betti
        .values()
        .iter()
        .zip(dims.bass.values())
        .enumerate()
        .map(|(j, (&beta, &mu))| TableRow {
            side: side.to_string(),
            j,
            beta,
            mu,
        })
        .collect()
}

pub fn write_csv(path: &Path, rows: &[TableRow]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

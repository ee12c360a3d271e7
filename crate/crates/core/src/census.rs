//! Robot census ingestion and dust-collection classification.
//!
//! Every robot that is not driving is collecting dust passively. Robots with
//! no mobility at all are the official passive collectors; wheeled robots sit
//! somewhere on the continuum.
//!
//! Input is CSV with the header `name,mobility,complete,active_dust_collector`.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{DustError, Result};

pub const CENSUS_HEADER: [&str; 4] = ["name", "mobility", "complete", "active_dust_collector"];

/// Synthetic census shaped to the published field-study counts
/// (261 complete records, 20 immobile, 86 wheeled, none collecting dust
/// actively) plus a handful of incomplete records.
pub const SYNTHETIC_CENSUS: &str = include_str!("../data/census_synthetic.csv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Mobility {
    None,
    Wheeled,
    Legged,
    Winged,
    Tracked,
    Other,
    Unknown,
}

impl Mobility {
    /// Case-insensitive parse. `None` is returned for strings outside the taxonomy.
    pub fn parse(s: &str) -> Option<Self> {
        let m = match s.trim().to_ascii_lowercase().as_str() {
            "none" => Mobility::None,
            "wheeled" => Mobility::Wheeled,
            "legged" => Mobility::Legged,
            "winged" => Mobility::Winged,
            "tracked" => Mobility::Tracked,
            "other" => Mobility::Other,
            "unknown" => Mobility::Unknown,
            _ => return None,
        };
        Some(m)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mobility::None => "none",
            Mobility::Wheeled => "wheeled",
            Mobility::Legged => "legged",
            Mobility::Winged => "winged",
            Mobility::Tracked => "tracked",
            Mobility::Other => "other",
            Mobility::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Mobility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusRecord {
    pub name: String,
    pub mobility: Mobility,
    pub complete: bool,
    pub active_dust_collector: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CensusLoad {
    pub records: Vec<CensusRecord>,
    /// Rows whose mobility string was outside the taxonomy and folded to `Other`.
    pub unknown_mobility_rows: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct CensusSummary {
    pub total_complete: u64,
    pub official_passive: u64,
    pub wheeled: u64,
    pub active_dust: u64,
    /// Complete records of every other mobility class.
    pub continuum_note: BTreeMap<String, u64>,
}

pub fn load_census_path<P: AsRef<Path>>(path: P) -> Result<CensusLoad> {
    let path = path.as_ref();
    let file =
        std::fs::File::open(path).map_err(|e| DustError::Io(format!("{}: {e}", path.display())))?;
    load_census(file)
}

pub fn load_census<R: Read>(reader: R) -> Result<CensusLoad> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let mut load = CensusLoad::default();
    let mut saw_header = false;
    for row in rdr.records() {
        let row = row.map_err(|e| DustError::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = row.position().map_or(0, |p| p.line());
        if !saw_header {
            let header: Vec<String> = row.iter().map(|f| f.to_ascii_lowercase()).collect();
            if header != CENSUS_HEADER {
                return Err(DustError::Parse {
                    line,
                    message: format!("expected header `{}`", CENSUS_HEADER.join(",")),
                });
            }
            saw_header = true;
            continue;
        }
        if row.len() == 1 && row[0].is_empty() {
            continue;
        }
        if row.len() != CENSUS_HEADER.len() {
            return Err(DustError::Parse {
                line,
                message: format!(
                    "expected {} columns, found {}",
                    CENSUS_HEADER.len(),
                    row.len()
                ),
            });
        }
        let mobility = match Mobility::parse(&row[1]) {
            Some(m) => m,
            None => {
                load.unknown_mobility_rows += 1;
                Mobility::Other
            }
        };
        load.records.push(CensusRecord {
            name: row[0].to_string(),
            mobility,
            complete: parse_bool(&row[2], "complete", line)?,
            active_dust_collector: parse_bool(&row[3], "active_dust_collector", line)?,
        });
    }
    Ok(load)
}

fn parse_bool(s: &str, column: &str, line: u64) -> Result<bool> {
    match s.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(DustError::Parse {
            line,
            message: format!("column `{column}`: expected a boolean, found `{s}`"),
        }),
    }
}

pub fn emit_census<W: Write>(records: &[CensusRecord], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let io = |e: csv::Error| DustError::Io(e.to_string());
    w.write_record(CENSUS_HEADER).map_err(io)?;
    for r in records {
        w.write_record([
            r.name.as_str(),
            r.mobility.as_str(),
            if r.complete { "true" } else { "false" },
            if r.active_dust_collector {
                "true"
            } else {
                "false"
            },
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| DustError::Io(e.to_string()))
}

/// Counts over complete records only.
pub fn summarize(records: &[CensusRecord]) -> CensusSummary {
    let mut s = CensusSummary::default();
    for r in records.iter().filter(|r| r.complete) {
        s.total_complete += 1;
        if r.active_dust_collector {
            s.active_dust += 1;
        }
        match r.mobility {
            Mobility::None => s.official_passive += 1,
            Mobility::Wheeled => s.wheeled += 1,
            other => *s.continuum_note.entry(other.to_string()).or_default() += 1,
        }
    }
    s
}

pub fn bundled_census() -> CensusLoad {
    load_census(SYNTHETIC_CENSUS.as_bytes()).expect("bundled census parses")
}

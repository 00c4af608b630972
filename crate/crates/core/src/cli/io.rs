//! JSON state files.
//!
//! ```json
//! {
//!   "version": 1,
//!   "kind": "pure",
//!   "n": 2,
//!   "index_order": "qubit 1 is the most significant bit",
//!   "data": [[0.7071067811865476, 0.0], [0.0, 0.0], [0.0, 0.0], [0.7071067811865476, 0.0]]
//! }
//! ```
//!
//! Pure states list `2^n` amplitudes as `[re, im]`; density matrices list
//! `2^n` rows of `2^n` such pairs. Floats are written in shortest
//! round-trip form, so reading a written file is bit-exact.

use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use crate::qstate::{CMatrix, DensityMatrix, PureState, C64};
use crate::Error;

pub const FORMAT_VERSION: u32 = 1;
pub const INDEX_ORDER: &str = "qubit 1 is the most significant bit";
const MAX_QUBITS: usize = 16;

#[derive(Clone, Debug, PartialEq)]
pub enum StateFile {
    Pure(PureState),
    Density(DensityMatrix),
}

#[derive(Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Pure,
    Density,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Entry {
    Pair([f64; 2]),
    Row(Vec<[f64; 2]>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    version: u32,
    kind: Kind,
    n: usize,
    #[serde(default)]
    #[allow(dead_code)]
    index_order: Option<String>,
    data: Vec<Entry>,
}

/// Why a state file was rejected.
#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    /// Malformed JSON or wrong shape, with serde's line/column.
    #[error("malformed state file: {0}")]
    Syntax(String),
    #[error("invalid state file: {0}")]
    Shape(String),
    #[error("invalid state: {0}")]
    Invariant(#[from] Error),
}

impl StateFile {
    pub fn n(&self) -> usize {
        match self {
            StateFile::Pure(p) => p.n(),
            StateFile::Density(d) => d.n(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            StateFile::Pure(_) => "pure",
            StateFile::Density(_) => "density",
        }
    }

    pub fn parse(text: &str) -> Result<Self, FileError> {
        let raw: Raw = serde_json::from_str(text).map_err(|e| FileError::Syntax(e.to_string()))?;
        if raw.version != FORMAT_VERSION {
            return Err(FileError::Shape(format!(
                "unsupported version {} (expected {FORMAT_VERSION})",
                raw.version
            )));
        }
        if raw.n > MAX_QUBITS {
            return Err(FileError::Shape(format!(
                "n = {} exceeds {MAX_QUBITS}",
                raw.n
            )));
        }
        let d = 1usize << raw.n;
        let pair = |p: [f64; 2]| C64::new(p[0], p[1]);
        match raw.kind {
            Kind::Pure => {
                let amps = raw
                    .data
                    .into_iter()
                    .enumerate()
                    .map(|(i, e)| match e {
                        Entry::Pair(p) => Ok(pair(p)),
                        Entry::Row(_) => Err(FileError::Shape(format!(
                            "data[{i}] is a list; pure states hold [re, im] pairs"
                        ))),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if amps.len() != d {
                    return Err(FileError::Shape(format!(
                        "{} amplitudes for n = {} (expected {d})",
                        amps.len(),
                        raw.n
                    )));
                }
                Ok(StateFile::Pure(PureState::new(raw.n, amps)?))
            }
            Kind::Density => {
                if raw.data.len() != d {
                    return Err(FileError::Shape(format!(
                        "{} rows for n = {} (expected {d})",
                        raw.data.len(),
                        raw.n
                    )));
                }
                let mut m = CMatrix::zeros(d);
                for (r, e) in raw.data.into_iter().enumerate() {
                    let row = match e {
                        Entry::Row(row) if row.len() == d => row,
                        Entry::Row(row) => {
                            return Err(FileError::Shape(format!(
                                "row {r} has {} entries (expected {d})",
                                row.len()
                            )))
                        }
                        // a 1×1 matrix row [[re, im]] parses as a pair
                        Entry::Pair(_) => {
                            return Err(FileError::Shape(format!(
                                "row {r} is a bare pair; rows are lists of [re, im] pairs"
                            )))
                        }
                    };
                    for (c, p) in row.into_iter().enumerate() {
                        m[(r, c)] = pair(p);
                    }
                }
                Ok(StateFile::Density(DensityMatrix::new(raw.n, m)?))
            }
        }
    }

    pub fn read(path: &Path) -> Result<(Self, Vec<u8>), FileError> {
        let bytes = std::fs::read(path).map_err(|source| FileError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let text = String::from_utf8_lossy(&bytes);
        Ok((Self::parse(&text)?, bytes))
    }

    pub fn to_json(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{{");
        let _ = writeln!(s, "  \"version\": {FORMAT_VERSION},");
        let _ = writeln!(s, "  \"kind\": \"{}\",", self.kind());
        let _ = writeln!(s, "  \"n\": {},", self.n());
        let _ = writeln!(s, "  \"index_order\": \"{INDEX_ORDER}\",");
        let _ = writeln!(s, "  \"data\": [");
        match self {
            StateFile::Pure(p) => {
                let lines: Vec<String> = p
                    .amps()
                    .iter()
                    .map(|z| format!("    {}", pair_json(*z)))
                    .collect();
                let _ = writeln!(s, "{}", lines.join(",\n"));
            }
            StateFile::Density(rho) => {
                let m = rho.matrix();
                let lines: Vec<String> = (0..m.dim())
                    .map(|r| {
                        let row: Vec<String> = m.row(r).iter().map(|z| pair_json(*z)).collect();
                        format!("    [{}]", row.join(", "))
                    })
                    .collect();
                let _ = writeln!(s, "{}", lines.join(",\n"));
            }
        }
        let _ = writeln!(s, "  ]");
        let _ = writeln!(s, "}}");
        s
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_json())
    }
}

fn pair_json(z: C64) -> String {
    // serde_json emits the shortest representation that parses back exactly
    format!(
        "[{}, {}]",
        serde_json::Value::from(z.re),
        serde_json::Value::from(z.im)
    )
}

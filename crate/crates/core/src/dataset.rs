//! The bundled knot table: grid files plus a TOML manifest recording each
//! knot's Alexander polynomial, signature and (where known) Υ.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::grid::{parse_grid, GridDiagram, GridError};
use crate::limits::SizeCap;
use crate::oracle::{alexander_from_euler, tilde_homology, BigradedDims, LaurentPoly, OracleError};
use crate::rational::{parse_rational, Rational};
use crate::upsilon::PLFunction;

pub const MANIFEST: &str = "manifest.toml";

/// Directory of the dataset shipped with the source tree.
pub fn bundled_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("manifest: {0}")]
    Manifest(#[from] toml::de::Error),
    #[error("{path}: {source}")]
    Grid { path: PathBuf, source: GridError },
    #[error("{name}: bad upsilon breakpoints: {reason}")]
    BadUpsilon { name: String, reason: String },
    #[error("no dataset entry named `{0}`")]
    UnknownEntry(String),
    #[error("{name}: computed Alexander polynomial {computed}, manifest says {expected}")]
    AlexanderMismatch { name: String, expected: LaurentPoly, computed: LaurentPoly },
    #[error("{name}: signature {expected} needs homology on the diagonal {}, found diagonals {found:?}", expected / 2)]
    SignatureMismatch { name: String, expected: i32, found: Vec<i32> },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    /// Small enough to run in every test pass.
    Ci,
    /// Needs `n = 9` or more; run on demand.
    Stress,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct KnotRecord {
    name: String,
    file: String,
    alexander: Vec<i64>,
    signature: Option<i32>,
    #[serde(default)]
    tags: Vec<String>,
    tier: Tier,
    upsilon: Option<Vec<[String; 2]>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TripleRecord {
    name: String,
    summands: [String; 2],
    sum: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    #[serde(rename = "knot")]
    knots: Vec<KnotRecord>,
    #[serde(default, rename = "triple")]
    triples: Vec<TripleRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetEntry {
    pub name: String,
    pub path: PathBuf,
    pub grid: GridDiagram,
    /// Symmetric, normalized so that `Δ(1) = 1`.
    pub alexander: LaurentPoly,
    pub signature: Option<i32>,
    pub tags: Vec<String>,
    pub tier: Tier,
    pub upsilon: Option<PLFunction>,
}

impl DatasetEntry {
    pub fn has_tag(&self, tag: &str) -> bool {
        self.tags.iter().any(|t| t == tag)
    }
}

/// `Υ(sum) = Υ(a) + Υ(b)` is expected; a summand written `m(name)` is the
/// mirror of that entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triple {
    pub name: String,
    pub summands: [String; 2],
    pub sum: String,
}

#[derive(Debug, Clone)]
pub struct Dataset {
    pub dir: PathBuf,
    entries: Vec<DatasetEntry>,
    triples: Vec<Triple>,
}

fn parse_breakpoints(name: &str, raw: &[[String; 2]]) -> Result<PLFunction, DatasetError> {
    let bad = |reason: String| DatasetError::BadUpsilon { name: name.to_string(), reason };
    let points = raw
        .iter()
        .map(|[t, v]| Ok((parse_rational(t)?, parse_rational(v)?)))
        .collect::<Result<Vec<(Rational, Rational)>, crate::rational::ParseRationalError>>()
        .map_err(|e| bad(e.to_string()))?;
    PLFunction::new(points).map_err(|e| bad(e.to_string()))
}

impl Dataset {
    pub fn load(dir: impl AsRef<Path>) -> Result<Self, DatasetError> {
        let dir = dir.as_ref().to_path_buf();
        let read =
            |path: &Path| fs::read_to_string(path).map_err(|source| DatasetError::Io { path: path.into(), source });
        let manifest: Manifest = toml::from_str(&read(&dir.join(MANIFEST))?)?;
        let mut entries = Vec::new();
        for k in manifest.knots {
            let path = dir.join(&k.file);
            let grid = parse_grid(&read(&path)?)
                .map_err(|source| DatasetError::Grid { path: path.clone(), source })?
                .with_name(k.name.clone());
            let upsilon = k.upsilon.as_deref().map(|u| parse_breakpoints(&k.name, u)).transpose()?;
            entries.push(DatasetEntry {
                alexander: LaurentPoly::symmetric(&k.alexander),
                name: k.name,
                path,
                grid,
                signature: k.signature,
                tags: k.tags,
                tier: k.tier,
                upsilon,
            });
        }
        let triples =
            manifest.triples.into_iter().map(|t| Triple { name: t.name, summands: t.summands, sum: t.sum }).collect();
        let ds = Self { dir, entries, triples };
        for t in &ds.triples {
            for part in t.summands.iter().chain([&t.sum]) {
                ds.resolve(part)?;
            }
        }
        Ok(ds)
    }

    pub fn bundled() -> Result<Self, DatasetError> {
        Self::load(bundled_dir())
    }

    pub fn entries(&self) -> &[DatasetEntry] {
        &self.entries
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn get(&self, name: &str) -> Option<&DatasetEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// The grid for `name` or for `m(name)`.
    pub fn resolve(&self, name: &str) -> Result<GridDiagram, DatasetError> {
        if let Some(inner) = name.strip_prefix("m(").and_then(|s| s.strip_suffix(')')) {
            return Ok(self.resolve(inner)?.reflect_horizontal());
        }
        self.get(name).map(|e| e.grid.clone()).ok_or_else(|| DatasetError::UnknownEntry(name.to_string()))
    }

    /// Entries whose grids fit under `cap`.
    pub fn within(&self, cap: SizeCap) -> impl Iterator<Item = &DatasetEntry> {
        self.entries.iter().filter(move |e| cap.check(e.grid.n()).is_ok())
    }
}

/// What the oracle established about a dataset entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub tilde: BigradedDims,
    pub alexander: LaurentPoly,
    pub thin_diagonal: Option<i32>,
}

/// Recomputes `Δ` from the tilde homology and checks the recorded signature
/// against the diagonal `M - A = σ/2` of thin homology.
pub fn certify(entry: &DatasetEntry, cap: SizeCap) -> Result<Certificate, DatasetError> {
    let tilde = tilde_homology(&entry.grid, cap)?;
    let alexander = alexander_from_euler(&tilde, entry.grid.n())?;
    if alexander != entry.alexander {
        return Err(DatasetError::AlexanderMismatch {
            name: entry.name.clone(),
            expected: entry.alexander.clone(),
            computed: alexander,
        });
    }
    let thin_diagonal = tilde.thin_diagonal();
    if let Some(sigma) = entry.signature {
        if sigma % 2 != 0 || thin_diagonal != Some(sigma / 2) {
            return Err(DatasetError::SignatureMismatch {
                name: entry.name.clone(),
                expected: sigma,
                found: tilde.diagonals(),
            });
        }
    }
    Ok(Certificate { tilde, alexander, thin_diagonal })
}

/// Certificates for every entry within `cap`, keyed by name.
pub fn certify_all(ds: &Dataset, cap: SizeCap) -> Result<BTreeMap<String, Certificate>, DatasetError> {
    ds.within(cap).map(|e| Ok((e.name.clone(), certify(e, cap)?))).collect()
}

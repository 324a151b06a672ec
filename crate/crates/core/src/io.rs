//! JSON and CSV forms of grids, complexes, bar summaries and Υ.
//!
//! Rationals are always written as `p/q` strings.

use serde::{Deserialize, Serialize};

use crate::chain::{FilteredUComplex, Generator};
use crate::error::Error;
use crate::grid::GridDiagram;
use crate::rational::{parse_rational, to_f64, Rational};
use crate::tmod::{Bar, BarLength, BarSummary};
use crate::upsilon::{tau, PLFunction};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridJson {
    pub n: usize,
    #[serde(rename = "O")]
    pub o: Vec<usize>,
    #[serde(rename = "X")]
    pub x: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl From<&GridDiagram> for GridJson {
    fn from(g: &GridDiagram) -> Self {
        Self { n: g.n(), o: g.sigma_o().to_vec(), x: g.sigma_x().to_vec(), name: g.name().map(str::to_string) }
    }
}

impl TryFrom<GridJson> for GridDiagram {
    type Error = crate::grid::GridError;

    fn try_from(j: GridJson) -> Result<Self, Self::Error> {
        if j.o.len() != j.n {
            return Err(crate::grid::GridError::LengthMismatch { o: j.o.len(), x: j.n });
        }
        let g = GridDiagram::new(j.o, j.x)?;
        Ok(match j.name {
            Some(name) => g.with_name(name),
            None => g,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub id: usize,
    #[serde(rename = "M")]
    pub m: i32,
    #[serde(rename = "A")]
    pub a: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowJson {
    pub src: usize,
    pub dst: usize,
    pub k: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub generators: Vec<GeneratorJson>,
    pub arrows: Vec<ArrowJson>,
}

impl From<&FilteredUComplex> for ComplexJson {
    fn from(c: &FilteredUComplex) -> Self {
        Self {
            generators: c
                .generators()
                .iter()
                .enumerate()
                .map(|(id, g)| GeneratorJson { id, m: g.maslov, a: g.alexander })
                .collect(),
            arrows: c.arrows().map(|(src, dst, k)| ArrowJson { src, dst, k }).collect(),
        }
    }
}

/// Rebuilds a complex from a dump; ids must be `0..len` in order.
pub fn complex_from_json(j: &ComplexJson) -> Result<FilteredUComplex, Error> {
    if let Some((pos, g)) = j.generators.iter().enumerate().find(|(i, g)| g.id != *i) {
        return Err(Error::Json(serde::de::Error::custom(format!(
            "generator at position {pos} has id {}; ids must be 0, 1, 2, ...",
            g.id
        ))));
    }
    let gens = j.generators.iter().map(|g| Generator { maslov: g.m, alexander: g.a, state: None }).collect();
    Ok(FilteredUComplex::from_parts(gens, j.arrows.iter().map(|a| (a.src, a.dst, a.k)))?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarJson {
    pub g: String,
    /// `p/q`, or `inf` for a free summand.
    pub len: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarsJson {
    pub t: String,
    pub bars: Vec<BarJson>,
}

impl From<&BarSummary> for BarsJson {
    fn from(b: &BarSummary) -> Self {
        Self {
            t: b.t.to_string(),
            bars: b.bars().iter().map(|bar| BarJson { g: bar.g.to_string(), len: bar.len.to_string() }).collect(),
        }
    }
}

pub fn bars_from_json(j: &BarsJson) -> Result<BarSummary, Error> {
    let bars = j
        .bars
        .iter()
        .map(|b| {
            let len = match b.len.as_str() {
                "inf" => BarLength::Infinite,
                s => BarLength::Finite(parse_rational(s)?),
            };
            Ok(Bar { g: parse_rational(&b.g)?, len })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(BarSummary::new(parse_rational(&j.t)?, bars))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointJson {
    pub t: String,
    pub v: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PLJson {
    pub breakpoints: Vec<PointJson>,
    pub tau: i64,
    pub slopes: Vec<String>,
}

impl From<&PLFunction> for PLJson {
    fn from(f: &PLFunction) -> Self {
        Self {
            breakpoints: f
                .breakpoints()
                .iter()
                .map(|(t, v)| PointJson { t: t.to_string(), v: v.to_string() })
                .collect(),
            tau: tau(f),
            slopes: f.slopes().iter().map(Rational::to_string).collect(),
        }
    }
}

pub fn pl_from_json(j: &PLJson) -> Result<PLFunction, Error> {
    let points = j
        .breakpoints
        .iter()
        .map(|p| Ok((parse_rational(&p.t)?, parse_rational(&p.v)?)))
        .collect::<Result<Vec<_>, Error>>()?;
    PLFunction::new(points).map_err(|e| Error::Json(serde::de::Error::custom(e.to_string())))
}

/// `t,value` rows at `samples + 1` evenly spaced points of the domain, as
/// decimals for plotting.
pub fn pl_csv(f: &PLFunction, samples: usize) -> String {
    let (lo, hi) = f.domain();
    let samples = samples.max(1);
    let mut out = String::from("t,value\n");
    for i in 0..=samples {
        let t = lo + (hi - lo) * Rational::new(i as i64, samples as i64);
        let v = f.value(t).expect("sample inside the domain");
        out.push_str(&format!("{},{}\n", to_f64(&t), to_f64(&v)));
    }
    out
}

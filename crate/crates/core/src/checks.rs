//! Properties Υ must satisfy, checked on concrete diagrams.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::error::Error;
use crate::grid::GridDiagram;
use crate::pipeline::{self, Options};
use crate::rational::Rational;
use crate::upsilon::PLFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Property {
    /// `Υ(0) = Υ(2) = 0`.
    Endpoints,
    /// `Υ(t) = Υ(2 - t)`.
    Symmetry,
    /// The reflected diagram gives `-Υ`.
    Mirror,
    /// Stabilizing the diagram leaves `Υ` unchanged.
    Stabilization,
    /// `Υ` of a connected sum is the sum.
    Additivity,
}

impl Property {
    pub const ALL: [Property; 5] =
        [Property::Endpoints, Property::Symmetry, Property::Mirror, Property::Stabilization, Property::Additivity];

    pub fn name(self) -> &'static str {
        match self {
            Property::Endpoints => "endpoints",
            Property::Symmetry => "symmetry",
            Property::Mirror => "mirror",
            Property::Stabilization => "stabilize",
            Property::Additivity => "additivity",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Property {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Property::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| {
            format!("unknown property `{s}` (expected one of endpoints, symmetry, mirror, stabilize, additivity)")
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Pass,
    /// Fails at `witness`, the first `t` where the identity breaks.
    Fail {
        witness: Rational,
        detail: String,
    },
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub property: Property,
    /// What was checked, e.g. the stabilized row.
    pub subject: String,
    pub status: Status,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        !matches!(self.status, Status::Fail { .. })
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<10} {:<24} ", self.property, self.subject)?;
        match &self.status {
            Status::Pass => f.write_str("pass"),
            Status::Fail { witness, detail } => write!(f, "FAIL at t = {witness}: {detail}"),
            Status::Skipped(why) => write!(f, "skipped ({why})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub name: String,
    pub upsilon: PLFunction,
    pub outcomes: Vec<CheckOutcome>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(CheckOutcome::passed)
    }
}

#[derive(Debug, Clone)]
pub struct CheckConfig {
    pub options: Options,
    pub properties: BTreeSet<Property>,
    /// Rows at which the diagram is stabilized.
    pub stabilize_rows: Vec<usize>,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self { options: Options::default(), properties: Property::ALL.into_iter().collect(), stabilize_rows: vec![0] }
    }
}

fn compare(property: Property, subject: String, got: &PLFunction, want: &PLFunction) -> CheckOutcome {
    let status = match got.first_difference(want) {
        None => Status::Pass,
        Some(t) => Status::Fail {
            witness: t,
            detail: format!(
                "{} vs {}",
                got.value(t).map_or("undefined".into(), |v| v.to_string()),
                want.value(t).map_or("undefined".into(), |v| v.to_string())
            ),
        },
    };
    CheckOutcome { property, subject, status }
}

fn endpoints(f: &PLFunction) -> Status {
    let two = Rational::from_integer(2);
    for t in [Rational::zero(), two] {
        match f.value(t) {
            Some(v) if v.is_zero() => {}
            v => {
                let shown = v.map_or("undefined".to_string(), |v| v.to_string());
                return Status::Fail { witness: t, detail: format!("Υ({t}) = {shown}") };
            }
        }
    }
    if f.domain() != (Rational::zero(), two) {
        return Status::Fail { witness: f.domain().0, detail: "domain is not [0, 2]".into() };
    }
    Status::Pass
}

/// Runs the single-diagram properties of `cfg` on `g`. Additivity needs a
/// triple and is handled by [`check_additivity`].
pub fn check_properties(g: &GridDiagram, cfg: &CheckConfig) -> Result<PropertyReport, Error> {
    let f = pipeline::upsilon(g, cfg.options)?;
    let mut outcomes = Vec::new();
    for &p in &cfg.properties {
        match p {
            Property::Endpoints => {
                outcomes.push(CheckOutcome { property: p, subject: "Υ(0), Υ(2)".into(), status: endpoints(&f) })
            }
            Property::Symmetry => {
                let status = match f.asymmetry() {
                    None => Status::Pass,
                    Some(t) => Status::Fail { witness: t, detail: "Υ(t) != Υ(2 - t)".into() },
                };
                outcomes.push(CheckOutcome { property: p, subject: "Υ(t) = Υ(2-t)".into(), status });
            }
            Property::Mirror => {
                let m = pipeline::upsilon(&g.reflect_horizontal(), cfg.options)?;
                outcomes.push(compare(p, "reflected diagram".into(), &m, &f.neg()));
            }
            Property::Stabilization => {
                for &row in &cfg.stabilize_rows {
                    let subject = format!("row {row}");
                    if row >= g.n() {
                        outcomes.push(CheckOutcome {
                            property: p,
                            subject,
                            status: Status::Skipped(format!("grid has {} rows", g.n())),
                        });
                        continue;
                    }
                    if let Err(e) = cfg.options.cap.check(g.n() + 1) {
                        outcomes.push(CheckOutcome { property: p, subject, status: Status::Skipped(e.to_string()) });
                        continue;
                    }
                    let s = pipeline::upsilon(&g.stabilize(row)?, cfg.options)?;
                    outcomes.push(compare(p, subject, &s, &f));
                }
            }
            Property::Additivity => {}
        }
    }
    Ok(PropertyReport { name: g.name().unwrap_or("grid").to_string(), upsilon: f, outcomes })
}

/// `Υ(sum) = Υ(a) + Υ(b)`.
pub fn check_additivity(subject: &str, a: &PLFunction, b: &PLFunction, sum: &PLFunction) -> CheckOutcome {
    match a.add(b) {
        Some(expected) => compare(Property::Additivity, subject.to_string(), sum, &expected),
        None => CheckOutcome {
            property: Property::Additivity,
            subject: subject.to_string(),
            status: Status::Fail { witness: a.domain().0, detail: "summands have different domains".into() },
        },
    }
}

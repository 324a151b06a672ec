//! Grid diagram in, invariants out.

use crate::chain::{build_quotient_complex, reduce, FilteredUComplex};
use crate::error::Error;
use crate::grid::GridDiagram;
use crate::limits::SizeCap;
use crate::oracle::{alexander_from_euler, tilde_homology, BigradedDims, LaurentPoly};
use crate::rational::Rational;
use crate::tmod::{homology_at_t, t_modify, upsilon_at, BarSummary};
use crate::upsilon::{tau, upsilon_function, PLFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    pub cap: SizeCap,
    /// Cancel unit arrows before t-modifying.
    pub reduce: bool,
    /// Check `∂² = 0`, homogeneity and filtration on the complex used.
    pub verify: bool,
}

impl Default for Options {
    fn default() -> Self {
        Self { cap: SizeCap::default(), reduce: true, verify: true }
    }
}

impl Options {
    pub fn with_cap(cap: SizeCap) -> Self {
        Self { cap, ..Self::default() }
    }

    pub fn unreduced(self) -> Self {
        Self { reduce: false, ..self }
    }
}

/// The quotient complex of `g`, reduced unless `opts.reduce` is off.
pub fn complex(g: &GridDiagram, opts: Options) -> Result<FilteredUComplex, Error> {
    let raw = build_quotient_complex(g, opts.cap)?;
    let c = if opts.reduce { reduce(&raw) } else { raw };
    if opts.verify {
        c.check_invariants()?;
    }
    Ok(c)
}

pub fn upsilon(g: &GridDiagram, opts: Options) -> Result<PLFunction, Error> {
    Ok(upsilon_function(&complex(g, opts)?)?)
}

/// Υ at a single `t` in `[0, 2]`; `(1, 2]` is read off by symmetry.
pub fn upsilon_at_t(c: &FilteredUComplex, t: Rational) -> Result<Rational, Error> {
    let two = Rational::from_integer(2);
    let t = if t > Rational::from_integer(1) && t <= two { two - t } else { t };
    Ok(upsilon_at(c, t)?)
}

pub fn bars(g: &GridDiagram, t: Rational, opts: Options) -> Result<BarSummary, Error> {
    Ok(homology_at_t(&t_modify(&complex(g, opts)?, t)?))
}

/// Everything `invariants` reports about a knot grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invariants {
    pub n: usize,
    pub upsilon: PLFunction,
    pub tau: i64,
    pub tilde: BigradedDims,
    pub alexander: LaurentPoly,
    pub determinant: i64,
    /// `δ = M - A` if the tilde homology is thin.
    pub thin_diagonal: Option<i32>,
}

pub fn invariants(g: &GridDiagram, opts: Options) -> Result<Invariants, Error> {
    let upsilon = upsilon(g, opts)?;
    let tilde = tilde_homology(g, opts.cap)?;
    let alexander = alexander_from_euler(&tilde, g.n())?;
    Ok(Invariants {
        n: g.n(),
        tau: tau(&upsilon),
        upsilon,
        determinant: alexander.determinant(),
        thin_diagonal: tilde.thin_diagonal(),
        tilde,
        alexander,
    })
}

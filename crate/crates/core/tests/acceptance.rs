//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs the CI tier (n <= 8) by default. Set `GRIDUPS_STRESS=1` to add the
//! stress-tier entries.

use std::collections::BTreeMap;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use gridups::chain::{build_quotient_complex, build_tilde_complex, reduce, FilteredUComplex};
use gridups::dataset::{certify, Dataset, DatasetEntry, Tier};
use gridups::grid::GridDiagram;
use gridups::limits::SizeCap;
use gridups::oracle::{brute_force_homology_at_t, tilde_homology_of};
use gridups::pipeline::{self, Options};
use gridups::rational::Rational;
use gridups::tmod::{homology_at_t, t_modify, upsilon_at};
use gridups::upsilon::{tau, upsilon_function, PLFunction};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const UNKNOT_BUDGET: Duration = Duration::from_millis(100);
const TREFOIL_BUDGET: Duration = Duration::from_secs(5);
const FIGURE8_BUDGET: Duration = Duration::from_secs(30);
const ALTERNATING_BUDGET: Duration = Duration::from_secs(600);
const CENSUS_TS: [(i64, i64); 3] = [(1, 3), (1, 2), (2, 3)];
const ORACLE_SAMPLES: usize = 5;
const DIRECT_SAMPLES: usize = 20;
const RAW_MAX_N: usize = 6;
const SEED: u64 = 0x5eed_0001;

type Outcome = Result<String, String>;

fn r(p: i64, q: i64) -> Rational {
    Rational::new(p, q)
}

/// The tent `(1 - |t - 1|) h`.
fn tent(h: i64) -> PLFunction {
    PLFunction::new(vec![(r(0, 1), r(0, 1)), (r(1, 1), r(h, 1)), (r(2, 1), r(0, 1))]).unwrap()
}

fn show(f: &PLFunction) -> String {
    let pts: Vec<String> = f.breakpoints().iter().map(|(t, v)| format!("({t},{v})")).collect();
    pts.join(" ")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(budget: Duration, elapsed: Duration) -> Result<(), String> {
    ensure(elapsed < budget, || format!("took {elapsed:.2?}, budget {budget:?}"))
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn random_unit_rational(rng: &mut StdRng) -> Rational {
    let q = rng.gen_range(2..=24);
    r(rng.gen_range(1..q), q)
}

/// Per-diagram results shared between criteria, computed on first use.
struct Cache {
    opts: Options,
    entries: Vec<DatasetEntry>,
    reduced: BTreeMap<String, FilteredUComplex>,
    upsilon: BTreeMap<String, PLFunction>,
}

impl Cache {
    fn reduced(&mut self, e: &DatasetEntry) -> Result<&FilteredUComplex, String> {
        if !self.reduced.contains_key(&e.name) {
            let c = build_quotient_complex(&e.grid, self.opts.cap).map_err(|err| format!("{}: {err}", e.name))?;
            self.reduced.insert(e.name.clone(), reduce(&c));
        }
        Ok(&self.reduced[&e.name])
    }

    fn upsilon(&mut self, e: &DatasetEntry) -> Result<PLFunction, String> {
        if let Some(f) = self.upsilon.get(&e.name) {
            return Ok(f.clone());
        }
        let f = upsilon_function(self.reduced(e)?).map_err(|err| format!("{}: {err}", e.name))?;
        self.upsilon.insert(e.name.clone(), f.clone());
        Ok(f)
    }

    fn entry(&self, name: &str) -> Result<DatasetEntry, String> {
        self.entries.iter().find(|e| e.name == name).cloned().ok_or_else(|| format!("no dataset entry {name}"))
    }
}

fn unknot() -> Outcome {
    let start = Instant::now();
    let g = GridDiagram::new(vec![0, 1], vec![1, 0]).unwrap();
    let f = pipeline::upsilon(&g, Options::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(f == PLFunction::zero(), || format!("Υ = {}", show(&f)))?;
    ensure(tau(&f) == 0, || format!("τ = {}", tau(&f)))?;
    within(UNKNOT_BUDGET, elapsed)?;
    Ok(format!("Υ ≡ 0, τ = 0 in {elapsed:.2?}"))
}

fn trefoil() -> Outcome {
    let start = Instant::now();
    let g = GridDiagram::new(vec![1, 2, 3, 4, 0], vec![4, 0, 1, 2, 3]).unwrap();
    let f = pipeline::upsilon(&g, Options::default()).map_err(|e| e.to_string())?;
    let m = pipeline::upsilon(&g.reflect_horizontal(), Options::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let eps = [1, -1].into_iter().find(|&e| f == tent(e)).ok_or_else(|| format!("Υ = {}", show(&f)))?;
    ensure(m == tent(-eps), || format!("mirror Υ = {}", show(&m)))?;
    ensure(tau(&f).abs() == 1 && tau(&m) == -tau(&f), || format!("τ = {}, mirror τ = {}", tau(&f), tau(&m)))?;
    within(TREFOIL_BUDGET, elapsed)?;
    let signed = |e: i64| if e > 0 { "t" } else { "-t" };
    Ok(format!("Υ = {} on [0,1], mirror {}, τ = {} in {elapsed:.2?}", signed(eps), signed(-eps), tau(&f)))
}

fn figure_eight(cache: &mut Cache) -> Outcome {
    let e = cache.entry("figure8")?;
    let start = Instant::now();
    let cert = certify(&e, cache.opts.cap).map_err(|err| err.to_string())?;
    let f = pipeline::upsilon(&e.grid, cache.opts).map_err(|err| err.to_string())?;
    let elapsed = start.elapsed();
    ensure(cert.alexander.coefficients() == vec![-1, 3, -1], || format!("Δ = {}", cert.alexander))?;
    ensure(f == PLFunction::zero(), || format!("Υ = {}", show(&f)))?;
    ensure(tau(&f) == 0, || format!("τ = {}", tau(&f)))?;
    ensure(cert.thin_diagonal == Some(0), || format!("diagonals {:?}", cert.tilde.diagonals()))?;
    within(FIGURE8_BUDGET, elapsed)?;
    Ok(format!("Δ = {}, Υ ≡ 0, τ = 0, thin on δ = 0 in {elapsed:.2?}", cert.alexander))
}

fn alternating(cache: &mut Cache) -> Outcome {
    let start = Instant::now();
    let knots: Vec<DatasetEntry> =
        cache.entries.iter().filter(|e| e.has_tag("alternating") && e.grid.n() <= 8).cloned().collect();
    ensure(knots.len() >= 7, || format!("only {} alternating knots bundled", knots.len()))?;
    let mut seen = Vec::new();
    for e in &knots {
        let cert = certify(e, cache.opts.cap).map_err(|err| err.to_string())?;
        let delta = cert
            .thin_diagonal
            .ok_or_else(|| format!("{}: not thin, diagonals {:?}", e.name, cert.tilde.diagonals()))?;
        let sigma = 2 * delta as i64;
        let f = cache.upsilon(e)?;
        ensure(f == tent(sigma / 2), || format!("{}: σ = {sigma}, Υ = {}", e.name, show(&f)))?;
        seen.push(format!("{} σ={sigma}", e.name));
    }
    let elapsed = start.elapsed();
    within(ALTERNATING_BUDGET, elapsed)?;
    Ok(format!("{} in {elapsed:.2?}", seen.join(", ")))
}

fn mirror(cache: &mut Cache) -> Outcome {
    for e in cache.entries.clone() {
        let f = cache.upsilon(&e)?;
        let m = pipeline::upsilon(&e.grid.reflect_horizontal(), cache.opts).map_err(|err| err.to_string())?;
        if let Some(t) = m.first_difference(&f.neg()) {
            return Err(format!("{}: mirror differs from -Υ at t = {t}", e.name));
        }
    }
    Ok(format!("Υ(G*) = -Υ(G) on {} diagrams", cache.entries.len()))
}

fn census(cache: &mut Cache) -> Outcome {
    let mut checked = 0;
    for e in cache.entries.clone() {
        let n = e.grid.n();
        let f = cache.upsilon(&e)?;
        let raw = build_quotient_complex(&e.grid, cache.opts.cap).map_err(|err| err.to_string())?;
        for (p, q) in CENSUS_TS {
            let t = r(p, q);
            let b = homology_at_t(&t_modify(&raw, t).map_err(|err| err.to_string())?);
            let ups = f.value(t).unwrap();
            let mut got = b.infinite_gradings();
            got.sort();
            let mut want: Vec<Rational> =
                (0..n).flat_map(|i| std::iter::repeat_n(ups + (t - 1) * i as i64, binomial(n - 1, i))).collect();
            want.sort();
            ensure(got.len() == 1 << (n - 1), || format!("{} at t = {t}: {} infinite bars", e.name, got.len()))?;
            ensure(got == want, || format!("{} at t = {t}: gradings {got:?}", e.name))?;
            checked += 1;
        }
    }
    Ok(format!("2^(n-1) bars at Υ(t) + i(t-1), multiplicity C(n-1,i): {checked} (diagram, t) pairs"))
}

fn reduction(cache: &mut Cache) -> Outcome {
    let mut names = Vec::new();
    for e in cache.entries.clone().iter().filter(|e| e.grid.n() <= RAW_MAX_N) {
        let raw = build_quotient_complex(&e.grid, cache.opts.cap).map_err(|err| err.to_string())?;
        let f_raw = upsilon_function(&raw).map_err(|err| err.to_string())?;
        let f = cache.upsilon(e)?;
        ensure(f_raw == f, || format!("{}: raw {} vs reduced {}", e.name, show(&f_raw), show(&f)))?;
        names.push(e.name.clone());
    }
    Ok(format!("raw = reduced on {}", names.join(", ")))
}

fn oracle(cache: &mut Cache, rng: &mut StdRng) -> Outcome {
    let ts: Vec<Rational> = (0..ORACLE_SAMPLES).map(|_| random_unit_rational(rng)).collect();
    for e in cache.entries.clone() {
        let c = cache.reduced(&e)?;
        for &t in &ts {
            let ct = t_modify(c, t).map_err(|err| err.to_string())?;
            let brute = brute_force_homology_at_t(&ct).map_err(|err| format!("{} at t = {t}: {err}", e.name))?;
            ensure(homology_at_t(&ct) == brute, || format!("{} at t = {t}: bar summaries differ", e.name))?;
        }
    }
    let shown: Vec<String> = ts.iter().map(Rational::to_string).collect();
    Ok(format!("bar summaries equal on {} reduced complexes at t = {}", cache.entries.len(), shown.join(", ")))
}

fn structural(cache: &mut Cache) -> Outcome {
    for e in cache.entries.clone() {
        let raw = build_quotient_complex(&e.grid, cache.opts.cap).map_err(|err| err.to_string())?;
        raw.check_invariants().map_err(|err| format!("{} raw: {err}", e.name))?;
        let red = cache.reduced(&e)?.clone();
        red.check_invariants().map_err(|err| format!("{} reduced: {err}", e.name))?;
        let tilde = build_tilde_complex(&e.grid, cache.opts.cap).map_err(|err| err.to_string())?;
        tilde.check_invariants().map_err(|err| format!("{} tilde: {err}", e.name))?;
        let dim = tilde_homology_of(&tilde).total();
        ensure(red.len() == dim, || format!("{}: reduced rank {} vs tilde dim {dim}", e.name, red.len()))?;
        for (p, q) in CENSUS_TS {
            let ct = t_modify(&red, r(p, q)).map_err(|err| err.to_string())?;
            ensure(ct.is_homogeneous() && ct.exponents_nonnegative() && ct.is_d_squared_zero(), || {
                format!("{}: t-modified complex at t = {p}/{q} is malformed", e.name)
            })?;
        }
    }
    let opts = cache.opts;
    let chain = |g: GridDiagram, rows: &[usize]| -> Result<Vec<PLFunction>, String> {
        let mut g = g;
        let mut out = vec![pipeline::upsilon(&g, opts).map_err(|e| e.to_string())?];
        for &row in rows {
            g = g.stabilize(row).map_err(|e| e.to_string())?;
            out.push(pipeline::upsilon(&g, opts).map_err(|e| e.to_string())?);
        }
        Ok(out)
    };
    let unknot = chain(cache.entry("unknot2")?.grid, &[0, 1])?;
    ensure(unknot.iter().all(|f| *f == PLFunction::zero()), || "unknot chain changed Υ".into())?;
    let trefoil = cache.entry("trefoil5")?.grid;
    for row in 0..trefoil.n() {
        let fs = chain(trefoil.clone(), &[row])?;
        ensure(fs[1] == fs[0], || format!("trefoil stabilized at row {row}: {}", show(&fs[1])))?;
    }
    Ok(format!(
        "∂² = 0, homogeneity, filtration, reduced rank = dim tilde on {} diagrams; stabilization 2→3→4, 5→6",
        cache.entries.len()
    ))
}

fn endpoints_and_symmetry(cache: &mut Cache) -> Outcome {
    for e in cache.entries.clone() {
        let f = cache.upsilon(&e)?;
        for g in [f.clone(), f.neg()] {
            ensure(g.value(r(0, 1)) == Some(r(0, 1)) && g.value(r(2, 1)) == Some(r(0, 1)), || {
                format!("{}: Υ(0), Υ(2) = {:?}, {:?}", e.name, g.value(r(0, 1)), g.value(r(2, 1)))
            })?;
            if let Some(t) = g.asymmetry() {
                return Err(format!("{}: Υ({t}) != Υ(2 - {t})", e.name));
            }
        }
    }
    Ok(format!("Υ(0) = Υ(2) = 0, Υ(t) = Υ(2-t) on {} diagrams and mirrors", cache.entries.len()))
}

fn additivity(cache: &mut Cache) -> Outcome {
    let base = cache.upsilon(&cache.entry("trefoil5")?)?;
    let mut done = Vec::new();
    for (name, want) in [("granny8", base.scale(2)), ("square8", PLFunction::zero())] {
        let e = cache.entry(name)?;
        certify(&e, cache.opts.cap).map_err(|err| err.to_string())?;
        let f = cache.upsilon(&e)?;
        ensure(f == want, || format!("{name}: Υ = {}, expected {}", show(&f), show(&want)))?;
        done.push(format!("{name} (n = {})", e.grid.n()));
    }
    Ok(format!("Υ(3_1 # 3_1) = 2Υ(3_1), Υ(3_1 # m(3_1)) = 0 on {}", done.join(", ")))
}

fn direct_evaluation(cache: &mut Cache, rng: &mut StdRng) -> Outcome {
    for e in cache.entries.clone() {
        let f = cache.upsilon(&e)?;
        let c = cache.reduced(&e)?;
        for _ in 0..DIRECT_SAMPLES {
            let t = random_unit_rational(rng);
            let direct = upsilon_at(c, t).map_err(|err| err.to_string())?;
            ensure(f.value(t) == Some(direct), || {
                format!("{} at t = {t}: PL {:?} vs direct {direct}", e.name, f.value(t))
            })?;
        }
    }
    Ok(format!("PL function = direct evaluation at {DIRECT_SAMPLES} random t on {} diagrams", cache.entries.len()))
}

fn run(label: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
        Err(format!("panicked: {}", msg.unwrap_or_default()))
    });
    let secs = start.elapsed().as_secs_f64();
    match &outcome {
        Ok(msg) => println!("PASS  {label:<22} {msg}  [{secs:.1} s]"),
        Err(msg) => println!("FAIL  {label:<22} {msg}  [{secs:.1} s]"),
    }
    outcome.is_ok()
}

fn main() -> ExitCode {
    let stress = std::env::var("GRIDUPS_STRESS").is_ok_and(|v| v == "1");
    let ds = Dataset::bundled().expect("bundled dataset loads");
    let cap = SizeCap::new(if stress { 10 } else { 8 });
    let entries: Vec<DatasetEntry> = ds.entries().iter().filter(|e| stress || e.tier == Tier::Ci).cloned().collect();
    let skipped: Vec<&str> =
        ds.entries().iter().filter(|e| !stress && e.tier != Tier::Ci).map(|e| e.name.as_str()).collect();
    println!("acceptance: {} diagrams, cap n <= {}", entries.len(), cap.max_n);
    if !skipped.is_empty() {
        println!("stress tier skipped ({}); set GRIDUPS_STRESS=1 to include", skipped.join(", "));
    }
    let mut cache = Cache { opts: Options::with_cap(cap), entries, reduced: BTreeMap::new(), upsilon: BTreeMap::new() };
    let mut rng = StdRng::seed_from_u64(SEED);

    let results = [
        run(" 1 unknot", unknot),
        run(" 2 trefoil", trefoil),
        run(" 3 figure-eight", || figure_eight(&mut cache)),
        run(" 4 alternating", || alternating(&mut cache)),
        run(" 5 mirror", || mirror(&mut cache)),
        run(" 6 infinite bars", || census(&mut cache)),
        run(" 7 reduction", || reduction(&mut cache)),
        run(" 8 oracle", || oracle(&mut cache, &mut rng)),
        run(" 9 structure", || structural(&mut cache)),
        run("10 endpoints/symmetry", || endpoints_and_symmetry(&mut cache)),
        run("11 additivity", || additivity(&mut cache)),
        run("   direct evaluation", || direct_evaluation(&mut cache, &mut rng)),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

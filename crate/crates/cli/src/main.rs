use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;

use gridups::checks::{check_additivity, check_properties, CheckConfig, CheckOutcome, Property, Status};
use gridups::dataset::{bundled_dir, Dataset};
use gridups::grid::{parse_grid, GridDiagram};
use gridups::io::{BarsJson, GridJson, PLJson};
use gridups::limits::{SizeCap, DEFAULT_MAX_N};
use gridups::oracle::{alexander_from_euler, tilde_homology, BigradedDims};
use gridups::pipeline::{self, Options};
use gridups::rational::{parse_rational, Rational};
use gridups::upsilon::{tau, upsilon_function, PLFunction};
use gridups::{Error, ErrorKind};

#[derive(Parser)]
#[command(name = "gridups", version, about = "Exact grid-homology Upsilon invariant of knots")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct CapArgs {
    /// Largest grid size to accept (default: $GRIDUPS_MAX_N or 9).
    #[arg(long, value_name = "N")]
    max_n: Option<usize>,
}

impl CapArgs {
    fn cap(self) -> SizeCap {
        self.max_n.map(SizeCap::new).unwrap_or_else(|| SizeCap::from_env_or(DEFAULT_MAX_N))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse a grid, check it is a knot, and print its Alexander polynomial.
    Validate {
        path: PathBuf,
        #[command(flatten)]
        cap: CapArgs,
    },
    /// Υ at one t, or the whole piecewise-linear function.
    Upsilon {
        path: PathBuf,
        /// Evaluate at this t in [0, 2], written p/q.
        #[arg(long, value_name = "P/Q", conflicts_with = "full")]
        t: Option<String>,
        /// Print all breakpoints, slopes and τ (the default).
        #[arg(long)]
        full: bool,
        #[arg(long)]
        json: bool,
        /// Print `t,value` rows at N + 1 evenly spaced points of [0, 2].
        #[arg(long, value_name = "N", conflicts_with_all = ["t", "json"])]
        csv: Option<usize>,
        /// Skip the filtered cancellation step.
        #[arg(long)]
        no_reduce: bool,
        #[command(flatten)]
        cap: CapArgs,
    },
    /// τ, Υ, tilde grid homology, thinness, Alexander polynomial, determinant.
    Invariants {
        path: PathBuf,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        cap: CapArgs,
    },
    /// Bar decomposition of the homology of the t-modified complex.
    Homology {
        path: PathBuf,
        #[arg(long, value_name = "P/Q")]
        t: String,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        no_reduce: bool,
        #[command(flatten)]
        cap: CapArgs,
    },
    /// Check endpoint, symmetry, mirror, stabilization and additivity
    /// properties of Υ across the dataset.
    Checks {
        /// Restrict to these properties.
        #[arg(long, value_name = "PROPERTY")]
        only: Vec<Property>,
        /// Restrict to these dataset entries.
        #[arg(long, value_name = "NAME")]
        knot: Vec<String>,
        /// Rows at which to stabilize.
        #[arg(long, value_name = "ROW", default_values_t = [0])]
        stabilize_row: Vec<usize>,
        #[arg(long, value_name = "DIR")]
        data: Option<PathBuf>,
        #[command(flatten)]
        cap: CapArgs,
    },
    /// The bundled knot table.
    Dataset {
        #[command(subcommand)]
        command: DatasetCommand,
    },
}

#[derive(Subcommand)]
enum DatasetCommand {
    /// List entries with their recorded invariants.
    List {
        #[arg(long, value_name = "DIR")]
        data: Option<PathBuf>,
    },
}

/// A failed run: message for stderr plus exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e.kind() {
            ErrorKind::Validation => 1,
            ErrorKind::CapExceeded => 2,
            ErrorKind::Internal => 3,
        };
        Failure { code, message: e.to_string() }
    }
}

fn fail<E: Into<Error>>(e: E) -> Failure {
    Failure::from(e.into())
}

fn load_grid(path: &Path) -> Result<GridDiagram, Failure> {
    let text = std::fs::read_to_string(path).map_err(|source| fail(Error::Io { path: path.to_path_buf(), source }))?;
    let g = if path.extension().is_some_and(|e| e == "json") {
        let j: GridJson = serde_json::from_str(&text).map_err(fail)?;
        GridDiagram::try_from(j).map_err(fail)?
    } else {
        parse_grid(&text).map_err(fail)?
    };
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned());
    Ok(match (g.name().is_none(), stem) {
        (true, Some(stem)) => g.with_name(stem),
        _ => g,
    })
}

fn parse_t(s: &str) -> Result<Rational, Failure> {
    let t = parse_rational(s).map_err(fail)?;
    if t < Rational::from_integer(0) || t > Rational::from_integer(2) {
        return Err(Failure { code: 1, message: format!("t = {t} is outside [0, 2]") });
    }
    Ok(t)
}

fn load_dataset(data: Option<PathBuf>) -> Result<Dataset, Failure> {
    Dataset::load(data.unwrap_or_else(bundled_dir)).map_err(fail)
}

fn options(cap: CapArgs, no_reduce: bool) -> Options {
    Options { cap: cap.cap(), reduce: !no_reduce, verify: true }
}

fn format_pl(f: &PLFunction) -> String {
    f.breakpoints().iter().map(|(t, v)| format!("({t}, {v})")).collect::<Vec<_>>().join(" ")
}

fn poincare(h: &BigradedDims) -> String {
    let terms: Vec<String> = h
        .terms()
        .into_iter()
        .rev()
        .map(|(m, a, d)| if d == 1 { format!("u^{m}q^{a}") } else { format!("{d}u^{m}q^{a}") })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn validate(path: &Path, cap: CapArgs) -> Result<String, Failure> {
    let g = load_grid(path)?;
    let h = tilde_homology(&g, cap.cap()).map_err(fail)?;
    let delta = alexander_from_euler(&h, g.n()).map_err(fail)?;
    let mut out = format!("ok: {}\nn = {}\nΔ = {}\ndet = {}\n", path.display(), g.n(), delta, delta.determinant());
    match h.thin_diagonal() {
        Some(d) => writeln!(out, "thin on δ = {d}, σ = {}", 2 * d).unwrap(),
        None => writeln!(out, "not thin (diagonals {:?})", h.diagonals()).unwrap(),
    }
    Ok(out)
}

fn upsilon_cmd(
    path: &Path,
    t: Option<String>,
    json: bool,
    csv: Option<usize>,
    no_reduce: bool,
    cap: CapArgs,
) -> Result<String, Failure> {
    let g = load_grid(path)?;
    let c = pipeline::complex(&g, options(cap, no_reduce)).map_err(fail)?;
    if let Some(t) = t {
        let t = parse_t(&t)?;
        let v = pipeline::upsilon_at_t(&c, t).map_err(fail)?;
        return Ok(if json {
            format!("{}\n", json!({ "t": t.to_string(), "v": v.to_string() }))
        } else {
            format!("{v}\n")
        });
    }
    let f = upsilon_function(&c).map_err(fail)?;
    if let Some(samples) = csv {
        return Ok(gridups::io::pl_csv(&f, samples));
    }
    if json {
        return Ok(format!("{}\n", serde_json::to_string_pretty(&PLJson::from(&f)).unwrap()));
    }
    let slopes: Vec<String> = f.slopes().iter().map(Rational::to_string).collect();
    Ok(format!("breakpoints: {}\nslopes: {}\ntau: {}\n", format_pl(&f), slopes.join(" "), tau(&f)))
}

fn invariants_cmd(path: &Path, json: bool, cap: CapArgs) -> Result<String, Failure> {
    let g = load_grid(path)?;
    let inv = pipeline::invariants(&g, options(cap, false)).map_err(fail)?;
    if json {
        let tilde: Vec<_> = inv.tilde.terms().into_iter().map(|(m, a, d)| json!({"M": m, "A": a, "dim": d})).collect();
        let j = json!({
            "n": inv.n,
            "tau": inv.tau,
            "upsilon": PLJson::from(&inv.upsilon),
            "alexander": inv.alexander.coefficients(),
            "determinant": inv.determinant,
            "thin_diagonal": inv.thin_diagonal,
            "tilde": tilde,
        });
        return Ok(format!("{}\n", serde_json::to_string_pretty(&j).unwrap()));
    }
    let thin = match inv.thin_diagonal {
        Some(d) => format!("yes, δ = {d} (σ = {})", 2 * d),
        None => format!("no, diagonals {:?}", inv.tilde.diagonals()),
    };
    Ok(format!(
        "n            {}\ntau          {}\nupsilon      {}\nalexander    {}\ndeterminant  {}\nthin         {}\ntilde GH     {}\n",
        inv.n,
        inv.tau,
        format_pl(&inv.upsilon),
        inv.alexander,
        inv.determinant,
        thin,
        poincare(&inv.tilde),
    ))
}

fn homology_cmd(path: &Path, t: &str, json: bool, no_reduce: bool, cap: CapArgs) -> Result<String, Failure> {
    let g = load_grid(path)?;
    let t = parse_t(t)?;
    if t > Rational::from_integer(1) {
        return Err(Failure { code: 1, message: "homology is computed for t in [0, 1]".into() });
    }
    let b = pipeline::bars(&g, t, options(cap, no_reduce)).map_err(fail)?;
    if json {
        return Ok(format!("{}\n", serde_json::to_string_pretty(&BarsJson::from(&b)).unwrap()));
    }
    let mut out = format!("t = {}\n", b.t);
    for bar in b.bars() {
        writeln!(out, "{:>8} {}", bar.g, bar.len).unwrap();
    }
    writeln!(out, "free summands: {}", b.infinite_count()).unwrap();
    Ok(out)
}

fn checks_cmd(
    only: Vec<Property>,
    knots: Vec<String>,
    rows: Vec<usize>,
    data: Option<PathBuf>,
    cap: CapArgs,
) -> Result<(String, bool), Failure> {
    let ds = load_dataset(data)?;
    for k in &knots {
        if ds.get(k).is_none() {
            return Err(Failure { code: 1, message: format!("no dataset entry named `{k}`") });
        }
    }
    let cfg = CheckConfig {
        options: options(cap, false),
        properties: if only.is_empty() { Property::ALL.into_iter().collect() } else { only.into_iter().collect() },
        stabilize_rows: rows,
    };
    let selected: Vec<_> = ds.within(cfg.options.cap).filter(|e| knots.is_empty() || knots.contains(&e.name)).collect();
    let reports = selected
        .par_iter()
        .map(|e| check_properties(&e.grid, &cfg))
        .collect::<Result<Vec<_>, Error>>()
        .map_err(fail)?;

    let mut lines: Vec<(String, CheckOutcome)> = Vec::new();
    for r in &reports {
        lines.extend(r.outcomes.iter().map(|o| (r.name.clone(), o.clone())));
    }
    if cfg.properties.contains(&Property::Additivity) {
        for triple in ds.triples() {
            let parts = [&triple.summands[0], &triple.summands[1], &triple.sum];
            if !knots.is_empty() && !parts.iter().any(|p| knots.iter().any(|k| p.contains(k.as_str()))) {
                continue;
            }
            let grids = parts.iter().map(|p| ds.resolve(p)).collect::<Result<Vec<_>, _>>().map_err(fail)?;
            let subject = format!("{} + {} = {}", parts[0], parts[1], parts[2]);
            if let Some(g) = grids.iter().find(|g| cfg.options.cap.check(g.n()).is_err()) {
                let status = Status::Skipped(format!("n = {} exceeds the size cap", g.n()));
                lines.push((triple.name.clone(), CheckOutcome { property: Property::Additivity, subject, status }));
                continue;
            }
            let fs = grids
                .par_iter()
                .map(|g| pipeline::upsilon(g, cfg.options))
                .collect::<Result<Vec<_>, Error>>()
                .map_err(fail)?;
            lines.push((triple.name.clone(), check_additivity(&subject, &fs[0], &fs[1], &fs[2])));
        }
    }
    let failed = lines.iter().filter(|(_, o)| !o.passed()).count();
    let mut out = String::new();
    for (name, o) in &lines {
        writeln!(out, "{name:<10} {o}").unwrap();
    }
    writeln!(out, "{} checks, {} failed", lines.len(), failed).unwrap();
    Ok((out, failed == 0))
}

fn dataset_list(data: Option<PathBuf>) -> Result<String, Failure> {
    let ds = load_dataset(data)?;
    let mut out = format!("{:<10} {:>2}  {:<6} {:>3}  {:<28} {}\n", "name", "n", "tier", "σ", "Δ", "tags");
    for e in ds.entries() {
        let sigma = e.signature.map_or("-".to_string(), |s| s.to_string());
        let tier = format!("{:?}", e.tier).to_lowercase();
        writeln!(
            out,
            "{:<10} {:>2}  {:<6} {:>3}  {:<28} {}",
            e.name,
            e.grid.n(),
            tier,
            sigma,
            e.alexander.to_string(),
            e.tags.join(",")
        )
        .unwrap();
    }
    for t in ds.triples() {
        writeln!(out, "triple {}: {} # {} = {}", t.name, t.summands[0], t.summands[1], t.sum).unwrap();
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<(String, bool), Failure> {
    let ok = |s: String| Ok((s, true));
    match cli.command {
        Command::Validate { path, cap } => ok(validate(&path, cap)?),
        Command::Upsilon { path, t, full: _, json, csv, no_reduce, cap } => {
            ok(upsilon_cmd(&path, t, json, csv, no_reduce, cap)?)
        }
        Command::Invariants { path, json, cap } => ok(invariants_cmd(&path, json, cap)?),
        Command::Homology { path, t, json, no_reduce, cap } => ok(homology_cmd(&path, &t, json, no_reduce, cap)?),
        Command::Checks { only, knot, stabilize_row, data, cap } => checks_cmd(only, knot, stabilize_row, data, cap),
        Command::Dataset { command: DatasetCommand::List { data } } => ok(dataset_list(data)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok((out, passed)) => {
            print!("{out}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

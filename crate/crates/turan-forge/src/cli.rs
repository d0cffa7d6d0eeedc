//! Command-line interface.
//!
//! Exit codes: 0 success, 1 verification failure (a claimed-forbidden structure was
//! found, or a tester failed), 2 usage or input error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use turan_forge_core::embeddings::{
    check_regularity_exhaustive, max_fiber_exhaustive, prime_power_embedding, veronese_full, veronese_regular,
};
use turan_forge_core::theta::is_odd_prime;
use turan_forge_core::{
    admissible_tuples, build_graph, check_kst_bound, find_kst, girth, grid_dimension, max_codegree,
    test_nondegeneracy, test_regularity, theta_poly, ConstructionSpec, Family, InnerProductMode, PolyMap,
};

use crate::formats::{parse_edge_list, parse_map, parse_poly_list, write_edge_list, write_map, WitnessJson};
use crate::report::{report_for, ReportOptions, TimingJson};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable overriding the worker count.
pub const THREADS_ENV: &str = "TURAN_FORGE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "turan-forge", version, about = "Algebraic extremal graph constructions and grid checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a construction and write its edge list.
    Construct(ConstructArgs),
    /// Search an edge list for a grid and evaluate the counting bound.
    Check(CheckArgs),
    /// Print the support of theta and the grid dimensions it certifies.
    Theta(ThetaArgs),
    /// Build a polynomial embedding and run its testers.
    Embed(EmbedArgs),
    /// Build a construction and emit a JSON verification report.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Generic,
    Explicit,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    /// er, brown[:alpha], norm[:s], projnorm[:s], wenger[:t], inner[:s[:mode[:seed]]], custom
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub alpha: Option<u64>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Equations of a custom family, separated by `---` lines.
    #[arg(long)]
    pub equations: Option<PathBuf>,
    /// Coordinates per side of a custom family.
    #[arg(long)]
    pub dim: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Grid sides `s,t`.
    #[arg(long, value_parser = parse_pair)]
    pub forbid: (usize, usize),
    #[arg(long, default_value_t = turan_forge_core::gridsearch::DEFAULT_BUDGET)]
    pub budget: u64,
    /// Random left subsets for a codegree estimate; 0 skips it.
    #[arg(long, default_value_t = 0)]
    pub sample: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Compute the girth (always done for Wenger edge lists).
    #[arg(long)]
    pub girth: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ThetaArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 1_000)]
    pub max_dim: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EmbedKind {
    /// All monomials of degree at most `d` in `s` variables.
    Veronese,
    /// Random projection of the Veronese map into `(s+1) t` coordinates.
    Regular,
    /// Laurent map with distinct prime exponents.
    PrimePower,
    /// A map read from `--map`.
    File,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    #[arg(long, value_enum)]
    pub kind: EmbedKind,
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = 1)]
    pub s: usize,
    #[arg(long)]
    pub d: Option<u32>,
    /// Regularity order; for `file` maps selects the regularity tester.
    #[arg(long)]
    pub t: Option<usize>,
    /// Target dimension of the prime-power map.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 1_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Check every point subset or every linear system instead of sampling.
    #[arg(long)]
    pub exhaustive: bool,
    #[arg(long)]
    pub map: Option<PathBuf>,
    /// Write the map itself here.
    #[arg(long)]
    pub map_out: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, value_parser = parse_pair)]
    pub forbid: Option<(usize, usize)>,
    #[arg(long, default_value_t = turan_forge_core::gridsearch::DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, default_value_t = 0)]
    pub sample: usize,
    /// Include wall-clock timings (the report is then no longer reproducible).
    #[arg(long)]
    pub timing: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected `s,t`")?;
    let a: usize = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b: usize = b.trim().parse().map_err(|e| format!("{e}"))?;
    if a == 0 || b == 0 {
        return Err("grid sides must be positive".into());
    }
    Ok((a, b))
}

fn param<T: std::str::FromStr>(parts: &[&str], i: usize, flag: Option<T>, name: &str) -> Result<T> {
    match parts.get(i) {
        Some(v) => v.parse().map_err(|_| anyhow!("bad {name} in family tag: {v:?}")),
        None => flag.ok_or_else(|| anyhow!("family needs {name} (tag suffix or --{name})")),
    }
}

/// Turns `--family` and the parameter flags into a construction spec.
pub fn family_spec(a: &FamilyArgs) -> Result<ConstructionSpec> {
    let parts: Vec<&str> = a.family.split(':').collect();
    let family = match parts[0] {
        "er" => Family::ErdosRenyi,
        "brown" => Family::BrownSphere {
            alpha: param(&parts, 1, a.alpha.or(Some(1)), "alpha")?,
        },
        "norm" => Family::NormGraph {
            s: param(&parts, 1, a.s, "s")?,
        },
        "projnorm" => Family::ProjNormGraph {
            s: param(&parts, 1, a.s, "s")?,
        },
        "wenger" => Family::Wenger {
            t: param(&parts, 1, a.t, "t")?,
        },
        "inner" => {
            let mode = match parts.get(2) {
                Some(&"generic") => InnerProductMode::Generic,
                Some(&"explicit") => InnerProductMode::Explicit,
                Some(m) => bail!("unknown inner-product mode {m:?}"),
                None => match a.mode.unwrap_or(ModeArg::Generic) {
                    ModeArg::Generic => InnerProductMode::Generic,
                    ModeArg::Explicit => InnerProductMode::Explicit,
                },
            };
            Family::InnerProduct {
                s: param(&parts, 1, a.s, "s")?,
                mode,
                seed: param(&parts, 3, Some(a.seed), "seed")?,
            }
        }
        "custom" => {
            let dim = param(&parts, 1, a.dim, "dim")?;
            let path = a.equations.as_ref().ok_or_else(|| anyhow!("custom family needs --equations"))?;
            let equations = parse_poly_list(&read(path)?, 2 * dim, None)?;
            Family::Custom { equations, side_dim: dim }
        }
        other => bail!("unknown family {other:?}"),
    };
    Ok(ConstructionSpec::new(family, a.p))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value serializes");
    s.push('\n');
    s
}

fn construct(a: &ConstructArgs) -> Result<i32> {
    let spec = family_spec(&a.family)?;
    let result = build_graph(&spec)?;
    emit(a.out.as_deref(), &write_edge_list(&result.graph, spec.p, &spec.family.tag()))?;
    if a.out.is_some() {
        eprintln!(
            "{}: {}+{} vertices, {} edges",
            spec.family.tag(),
            result.graph.left_size(),
            result.graph.right_size(),
            result.graph.edge_count()
        );
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct CheckReport {
    family: String,
    p: u64,
    left: usize,
    right: usize,
    edges: usize,
    forbid: [usize; 2],
    found: Option<WitnessJson>,
    subsets_examined: u64,
    exhaustive: bool,
    kst_bound: crate::report::KstBoundJson,
    codegree: Option<crate::report::CodegreeJson>,
    girth: Option<usize>,
}

fn check(a: &CheckArgs) -> Result<i32> {
    let list = parse_edge_list(&read(&a.input)?)?;
    let g = &list.graph;
    let (s, t) = a.forbid;
    let outcome = find_kst(g, s, t, a.budget);
    let kst = check_kst_bound(g, s, t);
    let wenger_t: Option<usize> = list.family.strip_prefix("wenger:").and_then(|t| t.parse().ok());
    let girth = (a.girth || wenger_t.is_some()).then(|| girth(g)).flatten();
    let codegree = (a.sample > 0 && g.left_size() >= s).then(|| crate::report::CodegreeJson {
        s,
        sample: a.sample,
        max: max_codegree(g, s, a.sample, a.seed),
    });
    let short_cycle = matches!((wenger_t, girth), (Some(t), Some(g)) if g <= 2 * t);
    let failed = outcome.found.is_some() || short_cycle;
    let report = CheckReport {
        family: list.family.clone(),
        p: list.p,
        left: g.left_size(),
        right: g.right_size(),
        edges: g.edge_count(),
        forbid: [s, t],
        found: outcome.found.as_ref().map(WitnessJson::from),
        subsets_examined: outcome.subsets_examined,
        exhaustive: outcome.exhaustive,
        kst_bound: crate::report::KstBoundJson {
            s,
            t,
            lhs: kst.lhs.to_string(),
            rhs: kst.rhs.to_string(),
            holds: kst.holds,
        },
        codegree,
        girth,
    };
    emit(a.out.as_deref(), &json(&report))?;
    Ok(if failed { EXIT_VERIFICATION } else { EXIT_OK })
}

#[derive(Serialize)]
struct ThetaReport {
    p: u64,
    k: usize,
    degree: u64,
    sign_normalized: bool,
    support: Vec<Vec<u32>>,
    minimal_tuples: Vec<Vec<u64>>,
    d: Option<u64>,
}

fn theta(a: &ThetaArgs) -> Result<i32> {
    if !is_odd_prime(a.p) {
        bail!("--p must be an odd prime");
    }
    if a.max_dim == 0 {
        bail!("--max-dim must be positive");
    }
    let th = theta_poly(a.p, a.k)?;
    let report = ThetaReport {
        p: a.p,
        k: a.k,
        degree: th.degree(),
        sign_normalized: th.sign_normalized,
        support: th.support(),
        minimal_tuples: admissible_tuples(&th, a.max_dim).into_iter().map(|d| d.dims).collect(),
        d: if a.k == 2 { Some(grid_dimension(a.p)?) } else { None },
    };
    emit(a.out.as_deref(), &json(&report))?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct RegularityReport {
    kind: &'static str,
    s: usize,
    n: usize,
    p: u64,
    t: usize,
    exhaustive: bool,
    checked: u64,
    pass: bool,
    failure: Option<FailureJson>,
    seed: u64,
    projection_resamples: Option<u32>,
}

#[derive(Serialize)]
struct FailureJson {
    points: Vec<Vec<u64>>,
    rank: usize,
    seed: Option<u64>,
}

#[derive(Serialize)]
struct FiberReport {
    kind: &'static str,
    s: usize,
    n: usize,
    p: u64,
    exhaustive: bool,
    trials: usize,
    max_fiber: usize,
    order_bound: String,
    pass: bool,
    worst_forms: Vec<Vec<u64>>,
    seed: u64,
}

fn regularity_report(
    kind: &'static str,
    map: &PolyMap,
    t: usize,
    a: &EmbedArgs,
    resamples: Option<u32>,
) -> Result<(RegularityReport, bool)> {
    let (checked, failure) = if a.exhaustive {
        let r = check_regularity_exhaustive(map, t, a.p)?;
        (r.subsets_checked, r.failure.map(|w| (w.points, w.rank, w.seed)))
    } else {
        let ws = test_regularity(map, t, a.p, a.trials, a.seed)?;
        let fail = ws.into_iter().find(|w| !w.pass);
        (a.trials as u64, fail.map(|w| (w.points, w.rank, w.seed)))
    };
    let pass = failure.is_none();
    Ok((
        RegularityReport {
            kind,
            s: map.s(),
            n: map.n(),
            p: a.p,
            t,
            exhaustive: a.exhaustive,
            checked,
            pass,
            failure: failure.map(|(points, rank, seed)| FailureJson { points, rank, seed }),
            seed: a.seed,
            projection_resamples: resamples,
        },
        pass,
    ))
}

fn fiber_report(kind: &'static str, map: &PolyMap, bound: Option<String>, a: &EmbedArgs) -> Result<(FiberReport, bool)> {
    let (max, forms) = if a.exhaustive {
        let (max, w) = max_fiber_exhaustive(map, a.p)?;
        (max, w.forms)
    } else {
        let (max, ws) = test_nondegeneracy(map, a.p, a.trials, a.seed)?;
        let worst = ws.into_iter().find(|w| w.count == max).map(|w| w.forms).unwrap_or_default();
        (max, worst)
    };
    let pass = match &bound {
        Some(b) => b.parse::<u128>().map_or(true, |b| max as u128 <= b),
        None => true,
    };
    Ok((
        FiberReport {
            kind,
            s: map.s(),
            n: map.n(),
            p: a.p,
            exhaustive: a.exhaustive,
            trials: if a.exhaustive { 0 } else { a.trials },
            max_fiber: max,
            order_bound: bound.unwrap_or_default(),
            pass,
            worst_forms: forms,
            seed: a.seed,
        },
        pass,
    ))
}

fn embed(a: &EmbedArgs) -> Result<i32> {
    if a.s == 0 {
        bail!("--s must be positive");
    }
    let (text, map, pass) = match a.kind {
        EmbedKind::Veronese => {
            let d = a.d.ok_or_else(|| anyhow!("veronese needs --d"))?;
            let map = veronese_full(a.s, d);
            let t = a.t.unwrap_or(d as usize + 1);
            let (r, pass) = regularity_report("veronese", &map, t, a, None)?;
            (json(&r), map, pass)
        }
        EmbedKind::Regular => {
            let t = a.t.ok_or_else(|| anyhow!("regular needs --t"))?;
            let d = a.d.unwrap_or(t.saturating_sub(1) as u32);
            let reg = veronese_regular(a.s, t, d, a.seed, Some(a.p))?;
            let (r, pass) = regularity_report("regular", &reg.map, t, a, Some(reg.resamples))?;
            (json(&r), reg.map, pass)
        }
        EmbedKind::PrimePower => {
            let n = a.n.unwrap_or(a.s * (a.s + 1));
            let (map, assignment, bound) = prime_power_embedding(a.s, n)?;
            if assignment.max_prime() >= a.p {
                bail!("largest exponent {} is not below p = {}", assignment.max_prime(), a.p);
            }
            let (r, pass) = fiber_report("prime-power", &map, Some(bound.to_string()), a)?;
            (json(&r), map, pass)
        }
        EmbedKind::File => {
            let path = a.map.as_ref().ok_or_else(|| anyhow!("file kind needs --map"))?;
            let map = parse_map(&read(path)?)?;
            let (text, pass) = match a.t {
                Some(t) => {
                    let (r, pass) = regularity_report("file", &map, t, a, None)?;
                    (json(&r), pass)
                }
                None => {
                    let (r, pass) = fiber_report("file", &map, None, a)?;
                    (json(&r), pass)
                }
            };
            (text, map, pass)
        }
    };
    if let Some(path) = &a.map_out {
        emit(Some(path), &write_map(&map))?;
    }
    emit(a.out.as_deref(), &text)?;
    Ok(if pass { EXIT_OK } else { EXIT_VERIFICATION })
}

fn report(a: &ReportArgs) -> Result<i32> {
    let spec = family_spec(&a.family)?;
    if matches!(spec.family, Family::Custom { .. }) && a.forbid.is_none() {
        bail!("custom families need --forbid");
    }
    let opts = ReportOptions {
        forbid: a.forbid,
        budget: a.budget,
        sample: a.sample,
        seed: a.family.seed,
        timing: a.timing,
    };
    let start = std::time::Instant::now();
    let result = build_graph(&spec)?;
    let construct_ms = start.elapsed().as_millis();
    let mut r = report_for(&result, &opts)?;
    if a.timing {
        r.timing = Some(TimingJson {
            construct_ms,
            verify_ms: start.elapsed().as_millis() - construct_ms,
        });
    }
    emit(a.out.as_deref(), &r.to_json())?;
    Ok(if r.failed() { EXIT_VERIFICATION } else { EXIT_OK })
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| anyhow!("{THREADS_ENV} must be a positive integer, got {v:?}"))?;
        // a pool may already exist when run() is called twice in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Runs the CLI on `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let outcome = configure_threads().and_then(|()| match &cli.command {
        Command::Construct(a) => construct(a),
        Command::Check(a) => check(a),
        Command::Theta(a) => theta(a),
        Command::Embed(a) => embed(a),
        Command::Report(a) => report(a),
    });
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_USAGE
        }
    }
}

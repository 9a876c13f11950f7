//! Argument parsing and the subcommands.

use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mixsmooth_core::approximation::{jackson_rhs, realization_rhs, realization_terms};
use mixsmooth_core::corpus::{random_member, DEFAULT_BAND};
use mixsmooth_core::counterexamples::{
    block_norm_profile, build, divergence_scan, witness_spaces, DivergenceReport, Family, LacunaryFamilySpec,
};
use mixsmooth_core::embedding::{ExtRational, Status};
use mixsmooth_core::lorentz::lorentz_norm;
use mixsmooth_core::smoothness::{full_modulus, mixed_modulus, mixed_modulus_checked, DyadicModulusTable, ModulusParams, DEFAULT_H_GRID};
use mixsmooth_core::space_norms::{
    besov_norm_blocks, besov_norm_modulus, j_norm, j_norm_from_levels, omega_norm, omega_norm_from_table, SpaceParams,
    SquareFunctionLevels, Theta,
};
use mixsmooth_core::{DyadicIndex, Error as CoreError, GridSpec, LorentzParams, SpectralRep};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::fnspec::{load_fn, LoadedFn};
use crate::output::{csv_num, emit, emit_json, json_num, json_nums, norm_report_json, theta_json, verdict_json};
use crate::query::{decide, load_query};

#[derive(Debug, Parser)]
#[command(name = "mixsmooth", version, about = "Norms, moduli of smoothness and embedding decisions for mixed-smoothness spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Lipschitz (Ω or J form) or Besov (block or modulus form) norm as JSON.
    Norm(NormArgs),
    /// Mixed or full modulus of smoothness as JSON.
    Modulus(ModulusArgs),
    /// Modulus at steps pi/n against its realization and Jackson bounds.
    Realize(RealizeArgs),
    /// Energy and Lorentz norm of every dyadic block as CSV.
    Blocks(BlocksArgs),
    /// Ω versus J norms over a seeded random corpus as CSV.
    EquivScan(EquivArgs),
    /// Embedding decisions.
    Embed {
        #[command(subcommand)]
        command: EmbedCommand,
    },
    /// Counterexample experiments.
    Sharpness {
        #[command(subcommand)]
        command: SharpnessCommand,
    },
}

#[derive(Debug, Subcommand)]
enum EmbedCommand {
    /// Decide the query in a JSON file and print the verdict.
    Decide {
        #[arg(long)]
        query: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum SharpnessCommand {
    /// Build a witness series and scan its norm series, or fit a block-norm profile.
    Run(SharpnessArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SpaceKind {
    Lip,
    Besov,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Form {
    Omega,
    J,
    Blocks,
    Modulus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModulusKind {
    Mixed,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CorpusKind {
    Random,
}

#[derive(Debug, Args)]
struct LorentzArgs {
    #[arg(long)]
    p: f64,
    #[arg(long)]
    tau: f64,
}

impl LorentzArgs {
    fn params(&self) -> Result<LorentzParams> {
        Ok(LorentzParams::new(self.p, self.tau)?)
    }
}

fn parse_theta(s: &str) -> std::result::Result<Theta, String> {
    match s {
        "inf" | "infinity" | "∞" => Ok(Theta::Infinite),
        _ => {
            let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number or `inf`"))?;
            Theta::new(v).map_err(|e| e.to_string())
        }
    }
}

#[derive(Debug, Args)]
struct NormArgs {
    /// Function-spec JSON.
    #[arg(long = "fn")]
    function: PathBuf,
    #[arg(long, value_enum)]
    space: SpaceKind,
    #[arg(long, value_enum)]
    form: Form,
    #[command(flatten)]
    lorentz: LorentzArgs,
    #[arg(long, value_parser = parse_theta)]
    theta: Theta,
    /// Lipschitz smoothness, or the modulus order of the Besov modulus form.
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    alpha: Vec<f64>,
    /// Log exponent: `Lip^(alpha, -b)` or `S^(r, b + xi) B`.
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    b: Vec<f64>,
    /// Besov smoothness.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    r: Option<Vec<f64>>,
    /// Shift added to the Besov log exponent.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    xi: Option<Vec<f64>>,
    /// Levels `L` of the outer series; defaults to `min(6, K - 2)`.
    #[arg(long)]
    levels: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_H_GRID)]
    h_grid: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ModulusArgs {
    #[arg(long = "fn")]
    function: PathBuf,
    #[arg(long, value_enum, default_value = "mixed")]
    kind: ModulusKind,
    #[arg(long, value_delimiter = ',', required = true)]
    alpha: Vec<f64>,
    /// Step bounds in radians, one per axis (or one for all).
    #[arg(long, value_delimiter = ',', required = true)]
    t: Vec<f64>,
    #[command(flatten)]
    lorentz: LorentzArgs,
    #[arg(long, default_value_t = DEFAULT_H_GRID)]
    h_grid: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RealizeArgs {
    #[arg(long = "fn")]
    function: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    alpha: Vec<f64>,
    /// Orders `n_j >= 1`; the modulus is taken at `t_j = pi / n_j`.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<u64>,
    #[command(flatten)]
    lorentz: LorentzArgs,
    #[arg(long, default_value_t = DEFAULT_H_GRID)]
    h_grid: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BlocksArgs {
    #[arg(long = "fn")]
    function: PathBuf,
    #[command(flatten)]
    lorentz: LorentzArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EquivArgs {
    #[arg(long, value_enum, default_value = "random")]
    corpus: CorpusKind,
    #[arg(long, default_value_t = 50)]
    count: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long = "K", default_value_t = 9)]
    k: u32,
    #[arg(long, default_value_t = 6)]
    levels: u32,
    /// Largest `|n_j|` carrying a random coefficient.
    #[arg(long, default_value_t = DEFAULT_BAND)]
    band: i64,
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    #[arg(long, default_value_t = 2.0)]
    tau: f64,
    #[arg(long, value_parser = parse_theta, default_value = "1")]
    theta: Theta,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    alpha: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "2")]
    b: Vec<f64>,
    #[arg(long, default_value_t = DEFAULT_H_GRID)]
    h_grid: usize,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the band summary as JSON.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SharpnessArgs {
    /// Query JSON whose verdict supplies the witness; not used for `lemma61`.
    #[arg(long)]
    query: Option<PathBuf>,
    /// Family id; defaults to the witness family.
    #[arg(long)]
    family: Option<String>,
    /// `auto` takes the midpoint of the witness window.
    #[arg(long, default_value = "auto", allow_negative_numbers = true)]
    delta: String,
    /// Exponent on the other axes of the shift families.
    #[arg(long, allow_negative_numbers = true)]
    t: Option<f64>,
    #[arg(long = "K", default_value_t = 20)]
    k: u32,
    #[arg(long)]
    s_max: Option<u32>,
    /// Dimension, for `lemma61`.
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// For `lemma61`.
    #[arg(long)]
    p: Option<f64>,
    /// For `lemma61`.
    #[arg(long)]
    tau: Option<f64>,
    /// For `lemma61`.
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<f64>>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A hypothesis of the requested decision failed; distinct from bad input.
#[derive(Debug)]
struct OutsideHypotheses(String);

impl fmt::Display for OutsideHypotheses {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "outside hypotheses: {}", self.0)
    }
}

impl std::error::Error for OutsideHypotheses {}

fn exit_code(e: &anyhow::Error) -> i32 {
    if e.downcast_ref::<OutsideHypotheses>().is_some() {
        return 2;
    }
    match e.downcast_ref::<CoreError>() {
        Some(CoreError::TrivialSpace { .. } | CoreError::HypothesisViolation { .. }) => 2,
        _ => 1,
    }
}

/// Parses `args` and runs the subcommand; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Norm(a) => norm(a),
        Command::Modulus(a) => modulus(a),
        Command::Realize(a) => realize(a),
        Command::Blocks(a) => blocks(a),
        Command::EquivScan(a) => equiv_scan(a),
        Command::Embed {
            command: EmbedCommand::Decide { query, out },
        } => embed_decide(&query, out.as_deref()),
        Command::Sharpness {
            command: SharpnessCommand::Run(a),
        } => sharpness(a),
    }
}

/// Repeats a single value across `m` axes.
fn per_axis<T: Copy>(v: &[T], m: usize, name: &str) -> Result<Vec<T>> {
    match v.len() {
        1 => Ok(vec![v[0]; m]),
        n if n == m => Ok(v.to_vec()),
        n => bail!("--{name} has {n} values for a {m}-dimensional function"),
    }
}

fn grid_json(spec: GridSpec) -> Value {
    json!({ "m": spec.dim(), "K": spec.level(), "points": spec.len() })
}

/// Loads and projects to zero mean, the setting every norm here assumes.
fn load_projected(path: &Path) -> Result<(LoadedFn, SpectralRep, f64)> {
    let loaded = load_fn(path)?;
    let projected = loaded.rep.project_zero_mean();
    let dropped = loaded.rep.energy() - projected.energy();
    Ok((loaded, projected, dropped))
}

fn projection_json(dropped: f64) -> Value {
    json!({ "zero_mean_projection": true, "dropped_energy": json_num(dropped.max(0.0)) })
}

fn norm(a: NormArgs) -> Result<()> {
    let (loaded, c, dropped) = load_projected(&a.function)?;
    let spec = c.spec();
    let m = spec.dim();
    let lp = a.lorentz.params()?;
    let alpha = per_axis(&a.alpha, m, "alpha")?;
    let b = per_axis(&a.b, m, "b")?;
    let levels = a.levels.unwrap_or_else(|| 6.min(spec.level() - 2));
    let (sp, report) = match (a.space, a.form) {
        (SpaceKind::Lip, Form::Omega | Form::J) => {
            let sp = SpaceParams::lipschitz(alpha, b, a.theta, levels)?.with_h_grid(a.h_grid);
            let r = if a.form == Form::Omega { omega_norm(&c, &sp, lp)? } else { j_norm(&c, &sp, lp)? };
            (sp, r)
        }
        (SpaceKind::Besov, Form::Blocks | Form::Modulus) => {
            let r = per_axis(a.r.as_deref().ok_or_else(|| anyhow!("--r is required for Besov norms"))?, m, "r")?;
            let xi = match &a.xi {
                Some(x) => per_axis(x, m, "xi")?,
                None => vec![0.0; m],
            };
            let sp = SpaceParams::besov(r, b, a.theta, levels, alpha)?.with_xi(xi)?.with_h_grid(a.h_grid);
            let rep = if a.form == Form::Blocks { besov_norm_blocks(&c, &sp, lp)? } else { besov_norm_modulus(&c, &sp, lp)? };
            (sp, rep)
        }
        (s, f) => bail!("form {f:?} does not apply to space {s:?}"),
    };
    let out = json!({
        "command": "norm",
        "config": {
            "grid": grid_json(spec),
            "function": loaded.file,
            "space": format!("{:?}", a.space).to_lowercase(),
            "form": format!("{:?}", a.form).to_lowercase(),
            "p": lp.p(), "tau": lp.tau(), "theta": theta_json(sp.theta),
            "alpha": json_nums(&sp.alpha), "b": json_nums(&sp.b), "r": json_nums(&sp.r), "xi": json_nums(&sp.xi),
            "levels": sp.max_level, "h_grid": sp.h_grid,
            "projection": projection_json(dropped),
        },
        "report": norm_report_json(&report),
    });
    emit_json(a.out.as_deref(), &out)
}

fn modulus(a: ModulusArgs) -> Result<()> {
    let (loaded, c, dropped) = load_projected(&a.function)?;
    let spec = c.spec();
    let m = spec.dim();
    let lp = a.lorentz.params()?;
    let result = match a.kind {
        ModulusKind::Mixed => {
            let mp = ModulusParams::new(per_axis(&a.alpha, m, "alpha")?, per_axis(&a.t, m, "t")?, a.h_grid)?;
            let est = mixed_modulus_checked(&c, &mp, lp)?;
            json!({ "value": json_num(est.value), "refined": json_num(est.refined), "unresolved": est.unresolved })
        }
        ModulusKind::Full => {
            if a.alpha.len() != 1 || a.t.len() != 1 {
                bail!("the full modulus takes a single --alpha and a single --t");
            }
            json!({ "value": json_num(full_modulus(&c, a.alpha[0], a.t[0], lp, a.h_grid)?) })
        }
    };
    let out = json!({
        "command": "modulus",
        "config": {
            "grid": grid_json(spec), "function": loaded.file,
            "kind": format!("{:?}", a.kind).to_lowercase(),
            "alpha": json_nums(&a.alpha), "t": json_nums(&a.t),
            "p": lp.p(), "tau": lp.tau(), "h_grid": a.h_grid,
            "projection": projection_json(dropped),
        },
        "result": result,
    });
    emit_json(a.out.as_deref(), &out)
}

fn realize(a: RealizeArgs) -> Result<()> {
    let (loaded, c, dropped) = load_projected(&a.function)?;
    let spec = c.spec();
    let m = spec.dim();
    let lp = a.lorentz.params()?;
    let alpha = per_axis(&a.alpha, m, "alpha")?;
    let n = per_axis(&a.n, m, "n")?;
    let t: Vec<f64> = n.iter().map(|&nj| std::f64::consts::PI / nj.max(1) as f64).collect();
    let omega = mixed_modulus(&c, &ModulusParams::new(alpha.clone(), t.clone(), a.h_grid)?, lp)?;
    let terms = realization_terms(&c, &n, &alpha, lp)?;
    let rhs = realization_rhs(&c, &n, &alpha, lp)?;
    let jackson = jackson_rhs(&c, &n, &alpha, lp)?;
    let out = json!({
        "command": "realize",
        "config": {
            "grid": grid_json(spec), "function": loaded.file,
            "alpha": json_nums(&alpha), "n": n, "t": json_nums(&t),
            "p": lp.p(), "tau": lp.tau(), "h_grid": a.h_grid,
            "projection": projection_json(dropped),
        },
        "result": {
            "modulus": json_num(omega),
            "realization_rhs": json_num(rhs),
            "realization_terms": terms.iter().map(|(e, v)| json!({ "axes": e.axes().collect::<Vec<_>>(), "value": json_num(*v) })).collect::<Vec<_>>(),
            "jackson_rhs": json_num(jackson),
            "ratio": json_num(omega / rhs),
        },
    });
    emit_json(a.out.as_deref(), &out)
}

/// Every multi-index in `[1, hi]^m`, last axis fastest.
fn block_indices(m: usize, hi: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (1..=hi).map(move |s| {
                    let mut v = prefix.clone();
                    v.push(s);
                    v
                })
            })
            .collect();
    }
    out
}

fn blocks(a: BlocksArgs) -> Result<()> {
    let loaded = load_fn(&a.function)?;
    let c = &loaded.rep;
    let spec = c.spec();
    let lp = a.lorentz.params()?;
    let m = spec.dim();
    let mut csv = format!(
        "# mixsmooth blocks m={} K={} p={} tau={}\n",
        m,
        spec.level(),
        csv_num(lp.p()),
        csv_num(lp.tau())
    );
    let header: Vec<String> = (1..=m).map(|j| format!("s_{j}")).chain(["energy".into(), "lorentz_norm".into()]).collect();
    csv.push_str(&header.join(","));
    csv.push('\n');
    for s in block_indices(m, spec.max_block()) {
        let block = c.dyadic_block(&DyadicIndex(s.clone()))?;
        let norm = if block.max_abs() == 0.0 { 0.0 } else { lorentz_norm(&block.synthesize()?, lp) };
        let cells: Vec<String> = s.iter().map(|v| v.to_string()).chain([csv_num(block.energy()), csv_num(norm)]).collect();
        csv.push_str(&cells.join(","));
        csv.push('\n');
    }
    emit(a.out.as_deref(), &csv)
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("MIXSMOOTH_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| anyhow!("MIXSMOOTH_THREADS must be a positive integer, got {v:?}"))?;
        if n == 0 {
            bail!("MIXSMOOTH_THREADS must be a positive integer");
        }
        builder = builder.num_threads(n);
    }
    builder.build().context("starting worker threads")
}

fn equiv_scan(a: EquivArgs) -> Result<()> {
    let CorpusKind::Random = a.corpus;
    let spec = GridSpec::new(a.m, a.k)?;
    let lp = LorentzParams::new(a.p, a.tau)?;
    let alpha = per_axis(&a.alpha, a.m, "alpha")?;
    let b = per_axis(&a.b, a.m, "b")?;
    let sp = SpaceParams::lipschitz(alpha.clone(), b.clone(), a.theta, a.levels)?.with_h_grid(a.h_grid);
    sp.check_nontrivial()?;
    let pool = thread_pool()?;
    let rows: Vec<(usize, f64, f64)> = pool.install(|| {
        (0..a.count)
            .into_par_iter()
            .map(|id| -> Result<(usize, f64, f64)> {
                let c = random_member(spec, a.band, a.seed, id as u64)?;
                let table = DyadicModulusTable::compute(&c, &alpha, &[lp], a.levels, a.h_grid)?;
                let base = lorentz_norm(&c.synthesize()?, lp);
                let omega = omega_norm_from_table(base, &table, 0, &sp)?.value;
                let sq = SquareFunctionLevels::compute(&c, &alpha, &[lp])?;
                let j = j_norm_from_levels(&sq, 0, &sp)?.value;
                Ok((id, omega, j))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let mut rows = rows;
    rows.sort_by_key(|r| r.0);
    let config = format!(
        "# mixsmooth equiv-scan corpus=random seed={} count={} m={} K={} levels={} band={} p={} tau={} theta={} alpha={:?} b={:?} h_grid={}",
        a.seed,
        a.count,
        a.m,
        a.k,
        a.levels,
        a.band,
        csv_num(a.p),
        csv_num(a.tau),
        match a.theta {
            Theta::Finite(t) => csv_num(t),
            Theta::Infinite => "inf".into(),
        },
        alpha,
        b,
        a.h_grid
    );
    let mut csv = format!("{config}\nid,omega,j,ratio\n");
    let ratios: Vec<f64> = rows.iter().map(|r| r.1 / r.2).collect();
    for (r, ratio) in rows.iter().zip(&ratios) {
        csv.push_str(&format!("{},{},{},{}\n", r.0, csv_num(r.1), csv_num(r.2), csv_num(*ratio)));
    }
    emit(a.out.as_deref(), &csv)?;
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let band_c = hi.max(1.0 / lo);
    eprintln!("ratio band: min {lo:.6e}, max {hi:.6e}, C = {band_c:.6e} (seed {})", a.seed);
    if let Some(path) = &a.summary {
        let s = json!({
            "command": "equiv-scan",
            "seed": a.seed, "count": a.count, "m": a.m, "K": a.k, "levels": a.levels, "band": a.band,
            "p": a.p, "tau": a.tau, "theta": theta_json(a.theta), "alpha": json_nums(&alpha), "b": json_nums(&b), "h_grid": a.h_grid,
            "ratio_min": json_num(lo), "ratio_max": json_num(hi), "band_c": json_num(band_c),
        });
        emit_json(Some(path), &s)?;
    }
    Ok(())
}

fn embed_decide(path: &Path, out: Option<&Path>) -> Result<()> {
    let q = load_query(path)?;
    let v = decide(&q);
    let mut body = verdict_json(&v);
    body["decision"] = Value::String(q.decision.as_str().into());
    body["query"] = q.raw.clone();
    emit_json(out, &body)?;
    if v.status == Status::OutsideHypotheses {
        return Err(OutsideHypotheses(v.reason.unwrap_or_default()).into());
    }
    Ok(())
}

fn scan_rows(side: &str, r: &DivergenceReport, csv: &mut String) {
    let kind = match r.kind {
        mixsmooth_core::counterexamples::SeriesKind::JLevels => "j_levels",
        mixsmooth_core::counterexamples::SeriesKind::BesovBlocks => "besov_blocks",
    };
    for ((i, t), s) in r.truncations.iter().zip(&r.terms).zip(&r.partial_sums) {
        csv.push_str(&format!(
            "{side},{kind},{i},{},{},{},{},{}\n",
            csv_num(*t),
            csv_num(*s),
            csv_num(r.growth_exponent),
            csv_num(r.last_ratio),
            r.trend.as_str()
        ));
    }
}

fn sharpness(a: SharpnessArgs) -> Result<()> {
    let family: Option<Family> = a.family.as_deref().map(str::parse).transpose()?;
    if family == Some(Family::BlockProfile) {
        return block_profile(&a);
    }
    let path = a.query.as_ref().ok_or_else(|| anyhow!("--query is required for witness families"))?;
    let q = load_query(path)?;
    let verdict = decide(&q);
    let witness = verdict.witness.as_ref();
    let delta_auto = a.delta == "auto";
    if delta_auto {
        match verdict.status {
            Status::Fails => {}
            Status::Holds => bail!("the embedding holds, so there is no witness; pass a numeric --delta to probe a family"),
            Status::OutsideHypotheses => return Err(OutsideHypotheses(verdict.reason.clone().unwrap_or_default()).into()),
        }
    }
    let family = match (family, witness) {
        (Some(f), Some(w)) if delta_auto && f != w.family => bail!("--family {f} does not match the witness family {}", w.family),
        (Some(f), _) => f,
        (None, Some(w)) => w.family,
        (None, None) => bail!("--family is required when the verdict carries no witness"),
    };
    let grid = GridSpec::new(q.params.alpha.as_ref().map_or(1, |v| v.len()), a.k)?;
    let same_family = witness.filter(|w| w.family == family);
    let spec = if delta_auto {
        LacunaryFamilySpec::from_witness(witness.expect("checked"), &q.params, a.s_max)?
    } else {
        let delta: f64 = a.delta.parse().map_err(|_| anyhow!("--delta must be `auto` or a number"))?;
        let axis = same_family.map(|w| w.axis).or(q.params.j0).unwrap_or(0);
        let t = match (a.t, same_family.and_then(|w| w.aux_t.as_ref())) {
            (Some(t), _) => t,
            (None, Some(t)) => ExtRational::Finite(t.clone()).to_f64(),
            (None, None) => q.params.theta.as_ref().and_then(|t| t.recip()).map_or(1.0, |it| ExtRational::Finite(it).to_f64() + 1.0),
        };
        let xi = same_family.and_then(|w| w.xi.as_deref());
        LacunaryFamilySpec::from_params(family, axis, delta, t, xi, &q.params, a.s_max)?
    };
    let spec = match a.t {
        Some(t) => LacunaryFamilySpec { t_aux: t, ..spec },
        None => spec,
    };
    let xi = same_family.and_then(|w| w.xi.as_deref());
    let spaces = witness_spaces(family, xi, &q.params, 2)?;
    let lip = divergence_scan(&spec, grid, &spaces.lip, spaces.lip_lp)?;
    let besov = divergence_scan(&spec, grid, &spaces.besov, spaces.besov_lp)?;
    let mut csv = format!(
        "# mixsmooth sharpness family={} axis={} delta={} t={} K={} s_max={} divergent_side={} verdict={} query={}\n",
        family,
        spec.axis,
        csv_num(spec.delta),
        csv_num(spec.t_aux),
        a.k,
        lip.s_max,
        spaces.divergent.as_str(),
        verdict.status.as_str(),
        q.raw
    );
    csv.push_str("side,series,index,term,partial_sum,fitted_exponent,last_ratio,trend\n");
    scan_rows("lip", &lip, &mut csv);
    scan_rows("besov", &besov, &mut csv);
    emit(a.out.as_deref(), &csv)?;
    eprintln!(
        "lip: {} (last ratio {:.6}); besov: {} (last ratio {:.6}); expected divergence on the {} side",
        lip.trend.as_str(),
        lip.last_ratio,
        besov.trend.as_str(),
        besov.last_ratio,
        spaces.divergent.as_str()
    );
    Ok(())
}

fn block_profile(a: &SharpnessArgs) -> Result<()> {
    let p = a.p.ok_or_else(|| anyhow!("--p is required for lemma61"))?;
    let tau = a.tau.ok_or_else(|| anyhow!("--tau is required for lemma61"))?;
    let delta: f64 = a.delta.parse().map_err(|_| anyhow!("lemma61 needs a numeric --delta"))?;
    let alpha = per_axis(a.alpha.as_deref().unwrap_or(&[1.0]), a.m, "alpha")?;
    let lp = LorentzParams::new(p, tau)?;
    let grid = GridSpec::new(a.m, a.k)?;
    let mut spec = LacunaryFamilySpec::simple(Family::BlockProfile, 0, delta, alpha.clone(), p);
    spec.s_max = a.s_max;
    let c = build(&spec, grid)?;
    let prof = block_norm_profile(&c, &alpha, lp, 0)?;
    let predicted = -(delta - 1.0 / tau);
    let mut csv = format!(
        "# mixsmooth sharpness family=lemma61 m={} K={} p={} tau={} delta={} alpha={:?} predicted_slope={}\nlevel,value,fitted_slope\n",
        a.m,
        a.k,
        csv_num(p),
        csv_num(tau),
        csv_num(delta),
        alpha,
        csv_num(predicted)
    );
    for (l, v) in &prof.levels {
        csv.push_str(&format!("{l},{},{}\n", csv_num(*v), csv_num(prof.slope)));
    }
    emit(a.out.as_deref(), &csv)?;
    eprintln!("fitted slope {:.6}, predicted {:.6}", prof.slope, predicted);
    Ok(())
}

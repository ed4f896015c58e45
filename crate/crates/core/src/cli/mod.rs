//! The `twobridge` command line: one subcommand per experiment, JSON or
//! CSV artifacts, exit code 0 / 1 / 2 for pass / invariant failure /
//! usage error.

mod config;
mod output;

pub use config::{parse_int_range, parse_knot, RunConfig};
pub use output::{fmt_f64, to_csv, to_json, Cell, NonFinite};

use std::f64::consts::PI;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::hnn::{self, criterion_check, decide_equivalent, HnnVerdict, HnnWord};
use crate::holonomy::{
    asymptotics_check, cusp_parameter, geometric_rep, normalize_peripheral, prop42_table, riley_polynomial,
    solve_fillings, solve_parabolic, two_bridge_presentation, CuspData, FilledRep, HolonomyError, Prop42Row,
    TwoBridgeKnot, DEFAULT_T0,
};
use crate::nielsen::Pair;
use crate::pairs::{
    commutator_check, conjugacy_trace_scan, gamma_audit_at_least_n, PairsError, PositiveWordSpec, GAMMA_BETA,
    GAMMA_T0,
};
use crate::pwgeo::{empirical_constants_with, PwGeoError, DEFAULT_SAMPLES, DEFAULT_SEGMENTS};
use crate::words::{apply_moves, ball_search, is_basis, is_primitive, parse_pair, Word};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_INVARIANT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "twobridge", version, about = "Generating pairs, tubes and Dehn fillings of 2-bridge knot groups")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Flat JSON config; flags override its entries.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Artifact path (stdout when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Pass threshold for residual checks.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for randomized commands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Horoball height of the cusp.
    #[arg(long, global = true)]
    pub t0: Option<f64>,
}

#[derive(Debug, Args, Default)]
pub struct KnotOpts {
    /// Knot `p/q`.
    #[arg(long)]
    pub knot: Option<String>,
    /// Filling parameters, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<i64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Presentation, longitude and Riley polynomial.
    Knot {
        #[arg(long)]
        knot: Option<String>,
    },
    /// Roots of the Riley polynomial and the cusp parameter.
    Parabolic {
        #[arg(long)]
        knot: Option<String>,
    },
    /// Solve the (1, n) fillings.
    Fill(KnotOpts),
    /// Tube-boundary lengths of `l^N m^k` as CSV.
    Table {
        #[command(flatten)]
        opts: KnotOpts,
        #[arg(long = "N", value_delimiter = ',', allow_negative_numbers = true)]
        big_n: Vec<i64>,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<String>,
    },
    /// Limits of `Re v`, `Re u` and `|v| cosh r` as `n` grows.
    Asymptotics(KnotOpts),
    /// Generating pairs `(m, g l^N)` of the filled groups.
    #[command(subcommand)]
    Pairs(PairsCommand),
    /// Grid search for path constants `(B, α)`.
    Lemma31 {
        #[arg(long, default_value_t = 0.5)]
        xi: f64,
        #[arg(long, value_delimiter = ',')]
        b_grid: Vec<f64>,
        /// Angles in units of π.
        #[arg(long, value_delimiter = ',')]
        alpha_grid: Vec<f64>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEGMENTS)]
        segments: usize,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Nielsen equivalence in F(a, b).
    #[command(subcommand)]
    Nielsen(NielsenCommand),
    /// Pairs in the group `<x, y | y x y⁻¹ = x²>`.
    #[command(subcommand)]
    Hnn(HnnCommand),
}

#[derive(Debug, Subcommand)]
pub enum PairsCommand {
    /// Traces of `[m, g l^N]` across `N`.
    Commutator {
        #[command(flatten)]
        opts: KnotOpts,
        #[arg(long = "N", value_delimiter = ',', allow_negative_numbers = true)]
        big_n: Vec<i64>,
    },
    /// Trace margins between `g l^N` and `g l^{N' + kn}`.
    Scan {
        #[command(flatten)]
        opts: KnotOpts,
        #[arg(long = "N", value_delimiter = ',', allow_negative_numbers = true)]
        big_n: Vec<i64>,
        #[arg(long = "N-prime", default_value_t = 5)]
        big_n_prime: i64,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<String>,
    },
    /// Piecewise-geodesic audit for positive words.
    Gamma {
        #[command(flatten)]
        opts: KnotOpts,
        /// Exponents `b_1,…,b_s`; repeat for several words.
        #[arg(long)]
        spec: Vec<String>,
        #[arg(long, default_value_t = GAMMA_BETA)]
        beta: f64,
        #[arg(long = "max-N", default_value_t = 200)]
        max_n: i64,
        #[arg(long, default_value_t = 10)]
        k_max: i64,
    },
}

#[derive(Debug, Subcommand)]
pub enum NielsenCommand {
    /// Is the word part of a basis?
    Primitive { word: String },
    /// Is the pair `u,v` a basis?
    Basis { pair: String },
    /// Shortest sequence of elementary moves between two pairs.
    Search {
        from: String,
        to: String,
        #[arg(long, default_value_t = 8)]
        radius: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum HnnCommand {
    /// Does `(x', y') = (g x^ε g⁻¹, g y^η x^k g⁻¹)` hold?
    Check {
        target: String,
        #[arg(long, default_value = "")]
        g: String,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        k: i64,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        eps: i8,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        eta: i8,
    },
    /// Bounded search for a witness between two pairs.
    Decide {
        from: String,
        to: String,
        #[arg(long, default_value_t = 3)]
        radius: usize,
        #[arg(long, default_value_t = 3)]
        k_bound: i64,
    },
}

/// Flags merged over the config file.
#[derive(Clone, Debug)]
struct Settings {
    config: RunConfig,
    tol: f64,
    seed: u64,
    out: Option<PathBuf>,
}

impl Settings {
    fn knot(&self, flag: &Option<String>) -> Result<TwoBridgeKnot, Failure> {
        let s = flag.clone().or_else(|| self.config.knot.clone()).unwrap_or_else(|| "5/3".into());
        let (p, q) = parse_knot(&s).map_err(Failure::Usage)?;
        two_bridge_presentation(p, q).map_err(|e| Failure::Usage(e.to_string()))
    }

    fn ns(&self, flag: &[i64], default: &[i64]) -> Vec<i64> {
        pick(flag, &self.config.n, default)
    }

    fn big_ns(&self, flag: &[i64], default: &[i64]) -> Vec<i64> {
        pick(flag, &self.config.big_n, default)
    }

    fn ks(&self, flag: &Option<String>, default: &str) -> Result<Vec<i64>, Failure> {
        let s = flag.clone().or_else(|| self.config.k.clone()).unwrap_or_else(|| default.into());
        parse_int_range(&s).map_err(Failure::Usage)
    }

    fn t0(&self, flag: Option<f64>, default: f64) -> f64 {
        flag.or(self.config.t0).unwrap_or(default)
    }
}

fn pick(flag: &[i64], cfg: &Option<Vec<i64>>, default: &[i64]) -> Vec<i64> {
    if !flag.is_empty() {
        flag.to_vec()
    } else {
        cfg.clone().unwrap_or_else(|| default.to_vec())
    }
}

enum Failure {
    Usage(String),
    Invariant(Value),
}

impl From<HolonomyError> for Failure {
    fn from(e: HolonomyError) -> Failure {
        match e {
            HolonomyError::InvalidNormalForm(msg) => Failure::Usage(msg),
            other => Failure::Invariant(json!({"invariant": "solver", "error": other.to_string()})),
        }
    }
}

impl From<PairsError> for Failure {
    fn from(e: PairsError) -> Failure {
        Failure::Invariant(json!({"invariant": "pairs", "error": e.to_string()}))
    }
}

enum Artifact {
    Json(Value),
    Csv(String),
}

/// Accumulates named invariant checks of one run.
#[derive(Default)]
struct Checks(Vec<Value>);

impl Checks {
    fn check(&mut self, name: &str, ok: bool, detail: Value) {
        if !ok {
            self.0.push(json!({"invariant": name, "detail": detail}));
        }
    }
}

fn value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types always serialize")
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli) {
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Invariant(diag)) => {
            let _ = writeln!(stderr, "{diag}");
            EXIT_INVARIANT
        }
        Ok((settings, artifact, checks)) => {
            let text = match artifact {
                Artifact::Json(v) => to_json(&v),
                Artifact::Csv(s) => Ok(s),
            };
            let text = match text {
                Ok(t) => t,
                Err(NonFinite) => {
                    let _ = writeln!(stderr, "{}", json!({"invariant": "finite_output"}));
                    return EXIT_INVARIANT;
                }
            };
            let written = match &settings.out {
                Some(path) => std::fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(msg) = written {
                let _ = writeln!(stderr, "error: {msg}");
                return EXIT_USAGE;
            }
            if checks.0.is_empty() {
                EXIT_PASS
            } else {
                let _ = writeln!(stderr, "{}", Value::Array(checks.0));
                EXIT_INVARIANT
            }
        }
    }
}

fn settings(global: &GlobalOpts) -> Result<Settings, Failure> {
    let config = match &global.config {
        Some(path) => RunConfig::load(path).map_err(Failure::Usage)?,
        None => RunConfig::default(),
    };
    let tol = global.tol.or(config.tol).unwrap_or(DEFAULT_TOL);
    if !(tol > 0.0) {
        return Err(Failure::Usage(format!("tolerance must be positive, got {tol}")));
    }
    if let Some(t0) = global.t0.or(config.t0) {
        if !(t0 > 0.0) {
            return Err(Failure::Usage(format!("t0 must be positive, got {t0}")));
        }
    }
    Ok(Settings {
        tol,
        seed: global.seed.or(config.seed).unwrap_or(0),
        out: global.out.clone().or_else(|| config.out.clone()),
        config,
    })
}

fn execute(cli: Cli) -> Result<(Settings, Artifact, Checks), Failure> {
    let st = settings(&cli.global)?;
    let t0_flag = cli.global.t0;
    let mut checks = Checks::default();
    let artifact = match &cli.command {
        Command::Knot { knot } => knot_cmd(&st.knot(knot)?),
        Command::Parabolic { knot } => parabolic_cmd(&st, &st.knot(knot)?, &mut checks)?,
        Command::Fill(opts) => fill_cmd(&st, opts, &mut checks)?,
        Command::Table { opts, big_n, k } => table_cmd(&st, opts, big_n, k, t0_flag)?,
        Command::Asymptotics(opts) => asymptotics_cmd(&st, opts, t0_flag, &mut checks)?,
        Command::Pairs(cmd) => pairs_cmd(&st, cmd, t0_flag, &mut checks)?,
        Command::Lemma31 { xi, b_grid, alpha_grid, trials, segments, samples } => {
            let b_grid = if b_grid.is_empty() { vec![1.0, 2.0, 5.0, 10.0, 20.0] } else { b_grid.clone() };
            let alpha_units = if alpha_grid.is_empty() { vec![0.5, 2.0 / 3.0, 5.0 / 6.0, 1.0] } else { alpha_grid.clone() };
            let alpha_grid: Vec<f64> = alpha_units.iter().map(|a| a * PI).collect();
            let report = empirical_constants_with(*xi, &b_grid, &alpha_grid, *trials, st.seed, *segments, *samples)
                .map_err(|e| match e {
                    PwGeoError::NonFinite => Failure::Invariant(json!({"invariant": "finite_output", "error": e.to_string()})),
                    e => Failure::Usage(e.to_string()),
                })?;
            checks.check("passing_cell_exists", !report.pareto.is_empty(), json!(xi));
            checks.check("monotone_in_alpha", report.monotone_in_alpha.iter().all(|&m| m), value(&report.monotone_in_alpha));
            Artifact::Json(value(&report))
        }
        Command::Nielsen(cmd) => nielsen_cmd(cmd, &mut checks)?,
        Command::Hnn(cmd) => hnn_cmd(cmd, &mut checks)?,
    };
    Ok((st, artifact, checks))
}

fn knot_cmd(knot: &TwoBridgeKnot) -> Artifact {
    Artifact::Json(json!({
        "knot": knot.name(),
        "p": knot.p,
        "q": knot.q,
        "w": knot.w,
        "relator": knot.relator,
        "longitude": knot.longitude,
        "conjugator": knot.conjugator(),
        "e": knot.e,
        "riley_polynomial": riley_polynomial(knot).to_string(),
    }))
}

/// Geometric root, cusp parameter and the seed representation.
fn cusp_setup(knot: &TwoBridgeKnot) -> Result<(crate::holonomy::ParabolicRep, Complex64), Failure> {
    let seed = geometric_rep(knot)?;
    let tau0 = cusp_parameter(&seed, knot)?;
    Ok((seed, tau0))
}

fn parabolic_cmd(st: &Settings, knot: &TwoBridgeKnot, checks: &mut Checks) -> Result<Artifact, Failure> {
    let roots = solve_parabolic(knot)?;
    let (seed, tau0) = cusp_setup(knot)?;
    checks.check("relator_residual", seed.relator_residual < st.tol, json!(seed.relator_residual));
    Ok(Artifact::Json(json!({
        "knot": knot.name(),
        "riley_polynomial": riley_polynomial(knot).to_string(),
        "roots": value(&roots),
        "geometric_c": value(&seed.c),
        "tau0": value(&tau0),
    })))
}

#[derive(Serialize)]
struct FillSummary<'a> {
    #[serde(flatten)]
    rep: &'a FilledRep,
    /// `|u + n v − 2πi|`.
    filling_equation: f64,
    normalization_residual: f64,
    /// `‖V^{−n} − W‖`, relative.
    v_power_residual: f64,
}

fn fill_cmd(st: &Settings, opts: &KnotOpts, checks: &mut Checks) -> Result<Artifact, Failure> {
    let knot = st.knot(&opts.knot)?;
    let (seed, _) = cusp_setup(&knot)?;
    let frs = solve_fillings(&knot, &st.ns(&opts.n, &[10, 20, 40, 80]), &seed)?;
    let mut out = Vec::new();
    for fr in &frs {
        let per = normalize_peripheral(fr, &knot)?;
        let vn = per.v.pow(-fr.n);
        let summary = FillSummary {
            rep: fr,
            filling_equation: (fr.u + fr.v * fr.n as f64 - Complex64::new(0.0, 2.0 * PI)).norm(),
            normalization_residual: per.residual,
            v_power_residual: vn.dist_psl(&per.w) / per.w.max_abs_entry().max(1.0),
        };
        let tag = |name: &str| format!("{name}[n={}]", fr.n);
        checks.check(&tag("filling_equation"), summary.filling_equation < st.tol, json!(summary.filling_equation));
        checks.check(&tag("relator_residual"), fr.relator_residual < st.tol, json!(fr.relator_residual));
        checks.check(&tag("v_power"), summary.v_power_residual < st.tol, json!(summary.v_power_residual));
        out.push(value(&summary));
    }
    Ok(Artifact::Json(Value::Array(out)))
}

fn fillings(st: &Settings, opts: &KnotOpts, default_ns: &[i64]) -> Result<(TwoBridgeKnot, Complex64, Vec<FilledRep>), Failure> {
    let knot = st.knot(&opts.knot)?;
    let (seed, tau0) = cusp_setup(&knot)?;
    let frs = solve_fillings(&knot, &st.ns(&opts.n, default_ns), &seed)?;
    Ok((knot, tau0, frs))
}

pub const TABLE_HEADER: [&str; 12] = [
    "n", "N", "k", "r_n", "length", "length_reduced", "limit", "rel_err", "cosh_lower_bound", "cosh_length", "taylor_lhs",
    "taylor_rhs",
];

pub fn table_csv(rows: &[Prop42Row]) -> Result<String, NonFinite> {
    let cells: Vec<Vec<Cell>> = rows
        .iter()
        .map(|r| {
            vec![
                Cell::Int(r.n),
                Cell::Int(r.big_n),
                Cell::Int(r.k),
                Cell::Float(r.r_n),
                Cell::Float(r.length),
                Cell::Float(r.length_reduced),
                Cell::Float(r.limit),
                Cell::Float(r.rel_err),
                r.cosh_lower_bound.map_or(Cell::Missing, Cell::Float),
                Cell::Float(r.cosh_length),
                Cell::Float(r.taylor_lhs),
                Cell::Float(r.taylor_rhs),
            ]
        })
        .collect();
    to_csv(&TABLE_HEADER, &cells)
}

fn table_cmd(
    st: &Settings,
    opts: &KnotOpts,
    big_n: &[i64],
    k: &Option<String>,
    t0_flag: Option<f64>,
) -> Result<Artifact, Failure> {
    let (_, tau0, frs) = fillings(st, opts, &[10, 20, 40, 80])?;
    let cusp = CuspData::new(st.t0(t0_flag, DEFAULT_T0), tau0);
    let rows = prop42_table(&frs, &cusp, &st.big_ns(big_n, &[1]), &st.ks(k, "-2..2")?);
    match table_csv(&rows) {
        Ok(csv) => Ok(Artifact::Csv(csv)),
        Err(NonFinite) => Err(Failure::Invariant(json!({"invariant": "finite_output"}))),
    }
}

fn asymptotics_cmd(st: &Settings, opts: &KnotOpts, t0_flag: Option<f64>, checks: &mut Checks) -> Result<Artifact, Failure> {
    let (knot, tau0, frs) = fillings(st, opts, &[10, 20, 40, 80])?;
    let report = asymptotics_check(&frs, &CuspData::new(st.t0(t0_flag, DEFAULT_T0), tau0));
    checks.check("monotone", report.monotone, Value::Null);
    checks.check("tail_within_2pct", report.tail_within_2pct, value(report.rows.last().unwrap()));
    Ok(Artifact::Json(json!({"knot": knot.name(), "tau0": value(&tau0), "report": value(&report)})))
}

fn pairs_cmd(st: &Settings, cmd: &PairsCommand, t0_flag: Option<f64>, checks: &mut Checks) -> Result<Artifact, Failure> {
    match cmd {
        PairsCommand::Commutator { opts, big_n } => {
            let (knot, _, frs) = fillings(st, opts, &[40])?;
            let big_ns = st.big_ns(big_n, &[0, 1, 2, 5, 9]);
            let reports: Vec<_> = frs.iter().map(|fr| commutator_check(fr, &knot, &big_ns)).collect();
            for r in &reports {
                checks.check(&format!("commutator_traces[n={}]", r.n), r.passed, json!(r.max_diff));
            }
            Ok(Artifact::Json(value(&reports)))
        }
        PairsCommand::Scan { opts, big_n, big_n_prime, k } => {
            let (knot, tau0, frs) = fillings(st, opts, &[40])?;
            let cusp = CuspData::new(st.t0(t0_flag, DEFAULT_T0), tau0);
            let ks = st.ks(k, "-5..5")?;
            let mut reports = Vec::new();
            for fr in &frs {
                for &nn in &st.big_ns(big_n, &[3]) {
                    let r = conjugacy_trace_scan(fr, &knot, Some(&cusp), nn, *big_n_prime, &ks);
                    if nn != *big_n_prime {
                        checks.check(&format!("trace_margin[n={},N={nn}]", fr.n), r.min_margin > st.tol, json!(r.min_margin));
                    }
                    reports.push(r);
                }
            }
            Ok(Artifact::Json(value(&reports)))
        }
        PairsCommand::Gamma { opts, spec, beta, max_n, k_max } => {
            let (knot, tau0, frs) = fillings(st, opts, &[80])?;
            let cusp = CuspData::new(st.t0(t0_flag, GAMMA_T0), tau0);
            let specs = if spec.is_empty() {
                vec![vec![0], vec![1, 2], vec![1, 0, 3]]
            } else {
                spec.iter()
                    .map(|s| s.split(',').map(|t| t.trim().parse::<u32>()).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| Failure::Usage(format!("bad --spec: {e}")))?
            };
            let specs = specs
                .into_iter()
                .map(PositiveWordSpec::new)
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Failure::Usage(e.to_string()))?;
            if !(*beta > 0.0 && *beta < PI / 2.0) {
                return Err(Failure::Usage(format!("β must lie in (0, π/2), got {beta}")));
            }
            let mut out = Vec::new();
            for fr in &frs {
                let (big_n, audits) = gamma_audit_at_least_n(fr, &knot, &cusp, &specs, *beta, *max_n, *k_max)?;
                for a in &audits {
                    checks.check(&format!("gamma_audit[n={},s={}]", fr.n, a.spec.s()), a.passed, json!({
                        "b_meas": a.b_meas, "alpha_meas": a.alpha_meas, "translation_length": a.translation_length,
                        "projection_bound": a.projection_bound,
                    }));
                }
                out.push(json!({"n": fr.n, "t0": cusp.t0, "least_N": big_n, "audits": value(&audits)}));
            }
            Ok(Artifact::Json(Value::Array(out)))
        }
    }
}

fn word(s: &str) -> Result<Word, Failure> {
    s.parse().map_err(|e: crate::words::WordError| Failure::Usage(e.to_string()))
}

fn free_pair(s: &str) -> Result<Pair<Word>, Failure> {
    parse_pair(s).map_err(|e| Failure::Usage(e.to_string()))
}

fn hnn_pair(s: &str) -> Result<Pair<HnnWord>, Failure> {
    let (x, y) = s
        .trim_matches(|c| c == '(' || c == ')')
        .split_once(',')
        .ok_or_else(|| Failure::Usage(format!("pair {s:?} needs two comma-separated words")))?;
    Ok(Pair::new(hnn_word(x)?, hnn_word(y)?))
}

fn hnn_word(s: &str) -> Result<HnnWord, Failure> {
    s.trim().parse().map_err(|e: hnn::HnnError| Failure::Usage(e.to_string()))
}

fn nielsen_cmd(cmd: &NielsenCommand, checks: &mut Checks) -> Result<Artifact, Failure> {
    Ok(Artifact::Json(match cmd {
        NielsenCommand::Primitive { word: w } => {
            let w = word(w)?;
            json!({"word": w, "primitive": is_primitive(&w)})
        }
        NielsenCommand::Basis { pair } => {
            let p = free_pair(pair)?;
            json!({"pair": p, "basis": is_basis(&p)})
        }
        NielsenCommand::Search { from, to, radius } => {
            let (p, q) = (free_pair(from)?, free_pair(to)?);
            let moves = ball_search(&p, &q, *radius);
            if let Some(m) = &moves {
                checks.check("replay", apply_moves(&p, m) == q, Value::Null);
            }
            json!({"from": p, "to": q, "radius": radius, "found": moves.is_some(), "moves": moves.unwrap_or_default()})
        }
    }))
}

fn hnn_cmd(cmd: &HnnCommand, checks: &mut Checks) -> Result<Artifact, Failure> {
    Ok(Artifact::Json(match cmd {
        HnnCommand::Check { target, g, k, eps, eta } => {
            if eps.abs() != 1 || eta.abs() != 1 {
                return Err(Failure::Usage("ε and η must be ±1".into()));
            }
            let t = hnn_pair(target)?;
            let g = hnn_word(g)?;
            json!({"target": t, "g": g, "k": k, "eps": eps, "eta": eta,
                   "holds": criterion_check(&t.first, &t.second, &g, *k, *eps, *eta)})
        }
        HnnCommand::Decide { from, to, radius, k_bound } => {
            let (p, q) = (hnn_pair(from)?, hnn_pair(to)?);
            let verdict = decide_equivalent(&p, &q, *radius, *k_bound).map_err(|e| Failure::Usage(e.to_string()))?;
            if let HnnVerdict::Equivalent(wit) = &verdict {
                checks.check("witness_replay", wit.image_of(&p).map(hnn::eval_affine) == q.map(hnn::eval_affine), Value::Null);
            }
            json!({"from": p, "to": q, "conclusive": verdict.is_conclusive(), "result": value(&verdict)})
        }
    }))
}

//! The `landau` command line: argument parsing, configuration layering and
//! the subcommands. Output is assembled in grid order before it is written,
//! so parallel evaluation never reorders rows.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::Error;
use crate::marginals::{marginal_1d, marginal_2d, marginal_2d_quadrature, verify_integral_equality, MarginalAxis, Plane2D};
use crate::params::{ParamOverrides, PhasePoint, PhysParams};
use crate::quadrature::MIN_STATE_ORDER;
use crate::star::{FockRep, DEFAULT_CUTOFF};
use crate::states::{coherent_eval, wigner_eval, StateLabel, WignerLabel};
use crate::uncertainty::coordinate_moment;
use crate::verify::{all_pass, run_suite, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CONFLICT: i32 = 3;

const DEFAULT_QUAD_ORDER: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "landau", version, about = "Phase-space Landau levels: states, marginals and uncertainty relations")]
pub struct Cli {
    #[arg(long, global = true)]
    pub hbar: Option<f64>,
    #[arg(long, global = true)]
    pub mass: Option<f64>,
    #[arg(long, global = true)]
    pub omega: Option<f64>,
    /// Matrix-unit cutoff per mode.
    #[arg(long, global = true)]
    pub cutoff: Option<usize>,
    /// Gauss–Hermite order for planes without a closed form.
    #[arg(long, global = true)]
    pub quad_order: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Divide density columns by h^2.
    #[arg(long, global = true)]
    pub unit_norm: bool,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// TOML file with hbar, mass, omega, cutoff, quad_order, format, unit_norm.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a state or one of its marginals on a grid.
    Eval {
        /// `[TARGET] STATE`; TARGET is wigner (default), marginal1d:AXIS or marginal2d:X,Y.
        #[arg(num_args = 1..=2, required = true)]
        args: Vec<String>,
        /// `axis=lo:hi:count` and pinned `axis=value` items separated by commas;
        /// a bare `lo:hi:count` for one-dimensional marginals.
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
    },
    /// Run the verification suite.
    Verify {
        #[arg(default_value = "all")]
        suite: String,
    },
    /// Uncertainty products over inclusive ranges such as `0..6`.
    Uncertainty {
        #[arg(long, default_value = "0..6")]
        n: String,
        #[arg(long, default_value = "0..6")]
        l: String,
    },
    /// Dump or load a state in matrix-unit JSON form.
    State {
        #[command(subcommand)]
        action: StateAction,
    },
    /// Residual sweep of the integral equalities of the marginal densities.
    Equalities {
        /// Largest n and l in the sweep.
        #[arg(long, default_value_t = 3)]
        max: usize,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0,0.7,1.6")]
        q1: Vec<f64>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum StateAction {
    Dump { state: String },
    Load { path: PathBuf },
}

/// Effective settings after layering defaults, the config file and flags.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: PhysParams,
    pub cutoff: usize,
    pub quad_order: usize,
    pub format: Format,
    pub unit_norm: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: PhysParams::default(),
            cutoff: DEFAULT_CUTOFF,
            quad_order: DEFAULT_QUAD_ORDER,
            format: Format::Csv,
            unit_norm: false,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Conflict(String),
    VerifyFailed,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Conflict(_) => EXIT_CONFLICT,
            CliError::VerifyFailed => EXIT_VERIFY_FAILED,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::LabelExceedsCutoff { .. } | Error::CutoffMismatch { .. } => CliError::Conflict(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

impl RunConfig {
    pub fn resolve(cli: &Cli) -> CliResult<Self> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &cli.config {
            let file = ParamOverrides::load(path)?;
            cfg.apply(&file)?;
        }
        let flags = ParamOverrides {
            hbar: cli.hbar,
            mass: cli.mass,
            omega: cli.omega,
            cutoff: cli.cutoff,
            quad_order: cli.quad_order,
            format: None,
            unit_norm: None,
        };
        cfg.apply(&flags)?;
        if let Some(f) = cli.format {
            cfg.format = f;
        }
        cfg.unit_norm |= cli.unit_norm;
        if cfg.cutoff == 0 {
            return Err(CliError::Conflict("cutoff must be positive".into()));
        }
        if cfg.quad_order < MIN_STATE_ORDER {
            return Err(CliError::Conflict(format!("quad-order {} below {MIN_STATE_ORDER}", cfg.quad_order)));
        }
        Ok(cfg)
    }

    fn apply(&mut self, o: &ParamOverrides) -> CliResult<()> {
        self.params = o.apply(self.params)?;
        if let Some(c) = o.cutoff {
            self.cutoff = c;
        }
        if let Some(q) = o.quad_order {
            self.quad_order = q;
        }
        if let Some(f) = &o.format {
            self.format = Format::from_str(f, true).map_err(|_| CliError::Input(format!("unknown format '{f}'")))?;
        }
        if let Some(u) = o.unit_norm {
            self.unit_norm = u;
        }
        Ok(())
    }

    fn check_label(&self, max_quantum: usize) -> CliResult<()> {
        if max_quantum + 2 > self.cutoff {
            return Err(CliError::Conflict(format!(
                "quantum number {max_quantum} needs cutoff at least {}, got {}",
                max_quantum + 2,
                self.cutoff
            )));
        }
        Ok(())
    }

    fn density_factor(&self) -> f64 {
        if self.unit_norm {
            1.0 / self.params.planck_h().powi(2)
        } else {
            1.0
        }
    }
}

/// Parses `args` (including the program name) and runs the command, writing
/// diagnostics to standard error. Returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            match &e {
                CliError::Input(m) | CliError::Conflict(m) => eprintln!("error: {m}"),
                CliError::VerifyFailed => eprintln!("verification failed"),
            }
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli) -> CliResult<()> {
    let cfg = RunConfig::resolve(cli)?;
    let (text, verdict) = match &cli.command {
        Command::Eval { args, grid } => (cmd_eval(&cfg, args, grid)?, Ok(())),
        Command::Verify { suite } => {
            let suite: Suite = suite.parse()?;
            cmd_verify(&cfg, suite)
        }
        Command::Uncertainty { n, l } => (cmd_uncertainty(&cfg, n, l)?, Ok(())),
        Command::State { action } => (cmd_state(&cfg, action)?, Ok(())),
        Command::Equalities { max, q1, tol } => cmd_equalities(&cfg, *max, q1, *tol)?,
    };
    emit(cli.out.as_deref(), &text)?;
    verdict
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| CliError::Input(e.to_string()))
        }
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn table(cfg: &RunConfig, header: &[&str], rows: &[Vec<f64>]) -> String {
    match cfg.format {
        Format::Csv => {
            let mut s = header.join(",");
            s.push('\n');
            for r in rows {
                let cells: Vec<String> = r.iter().map(|v| num(*v)).collect();
                s.push_str(&cells.join(","));
                s.push('\n');
            }
            s
        }
        Format::Json => {
            let doc = json!({ "columns": header, "rows": rows });
            let mut s = serde_json::to_string(&doc).expect("finite table");
            s.push('\n');
            s
        }
    }
}

// ---- grids ----

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridAxis {
    Range { lo: f64, hi: f64, count: usize },
    Fixed(f64),
}

impl GridAxis {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            GridAxis::Fixed(v) => vec![v],
            GridAxis::Range { lo, count: 1, .. } => vec![lo],
            GridAxis::Range { lo, hi, count } => {
                // weighted form so that symmetric ranges give exactly mirrored points
                let last = (count - 1) as f64;
                (0..count).map(|i| (lo * (last - i as f64) + hi * i as f64) / last).collect()
            }
        }
    }

    pub fn is_range(&self) -> bool {
        matches!(self, GridAxis::Range { .. })
    }
}

fn parse_number(s: &str) -> CliResult<f64> {
    let v: f64 = s.trim().parse().map_err(|_| CliError::Input(format!("invalid number '{s}' in grid")))?;
    if !v.is_finite() {
        return Err(CliError::Input(format!("non-finite number '{s}' in grid")));
    }
    Ok(v)
}

/// `lo:hi:count` or a single value.
pub fn parse_grid_axis(s: &str) -> CliResult<GridAxis> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.len() {
        1 => Ok(GridAxis::Fixed(parse_number(parts[0])?)),
        3 => {
            let lo = parse_number(parts[0])?;
            let hi = parse_number(parts[1])?;
            let count: usize = parts[2]
                .trim()
                .parse()
                .map_err(|_| CliError::Input(format!("invalid count '{}' in grid", parts[2])))?;
            if count == 0 {
                return Err(CliError::Input("grid count must be positive".into()));
            }
            Ok(GridAxis::Range { lo, hi, count })
        }
        _ => Err(CliError::Input(format!("expected 'lo:hi:count', got '{s}'"))),
    }
}

/// Comma-separated `axis=spec` items over the four coordinates; missing axes
/// are pinned at 0.
pub fn parse_grid(s: &str, allowed: &[MarginalAxis]) -> CliResult<Vec<(MarginalAxis, GridAxis)>> {
    let mut out: Vec<(MarginalAxis, GridAxis)> = Vec::new();
    for item in s.split(',').filter(|i| !i.trim().is_empty()) {
        let (name, spec) = item
            .split_once('=')
            .ok_or_else(|| CliError::Input(format!("grid item '{item}' is not 'axis=spec'")))?;
        let axis: MarginalAxis = name.trim().parse()?;
        if !allowed.contains(&axis) {
            return Err(CliError::Input(format!("axis {axis} is not part of this target")));
        }
        if out.iter().any(|(a, _)| *a == axis) {
            return Err(CliError::Input(format!("axis {axis} given twice")));
        }
        out.push((axis, parse_grid_axis(spec)?));
    }
    for &a in allowed {
        if !out.iter().any(|(b, _)| *b == a) {
            out.push((a, GridAxis::Fixed(0.0)));
        }
    }
    out.sort_by_key(|(a, _)| *a);
    Ok(out)
}

// Cartesian product in the given axis order, first axis outermost.
fn grid_points(axes: &[(MarginalAxis, GridAxis)]) -> Vec<[f64; 4]> {
    let mut pts = vec![[0.0; 4]];
    for (axis, g) in axes {
        let vals = g.values();
        pts = pts
            .into_iter()
            .flat_map(|p| {
                vals.iter().map(move |v| {
                    let mut q = p;
                    q[axis.index()] = *v;
                    q
                })
            })
            .collect();
    }
    pts
}

// ---- eval ----

enum Target {
    Wigner,
    Marginal1d(MarginalAxis),
    Marginal2d(Plane2D),
}

fn parse_target(s: &str) -> CliResult<Target> {
    if s == "wigner" {
        return Ok(Target::Wigner);
    }
    if let Some(a) = s.strip_prefix("marginal1d:") {
        return Ok(Target::Marginal1d(a.parse()?));
    }
    if let Some(p) = s.strip_prefix("marginal2d:") {
        return Ok(Target::Marginal2d(p.parse()?));
    }
    Err(CliError::Input(format!("unknown target '{s}'")))
}

fn wigner_only(state: &StateLabel) -> CliResult<WignerLabel> {
    state
        .wigner_label()
        .ok_or_else(|| CliError::Input(format!("marginal densities are available for wigner states, got {state}")))
}

pub fn cmd_eval(cfg: &RunConfig, args: &[String], grid: &str) -> CliResult<String> {
    let (target, state) = match args {
        [s] => (Target::Wigner, s),
        [t, s] => (parse_target(t)?, s),
        _ => return Err(CliError::Input("expected '[TARGET] STATE'".into())),
    };
    let state: StateLabel = state.parse()?;
    cfg.check_label(state.max_quantum_number())?;
    let p = &cfg.params;
    let k = cfg.density_factor();
    match target {
        Target::Wigner => {
            let axes = parse_grid(grid, &MarginalAxis::ALL)?;
            let pts = grid_points(&axes);
            let fock = match state {
                StateLabel::GenCoherent(_) => Some(state.fock(cfg.cutoff)?),
                _ => None,
            };
            let value = |x: &[f64; 4]| -> f64 {
                let pt = PhasePoint::from_array(*x);
                match (&state, &fock) {
                    (StateLabel::Wigner(w), _) => wigner_eval(*w, &pt, p),
                    (StateLabel::Coherent(c), _) => coherent_eval(*c, &pt, p),
                    (_, Some(f)) => f.eval(&pt, p).re,
                    _ => unreachable!("fock rep built for generalized states"),
                }
            };
            let rows: Vec<Vec<f64>> = pts.par_iter().map(|x| vec![x[0], x[1], x[2], x[3], k * value(x)]).collect();
            Ok(table(cfg, &["q1", "q2", "p1", "p2", "value"], &rows))
        }
        Target::Marginal1d(axis) => {
            let w = wigner_only(&state)?;
            let spec = match grid.split_once('=') {
                Some((name, spec)) => {
                    let named: MarginalAxis = name.trim().parse()?;
                    if named != axis {
                        return Err(CliError::Input(format!("grid axis {named} does not match target axis {axis}")));
                    }
                    spec
                }
                None => grid,
            };
            let xs = parse_grid_axis(spec)?.values();
            marginal_1d(w.n, w.l, axis, 0.0, p)?;
            let rows: Vec<Vec<f64>> = xs
                .par_iter()
                .map(|&x| vec![x, k * marginal_1d(w.n, w.l, axis, x, p).expect("label checked")])
                .collect();
            Ok(table(cfg, &["x", "value"], &rows))
        }
        Target::Marginal2d(plane) => {
            let w = wigner_only(&state)?;
            let (xa, ya) = plane.axes();
            let axes = parse_grid(grid, &[xa, ya])?;
            // keep the plane's own axis order in the output
            let ordered: Vec<(MarginalAxis, GridAxis)> =
                [xa, ya].iter().map(|a| *axes.iter().find(|(b, _)| b == a).expect("axis present")).collect();
            let pts = grid_points(&ordered);
            let eval = |pt: &PhasePoint| {
                if plane.has_closed_form() {
                    marginal_2d(w.n, w.l, plane, pt, p)
                } else {
                    marginal_2d_quadrature(w.n, w.l, plane, pt, p, cfg.quad_order)
                }
            };
            eval(&PhasePoint::ORIGIN)?;
            let rows: Vec<Vec<f64>> = pts
                .par_iter()
                .map(|x| {
                    let pt = PhasePoint::from_array(*x);
                    vec![x[xa.index()], x[ya.index()], k * eval(&pt).expect("label checked")]
                })
                .collect();
            Ok(table(cfg, &[xa.name(), ya.name(), "value"], &rows))
        }
    }
}

// ---- verify ----

pub fn cmd_verify(cfg: &RunConfig, suite: Suite) -> (String, CliResult<()>) {
    let checks = run_suite(suite, &cfg.params);
    let text = match cfg.format {
        Format::Csv => {
            let mut s = String::from("check,residual,tolerance,status\n");
            for c in &checks {
                let _ = writeln!(
                    s,
                    "{},{},{:e},{}",
                    c.name.replace(',', ";"),
                    num(c.residual),
                    c.tolerance,
                    if c.pass { "PASS" } else { "FAIL" }
                );
            }
            s
        }
        Format::Json => {
            let items: Vec<Value> = checks
                .iter()
                .map(|c| {
                    json!({
                        "check": c.name,
                        "residual": if c.residual.is_finite() { json!(c.residual) } else { Value::Null },
                        "tolerance": c.tolerance,
                        "pass": c.pass,
                    })
                })
                .collect();
            let mut s = serde_json::to_string(&json!({ "suite": suite.to_string(), "checks": items })).expect("json");
            s.push('\n');
            s
        }
    };
    let verdict = if all_pass(&checks) { Ok(()) } else { Err(CliError::VerifyFailed) };
    (text, verdict)
}

// ---- uncertainty ----

/// Inclusive `a..b` or a single `a`; `b < a` is empty.
pub fn parse_range(s: &str) -> CliResult<Vec<usize>> {
    let bad = || CliError::Input(format!("invalid range '{s}'"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse::<usize>().map_err(|_| bad())?, b.trim().parse::<usize>().map_err(|_| bad())?),
        None => {
            let v = s.trim().parse::<usize>().map_err(|_| bad())?;
            (v, v)
        }
    };
    Ok((lo..=hi).collect())
}

pub fn cmd_uncertainty(cfg: &RunConfig, n: &str, l: &str) -> CliResult<String> {
    let ns = parse_range(n)?;
    let ls = parse_range(l)?;
    let cells: Vec<(usize, usize)> = ns.iter().flat_map(|&a| ls.iter().map(move |&b| (a, b))).collect();
    if let Some(top) = cells.iter().map(|(a, b)| *a.max(b)).max() {
        cfg.check_label(top)?;
    }
    let p = &cfg.params;
    let rows: Vec<Vec<f64>> = cells
        .par_iter()
        .map(|&(a, b)| -> crate::Result<Vec<f64>> {
            let w = WignerLabel::new(a, b);
            let dq = coordinate_moment(MarginalAxis::Q1, 2, w, p)?.sqrt();
            let dp = coordinate_moment(MarginalAxis::P1, 2, w, p)?.sqrt();
            let product = dq * dp;
            Ok(vec![a as f64, b as f64, dq, dp, product, product - 0.5 * p.hbar()])
        })
        .collect::<crate::Result<_>>()?;
    let header = ["n", "l", "dq1", "dp1", "product", "bound_gap"];
    Ok(match cfg.format {
        Format::Csv => {
            let mut s = header.join(",");
            s.push('\n');
            for r in &rows {
                let _ = writeln!(s, "{},{},{},{},{},{}", r[0], r[1], num(r[2]), num(r[3]), num(r[4]), num(r[5]));
            }
            s
        }
        Format::Json => {
            let items: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({ "n": r[0] as usize, "l": r[1] as usize, "dq1": r[2], "dp1": r[3], "product": r[4], "bound_gap": r[5] })
                })
                .collect();
            let mut s = serde_json::to_string(&items).expect("finite table");
            s.push('\n');
            s
        }
    })
}

// ---- state ----

pub fn cmd_state(cfg: &RunConfig, action: &StateAction) -> CliResult<String> {
    match action {
        StateAction::Dump { state } => {
            let label: StateLabel = state.parse()?;
            cfg.check_label(label.max_quantum_number())?;
            Ok(label.fock(cfg.cutoff)?.to_json())
        }
        StateAction::Load { path } => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            let rep = FockRep::from_json(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            Ok(rep.to_json())
        }
    }
}

// ---- equalities ----

pub fn cmd_equalities(cfg: &RunConfig, max: usize, q1: &[f64], tol: f64) -> CliResult<(String, CliResult<()>)> {
    if q1.iter().any(|v| !v.is_finite()) {
        return Err(CliError::Input("q1 samples must be finite".into()));
    }
    let labels: Vec<(usize, usize)> = (0..=max).flat_map(|n| (0..=max).map(move |l| (n, l))).collect();
    let per_label: Vec<Vec<Vec<f64>>> = labels
        .par_iter()
        .map(|&(n, l)| -> crate::Result<Vec<Vec<f64>>> {
            Ok(verify_integral_equality(n, l, q1, &cfg.params)?
                .into_iter()
                .map(|r| vec![n as f64, l as f64, r.q1, r.lhs, r.rhs_laguerre, r.rhs_hermite, r.max_residual()])
                .collect())
        })
        .collect::<crate::Result<_>>()?;
    let rows: Vec<Vec<f64>> = per_label.into_iter().flatten().collect();
    let ok = rows.iter().all(|r| r[6] <= tol);
    let text = table(cfg, &["n", "l", "q1", "lhs", "rhs_laguerre", "rhs_hermite", "residual"], &rows);
    Ok((text, if ok { Ok(()) } else { Err(CliError::VerifyFailed) }))
}

//! Command-line front end: grid caching, ladder and chain tables, Gram
//! reports and verification suites, written as CSV or JSON.

pub mod oracle;
mod table;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hlgrid::{cache_file_name, load_or_build, CumulativeZGrid, QuadratureSpec};
use crate::iterations::{build_chain, build_chain_ungated, gap_ratios};
use crate::ladder::{Ladder, LadderConfig};
use crate::orthosys::{gram_matrix, BaseSystem, IteratedSystem, IteratedSystemSpec};
use crate::specfun::{prime_count, EULER_C};

pub use table::{Cell, Table};

/// Grid height that covers every built-in verification suite.
pub const STANDARD_T_MAX: f64 = 1.05e6;
/// Environment variable overriding the cache directory.
pub const CACHE_DIR_ENV: &str = "JACOBS_LADDER_CACHE_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BaseChoice {
    Legendre,
    Trig,
}

#[derive(Debug, Parser)]
#[command(name = "jacobs-ladder", version, about = "Jacob's ladders on the critical line")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    /// Run a verification suite (shorthand for `verify SUITE`).
    #[arg(long, value_name = "SUITE")]
    pub verify: Option<String>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Upper end of the cached Z^2 grid.
    #[arg(long = "t-max", global = true, default_value_t = STANDARD_T_MAX)]
    pub t_max: f64,
    /// Parameter of the upper limit a x ln x, in [7, 8].
    #[arg(long, global = true, default_value_t = 7.0)]
    pub a: f64,
    /// Smallest admissible T.
    #[arg(long = "t0", global = true, default_value_t = 100.0)]
    pub t0: f64,
    /// Relative tolerance of the ladder root solver.
    #[arg(long = "root-rel-tol", global = true, default_value_t = 1e-10)]
    pub root_rel_tol: f64,
    /// Relative tolerance of Gram and transform quadratures.
    #[arg(long = "rel-tol", global = true, default_value_t = 1e-8)]
    pub rel_tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    /// Cache directory (default: $JACOBS_LADDER_CACHE_DIR or ~/.cache/jacobs-ladder).
    #[arg(long, global = true, value_name = "PATH")]
    pub cache: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Build (or load) the cached grid and print a summary.
    Grid,
    /// Tabulate phi, phi_1 and related quantities at the given T.
    Ladder {
        #[arg(long = "T", value_delimiter = ',', required = true, num_args = 1..)]
        t: Vec<f64>,
    },
    /// Reverse segments of [T, T + U] down to depth k.
    Chain {
        #[arg(long = "T")]
        t: f64,
        /// Defaults to T / (20 ln T).
        #[arg(long = "U")]
        u: Option<f64>,
        #[arg(long, short = 'k', default_value_t = 3)]
        k: usize,
        /// Skip the admissibility gate U <= T/(10 ln T).
        #[arg(long = "allow-large-u")]
        allow_large_u: bool,
    },
    /// Gram matrix of an iterated orthogonal system.
    Gram {
        #[arg(long, value_enum, default_value_t = BaseChoice::Legendre)]
        base: BaseChoice,
        /// Depth; a comma-separated list composes stages (outermost first).
        #[arg(long, value_delimiter = ',', default_value = "1")]
        p: Vec<usize>,
        #[arg(long = "T", default_value_t = 1e4)]
        t: f64,
        #[arg(long = "N", default_value_t = 6)]
        n: usize,
        /// Half-length of the base interval [-l, l].
        #[arg(long, default_value_t = 1.0)]
        l: f64,
    },
    /// Run verification suites and report pass/fail per check.
    Verify {
        #[arg(default_value = "all")]
        suite: String,
    },
}

/// Resolved settings of one invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub grid_t_max: f64,
    pub ladder: LadderConfig,
    pub quadrature: QuadratureSpec,
    pub rel_tol: f64,
    pub output_format: OutputFormat,
    pub cache_path: PathBuf,
}

impl RunConfig {
    pub fn from_args(g: &GlobalArgs) -> Self {
        RunConfig {
            grid_t_max: g.t_max,
            ladder: LadderConfig {
                a: g.a,
                t0: g.t0,
                root_rel_tol: g.root_rel_tol,
                ..LadderConfig::default()
            },
            quadrature: QuadratureSpec::default(),
            rel_tol: g.rel_tol,
            output_format: g.format,
            cache_path: g.cache.clone().unwrap_or_else(default_cache_dir),
        }
    }

    /// Command-line defaults with an explicit cache directory.
    pub fn with_cache(cache_path: PathBuf) -> Self {
        let cli = Cli::parse_from(["jacobs-ladder", "grid"]);
        RunConfig {
            cache_path,
            ..RunConfig::from_args(&cli.global)
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.ladder.validate()?;
        self.quadrature.validate()?;
        if !(self.rel_tol > 0.0) {
            return Err(Error::domain("rel-tol", self.rel_tol, "> 0"));
        }
        Ok(())
    }

    pub fn cache_file(&self) -> PathBuf {
        self.cache_path.join(cache_file_name(self.grid_t_max, &self.quadrature))
    }

    pub fn load_grid(&self) -> Result<CumulativeZGrid> {
        let (grid, outcome) = load_or_build(&self.cache_path, self.grid_t_max, self.quadrature)?;
        log::info!("grid {}: {outcome:?}", self.cache_file().display());
        Ok(grid)
    }
}

/// `$JACOBS_LADDER_CACHE_DIR`, else `~/.cache/jacobs-ladder`, else a
/// directory under the system temp dir.
pub fn default_cache_dir() -> PathBuf {
    if let Some(dir) = std::env::var_os(CACHE_DIR_ENV) {
        return PathBuf::from(dir);
    }
    match std::env::var_os("HOME") {
        Some(home) => Path::new(&home).join(".cache").join("jacobs-ladder"),
        None => std::env::temp_dir().join("jacobs-ladder"),
    }
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io { .. } | Error::Format { .. } => EXIT_IO,
        _ => EXIT_NUMERIC,
    }
}

/// Summary of the cached grid.
pub fn cmd_grid(cfg: &RunConfig) -> Result<Table> {
    let grid = cfg.load_grid()?;
    let mut t = Table::new(&["t_max", "panels", "nodes", "hl_integral_t_max", "cache_file"]);
    t.push(vec![
        Cell::Num(grid.t_max()),
        Cell::Int(grid.panel_count() as i64),
        Cell::Int(grid.node_count() as i64),
        Cell::Num(grid.hl_integral(grid.t_max())?),
        Cell::Text(cache_file_name(grid.t_max(), &grid.spec())),
    ]);
    Ok(t)
}

/// One row per `T`; rows that fail carry the error text. The second value is
/// false if any row failed.
pub fn cmd_ladder(ladder: &Ladder, ts: &[f64]) -> (Table, bool) {
    let mut table = Table::new(&[
        "T",
        "phi",
        "phi1",
        "T_minus_phi1",
        "one_minus_c_pi_T",
        "ratio",
        "complementarity",
        "omega_over_ln_T",
        "hl_residual",
        "error",
    ]);
    let mut ok = true;
    for &t in ts {
        match ladder_row(ladder, t) {
            Ok(mut row) => {
                row.push(Cell::Empty);
                table.push(row);
            }
            Err(e) => {
                ok = false;
                let mut row = vec![Cell::Num(t)];
                row.extend(std::iter::repeat(Cell::Empty).take(8));
                row.push(Cell::Text(e.to_string()));
                table.push(row);
            }
        }
    }
    (table, ok)
}

fn ladder_row(ladder: &Ladder, t: f64) -> Result<Vec<Cell>> {
    let phi = ladder.solve_phi(t)?;
    let phi1 = 0.5 * phi;
    let pi_term = (1.0 - EULER_C) * prime_count(t)? as f64;
    let omega = ladder.omega(t)?;
    Ok(vec![
        Cell::Num(t),
        Cell::Num(phi),
        Cell::Num(phi1),
        Cell::Num(t - phi1),
        Cell::Num(pi_term),
        Cell::Num((t - phi1) / pi_term),
        Cell::Num((phi1 + pi_term) / t),
        Cell::Num(omega / t.ln()),
        Cell::Num(ladder.hl_representation_residual(t)?),
    ])
}

pub fn cmd_chain(ladder: &Ladder, t: f64, u: Option<f64>, k: usize, allow_large_u: bool) -> Result<Table> {
    let u = u.unwrap_or(t / (20.0 * t.ln()));
    let chain = if allow_large_u {
        build_chain_ungated(ladder, t, u, k)?
    } else {
        build_chain(ladder, t, u, k)?
    };
    let ratios = gap_ratios(&chain);
    let mut table = Table::new(&["k", "lo", "hi", "length", "gap", "gap_ratio"]);
    for s in &chain.segments {
        let (gap, ratio) = if s.k == 0 {
            (Cell::Empty, Cell::Empty)
        } else {
            (
                Cell::Num(s.lo - chain.segments[s.k - 1].hi),
                Cell::Num(ratios[s.k - 1]),
            )
        };
        table.push(vec![
            Cell::Int(s.k as i64),
            Cell::Num(s.lo),
            Cell::Num(s.hi),
            Cell::Num(s.len()),
            gap,
            ratio,
        ]);
    }
    Ok(table)
}

/// Gram matrix in long form: `entry`/`error` rows for every `(m, n)`, then
/// `transported_norm`, `base_norm`, `diag_scale` and `max_offdiag_ratio`.
pub fn cmd_gram(ladder: &Ladder, base: BaseChoice, ps: &[usize], t: f64, n: usize, l: f64, rel_tol: f64) -> Result<Table> {
    let base = match base {
        BaseChoice::Legendre => BaseSystem::legendre(-l, l)?,
        BaseChoice::Trig => BaseSystem::trigonometric(-l, l)?,
    };
    if ps.is_empty() {
        return Err(Error::domain("p", 0.0, "at least one depth"));
    }
    let specs = ps
        .iter()
        .map(|&p| IteratedSystemSpec::new(ladder, base.clone(), p, t))
        .collect::<Result<Vec<_>>>()?;
    let system = IteratedSystem::new(specs, ladder)?;
    let quad = QuadratureSpec {
        rel_tol,
        ..QuadratureSpec::default()
    };
    let report = gram_matrix(&system, n, quad)?;
    let mut table = Table::new(&["quantity", "m", "n", "value"]);
    for m in 0..n {
        for k in 0..n {
            table.push(vec![
                Cell::Text("entry".into()),
                Cell::Int(m as i64),
                Cell::Int(k as i64),
                Cell::Num(report.entries[m][k]),
            ]);
        }
    }
    for m in 0..n {
        for k in 0..n {
            table.push(vec![
                Cell::Text("error".into()),
                Cell::Int(m as i64),
                Cell::Int(k as i64),
                Cell::Num(report.errors[m][k]),
            ]);
        }
    }
    for (m, v) in report.transported_norms().into_iter().enumerate() {
        table.push(vec![
            Cell::Text("transported_norm".into()),
            Cell::Int(m as i64),
            Cell::Int(m as i64),
            Cell::Num(v),
        ]);
        if let Some(b) = base.norm_sq(m) {
            table.push(vec![
                Cell::Text("base_norm".into()),
                Cell::Int(m as i64),
                Cell::Int(m as i64),
                Cell::Num(b),
            ]);
        }
    }
    for (name, v) in [
        ("diag_scale", report.diag_scale),
        ("max_offdiag_ratio", report.max_offdiag_ratio),
    ] {
        table.push(vec![Cell::Text(name.into()), Cell::Empty, Cell::Empty, Cell::Num(v)]);
    }
    Ok(table)
}

/// Parse `args` and run the command, writing results to `out` and
/// diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{rendered}")
            } else {
                write!(out, "{rendered}")
            };
            return code;
        }
    };
    let command = match (cli.command, cli.verify) {
        (Some(_), Some(_)) => {
            let _ = writeln!(err, "error: --verify cannot be combined with a subcommand");
            return EXIT_USAGE;
        }
        (Some(c), None) => c,
        (None, Some(suite)) => Command::Verify { suite },
        (None, None) => {
            let _ = writeln!(err, "error: a subcommand is required (grid, ladder, chain, gram, verify)");
            return EXIT_USAGE;
        }
    };
    let cfg = RunConfig::from_args(&cli.global);
    if let Err(e) = cfg.validate() {
        let _ = writeln!(err, "error: {e}");
        return EXIT_USAGE;
    }
    if let Command::Verify { suite } = &command {
        if !verify::is_suite(suite) {
            let _ = writeln!(
                err,
                "error: unknown suite '{suite}' (expected one of: {}, all)",
                verify::SUITES.join(", ")
            );
            return EXIT_USAGE;
        }
    }
    match execute(&cfg, command) {
        Ok((table, ok)) => {
            if let Err(e) = table.write(cfg.output_format, out) {
                let _ = writeln!(err, "error: writing output: {e}");
                return EXIT_IO;
            }
            if ok {
                EXIT_OK
            } else {
                EXIT_NUMERIC
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn execute(cfg: &RunConfig, command: Command) -> Result<(Table, bool)> {
    if let Command::Grid = command {
        return Ok((cmd_grid(cfg)?, true));
    }
    let grid = cfg.load_grid()?;
    let ladder = Ladder::new(&grid, cfg.ladder)?;
    match command {
        Command::Grid => unreachable!(),
        Command::Ladder { t } => Ok(cmd_ladder(&ladder, &t)),
        Command::Chain { t, u, k, allow_large_u } => Ok((cmd_chain(&ladder, t, u, k, allow_large_u)?, true)),
        Command::Gram { base, p, t, n, l } => Ok((cmd_gram(&ladder, base, &p, t, n, l, cfg.rel_tol)?, true)),
        Command::Verify { suite } => {
            let ctx = verify::Context::new(&ladder, cfg.clone());
            let checks = verify::run_suite(&ctx, &suite)?;
            let ok = checks.iter().all(|c| c.pass);
            Ok((verify::checks_table(&checks), ok))
        }
    }
}

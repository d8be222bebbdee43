//! Verification suites. Each returns a list of checks with the measured
//! value, the bound it is held to and whether it passed.

use serde::Serialize;

use super::oracle;
use super::{run, Cell, RunConfig, Table};
use crate::error::{Error, Result};
use crate::hlgrid::{hl_asymptotic, CumulativeZGrid};
use crate::iterations::{build_chain, gap_ratios, transform_integral_many, TestFn};
use crate::ladder::{log_spaced, Ladder};
use crate::orthosys::{automorphism_w, gram_matrix, BaseSystem, IteratedSystem, IteratedSystemSpec};
use crate::quad::AdaptiveSpec;
use crate::specfun::{hardy_z_raw, prime_count, EULER_C};

pub const SUITES: [&str; 11] = [
    "zeta",
    "hardy-littlewood",
    "defining-equation",
    "derivative",
    "complementarity",
    "chain",
    "lemma7",
    "orthogonality",
    "composition",
    "automorphism",
    "determinism",
];

pub fn is_suite(name: &str) -> bool {
    name == "all" || SUITES.contains(&name)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub measured: f64,
    pub bound: String,
    pub pass: bool,
}

impl Check {
    fn at_most(suite: &'static str, name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Check {
            suite,
            name: name.into(),
            measured,
            bound: format!("<= {bound:e}"),
            pass: measured <= bound,
        }
    }

    fn within(suite: &'static str, name: impl Into<String>, measured: f64, lo: f64, hi: f64) -> Self {
        Check {
            suite,
            name: name.into(),
            measured,
            bound: format!("in [{lo}, {hi}]"),
            pass: lo <= measured && measured <= hi,
        }
    }

    fn holds(suite: &'static str, name: impl Into<String>, measured: f64, pass: bool, bound: &str) -> Self {
        Check {
            suite,
            name: name.into(),
            measured,
            bound: bound.into(),
            pass,
        }
    }
}

pub fn checks_table(checks: &[Check]) -> Table {
    let mut t = Table::new(&["suite", "check", "measured", "bound", "pass"]);
    for c in checks {
        t.push(vec![
            Cell::Text(c.suite.into()),
            Cell::Text(c.name.clone()),
            Cell::Num(c.measured),
            Cell::Text(c.bound.clone()),
            Cell::Bool(c.pass),
        ]);
    }
    t
}

/// Everything a suite needs: a ladder on a grid that covers the suites, and
/// the settings used to reach the same grid from the command line.
pub struct Context<'a, 'g> {
    pub ladder: &'a Ladder<'g>,
    pub cfg: RunConfig,
}

impl<'a, 'g> Context<'a, 'g> {
    pub fn new(ladder: &'a Ladder<'g>, cfg: RunConfig) -> Self {
        Context { ladder, cfg }
    }
}

pub fn run_suite(ctx: &Context, name: &str) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for suite in SUITES {
        if name == "all" || name == suite {
            out.extend(run_one(ctx, suite)?);
        }
    }
    if out.is_empty() {
        return Err(Error::Invariant(format!("unknown suite '{name}'")));
    }
    Ok(out)
}

fn run_one(ctx: &Context, suite: &str) -> Result<Vec<Check>> {
    match suite {
        "zeta" => Ok(zeta()),
        "hardy-littlewood" => hardy_littlewood(ctx),
        "defining-equation" => defining_equation(ctx),
        "derivative" => derivative(ctx),
        "complementarity" => complementarity(ctx),
        "chain" => chain(ctx),
        "lemma7" => lemma7(ctx),
        "orthogonality" => orthogonality(ctx),
        "composition" => composition(ctx),
        "automorphism" => automorphism(ctx),
        "determinism" => determinism(ctx),
        _ => Err(Error::Invariant(format!("unknown suite '{suite}'"))),
    }
}

fn bisect_zero(mut lo: f64, mut hi: f64) -> f64 {
    let s = hardy_z_raw(lo).signum();
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if hardy_z_raw(mid).signum() == s {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn zeta() -> Vec<Check> {
    const S: &str = "zeta";
    let worst = oracle::HARDY_Z
        .iter()
        .map(|(t, z)| (hardy_z_raw(*t) - z).abs())
        .fold(0.0, f64::max);
    let mut checks = vec![Check::at_most(S, "max |Z(t) - oracle| at 50 points in [10, 5006]", worst, 1e-8)];
    for (i, z) in oracle::FIRST_ZEROS.iter().enumerate() {
        let found = bisect_zero(z - 0.05, z + 0.05);
        checks.push(Check::at_most(S, format!("zero {} location error", i + 1), (found - z).abs(), 1e-6));
    }
    let mut count = 0;
    let mut prev = hardy_z_raw(10.0);
    for i in 1..=9000 {
        let z = hardy_z_raw(10.0 + 0.01 * i as f64);
        if z.signum() != prev.signum() {
            count += 1;
        }
        prev = z;
    }
    checks.push(Check::holds(
        S,
        "sign changes of Z on (10, 100)",
        count as f64,
        count == oracle::ZEROS_10_TO_100,
        "== 29",
    ));
    checks
}

fn hardy_littlewood(ctx: &Context) -> Result<Vec<Check>> {
    hardy_littlewood_on(ctx.ladder.grid())
}

/// The Hardy–Littlewood checks on any grid reaching `1e4`.
pub fn hardy_littlewood_on(grid: &CumulativeZGrid) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (t, f) in oracle::HL_INTEGRAL {
        let got = grid.hl_integral(t)?;
        checks.push(Check::at_most(
            "hardy-littlewood",
            format!("F({t}) relative error vs oracle"),
            ((got - f) / f).abs(),
            1e-8,
        ));
    }
    for t in [1e2, 1e3, 1e4] {
        let r = (grid.hl_integral(t)? - hl_asymptotic(t)?).abs() / (t.sqrt() * t.ln());
        checks.push(Check::at_most(
            "hardy-littlewood",
            format!("|F - main terms| / (sqrt(T) ln T) at T = {t}"),
            r,
            2.0,
        ));
    }
    Ok(checks)
}

fn defining_equation(ctx: &Context) -> Result<Vec<Check>> {
    const S: &str = "defining-equation";
    let grid = ctx.ladder.grid();
    let a = ctx.ladder.config().a;
    let ts = log_spaced(1e3, 1e4, 10);
    let mut worst = 0.0f64;
    let mut phis = Vec::new();
    for &t in &ts {
        let x = ctx.ladder.solve_phi(t)?;
        let f = grid.hl_integral(t)?;
        worst = worst.max(((grid.damped_integral(x, a)? - f) / f).abs());
        phis.push(x);
    }
    let min_step = phis.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    Ok(vec![
        Check::at_most(S, "max relative residual at 10 log-spaced T in [1e3, 1e4]", worst, 1e-9),
        Check::holds(S, "min phi(T_{i+1}) - phi(T_i)", min_step, min_step > 0.0, "> 0"),
    ])
}

fn derivative(ctx: &Context) -> Result<Vec<Check>> {
    let h = 1e-3;
    let mut worst = 0.0f64;
    let mut n = 0;
    let mut i = 0;
    while n < 50 {
        let t = 1000.0 + 173.1 * i as f64;
        i += 1;
        if hardy_z_raw(t).abs() <= 0.1 {
            continue;
        }
        let d = (ctx.ladder.phi1(t + h)? - ctx.ladder.phi1(t - h)?) / (2.0 * h);
        let z = ctx.ladder.z_tilde_sq(t)?;
        worst = worst.max(((d - z) / z).abs());
        n += 1;
    }
    Ok(vec![Check::at_most(
        "derivative",
        "max relative gap between central difference of phi_1 and Z~^2 at 50 points",
        worst,
        1e-3,
    )])
}

/// `(phi_1(T) + (1 - c) pi(T)) / T`.
pub fn complementarity_ratio(ladder: &Ladder, t: f64) -> Result<f64> {
    Ok((ladder.phi1(t)? + (1.0 - EULER_C) * prime_count(t)? as f64) / t)
}

fn complementarity(ctx: &Context) -> Result<Vec<Check>> {
    const S: &str = "complementarity";
    let ts = [1e3, 1e4, 2e4];
    let r: Vec<f64> = ts
        .iter()
        .map(|&t| complementarity_ratio(ctx.ladder, t))
        .collect::<Result<_>>()?;
    let mut checks = vec![Check::within(S, "ratio at T = 1e4", r[1], 0.95, 1.05)];
    for (i, t) in ts.iter().enumerate() {
        checks.push(Check::holds(S, format!("ratio at T = {t}"), r[i], true, "reported"));
    }
    let trend = (r[0] - 1.0).abs() > (r[1] - 1.0).abs() && (r[1] - 1.0).abs() > (r[2] - 1.0).abs();
    checks.push(Check::holds(
        S,
        "|ratio - 1| decreasing over T = 1e3, 1e4, 2e4",
        (r[2] - 1.0).abs(),
        trend,
        "decreasing",
    ));
    Ok(checks)
}

fn chain(ctx: &Context) -> Result<Vec<Check>> {
    const S: &str = "chain";
    let t = 1e4f64;
    let c = build_chain(ctx.ladder, t, t / (20.0 * t.ln()), 3)?;
    let min_gap = c.gaps().into_iter().fold(f64::INFINITY, f64::min);
    let mut image_err = 0.0f64;
    for w in c.segments.windows(2) {
        image_err = image_err.max((ctx.ladder.phi1(w[1].lo)? - w[0].lo).abs());
        image_err = image_err.max((ctx.ladder.phi1(w[1].hi)? - w[0].hi).abs());
    }
    let ratios = gap_ratios(&c);
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(vec![
        Check::holds(S, "min gap between consecutive segments", min_gap, min_gap > 0.0, "> 0"),
        Check::at_most(S, "max endpoint image error / T", image_err / t, 1e-6),
        Check::within(S, "min gap / ((1-c) T / ln T)", lo, 0.75, 1.25),
        Check::within(S, "max gap / ((1-c) T / ln T)", hi, 0.75, 1.25),
    ])
}

fn lemma7(ctx: &Context) -> Result<Vec<Check>> {
    let one: TestFn = &|_| 1.0;
    let lin: TestFn = &|t| t;
    let sq: TestFn = &|t| t * t;
    let cos: TestFn = &|t: f64| t.cos();
    let names = ["1", "t", "t^2", "cos t"];
    let spec = AdaptiveSpec {
        rel_tol: ctx.cfg.rel_tol,
        abs_tol: 1e-13,
        ..Default::default()
    };
    let mut checks = Vec::new();
    for k in 1..=3 {
        let r = transform_integral_many(ctx.ladder, &[one, lin, sq, cos], 1e4, 20.0, k, spec)?;
        for (name, (lhs, rhs)) in names.iter().zip(r) {
            checks.push(Check::at_most(
                "lemma7",
                format!("g = {name}, k = {k}: |lhs - rhs| / |lhs|"),
                ((lhs - rhs) / lhs).abs(),
                1e-5,
            ));
        }
    }
    Ok(checks)
}

fn base(kind: &str) -> Result<BaseSystem> {
    match kind {
        "legendre" => BaseSystem::legendre(-1.0, 1.0),
        _ => BaseSystem::trigonometric(-1.0, 1.0),
    }
}

fn gram_spec(ctx: &Context) -> crate::hlgrid::QuadratureSpec {
    crate::hlgrid::QuadratureSpec {
        rel_tol: ctx.cfg.rel_tol,
        ..Default::default()
    }
}

fn orthogonality(ctx: &Context) -> Result<Vec<Check>> {
    const S: &str = "orthogonality";
    let mut checks = Vec::new();
    for kind in ["legendre", "trig"] {
        for p in 1..=3 {
            let b = base(kind)?;
            let spec = IteratedSystemSpec::new(ctx.ladder, b.clone(), p, 1e4)?;
            let report = gram_matrix(&IteratedSystem::single(spec, ctx.ladder), 6, gram_spec(ctx))?;
            checks.push(Check::at_most(
                S,
                format!("{kind}, p = {p}: max off-diagonal ratio"),
                report.max_offdiag_ratio,
                1e-4,
            ));
            let worst = report
                .transported_norms()
                .iter()
                .enumerate()
                .map(|(n, v)| {
                    let want = b.norm_sq(n).unwrap();
                    ((v - want) / want).abs()
                })
                .fold(0.0, f64::max);
            checks.push(Check::at_most(S, format!("{kind}, p = {p}: norm transport error"), worst, 1e-3));
        }
    }
    Ok(checks)
}

fn composition(ctx: &Context) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for kind in ["legendre", "trig"] {
        let specs = (0..2)
            .map(|_| IteratedSystemSpec::new(ctx.ladder, base(kind)?, 1, 1e4))
            .collect::<Result<Vec<_>>>()?;
        let report = gram_matrix(&IteratedSystem::new(specs, ctx.ladder)?, 4, gram_spec(ctx))?;
        checks.push(Check::at_most(
            "composition",
            format!("{kind}, p1 = p2 = 1: max off-diagonal ratio"),
            report.max_offdiag_ratio,
            1e-3,
        ));
    }
    Ok(checks)
}

fn automorphism(ctx: &Context) -> Result<Vec<Check>> {
    const S: &str = "automorphism";
    let mut checks = Vec::new();
    for p in 1..=3 {
        let spec = IteratedSystemSpec::new(ctx.ladder, base("legendre")?, p, 1e4)?;
        let (a, l) = (-1.0, 1.0);
        let err = (automorphism_w(a, &spec, ctx.ladder)? - a)
            .abs()
            .max((automorphism_w(a + 2.0 * l, &spec, ctx.ladder)? - (a + 2.0 * l)).abs());
        checks.push(Check::at_most(S, format!("p = {p}: endpoint error / l"), err / l, 1e-6));
        let ws = (0..100)
            .map(|i| automorphism_w(a + 2.0 * l * i as f64 / 99.0, &spec, ctx.ladder))
            .collect::<Result<Vec<_>>>()?;
        let min_step = ws.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        checks.push(Check::holds(S, format!("p = {p}: min increment on 100 points"), min_step, min_step > 0.0, "> 0"));
    }
    Ok(checks)
}

/// Output of the command line for `args`, run on a pool of `threads`.
pub fn cli_output(cfg: &RunConfig, args: &[&str], threads: usize) -> Result<(i32, Vec<u8>)> {
    let mut full: Vec<String> = vec![
        "jacobs-ladder".into(),
        "--t-max".into(),
        cfg.grid_t_max.to_string(),
        "--cache".into(),
        cfg.cache_path.display().to_string(),
        "--a".into(),
        cfg.ladder.a.to_string(),
    ];
    full.extend(args.iter().map(|s| s.to_string()));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Resource(e.to_string()))?;
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = pool.install(|| run(full, &mut out, &mut err));
    Ok((code, out))
}

/// Commands compared by the determinism suite.
pub const DETERMINISM_COMMANDS: [&[&str]; 7] = [
    &["grid"],
    &["ladder", "--T", "1000,4000,10000"],
    &["chain", "--T", "10000", "-k", "2"],
    &["gram", "--N", "3", "--p", "1", "--format", "json"],
    &["gram", "--base", "trig", "--N", "3", "--p", "1"],
    &["verify", "chain"],
    &["--format", "json", "verify", "zeta"],
];

fn determinism(ctx: &Context) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for args in DETERMINISM_COMMANDS {
        let runs = [1, 1, 4]
            .iter()
            .map(|&n| cli_output(&ctx.cfg, args, n))
            .collect::<Result<Vec<_>>>()?;
        let same = runs.iter().all(|r| r == &runs[0]) && runs[0].0 == 0;
        checks.push(Check::holds(
            "determinism",
            format!("{}: identical bytes over 3 runs (1, 1, 4 threads)", args.join(" ")),
            runs[0].1.len() as f64,
            same,
            "identical",
        ));
    }
    Ok(checks)
}

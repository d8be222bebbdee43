//! Runs every acceptance criterion at its pinned tolerance and prints one
//! line per criterion. Exits non-zero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use jacobs_ladder::cli::verify::{self, Check, Context};
use jacobs_ladder::hlgrid::{build_grid, QuadratureSpec};

struct Criterion {
    number: usize,
    suite: &'static str,
    runtime_limit: Option<f64>,
}

const CRITERIA: [Criterion; 11] = [
    Criterion { number: 1, suite: "zeta", runtime_limit: Some(10.0) },
    Criterion { number: 2, suite: "hardy-littlewood", runtime_limit: Some(120.0) },
    Criterion { number: 3, suite: "defining-equation", runtime_limit: None },
    Criterion { number: 4, suite: "derivative", runtime_limit: None },
    Criterion { number: 5, suite: "complementarity", runtime_limit: None },
    Criterion { number: 6, suite: "chain", runtime_limit: None },
    Criterion { number: 7, suite: "lemma7", runtime_limit: Some(300.0) },
    Criterion { number: 8, suite: "orthogonality", runtime_limit: None },
    Criterion { number: 9, suite: "composition", runtime_limit: None },
    Criterion { number: 10, suite: "automorphism", runtime_limit: None },
    Criterion { number: 11, suite: "determinism", runtime_limit: None },
];

fn run(c: &Criterion, ctx: &Context) -> jacobs_ladder::Result<Vec<Check>> {
    if c.suite == "hardy-littlewood" {
        // measured together with building its own grid to 2e4
        let grid = build_grid(2e4, QuadratureSpec::default())?;
        return verify::hardy_littlewood_on(&grid);
    }
    verify::run_suite(ctx, c.suite)
}

fn main() -> ExitCode {
    let ladder = common::ladder();
    let ctx = Context::new(&ladder, common::run_config());
    let mut all_pass = true;
    for c in &CRITERIA {
        let start = Instant::now();
        let result = run(c, &ctx);
        let seconds = start.elapsed().as_secs_f64();
        let (pass, detail) = match &result {
            Ok(checks) => {
                let failed: Vec<&Check> = checks.iter().filter(|k| !k.pass).collect();
                let in_time = c.runtime_limit.map_or(true, |limit| seconds < limit);
                let limit = c.runtime_limit.map_or(String::new(), |l| format!(" (limit {l} s)"));
                (
                    failed.is_empty() && in_time,
                    format!("{}/{} checks, {seconds:.1} s{limit}", checks.len() - failed.len(), checks.len()),
                )
            }
            Err(e) => (false, format!("error: {e}")),
        };
        all_pass &= pass;
        println!(
            "criterion {:>2} {:<18} {}  {detail}",
            c.number,
            c.suite,
            if pass { "PASS" } else { "FAIL" }
        );
        if let Ok(checks) = &result {
            for k in checks.iter().filter(|k| !k.pass) {
                println!("    failed: {}: measured {:e}, bound {}", k.name, k.measured, k.bound);
            }
        }
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

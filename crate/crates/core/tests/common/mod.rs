#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::OnceLock;

use jacobs_ladder::cli::{RunConfig, CACHE_DIR_ENV, STANDARD_T_MAX};
use jacobs_ladder::hlgrid::{load_or_build, CumulativeZGrid, QuadratureSpec};
use jacobs_ladder::ladder::{Ladder, LadderConfig};

/// `$JACOBS_LADDER_CACHE_DIR` if set, else a directory under the target dir
/// shared by every test binary.
pub fn cache_dir() -> PathBuf {
    std::env::var_os(CACHE_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("grid-cache"))
}

/// The grid used by the command line, built once and cached on disk.
pub fn standard_grid() -> &'static CumulativeZGrid {
    static GRID: OnceLock<CumulativeZGrid> = OnceLock::new();
    GRID.get_or_init(|| {
        load_or_build(&cache_dir(), STANDARD_T_MAX, QuadratureSpec::default())
            .expect("standard grid")
            .0
    })
}

pub fn ladder() -> Ladder<'static> {
    Ladder::new(standard_grid(), LadderConfig::default()).unwrap()
}

pub fn run_config() -> RunConfig {
    RunConfig::with_cache(cache_dir())
}

/// Run the command line in-process; returns exit code, stdout and stderr.
pub fn cli(args: &[&str]) -> (i32, String, String) {
    let cfg = run_config();
    let mut full = vec!["jacobs-ladder".to_string(), "--cache".into(), cfg.cache_path.display().to_string()];
    full.extend(args.iter().map(|s| s.to_string()));
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = jacobs_ladder::cli::run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

//! The ladder `phi_1(T)` against the band `T - (1 - c) pi(T)`.

use jacobs_ladder::hlgrid::{build_grid, QuadratureSpec};
use jacobs_ladder::ladder::{Ladder, LadderConfig};
use jacobs_ladder::specfun::{prime_count, EULER_C};

fn main() -> jacobs_ladder::Result<()> {
    let grid = build_grid(1e5, QuadratureSpec::default())?;
    let ladder = Ladder::new(&grid, LadderConfig::default())?;
    println!(
        "{:>8} {:>20} {:>14} {:>10} {:>12} {:>12}",
        "T", "phi1(T)", "T - phi1", "ratio", "omega/lnT", "residual"
    );
    for t in [200.0, 500.0, 1000.0, 2000.0] {
        let phi1 = ladder.phi1(t)?;
        let band = (1.0 - EULER_C) * prime_count(t)? as f64;
        println!(
            "{t:>8} {phi1:>20.12} {:>14.6} {:>10.5} {:>12.6} {:>12.3e}",
            t - phi1,
            (t - phi1) / band,
            ladder.omega(t)? / t.ln(),
            ladder.hl_representation_residual(t)?
        );
    }
    Ok(())
}

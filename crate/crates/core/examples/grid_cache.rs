//! Build the cumulative grid of `Z^2`, save it, and load it back.

use jacobs_ladder::hlgrid::{load_or_build, QuadratureSpec};

fn main() -> jacobs_ladder::Result<()> {
    let dir = std::env::temp_dir().join("jacobs-ladder-example");
    let t_max = 1e5;
    for _ in 0..2 {
        let start = std::time::Instant::now();
        let (grid, outcome) = load_or_build(&dir, t_max, QuadratureSpec::default())?;
        println!(
            "{outcome:?}: {} nodes up to {} in {:.2} s",
            grid.node_count(),
            grid.t_max(),
            start.elapsed().as_secs_f64()
        );
    }
    let (grid, _) = load_or_build(&dir, t_max, QuadratureSpec::default())?;
    for t in [100.0, 1e3, 1e4] {
        let f = grid.hl_integral(t)?;
        println!("int_0^{t} Z^2 = {f:.12e}   / (T ln T) = {:.6}", f / (t * t.ln()));
    }
    Ok(())
}

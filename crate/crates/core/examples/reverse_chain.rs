//! A chain of reverse iterates of `[T, T + U]` and the change of variables along it.

use jacobs_ladder::hlgrid::{build_grid, QuadratureSpec};
use jacobs_ladder::iterations::{build_chain, gap_ratios, transform_integral, TestFn};
use jacobs_ladder::ladder::{Ladder, LadderConfig};
use jacobs_ladder::quad::AdaptiveSpec;

fn main() -> jacobs_ladder::Result<()> {
    let grid = build_grid(2e5, QuadratureSpec::default())?;
    let ladder = Ladder::new(&grid, LadderConfig::default())?;
    let t: f64 = 2000.0;
    let u = t / (20.0 * t.ln());

    let chain = build_chain(&ladder, t, u, 3)?;
    let ratios = gap_ratios(&chain);
    for (k, s) in chain.segments.iter().enumerate() {
        let ratio = if k == 0 { String::new() } else { format!("{:.4}", ratios[k - 1]) };
        println!("k={k}  [{:.6}, {:.6}]  len {:.6}  {ratio}", s.lo, s.hi, s.len());
    }

    let spec = AdaptiveSpec {
        rel_tol: 1e-8,
        ..Default::default()
    };
    let cos: TestFn = &|x: f64| x.cos();
    for k in 0..=3 {
        let (lhs, rhs) = transform_integral(&ladder, cos, t, 20.0, k, spec)?;
        println!("k={k}  int g = {lhs:.12e}  transformed = {rhs:.12e}");
    }
    Ok(())
}

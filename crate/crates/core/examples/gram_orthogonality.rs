//! Gram matrices of iterated Legendre and trigonometric systems.

use jacobs_ladder::hlgrid::{build_grid, QuadratureSpec};
use jacobs_ladder::ladder::{Ladder, LadderConfig};
use jacobs_ladder::orthosys::{gram_matrix, BaseSystem, IteratedSystem, IteratedSystemSpec};

fn main() -> jacobs_ladder::Result<()> {
    let grid = build_grid(1e5, QuadratureSpec::default())?;
    let ladder = Ladder::new(&grid, LadderConfig::default())?;
    let quad = QuadratureSpec {
        rel_tol: 1e-8,
        ..Default::default()
    };
    for (name, base) in [
        ("legendre", BaseSystem::legendre(-1.0, 1.0)?),
        ("trig", BaseSystem::trigonometric(-1.0, 1.0)?),
    ] {
        for p in 1..=2 {
            let spec = IteratedSystemSpec::new(&ladder, base.clone(), p, 2000.0)?;
            let g = gram_matrix(&IteratedSystem::single(spec, &ladder), 4, quad)?;
            println!("{name} p={p}  max off-diagonal ratio {:.3e}", g.max_offdiag_ratio);
            for row in &g.entries {
                println!("  {}", row.iter().map(|v| format!("{v:>12.4e}")).collect::<String>());
            }
        }
    }
    Ok(())
}

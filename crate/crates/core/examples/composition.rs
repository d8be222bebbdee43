//! Two stages composed, and the automorphism of the base interval.

use jacobs_ladder::hlgrid::{build_grid, QuadratureSpec};
use jacobs_ladder::ladder::{Ladder, LadderConfig};
use jacobs_ladder::orthosys::{
    automorphism_w, gram_matrix, BaseSystem, IteratedSystem, IteratedSystemSpec,
};

fn main() -> jacobs_ladder::Result<()> {
    let grid = build_grid(1e5, QuadratureSpec::default())?;
    let ladder = Ladder::new(&grid, LadderConfig::default())?;
    let base = BaseSystem::legendre(-1.0, 1.0)?;
    let inner = IteratedSystemSpec::new(&ladder, base.clone(), 1, 1000.0)?;
    let outer = IteratedSystemSpec::new(&ladder, base, 1, 2000.0)?;

    for x in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        println!("w({x:>4}) = {:.12}", automorphism_w(x, &inner, &ladder)?);
    }

    let quad = QuadratureSpec {
        rel_tol: 1e-8,
        ..Default::default()
    };
    let composed = IteratedSystem::new(vec![inner, outer], &ladder)?;
    let g = gram_matrix(&composed, 4, quad)?;
    println!("composed system: max off-diagonal ratio {:.3e}", g.max_offdiag_ratio);
    println!("transported norms {:.6?}", g.transported_norms());
    Ok(())
}

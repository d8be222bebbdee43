use std::sync::OnceLock;

use crate::hlgrid::{build_grid, CumulativeZGrid, QuadratureSpec};

/// Grid shared by unit tests; covers ladders up to `T` of a few thousand.
pub(crate) fn unit_grid() -> &'static CumulativeZGrid {
    static GRID: OnceLock<CumulativeZGrid> = OnceLock::new();
    GRID.get_or_init(|| build_grid(1e5, QuadratureSpec::default()).unwrap())
}

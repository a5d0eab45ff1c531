//! Fixtures shared by the benchmarks.

use modkernel_core::discretization::{build_basis, BasisMode};
use modkernel_core::{BasisSet, Grid, MatrixMP, PipelineConfig, PrecisionContext, RegionSpec};

pub fn unit_interval(ctx: &PrecisionContext) -> RegionSpec {
    RegionSpec::Interval {
        left: ctx.int(-1),
        right: ctx.int(1),
    }
}

/// Split basis for `[-1, 1]` inside `[-4, 4]`.
pub fn interval_basis(ctx: &PrecisionContext, cells: usize) -> BasisSet {
    let grid =
        Grid::new(ctx, cells, &ctx.int(4), &unit_interval(ctx)).expect("region is on the grid");
    build_basis(&grid, BasisMode::BoundarySplit)
}

/// `1/(i + j + 1) + n δ_ij`: symmetric, well conditioned, no special
/// structure for the eigensolver to exploit.
pub fn test_matrix(ctx: &PrecisionContext, n: usize) -> MatrixMP {
    MatrixMP::symmetric_from_fn(ctx, n, |i, j| {
        let base = ctx.ratio(1, (i + j + 1) as i64);
        if i == j {
            base + n as i32
        } else {
            base
        }
    })
}

pub fn interval_config(ctx: &PrecisionContext, mass: i64, cells: usize) -> PipelineConfig {
    PipelineConfig::new(*ctx, unit_interval(ctx), ctx.int(mass), cells, ctx.int(4))
}

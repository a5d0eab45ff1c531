use super::RegionSpec;
use crate::error::{Error, Result};
use crate::precision::{PrecisionContext, Real};

/// Uniform grid `x_i = -b + i h`, `h = 2b / n_cells`, `i = 0..=n_cells`.
#[derive(Clone, Debug)]
pub struct Grid {
    n_cells: usize,
    half_width: Real,
    h: Real,
    nodes: Vec<Real>,
    /// Node index of each finite region boundary, ascending.
    region_nodes: Vec<usize>,
    ctx: PrecisionContext,
}

impl Grid {
    /// Grid adapted to `region`: every boundary must fall on a node (to
    /// within `10^-(digits)` in units of `h`), the region must span at least
    /// two cells, and `n_cells ≥ 4`.
    pub fn new(
        ctx: &PrecisionContext,
        n_cells: usize,
        half_width: &Real,
        region: &RegionSpec,
    ) -> Result<Self> {
        if n_cells < 4 {
            return Err(Error::InvalidConfig(format!(
                "n_cells = {n_cells} is below the minimum of 4"
            )));
        }
        if *half_width <= 0 {
            return Err(Error::InvalidConfig(format!(
                "half-width {half_width} must be positive"
            )));
        }
        region.validate(half_width)?;
        let b = ctx.round(half_width);
        let h = &b * 2 / n_cells as i32;
        let nodes: Vec<Real> = (0..=n_cells).map(|i| &h * i as i32 - &b).collect();
        let mut grid = Self {
            n_cells,
            half_width: b,
            h,
            nodes,
            region_nodes: Vec::new(),
            ctx: *ctx,
        };
        grid.region_nodes = region
            .boundaries()
            .into_iter()
            .map(|x| grid.node_index(x))
            .collect::<Result<_>>()?;
        if let [left, right] = grid.region_nodes[..] {
            if right - left < 2 {
                return Err(Error::InvalidConfig(format!(
                    "region spans {} cell(s); at least 2 are required",
                    right - left
                )));
            }
        }
        Ok(grid)
    }

    /// Index of the node at `x`.
    pub fn node_index(&self, x: &Real) -> Result<usize> {
        let position = (x + &self.half_width) / &self.h;
        let nearest = position.to_f64().round();
        if !(0.0..=self.n_cells as f64).contains(&nearest) {
            return Err(Error::RegionNotOnGrid {
                boundary: x.clone(),
            });
        }
        let index = nearest as usize;
        if (position - index as i32).abs() > self.ctx.tolerance(0) * self.n_cells as i32 {
            return Err(Error::RegionNotOnGrid {
                boundary: x.clone(),
            });
        }
        Ok(index)
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn half_width(&self) -> &Real {
        &self.half_width
    }

    pub fn spacing(&self) -> &Real {
        &self.h
    }

    pub fn nodes(&self) -> &[Real] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &Real {
        &self.nodes[i]
    }

    pub fn region_nodes(&self) -> &[usize] {
        &self.region_nodes
    }

    pub fn context(&self) -> &PrecisionContext {
        &self.ctx
    }

    /// Whether cell `[x_c, x_{c+1}]` lies inside `region`. Boundaries sit on
    /// nodes, so every cell is entirely inside or entirely outside.
    pub fn cell_inside(&self, region: &RegionSpec, cell: usize) -> bool {
        let midpoint = (&self.nodes[cell] + &self.nodes[cell + 1]) / 2;
        region.contains(&midpoint)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(50).unwrap()
    }

    fn interval(ctx: &PrecisionContext, l: i64, r: i64) -> RegionSpec {
        RegionSpec::Interval {
            left: ctx.int(l),
            right: ctx.int(r),
        }
    }

    #[test]
    fn nodes_are_uniform_and_symmetric() {
        let ctx = ctx();
        let g = Grid::new(&ctx, 8, &ctx.int(2), &interval(&ctx, -1, 1)).unwrap();
        assert_eq!(g.nodes().len(), 9);
        assert_eq!(*g.spacing(), ctx.ratio(1, 2));
        for i in 0..=8 {
            assert_eq!(*g.node(i), -g.node(8 - i).clone());
        }
        assert_eq!(g.region_nodes(), &[2, 6]);
        assert!(g.cell_inside(&interval(&ctx, -1, 1), 2));
        assert!(!g.cell_inside(&interval(&ctx, -1, 1), 1));
    }

    #[test]
    fn boundary_off_grid_is_rejected() {
        let ctx = ctx();
        let region = RegionSpec::Wedge {
            edge: ctx.parse("0.3").unwrap(),
        };
        assert!(matches!(
            Grid::new(&ctx, 8, &ctx.int(2), &region),
            Err(Error::RegionNotOnGrid { .. })
        ));
    }

    #[test]
    fn decimal_boundaries_snap_within_tolerance() {
        let ctx = ctx();
        // 0.1 is not dyadic, but with b = 0.4 and 8 cells it is node 5
        let region = RegionSpec::Interval {
            left: ctx.parse("-0.1").unwrap(),
            right: ctx.parse("0.3").unwrap(),
        };
        let g = Grid::new(&ctx, 8, &ctx.parse("0.4").unwrap(), &region).unwrap();
        assert_eq!(g.region_nodes(), &[3, 7]);
    }

    #[test]
    fn degenerate_inputs_are_rejected() {
        let ctx = ctx();
        assert!(Grid::new(&ctx, 3, &ctx.int(2), &interval(&ctx, -1, 1)).is_err());
        // one cell wide
        let narrow = RegionSpec::Interval {
            left: ctx.zero(),
            right: ctx.ratio(1, 2),
        };
        assert!(Grid::new(&ctx, 8, &ctx.int(2), &narrow).is_err());
        assert!(Grid::new(&ctx, 8, &ctx.int(-2), &interval(&ctx, -1, 1)).is_err());
    }
}

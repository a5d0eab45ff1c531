use crate::discretization::{BasisSet, OrthonormalFrame, RegionSpec};
use crate::error::Result;
use crate::linalg::MatrixMP;
use crate::precision::Real;

/// Kernel samples `M(x_i, x_k)` on the interior nodes.
#[derive(Clone, Debug)]
pub struct GridKernel {
    /// Node indices into the grid, ascending.
    pub nodes: Vec<usize>,
    pub positions: Vec<Real>,
    pub values: MatrixMP,
}

/// Pointwise kernel `Σ ẽ_j(x) M̃_jk ẽ_k(y)` over the orthonormalized
/// elements, which equals `e(x)ᵀ G⁻¹ M̂ G⁻¹ e(y)` for the hat-basis form.
/// Half-hats take the value 1/2 at their jump.
pub fn kernel_on_grid(
    m_hat: &MatrixMP,
    basis: &BasisSet,
    frame: &OrthonormalFrame,
) -> Result<GridKernel> {
    let grid = basis.grid();
    let ctx = grid.context();
    let nodes: Vec<usize> = (1..grid.n_cells()).collect();
    let positions: Vec<Real> = nodes.iter().map(|&i| grid.node(i).clone()).collect();
    let n = basis.len();
    // E: node values of the elements (nodes × elements)
    let e = MatrixMP::from_fn(ctx, nodes.len(), n, |r, j| {
        basis.elements()[j].eval(grid, &positions[r])
    });
    // P = G⁻¹ Eᵀ = L⁻ᵀ (L⁻¹ Eᵀ)
    let w = frame.l_inv.multiply(&e.transpose())?;
    let p = frame.l_inv.transpose().multiply(&w)?;
    let values = p.transpose().multiply(m_hat)?.multiply(&p)?.symmetrized()?;
    Ok(GridKernel {
        nodes,
        positions,
        values,
    })
}

/// Node pairs entering [`kernel_diagnostics`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagnosticDomain {
    /// Both nodes in the closed region. Outside it the discretized `M₋` has
    /// rank at most twice the inside dimension and cannot be local.
    Region,
    /// Every interior node of the box.
    Box,
}

/// Absolute kernel mass split by distance from the diagonal.
#[derive(Clone, Debug)]
pub struct KernelDiagnostics {
    /// `Σ |K|` over `|x - y| ≤ 2h`.
    pub band: Real,
    pub off_band: Real,
    /// `Σ |K|` over `|x + y - 2c| ≤ 2h` outside the band, `c` the region
    /// centre or wedge edge. Part of `off_band`.
    pub antidiagonal: Real,
}

impl KernelDiagnostics {
    pub fn off_band_ratio(&self) -> f64 {
        (&self.off_band / &self.band).to_f64()
    }
}

fn in_closure(region: &RegionSpec, x: &Real) -> bool {
    match region {
        RegionSpec::Wedge { edge } => x >= edge,
        RegionSpec::LeftWedge { edge } => x <= edge,
        RegionSpec::Interval { left, right } => x >= left && x <= right,
    }
}

pub fn kernel_diagnostics(
    kernel: &GridKernel,
    region: &RegionSpec,
    domain: DiagnosticDomain,
) -> KernelDiagnostics {
    let ctx = kernel.values.context();
    let selected: Vec<usize> = (0..kernel.nodes.len())
        .filter(|&r| domain == DiagnosticDomain::Box || in_closure(region, &kernel.positions[r]))
        .collect();
    // node index of a boundary point, from the uniform node positions
    let index_of = |x: &Real| -> f64 {
        let x0 = &kernel.positions[0];
        let h = &kernel.positions[1] - x0;
        ((x - x0) / &h).to_f64() + kernel.nodes[0] as f64
    };
    let twice_center = match region.boundaries().as_slice() {
        [a, b] => index_of(a) + index_of(b),
        [a] => 2.0 * index_of(a),
        _ => f64::NAN,
    };
    let mut band = ctx.zero();
    let mut off_band = ctx.zero();
    let mut antidiagonal = ctx.zero();
    for &r in &selected {
        for &c in &selected {
            let v = kernel.values.get(r, c).abs();
            let (i, k) = (kernel.nodes[r], kernel.nodes[c]);
            if i.abs_diff(k) <= 2 {
                band += &v;
            } else {
                if ((i + k) as f64 - twice_center).abs() <= 2.0 + 1e-9 {
                    antidiagonal += &v;
                }
                off_band += &v;
            }
        }
    }
    KernelDiagnostics {
        band,
        off_band,
        antidiagonal,
    }
}

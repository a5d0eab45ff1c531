use super::{Grid, RegionSpec};
use crate::error::{Error, Result};
use crate::linalg::MatrixMP;
use crate::precision::Real;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BasisMode {
    Standard,
    /// Hats at region-boundary nodes are replaced by their two halves.
    #[default]
    BoundarySplit,
}

impl FromStr for BasisMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Self::Standard),
            "split" | "boundary-split" => Ok(Self::BoundarySplit),
            other => Err(Error::InvalidConfig(format!(
                "basis mode {other:?} is neither \"standard\" nor \"split\""
            ))),
        }
    }
}

impl fmt::Display for BasisMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Standard => "standard",
            Self::BoundarySplit => "split",
        })
    }
}

/// Linear profile on a cell in the local coordinate `s ∈ [0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Slope {
    /// `1 - s`.
    Falling,
    /// `s`.
    Rising,
}

impl Slope {
    pub(crate) fn index(self) -> usize {
        match self {
            Self::Falling => 0,
            Self::Rising => 1,
        }
    }

    pub fn eval(self, s: &Real) -> Real {
        match self {
            Self::Falling => -(s - 1),
            Self::Rising => s.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Piece {
    pub cell: usize,
    pub slope: Slope,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementKind {
    Hat,
    /// The rising half on `[x_{i-1}, x_i]`.
    LeftHalf,
    /// The falling half on `[x_i, x_{i+1}]`.
    RightHalf,
}

/// Piecewise-linear element peaking at `node` with value 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Element {
    pub node: usize,
    pub kind: ElementKind,
    pub pieces: Vec<Piece>,
}

impl Element {
    fn new(node: usize, kind: ElementKind) -> Self {
        let left = Piece {
            cell: node - 1,
            slope: Slope::Rising,
        };
        let right = Piece {
            cell: node,
            slope: Slope::Falling,
        };
        let pieces = match kind {
            ElementKind::Hat => vec![left, right],
            ElementKind::LeftHalf => vec![left],
            ElementKind::RightHalf => vec![right],
        };
        Self { node, kind, pieces }
    }

    /// Support `[first node, last node]` as node indices.
    pub fn support(&self) -> (usize, usize) {
        let first = self.pieces.first().expect("element has a piece").cell;
        let last = self.pieces.last().expect("element has a piece").cell + 1;
        (first, last)
    }

    /// Point value; at the jump of a half-hat the mean of the one-sided
    /// limits is returned.
    pub fn eval(&self, grid: &Grid, x: &Real) -> Real {
        let ctx = grid.context();
        let (first, last) = self.support();
        if x < grid.node(first) || x > grid.node(last) {
            return ctx.zero();
        }
        if x == grid.node(self.node) {
            return match self.kind {
                ElementKind::Hat => ctx.one(),
                _ => ctx.ratio(1, 2),
            };
        }
        let mut value = ctx.zero();
        for piece in &self.pieces {
            let (a, b) = (grid.node(piece.cell), grid.node(piece.cell + 1));
            if x >= a && x <= b {
                value = piece.slope.eval(&((x - a) / grid.spacing()));
            }
        }
        value
    }

    /// `∫ e dx`.
    pub fn integral(&self, grid: &Grid) -> Real {
        grid.spacing() * self.pieces.len() as i32 / 2
    }
}

/// Elements over a grid together with their exact Gram matrix.
#[derive(Clone, Debug)]
pub struct BasisSet {
    grid: Grid,
    mode: BasisMode,
    elements: Vec<Element>,
    gram: MatrixMP,
}

/// `∫ over one cell of φ_a φ_b` in units of `h`: 1/3 for equal slopes, 1/6
/// otherwise.
fn cell_overlap(grid: &Grid, a: Slope, b: Slope) -> Real {
    let h = grid.spacing();
    if a == b {
        h / 3
    } else {
        h / 6
    }
}

/// `∫ w e_j e_k` where `w` is 1 on cells accepted by `weight` and 0 elsewhere.
fn overlap_matrix<F>(grid: &Grid, elements: &[Element], weight: F) -> MatrixMP
where
    F: Fn(usize) -> bool + Sync,
{
    let ctx = grid.context();
    MatrixMP::symmetric_from_fn(ctx, elements.len(), |j, k| {
        let mut sum = ctx.zero();
        for p in &elements[j].pieces {
            for q in &elements[k].pieces {
                if p.cell == q.cell && weight(p.cell) {
                    sum += cell_overlap(grid, p.slope, q.slope);
                }
            }
        }
        sum
    })
}

impl BasisSet {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn mode(&self) -> BasisMode {
        self.mode
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn gram(&self) -> &MatrixMP {
        &self.gram
    }

    /// Number of elements whose support lies entirely outside `region`.
    pub fn outside_count(&self, region: &RegionSpec) -> usize {
        self.elements
            .iter()
            .filter(|e| {
                e.pieces
                    .iter()
                    .all(|p| !self.grid.cell_inside(region, p.cell))
            })
            .count()
    }
}

/// Interior hats at nodes `1..n_cells` (the endpoint hats are dropped); in
/// split mode each region-boundary hat becomes a left and a right half.
pub fn build_basis(grid: &Grid, mode: BasisMode) -> BasisSet {
    let mut elements = Vec::with_capacity(grid.n_cells() + 1);
    for node in 1..grid.n_cells() {
        if mode == BasisMode::BoundarySplit && grid.region_nodes().contains(&node) {
            elements.push(Element::new(node, ElementKind::LeftHalf));
            elements.push(Element::new(node, ElementKind::RightHalf));
        } else {
            elements.push(Element::new(node, ElementKind::Hat));
        }
    }
    let gram = overlap_matrix(grid, &elements, |_| true);
    BasisSet {
        grid: grid.clone(),
        mode,
        elements,
        gram,
    }
}

/// `X_jk = ∫ χ e_j e_k`, exact per cell. In split mode `X` is the Gram
/// matrix restricted to the inside elements.
pub fn chi_matrix(basis: &BasisSet, region: &RegionSpec) -> MatrixMP {
    let grid = basis.grid();
    overlap_matrix(grid, basis.elements(), |cell| {
        grid.cell_inside(region, cell)
    })
}

use crate::discretization::{BasisSet, OrthonormalFrame};
use crate::error::{Error, Result};
use crate::linalg::MatrixMP;
use crate::precision::{PrecisionContext, Real};
use crate::quadrature::gauss_legendre;

/// L²-normalized Gaussian `(2πσ²)^{-1/4} exp(-(x-μ)²/(4σ²))`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianProbe {
    center: Real,
    width: Real,
    amplitude: Real,
}

impl GaussianProbe {
    pub fn new(ctx: &PrecisionContext, center: &Real, width: &Real) -> Result<Self> {
        if *width <= 0 {
            return Err(Error::InvalidConfig(format!(
                "probe width must be positive, got {width}"
            )));
        }
        let variance_2pi = ctx.pi() * &width.square() * 2;
        let amplitude = variance_2pi.sqrt()?.sqrt()?.recip()?;
        Ok(Self {
            center: ctx.round(center),
            width: ctx.round(width),
            amplitude,
        })
    }

    pub fn center(&self) -> &Real {
        &self.center
    }

    pub fn width(&self) -> &Real {
        &self.width
    }

    pub fn value(&self, x: &Real) -> Real {
        let u = (x - &self.center) / &(self.width.clone() * 2);
        let e = (-u.square())
            .exp()
            .expect("exp of a non-positive argument is finite");
        e * &self.amplitude
    }

    /// Fails when `|μ| + 6σ ≥ b`.
    pub fn check_inside(&self, half_width: &Real) -> Result<()> {
        if self.center.abs() + &(self.width.clone() * 6) >= *half_width {
            return Err(Error::ProbeOutsideGrid {
                center: self.center.clone(),
                width: self.width.clone(),
                half_width: half_width.clone(),
            });
        }
        Ok(())
    }
}

/// Points per panel. Panels are at most `σ` wide, where the Gauss-Legendre
/// error of the Gaussian decays faster than `16^-n`.
fn rule_points(ctx: &PrecisionContext) -> usize {
    ctx.decimal_digits() as usize / 4 + 20
}

/// `∫ g e_j dx` for every element.
pub fn project(basis: &BasisSet, probe: &GaussianProbe) -> Vec<Real> {
    let grid = basis.grid();
    let ctx = grid.context();
    let h = grid.spacing();
    let rule = gauss_legendre(rule_points(ctx), ctx);
    let panels = (h.to_f64() / probe.width().to_f64()).ceil().max(1.0) as i32;
    let panel = h.clone() / panels;
    let half = panel.clone() / 2;
    // per cell: [∫ g (1-s), ∫ g s], s the local coordinate
    let cells: Vec<[Real; 2]> = (0..grid.n_cells())
        .map(|cell| {
            let x0 = grid.node(cell);
            let mut total = ctx.zero();
            let mut rising = ctx.zero();
            for p in 0..panels {
                let mid = x0 + &(panel.clone() * p) + &half;
                for (t, w) in rule.nodes.iter().zip(&rule.weights) {
                    let x = &mid + &(&half * t);
                    let wg = probe.value(&x) * w;
                    rising += &(&wg * &((&x - x0) / h));
                    total += &wg;
                }
            }
            let total = total * &half;
            let rising = rising * &half;
            [&total - &rising, rising]
        })
        .collect();
    basis
        .elements()
        .iter()
        .map(|e| {
            e.pieces
                .iter()
                .map(|piece| cells[piece.cell][piece.slope.index()].clone())
                .sum()
        })
        .collect()
}

/// `⟨g, M g⟩ = cᵀ M̂ c` with `c = G⁻¹ (∫ g e_j)` the L² projection of `g`.
pub fn smear_with_frame(
    m_hat: &MatrixMP,
    basis: &BasisSet,
    frame: &OrthonormalFrame,
    probe: &GaussianProbe,
) -> Result<Real> {
    probe.check_inside(basis.grid().half_width())?;
    let c = frame.solve_gram(&project(basis, probe))?;
    m_hat.bilinear(&c, &c)
}

pub fn smear(m_hat: &MatrixMP, basis: &BasisSet, probe: &GaussianProbe) -> Result<Real> {
    smear_with_frame(m_hat, basis, &OrthonormalFrame::new(basis)?, probe)
}

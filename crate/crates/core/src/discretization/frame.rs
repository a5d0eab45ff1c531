use super::BasisSet;
use crate::error::Result;
use crate::linalg::{cholesky, congruence, invert_lower_triangular, MatrixMP};
use crate::precision::Real;

/// Cholesky factor `G = L Lᵀ` of the Gram matrix and its inverse. Rows of
/// `L⁻¹` hold the coefficients of the orthonormalized elements.
#[derive(Clone, Debug)]
pub struct OrthonormalFrame {
    pub l: MatrixMP,
    pub l_inv: MatrixMP,
}

impl OrthonormalFrame {
    pub fn new(basis: &BasisSet) -> Result<Self> {
        let l = cholesky(basis.gram())?;
        let l_inv = invert_lower_triangular(&l)?;
        Ok(Self { l, l_inv })
    }

    /// Bilinear-form matrix to the orthonormal frame: `L⁻¹ X L⁻ᵀ`.
    pub fn to_frame(&self, x: &MatrixMP) -> Result<MatrixMP> {
        congruence(&self.l_inv, x)
    }

    /// Orthonormal-frame matrix back to a hat-basis bilinear form: `L X̃ Lᵀ`.
    pub fn from_frame(&self, x: &MatrixMP) -> Result<MatrixMP> {
        congruence(&self.l, x)
    }

    /// Orthonormal-frame coordinates `L⁻¹ v` of the functional with hat-basis
    /// components `v_j = ∫ f e_j`.
    pub fn coordinates(&self, v: &[Real]) -> Result<Vec<Real>> {
        self.l_inv.apply(v)
    }

    /// Hat-basis expansion coefficients `G⁻¹ v = L⁻ᵀ L⁻¹ v`.
    pub fn solve_gram(&self, v: &[Real]) -> Result<Vec<Real>> {
        self.l_inv.transpose().apply(&self.coordinates(v)?)
    }
}

/// `L⁻¹ X L⁻ᵀ` for a bilinear-form matrix `X` over `basis`.
pub fn orthonormal_frame(basis: &BasisSet, x: &MatrixMP) -> Result<MatrixMP> {
    OrthonormalFrame::new(basis)?.to_frame(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretization::{build_basis, chi_matrix, BasisMode, Grid, RegionSpec};
    use crate::precision::PrecisionContext;

    fn basis(ctx: &PrecisionContext, mode: BasisMode) -> (BasisSet, RegionSpec) {
        let region = RegionSpec::Interval {
            left: ctx.int(-1),
            right: ctx.int(1),
        };
        let grid = Grid::new(ctx, 12, &ctx.int(3), &region).unwrap();
        (build_basis(&grid, mode), region)
    }

    #[test]
    fn gram_maps_to_identity_and_zero_to_zero() {
        let ctx = PrecisionContext::new(80).unwrap();
        let (basis, _) = basis(&ctx, BasisMode::BoundarySplit);
        let n = basis.len();
        let id = orthonormal_frame(&basis, basis.gram()).unwrap();
        assert!(id.max_abs_diff(&MatrixMP::identity(&ctx, n)).unwrap() < ctx.tolerance(20));
        let zero = orthonormal_frame(&basis, &MatrixMP::zeros(&ctx, n, n)).unwrap();
        assert!(zero.max_abs().is_zero());
    }

    #[test]
    fn split_chi_is_an_orthogonal_projector() {
        let ctx = PrecisionContext::new(80).unwrap();
        let (basis, region) = basis(&ctx, BasisMode::BoundarySplit);
        let chi = orthonormal_frame(&basis, &chi_matrix(&basis, &region)).unwrap();
        let sq = chi.multiply(&chi).unwrap();
        assert!(sq.max_abs_diff(&chi).unwrap() < ctx.tolerance(20));
        assert!(chi.is_symmetric());
    }

    #[test]
    fn standard_chi_is_not_idempotent() {
        let ctx = PrecisionContext::new(40).unwrap();
        let (basis, region) = basis(&ctx, BasisMode::Standard);
        let chi = orthonormal_frame(&basis, &chi_matrix(&basis, &region)).unwrap();
        let defect = chi.multiply(&chi).unwrap().max_abs_diff(&chi).unwrap();
        assert!(defect > ctx.ratio(1, 1000));
    }

    #[test]
    fn round_trip_through_the_frame() {
        let ctx = PrecisionContext::new(60).unwrap();
        let (basis, region) = basis(&ctx, BasisMode::BoundarySplit);
        let frame = OrthonormalFrame::new(&basis).unwrap();
        let x = chi_matrix(&basis, &region);
        let back = frame.from_frame(&frame.to_frame(&x).unwrap()).unwrap();
        assert!(back.max_abs_diff(&x).unwrap() < ctx.tolerance(20));
        let v: Vec<Real> = (0..basis.len()).map(|i| ctx.int(i as i64 + 1)).collect();
        let c = frame.solve_gram(&v).unwrap();
        let gv = basis.gram().apply(&c).unwrap();
        for (a, b) in gv.iter().zip(&v) {
            assert!((a - b).abs() < ctx.tolerance(20) * 100);
        }
    }
}

use crate::error::{Error, Result};
use crate::precision::{PrecisionContext, Real};
use rayon::prelude::*;
use rug::Float;

/// Dense real matrix at extended precision, row-major.
///
/// All entries share the matrix's [`PrecisionContext`]. The `symmetric` flag
/// is set only by constructors that enforce exact symmetry.
#[derive(Clone, Debug)]
pub struct MatrixMP {
    rows: usize,
    cols: usize,
    data: Vec<Real>,
    ctx: PrecisionContext,
    symmetric: bool,
}

impl MatrixMP {
    pub fn zeros(ctx: &PrecisionContext, rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ctx.zero(); rows * cols],
            ctx: *ctx,
            symmetric: rows == cols,
        }
    }

    pub fn identity(ctx: &PrecisionContext, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.data[i * n + i] = ctx.one();
        }
        m
    }

    pub fn diagonal(ctx: &PrecisionContext, values: &[Real]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(ctx, n, n);
        for (i, v) in values.iter().enumerate() {
            m.data[i * n + i] = ctx.round(v);
        }
        m
    }

    /// Entries from `f(i, j)`, evaluated in parallel; the result does not
    /// depend on scheduling.
    pub fn from_fn<F>(ctx: &PrecisionContext, rows: usize, cols: usize, f: F) -> Self
    where
        F: Fn(usize, usize) -> Real + Sync,
    {
        let data = (0..rows * cols)
            .into_par_iter()
            .map(|idx| ctx.round(&f(idx / cols, idx % cols)))
            .collect();
        Self {
            rows,
            cols,
            data,
            ctx: *ctx,
            symmetric: false,
        }
    }

    /// Symmetric matrix from the upper triangle `f(i, j)`, `i <= j`.
    pub fn symmetric_from_fn<F>(ctx: &PrecisionContext, n: usize, f: F) -> Self
    where
        F: Fn(usize, usize) -> Real + Sync,
    {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let values: Vec<Real> = pairs
            .par_iter()
            .map(|&(i, j)| ctx.round(&f(i, j)))
            .collect();
        let mut m = Self::zeros(ctx, n, n);
        for ((i, j), v) in pairs.into_iter().zip(values) {
            m.data[j * n + i] = v.clone();
            m.data[i * n + j] = v;
        }
        m.symmetric = true;
        m
    }

    pub fn from_rows(ctx: &PrecisionContext, rows: Vec<Vec<Real>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let data = rows.into_iter().flatten().map(|v| ctx.round(&v)).collect();
        Ok(Self {
            rows: r,
            cols: c,
            data,
            ctx: *ctx,
            symmetric: false,
        })
    }

    /// Convenience constructor from small integer tables.
    pub fn from_i64_rows(ctx: &PrecisionContext, rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            ctx,
            rows.iter()
                .map(|row| row.iter().map(|&v| ctx.int(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn context(&self) -> &PrecisionContext {
        &self.ctx
    }

    /// True when symmetry holds by construction.
    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn get(&self, i: usize, j: usize) -> &Real {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Real) {
        self.data[i * self.cols + j] = self.ctx.round(&value);
        self.symmetric = false;
    }

    pub fn row(&self, i: usize) -> &[Real] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Real> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[Real] {
        &self.data
    }

    pub fn diagonal_entries(&self) -> Vec<Real> {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.ctx, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t.symmetric = self.symmetric;
        t
    }

    /// `(A + Aᵀ)/2`, flagged symmetric.
    pub fn symmetrized(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "cannot symmetrize a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        Ok(Self::symmetric_from_fn(&self.ctx, n, |i, j| {
            if i == j {
                self.get(i, i).clone()
            } else {
                (self.get(i, j) + self.get(j, i)) / 2
            }
        }))
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> Real {
        self.data
            .iter()
            .map(Real::abs)
            .fold(self.ctx.zero(), Real::max)
    }

    /// Largest entry magnitude of `A - Aᵀ`.
    pub fn asymmetry(&self) -> Real {
        let mut worst = self.ctx.zero();
        for i in 0..self.rows {
            for j in (i + 1)..self.cols.min(self.rows) {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn trace(&self) -> Real {
        self.diagonal_entries()
            .into_iter()
            .fold(self.ctx.zero(), |acc, v| acc + v)
    }

    pub fn frobenius_norm(&self) -> Real {
        let sum = Float::with_val(
            self.ctx.bits(),
            Float::dot(self.data.iter().map(|v| (&v.0, &v.0))),
        );
        Real::from_float_unchecked(sum)
            .sqrt()
            .expect("sum of squares is non-negative")
    }

    fn check_same_shape(&self, other: &Self, op: &str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{op}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "add")?;
        let mut out = self.zip_map(other, |a, b| a + b);
        out.symmetric = self.symmetric && other.symmetric;
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "sub")?;
        let mut out = self.zip_map(other, |a, b| a - b);
        out.symmetric = self.symmetric && other.symmetric;
        Ok(out)
    }

    pub fn scale(&self, factor: &Real) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v *= factor);
        out
    }

    fn zip_map(&self, other: &Self, f: impl Fn(&Real, &Real) -> Real) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(a, b))
                .collect(),
            ctx: self.ctx,
            symmetric: false,
        }
    }

    /// Matrix product. Each entry is one correctly rounded dot product, so
    /// the result is independent of how rows are distributed over threads.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "multiply: {}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.ctx != other.ctx {
            return Err(Error::Precision(
                "multiply: operands carry different precision contexts".into(),
            ));
        }
        let bits = self.ctx.bits();
        let columns: Vec<Vec<&Float>> = (0..other.cols)
            .map(|j| (0..other.rows).map(|k| &other.get(k, j).0).collect())
            .collect();
        let (rows, cols) = (self.rows, other.cols);
        let data: Vec<Real> = (0..rows * cols)
            .into_par_iter()
            .map(|idx| {
                let (i, j) = (idx / cols, idx % cols);
                let row = self.row(i).iter().map(|v| &v.0);
                let dot = Float::dot(row.zip(columns[j].iter().copied()));
                Real::from_float_unchecked(Float::with_val(bits, dot))
            })
            .collect();
        Ok(Self {
            rows,
            cols,
            data,
            ctx: self.ctx,
            symmetric: false,
        })
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Real]) -> Result<Vec<Real>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "apply: {}x{} to a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let bits = self.ctx.bits();
        Ok((0..self.rows)
            .map(|i| {
                let dot = Float::dot(self.row(i).iter().map(|a| &a.0).zip(v.iter().map(|b| &b.0)));
                Real::from_float_unchecked(Float::with_val(bits, dot))
            })
            .collect())
    }

    /// `vᵀ A w`.
    pub fn bilinear(&self, v: &[Real], w: &[Real]) -> Result<Real> {
        let aw = self.apply(w)?;
        if v.len() != self.rows {
            return Err(Error::Dimension("bilinear: left vector length".into()));
        }
        let dot = Float::dot(v.iter().map(|a| &a.0).zip(aw.iter().map(|b| &b.0)));
        Ok(Real::from_float_unchecked(Float::with_val(
            self.ctx.bits(),
            dot,
        )))
    }

    /// Largest `|A_ij - B_ij|`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<Real> {
        self.check_same_shape(other, "max_abs_diff")?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(self.ctx.zero(), Real::max))
    }

    /// Reversed index order on both axes, `A_{(n-1-i),(n-1-j)}`.
    pub fn reflected(&self) -> Self {
        let mut out = Self::zeros(&self.ctx, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[i * self.cols + j] =
                    self.get(self.rows - 1 - i, self.cols - 1 - j).clone();
            }
        }
        out.symmetric = self.symmetric;
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(50).unwrap()
    }

    #[test]
    fn identity_times_a_is_a() {
        let ctx = ctx();
        let a = MatrixMP::from_i64_rows(&ctx, &[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]).unwrap();
        let p = MatrixMP::identity(&ctx, 3).multiply(&a).unwrap();
        assert!(p.max_abs_diff(&a).unwrap().is_zero());
    }

    #[test]
    fn swap_squared_is_identity() {
        let ctx = ctx();
        let s = MatrixMP::from_i64_rows(&ctx, &[&[0, 1], &[1, 0]]).unwrap();
        let p = s.multiply(&s).unwrap();
        assert!(p
            .max_abs_diff(&MatrixMP::identity(&ctx, 2))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn multiply_rejects_mismatched_shapes() {
        let ctx = ctx();
        let a = MatrixMP::zeros(&ctx, 2, 3);
        let b = MatrixMP::zeros(&ctx, 2, 3);
        assert!(matches!(a.multiply(&b), Err(Error::Dimension(_))));
    }

    #[test]
    fn multiply_rejects_mixed_contexts() {
        let a = MatrixMP::identity(&ctx(), 2);
        let b = MatrixMP::identity(&PrecisionContext::new(60).unwrap(), 2);
        assert!(matches!(a.multiply(&b), Err(Error::Precision(_))));
    }

    #[test]
    fn symmetrized_is_exactly_symmetric() {
        let ctx = ctx();
        let a = MatrixMP::from_fn(&ctx, 4, 4, |i, j| ctx.ratio((i * 7 + j) as i64, 3));
        let s = a.symmetrized().unwrap();
        assert!(s.is_symmetric());
        assert!(s.asymmetry().is_zero());
        assert_eq!(s.trace(), a.trace());
    }

    #[test]
    fn reflection_reverses_both_axes() {
        let ctx = ctx();
        let a = MatrixMP::from_i64_rows(&ctx, &[&[1, 2], &[3, 4]]).unwrap();
        let r = a.reflected();
        assert_eq!(*r.get(0, 0), ctx.int(4));
        assert_eq!(*r.get(0, 1), ctx.int(3));
    }
}

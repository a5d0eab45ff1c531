use super::MatrixMP;
use crate::error::{Error, Result};
use crate::precision::Real;
use rug::Float;

fn dot_prefix(a: &[Real], b: &[Real], len: usize, bits: u32) -> Real {
    let dot = Float::dot(
        a[..len]
            .iter()
            .map(|x| &x.0)
            .zip(b[..len].iter().map(|y| &y.0)),
    );
    Real::from_float_unchecked(Float::with_val(bits, dot))
}

/// Cholesky factor `L` (lower triangular, positive diagonal) with `G = L Lᵀ`.
pub fn cholesky(g: &MatrixMP) -> Result<MatrixMP> {
    if !g.is_square() {
        return Err(Error::Dimension(format!(
            "cholesky of a {}x{} matrix",
            g.rows(),
            g.cols()
        )));
    }
    let n = g.rows();
    let ctx = *g.context();
    let bits = ctx.bits();
    // Rows of L stored densely so prefixes can go straight into dot products.
    let mut l: Vec<Vec<Real>> = vec![vec![ctx.zero(); n]; n];
    for j in 0..n {
        let pivot = g.get(j, j) - dot_prefix(&l[j], &l[j], j, bits);
        if pivot <= 0 {
            return Err(Error::NotPositiveDefinite { index: j, pivot });
        }
        let diag = pivot.sqrt()?;
        for i in (j + 1)..n {
            let s = g.get(i, j) - dot_prefix(&l[i], &l[j], j, bits);
            l[i][j] = s / &diag;
        }
        l[j][j] = diag;
    }
    MatrixMP::from_rows(&ctx, l)
}

/// Inverse of a lower-triangular matrix by forward substitution.
pub fn invert_lower_triangular(l: &MatrixMP) -> Result<MatrixMP> {
    if !l.is_square() {
        return Err(Error::Dimension(
            "triangular inverse of a non-square matrix".into(),
        ));
    }
    let n = l.rows();
    let ctx = *l.context();
    let mut x = MatrixMP::zeros(&ctx, n, n);
    for j in 0..n {
        let d = l.get(j, j);
        if d.is_zero() {
            return Err(Error::SingularMatrix {
                index: j,
                magnitude: d.abs(),
            });
        }
        x.set(j, j, d.recip()?);
        for i in (j + 1)..n {
            let mut s = ctx.zero();
            for k in j..i {
                s += l.get(i, k) * x.get(k, j);
            }
            x.set(i, j, -(s / l.get(i, i)));
        }
    }
    Ok(x)
}

/// `L⁻¹ X L⁻ᵀ` given the already-inverted factor `L⁻¹`. A symmetric `X`
/// yields an exactly symmetric result.
pub fn congruence(l_inv: &MatrixMP, x: &MatrixMP) -> Result<MatrixMP> {
    if l_inv.cols() != x.rows() || !x.is_square() {
        return Err(Error::Dimension(format!(
            "congruence: factor {}x{} with matrix {}x{}",
            l_inv.rows(),
            l_inv.cols(),
            x.rows(),
            x.cols()
        )));
    }
    let product = l_inv.multiply(x)?.multiply(&l_inv.transpose())?;
    if x.is_symmetric() {
        product.symmetrized()
    } else {
        Ok(product)
    }
}

/// Matrix inverse. Symmetric positive definite input goes through Cholesky;
/// anything else through Gauss-Jordan elimination with partial pivoting.
pub fn invert(a: &MatrixMP) -> Result<MatrixMP> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "invert a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    if a.is_symmetric() || a.asymmetry().is_zero() {
        if let Ok(l) = cholesky(a) {
            let l_inv = invert_lower_triangular(&l)?;
            return l_inv.transpose().multiply(&l_inv)?.symmetrized();
        }
    }
    invert_lu(a)
}

fn invert_lu(a: &MatrixMP) -> Result<MatrixMP> {
    let n = a.rows();
    let ctx = *a.context();
    let threshold = a.max_abs() * ctx.ten_pow(-(ctx.decimal_digits() as i32 / 2));
    let mut work: Vec<Vec<Real>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    let mut inv: Vec<Vec<Real>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { ctx.one() } else { ctx.zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r, &s| {
                work[r][col]
                    .abs()
                    .total_cmp(&work[s][col].abs())
                    .then(s.cmp(&r))
            })
            .expect("non-empty range");
        let magnitude = work[pivot_row][col].abs();
        if magnitude <= threshold {
            return Err(Error::SingularMatrix {
                index: col,
                magnitude,
            });
        }
        work.swap(col, pivot_row);
        inv.swap(col, pivot_row);
        let p = work[col][col].recip()?;
        for j in 0..n {
            work[col][j] *= &p;
            inv[col][j] *= &p;
        }
        for r in 0..n {
            if r == col || work[r][col].is_zero() {
                continue;
            }
            let factor = work[r][col].clone();
            for j in 0..n {
                let w = &factor * &work[col][j];
                work[r][j] -= w;
                let v = &factor * &inv[col][j];
                inv[r][j] -= v;
            }
        }
    }
    MatrixMP::from_rows(&ctx, inv)
}

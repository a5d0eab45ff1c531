use super::{MatrixMP, SymEigen};
use crate::error::{Error, Result};
use crate::precision::Real;

/// Functional calculus `U f(Λ) Uᵀ`, symmetrized.
///
/// A domain error from `f` is re-raised with the offending eigenvalue and its
/// index (in ascending order) in the detail.
pub fn matrix_function<F>(f: F, eigen: &SymEigen) -> Result<MatrixMP>
where
    F: Fn(&Real) -> Result<Real>,
{
    let values = eigen
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(index, lambda)| {
            f(lambda).map_err(|err| match err {
                Error::Domain {
                    function, detail, ..
                } => Error::Domain {
                    function,
                    argument: lambda.clone(),
                    detail: format!("eigenvalue index {index}: {detail}"),
                },
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    spectral_sum(eigen, &values)
}

/// `U diag(values) Uᵀ` for precomputed spectral values.
pub fn spectral_sum(eigen: &SymEigen, values: &[Real]) -> Result<MatrixMP> {
    let u = &eigen.eigenvectors;
    if values.len() != u.cols() {
        return Err(Error::Dimension(format!(
            "{} spectral values for {} eigenvectors",
            values.len(),
            u.cols()
        )));
    }
    let ctx = *u.context();
    let scaled = MatrixMP::from_fn(&ctx, u.rows(), u.cols(), |i, j| u.get(i, j) * &values[j]);
    scaled.multiply(&u.transpose())?.symmetrized()
}

/// `U Λ Uᵀ`.
pub fn reconstruct(eigen: &SymEigen) -> Result<MatrixMP> {
    spectral_sum(eigen, &eigen.eigenvalues)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sym_eigen;
    use crate::precision::{arcoth, PrecisionContext};

    #[test]
    fn identity_function_reconstructs() {
        let ctx = PrecisionContext::new(60).unwrap();
        let a = MatrixMP::from_i64_rows(&ctx, &[&[4, 1, 0], &[1, 3, 1], &[0, 1, 2]]).unwrap();
        let e = sym_eigen(&a).unwrap();
        let back = matrix_function(|x| Ok(x.clone()), &e).unwrap();
        assert!(back.max_abs_diff(&a).unwrap() < ctx.tolerance(20));
    }

    #[test]
    fn exp_of_log_two_diagonal() {
        let ctx = PrecisionContext::new(60).unwrap();
        let ln2 = ctx.int(2).ln().unwrap();
        let a = MatrixMP::diagonal(&ctx, &[ctx.zero(), ln2]);
        let e = sym_eigen(&a).unwrap();
        let out = matrix_function(|x| x.exp(), &e).unwrap();
        let expected = MatrixMP::diagonal(&ctx, &[ctx.one(), ctx.int(2)]);
        assert!(out.max_abs_diff(&expected).unwrap() < ctx.tolerance(5));
    }

    /// [[3,1],[1,3]] has eigenpairs 2 ↦ (1,-1)/√2 and 4 ↦ (1,1)/√2, so
    /// arcoth of it is [[p, q], [q, p]] with p = (arcoth 4 + arcoth 2)/2 and
    /// q = (arcoth 4 - arcoth 2)/2.
    #[test]
    fn arcoth_two_by_two_closed_form() {
        let ctx = PrecisionContext::new(80).unwrap();
        let a = MatrixMP::from_i64_rows(&ctx, &[&[3, 1], &[1, 3]]).unwrap();
        let out = matrix_function(arcoth, &sym_eigen(&a).unwrap()).unwrap();
        let a2 = ctx.int(3).ln().unwrap() / 2;
        let a4 = (ctx.int(5) / ctx.int(3)).ln().unwrap() / 2;
        let p = (&a4 + &a2) / 2;
        let q = (&a4 - &a2) / 2;
        let tol = ctx.tolerance(5);
        assert!((out.get(0, 0) - &p).abs() < tol);
        assert!((out.get(1, 1) - &p).abs() < tol);
        assert!((out.get(0, 1) - &q).abs() < tol);
        assert!(out.is_symmetric());
    }

    #[test]
    fn domain_error_names_eigenvalue_index() {
        let ctx = PrecisionContext::new(40).unwrap();
        let a = MatrixMP::diagonal(&ctx, &[ctx.int(-3), ctx.ratio(1, 2), ctx.int(5)]);
        let err = matrix_function(arcoth, &sym_eigen(&a).unwrap()).unwrap_err();
        match err {
            Error::Domain {
                function,
                argument,
                detail,
            } => {
                assert_eq!(function, "arcoth");
                assert_eq!(argument, ctx.ratio(1, 2));
                assert!(detail.contains("index 1"), "{detail}");
            }
            other => panic!("{other:?}"),
        }
    }
}

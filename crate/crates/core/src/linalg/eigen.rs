use super::MatrixMP;
use crate::error::{Error, Result};
use crate::precision::{PrecisionContext, Real};
use rug::ops::SubFrom;
use rug::{Assign, Float};

/// Spectral decomposition `A = U Λ Uᵀ` of a symmetric matrix.
#[derive(Clone, Debug)]
pub struct SymEigen {
    /// Ascending.
    pub eigenvalues: Vec<Real>,
    /// Orthonormal columns, in the order of `eigenvalues`.
    pub eigenvectors: MatrixMP,
    /// `max |A U - U Λ|`.
    pub residual: Real,
    pub sweeps: usize,
}

impl SymEigen {
    pub fn dimension(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn context(&self) -> &PrecisionContext {
        self.eigenvectors.context()
    }

    /// `max |UᵀU - I|`.
    pub fn orthogonality_defect(&self) -> Result<Real> {
        let u = &self.eigenvectors;
        let utu = u.transpose().multiply(u)?;
        utu.max_abs_diff(&MatrixMP::identity(u.context(), u.cols()))
    }
}

#[derive(Clone, Debug)]
pub struct JacobiOptions {
    pub max_sweeps: usize,
    /// Convergence threshold on the off-diagonal Frobenius mass relative to
    /// `‖A‖_F`.
    pub relative_tolerance: Real,
}

impl JacobiOptions {
    /// `100·log10(digits)` sweeps; sweeps continue until the off-diagonal
    /// mass drops below `10^-digits · ‖A‖_F`, which leaves the guard digits
    /// as headroom above the rounding floor.
    pub fn for_context(ctx: &PrecisionContext) -> Self {
        Self {
            max_sweeps: (100.0 * (ctx.decimal_digits() as f64).log10()).ceil() as usize,
            relative_tolerance: ctx.tolerance(0),
        }
    }
}

pub fn sym_eigen(a: &MatrixMP) -> Result<SymEigen> {
    sym_eigen_with(a, &JacobiOptions::for_context(a.context()))
}

/// Cyclic Jacobi eigensolver.
///
/// Rotations sweep the strict upper triangle in row-cyclic order
/// `(0,1), (0,2), …, (0,n-1), (1,2), …, (n-2,n-1)`. The sequence of rotations
/// is fixed for a given input and context, so results are bit-reproducible.
/// Eigenvalue ties are ordered by their diagonal position at convergence.
pub fn sym_eigen_with(a: &MatrixMP, options: &JacobiOptions) -> Result<SymEigen> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "eigen-decomposition of a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    if !a.is_symmetric() {
        let asymmetry = a.asymmetry();
        if !asymmetry.is_zero() {
            return Err(Error::NotSymmetric { asymmetry });
        }
    }
    let ctx = *a.context();
    let bits = ctx.bits();
    let n = a.rows();

    let mut m: Vec<Float> = a
        .entries()
        .iter()
        .map(|v| Float::with_val(bits, &v.0))
        .collect();
    let mut v: Vec<Float> = (0..n * n)
        .map(|idx| Float::with_val(bits, u32::from(idx / n == idx % n)))
        .collect();

    let norm = a.frobenius_norm();
    let target = Float::with_val(bits, &norm.0 * &options.relative_tolerance.0);
    // Below this an off-diagonal entry cannot change any diagonal entry at
    // working precision; it is zeroed without a rotation.
    let negligible = Float::with_val(bits, &norm.0 >> (bits + 8));

    let off_diagonal = |m: &[Float]| -> Float {
        let upper = (0..n).flat_map(|p| ((p + 1)..n).map(move |q| p * n + q));
        let sum = Float::with_val(bits, Float::dot(upper.map(|idx| (&m[idx], &m[idx]))));
        Float::with_val(bits, sum * 2u32).sqrt()
    };

    let mut theta = Float::new(bits);
    let mut t = Float::new(bits);
    let mut c = Float::new(bits);
    let mut s = Float::new(bits);
    let mut tau = Float::new(bits);
    let mut tmp = Float::new(bits);
    let mut g = Float::new(bits);
    let mut h = Float::new(bits);

    let mut sweeps = 0;
    loop {
        let off = off_diagonal(&m);
        if off <= target || n < 2 {
            break;
        }
        if sweeps == options.max_sweeps {
            return Err(Error::NoConvergence {
                sweeps,
                off_diagonal: Real::from_float_unchecked(off),
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = &m[p * n + q];
                if apq.is_zero() {
                    continue;
                }
                if apq.cmp_abs(&negligible) == Some(std::cmp::Ordering::Less) {
                    m[p * n + q] = Float::new(bits);
                    m[q * n + p] = Float::new(bits);
                    continue;
                }
                // theta = (a_qq - a_pp) / (2 a_pq)
                theta.assign(&m[q * n + q] - &m[p * n + p]);
                tmp.assign(&m[p * n + q] * 2u32);
                theta /= &tmp;
                // t = sign(theta) / (|theta| + sqrt(theta² + 1))
                tmp.assign(theta.square_ref());
                tmp += 1u32;
                tmp.sqrt_mut();
                t.assign(theta.abs_ref());
                t += &tmp;
                t.recip_mut();
                if theta.is_sign_negative() {
                    t = -t;
                }
                // c = 1/sqrt(t² + 1), s = t c, tau = s / (1 + c)
                c.assign(t.square_ref());
                c += 1u32;
                c.sqrt_mut();
                c.recip_mut();
                s.assign(&t * &c);
                tmp.assign(&c + 1u32);
                tau.assign(&s / &tmp);

                tmp.assign(&t * &m[p * n + q]);
                m[p * n + p] -= &tmp;
                m[q * n + q] += &tmp;
                m[p * n + q] = Float::new(bits);
                m[q * n + p] = Float::new(bits);

                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    rotate_pair(&mut m, r * n + p, r * n + q, &s, &tau, &mut g, &mut h);
                    g.assign(&m[r * n + p]);
                    m[p * n + r].assign(&g);
                    h.assign(&m[r * n + q]);
                    m[q * n + r].assign(&h);
                }
                for r in 0..n {
                    rotate_pair(&mut v, r * n + p, r * n + q, &s, &tau, &mut g, &mut h);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        m[i * n + i]
            .partial_cmp(&m[j * n + j])
            .unwrap()
            .then(i.cmp(&j))
    });
    let eigenvalues: Vec<Real> = order
        .iter()
        .map(|&i| Real::from_float_unchecked(m[i * n + i].clone()))
        .collect();
    let eigenvectors = MatrixMP::from_fn(&ctx, n, n, |r, col| {
        Real::from_float_unchecked(v[r * n + order[col]].clone())
    });

    let au = a.multiply(&eigenvectors)?;
    let mut residual = ctx.zero();
    for r in 0..n {
        for (col, lambda) in eigenvalues.iter().enumerate() {
            let diff = au.get(r, col) - eigenvectors.get(r, col) * lambda;
            residual = residual.max(diff.abs());
        }
    }

    Ok(SymEigen {
        eigenvalues,
        eigenvectors,
        residual,
        sweeps,
    })
}

/// Applies the plane rotation to the pair `(x_p, x_q)`:
/// `x_p ← x_p - s (x_q + tau x_p)`, `x_q ← x_q + s (x_p - tau x_q)`.
fn rotate_pair(
    x: &mut [Float],
    ip: usize,
    iq: usize,
    s: &Float,
    tau: &Float,
    g: &mut Float,
    h: &mut Float,
) {
    g.assign(&x[ip] * tau);
    *g += &x[iq];
    *g *= s;
    h.assign(&x[iq] * tau);
    h.sub_from(&x[ip]);
    *h *= s;
    x[ip] -= &*g;
    x[iq] += &*h;
}

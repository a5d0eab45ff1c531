//! Momentum-space evaluation of `A^s` matrix elements, used to cross-check
//! the closed-form kernel route.
//!
//! With `q = p h` and `μ = m h`, the unit-square pair integral is
//!
//! `J_ab(d) = h^(-1-2s)/π ∫_0^∞ (q² + μ²)^s Re[e^{-iqd} F_a(q) conj F_b(q)] dq`
//!
//! where `F_a(q) = ∫_0^1 φ_a(s) e^{-iqs} ds`. The integrand decays like
//! `q^(2s-2)` and oscillates, so `[0, Q]` is covered by graded Gauss-Legendre
//! panels and `[Q, ∞)` by the asymptotic expansion of each exponential term.

use super::basis::{BasisSet, Slope};
use crate::error::{Error, Result};
use crate::precision::{PrecisionContext, Real};
use crate::quadrature::gauss_legendre;

#[derive(Clone, Debug)]
struct Complex {
    re: Real,
    im: Real,
}

impl Complex {
    fn mul(&self, other: &Self) -> Self {
        Self {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    fn scale(&self, f: &Real) -> Self {
        Self {
            re: &self.re * f,
            im: &self.im * f,
        }
    }

    fn add(&self, other: &Self) -> Self {
        Self {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
        }
    }

    fn abs(&self) -> Real {
        (self.re.square() + self.im.square())
            .sqrt()
            .expect("non-negative")
    }

    /// `e^{iθ}`.
    fn cis(theta: &Real) -> Self {
        let (sin, cos) = theta.sin_cos();
        Self { re: cos, im: sin }
    }
}

/// `F_a(q)`; Taylor series below `|q| = 1`, closed form above.
fn profile_transform(slope: Slope, q: &Real, ctx: &PrecisionContext) -> Complex {
    if q.abs() < 1 {
        let tol = ctx.tolerance(0).square();
        let mut re = ctx.zero();
        let mut im = ctx.zero();
        let mut power = ctx.one(); // q^n / n!
        for n in 0i32.. {
            let denom = match slope {
                Slope::Rising => ctx.int(n as i64 + 2),
                Slope::Falling => ctx.int((n as i64 + 1) * (n as i64 + 2)),
            };
            let term = &power / denom;
            match n % 4 {
                0 => re += &term,
                1 => im -= &term,
                2 => re -= &term,
                _ => im += &term,
            }
            if term.abs() < tol && n > 2 {
                break;
            }
            power = power * q / (n + 1);
        }
        return Complex { re, im };
    }
    let (sin, cos) = q.sin_cos();
    let q_sq = q.square();
    match slope {
        Slope::Rising => Complex {
            re: (&cos + q * &sin - 1) / &q_sq,
            im: (q * &cos - &sin) / &q_sq,
        },
        Slope::Falling => Complex {
            re: -(cos - 1) / &q_sq,
            im: (sin - q) / q_sq,
        },
    }
}

/// `∫ e_j(x) e^{-ipx} dx` as `(re, im)`.
pub fn element_fourier(basis: &BasisSet, j: usize, p: &Real) -> (Real, Real) {
    let grid = basis.grid();
    let ctx = grid.context();
    let h = grid.spacing();
    let q = p * h;
    let mut total = Complex {
        re: ctx.zero(),
        im: ctx.zero(),
    };
    for piece in &basis.elements()[j].pieces {
        let phase = Complex::cis(&-(p * grid.node(piece.cell)));
        total = total.add(&phase.mul(&profile_transform(piece.slope, &q, ctx)).scale(h));
    }
    (total.re, total.im)
}

/// Exponential terms `coeff · e^{i f q} q^-n` of `F_a` for `q ≥ 1`.
fn asymptotic_terms(slope: Slope) -> [(i64, i32, (i64, i64)); 3] {
    match slope {
        Slope::Rising => [(-1, 2, (1, 0)), (-1, 1, (0, 1)), (0, 2, (-1, 0))],
        Slope::Falling => [(0, 2, (1, 0)), (0, 1, (0, -1)), (-1, 2, (-1, 0))],
    }
}

#[derive(Clone, Debug)]
pub struct MomentumOptions {
    /// Requested accuracy in decimal digits, relative to the result.
    pub target_digits: u32,
    /// Nodes per panel; the error estimate compares against `3/2` as many.
    pub points: usize,
    /// Start of the asymptotic tail; chosen from the target when `None`.
    pub cutoff: Option<f64>,
}

impl MomentumOptions {
    pub fn for_context(ctx: &PrecisionContext) -> Self {
        Self {
            target_digits: ctx.decimal_digits().saturating_sub(10),
            points: 40,
            cutoff: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct QuadratureEstimate {
    pub value: Real,
    pub error: Real,
}

struct Integrand<'a> {
    ctx: &'a PrecisionContext,
    a: Slope,
    b: Slope,
    d: i64,
    s: Real,
    mu_sq: Real,
}

impl Integrand<'_> {
    fn eval(&self, q: &Real) -> Real {
        let fa = profile_transform(self.a, q, self.ctx);
        let fb = profile_transform(self.b, q, self.ctx);
        let phase = Complex::cis(&-(q * self.d as i32));
        let product = phase.mul(&fa).mul(&fb.conj());
        let weight = (q.square() + &self.mu_sq)
            .pow(&self.s)
            .expect("positive base");
        product.re * weight
    }
}

/// `∫_Q^∞ e^{icq} q^-β dq` for `c ≠ 0` by its asymptotic series, truncated
/// at the smallest term, which is returned as the error.
fn oscillatory_tail(c: i64, beta: &Real, cutoff: &Real, ctx: &PrecisionContext) -> (Complex, Real) {
    let c_real = ctx.int(c);
    // −e^{icQ} Σ_k (β)_k Q^(−β−k) / (ic)^(k+1); 1/(ic) = −i/c
    let mut factor = Complex::cis(&(&c_real * cutoff)).scale(&ctx.int(-1));
    let inv_ic = Complex {
        re: ctx.zero(),
        im: -c_real.recip().expect("nonzero frequency"),
    };
    let mut q_pow = cutoff.pow(&-beta.clone()).expect("positive cutoff");
    let mut sum = Complex {
        re: ctx.zero(),
        im: ctx.zero(),
    };
    let mut rising = ctx.one();
    let mut previous: Option<Real> = None;
    for k in 0i32.. {
        factor = factor.mul(&inv_ic);
        let term = factor.scale(&(&rising * &q_pow));
        let size = term.abs();
        if let Some(prev) = &previous {
            if size >= *prev || size < ctx.tolerance(0).square() {
                return (sum, size.min(prev.clone()));
            }
        }
        sum = sum.add(&term);
        previous = Some(size);
        rising *= &(beta + k);
        q_pow = q_pow / cutoff;
    }
    unreachable!()
}

/// Momentum-space `J_ab(d)` with an error estimate.
#[allow(clippy::too_many_arguments)]
pub fn momentum_pair_integral(
    ctx: &PrecisionContext,
    mass: &Real,
    h: &Real,
    exponent: &Real,
    a: Slope,
    b: Slope,
    d: i64,
    options: &MomentumOptions,
) -> Result<QuadratureEstimate> {
    let work = ctx.widened(10);
    let s = work.round(exponent);
    let mu = work.round(mass) * work.round(h);
    let mu_sq = mu.square();
    let target = options.target_digits as f64;
    let cutoff_f64 = options
        .cutoff
        .unwrap_or((2.3 * target + 10.0).max(2.0 * mu.to_f64() + 1.0));
    let cutoff = work.from_f64(cutoff_f64.ceil())?;
    if cutoff <= &mu * 2 {
        return Err(Error::InvalidConfig(format!(
            "momentum cutoff {cutoff} must exceed twice the scaled mass {mu}"
        )));
    }
    let integrand = Integrand {
        ctx: &work,
        a,
        b,
        d,
        s: s.clone(),
        mu_sq: mu_sq.clone(),
    };

    // graded panels: width ≤ half the distance to the branch points ±iμ, and
    // short enough to resolve the highest frequency |d| + 1
    let cap = (2.0 / (d.abs() as f64 + 2.0)).min(1.0);
    let mut edges = vec![0.0f64];
    let mut q = 0.0f64;
    while q < cutoff_f64.ceil() {
        let width = (0.5 * q.max(mu.to_f64())).clamp(1e-6, cap);
        q = (q + width).min(cutoff_f64.ceil());
        edges.push(q);
    }
    let coarse = gauss_legendre(options.points, &work);
    let fine = gauss_legendre(options.points + options.points / 2, &work);
    let mut body = work.zero();
    let mut body_fine = work.zero();
    for pair in edges.windows(2) {
        let lo = work.from_f64(pair[0])?;
        let hi = work.from_f64(pair[1])?;
        body += coarse.integrate(&lo, &hi, |q| integrand.eval(q));
        body_fine += fine.integrate(&lo, &hi, |q| integrand.eval(q));
    }

    // tail: Σ over exponential terms, binomial expansion of (q² + μ²)^s
    let mut tail = work.zero();
    let mut tail_error = work.zero();
    let mut merged: Vec<(i64, i32, Complex)> = Vec::new();
    for (fa, na, (ar, ai)) in asymptotic_terms(a) {
        for (fb, nb, (br, bi)) in asymptotic_terms(b) {
            let ca = Complex {
                re: work.int(ar),
                im: work.int(ai),
            };
            let cb = Complex {
                re: work.int(br),
                im: work.int(bi),
            };
            let coefficient = ca.mul(&cb.conj());
            let freq = -d + fa - fb;
            let power = na + nb;
            match merged
                .iter_mut()
                .find(|(f, n, _)| *f == freq && *n == power)
            {
                Some(entry) => entry.2 = entry.2.add(&coefficient),
                None => merged.push((freq, power, coefficient)),
            }
        }
    }
    for (freq, power, coefficient) in merged {
        if coefficient.re.is_zero() && coefficient.im.is_zero() {
            continue;
        }
        let mut binom = work.one();
        let mut mu_pow = work.one();
        for j in 0i32.. {
            let beta = -(&s * 2) + (power + 2 * j);
            let weight = &binom * &mu_pow;
            let (integral, error) = if freq == 0 {
                let value = cutoff.pow(&-(&beta - 1)).expect("positive") / (&beta - 1);
                (
                    Complex {
                        re: value,
                        im: work.zero(),
                    },
                    work.zero(),
                )
            } else {
                oscillatory_tail(freq, &beta, &cutoff, &work)
            };
            let contribution = coefficient.mul(&integral).scale(&weight);
            tail += &contribution.re;
            tail_error += error * weight.abs() * coefficient.abs();
            let bound = weight.abs() * cutoff.pow(&-(&beta - 1)).expect("positive");
            if bound < work.tolerance(0).square() {
                break;
            }
            // binom(s, j+1) = binom(s, j) (s - j) / (j + 1)
            binom = binom * (&s - j) / (j + 1);
            mu_pow *= &mu_sq;
        }
    }

    let scale = h.pow(&(-(exponent * 2) - 1))? / work.pi();
    let value = (&body_fine + &tail) * &scale;
    let error = ((&body_fine - &body).abs() + tail_error) * scale.abs();
    let bound = ctx.ten_pow(-(options.target_digits as i32)) * value.abs().max(ctx.ten_pow(-10));
    if error > bound {
        return Err(Error::QuadratureNotConverged {
            estimate: ctx.round(&error),
        });
    }
    Ok(QuadratureEstimate {
        value: ctx.round(&value),
        error: ctx.round(&error),
    })
}

/// Momentum-space `(A^s)_jk` with an error estimate.
pub fn momentum_entry(
    basis: &BasisSet,
    mass: &Real,
    exponent: &Real,
    j: usize,
    k: usize,
    options: &MomentumOptions,
) -> Result<QuadratureEstimate> {
    let grid = basis.grid();
    let ctx = grid.context();
    let h = grid.spacing();
    let mut value = ctx.zero();
    let mut error = ctx.zero();
    for p in &basis.elements()[j].pieces {
        for q in &basis.elements()[k].pieces {
            let d = p.cell as i64 - q.cell as i64;
            let part =
                momentum_pair_integral(ctx, mass, h, exponent, p.slope, q.slope, d, options)?;
            value += part.value;
            error += part.error;
        }
    }
    let h_sq = h.square();
    Ok(QuadratureEstimate {
        value: value * &h_sq,
        error: error * h_sq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretization::kernel::PowerKernel;

    #[test]
    fn taylor_and_closed_form_agree_at_the_switch() {
        let ctx = PrecisionContext::new(60).unwrap();
        let below = ctx.one() - ctx.ten_pow(-30);
        let above = ctx.one();
        for slope in [Slope::Falling, Slope::Rising] {
            let t = profile_transform(slope, &below, &ctx);
            let c = profile_transform(slope, &above, &ctx);
            assert!((&t.re - &c.re).abs() < ctx.ten_pow(-28));
            assert!((&t.im - &c.im).abs() < ctx.ten_pow(-28));
        }
    }

    #[test]
    fn transforms_at_zero_are_the_means() {
        let ctx = PrecisionContext::new(40).unwrap();
        let z = ctx.zero();
        assert_eq!(
            profile_transform(Slope::Rising, &z, &ctx).re,
            ctx.ratio(1, 2)
        );
        assert_eq!(
            profile_transform(Slope::Falling, &z, &ctx).re,
            ctx.ratio(1, 2)
        );
    }

    #[test]
    fn agrees_with_kernel_route_on_pair_integrals() {
        let ctx = PrecisionContext::new(50).unwrap();
        let m = ctx.one();
        let h = ctx.ratio(1, 2);
        let s = ctx.ratio(-1, 4);
        let kernel = PowerKernel::new(&ctx, &m, &h, &s, 6).unwrap();
        let options = MomentumOptions {
            target_digits: 30,
            points: 30,
            cutoff: None,
        };
        for (a, b, d) in [
            (Slope::Falling, Slope::Falling, 0),
            (Slope::Rising, Slope::Falling, 0),
            (Slope::Falling, Slope::Rising, 1),
            (Slope::Rising, Slope::Rising, -2),
            (Slope::Falling, Slope::Rising, 3),
        ] {
            let q = momentum_pair_integral(&ctx, &m, &h, &s, a, b, d, &options).unwrap();
            let x = kernel.pair_integral(a, b, d);
            let gap = (&q.value - &x).abs();
            assert!(
                gap < ctx.ten_pow(-28) * x.abs(),
                "{a:?} {b:?} {d}: {} vs {}",
                q.value,
                x
            );
            assert!(gap <= q.error.clone() * 10 + ctx.ten_pow(-40));
        }
    }

    #[test]
    fn starved_rule_is_reported() {
        let ctx = PrecisionContext::new(50).unwrap();
        let options = MomentumOptions {
            target_digits: 40,
            points: 3,
            cutoff: None,
        };
        let result = momentum_pair_integral(
            &ctx,
            &ctx.one(),
            &ctx.ratio(1, 2),
            &ctx.ratio(-1, 4),
            Slope::Falling,
            Slope::Falling,
            0,
            &options,
        );
        assert!(matches!(result, Err(Error::QuadratureNotConverged { .. })));
    }
}

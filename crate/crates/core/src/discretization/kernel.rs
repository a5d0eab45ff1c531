//! Matrix elements of `A^s = (-∂² + m²)^s`, `-1/2 < s < 0`, between
//! piecewise-linear elements, from the convolution kernel
//!
//! `K(t) = C Σ_k [α_k |t|^(2k-2ν) - β_k |t|^(2k)]`, `ν = s + 1/2`,
//!
//! which is `|t|^(-ν) K_ν(m|t|)` up to normalization, expanded through
//! `K_ν = π (I_{-ν} - I_ν) / (2 sin νπ)`. Each term integrates in closed form
//! against the piecewise-cubic cross-correlation of two linear profiles. The
//! two series cancel to `e^{-m|t|}` from terms of size `e^{m|t|}`, which is
//! paid for with extra working digits.

use super::basis::{BasisSet, Slope};
use crate::error::{Error, Result};
use crate::linalg::MatrixMP;
use crate::precision::{PrecisionContext, Real};
use rayon::prelude::*;

/// `W_ab(w) = ∫ φ_a(s) φ_b(s - w) ds` as sixths of the coefficients of
/// `1, w, w², w³`, on `w ∈ [0, 1]` and `w ∈ [-1, 0]`; `a, b` index
/// `Slope::{Falling, Rising}`.
const CROSS_CORRELATION: [[[[i64; 4]; 2]; 2]; 2] = [
    [
        [[2, -3, 0, 1], [2, 3, 0, -1]],
        [[1, -3, 3, -1], [1, -3, -3, 1]],
    ],
    [
        [[1, 3, -3, -1], [1, 3, 3, 1]],
        [[2, -3, 0, 1], [2, 3, 0, -1]],
    ],
];

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// Coefficients (times 6) of `W(τ - d)` in powers of `τ`.
fn shifted_coefficients(w: &[i64; 4], d: i64) -> [i64; 4] {
    let mut out = [0i64; 4];
    for (i, &c) in w.iter().enumerate() {
        for (n, slot) in out.iter_mut().enumerate().take(i + 1) {
            *slot += c * binomial(i, n) * (-d).pow((i - n) as u32);
        }
    }
    out
}

/// Series kernel of `A^s` in cell units, `K(h τ)`, with closed-form moments.
#[derive(Clone, Debug)]
pub struct PowerKernel {
    ctx: PrecisionContext,
    work: PrecisionContext,
    h: Real,
    /// `1 - 2ν`.
    lead_exponent: Real,
    alpha: Vec<Real>,
    beta: Vec<Real>,
    /// `antiderivative[u][n] = ∫_0^u τ^n K(h τ) dτ` for integer `u ≤ reach`.
    antiderivative: Vec<[Real; 4]>,
}

impl PowerKernel {
    /// Kernel for separations up to `reach` cells.
    pub fn new(
        ctx: &PrecisionContext,
        mass: &Real,
        h: &Real,
        exponent: &Real,
        reach: usize,
    ) -> Result<Self> {
        if *mass <= 0 {
            return Err(Error::InvalidConfig(format!(
                "mass {mass} must be positive"
            )));
        }
        if *h <= 0 {
            return Err(Error::InvalidConfig(format!(
                "spacing {h} must be positive"
            )));
        }
        if !(*exponent > ctx.ratio(-1, 2) && *exponent < 0) {
            return Err(Error::InvalidConfig(format!(
                "exponent {exponent} outside (-1/2, 0)"
            )));
        }
        let reach_len = (reach.max(1) + 1) as f64;
        let t_max = h.to_f64() * reach_len;
        let cancellation = 2.0 * mass.to_f64() * t_max / std::f64::consts::LN_10;
        let extra = (cancellation + 5.0 * reach_len.log10() + 10.0).ceil() as u32;
        let work = ctx.widened(extra);

        let m = work.round(mass);
        let h = work.round(h);
        let s = work.round(exponent);
        let nu = &s + work.ratio(1, 2);
        let half_m = &m / 2;
        let pi = work.pi();
        let c = (&m * 2).pow(&nu)? * pi.sqrt()? / ((&nu * &pi).sin() * 2 * (-s.clone()).gamma()?);

        // α_k = (m/2)^(2k-ν) h^(2k-2ν) / (k! Γ(k+1-ν)), β_k likewise with +ν
        let q = (&half_m * &h).square();
        let mut alpha_k = c.clone() * half_m.pow(&-nu.clone())? * h.pow(&(-nu.clone() * 2))?
            / (work.one() - &nu).gamma()?;
        let mut beta_k = c * half_m.pow(&nu)? / (work.one() + &nu).gamma()?;

        let bits_target = work.ten_pow(-((work.decimal_digits() + work.guard_digits()) as i32));
        let reach_sq = work.int((reach.max(1) + 1) as i64).square();
        let peak = 0.5 * mass.to_f64() * t_max;
        let scale = alpha_k.abs().max(beta_k.abs());
        let mut alpha = Vec::new();
        let mut beta = Vec::new();
        let mut reach_pow = work.one();
        for k in 0usize.. {
            let kk = k as i32;
            let size = (alpha_k.abs() + beta_k.abs()) * &reach_pow;
            alpha.push(alpha_k.clone());
            beta.push(beta_k.clone());
            if k as f64 > peak && size < &scale * &bits_target {
                break;
            }
            if k > 100_000 {
                return Err(Error::Precision("kernel series failed to terminate".into()));
            }
            // Γ(k+2∓ν) = (k+1∓ν) Γ(k+1∓ν)
            alpha_k = alpha_k * &q / ((-nu.clone() + (kk + 1)) * (kk + 1));
            beta_k = beta_k * &q / ((&nu + (kk + 1)) * (kk + 1));
            reach_pow *= &reach_sq;
        }

        let lead_exponent = work.one() - &nu * 2;
        let mut kernel = Self {
            ctx: *ctx,
            work,
            h,
            lead_exponent,
            alpha,
            beta,
            antiderivative: Vec::new(),
        };
        kernel.antiderivative = (0..=reach + 1)
            .into_par_iter()
            .map(|u| kernel.moments_at(u))
            .collect::<Result<Vec<_>>>()?;
        Ok(kernel)
    }

    pub fn context(&self) -> &PrecisionContext {
        &self.ctx
    }

    /// Extra decimal digits carried internally.
    pub fn cancellation_guard(&self) -> u32 {
        self.work.guard_digits() - self.ctx.guard_digits()
    }

    pub fn series_terms(&self) -> usize {
        self.alpha.len()
    }

    /// `∫_0^u τ^n K(hτ) dτ`, `n = 0..4`.
    fn moments_at(&self, u: usize) -> Result<[Real; 4]> {
        let work = &self.work;
        let u = work.int(u as i64);
        if u.is_zero() {
            return Ok(std::array::from_fn(|_| work.zero()));
        }
        let lead = u.pow(&self.lead_exponent)?;
        let u_sq = u.square();
        let mut out: [Real; 4] = std::array::from_fn(|_| work.zero());
        for (n, slot) in out.iter_mut().enumerate() {
            let mut u_pow = u.powi(n as i32)?;
            let mut a_sum = work.zero();
            let mut b_sum = work.zero();
            for (k, (a, b)) in self.alpha.iter().zip(&self.beta).enumerate() {
                let p = (n + 2 * k) as i32;
                a_sum += a * &u_pow / (&self.lead_exponent + p);
                b_sum += b * &u_pow * &u / (p + 1);
                u_pow *= &u_sq;
            }
            *slot = &lead * a_sum - b_sum;
        }
        Ok(out)
    }

    fn moment(&self, n: usize, t0: i64, t1: i64) -> Real {
        let table = &self.antiderivative;
        if t0 >= 0 {
            &table[t1 as usize][n] - &table[t0 as usize][n]
        } else {
            debug_assert!(t1 <= 0);
            let v = &table[t0.unsigned_abs() as usize][n] - &table[t1.unsigned_abs() as usize][n];
            if n.is_multiple_of(2) {
                v
            } else {
                -v
            }
        }
    }

    /// `∫∫ φ_a(s) φ_b(σ) K(h (d + s - σ)) ds dσ` over the unit square, in the
    /// working precision.
    pub fn pair_integral(&self, a: Slope, b: Slope, d: i64) -> Real {
        let sides = &CROSS_CORRELATION[a.index()][b.index()];
        let mut total = self.work.zero();
        for (w, (t0, t1)) in sides.iter().zip([(d, d + 1), (d - 1, d)]) {
            let e = shifted_coefficients(w, d);
            for (n, &coefficient) in e.iter().enumerate() {
                if coefficient != 0 {
                    total += self.moment(n, t0, t1) * coefficient as i32;
                }
            }
        }
        total / 6
    }

    /// Point value `K(t)`, `t ≠ 0`.
    pub fn value(&self, t: &Real) -> Result<Real> {
        let tau = self.work.round(&t.abs()) / &self.h;
        if tau.is_zero() {
            return Err(Error::Domain {
                function: "kernel",
                argument: t.clone(),
                detail: "singular at the origin".into(),
            });
        }
        let lead = tau.pow(&(&self.lead_exponent - 1))?;
        let tau_sq = tau.square();
        let mut pow = self.work.one();
        let mut a_sum = self.work.zero();
        let mut b_sum = self.work.zero();
        for (a, b) in self.alpha.iter().zip(&self.beta) {
            a_sum += a * &pow;
            b_sum += b * &pow;
            pow *= &tau_sq;
        }
        Ok(self.ctx.round(&(lead * a_sum - b_sum)))
    }
}

/// `(A^s)_jk = ∫∫ e_j(x) K(x - y) e_k(y) dx dy` for `-1/2 < s < 0`.
pub fn a_power_matrix(basis: &BasisSet, mass: &Real, exponent: &Real) -> Result<MatrixMP> {
    let grid = basis.grid();
    let ctx = grid.context();
    let n_cells = grid.n_cells();
    let kernel = PowerKernel::new(ctx, mass, grid.spacing(), exponent, n_cells)?;
    let reach = n_cells as i64;
    let slopes = [Slope::Falling, Slope::Rising];
    let table: Vec<Real> = (0..4 * (2 * reach + 1) as usize)
        .into_par_iter()
        .map(|idx| {
            let pair = idx / (2 * reach + 1) as usize;
            let d = (idx % (2 * reach + 1) as usize) as i64 - reach;
            kernel.pair_integral(slopes[pair / 2], slopes[pair % 2], d)
        })
        .collect();
    let lookup = |a: Slope, b: Slope, d: i64| {
        &table[(a.index() * 2 + b.index()) * (2 * reach + 1) as usize + (d + reach) as usize]
    };
    let h_sq = kernel.work.round(grid.spacing()).square();
    let elements = basis.elements();
    Ok(MatrixMP::symmetric_from_fn(ctx, elements.len(), |j, k| {
        let mut sum = kernel.work.zero();
        for p in &elements[j].pieces {
            for q in &elements[k].pieces {
                sum += lookup(p.slope, q.slope, p.cell as i64 - q.cell as i64);
            }
        }
        sum * &h_sq
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretization::{build_basis, BasisMode, Grid, RegionSpec};
    use crate::quadrature::gauss_legendre;

    fn quarter(ctx: &PrecisionContext) -> Real {
        ctx.ratio(-1, 4)
    }

    #[test]
    fn cross_correlations_integrate_to_products_of_means() {
        // ∫ W_ab = (∫φ_a)(∫φ_b) = 1/4
        for (a, row) in CROSS_CORRELATION.iter().enumerate() {
            for (b, &[pos, neg]) in row.iter().enumerate() {
                let integral = |c: [i64; 4], sign: i64| -> f64 {
                    c.iter()
                        .enumerate()
                        .map(|(i, &v)| {
                            v as f64 * (sign.pow(i as u32 + 2) as f64) / (i as f64 + 1.0)
                        })
                        .sum::<f64>()
                };
                let total = (integral(pos, 1) + integral(neg, -1)) / 6.0;
                assert!((total - 0.25).abs() < 1e-15, "a={a} b={b}: {total}");
            }
        }
    }

    #[test]
    fn shifted_coefficients_expand_binomially() {
        // (τ - 2)^3 = τ³ - 6τ² + 12τ - 8
        assert_eq!(shifted_coefficients(&[0, 0, 0, 1], 2), [-8, 12, -6, 1]);
        assert_eq!(shifted_coefficients(&[2, -3, 0, 1], 0), [2, -3, 0, 1]);
    }

    /// `K_ν(z) = ∫_0^∞ exp(-z cosh u) cosh(νu) du`, by panel Gauss-Legendre.
    fn bessel_k_oracle(ctx: &PrecisionContext, nu: &Real, z: &Real) -> Real {
        let rule = gauss_legendre(60, ctx);
        let mut total = ctx.zero();
        let step = ctx.ratio(1, 2);
        let mut a = ctx.zero();
        loop {
            let b = &a + &step;
            let piece = rule.integrate(&a, &b, |u| {
                let cosh = (u.exp().unwrap() + (-u.clone()).exp().unwrap()) / 2;
                let cosh_nu = ((nu * u).exp().unwrap() + (-(nu * u)).exp().unwrap()) / 2;
                (-(z * cosh)).exp().unwrap() * cosh_nu
            });
            total += &piece;
            if piece.abs() < ctx.tolerance(0) * total.abs() {
                break;
            }
            a = b;
        }
        total
    }

    #[test]
    fn point_values_match_bessel_representation() {
        let ctx = PrecisionContext::new(50).unwrap();
        let m = ctx.int(1);
        let kernel = PowerKernel::new(&ctx, &m, &ctx.ratio(1, 2), &quarter(&ctx), 8).unwrap();
        let nu = ctx.ratio(1, 4);
        // K(t) = (|t|/2m)^(-1/4) K_{1/4}(m|t|) / (√π Γ(1/4))
        let prefactor = (ctx.pi().sqrt().unwrap() * ctx.ratio(1, 4).gamma().unwrap())
            .recip()
            .unwrap();
        for t in [ctx.ratio(1, 10), ctx.one(), ctx.ratio(7, 2)] {
            let z = &m * &t;
            let expected = &prefactor
                * (&t / (&m * 2)).pow(&-nu.clone()).unwrap()
                * bessel_k_oracle(&ctx, &nu, &z);
            let got = kernel.value(&t).unwrap();
            assert!(
                (&got - &expected).abs() < ctx.tolerance(8) * expected.abs(),
                "t={t}: {got} vs {expected}"
            );
        }
    }

    #[test]
    fn small_mass_approaches_massless_kernel() {
        let ctx = PrecisionContext::new(40).unwrap();
        let kernel =
            PowerKernel::new(&ctx, &ctx.ten_pow(-12), &ctx.one(), &quarter(&ctx), 4).unwrap();
        let t = ctx.int(2);
        let massless = (ctx.pi() * 2 * &t).sqrt().unwrap().recip().unwrap();
        let got = kernel.value(&t).unwrap();
        // first correction is O(m^(1/2))
        assert!((got - &massless).abs() < ctx.ten_pow(-5) * massless);
    }

    #[test]
    fn toeplitz_structure_and_symmetry() {
        let ctx = PrecisionContext::new(60).unwrap();
        let region = RegionSpec::Interval {
            left: ctx.int(-1),
            right: ctx.int(1),
        };
        let grid = Grid::new(&ctx, 16, &ctx.int(2), &region).unwrap();
        let basis = build_basis(&grid, BasisMode::Standard);
        let a = a_power_matrix(&basis, &ctx.one(), &quarter(&ctx)).unwrap();
        assert!(a.is_symmetric());
        let tol = ctx.tolerance(5) * a.max_abs();
        assert!((a.get(1, 3) - a.get(2, 4)).abs() < tol);
        assert!((a.get(0, 0) - a.get(9, 9)).abs() < tol);
        assert!((a.get(2, 7) - a.get(7, 2)).abs().is_zero());
    }

    #[test]
    fn large_mass_reduces_to_scaled_gram() {
        let ctx = PrecisionContext::new(60).unwrap();
        let region = RegionSpec::Wedge { edge: ctx.zero() };
        let grid = Grid::new(&ctx, 8, &ctx.int(2), &region).unwrap();
        let basis = build_basis(&grid, BasisMode::BoundarySplit);
        let m = ctx.int(400);
        let a = a_power_matrix(&basis, &m, &quarter(&ctx)).unwrap();
        let scaled = basis.gram().scale(&m.sqrt().unwrap().recip().unwrap());
        // kernel width 1/m against h = 1/2 leaves a relative O(1/(m h)) defect
        let defect = a.max_abs_diff(&scaled).unwrap() / scaled.max_abs();
        assert!(defect < ctx.ratio(1, 100), "defect {defect}");
    }

    #[test]
    fn rejects_bad_parameters() {
        let ctx = PrecisionContext::new(40).unwrap();
        let h = ctx.one();
        assert!(PowerKernel::new(&ctx, &ctx.zero(), &h, &quarter(&ctx), 4).is_err());
        assert!(PowerKernel::new(&ctx, &ctx.one(), &h, &ctx.ratio(1, 4), 4).is_err());
        assert!(PowerKernel::new(&ctx, &ctx.one(), &h, &ctx.ratio(-1, 2), 4).is_err());
    }
}

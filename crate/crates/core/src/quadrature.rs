//! Gauss-Legendre rules at working precision.

use crate::precision::{PrecisionContext, Real};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Nodes and weights on `[-1, 1]`, nodes ascending.
#[derive(Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<Real>,
    pub weights: Vec<Real>,
}

impl GaussLegendre {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫_a^b f` by the affine image of the rule.
    pub fn integrate<F>(&self, a: &Real, b: &Real, mut f: F) -> Real
    where
        F: FnMut(&Real) -> Real,
    {
        let half = (b - a) / 2;
        let mid = (a + b) / 2;
        let mut sum = a.zero_like();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let t = &mid + &half * x;
            sum += w * f(&t);
        }
        sum * half
    }
}

/// Legendre `P_n(x)` and `P_{n-1}(x)` by the three-term recurrence.
fn legendre_pair(n: usize, x: &Real) -> (Real, Real) {
    let mut p_prev = x.zero_like() + 1;
    let mut p = x.clone();
    for k in 1..n {
        let k = k as i32;
        let next = (x * &p * (2 * k + 1) - &p_prev * k) / (k + 1);
        p_prev = p;
        p = next;
    }
    (p, p_prev)
}

type RuleCache = HashMap<(usize, u32), Arc<GaussLegendre>>;

/// `n`-point rule with nodes found by Newton iteration on `P_n` from the
/// asymptotic initial guesses. Rules are cached per `(n, bits)`.
pub fn gauss_legendre(n: usize, ctx: &PrecisionContext) -> Arc<GaussLegendre> {
    static CACHE: OnceLock<Mutex<RuleCache>> = OnceLock::new();
    let key = (n, ctx.bits());
    let cache = CACHE.get_or_init(Default::default);
    if let Some(rule) = cache.lock().expect("rule cache poisoned").get(&key) {
        return rule.clone();
    }
    let rule = Arc::new(compute_rule(n, ctx));
    cache
        .lock()
        .expect("rule cache poisoned")
        .entry(key)
        .or_insert(rule)
        .clone()
}

fn compute_rule(n: usize, ctx: &PrecisionContext) -> GaussLegendre {
    assert!(n >= 1, "a quadrature rule needs at least one node");
    let threshold = ctx.ten_pow(-(ctx.decimal_digits() as i32 + ctx.guard_digits() as i32 - 3));
    let half = n / 2;
    let mut positive: Vec<(Real, Real)> = Vec::with_capacity(half + 1);
    // roots in (0, 1), largest first
    for i in 0..n.div_ceil(2) {
        let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut x = ctx.from_f64(guess).expect("finite guess");
        let mut iterations = 0;
        loop {
            let (p, p_prev) = legendre_pair(n, &x);
            let derivative = (&x * &p - p_prev) * (n as i32) / (x.square() - 1);
            let step = p / derivative;
            x -= &step;
            iterations += 1;
            if step.abs() <= threshold || iterations > 100 {
                break;
            }
        }
        let (p, p_prev) = legendre_pair(n, &x);
        let derivative = (&x * p - p_prev) * (n as i32) / (x.square() - 1);
        let weight = ctx.int(2) / ((ctx.one() - x.square()) * derivative.square());
        positive.push((x, weight));
    }
    if n % 2 == 1 {
        // the middle root is exactly zero
        let last = positive.last_mut().expect("odd rule has a middle node");
        let zero = ctx.zero();
        let (_, p_prev) = legendre_pair(n, &zero);
        let derivative = p_prev * (n as i32);
        *last = (zero, ctx.int(2) / derivative.square());
    }
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for (x, w) in positive.iter().take(half) {
        nodes.push(-x.clone());
        weights.push(w.clone());
    }
    if n % 2 == 1 {
        let (x, w) = positive.last().expect("middle node");
        nodes.push(x.clone());
        weights.push(w.clone());
    }
    for (x, w) in positive.iter().take(half).rev() {
        nodes.push(x.clone());
        weights.push(w.clone());
    }
    GaussLegendre { nodes, weights }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two_and_nodes_ascend() {
        let ctx = PrecisionContext::new(80).unwrap();
        for n in [1, 2, 5, 16, 33] {
            let rule = gauss_legendre(n, &ctx);
            let total: Real = rule.weights.iter().cloned().sum();
            assert!((total - 2).abs() < ctx.tolerance(5), "n = {n}");
            assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn three_point_rule_closed_form() {
        let ctx = PrecisionContext::new(60).unwrap();
        let rule = gauss_legendre(3, &ctx);
        let node = ctx.ratio(3, 5).sqrt().unwrap();
        let tol = ctx.tolerance(3);
        assert!((&rule.nodes[2] - &node).abs() < tol);
        assert!(rule.nodes[1].is_zero());
        assert!((&rule.weights[0] - ctx.ratio(5, 9)).abs() < tol);
        assert!((&rule.weights[1] - ctx.ratio(8, 9)).abs() < tol);
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        let ctx = PrecisionContext::new(100).unwrap();
        let rule = gauss_legendre(10, &ctx);
        let a = ctx.int(-1);
        let b = ctx.int(2);
        // ∫_{-1}^{2} x^19 dx = (2^20 - 1) / 20
        let got = rule.integrate(&a, &b, |x| x.powi(19).unwrap());
        assert!((got - ctx.ratio((1 << 20) - 1, 20)).abs() < ctx.tolerance(10));
    }

    #[test]
    fn gaussian_integral_against_erf() {
        let ctx = PrecisionContext::new(120).unwrap();
        let rule = gauss_legendre(90, &ctx);
        let got = rule.integrate(&ctx.zero(), &ctx.one(), |x| (-x.square()).exp().unwrap());
        let expected = ctx.pi().sqrt().unwrap() / 2 * ctx.one().erf();
        assert!((got - expected).abs() < ctx.tolerance(5));
    }
}

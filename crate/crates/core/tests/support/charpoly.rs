//! Exact-rational eigenvalue oracle: characteristic polynomial by
//! Faddeev-LeVerrier, real roots by Sturm-sequence bisection.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Poly = Vec<BigRational>;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Coefficients of `det(x I - A)`, lowest degree first.
pub fn char_poly(a: &[Vec<BigRational>]) -> Poly {
    let n = a.len();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut m = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = BigRational::zero();
                for l in 0..n {
                    s += &a[i][l] * &m[l][j];
                }
                if i == j {
                    s += &coeffs[n - k + 1];
                }
                next[i][j] = s;
            }
        }
        m = next;
        // c_{n-k} = -tr(A M_k) / k
        let mut trace = BigRational::zero();
        for i in 0..n {
            for l in 0..n {
                trace += &a[i][l] * &m[l][i];
            }
        }
        coeffs[n - k] = -trace / rat(k as i64);
    }
    coeffs
}

fn trim(mut p: Poly) -> Poly {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn derivative(p: &Poly) -> Poly {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * rat(k as i64))
            .collect(),
    )
}

fn remainder(num: &Poly, den: &Poly) -> Poly {
    let mut r = num.clone();
    let d = den.len() - 1;
    let lead = den[d].clone();
    while r.len() > d && !(r.len() == 1 && r[0].is_zero()) {
        let shift = r.len() - 1 - d;
        let q = r[r.len() - 1].clone() / &lead;
        for (k, c) in den.iter().enumerate() {
            r[shift + k] -= &q * c;
        }
        r.pop();
        r = trim(r);
        if r.len() <= d {
            break;
        }
    }
    trim(r)
}

fn eval(p: &Poly, x: &BigRational) -> BigRational {
    p.iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * x + c)
}

pub struct Sturm(Vec<Poly>);

impl Sturm {
    pub fn new(p: &Poly) -> Self {
        let mut chain = vec![trim(p.clone()), derivative(p)];
        loop {
            let n = chain.len();
            let r = remainder(&chain[n - 2], &chain[n - 1]);
            if r.len() == 1 && r[0].is_zero() {
                break;
            }
            chain.push(r.into_iter().map(|c| -c).collect());
            if chain[chain.len() - 1].len() == 1 {
                break;
            }
        }
        Self(chain)
    }

    fn sign_changes(&self, x: &BigRational) -> usize {
        let signs: Vec<bool> = self
            .0
            .iter()
            .map(|p| eval(p, x))
            .filter(|v| !v.is_zero())
            .map(|v| v.is_positive())
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Number of roots in `(lo, hi]`.
    pub fn count(&self, lo: &BigRational, hi: &BigRational) -> usize {
        self.sign_changes(lo) - self.sign_changes(hi)
    }
}

/// All real roots in `(lo, hi]`, ascending, each bracketed to width
/// `(hi - lo) / 2^steps`; returns bracket midpoints.
pub fn real_roots(p: &Poly, lo: &BigRational, hi: &BigRational, steps: u32) -> Vec<BigRational> {
    let sturm = Sturm::new(p);
    let total = sturm.count(lo, hi);
    (0..total)
        .map(|k| {
            // smallest x with at least k+1 roots in (lo, x]
            let (mut a, mut b) = (lo.clone(), hi.clone());
            for _ in 0..steps {
                let mid = (&a + &b) / rat(2);
                if sturm.count(lo, &mid) > k {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            (a + b) / rat(2)
        })
        .collect()
}

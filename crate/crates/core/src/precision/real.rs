use crate::error::{Error, Result};
use rug::ops::Pow;
use rug::Assign;
use rug::Float;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Finite extended-precision real number.
///
/// Binary operations run at the larger of the operand precisions. NaN and
/// infinities cannot be constructed; functions outside their domain return
/// [`Error::Domain`] instead.
#[derive(Clone, Debug)]
pub struct Real(pub(crate) Float);

impl Real {
    pub fn from_float(value: Float) -> Result<Self> {
        if value.is_finite() {
            Ok(Self(value))
        } else {
            Err(Error::Precision(format!("non-finite value {value}")))
        }
    }

    pub(crate) fn from_float_unchecked(value: Float) -> Self {
        debug_assert!(value.is_finite());
        Self(value)
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn into_float(self) -> Float {
        self.0
    }

    pub fn precision_bits(&self) -> u32 {
        self.0.prec()
    }

    pub(crate) fn with_bits(&self, bits: u32) -> Self {
        Self(Float::with_val(bits, &self.0))
    }

    fn wrap(&self, value: Float, function: &'static str) -> Result<Self> {
        if value.is_finite() {
            Ok(Self(value))
        } else {
            Err(Error::Domain {
                function,
                argument: self.clone(),
                detail: "result is not finite".into(),
            })
        }
    }

    fn domain(&self, function: &'static str, detail: &str) -> Error {
        Error::Domain {
            function,
            argument: self.clone(),
            detail: detail.into(),
        }
    }

    pub fn zero_like(&self) -> Self {
        Self(Float::with_val(self.0.prec(), 0))
    }

    /// `π` at this value's precision.
    pub fn pi_like(&self) -> Self {
        Self(Float::with_val(self.0.prec(), rug::float::Constant::Pi))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_sign_negative(&self) -> bool {
        self.0.is_sign_negative() && !self.0.is_zero()
    }

    pub fn abs(&self) -> Self {
        Self(Float::with_val(self.0.prec(), self.0.abs_ref()))
    }

    pub fn square(&self) -> Self {
        Self(Float::with_val(self.0.prec(), self.0.square_ref()))
    }

    pub fn powi(&self, exponent: i32) -> Result<Self> {
        if exponent < 0 && self.is_zero() {
            return Err(self.domain("powi", "negative power of zero"));
        }
        let value = Float::with_val(self.0.prec(), (&self.0).pow(exponent));
        self.wrap(value, "powi")
    }

    /// `self^exponent` for `self > 0`, or `self = 0` with a positive exponent.
    pub fn pow(&self, exponent: &Real) -> Result<Self> {
        if self.is_sign_negative() {
            return Err(self.domain("pow", "negative base"));
        }
        if self.is_zero() {
            return if exponent.0.is_sign_positive() && !exponent.is_zero() {
                Ok(self.zero_like())
            } else {
                Err(self.domain("pow", "zero base with non-positive exponent"))
            };
        }
        let prec = self.0.prec().max(exponent.0.prec());
        let value = Float::with_val(prec, (&self.0).pow(&exponent.0));
        self.wrap(value, "pow")
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(self.domain("recip", "division by zero"));
        }
        Ok(Self(Float::with_val(self.0.prec(), self.0.recip_ref())))
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.is_sign_negative() {
            return Err(self.domain("sqrt", "negative argument"));
        }
        Ok(Self(Float::with_val(self.0.prec(), self.0.sqrt_ref())))
    }

    pub fn ln(&self) -> Result<Self> {
        if self.is_sign_negative() || self.is_zero() {
            return Err(self.domain("ln", "argument must be positive"));
        }
        Ok(Self(Float::with_val(self.0.prec(), self.0.ln_ref())))
    }

    /// `ln(1 + self)` without cancellation for small arguments.
    pub fn ln_1p(&self) -> Result<Self> {
        if self.0 <= -1 {
            return Err(self.domain("ln_1p", "argument must exceed -1"));
        }
        Ok(Self(Float::with_val(self.0.prec(), self.0.ln_1p_ref())))
    }

    pub fn exp(&self) -> Result<Self> {
        let value = Float::with_val(self.0.prec(), self.0.exp_ref());
        self.wrap(value, "exp")
    }

    /// `exp(self) - 1` without cancellation for small arguments.
    pub fn exp_m1(&self) -> Result<Self> {
        let value = Float::with_val(self.0.prec(), self.0.exp_m1_ref());
        self.wrap(value, "exp_m1")
    }

    pub fn sin(&self) -> Self {
        Self(Float::with_val(self.0.prec(), self.0.sin_ref()))
    }

    pub fn cos(&self) -> Self {
        Self(Float::with_val(self.0.prec(), self.0.cos_ref()))
    }

    pub fn sin_cos(&self) -> (Self, Self) {
        let prec = self.0.prec();
        let mut s = Float::new(prec);
        let mut c = Float::new(prec);
        (&mut s, &mut c).assign(self.0.sin_cos_ref());
        (Self(s), Self(c))
    }

    pub fn atan(&self) -> Self {
        Self(Float::with_val(self.0.prec(), self.0.atan_ref()))
    }

    pub fn erf(&self) -> Self {
        Self(Float::with_val(self.0.prec(), self.0.erf_ref()))
    }

    /// Euler gamma function; poles at the non-positive integers are errors.
    pub fn gamma(&self) -> Result<Self> {
        if self.0.is_integer() && !self.0.is_sign_positive() || self.is_zero() {
            return Err(self.domain("gamma", "pole at a non-positive integer"));
        }
        let value = Float::with_val(self.0.prec(), self.0.gamma_ref());
        self.wrap(value, "gamma")
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// Base-10 exponent of the leading digit; `None` for zero.
    pub fn decimal_exponent(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let text = self.to_decimal(3);
        text.rsplit_once('e').and_then(|(_, e)| e.parse().ok())
    }

    /// Scientific notation `d.ddd…e±k` with `significant` digits, rounded to
    /// nearest. Negative values carry a leading `-`; zero prints unsigned.
    pub fn to_decimal(&self, significant: u32) -> String {
        let significant = significant.max(1) as usize;
        if self.is_zero() {
            return format!("{:.*}e+0", significant - 1, 0.0);
        }
        let raw = format!("{:.*e}", significant, self.0);
        let (mantissa, exponent) = raw.split_once('e').expect("rug emits an exponent");
        let exponent: i64 = exponent.parse().expect("integer exponent");
        if exponent < 0 {
            format!("{mantissa}e{exponent}")
        } else {
            format!("{mantissa}e+{exponent}")
        }
    }

    pub fn total_cmp(&self, other: &Self) -> Ordering {
        self.0
            .partial_cmp(&other.0)
            .expect("Real values are never NaN")
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().map(|p| p as u32 + 1).unwrap_or(20);
        f.write_str(&self.to_decimal(digits))
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.total_cmp(other))
    }
}

impl PartialEq<i32> for Real {
    fn eq(&self, other: &i32) -> bool {
        self.0 == *other
    }
}

impl PartialOrd<i32> for Real {
    fn partial_cmp(&self, other: &i32) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(-self.0)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(Float::with_val(self.0.prec(), -&self.0))
    }
}

macro_rules! binary_op {
    ($trait:ident, $method:ident, $check:expr) => {
        impl $trait<&Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                $check(&rhs.0);
                let prec = self.0.prec().max(rhs.0.prec());
                Real(Float::with_val(prec, (&self.0).$method(&rhs.0)))
            }
        }
        impl $trait<Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                self.$method(&rhs)
            }
        }
        impl $trait<&Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                (&self).$method(rhs)
            }
        }
        impl $trait<Real> for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                (&self).$method(&rhs)
            }
        }
        impl $trait<i32> for &Real {
            type Output = Real;
            fn $method(self, rhs: i32) -> Real {
                $check(&Float::with_val(32, rhs));
                Real(Float::with_val(self.0.prec(), (&self.0).$method(rhs)))
            }
        }
        impl $trait<i32> for Real {
            type Output = Real;
            fn $method(self, rhs: i32) -> Real {
                (&self).$method(rhs)
            }
        }
    };
}

fn no_check(_: &Float) {}

fn nonzero_divisor(value: &Float) {
    assert!(!value.is_zero(), "division of Real by zero");
}

binary_op!(Add, add, no_check);
binary_op!(Sub, sub, no_check);
binary_op!(Mul, mul, no_check);
binary_op!(Div, div, nonzero_divisor);

impl AddAssign<&Real> for Real {
    fn add_assign(&mut self, rhs: &Real) {
        self.0 += &rhs.0;
    }
}

impl AddAssign<Real> for Real {
    fn add_assign(&mut self, rhs: Real) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Real> for Real {
    fn sub_assign(&mut self, rhs: &Real) {
        self.0 -= &rhs.0;
    }
}

impl SubAssign<Real> for Real {
    fn sub_assign(&mut self, rhs: Real) {
        self.0 -= rhs.0;
    }
}

impl MulAssign<&Real> for Real {
    fn mul_assign(&mut self, rhs: &Real) {
        self.0 *= &rhs.0;
    }
}

impl std::iter::Sum for Real {
    fn sum<I: Iterator<Item = Real>>(mut iter: I) -> Real {
        let first = iter
            .next()
            .expect("sum of an empty iterator of Real has no precision");
        iter.fold(first, |acc, x| acc + x)
    }
}

#[cfg(test)]
mod tests {
    use crate::precision::PrecisionContext;

    #[test]
    fn arithmetic_uses_the_wider_precision() {
        let lo = PrecisionContext::new(30).unwrap();
        let hi = PrecisionContext::new(100).unwrap();
        let x = lo.one() + hi.ratio(1, 3);
        assert_eq!(x.precision_bits(), hi.bits());
    }

    #[test]
    fn domain_errors_instead_of_nan() {
        let ctx = PrecisionContext::new(30).unwrap();
        assert!(ctx.int(-1).sqrt().is_err());
        assert!(ctx.zero().ln().is_err());
        assert!(ctx.int(-1).ln_1p().is_err());
        assert!(ctx.zero().recip().is_err());
        assert!(ctx.int(-2).gamma().is_err());
        assert!(ctx.int(-2).pow(&ctx.ratio(1, 2)).is_err());
    }

    #[test]
    #[should_panic(expected = "division of Real by zero")]
    fn division_by_zero_panics() {
        let ctx = PrecisionContext::new(30).unwrap();
        let _ = ctx.one() / ctx.zero();
    }

    #[test]
    fn decimal_format_has_signed_exponent() {
        let ctx = PrecisionContext::new(30).unwrap();
        assert_eq!(ctx.ratio(-1, 8).to_decimal(3), "-1.25e-1");
        assert_eq!(ctx.int(1234).to_decimal(2), "1.2e+3");
        assert_eq!(ctx.zero().to_decimal(3), "0.00e+0");
        assert_eq!(ctx.int(-1234).decimal_exponent(), Some(3));
    }
}

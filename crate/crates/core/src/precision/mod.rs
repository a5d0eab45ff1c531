//! Extended-precision scalars.
//!
//! Every computation runs under an explicit [`PrecisionContext`]; nothing in
//! the crate consults a global precision setting. Working precision is the
//! requested number of decimal digits plus a block of guard digits, converted
//! to binary with a ceiling.

mod functions;
mod real;

pub use functions::{arcoth, coth, elementary, Elementary};
pub use real::Real;

use crate::error::{Error, Result};
use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    decimal_digits: u32,
    guard_digits: u32,
}

impl PrecisionContext {
    pub const MIN_DIGITS: u32 = 30;
    pub const DEFAULT_GUARD: u32 = 20;

    pub fn new(decimal_digits: u32) -> Result<Self> {
        Self::with_guard(decimal_digits, Self::DEFAULT_GUARD)
    }

    pub fn with_guard(decimal_digits: u32, guard_digits: u32) -> Result<Self> {
        if decimal_digits < Self::MIN_DIGITS {
            return Err(Error::InvalidConfig(format!(
                "precision of {decimal_digits} decimal digits is below the floor of {}",
                Self::MIN_DIGITS
            )));
        }
        Ok(Self {
            decimal_digits,
            guard_digits,
        })
    }

    pub fn decimal_digits(&self) -> u32 {
        self.decimal_digits
    }

    pub fn guard_digits(&self) -> u32 {
        self.guard_digits
    }

    /// Binary working precision: `ceil((digits + guard) * log2(10))`.
    pub fn bits(&self) -> u32 {
        ((self.decimal_digits + self.guard_digits) as f64 * LOG2_10).ceil() as u32
    }

    /// Same user-facing digits with `extra` additional guard digits, for
    /// intermediate computations that lose digits to cancellation.
    pub fn widened(&self, extra: u32) -> Self {
        Self {
            decimal_digits: self.decimal_digits,
            guard_digits: self.guard_digits + extra,
        }
    }

    pub fn zero(&self) -> Real {
        Real::from_float_unchecked(Float::with_val(self.bits(), 0))
    }

    pub fn one(&self) -> Real {
        self.int(1)
    }

    pub fn int(&self, value: i64) -> Real {
        Real::from_float_unchecked(Float::with_val(self.bits(), value))
    }

    /// `num / den`, rounded once.
    pub fn ratio(&self, num: i64, den: i64) -> Real {
        assert!(den != 0, "zero denominator");
        let n = Float::with_val(self.bits(), num);
        Real::from_float_unchecked(Float::with_val(self.bits(), n / den))
    }

    /// Exact binary value of an `f64`. Use [`PrecisionContext::parse`] when
    /// the decimal literal is what is meant (`0.1` is not a dyadic rational).
    pub fn from_f64(&self, value: f64) -> Result<Real> {
        Real::from_float(Float::with_val(self.bits(), value))
    }

    pub fn parse(&self, text: &str) -> Result<Real> {
        let trimmed = text.trim();
        let parsed = Float::parse(trimmed)
            .map_err(|e| Error::Parse(format!("{trimmed:?} is not a decimal number: {e}")))?;
        Real::from_float(Float::with_val(self.bits(), parsed))
            .map_err(|_| Error::Parse(format!("{trimmed:?} is not a finite number")))
    }

    pub fn pi(&self) -> Real {
        Real::from_float_unchecked(Float::with_val(self.bits(), Constant::Pi))
    }

    /// `10^exponent` at working precision.
    pub fn ten_pow(&self, exponent: i32) -> Real {
        let ten = Float::with_val(self.bits(), 10);
        Real::from_float_unchecked(Float::with_val(self.bits(), ten.pow(exponent)))
    }

    /// `10^-(digits - loss_digits)`: the accuracy expected after an
    /// operation that may cost up to `loss_digits` digits.
    pub fn tolerance(&self, loss_digits: u32) -> Real {
        self.ten_pow(-(self.decimal_digits as i32 - loss_digits as i32))
    }

    /// Full-precision decimal serialization at `decimal_digits` significant
    /// digits.
    pub fn serialize(&self, value: &Real) -> String {
        value.to_decimal(self.decimal_digits)
    }

    /// Round a value (possibly computed at higher precision) to this context.
    pub fn round(&self, value: &Real) -> Real {
        value.with_bits(self.bits())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_precision_below_floor() {
        assert!(PrecisionContext::new(29).is_err());
        assert!(PrecisionContext::new(30).is_ok());
    }

    #[test]
    fn bits_use_ceiling_conversion() {
        let ctx = PrecisionContext::with_guard(30, 0).unwrap();
        // 30 * log2(10) = 99.657...
        assert_eq!(ctx.bits(), 100);
        let ctx = PrecisionContext::new(400).unwrap();
        assert_eq!(ctx.bits(), (420.0 * LOG2_10).ceil() as u32);
    }

    #[test]
    fn serialization_round_trip_is_exact_at_context_digits() {
        let ctx = PrecisionContext::new(120).unwrap();
        let x = ctx.pi() / ctx.int(7);
        let text = ctx.serialize(&x);
        let back = ctx.parse(&text).unwrap();
        assert_eq!(ctx.serialize(&back), text);
        assert!(text.starts_with("4.4879895051282760549"));
        assert!(text.ends_with("e-1"));
    }

    #[test]
    fn parse_rejects_garbage() {
        let ctx = PrecisionContext::new(30).unwrap();
        assert!(ctx.parse("abc").is_err());
        assert!(ctx.parse("nan").is_err());
        assert!(ctx.parse("inf").is_err());
        assert_eq!(ctx.parse(" -2.5e1 ").unwrap(), ctx.int(-25));
    }

    #[test]
    fn tolerance_scales_with_digits() {
        let ctx = PrecisionContext::new(50).unwrap();
        assert_eq!(
            ctx.serialize(&ctx.tolerance(10)),
            ctx.serialize(&ctx.ten_pow(-40))
        );
    }
}

use super::Real;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Elementary {
    Exp,
    Ln,
    Sqrt,
    Sin,
    Cos,
    Atan,
}

pub fn elementary(function: Elementary, x: &Real) -> Result<Real> {
    match function {
        Elementary::Exp => x.exp(),
        Elementary::Ln => x.ln(),
        Elementary::Sqrt => x.sqrt(),
        Elementary::Sin => Ok(x.sin()),
        Elementary::Cos => Ok(x.cos()),
        Elementary::Atan => Ok(x.atan()),
    }
}

/// Inverse hyperbolic cotangent, `½ ln((x+1)/(x-1))` for `|x| > 1`.
///
/// Evaluated as `½ ln1p(2/(|x|-1))` with the sign restored afterwards, which
/// stays accurate both as `|x| → 1⁺` and as `|x| → ∞`.
pub fn arcoth(x: &Real) -> Result<Real> {
    let magnitude = x.abs();
    if magnitude <= 1 {
        return Err(Error::Domain {
            function: "arcoth",
            argument: x.clone(),
            detail: "|x| must exceed 1".into(),
        });
    }
    let excess = &magnitude - 1;
    let value = (excess.recip()? * 2).ln_1p()? / 2;
    Ok(if x.is_sign_negative() { -value } else { value })
}

/// Hyperbolic cotangent, `1 + 2/(e^{2y} - 1)` for `y ≠ 0`.
pub fn coth(y: &Real) -> Result<Real> {
    if y.is_zero() {
        return Err(Error::Domain {
            function: "coth",
            argument: y.clone(),
            detail: "pole at zero".into(),
        });
    }
    let magnitude = y.abs();
    let value = (magnitude * 2).exp_m1()?.recip()? * 2 + 1;
    Ok(if y.is_sign_negative() { -value } else { value })
}

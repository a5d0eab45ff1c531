use crate::error::{Error, Result};
use crate::precision::Real;
use std::fmt;

/// Time-zero base of the localization region. `χ` is the indicator of the
/// set below.
#[derive(Clone, Debug, PartialEq)]
pub enum RegionSpec {
    /// `x > edge`.
    Wedge { edge: Real },
    /// `x < edge`; the complement of `Wedge` with the same edge.
    LeftWedge { edge: Real },
    /// `left < x < right`.
    Interval { left: Real, right: Real },
}

impl RegionSpec {
    /// Finite boundary points, ascending.
    pub fn boundaries(&self) -> Vec<&Real> {
        match self {
            Self::Wedge { edge } | Self::LeftWedge { edge } => vec![edge],
            Self::Interval { left, right } => vec![left, right],
        }
    }

    /// Open-set membership; boundary points are outside.
    pub fn contains(&self, x: &Real) -> bool {
        match self {
            Self::Wedge { edge } => x > edge,
            Self::LeftWedge { edge } => x < edge,
            Self::Interval { left, right } => x > left && x < right,
        }
    }

    /// `right - left` for intervals; wedges are unbounded.
    pub fn extent(&self) -> Option<Real> {
        match self {
            Self::Interval { left, right } => Some(right - left),
            _ => None,
        }
    }

    pub fn complement_wedge(&self) -> Option<Self> {
        match self {
            Self::Wedge { edge } => Some(Self::LeftWedge { edge: edge.clone() }),
            Self::LeftWedge { edge } => Some(Self::Wedge { edge: edge.clone() }),
            Self::Interval { .. } => None,
        }
    }

    /// Checks ordering and that every boundary lies in `[-b, b]`. A boundary
    /// on the box edge gives an empty or full region, which the spectral
    /// gate rejects later.
    pub fn validate(&self, half_width: &Real) -> Result<()> {
        if let Self::Interval { left, right } = self {
            if left >= right {
                return Err(Error::InvalidConfig(format!(
                    "interval needs left < right, got [{left}, {right}]"
                )));
            }
        }
        for x in self.boundaries() {
            if x.abs() > *half_width {
                return Err(Error::InvalidConfig(format!(
                    "region boundary {x} is outside the box [-{half_width}, {half_width}]"
                )));
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Wedge { .. } => "wedge",
            Self::LeftWedge { .. } => "left-wedge",
            Self::Interval { .. } => "interval",
        }
    }
}

impl fmt::Display for RegionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Wedge { edge } | Self::LeftWedge { edge } => {
                write!(f, "{} edge={}", self.kind(), edge.to_decimal(30))
            }
            Self::Interval { left, right } => write!(
                f,
                "interval left={} right={}",
                left.to_decimal(30),
                right.to_decimal(30)
            ),
        }
    }
}

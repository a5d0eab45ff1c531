use rayon::prelude::*;

use crate::discretization::RegionSpec;
use crate::error::{Error, Result};
use crate::precision::Real;

use super::pipeline::{run_pipeline_with, ModularResult, PipelineConfig};
use super::probe::{smear_with_frame, GaussianProbe};

/// Which closed forms apply to a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MassRegime {
    /// `m·r` small enough that the massless interval formula is a fair
    /// reference.
    MasslessLimit,
    Any,
}

impl MassRegime {
    /// `MasslessLimit` when `m·r ≤ 10⁻²` for an interval of radius `r`.
    /// Wedges are `Any`: their reference holds for every mass.
    pub fn classify(region: &RegionSpec, mass: &Real) -> Self {
        match region.extent() {
            Some(extent) if (mass * &extent / 2).to_f64() <= 1e-2 => Self::MasslessLimit,
            _ => Self::Any,
        }
    }
}

/// Known continuum value of the smeared `M₋` at a probe centre: `2π` times
/// the distance to the edge inside a wedge, and `π(r² - (μ-c)²)` inside a
/// massless interval.
pub fn analytic_reference(region: &RegionSpec, regime: MassRegime, mu: &Real) -> Option<Real> {
    let two_pi = |x: Real| x.pi_like() * &x * 2;
    match region {
        RegionSpec::Wedge { edge } => (mu > edge).then(|| two_pi(mu - edge)),
        RegionSpec::LeftWedge { edge } => (mu < edge).then(|| two_pi(edge - mu)),
        RegionSpec::Interval { left, right } => {
            if regime != MassRegime::MasslessLimit {
                return None;
            }
            let center = (left + right) / 2;
            let radius = (right - left) / 2;
            let offset = (mu - &center).abs();
            if offset > radius {
                return None;
            }
            Some(mu.pi_like() * &(radius.square() - offset.square()))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanEntry {
    pub mu: Real,
    pub value: Real,
    pub reference: Option<Real>,
}

impl ScanEntry {
    pub fn abs_gap(&self) -> Option<Real> {
        self.reference.as_ref().map(|r| (&self.value - r).abs())
    }

    pub fn relative_gap(&self) -> Option<f64> {
        self.reference.as_ref().and_then(|r| {
            if r.is_zero() {
                None
            } else {
                Some(((&self.value - r) / r).abs().to_f64())
            }
        })
    }
}

/// Smeared `M₋` over probe centres of common width.
#[derive(Clone, Debug)]
pub struct SmearScan {
    pub region: RegionSpec,
    pub mass: Real,
    pub sigma: Real,
    pub regime: MassRegime,
    pub entries: Vec<ScanEntry>,
}

impl SmearScan {
    /// Smears `result.m_minus` at each `μ`; the centres must be strictly
    /// increasing. Probes are independent and run in parallel.
    pub fn from_result(result: &ModularResult, sigma: &Real, mus: &[Real]) -> Result<Self> {
        if mus.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig(
                "probe centres must be strictly increasing".into(),
            ));
        }
        let ctx = result.context();
        let config = &result.config;
        let regime = MassRegime::classify(&config.region, &config.mass);
        let entries = mus
            .par_iter()
            .map(|mu| {
                let probe = GaussianProbe::new(ctx, mu, sigma)?;
                let value =
                    smear_with_frame(&result.m_minus, &result.basis, &result.frame, &probe)?;
                Ok(ScanEntry {
                    mu: probe.center().clone(),
                    value,
                    reference: analytic_reference(&config.region, regime, mu),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            region: config.region.clone(),
            mass: config.mass.clone(),
            sigma: sigma.clone(),
            regime,
            entries,
        })
    }
}

/// One pipeline run followed by a scan of probe centres.
pub fn mu_scan(
    config: &PipelineConfig,
    sigma: &Real,
    mus: &[Real],
) -> Result<(ModularResult, SmearScan)> {
    mu_scan_with(config, sigma, mus, &mut |_| {})
}

pub fn mu_scan_with(
    config: &PipelineConfig,
    sigma: &Real,
    mus: &[Real],
    progress: &mut dyn FnMut(&str),
) -> Result<(ModularResult, SmearScan)> {
    let result = run_pipeline_with(config, progress)?;
    let scan = SmearScan::from_result(&result, sigma, mus)?;
    Ok((result, scan))
}

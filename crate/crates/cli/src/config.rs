use std::collections::BTreeMap;
use std::path::Path;

use modkernel_core::{BasisMode, PipelineConfig, PrecisionContext, Real, RegionSpec};

use crate::args::RunArgs;
use crate::error::CliError;

pub const DEFAULT_DIGITS: u32 = 300;
pub const DEFAULT_CELLS: usize = 64;
pub const DEFAULT_HALF_WIDTH: &str = "4";

/// Fully resolved run parameters. Numbers stay in their decimal source form
/// so that headers echo exactly what was asked for.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub region: String,
    pub edge: Option<String>,
    pub left: Option<String>,
    pub right: Option<String>,
    pub masses: Vec<String>,
    pub cells: usize,
    pub halfwidth: String,
    pub digits: u32,
    pub mode: BasisMode,
    pub sigma: Option<String>,
    pub mus: Vec<String>,
    pub mu_range: Option<String>,
    pub full_precision: bool,
    pub allow_small_box: bool,
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// `key = value` lines; blank lines and `#` comments are skipped. Keys are
/// normalized to kebab case.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (number, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            config_err(format!(
                "line {}: expected `key = value`, got {raw:?}",
                number + 1
            ))
        })?;
        let key = key.trim().replace('_', "-");
        if map.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(config_err(format!(
                "line {}: duplicate key {key:?}",
                number + 1
            )));
        }
    }
    Ok(map)
}

fn list(value: &str) -> Vec<String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

fn parse_flag(key: &str, value: &str) -> Result<bool, CliError> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(config_err(format!(
            "{key}: expected true or false, got {value:?}"
        ))),
    }
}

impl RunConfig {
    pub fn resolve(args: &RunArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => parse_config_file(&read_config(path)?)?,
            None => BTreeMap::new(),
        };
        let mut config = Self::from_map(&file)?;
        config.apply_flags(args)?;
        Ok(config)
    }

    fn from_map(map: &BTreeMap<String, String>) -> Result<Self, CliError> {
        const KNOWN: [&str; 14] = [
            "region",
            "edge",
            "left",
            "right",
            "mass",
            "cells",
            "halfwidth",
            "digits",
            "mode",
            "sigma",
            "mu",
            "mu-range",
            "full-precision",
            "allow-small-box",
        ];
        if let Some(unknown) = map.keys().find(|k| !KNOWN.contains(&k.as_str())) {
            return Err(config_err(format!("unknown config key {unknown:?}")));
        }
        let get = |k: &str| map.get(k).cloned();
        Ok(Self {
            region: get("region").unwrap_or_else(|| "interval".into()),
            edge: get("edge"),
            left: get("left"),
            right: get("right"),
            masses: get("mass").map(|v| list(&v)).unwrap_or_default(),
            cells: match get("cells") {
                Some(v) => v
                    .parse()
                    .map_err(|_| config_err(format!("cells: not a count: {v:?}")))?,
                None => DEFAULT_CELLS,
            },
            halfwidth: get("halfwidth").unwrap_or_else(|| DEFAULT_HALF_WIDTH.into()),
            digits: match get("digits") {
                Some(v) => v
                    .parse()
                    .map_err(|_| config_err(format!("digits: not a count: {v:?}")))?,
                None => DEFAULT_DIGITS,
            },
            mode: match get("mode") {
                Some(v) => v.parse()?,
                None => BasisMode::default(),
            },
            sigma: get("sigma"),
            mus: get("mu").map(|v| list(&v)).unwrap_or_default(),
            mu_range: get("mu-range"),
            full_precision: get("full-precision")
                .map(|v| parse_flag("full-precision", &v))
                .transpose()?
                .unwrap_or(false),
            allow_small_box: get("allow-small-box")
                .map(|v| parse_flag("allow-small-box", &v))
                .transpose()?
                .unwrap_or(false),
        })
    }

    fn apply_flags(&mut self, args: &RunArgs) -> Result<(), CliError> {
        if let Some(v) = &args.region {
            self.region = v.clone();
        }
        for (slot, flag) in [
            (&mut self.edge, &args.edge),
            (&mut self.left, &args.left),
            (&mut self.right, &args.right),
            (&mut self.sigma, &args.sigma),
            (&mut self.mu_range, &args.mu_range),
        ] {
            if flag.is_some() {
                slot.clone_from(flag);
            }
        }
        if !args.mass.is_empty() {
            self.masses = args.mass.iter().flat_map(|m| list(m)).collect();
        }
        if !args.mu.is_empty() {
            self.mus = args.mu.iter().flat_map(|m| list(m)).collect();
        }
        if let Some(v) = args.cells {
            self.cells = v;
        }
        if let Some(v) = &args.halfwidth {
            self.halfwidth = v.clone();
        }
        if let Some(v) = args.digits {
            self.digits = v;
        }
        if let Some(v) = &args.mode {
            self.mode = v.parse()?;
        }
        self.full_precision |= args.full_precision;
        self.allow_small_box |= args.allow_small_box;
        Ok(())
    }

    pub fn context(&self) -> Result<PrecisionContext, CliError> {
        Ok(PrecisionContext::new(self.digits)?)
    }

    fn required<'a>(&self, value: &'a Option<String>, name: &str) -> Result<&'a str, CliError> {
        value
            .as_deref()
            .ok_or_else(|| config_err(format!("region {} needs --{name}", self.region)))
    }

    pub fn region_spec(&self, ctx: &PrecisionContext) -> Result<RegionSpec, CliError> {
        Ok(match self.region.as_str() {
            "wedge" => RegionSpec::Wedge {
                edge: ctx.parse(self.required(&self.edge, "edge")?)?,
            },
            "left-wedge" => RegionSpec::LeftWedge {
                edge: ctx.parse(self.required(&self.edge, "edge")?)?,
            },
            "interval" => RegionSpec::Interval {
                left: ctx.parse(self.required(&self.left, "left")?)?,
                right: ctx.parse(self.required(&self.right, "right")?)?,
            },
            other => {
                return Err(config_err(format!(
                    "region {other:?} is not wedge, left-wedge or interval"
                )))
            }
        })
    }

    pub fn masses(&self) -> Result<&[String], CliError> {
        if self.masses.is_empty() {
            return Err(config_err("no --mass given"));
        }
        Ok(&self.masses)
    }

    /// Pipeline configuration for one mass, validated.
    pub fn pipeline(&self, ctx: &PrecisionContext, mass: &str) -> Result<PipelineConfig, CliError> {
        let mut config = PipelineConfig::new(
            *ctx,
            self.region_spec(ctx)?,
            ctx.parse(mass)?,
            self.cells,
            ctx.parse(&self.halfwidth)?,
        )
        .with_mode(self.mode);
        config.allow_small_box = self.allow_small_box;
        config.validate()?;
        Ok(config)
    }

    /// Explicit `σ`, else 5% of the region extent (interval) or of the
    /// distance from the edge to the far box wall (wedges).
    pub fn sigma(&self, ctx: &PrecisionContext) -> Result<Real, CliError> {
        if let Some(s) = &self.sigma {
            return Ok(ctx.parse(s)?);
        }
        let b = ctx.parse(&self.halfwidth)?;
        let span = match self.region_spec(ctx)? {
            RegionSpec::Interval { left, right } => right - left,
            RegionSpec::Wedge { edge } => b - edge,
            RegionSpec::LeftWedge { edge } => edge + b,
        };
        Ok(span / 20)
    }

    /// Sorted union of `--mu` and the expanded `--mu-range`; must be non-empty.
    pub fn probe_centres(&self, ctx: &PrecisionContext) -> Result<Vec<Real>, CliError> {
        let mut centres = self
            .mus
            .iter()
            .map(|m| ctx.parse(m))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(range) = &self.mu_range {
            centres.extend(expand_range(ctx, range)?);
        }
        if centres.is_empty() {
            return Err(config_err("no probe centres: pass --mu or --mu-range"));
        }
        centres.sort_by(|a, b| a.total_cmp(b));
        centres.dedup();
        Ok(centres)
    }

    /// `# key = value` lines, in a fixed order.
    pub fn echo(&self) -> Vec<(String, String)> {
        let mut out = vec![("region".to_string(), self.region.clone())];
        for (key, value) in [
            ("edge", &self.edge),
            ("left", &self.left),
            ("right", &self.right),
        ] {
            if let Some(v) = value {
                out.push((key.into(), v.clone()));
            }
        }
        out.push(("cells".into(), self.cells.to_string()));
        out.push(("halfwidth".into(), self.halfwidth.clone()));
        out.push(("digits".into(), self.digits.to_string()));
        out.push(("mode".into(), self.mode.to_string()));
        if let Some(s) = &self.sigma {
            out.push(("sigma".into(), s.clone()));
        }
        if !self.mus.is_empty() {
            out.push(("mu".into(), self.mus.join(",")));
        }
        if let Some(r) = &self.mu_range {
            out.push(("mu-range".into(), r.clone()));
        }
        out.push(("allow-small-box".into(), self.allow_small_box.to_string()));
        out
    }

    /// Significant digits written per CSV number.
    pub fn output_digits(&self) -> u32 {
        if self.full_precision {
            self.digits
        } else {
            self.digits.min(30)
        }
    }
}

fn read_config(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))
}

/// `lo:hi:step` with `step > 0` and `lo ≤ hi`; `hi` is included when it is
/// reached to within a millionth of a step.
pub fn expand_range(ctx: &PrecisionContext, range: &str) -> Result<Vec<Real>, CliError> {
    let parts: Vec<&str> = range.split(':').collect();
    let [lo, hi, step] = parts[..] else {
        return Err(config_err(format!("mu-range {range:?} is not lo:hi:step")));
    };
    let parse = |s: &str| {
        ctx.parse(s)
            .map_err(|_| config_err(format!("mu-range {range:?}: {s:?} is not a number")))
    };
    let (lo, hi, step) = (parse(lo)?, parse(hi)?, parse(step)?);
    if step <= 0 || hi < lo {
        return Err(config_err(format!(
            "mu-range {range:?} needs step > 0 and lo ≤ hi"
        )));
    }
    let count = ((&hi - &lo) / &step).to_f64() + 1e-6;
    if count > 1e5 {
        return Err(config_err(format!(
            "mu-range {range:?} has more than 100000 points"
        )));
    }
    Ok((0..=count.floor() as i32)
        .map(|k| &lo + &(step.clone() * k))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_file_keys_and_comments() {
        let map =
            parse_config_file("# header\nregion = wedge\nedge=0 # inline\nmu_range = 0:1:0.5\n\n")
                .unwrap();
        assert_eq!(map["region"], "wedge");
        assert_eq!(map["edge"], "0");
        assert_eq!(map["mu-range"], "0:1:0.5");
        assert!(parse_config_file("region wedge").is_err());
        assert!(parse_config_file("a = 1\na = 2").is_err());
    }

    #[test]
    fn flags_override_file() {
        let map = parse_config_file("region = wedge\nedge = 0\ncells = 32\nmass = 1, 4").unwrap();
        let mut config = RunConfig::from_map(&map).unwrap();
        let args = RunArgs {
            cells: Some(16),
            mass: vec!["2".into()],
            ..Default::default()
        };
        config.apply_flags(&args).unwrap();
        assert_eq!(config.cells, 16);
        assert_eq!(config.masses, ["2"]);
        assert_eq!(config.edge.as_deref(), Some("0"));
        assert!(RunConfig::from_map(&parse_config_file("colour = red").unwrap()).is_err());
    }

    #[test]
    fn range_expansion() {
        let ctx = PrecisionContext::new(40).unwrap();
        let r = expand_range(&ctx, "-1:1:0.5").unwrap();
        assert_eq!(r.len(), 5);
        assert_eq!(r[4], ctx.one());
        let r = expand_range(&ctx, "0:1:0.3").unwrap();
        assert_eq!(r.len(), 4);
        for bad in ["0:1", "1:0:0.1", "0:1:0", "a:1:0.1"] {
            assert!(
                matches!(expand_range(&ctx, bad), Err(CliError::Config(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn default_sigma_is_five_percent_of_span() {
        let ctx = PrecisionContext::new(40).unwrap();
        let map = parse_config_file("region = interval\nleft = -1\nright = 1").unwrap();
        let config = RunConfig::from_map(&map).unwrap();
        assert_eq!(config.sigma(&ctx).unwrap(), ctx.ratio(1, 10));
    }
}

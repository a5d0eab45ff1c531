use crate::discretization::{
    a_power_matrix, build_basis, chi_matrix, BasisMode, BasisSet, Grid, OrthonormalFrame,
    RegionSpec,
};
use crate::error::{Error, Result};
use crate::linalg::{invert, MatrixMP};
use crate::precision::{PrecisionContext, Real};

use super::spectrum::{assemble_b, build_m_from, spectrum_gate_deflated, Deflation, Sign};

/// Everything that determines one modular-Hamiltonian computation.
#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub context: PrecisionContext,
    pub region: RegionSpec,
    pub mass: Real,
    pub n_cells: usize,
    pub half_width: Real,
    pub mode: BasisMode,
    /// Skip the `b ≥ 2·extent` margin check for bounded regions.
    pub allow_small_box: bool,
}

impl PipelineConfig {
    pub fn new(
        context: PrecisionContext,
        region: RegionSpec,
        mass: Real,
        n_cells: usize,
        half_width: Real,
    ) -> Self {
        Self {
            context,
            region,
            mass,
            n_cells,
            half_width,
            mode: BasisMode::default(),
            allow_small_box: false,
        }
    }

    pub fn with_mode(mut self, mode: BasisMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.mass <= 0 {
            return Err(Error::InvalidConfig(format!(
                "mass must be positive, got {}",
                self.mass
            )));
        }
        if self.half_width <= 0 {
            return Err(Error::InvalidConfig(format!(
                "half-width must be positive, got {}",
                self.half_width
            )));
        }
        self.region.validate(&self.half_width)?;
        if let Some(extent) = self.region.extent() {
            // the box boundary must not feel the region
            if !self.allow_small_box && self.half_width < extent.clone() * 2 {
                return Err(Error::InvalidConfig(format!(
                    "half-width {} is below twice the region extent {}; pass allow_small_box to override",
                    self.half_width, extent
                )));
            }
        }
        Ok(())
    }

    /// `10^-(digits - guard)`: the band `|λ| < 1 + ε` is treated as forbidden.
    pub fn gate_epsilon(&self) -> Real {
        self.context.tolerance(self.context.guard_digits())
    }

    /// Below `10^-(digits/2)` the nearest-to-one eigenvalue has lost half
    /// its digits to `arcoth`.
    pub fn warning_gap(&self) -> Real {
        self.context
            .ten_pow(-(self.context.decimal_digits() as i32 / 2))
    }
}

/// Output of [`run_pipeline`]. Bilinear forms are in the hat basis.
#[derive(Clone, Debug)]
pub struct ModularResult {
    pub config: PipelineConfig,
    pub basis: BasisSet,
    pub frame: OrthonormalFrame,
    pub b_eigenvalues: Vec<Real>,
    pub m_minus: MatrixMP,
    pub m_plus: MatrixMP,
    pub min_gap: Real,
    pub deflated: usize,
    /// `-1` or `1`: where the deflated eigenvalues sit.
    pub deflation_target: i32,
    pub deflation_residual: Real,
    pub precision_warning: bool,
    /// `max |χ̃² - χ̃|`; zero up to rounding for the boundary-split basis.
    pub chi_defect: Real,
    pub eigen_residual: Real,
    pub sweeps: usize,
}

impl ModularResult {
    pub fn context(&self) -> &PrecisionContext {
        &self.config.context
    }

    pub fn grid(&self) -> &Grid {
        self.basis.grid()
    }
}

/// Runs the pipeline; `progress` receives one short line per stage.
pub fn run_pipeline_with(
    config: &PipelineConfig,
    progress: &mut dyn FnMut(&str),
) -> Result<ModularResult> {
    config.validate()?;
    let ctx = &config.context;
    let grid = Grid::new(ctx, config.n_cells, &config.half_width, &config.region)?;
    let basis = build_basis(&grid, config.mode);
    let n = basis.len();
    progress(&format!("basis: {n} elements ({} mode)", config.mode));
    let frame = OrthonormalFrame::new(&basis)?;

    let chi_t = frame.to_frame(&chi_matrix(&basis, &config.region))?;
    let chi_defect = chi_t.multiply(&chi_t)?.max_abs_diff(&chi_t)?;

    progress("kernel: A^(-1/4)");
    let a_neg_t = frame.to_frame(&a_power_matrix(&basis, &config.mass, &ctx.ratio(-1, 4))?)?;
    let a_pos_t = invert(&a_neg_t)?.symmetrized()?;

    progress("spectrum: B");
    let b = assemble_b(&chi_t, &a_neg_t, &a_pos_t)?;
    let deflation = Deflation::from_counts(
        n,
        basis.outside_count(&config.region),
        config.gate_epsilon() * &b.frobenius_norm(),
    );
    let gated = spectrum_gate_deflated(&b, &config.gate_epsilon(), &deflation)?;
    let precision_warning = gated.min_gap < config.warning_gap();
    progress(&format!(
        "spectrum: min gap {}, {} deflated",
        gated.min_gap.to_decimal(6),
        gated.deflated.len()
    ));

    let f = gated.arcoth()?;
    let m_minus = build_m_from(&f, &a_neg_t, &a_pos_t, Sign::Minus, &frame)?;
    let m_plus = build_m_from(&f, &a_neg_t, &a_pos_t, Sign::Plus, &frame)?;
    progress("assembled M-, M+");

    Ok(ModularResult {
        config: config.clone(),
        b_eigenvalues: gated.eigen.eigenvalues.clone(),
        min_gap: gated.min_gap,
        deflated: gated.deflated.len(),
        deflation_target: deflation.target,
        deflation_residual: gated.deflation_residual,
        eigen_residual: gated.eigen.residual,
        sweeps: gated.eigen.sweeps,
        precision_warning,
        chi_defect,
        basis,
        frame,
        m_minus,
        m_plus,
    })
}

pub fn run_pipeline(config: &PipelineConfig) -> Result<ModularResult> {
    run_pipeline_with(config, &mut |_| {})
}

//! From the discretized projector and `A^{-1/4}` to the modular generator
//! blocks `M±`, their pointwise kernels and Gaussian-smeared values.

mod grid_kernel;
mod pipeline;
mod probe;
mod scan;
mod spectrum;

pub use grid_kernel::{
    kernel_diagnostics, kernel_on_grid, DiagnosticDomain, GridKernel, KernelDiagnostics,
};
pub use pipeline::{run_pipeline, run_pipeline_with, ModularResult, PipelineConfig};
pub use probe::{project, smear, smear_with_frame, GaussianProbe};
pub use scan::{analytic_reference, mu_scan, mu_scan_with, MassRegime, ScanEntry, SmearScan};
pub use spectrum::{
    assemble_b, build_b, build_m, spectrum_gate, spectrum_gate_deflated, Deflation, GatedSpectrum,
    Sign,
};

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use modkernel_core::modular::{
    kernel_diagnostics, kernel_on_grid, run_pipeline_with, DiagnosticDomain, MassRegime,
    ModularResult, SmearScan,
};
use modkernel_core::{PrecisionContext, Real};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{self, fmt, per_mass_path, write_header, write_kernel_rows, write_scan_rows};

fn progress(msg: &str) {
    eprintln!("[modkernel] {msg}");
}

/// Masses sorted by value, paired with their source text.
fn sorted_masses(
    config: &RunConfig,
    ctx: &PrecisionContext,
) -> Result<Vec<(String, Real)>, CliError> {
    let mut masses = config
        .masses()?
        .iter()
        .map(|m| Ok((m.clone(), ctx.parse(m)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    masses.sort_by(|a, b| a.1.total_cmp(&b.1));
    masses.dedup_by(|a, b| a.1 == b.1);
    Ok(masses)
}

fn run(config: &RunConfig, ctx: &PrecisionContext, mass: &str) -> Result<ModularResult, CliError> {
    let pipeline = config.pipeline(ctx, mass)?;
    let label = format!("m={mass} N={} digits={}", config.cells, config.digits);
    Ok(run_pipeline_with(&pipeline, &mut |stage| {
        progress(&format!("{label}: {stage}"))
    })?)
}

/// Spectrum summary for headers.
fn result_lines(result: &ModularResult) -> Vec<(String, String)> {
    let ev = &result.b_eigenvalues;
    let d = 12;
    vec![
        ("elements".into(), result.basis.len().to_string()),
        ("deflated".into(), result.deflated.to_string()),
        ("deflated_at".into(), result.deflation_target.to_string()),
        (
            "deflation_residual".into(),
            fmt(&result.deflation_residual, 3),
        ),
        ("min_gap".into(), fmt(&result.min_gap, d)),
        ("lambda_min".into(), fmt(&ev[0], d)),
        ("lambda_max".into(), fmt(&ev[ev.len() - 1], d)),
        (
            "precision_warning".into(),
            result.precision_warning.to_string(),
        ),
        ("chi_defect".into(), fmt(&result.chi_defect, 3)),
    ]
}

fn regime_name(regime: MassRegime) -> &'static str {
    match regime {
        MassRegime::MasslessLimit => "massless-limit",
        MassRegime::Any => "any",
    }
}

/// Writes one block per mass, to `out` or per-mass files derived from it.
fn for_each_mass<F>(config: &RunConfig, out: Option<&Path>, mut block: F) -> Result<(), CliError>
where
    F: FnMut(&mut dyn Write, &str, &PrecisionContext) -> Result<(), CliError>,
{
    let ctx = config.context()?;
    let masses = sorted_masses(config, &ctx)?;
    let several = masses.len() > 1;
    match out {
        Some(base) => {
            for (text, _) in &masses {
                let path = per_mass_path(base, text, several);
                let mut w = output::open(Some(&path))?;
                block(&mut *w, text, &ctx)?;
                w.flush()?;
                progress(&format!("wrote {}", path.display()));
            }
        }
        None => {
            let mut w = output::open(None)?;
            for (text, _) in &masses {
                block(&mut *w, text, &ctx)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

pub fn cmd_kernel(config: &RunConfig, out: Option<&Path>) -> Result<(), CliError> {
    for_each_mass(config, out, |w, mass, ctx| {
        let result = run(config, ctx, mass)?;
        let kernel = kernel_on_grid(&result.m_minus, &result.basis, &result.frame)?;
        let mut lines = config.echo();
        lines.push(("mass".into(), mass.into()));
        lines.extend(result_lines(&result));
        for (name, domain) in [
            ("region", DiagnosticDomain::Region),
            ("box", DiagnosticDomain::Box),
        ] {
            let d = kernel_diagnostics(&kernel, &result.config.region, domain);
            lines.push((format!("band_mass_{name}"), fmt(&d.band, 8)));
            lines.push((format!("off_band_mass_{name}"), fmt(&d.off_band, 8)));
            lines.push((format!("antidiagonal_mass_{name}"), fmt(&d.antidiagonal, 8)));
        }
        write_header(w, "kernel", &lines)?;
        write_kernel_rows(w, &kernel, config.output_digits())?;
        Ok(())
    })
}

pub fn cmd_scan(config: &RunConfig, out: Option<&Path>) -> Result<(), CliError> {
    // fail on probe or sigma problems before any pipeline work
    let ctx = config.context()?;
    let centres = config.probe_centres(&ctx)?;
    let sigma = config.sigma(&ctx)?;
    for_each_mass(config, out, |w, mass, ctx| {
        let result = run(config, ctx, mass)?;
        let scan = SmearScan::from_result(&result, &sigma, &centres)?;
        let mut lines = config.echo();
        lines.push(("mass".into(), mass.into()));
        lines.push(("sigma_used".into(), fmt(&sigma, 30)));
        lines.push(("regime".into(), regime_name(scan.regime).into()));
        lines.extend(result_lines(&result));
        write_header(w, "scan", &lines)?;
        write_scan_rows(w, &scan, config.output_digits())?;
        Ok(())
    })
}

/// `N:b:digits`.
pub fn parse_rung(text: &str) -> Result<(usize, String, u32), CliError> {
    let bad = || CliError::Config(format!("ladder rung {text:?} is not N:b:digits"));
    let parts: Vec<&str> = text.split(':').collect();
    let [n, b, d] = parts[..] else {
        return Err(bad());
    };
    let n = n.trim().parse().map_err(|_| bad())?;
    let d = d.trim().parse().map_err(|_| bad())?;
    if b.trim().is_empty() {
        return Err(bad());
    }
    Ok((n, b.trim().to_string(), d))
}

pub fn cmd_converge(
    config: &RunConfig,
    ladder: &[String],
    out: Option<&Path>,
) -> Result<(), CliError> {
    let rungs = ladder
        .iter()
        .map(|r| parse_rung(r))
        .collect::<Result<Vec<_>, _>>()?;
    if rungs.is_empty() {
        return Err(CliError::Config("empty ladder".into()));
    }
    // probe list and masses are checked once, at the first rung's precision
    let ctx0 = config.context()?;
    config.probe_centres(&ctx0)?;
    let masses: Vec<String> = sorted_masses(config, &ctx0)?
        .into_iter()
        .map(|m| m.0)
        .collect();

    let mut w = output::open(out)?;
    let mut lines = config.echo();
    lines.push(("ladder".into(), ladder.join(" ")));
    write_header(&mut w, "converge", &lines)?;
    writeln!(
        w,
        "mass,cells,halfwidth,digits,mu,value,analytic_ref,abs_gap,min_gap,seconds,status,diff_prev,abs_diff_prev"
    )?;
    for mass in &masses {
        let mut previous: Option<Vec<Real>> = None;
        for (cells, halfwidth, digits) in &rungs {
            let mut rung = config.clone();
            rung.cells = *cells;
            rung.halfwidth = halfwidth.clone();
            rung.digits = *digits;
            let od = rung.output_digits();
            let start = Instant::now();
            let outcome = (|| {
                let ctx = rung.context()?;
                let centres = rung.probe_centres(&ctx)?;
                let result = run(&rung, &ctx, mass)?;
                let scan = SmearScan::from_result(&result, &rung.sigma(&ctx)?, &centres)?;
                Ok::<_, CliError>((result, scan))
            })();
            let seconds = format!("{:.3}", start.elapsed().as_secs_f64());
            let prefix = format!("{mass},{cells},{halfwidth},{digits}");
            match outcome {
                Ok((result, scan)) => {
                    let values: Vec<Real> = scan.entries.iter().map(|e| e.value.clone()).collect();
                    for (i, e) in scan.entries.iter().enumerate() {
                        let (diff, abs_diff) = match previous.as_ref().and_then(|p| p.get(i)) {
                            Some(prev) => {
                                let d = &e.value - prev;
                                (fmt(&d, od), fmt(&d.abs(), od))
                            }
                            None => (String::new(), String::new()),
                        };
                        writeln!(
                            w,
                            "{prefix},{},{},{},{},{},{seconds},ok,{diff},{abs_diff}",
                            fmt(&e.mu, od),
                            fmt(&e.value, od),
                            e.reference.as_ref().map(|r| fmt(r, od)).unwrap_or_default(),
                            e.abs_gap().map(|g| fmt(&g, od)).unwrap_or_default(),
                            fmt(&result.min_gap, 12),
                        )?;
                    }
                    previous = Some(values);
                }
                Err(err) => {
                    progress(&format!("rung {cells}:{halfwidth}:{digits} failed: {err}"));
                    writeln!(w, "{prefix},,,,,,{seconds},{},,", err.code())?;
                }
            }
            w.flush()?;
        }
    }
    Ok(())
}

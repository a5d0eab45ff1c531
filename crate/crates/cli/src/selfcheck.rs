use modkernel_core::discretization::{
    build_basis, momentum_pair_integral, BasisMode, Grid, MomentumOptions, PowerKernel, RegionSpec,
    Slope,
};
use modkernel_core::linalg::{cholesky, invert, sym_eigen, MatrixMP};
use modkernel_core::modular::{
    analytic_reference, build_b, smear, spectrum_gate, GaussianProbe, MassRegime,
};
use modkernel_core::precision::{arcoth, coth};
use modkernel_core::{Error, PrecisionContext};

use crate::error::CliError;

type Check = fn(&PrecisionContext, bool) -> Result<(), String>;

/// Names of the checks, in the order they run.
pub const CHECKS: [(&str, Check); 8] = [
    ("b-trivial", b_trivial),
    ("gate-trivial", gate_trivial),
    ("arcoth-roundtrip", arcoth_roundtrip),
    ("gram-cholesky-inverse", gram_cholesky_inverse),
    ("jacobi-2x2", jacobi_small),
    ("momentum-vs-position", momentum_vs_position),
    ("smear-normalization", smear_normalization),
    ("analytic-references", analytic_references),
];

fn ensure(ok: bool, detail: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(detail())
    }
}

fn b_trivial(ctx: &PrecisionContext, _: bool) -> Result<(), String> {
    let a = MatrixMP::from_i64_rows(ctx, &[&[3, 1], &[1, 2]]).map_err(|e| e.to_string())?;
    let id = MatrixMP::identity(ctx, 2);
    let b = build_b(&id, &a).map_err(|e| e.to_string())?;
    let gap = b.max_abs_diff(&id).map_err(|e| e.to_string())?;
    ensure(gap < ctx.tolerance(10), || {
        format!("χ = 1 gives |B - 1| = {}", gap.to_decimal(5))
    })?;
    let b = build_b(&MatrixMP::zeros(ctx, 2, 2), &a).map_err(|e| e.to_string())?;
    let gap = b
        .max_abs_diff(&id.scale(&ctx.int(-1)))
        .map_err(|e| e.to_string())?;
    ensure(gap.is_zero(), || {
        format!("χ = 0 gives |B + 1| = {}", gap.to_decimal(5))
    })
}

fn gate_trivial(ctx: &PrecisionContext, _: bool) -> Result<(), String> {
    let eps = ctx.tolerance(ctx.guard_digits());
    match spectrum_gate(&MatrixMP::identity(ctx, 2), &eps) {
        Err(Error::ForbiddenSpectrum { .. }) => {}
        other => return Err(format!("B = 1 passed the gate: {other:?}")),
    }
    let d = MatrixMP::diagonal(ctx, &[ctx.int(2), ctx.int(-3)]);
    let gated = spectrum_gate(&d, &eps).map_err(|e| e.to_string())?;
    ensure(gated.min_gap == ctx.one(), || {
        format!("min_gap {} instead of 1", gated.min_gap)
    })
}

fn arcoth_roundtrip(ctx: &PrecisionContext, _: bool) -> Result<(), String> {
    for text in ["1.5", "-2", "10", "1.00001", "-1000"] {
        let x = ctx.parse(text).map_err(|e| e.to_string())?;
        let back = coth(&arcoth(&x).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let gap = (&back - &x).abs() / &x.abs();
        ensure(gap < ctx.tolerance(30), || {
            format!("x = {text}: relative gap {}", gap.to_decimal(5))
        })?;
    }
    ensure(arcoth(&ctx.ratio(1, 2)).is_err(), || {
        "arcoth(1/2) did not fail".into()
    })
}

fn gram_cholesky_inverse(ctx: &PrecisionContext, _: bool) -> Result<(), String> {
    let region = RegionSpec::Interval {
        left: ctx.int(-1),
        right: ctx.int(1),
    };
    let grid = Grid::new(ctx, 16, &ctx.int(2), &region).map_err(|e| e.to_string())?;
    let g = build_basis(&grid, BasisMode::Standard).gram().clone();
    let h = grid.spacing();
    let entries_ok =
        *g.get(3, 3) == h.clone() * 2 / 3 && *g.get(3, 4) == h.clone() / 6 && g.get(3, 5).is_zero();
    ensure(entries_ok, || {
        "Gram entries differ from 2h/3, h/6, 0".into()
    })?;
    let tol = ctx.tolerance(20);
    let l = cholesky(&g).map_err(|e| e.to_string())?;
    let r = l
        .multiply(&l.transpose())
        .and_then(|p| p.max_abs_diff(&g))
        .map_err(|e| e.to_string())?;
    ensure(r < tol.clone() * g.max_abs(), || {
        format!("|L Lᵀ - G| = {}", r.to_decimal(5))
    })?;
    let inv = invert(&g).map_err(|e| e.to_string())?;
    let id = MatrixMP::identity(ctx, g.rows());
    let r = g
        .multiply(&inv)
        .and_then(|p| p.max_abs_diff(&id))
        .map_err(|e| e.to_string())?;
    ensure(r < tol, || format!("|G G⁻¹ - 1| = {}", r.to_decimal(5)))
}

fn jacobi_small(ctx: &PrecisionContext, _: bool) -> Result<(), String> {
    let a = MatrixMP::from_i64_rows(ctx, &[&[2, 1, 0], &[1, 2, 0], &[0, 0, 5]])
        .map_err(|e| e.to_string())?;
    let eig = sym_eigen(&a).map_err(|e| e.to_string())?;
    for (got, want) in eig.eigenvalues.iter().zip([1, 3, 5]) {
        ensure((got - want).abs() < ctx.tolerance(20), || {
            format!("eigenvalue {got} instead of {want}")
        })?;
    }
    Ok(())
}

/// Five element-pair integrals of `A^{-1/4}`, by the position-space series
/// and by momentum quadrature. The check runs at 50 digits at most.
fn momentum_vs_position(ctx: &PrecisionContext, fault: bool) -> Result<(), String> {
    let ctx = PrecisionContext::new(ctx.decimal_digits().min(50)).map_err(|e| e.to_string())?;
    let (m, h, s) = (ctx.one(), ctx.ratio(1, 2), ctx.ratio(-1, 4));
    let kernel = PowerKernel::new(&ctx, &m, &h, &s, 6).map_err(|e| e.to_string())?;
    let target = ctx.decimal_digits() - 20;
    let options = MomentumOptions {
        target_digits: target,
        // a starved rule must be caught by the error estimate
        points: if fault { 3 } else { 30 },
        cutoff: None,
    };
    for (a, b, d) in [
        (Slope::Falling, Slope::Falling, 0),
        (Slope::Rising, Slope::Falling, 0),
        (Slope::Falling, Slope::Rising, 1),
        (Slope::Rising, Slope::Rising, -2),
        (Slope::Falling, Slope::Rising, 3),
    ] {
        let q = momentum_pair_integral(&ctx, &m, &h, &s, a, b, d, &options)
            .map_err(|e| format!("({a:?}, {b:?}, {d}): {e}"))?;
        let x = kernel.pair_integral(a, b, d);
        let gap = (&q.value - &x).abs() / &x.abs();
        ensure(gap < ctx.ten_pow(-(target as i32 - 2)), || {
            format!("({a:?}, {b:?}, {d}): relative gap {}", gap.to_decimal(5))
        })?;
    }
    Ok(())
}

fn smear_normalization(ctx: &PrecisionContext, _: bool) -> Result<(), String> {
    let region = RegionSpec::Interval {
        left: ctx.int(-1),
        right: ctx.int(1),
    };
    let grid = Grid::new(ctx, 64, &ctx.int(4), &region).map_err(|e| e.to_string())?;
    let basis = build_basis(&grid, BasisMode::BoundarySplit);
    let probe = GaussianProbe::new(
        ctx,
        &ctx.parse("0.3").map_err(|e| e.to_string())?,
        &ctx.ratio(1, 4),
    )
    .map_err(|e| e.to_string())?;
    let v = smear(basis.gram(), &basis, &probe).map_err(|e| e.to_string())?;
    ensure((v.clone() - 1).abs().to_f64() < 1e-3, || {
        format!("⟨g, g⟩ = {}", v.to_decimal(10))
    })
}

fn analytic_references(ctx: &PrecisionContext, _: bool) -> Result<(), String> {
    let tol = ctx.tolerance(5);
    let wedge = RegionSpec::Wedge { edge: ctx.zero() };
    let interval = RegionSpec::Interval {
        left: ctx.int(-1),
        right: ctx.int(1),
    };
    let cases = [
        (
            analytic_reference(&wedge, MassRegime::Any, &ctx.one()),
            ctx.pi() * 2,
        ),
        (
            analytic_reference(&interval, MassRegime::MasslessLimit, &ctx.zero()),
            ctx.pi(),
        ),
        (
            analytic_reference(&interval, MassRegime::MasslessLimit, &ctx.one()),
            ctx.zero(),
        ),
    ];
    for (got, want) in cases {
        let got = got.ok_or("reference missing")?;
        ensure((&got - &want).abs() < tol, || {
            format!("{got} instead of {want}")
        })?;
    }
    Ok(())
}

/// Runs every check, printing `PASS`/`FAIL` lines to standard output.
/// `fault` names a check to break deliberately.
pub fn run(digits: u32, fault: Option<&str>) -> Result<(), CliError> {
    if let Some(f) = fault {
        if !CHECKS.iter().any(|(name, _)| *name == f) {
            return Err(CliError::Config(format!("no check named {f:?}")));
        }
    }
    let ctx = PrecisionContext::new(digits)?;
    let mut failed = Vec::new();
    for (name, check) in CHECKS {
        match check(&ctx, fault == Some(name)) {
            Ok(()) => println!("PASS {name}"),
            Err(detail) => {
                println!("FAIL {name}: {detail}");
                failed.push(name.to_string());
            }
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Selfcheck(failed))
    }
}

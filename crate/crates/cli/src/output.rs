use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use modkernel_core::modular::GridKernel;
use modkernel_core::{Real, SmearScan};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Header block: `# modkernel <version>`, then `# key = value` lines.
pub fn write_header<W: Write + ?Sized>(
    out: &mut W,
    command: &str,
    lines: &[(String, String)],
) -> io::Result<()> {
    writeln!(out, "# modkernel {VERSION}")?;
    writeln!(out, "# command = {command}")?;
    for (key, value) in lines {
        writeln!(out, "# {key} = {value}")?;
    }
    Ok(())
}

pub fn fmt(value: &Real, digits: u32) -> String {
    value.to_decimal(digits)
}

fn fmt_opt(value: Option<&Real>, digits: u32) -> String {
    value.map(|v| fmt(v, digits)).unwrap_or_default()
}

/// `mu,value,analytic_ref,abs_gap` rows; the last two are empty without a
/// reference.
pub fn write_scan_rows<W: Write + ?Sized>(
    out: &mut W,
    scan: &SmearScan,
    digits: u32,
) -> io::Result<()> {
    writeln!(out, "mu,value,analytic_ref,abs_gap")?;
    for e in &scan.entries {
        writeln!(
            out,
            "{},{},{},{}",
            fmt(&e.mu, digits),
            fmt(&e.value, digits),
            fmt_opt(e.reference.as_ref(), digits),
            fmt_opt(e.abs_gap().as_ref(), digits)
        )?;
    }
    Ok(())
}

/// `x,y,value` rows, row-major over the interior nodes.
pub fn write_kernel_rows<W: Write + ?Sized>(
    out: &mut W,
    kernel: &GridKernel,
    digits: u32,
) -> io::Result<()> {
    writeln!(out, "x,y,value")?;
    let xs: Vec<String> = kernel.positions.iter().map(|x| fmt(x, digits)).collect();
    for (r, x) in xs.iter().enumerate() {
        for (c, y) in xs.iter().enumerate() {
            writeln!(out, "{x},{y},{}", fmt(kernel.values.get(r, c), digits))?;
        }
    }
    Ok(())
}

/// `base` itself for a single output, else `<stem>_m<mass>.<ext>` next to it.
pub fn per_mass_path(base: &Path, mass: &str, several: bool) -> PathBuf {
    if !several {
        return base.to_path_buf();
    }
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let name = match base.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}_m{mass}.{ext}"),
        None => format!("{stem}_m{mass}"),
    };
    base.with_file_name(name)
}

/// Buffered writer to a file, or to standard output when `path` is `None`.
pub fn open(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn per_mass_names() {
        let p = Path::new("/tmp/scan.csv");
        assert_eq!(per_mass_path(p, "1", false), p);
        assert_eq!(
            per_mass_path(p, "0.001", true),
            Path::new("/tmp/scan_m0.001.csv")
        );
        assert_eq!(
            per_mass_path(Path::new("out"), "4", true),
            Path::new("out_m4")
        );
    }
}

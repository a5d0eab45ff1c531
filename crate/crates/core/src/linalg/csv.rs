//! Plain-text matrix dumps: `#`-prefixed `key = value` header lines carrying
//! the shape and the context digits, then one comma-separated row per line.

use super::MatrixMP;
use crate::error::{Error, Result};
use crate::precision::PrecisionContext;
use std::io::{BufRead, Write};

/// Writes `matrix` with `significant` digits per entry (default: the full
/// context precision).
pub fn write_matrix_csv<W: Write>(
    mut out: W,
    matrix: &MatrixMP,
    significant: Option<u32>,
) -> std::io::Result<()> {
    let ctx = matrix.context();
    let digits = significant.unwrap_or(ctx.decimal_digits());
    writeln!(out, "# rows = {}", matrix.rows())?;
    writeln!(out, "# cols = {}", matrix.cols())?;
    writeln!(out, "# digits = {}", ctx.decimal_digits())?;
    for i in 0..matrix.rows() {
        let line: Vec<String> = matrix.row(i).iter().map(|v| v.to_decimal(digits)).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

/// Reads a dump written by [`write_matrix_csv`]. Unknown header keys are
/// ignored; `rows`, `cols` and `digits` are required.
pub fn read_matrix_csv<R: BufRead>(input: R) -> Result<MatrixMP> {
    let mut rows = None;
    let mut cols = None;
    let mut digits = None;
    let mut body = Vec::new();
    for line in input.lines() {
        let line = line.map_err(|e| Error::Parse(e.to_string()))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix('#') {
            if let Some((key, value)) = header.split_once('=') {
                let parse = |v: &str| {
                    v.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad header value {v:?}")))
                };
                match key.trim() {
                    "rows" => rows = Some(parse(value)?),
                    "cols" => cols = Some(parse(value)?),
                    "digits" => digits = Some(parse(value)?),
                    _ => {}
                }
            }
            continue;
        }
        body.push(line.to_string());
    }
    let (rows, cols, digits) = match (rows, cols, digits) {
        (Some(r), Some(c), Some(d)) => (r, c, d),
        _ => return Err(Error::Parse("missing rows/cols/digits header".into())),
    };
    let ctx = PrecisionContext::new(digits as u32)?;
    if body.len() != rows {
        return Err(Error::Parse(format!(
            "expected {rows} rows, found {}",
            body.len()
        )));
    }
    let parsed = body
        .iter()
        .map(|line| {
            let fields = line
                .split(',')
                .map(|f| ctx.parse(f))
                .collect::<Result<Vec<_>>>()?;
            if fields.len() != cols {
                return Err(Error::Parse(format!(
                    "expected {cols} columns, found {}",
                    fields.len()
                )));
            }
            Ok(fields)
        })
        .collect::<Result<Vec<_>>>()?;
    MatrixMP::from_rows(&ctx, parsed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dump_round_trips_at_full_precision() {
        let ctx = PrecisionContext::new(45).unwrap();
        let m = MatrixMP::from_fn(&ctx, 2, 3, |i, j| {
            ctx.pi() * ctx.ratio(i as i64 - 1, j as i64 + 7)
        });
        let mut buf = Vec::new();
        write_matrix_csv(&mut buf, &m, None).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# rows = 2\n# cols = 3\n# digits = 45\n"));
        let back = read_matrix_csv(buf.as_slice()).unwrap();
        let mut again = Vec::new();
        write_matrix_csv(&mut again, &back, None).unwrap();
        assert_eq!(buf, again);
    }

    #[test]
    fn rejects_missing_headers_and_ragged_rows() {
        assert!(read_matrix_csv("1,2\n3,4\n".as_bytes()).is_err());
        let ragged = "# rows = 2\n# cols = 2\n# digits = 30\n1,2\n3\n";
        assert!(read_matrix_csv(ragged.as_bytes()).is_err());
    }
}

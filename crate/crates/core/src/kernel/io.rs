use std::io::{BufRead, Write};

use super::{Partition, PiecewiseKernel};
use crate::{Error, Result};

/// Writes `q N`, the masses, then one value per line in row-major order.
pub fn write_kernel<W: Write>(mut w: W, f: &PiecewiseKernel) -> Result<()> {
    writeln!(w, "{} {}", f.order(), f.size())?;
    let masses: Vec<String> = f.partition().masses().iter().map(|m| format!("{m:.17e}")).collect();
    writeln!(w, "{}", masses.join(" "))?;
    for v in f.values() {
        writeln!(w, "{v:.17e}")?;
    }
    Ok(())
}

pub(crate) fn parse_numbers(line: &str, what: &str) -> Result<Vec<f64>> {
    line.split_whitespace()
        .map(|t| t.parse::<f64>().map_err(|e| Error::Parse(format!("{what}: {t:?}: {e}"))))
        .collect()
}

pub(crate) fn parse_header(line: Option<String>, fields: usize) -> Result<Vec<usize>> {
    let line = line.ok_or_else(|| Error::Parse("missing header".into()))?;
    let parts: Vec<usize> = line
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|e| Error::Parse(format!("header {t:?}: {e}"))))
        .collect::<Result<_>>()?;
    if parts.len() != fields {
        return Err(Error::Parse(format!("header needs {fields} fields, got {line:?}")));
    }
    Ok(parts)
}

/// Reads the format of [`write_kernel`]. The partition bound `α` is set to
/// half the smallest mass.
pub fn read_kernel<R: BufRead>(r: R) -> Result<PiecewiseKernel> {
    let mut lines = r.lines().filter(|l| !matches!(l, Ok(s) if s.trim().is_empty()));
    let header = parse_header(lines.next().transpose()?, 2)?;
    let (q, n) = (header[0], header[1]);
    let masses = parse_numbers(
        &lines.next().transpose()?.ok_or_else(|| Error::Parse("missing masses line".into()))?,
        "mass",
    )?;
    if masses.len() != n {
        return Err(Error::Parse(format!("expected {n} masses, got {}", masses.len())));
    }
    let mut values = Vec::new();
    for line in lines {
        values.extend(parse_numbers(&line?, "value")?);
    }
    PiecewiseKernel::new(q, Partition::with_masses(masses)?, values)
}

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{Field1D, Field2D};
use crate::error::{Error, Result};

/// Sidecar metadata written next to every field CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldMeta {
    pub time: f64,
    pub periodic: bool,
    /// `[x_lo, x_hi]` in 1D, `[0, 1, 0, 1]` for the unit square.
    pub domain: Vec<f64>,
}

fn sidecar(path: &Path) -> std::path::PathBuf {
    path.with_extension("json")
}

fn write_meta(path: &Path, meta: &FieldMeta) -> Result<()> {
    let text = serde_json::to_string_pretty(meta).map_err(|e| Error::Io(e.to_string()))?;
    fs::write(sidecar(path), text)?;
    Ok(())
}

fn read_meta(path: &Path) -> Result<FieldMeta> {
    let text = fs::read_to_string(sidecar(path))?;
    serde_json::from_str(&text).map_err(|e| Error::Io(e.to_string()))
}

fn parse_rows(path: &Path, header: &str) -> Result<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some(header) {
        return Err(Error::Io(format!("{}: expected header '{header}'", path.display())));
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            l.split(',')
                .map(|v| v.trim().parse::<f64>().map_err(|e| Error::Io(format!("{}: {e}", path.display()))))
                .collect()
        })
        .collect()
}

/// Writes `x,u` rows plus a `{time, periodic, domain}` JSON sidecar with the same stem.
pub fn write_field1d_csv(path: &Path, f: &Field1D) -> Result<()> {
    let mut out = String::from("x,u\n");
    for (i, u) in f.values.iter().enumerate() {
        writeln!(out, "{:.16e},{:.16e}", f.x(i), u).expect("write to string");
    }
    fs::write(path, out)?;
    write_meta(path, &FieldMeta { time: f.time, periodic: f.periodic, domain: vec![f.x_lo, f.x_hi] })
}

pub fn read_field1d_csv(path: &Path) -> Result<Field1D> {
    let rows = parse_rows(path, "x,u")?;
    let meta = read_meta(path)?;
    if meta.domain.len() != 2 {
        return Err(Error::Io("1D sidecar domain must have two entries".into()));
    }
    let values = rows.iter().map(|r| r.get(1).copied().ok_or_else(|| Error::Io("missing u column".into()))).collect::<Result<_>>()?;
    Field1D::new(meta.domain[0], meta.domain[1], values, meta.time, meta.periodic)
}

/// Writes `x,y,u` rows (x fastest) plus the JSON sidecar.
pub fn write_field2d_csv(path: &Path, f: &Field2D) -> Result<()> {
    let mut out = String::from("x,y,u\n");
    for j in 0..f.ny {
        for i in 0..f.nx {
            let (x, y) = (i as f64 / f.nx as f64, j as f64 / f.ny as f64);
            writeln!(out, "{:.16e},{:.16e},{:.16e}", x, y, f.get(i, j)).expect("write to string");
        }
    }
    fs::write(path, out)?;
    write_meta(path, &FieldMeta { time: f.time, periodic: f.periodic, domain: vec![0.0, 1.0, 0.0, 1.0] })
}

pub fn read_field2d_csv(path: &Path) -> Result<Field2D> {
    let rows = parse_rows(path, "x,y,u")?;
    let meta = read_meta(path)?;
    let n = rows.len();
    let ny = rows.iter().filter(|r| r[0] == 0.0).count();
    if ny == 0 || n % ny != 0 {
        return Err(Error::Io("2D CSV does not describe a full grid".into()));
    }
    let values = rows.iter().map(|r| r.get(2).copied().ok_or_else(|| Error::Io("missing u column".into()))).collect::<Result<_>>()?;
    Field2D::new(n / ny, ny, values, meta.time, meta.periodic)
}

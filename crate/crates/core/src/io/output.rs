use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::{DomainSpec, Field};
use crate::integrator::SeriesPoint;

pub const SNAPSHOT_MAGIC: &[u8; 4] = b"FPLP";
pub const SNAPSHOT_VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 4 + 4 + 8;

/// CSV text of a time series. Numbers use a fixed 17-significant-digit
/// scientific format, so equal inputs give identical bytes.
pub fn series_csv(series: &[SeriesPoint]) -> String {
    let mut out = String::from("t,sup_norm,l2_norm,l1_norm,min_value\n");
    for p in series {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            p.t, p.sup_norm, p.l2_norm, p.l1_norm, p.min_value
        )
        .expect("writing to a String");
    }
    out
}

pub fn write_series(path: &Path, series: &[SeriesPoint]) -> Result<()> {
    fs::write(path, series_csv(series)).map_err(|e| Error::io(path, e))
}

/// Little-endian layout: magic, version, dim, points per axis (all u32
/// except the 4-byte magic), half-width as f64, then the row-major values.
pub fn snapshot_bytes(field: &Field) -> Vec<u8> {
    let d = field.domain();
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * field.len());
    out.extend_from_slice(SNAPSHOT_MAGIC);
    out.extend_from_slice(&SNAPSHOT_VERSION.to_le_bytes());
    out.extend_from_slice(&(d.dim() as u32).to_le_bytes());
    out.extend_from_slice(&(d.points() as u32).to_le_bytes());
    out.extend_from_slice(&d.half_width().to_le_bytes());
    for v in field.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn write_snapshot(path: &Path, field: &Field) -> Result<()> {
    fs::write(path, snapshot_bytes(field)).map_err(|e| Error::io(path, e))
}

pub fn read_snapshot(path: &Path) -> Result<Field> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_snapshot(&bytes).map_err(|reason| Error::Snapshot { path: path.to_path_buf(), reason })
}

fn parse_snapshot(bytes: &[u8]) -> std::result::Result<Field, String> {
    if bytes.len() < HEADER_LEN {
        return Err(format!("{} bytes is shorter than the header", bytes.len()));
    }
    if &bytes[..4] != SNAPSHOT_MAGIC {
        return Err("bad magic".into());
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let version = u32_at(4);
    if version != SNAPSHOT_VERSION {
        return Err(format!("unsupported version {version}"));
    }
    let dim = u32_at(8) as usize;
    let points = u32_at(12) as usize;
    let half_width = f64::from_le_bytes(bytes[16..24].try_into().unwrap());
    let domain = DomainSpec::new(half_width, points, dim).map_err(|e| e.to_string())?;
    let body = &bytes[HEADER_LEN..];
    if body.len() != 8 * domain.len() {
        return Err(format!("expected {} value bytes, found {}", 8 * domain.len(), body.len()));
    }
    let values = body.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    Field::from_values(domain, values).map_err(|e| e.to_string())
}

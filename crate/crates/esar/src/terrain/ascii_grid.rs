//! Plain-text elevation grid import/export.
//!
//! Layout: five header lines (`ncols`, `nrows`, `cellsize`, `xllcorner`,
//! `yllcorner`, any order on read, that order on write), then `nrows` lines of
//! `ncols` whitespace-separated elevations, first data row = northernmost.
//! Values round-trip exactly: the writer prints the shortest decimal form
//! that reparses to the identical f64.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use super::{Archetype, Heightmap, TerrainError};

const HEADER_KEYS: [&str; 5] = ["ncols", "nrows", "cellsize", "xllcorner", "yllcorner"];

/// Parses the text form of a grid. `Imported` archetype is assumed.
pub fn parse_ascii_grid(text: &str) -> Result<Heightmap, TerrainError> {
    let mut headers: HashMap<String, f64> = HashMap::new();
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());

    while headers.len() < HEADER_KEYS.len() {
        let (idx, line) = lines.next().ok_or_else(|| TerrainError::Parse {
            line: text.lines().count(),
            msg: "file ended before all five header lines were read".into(),
        })?;
        let mut parts = line.split_whitespace();
        let key = parts
            .next()
            .map(|k| k.to_ascii_lowercase())
            .unwrap_or_default();
        if !HEADER_KEYS.contains(&key.as_str()) {
            return Err(TerrainError::Parse {
                line: idx + 1,
                msg: format!("unknown header key {key:?}"),
            });
        }
        let value: f64 = parts
            .next()
            .ok_or(())
            .and_then(|v| v.parse().map_err(|_| ()))
            .map_err(|_| TerrainError::Parse {
                line: idx + 1,
                msg: format!("header {key} needs a numeric value"),
            })?;
        if parts.next().is_some() {
            return Err(TerrainError::Parse {
                line: idx + 1,
                msg: format!("header {key} has trailing tokens"),
            });
        }
        if headers.insert(key.clone(), value).is_some() {
            return Err(TerrainError::Parse {
                line: idx + 1,
                msg: format!("duplicate header {key}"),
            });
        }
    }

    let int_header = |key: &str| -> Result<usize, TerrainError> {
        let v = headers[key];
        if v.fract() == 0.0 && v >= 0.0 && v <= usize::MAX as f64 {
            Ok(v as usize)
        } else {
            Err(TerrainError::Parse {
                line: 0,
                msg: format!("header {key} must be a non-negative integer, got {v}"),
            })
        }
    };
    let ncols = int_header("ncols")?;
    let nrows = int_header("nrows")?;

    let mut elevations = Vec::with_capacity(ncols.saturating_mul(nrows));
    let mut data_rows = 0usize;
    for (idx, line) in lines {
        if data_rows == nrows {
            return Err(TerrainError::Dimension(format!(
                "expected {nrows} data rows but found more at line {}",
                idx + 1
            )));
        }
        let mut count = 0usize;
        for (col, tok) in line.split_whitespace().enumerate() {
            let v: f64 = tok.parse().map_err(|_| TerrainError::Parse {
                line: idx + 1,
                msg: format!("non-numeric cell {tok:?} at row {}, column {}", data_rows + 1, col + 1),
            })?;
            elevations.push(v);
            count += 1;
        }
        if count != ncols {
            return Err(TerrainError::Dimension(format!(
                "row {} has {count} values, header declares {ncols} columns",
                data_rows + 1
            )));
        }
        data_rows += 1;
    }
    if data_rows != nrows {
        return Err(TerrainError::Dimension(format!(
            "header declares {nrows} rows but file has {data_rows}"
        )));
    }

    Heightmap::from_elevations(
        ncols,
        nrows,
        headers["cellsize"],
        (headers["xllcorner"], headers["yllcorner"]),
        elevations,
        Archetype::Imported,
    )
}

pub fn load_ascii_grid(path: impl AsRef<Path>) -> Result<Heightmap, TerrainError> {
    let text = std::fs::read_to_string(path)?;
    parse_ascii_grid(&text)
}

/// Renders a map in the text format. Floats use the shortest exact decimal
/// form, so `parse_ascii_grid(format_ascii_grid(m))` reproduces every value
/// bit for bit.
pub fn format_ascii_grid(map: &Heightmap) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "ncols {}", map.width());
    let _ = writeln!(out, "nrows {}", map.height());
    let _ = writeln!(out, "cellsize {}", map.cell_size());
    let _ = writeln!(out, "xllcorner {}", map.origin().0);
    let _ = writeln!(out, "yllcorner {}", map.origin().1);
    for row in 0..map.height() {
        for col in 0..map.width() {
            if col > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{}", map.value_at_cell(col, row));
        }
        out.push('\n');
    }
    out
}

pub fn write_ascii_grid(map: &Heightmap, path: impl AsRef<Path>) -> Result<(), TerrainError> {
    std::fs::write(path, format_ascii_grid(map))?;
    Ok(())
}

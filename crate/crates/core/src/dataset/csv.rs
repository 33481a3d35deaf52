//! Sample CSV reading and writing.
//!
//! ```text
//! # bounds: x1=[0.015,0.5] x2=[0.05,0.15] y1=[50.87,1437] y2=[12.87,16.29]
//! x1,x2,y1,y2
//! 0.015,0.05,1437,16.29
//! ```
//!
//! Values in the file are physical; records handed back are normalized.

use std::io::Write;
use std::path::Path;

use super::{Bounds, DataError, DesignPoint, NormalizationMap, SampleRecord};
use crate::Scalar;

const COLUMNS: [&str; 4] = ["x1", "x2", "y1", "y2"];
const DUPLICATE_TOL: f64 = 1e-12;

/// Where the normalization bounds come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundsPolicy {
    /// `# bounds:` metadata when present, column extremes otherwise.
    #[default]
    MetadataOrColumns,
    /// Always the column extremes.
    Columns,
}

/// Formats with 17 significant digits, enough for a lossless `f64` round trip.
pub fn format_sig17(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn load_samples<T: Scalar>(
    path: impl AsRef<Path>,
) -> Result<(Vec<SampleRecord<T>>, NormalizationMap<T>), DataError> {
    load_samples_with(path, BoundsPolicy::default())
}

pub fn load_samples_with<T: Scalar>(
    path: impl AsRef<Path>,
    policy: BoundsPolicy,
) -> Result<(Vec<SampleRecord<T>>, NormalizationMap<T>), DataError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| DataError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_samples(&text, policy)
}

/// Parses CSV text; see the module docs for the layout.
pub fn parse_samples<T: Scalar>(
    text: &str,
    policy: BoundsPolicy,
) -> Result<(Vec<SampleRecord<T>>, NormalizationMap<T>), DataError> {
    let mut metadata: Option<[(f64, f64); 4]> = None;
    let mut columns: Option<[usize; 4]> = None;
    let mut width = 0;
    // (line, physical values)
    let mut rows: Vec<(usize, [f64; 4])> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r').trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(spec) = comment.trim().strip_prefix("bounds:") {
                metadata = Some(parse_bounds_comment(spec, line_no)?);
            }
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        let Some(cols) = columns else {
            let mut found = [0usize; 4];
            for (slot, name) in found.iter_mut().zip(COLUMNS) {
                *slot = cells
                    .iter()
                    .position(|c| *c == name)
                    .ok_or(DataError::MissingColumn(name))?;
            }
            columns = Some(found);
            width = cells.len();
            continue;
        };
        let row = rows.len() + 1;
        if cells.len() != width {
            return Err(DataError::Row {
                line: line_no,
                row,
                msg: format!("expected {width} cells, found {}", cells.len()),
            });
        }
        let mut values = [0.0f64; 4];
        for (k, &c) in cols.iter().enumerate() {
            let cell = cells[c];
            let v: f64 = cell.parse().map_err(|_| DataError::Row {
                line: line_no,
                row,
                msg: format!("non-numeric value `{cell}` in column {}", COLUMNS[k]),
            })?;
            if !v.is_finite() {
                return Err(DataError::Row {
                    line: line_no,
                    row,
                    msg: format!("non-finite value in column {}", COLUMNS[k]),
                });
            }
            values[k] = v;
        }
        rows.push((line_no, values));
    }

    if columns.is_none() {
        return Err(DataError::Parse {
            line: text.lines().count().max(1),
            msg: "no header line `x1,x2,y1,y2` found".into(),
        });
    }

    let ranges = match (policy, metadata) {
        (BoundsPolicy::MetadataOrColumns, Some(m)) => m,
        _ => column_extremes(&rows)?,
    };
    let b = |k: usize| Bounds::new(COLUMNS[k], T::lit(ranges[k].0), T::lit(ranges[k].1));
    let map = NormalizationMap::new([b(0)?, b(1)?], [b(2)?, b(3)?]);

    let mut records: Vec<SampleRecord<T>> = Vec::with_capacity(rows.len());
    let mut lines: Vec<usize> = Vec::with_capacity(rows.len());
    for (row_idx, (line, phys)) in rows.iter().enumerate() {
        let u = map.normalize(phys.map(T::lit))?;
        let point = DesignPoint::new(u[0], u[1]);
        let tol = T::lit(DUPLICATE_TOL);
        if let Some(j) = records.iter().position(|r| r.point.max_abs_diff(&point) <= tol) {
            return Err(DataError::Duplicate {
                line: *line,
                row: row_idx + 1,
                first: lines[j],
            });
        }
        records.push(SampleRecord::new(point, u[2], u[3])?);
        lines.push(*line);
    }
    Ok((records, map))
}

fn column_extremes(rows: &[(usize, [f64; 4])]) -> Result<[(f64, f64); 4], DataError> {
    if rows.len() < 2 {
        return Err(DataError::InvalidArgument(
            "at least two rows are needed to infer bounds".into(),
        ));
    }
    let mut out = [(f64::INFINITY, f64::NEG_INFINITY); 4];
    for (_, v) in rows {
        for k in 0..4 {
            out[k].0 = out[k].0.min(v[k]);
            out[k].1 = out[k].1.max(v[k]);
        }
    }
    Ok(out)
}

fn parse_bounds_comment(spec: &str, line: usize) -> Result<[(f64, f64); 4], DataError> {
    let err = |msg: String| DataError::Parse { line, msg };
    let mut out: [Option<(f64, f64)>; 4] = [None; 4];
    for item in spec.split_whitespace() {
        let (name, range) = item
            .split_once('=')
            .ok_or_else(|| err(format!("malformed bounds entry `{item}`")))?;
        let k = COLUMNS
            .iter()
            .position(|c| *c == name)
            .ok_or_else(|| err(format!("unknown bounds key `{name}`")))?;
        let inner = range
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| err(format!("bounds for {name} must look like [a,b]")))?;
        let (a, b) = inner
            .split_once(',')
            .ok_or_else(|| err(format!("bounds for {name} must look like [a,b]")))?;
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| err(format!("non-numeric bound `{s}` for {name}")))
        };
        out[k] = Some((parse(a)?, parse(b)?));
    }
    let mut full = [(0.0, 0.0); 4];
    for k in 0..4 {
        full[k] = out[k].ok_or_else(|| err(format!("bounds comment lacks {}", COLUMNS[k])))?;
    }
    Ok(full)
}

/// Writes normalized records back in physical units, with the bounds as
/// metadata so a reload reproduces the same normalization.
pub fn write_samples<T: Scalar, W: Write>(
    mut out: W,
    records: &[SampleRecord<T>],
    map: &NormalizationMap<T>,
) -> std::io::Result<()> {
    let f = |v: T| format_sig17(v.to_f64_lossy());
    let bounds = |b: &Bounds<T>| format!("[{},{}]", f(b.lo), f(b.hi));
    writeln!(
        out,
        "# bounds: x1={} x2={} y1={} y2={}",
        bounds(&map.inputs[0]),
        bounds(&map.inputs[1]),
        bounds(&map.outputs[0]),
        bounds(&map.outputs[1]),
    )?;
    writeln!(out, "{}", COLUMNS.join(","))?;
    for r in records {
        let phys = map
            .denormalize_record(r)
            .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e.to_string()))?;
        writeln!(out, "{},{},{},{}", f(phys[0]), f(phys[1]), f(phys[2]), f(phys[3]))?;
    }
    Ok(())
}

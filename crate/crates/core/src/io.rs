//! CSV and JSON formats.
//!
//! Datasets are CSV with header `label,x1,...,xD`, one point per row, label
//! `1` for inliers and `0` for outliers. Bases are headerless CSV with one
//! column vector per line. Floats are written in shortest round-trip form.

use std::io::{BufRead, Read, Write};

use serde::Serialize;

use crate::datagen::Label;
use crate::error::{invalid, Error, Result};
use crate::eval::{GridConfig, GridRecord, RocResult};
use crate::numerics::Matrix;
use crate::theory::{TheoryCheckConfig, TheoryRecord};

pub const GRID_HEADER: &str =
    "D,d,N,M,ratio,sigma,trial,seed,method,separation,area_above,angle_deg,iterations,wall_ms,status";
pub const THEORY_HEADER: &str = "D,d,N,M,trial,eps_O,eps_X,gamma,condition_holds,phi0_star";
pub const ROC_HEADER: &str = "method,fpr,tpr,area_above";

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_float(field: &str, line: usize) -> Result<f64> {
    let v: f64 = field.trim().parse().map_err(|_| parse_err(line, format!("'{field}' is not a number")))?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("'{field}' is not finite")));
    }
    Ok(v)
}

fn join_floats(values: impl Iterator<Item = f64>) -> String {
    values.map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

pub fn write_dataset<W: Write>(mut w: W, data: &Matrix, labels: &[Label]) -> Result<()> {
    if labels.len() != data.ncols() {
        return Err(invalid(format!("{} labels for {} points", labels.len(), data.ncols())));
    }
    let header: Vec<String> = (1..=data.nrows()).map(|i| format!("x{i}")).collect();
    writeln!(w, "label,{}", header.join(","))?;
    for (col, label) in data.column_iter().zip(labels) {
        let l = if label.is_inlier() { 1 } else { 0 };
        writeln!(w, "{l},{}", join_floats(col.iter().copied()))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a dataset written by [`write_dataset`]; returns `D x L` data and
/// labels.
pub fn read_dataset<R: Read>(r: R) -> Result<(Matrix, Vec<Label>)> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(r);
    let header = rdr.headers().map_err(|e| parse_err(1, e.to_string()))?.clone();
    if header.is_empty() || &header[0] != "label" {
        return Err(parse_err(1, "header must start with 'label'"));
    }
    let dim = header.len() - 1;
    if dim == 0 {
        return Err(parse_err(1, "header has no coordinate columns"));
    }
    for (i, name) in header.iter().skip(1).enumerate() {
        if name != format!("x{}", i + 1) {
            return Err(parse_err(1, format!("expected column 'x{}', found '{name}'", i + 1)));
        }
    }
    let mut values = Vec::new();
    let mut labels = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| parse_err(line, e.to_string()))?;
        if rec.len() != dim + 1 {
            return Err(parse_err(line, format!("expected {} fields, found {}", dim + 1, rec.len())));
        }
        labels.push(match &rec[0] {
            "1" => Label::Inlier,
            "0" => Label::Outlier,
            other => return Err(parse_err(line, format!("label must be 0 or 1, found '{other}'"))),
        });
        for f in rec.iter().skip(1) {
            values.push(parse_float(f, line)?);
        }
    }
    if labels.is_empty() {
        return Err(parse_err(2, "dataset has no rows"));
    }
    Ok((Matrix::from_column_slice(dim, labels.len(), &values), labels))
}

pub fn write_basis<W: Write>(mut w: W, basis: &Matrix) -> Result<()> {
    for col in basis.column_iter() {
        writeln!(w, "{}", join_floats(col.iter().copied()))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads one column vector per nonblank line; all lines must have the same
/// length.
pub fn read_basis<R: BufRead>(r: R) -> Result<Matrix> {
    let mut values = Vec::new();
    let mut dim = None;
    let mut cols = 0;
    for (i, line) in r.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<f64> = line.split(',').map(|f| parse_float(f, line_no)).collect::<Result<_>>()?;
        match dim {
            None => dim = Some(row.len()),
            Some(n) if n != row.len() => {
                return Err(parse_err(line_no, format!("expected {n} entries, found {}", row.len())));
            }
            _ => {}
        }
        values.extend(row);
        cols += 1;
    }
    let dim = dim.ok_or_else(|| parse_err(1, "basis file is empty"))?;
    Ok(Matrix::from_column_slice(dim, cols, &values))
}

fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.to_string()))
}

pub fn parse_grid_config(text: &str) -> Result<GridConfig> {
    let cfg: GridConfig = from_json(text)?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn parse_theory_config(text: &str) -> Result<TheoryCheckConfig> {
    let cfg: TheoryCheckConfig = from_json(text)?;
    cfg.validate()?;
    Ok(cfg)
}

fn write_records<W: Write, T: Serialize>(w: W, header: &str, records: &[T]) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    wtr.write_record(header.split(','))?;
    for r in records {
        wtr.serialize(r)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_grid_csv<W: Write>(w: W, records: &[GridRecord]) -> Result<()> {
    write_records(w, GRID_HEADER, records)
}

pub fn write_theory_csv<W: Write>(w: W, records: &[TheoryRecord]) -> Result<()> {
    write_records(w, THEORY_HEADER, records)
}

/// One row per ROC point, each carrying the curve's `area_above`.
pub fn write_roc_csv<W: Write>(w: W, curves: &[(&str, &RocResult)]) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    wtr.write_record(ROC_HEADER.split(','))?;
    for (method, r) in curves {
        for &(fpr, tpr) in &r.points {
            wtr.write_record([method.to_string(), fpr.to_string(), tpr.to_string(), r.area_above.to_string()])?;
        }
    }
    wtr.flush()?;
    Ok(())
}

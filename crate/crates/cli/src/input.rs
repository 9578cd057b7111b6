//! Input files: probability vectors (JSON array or one-column CSV), density
//! operators `{"dim", "re", "im"}`, polytope models `{"dim", "vertices"}`
//! and GPT states (JSON arrays).

use std::fs;
use std::path::Path;

use serde::Deserialize;

use hphi::linalg::{CMatrix, C64};

use crate::CliError;

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))
}

/// Entries of a vector file. CSV input holds one number per row; a
/// non-numeric first row is taken as a header.
pub fn read_vector(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = read_text(path)?;
    let is_json = path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('[');
    if is_json {
        return parse_json(path, &text);
    }
    let schema = |msg: String| CliError::Schema(format!("{}: {msg}", path.display()));
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row.map_err(|e| schema(e.to_string()))?;
        if row.len() != 1 {
            return Err(schema(format!("row {} has {} columns, expected 1", i + 1, row.len())));
        }
        match row[0].parse::<f64>() {
            Ok(v) => out.push(v),
            Err(_) if i == 0 => {}
            Err(_) => return Err(schema(format!("row {}: {:?} is not a number", i + 1, &row[0]))),
        }
    }
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DensityFile {
    dim: usize,
    re: Vec<Vec<f64>>,
    #[serde(default)]
    im: Option<Vec<Vec<f64>>>,
}

/// A `dim × dim` complex matrix; `im` defaults to zero.
pub fn read_density(path: &Path) -> Result<CMatrix, CliError> {
    let file: DensityFile = parse_json(path, &read_text(path)?)?;
    let d = file.dim;
    let square = |m: &Vec<Vec<f64>>| m.len() == d && m.iter().all(|r| r.len() == d);
    if d == 0 || !square(&file.re) || !file.im.as_ref().is_none_or(square) {
        return Err(CliError::Schema(format!(
            "{}: \"re\" and \"im\" must be {d} x {d} arrays",
            path.display()
        )));
    }
    Ok(CMatrix::from_fn(d, d, |r, c| {
        C64::new(file.re[r][c], file.im.as_ref().map_or(0.0, |im| im[r][c]))
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub dim: usize,
    pub vertices: Vec<Vec<f64>>,
}

pub fn read_model(path: &Path) -> Result<ModelFile, CliError> {
    let model: ModelFile = parse_json(path, &read_text(path)?)?;
    if let Some(v) = model.vertices.iter().find(|v| v.len() != model.dim) {
        return Err(CliError::Schema(format!(
            "{}: vertex of length {} in a dim-{} model",
            path.display(),
            v.len(),
            model.dim
        )));
    }
    Ok(model)
}

pub fn read_state(path: &Path, dim: usize) -> Result<Vec<f64>, CliError> {
    let x: Vec<f64> = parse_json(path, &read_text(path)?)?;
    if x.len() != dim {
        return Err(CliError::Schema(format!(
            "{}: state has {} coordinates, model has dim {dim}",
            path.display(),
            x.len()
        )));
    }
    Ok(x)
}

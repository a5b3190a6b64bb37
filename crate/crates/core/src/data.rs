//! Dataset sources: the UCI Breast Cancer Wisconsin file, a Gaussian mixture
//! in a low-dimensional subspace, a two-class toy problem and a plain CSV
//! format for generated data.

use std::path::Path;

use nalgebra::DMatrix;
use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::loss::{DataPoint, Dataset};
use crate::rng::{stream, Stream};

/// Number of raw attributes in the Breast Cancer Wisconsin (original) file.
const BC_ATTRIBUTES: usize = 9;
/// Feature dimension after adding an intercept and one zero column.
pub const BREAST_CANCER_DIM: usize = 11;

/// Parses the UCI `breast-cancer-wisconsin.data` layout:
/// `id, 9 integer attributes, class` with class 2 (benign, -1) or 4
/// (malignant, +1). `?` cells are replaced by the mean of the column over the
/// rows where it is present. Features are the 9 attributes, a constant 1 and
/// a constant 0.
pub fn parse_breast_cancer(text: &str) -> Result<Dataset> {
    let mut rows: Vec<[Option<f64>; BC_ATTRIBUTES]> = Vec::new();
    let mut labels = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: lineno + 1, msg };
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != BC_ATTRIBUTES + 2 {
            return Err(err(format!("expected {} columns, found {}", BC_ATTRIBUTES + 2, cells.len())));
        }
        let mut row = [None; BC_ATTRIBUTES];
        for (slot, cell) in row.iter_mut().zip(&cells[1..=BC_ATTRIBUTES]) {
            if *cell != "?" {
                let v: f64 = cell.parse().map_err(|_| err(format!("bad attribute value {cell:?}")))?;
                if !v.is_finite() {
                    return Err(err(format!("bad attribute value {cell:?}")));
                }
                *slot = Some(v);
            }
        }
        let label = match cells[BC_ATTRIBUTES + 1] {
            "4" => 1,
            "2" => -1,
            other => return Err(err(format!("class must be 2 or 4, got {other:?}"))),
        };
        rows.push(row);
        labels.push(label);
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 0,
            msg: "no data rows".into(),
        });
    }
    let mut means = [0.0; BC_ATTRIBUTES];
    for (c, mean) in means.iter_mut().enumerate() {
        let present: Vec<f64> = rows.iter().filter_map(|r| r[c]).collect();
        if present.is_empty() {
            return Err(Error::Degenerate(format!("attribute {} is missing in every row", c + 1)));
        }
        *mean = present.iter().sum::<f64>() / present.len() as f64;
    }
    let points = rows
        .iter()
        .zip(labels)
        .map(|(row, label)| {
            let mut f: Vec<f64> = row.iter().zip(&means).map(|(v, m)| v.unwrap_or(*m)).collect();
            f.push(1.0);
            f.push(0.0);
            DataPoint::new(f, label)
        })
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(points)
}

pub fn load_breast_cancer(path: &Path) -> Result<Dataset> {
    parse_breast_cancer(&std::fs::read_to_string(path)?)
}

/// Mixture of Gaussians whose means lie in a random low-dimensional subspace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MixtureSpec {
    pub n: usize,
    pub dim: usize,
    pub classes: usize,
    pub subspace_dim: usize,
    /// Standard deviation of the class means inside the subspace.
    pub mean_scale: f64,
    /// Noise variance: every class has covariance `variance_factor * I`.
    pub variance_factor: f64,
    pub seed: u64,
}

impl Default for MixtureSpec {
    fn default() -> Self {
        Self {
            n: 1000,
            dim: 40,
            classes: 10,
            subspace_dim: 5,
            mean_scale: 1.0,
            variance_factor: 0.05,
            seed: 0,
        }
    }
}

/// Draws the mixture. Point `i` belongs to class `i mod classes`, so class
/// sizes differ by at most one; even classes get label +1 and odd classes -1.
/// Means are `B v_c` with `B` an orthonormal `dim x subspace_dim` basis and
/// `v_c ~ N(0, mean_scale^2 I)`.
pub fn gen_gaussian_mixture(spec: &MixtureSpec) -> Result<Dataset> {
    if spec.classes < 2 || spec.subspace_dim == 0 || spec.subspace_dim > spec.dim || spec.n < 2 {
        return Err(Error::InvalidParameter(format!("invalid mixture dimensions {spec:?}")));
    }
    if !(spec.variance_factor >= 0.0 && spec.variance_factor.is_finite() && spec.mean_scale.is_finite()) {
        return Err(Error::InvalidParameter(format!("invalid mixture scales {spec:?}")));
    }
    let mut rng = stream(spec.seed, Stream::DataGeneration);
    let mut normal = || -> f64 { StandardNormal.sample(&mut rng) };
    let raw = DMatrix::from_fn(spec.dim, spec.subspace_dim, |_, _| normal());
    let basis = raw.qr().q();
    let means: Vec<Vec<f64>> = (0..spec.classes)
        .map(|_| {
            let v = nalgebra::DVector::from_fn(spec.subspace_dim, |_, _| spec.mean_scale * normal());
            (&basis * v).iter().copied().collect()
        })
        .collect();
    let sigma = spec.variance_factor.sqrt();
    let points = (0..spec.n)
        .map(|i| {
            let c = i % spec.classes;
            let f: Vec<f64> = means[c].iter().map(|m| m + sigma * normal()).collect();
            DataPoint::new(f, if c % 2 == 0 { 1 } else { -1 })
        })
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(points)
}

/// Two overlapping Gaussian classes at `+-separation/2` along the first axis
/// with identity covariance. Labels alternate starting with +1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ToySpec {
    pub n: usize,
    pub dim: usize,
    pub separation: f64,
    pub seed: u64,
}

impl Default for ToySpec {
    fn default() -> Self {
        Self {
            n: 20,
            dim: 5,
            separation: 2.0,
            seed: 0,
        }
    }
}

pub fn gen_toy_auc(spec: &ToySpec) -> Result<Dataset> {
    if spec.n < 2 || spec.dim == 0 || !spec.separation.is_finite() {
        return Err(Error::InvalidParameter(format!("invalid toy spec {spec:?}")));
    }
    let mut rng = stream(spec.seed, Stream::DataGeneration);
    let points = (0..spec.n)
        .map(|i| {
            let label: i8 = if i % 2 == 0 { 1 } else { -1 };
            let f: Vec<f64> = (0..spec.dim)
                .map(|k| {
                    let shift = if k == 0 { f64::from(label) * spec.separation / 2.0 } else { 0.0 };
                    shift + rng.sample::<f64, _>(StandardNormal)
                })
                .collect();
            DataPoint::new(f, label)
        })
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(points)
}

/// Plain dataset CSV: header `label,x0,...,x{d-1}`, one point per row.
pub fn dataset_to_csv(data: &Dataset) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let mut header = vec!["label".to_string()];
    header.extend((0..data.dim()).map(|k| format!("x{k}")));
    w.write_record(&header)?;
    for p in data.points() {
        let mut row = vec![p.label.to_string()];
        row.extend(p.features.iter().map(|v| v.to_string()));
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn dataset_from_csv(text: &str) -> Result<Dataset> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let mut points = Vec::new();
    for (k, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = k + 2;
        let mut cells = rec.iter();
        let label: i8 = cells
            .next()
            .and_then(|c| c.trim().parse().ok())
            .ok_or_else(|| Error::Parse {
                line,
                msg: "missing or bad label".into(),
            })?;
        let features = cells
            .map(|c| {
                c.trim().parse::<f64>().map_err(|_| Error::Parse {
                    line,
                    msg: format!("bad feature {c:?}"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        points.push(DataPoint::new(features, label)?);
    }
    Dataset::new(points)
}

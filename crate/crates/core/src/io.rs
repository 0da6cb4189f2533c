//! JSON file formats for states and channels.
//!
//! Matrices are row-major arrays of `[re, im]` pairs. Reading also accepts a
//! nested array of rows.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channels::QuantumChannel;
use crate::error::{Error, Result};
use crate::scalar::{cx, CMat};
use crate::tensor::{MultipartiteState, SubsystemLayout};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixJson {
    Flat(Vec<[f64; 2]>),
    Rows(Vec<Vec<[f64; 2]>>),
}

impl MatrixJson {
    pub fn from_matrix(m: &CMat<f64>) -> Self {
        let mut flat = Vec::with_capacity(m.len());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                flat.push([m[(i, j)].re, m[(i, j)].im]);
            }
        }
        Self::Flat(flat)
    }

    pub fn to_matrix(&self, rows: usize, cols: usize) -> Result<CMat<f64>> {
        let flat: Vec<[f64; 2]> = match self {
            Self::Flat(v) => v.clone(),
            Self::Rows(r) => {
                if r.len() != rows || r.iter().any(|row| row.len() != cols) {
                    return Err(Error::InvalidDimension(format!(
                        "matrix rows do not form {rows}×{cols}"
                    )));
                }
                r.concat()
            }
        };
        if flat.len() != rows * cols {
            return Err(Error::InvalidDimension(format!(
                "{} entries for a {rows}×{cols} matrix",
                flat.len()
            )));
        }
        Ok(CMat::from_fn(rows, cols, |i, j| {
            let [re, im] = flat[i * cols + j];
            cx(re, im)
        }))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    pub labels: Vec<String>,
    pub dims: Vec<usize>,
    pub matrix: MatrixJson,
}

impl StateJson {
    pub fn from_state(s: &MultipartiteState<f64>) -> Self {
        Self {
            labels: s.labels().into_iter().map(String::from).collect(),
            dims: s.layout().dims(),
            matrix: MatrixJson::from_matrix(s.matrix()),
        }
    }

    pub fn to_state(&self) -> Result<MultipartiteState<f64>> {
        if self.labels.len() != self.dims.len() {
            return Err(Error::InvalidDimension(format!(
                "{} labels for {} dims",
                self.labels.len(),
                self.dims.len()
            )));
        }
        let layout =
            SubsystemLayout::new(self.labels.iter().cloned().zip(self.dims.iter().copied()))?;
        let d = layout.total_dim();
        MultipartiteState::new(self.matrix.to_matrix(d, d)?, layout)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelJson {
    pub in_dims: Vec<usize>,
    pub out_dims: Vec<usize>,
    pub kraus: Vec<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub in_labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_labels: Option<Vec<String>>,
}

fn default_labels(prefix: &str, n: usize) -> Vec<String> {
    if n == 1 {
        vec![prefix.to_string()]
    } else {
        (1..=n).map(|i| format!("{prefix}{i}")).collect()
    }
}

fn layout_of(
    labels: Option<&Vec<String>>,
    dims: &[usize],
    prefix: &str,
) -> Result<SubsystemLayout> {
    let labels = labels
        .cloned()
        .unwrap_or_else(|| default_labels(prefix, dims.len()));
    if labels.len() != dims.len() {
        return Err(Error::InvalidDimension(format!(
            "{} labels for {} dims",
            labels.len(),
            dims.len()
        )));
    }
    SubsystemLayout::new(labels.into_iter().zip(dims.iter().copied()))
}

impl ChannelJson {
    pub fn from_channel(ch: &QuantumChannel<f64>) -> Self {
        Self {
            in_dims: ch.in_layout().dims(),
            out_dims: ch.out_layout().dims(),
            kraus: ch.kraus().iter().map(MatrixJson::from_matrix).collect(),
            in_labels: Some(
                ch.in_layout()
                    .labels()
                    .into_iter()
                    .map(String::from)
                    .collect(),
            ),
            out_labels: Some(
                ch.out_layout()
                    .labels()
                    .into_iter()
                    .map(String::from)
                    .collect(),
            ),
        }
    }

    /// Labels default to `in`/`out` (numbered when there are several factors).
    pub fn to_channel(&self) -> Result<QuantumChannel<f64>> {
        let inl = layout_of(self.in_labels.as_ref(), &self.in_dims, "in")?;
        let outl = layout_of(self.out_labels.as_ref(), &self.out_dims, "out")?;
        let (di, dout) = (inl.total_dim(), outl.total_dim());
        let kraus = self
            .kraus
            .iter()
            .map(|k| k.to_matrix(dout, di))
            .collect::<Result<Vec<_>>>()?;
        QuantumChannel::new(kraus, inl, outl)
    }
}

pub fn state_to_json(s: &MultipartiteState<f64>) -> Result<String> {
    Ok(serde_json::to_string_pretty(&StateJson::from_state(s))?)
}

pub fn state_from_json(text: &str) -> Result<MultipartiteState<f64>> {
    serde_json::from_str::<StateJson>(text)?.to_state()
}

pub fn channel_to_json(ch: &QuantumChannel<f64>) -> Result<String> {
    Ok(serde_json::to_string_pretty(&ChannelJson::from_channel(
        ch,
    ))?)
}

pub fn channel_from_json(text: &str) -> Result<QuantumChannel<f64>> {
    serde_json::from_str::<ChannelJson>(text)?.to_channel()
}

pub fn read_state(path: impl AsRef<Path>) -> Result<MultipartiteState<f64>> {
    state_from_json(&std::fs::read_to_string(path)?)
}

pub fn read_channel(path: impl AsRef<Path>) -> Result<QuantumChannel<f64>> {
    channel_from_json(&std::fs::read_to_string(path)?)
}

/// Square matrix file: a bare [`MatrixJson`] whose size is inferred.
pub fn read_square_matrix(path: impl AsRef<Path>) -> Result<CMat<f64>> {
    let m: MatrixJson = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let n = match &m {
        MatrixJson::Flat(v) => (v.len() as f64).sqrt().round() as usize,
        MatrixJson::Rows(r) => r.len(),
    };
    m.to_matrix(n, n)
}

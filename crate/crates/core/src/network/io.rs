//! JSON network files.
//!
//! ```text
//! {"tensors":[{"id":0,"label":"H[q=0]","value":{"indices":[..],"reals":[..],"imags":[..]}}, ..],
//!  "indices":[{"id":0,"size_log2":1.0,"endpoints":[0,1]}, ..]}
//! ```
//!
//! Value blocks are row-major over their listed index order, index 0
//! slowest. Ids are dense from 0.

use std::fs;
use std::path::Path;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{Endpoints, TensorNetwork};
use crate::error::{Error, Result};
use crate::oracle::DenseTensor;
use crate::real::Real;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkFile {
    tensors: Vec<TensorRecord>,
    indices: Vec<IndexRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TensorRecord {
    id: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    value: Option<ValueRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ValueRecord {
    indices: Vec<usize>,
    reals: Vec<f64>,
    imags: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IndexRecord {
    id: usize,
    size_log2: f64,
    endpoints: Vec<usize>,
}

pub fn from_json_str<T: Real>(text: &str) -> Result<TensorNetwork<T>> {
    let file: NetworkFile = serde_json::from_str(text)?;
    from_file(file)
}

pub fn to_json_string<T: Real>(net: &TensorNetwork<T>) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&to_file(net))?;
    s.push('\n');
    Ok(s)
}

pub fn read_network<T: Real>(path: impl AsRef<Path>) -> Result<TensorNetwork<T>> {
    from_json_str(&fs::read_to_string(path)?)
}

pub fn write_network<T: Real>(net: &TensorNetwork<T>, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, to_json_string(net)?)?;
    Ok(())
}

fn check_dense_ids(ids: impl Iterator<Item = usize>, what: &str) -> Result<Vec<usize>> {
    let ids: Vec<usize> = ids.collect();
    let mut seen = vec![false; ids.len()];
    for &id in &ids {
        match seen.get_mut(id) {
            Some(s) if !*s => *s = true,
            _ => {
                return Err(Error::Schema(format!(
                    "{what} ids must be dense from 0 without repeats (found {id})"
                )))
            }
        }
    }
    Ok(ids)
}

fn from_file<T: Real>(file: NetworkFile) -> Result<TensorNetwork<T>> {
    check_dense_ids(file.tensors.iter().map(|t| t.id), "tensor")?;
    check_dense_ids(file.indices.iter().map(|i| i.id), "index")?;

    let mut tensors = file.tensors;
    tensors.sort_by_key(|t| t.id);
    let mut indices = file.indices;
    indices.sort_by_key(|i| i.id);

    let mut net = TensorNetwork::with_tensors(tensors.len());
    for ix in &indices {
        let endpoints = match ix.endpoints.as_slice() {
            [a] => Endpoints::Open(*a),
            [a, b] => Endpoints::Pair(*a, *b),
            other => {
                return Err(Error::InvalidIndex {
                    index: ix.id,
                    reason: format!("{} endpoints (only 1 or 2 supported)", other.len()),
                })
            }
        };
        net.add_index(T::of(ix.size_log2), endpoints)?;
    }

    for rec in tensors {
        if let Some(label) = rec.label {
            net.set_label(rec.id, label);
        }
        if let Some(v) = rec.value {
            let mut bits = Vec::with_capacity(v.indices.len());
            for &i in &v.indices {
                if i >= net.num_indices() {
                    return Err(Error::InvalidValue {
                        tensor: rec.id,
                        reason: format!("unknown index {i}"),
                    });
                }
                bits.push(net.index_bits(i).ok_or_else(|| Error::InvalidValue {
                    tensor: rec.id,
                    reason: format!("index {i} size is not an integral power of two"),
                })?);
            }
            if v.reals.len() != v.imags.len() {
                return Err(Error::InvalidValue {
                    tensor: rec.id,
                    reason: "reals and imags differ in length".into(),
                });
            }
            let values = v
                .reals
                .iter()
                .zip(&v.imags)
                .map(|(&re, &im)| Complex::new(T::of(re), T::of(im)))
                .collect();
            let dense =
                DenseTensor::new(v.indices, bits, values).map_err(|e| Error::InvalidValue {
                    tensor: rec.id,
                    reason: e.to_string(),
                })?;
            net.set_value(rec.id, dense)?;
        }
    }
    Ok(net)
}

fn to_file<T: Real>(net: &TensorNetwork<T>) -> NetworkFile {
    let tensors = net
        .tensors()
        .iter()
        .enumerate()
        .map(|(id, t)| TensorRecord {
            id,
            label: t.label.clone(),
            value: t.value().map(|v| ValueRecord {
                indices: v.indices().to_vec(),
                reals: v.values().iter().map(|c| c.re.as_f64()).collect(),
                imags: v.values().iter().map(|c| c.im.as_f64()).collect(),
            }),
        })
        .collect();
    let indices = net
        .indices()
        .iter()
        .enumerate()
        .map(|(id, ix)| IndexRecord {
            id,
            size_log2: ix.size_log2.as_f64(),
            endpoints: ix.endpoints.as_vec(),
        })
        .collect();
    NetworkFile { tensors, indices }
}

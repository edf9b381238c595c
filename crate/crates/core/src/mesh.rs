//! One-dimensional thickness mesh spanning `(-h_b, h_f)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layer {
    Bonding,
    Film,
}

/// Node coordinates of both layers, sharing the interface node `x3 = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThicknessMesh {
    nodes: Vec<f64>,
    /// Number of elements in the bonding layer; node `n_b` is the interface.
    n_b: usize,
}

impl ThicknessMesh {
    /// Uniform elements within each layer.
    pub fn uniform(h_b: f64, h_f: f64, n_b: usize, n_f: usize) -> Result<Self> {
        if !(h_b > 0.0 && h_f > 0.0 && h_b.is_finite() && h_f.is_finite()) {
            return Err(Error::InvalidMesh(format!(
                "layer thicknesses must be positive, got h_b = {h_b}, h_f = {h_f}"
            )));
        }
        let mut nodes_b: Vec<f64> = (0..=n_b)
            .map(|i| -h_b + h_b * i as f64 / n_b.max(1) as f64)
            .collect();
        if let Some(last) = nodes_b.last_mut() {
            *last = 0.0;
        }
        let mut nodes_f: Vec<f64> = (0..=n_f)
            .map(|i| h_f * i as f64 / n_f.max(1) as f64)
            .collect();
        if let Some(last) = nodes_f.last_mut() {
            *last = h_f;
        }
        Self::from_layers(&nodes_b, &nodes_f)
    }

    /// Uniform mesh with the thicknesses of `params` and `n` elements per layer.
    pub fn for_stack(params: &crate::StackParameters, n: usize) -> Result<Self> {
        Self::uniform(params.h_b, params.h_f, n, n)
    }

    pub fn from_layers(nodes_b: &[f64], nodes_f: &[f64]) -> Result<Self> {
        if nodes_b.len() < 3 || nodes_f.len() < 3 {
            return Err(Error::InvalidMesh(
                "each layer needs at least 2 elements".into(),
            ));
        }
        if *nodes_b.last().unwrap() != 0.0 || nodes_f[0] != 0.0 {
            return Err(Error::InvalidMesh(
                "both layers must meet at the interface x3 = 0".into(),
            ));
        }
        if !(nodes_b[0] < 0.0) {
            return Err(Error::InvalidMesh("bonding layer must start below 0".into()));
        }
        let mut nodes = nodes_b.to_vec();
        nodes.extend_from_slice(&nodes_f[1..]);
        if nodes.iter().any(|x| !x.is_finite()) || nodes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidMesh(
                "node coordinates must be finite and strictly increasing".into(),
            ));
        }
        Ok(ThicknessMesh {
            nodes,
            n_b: nodes_b.len() - 1,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn nodes_b(&self) -> &[f64] {
        &self.nodes[..=self.n_b]
    }

    pub fn nodes_f(&self) -> &[f64] {
        &self.nodes[self.n_b..]
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_elements(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn interface_node(&self) -> usize {
        self.n_b
    }

    pub fn h_b(&self) -> f64 {
        -self.nodes[0]
    }

    pub fn h_f(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    /// Element endpoints and layer.
    pub fn element(&self, e: usize) -> (f64, f64, Layer) {
        let layer = if e < self.n_b {
            Layer::Bonding
        } else {
            Layer::Film
        };
        (self.nodes[e], self.nodes[e + 1], layer)
    }

    pub fn elements(&self) -> impl Iterator<Item = (usize, f64, f64, Layer)> + '_ {
        (0..self.num_elements()).map(move |e| {
            let (a, b, l) = self.element(e);
            (e, a, b, l)
        })
    }

    /// Splits every element into `factor` equal parts.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        if factor == 0 {
            return Err(Error::InvalidMesh("refinement factor must be positive".into()));
        }
        let split = |xs: &[f64]| {
            let mut out = vec![xs[0]];
            for w in xs.windows(2) {
                for j in 1..factor {
                    out.push(w[0] + (w[1] - w[0]) * j as f64 / factor as f64);
                }
                out.push(w[1]);
            }
            out
        };
        Self::from_layers(&split(self.nodes_b()), &split(self.nodes_f()))
    }
}

impl<'de> Deserialize<'de> for ThicknessMesh {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            nodes: Vec<f64>,
            n_b: usize,
        }
        let raw = Raw::deserialize(d)?;
        if raw.n_b >= raw.nodes.len() {
            return Err(serde::de::Error::custom("interface index out of range"));
        }
        ThicknessMesh::from_layers(&raw.nodes[..=raw.n_b], &raw.nodes[raw.n_b..])
            .map_err(serde::de::Error::custom)
    }
}

/// Elements per layer used for a sweep entry: `max(64, ceil(8 / eps))`,
/// capped at 1024.
pub fn sweep_mesh_size(eps: f64) -> usize {
    let n = (8.0 / eps).ceil();
    let n = if n.is_finite() { n.min(1024.0) as usize } else { 1024 };
    n.max(64)
}

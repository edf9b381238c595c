//! Rescaled 3D problem on the fixed domain, one Fourier mode at a time.

mod assembly;
mod energy;
mod strains;

pub use assembly::{
    assemble_mode_system, assemble_mode_system_precise, eigenstrain_stress, transverse_scale, LayerWeights, ModeSystem,
    BANDWIDTH,
};
pub use energy::{
    energy, load_constant, mode_residual_norm, stationarity_residual, StationarityReport,
};
pub use strains::{scaled_strains, ModeStrains, ScaledStrains, StrainNorms};

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{round, solve_hpd_band, DenseCholesky, Real, C64};
use crate::load::{cpx, Mode};
use crate::mesh::ThicknessMesh;
use crate::params::StackParameters;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Nodal displacements of one mode, including the clamped node.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeField {
    pub mode: Mode,
    /// `u[i] = [u1, u2, u3]` at node `i`.
    pub u: Vec<[C64; 3]>,
}

impl ModeField {
    pub fn zeros(mode: Mode, num_nodes: usize) -> Self {
        ModeField {
            mode,
            u: vec![[ZERO; 3]; num_nodes],
        }
    }

    /// Unknown vector (node 0 dropped).
    pub fn unknowns(&self) -> Vec<C64> {
        self.u[1..].iter().flatten().copied().collect()
    }

    pub fn from_unknowns(mode: Mode, q: &[C64]) -> Self {
        let mut u = vec![[ZERO; 3]];
        u.extend(q.chunks_exact(3).map(|c| [c[0], c[1], c[2]]));
        ModeField { mode, u }
    }
}

/// Displacement field of the rescaled problem, as nodal values per mode.
///
/// Transverse components are stored multiplied by `transverse_scale`
/// (`eps^(1-delta)` when `0 < delta < 1`, else 1).
#[derive(Debug, Clone, PartialEq)]
pub struct Field3D {
    pub mesh: ThicknessMesh,
    pub modes: Vec<ModeField>,
    pub transverse_scale: f64,
}

impl Field3D {
    pub fn zeros(mesh: ThicknessMesh, load: &[Mode]) -> Self {
        let n = mesh.num_nodes();
        Field3D {
            modes: load.iter().map(|m| ModeField::zeros(*m, n)).collect(),
            mesh,
            transverse_scale: 1.0,
        }
    }

    /// Displacements with the transverse rescaling undone.
    pub fn physical(&self) -> Field3D {
        if self.transverse_scale == 1.0 {
            return self.clone();
        }
        let inv = 1.0 / self.transverse_scale;
        let mut out = self.clone();
        for m in &mut out.modes {
            for u in &mut m.u {
                u[2] *= inv;
            }
        }
        out.transverse_scale = 1.0;
        out
    }

    pub fn check_compatible(&self, other: &Field3D) -> Result<()> {
        if self.mesh != other.mesh {
            return Err(Error::InvalidMesh("fields live on different meshes".into()));
        }
        if self.modes.len() != other.modes.len()
            || self
                .modes
                .iter()
                .zip(&other.modes)
                .any(|(a, b)| a.mode.n != b.mode.n)
        {
            return Err(Error::InvalidLoad("fields carry different mode sets".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("field serialization is infallible")
    }
}

impl Serialize for ModeFieldJson<'_> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ModeField", 3)?;
        st.serialize_field("mode", &self.field.mode.n)?;
        st.serialize_field("nodes", self.nodes)?;
        let u: Vec<[[f64; 2]; 3]> = self
            .field
            .u
            .iter()
            .map(|v| [cpx::pair(v[0]), cpx::pair(v[1]), cpx::pair(v[2])])
            .collect();
        st.serialize_field("u", &u)?;
        st.end()
    }
}

struct ModeFieldJson<'a> {
    field: &'a ModeField,
    nodes: &'a [f64],
}

impl Serialize for Field3D {
    /// A list of `{"mode": [n1, n2], "nodes": [...], "u": [[[re, im] x 3], ...]}`.
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let nodes = self.mesh.nodes();
        s.collect_seq(self.modes.iter().map(|field| ModeFieldJson { field, nodes }))
    }
}

/// Solves an assembled system with the band Cholesky path, in the
/// arithmetic the system was assembled in.
pub fn solve_mode<R: Real>(system: &ModeSystem<R>) -> Result<Vec<C64>> {
    Ok(solve_hpd_band(&system.matrix, &system.rhs)?
        .into_iter()
        .map(round)
        .collect())
}

/// Same system through a dense factorization; used for cross-checks.
pub fn solve_mode_dense(system: &ModeSystem) -> Result<Vec<C64>> {
    let dense = system.matrix.to_dense();
    Ok(DenseCholesky::factor(&dense)?.solve(&system.rhs))
}

fn solve_one(
    params: &StackParameters,
    eps: f64,
    mode: &Mode,
    mesh: &ThicknessMesh,
    dense: bool,
) -> Result<ModeField> {
    if mode.is_unloaded() {
        return Ok(ModeField::zeros(*mode, mesh.num_nodes()));
    }
    let q = if dense {
        solve_mode_dense(&assemble_mode_system(params, eps, mode, mesh)?)?
    } else {
        solve_mode(&assemble_mode_system_precise(params, eps, mode, mesh)?)?
    };
    Ok(ModeField::from_unknowns(*mode, &q))
}

fn solve_all(
    params: &StackParameters,
    eps: f64,
    load: &[Mode],
    mesh: &ThicknessMesh,
    dense: bool,
) -> Result<Field3D> {
    assembly::check_eps(eps)?;
    params.validate()?;
    assembly::check_regime(params, "3D solve")?;
    let modes = load
        .par_iter()
        .enumerate()
        .map(|(index, m)| {
            solve_one(params, eps, m, mesh, dense).map_err(|e| Error::Mode {
                index,
                n1: m.n[0],
                n2: m.n[1],
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Field3D {
        mesh: mesh.clone(),
        modes,
        transverse_scale: transverse_scale(params, eps),
    })
}

/// Solves every mode of `load` independently (in parallel).
pub fn solve3d(
    params: &StackParameters,
    eps: f64,
    load: &[Mode],
    mesh: &ThicknessMesh,
) -> Result<Field3D> {
    solve_all(params, eps, load, mesh, false)
}

/// [`solve3d`] with dense factorizations.
pub fn solve3d_dense(
    params: &StackParameters,
    eps: f64,
    load: &[Mode],
    mesh: &ThicknessMesh,
) -> Result<Field3D> {
    solve_all(params, eps, load, mesh, true)
}

//! Closed-form per-mode solutions of the two limit models and the 3D
//! displacement fields they describe.

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize};

use crate::coefficients::{LimitCoefficients, NondimensionalCoefficients};
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::load::{cpx, Mode};
use crate::mesh::ThicknessMesh;
use crate::params::StackParameters;
use crate::regime::Regime;
use crate::solver3d::{Field3D, ModeField};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const I: C64 = C64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Membrane,
    Plate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedSolution {
    pub model: Model,
    pub mode: Mode,
    /// `(zeta_1, zeta_2, zeta_3)`.
    pub zeta: [C64; 3],
}

impl Serialize for ReducedSolution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ReducedSolution", 3)?;
        st.serialize_field("model", &self.model)?;
        st.serialize_field("mode", &self.mode.n)?;
        st.serialize_field("zeta", &self.zeta.map(cpx::pair))?;
        st.end()
    }
}

/// Hermitian 2x2 solve `[[a, b], [conj b, d]] x = r`.
fn solve2(a: f64, b: C64, d: f64, r: [C64; 2]) -> Result<[C64; 2]> {
    let det = a * d - b.norm_sqr();
    if !(det > 0.0 && a > 0.0) {
        return Err(Error::Numerical(format!(
            "2x2 membrane system is not positive definite (det = {det})"
        )));
    }
    Ok([
        (r[0] * d - b * r[1]) / det,
        (r[1] * a - b.conj() * r[0]) / det,
    ])
}

/// Per-mode membrane operator `h_f [(c1 + mu_f) k k^T + mu_f |k|^2 I] + K I`.
pub fn membrane_matrix(
    coeffs: &LimitCoefficients,
    params: &StackParameters,
    k: [f64; 2],
    foundation: f64,
) -> [[f64; 2]; 2] {
    let h = params.h_f;
    let mu = params.mu_f;
    let kk = k[0] * k[0] + k[1] * k[1];
    let a = h * (coeffs.c1 + mu);
    let off = a * k[0] * k[1];
    [
        [a * k[0] * k[0] + h * mu * kk + foundation, off],
        [off, a * k[1] * k[1] + h * mu * kk + foundation],
    ]
}

/// Work of the thickness-integrated eigenstrain `phi_bar = h_f phi_hat`
/// against in-plane displacements: components of `r` with work `Re zeta^H r`.
pub fn membrane_load(coeffs: &LimitCoefficients, params: &StackParameters, mode: &Mode) -> [C64; 2] {
    let k = mode.wave_vector(params.cell);
    let phi = mode.phi_hat;
    let h = params.h_f;
    let trace = (phi[0][0] + phi[1][1]) * coeffs.c1 + phi[2][2] * coeffs.c2;
    std::array::from_fn(|b| {
        let shear = phi[0][b] * k[0] + phi[1][b] * k[1];
        -I * h * (trace * k[b] + shear * coeffs.c3)
    })
}

fn require(params: &StackParameters, want: Regime, operation: &'static str) -> Result<()> {
    let found = params.exponents().regime;
    if found != want {
        return Err(Error::Regime {
            operation,
            expected: want.as_str(),
            found,
        });
    }
    Ok(())
}

pub fn solve_membrane_mode(
    coeffs: &LimitCoefficients,
    params: &StackParameters,
    mode: &Mode,
) -> Result<ReducedSolution> {
    require(params, Regime::MembraneInPlaneFoundation, "membrane solve")?;
    mode.validate()?;
    let k = mode.wave_vector(params.cell);
    let m = membrane_matrix(coeffs, params, k, coeffs.k_in);
    let r = membrane_load(coeffs, params, mode);
    let [z1, z2] = solve2(m[0][0], C64::new(m[0][1], 0.0), m[1][1], r)?;
    Ok(ReducedSolution {
        model: Model::Membrane,
        mode: *mode,
        zeta: [z1, z2, ZERO],
    })
}

pub fn solve_plate_mode(
    coeffs: &LimitCoefficients,
    params: &StackParameters,
    mode: &Mode,
) -> Result<ReducedSolution> {
    require(params, Regime::PlateTransverseFoundation, "plate solve")?;
    mode.validate()?;
    let k = mode.wave_vector(params.cell);
    let kk = k[0] * k[0] + k[1] * k[1];
    let zeta3 = mode.p_hat / (coeffs.bending * kk * kk + coeffs.k_tr);
    let [z1, z2] = if mode.is_zero_mode() {
        [ZERO, ZERO]
    } else {
        let m = membrane_matrix(coeffs, params, k, 0.0);
        let r = membrane_load(coeffs, params, mode);
        solve2(m[0][0], C64::new(m[0][1], 0.0), m[1][1], r)?
    };
    Ok(ReducedSolution {
        model: Model::Plate,
        mode: *mode,
        zeta: [z1, z2, zeta3],
    })
}

/// Membrane solve in the variable `y = x' / L`: returns `u~ = zeta / L` for
/// the wave vector `k_y = k L`, built from the nondimensional coefficients.
///
/// The equations are divided through by `2 mu_f h_f`, so the load is the
/// eigenstrain amplitude `phi_hat` itself, not its thickness integral, and
/// the elastic coefficients enter as `c_i / (2 mu_f)`.
pub fn solve_membrane_nondimensional(
    nd: &NondimensionalCoefficients,
    k_y: [f64; 2],
    phi: &[[C64; 3]; 3],
) -> Result<[C64; 2]> {
    // c_i / (2 mu_f) = c_hat_i / c_hat_3 since c3 = 2 mu_f; the printed c_hat
    // keep an extra 1/h_f that does not survive the change of variables.
    let [c1, c2, c3] = nd.c_hat.map(|c| c / nd.c_hat[2]);
    let kk = k_y[0] * k_y[0] + k_y[1] * k_y[1];
    let g = nd.membrane_foundation;
    let a = c1 + 0.5 * c3;
    let m00 = a * k_y[0] * k_y[0] + 0.5 * c3 * kk + g;
    let m11 = a * k_y[1] * k_y[1] + 0.5 * c3 * kk + g;
    let m01 = a * k_y[0] * k_y[1];
    let trace = (phi[0][0] + phi[1][1]) * c1 + phi[2][2] * c2;
    let r: [C64; 2] = std::array::from_fn(|b| {
        let shear = phi[0][b] * k_y[0] + phi[1][b] * k_y[1];
        -I * (trace * k_y[b] + shear * c3)
    });
    solve2(m00, C64::new(m01, 0.0), m11, r)
}

/// Dispatches on the regime of `params`.
pub fn solve_reduced(
    coeffs: &LimitCoefficients,
    params: &StackParameters,
    load: &[Mode],
) -> Result<Vec<ReducedSolution>> {
    let solve = match params.exponents().regime {
        Regime::MembraneInPlaneFoundation => solve_membrane_mode,
        Regime::PlateTransverseFoundation => solve_plate_mode,
        found => {
            return Err(Error::Regime {
                operation: "reduced solve",
                expected: "membrane_in_plane_foundation or plate_transverse_foundation",
                found,
            })
        }
    };
    load.iter()
        .enumerate()
        .map(|(index, m)| {
            solve(coeffs, params, m).map_err(|e| Error::Mode {
                index,
                n1: m.n[0],
                n2: m.n[1],
                source: Box::new(e),
            })
        })
        .collect()
}

/// Nodal values of the 3D displacement described by a limit solution.
pub fn reconstruct_mode(sol: &ReducedSolution, params: &StackParameters, mesh: &ThicknessMesh) -> ModeField {
    let k = sol.mode.wave_vector(params.cell);
    let [z1, z2, z3] = sol.zeta;
    let (h_b, h_f) = (mesh.h_b(), mesh.h_f());
    let u = mesh
        .nodes()
        .iter()
        .map(|&x| {
            let ramp = (x + h_b) / h_b;
            match sol.model {
                Model::Membrane => {
                    let s = if x >= 0.0 { 1.0 } else { ramp };
                    [z1 * s, z2 * s, ZERO]
                }
                Model::Plate => {
                    if x >= 0.0 {
                        let arm = x - 0.5 * h_f;
                        [
                            z1 - I * k[0] * arm * z3,
                            z2 - I * k[1] * arm * z3,
                            z3,
                        ]
                    } else {
                        let lever = 0.5 * h_f;
                        [
                            (z1 + I * k[0] * lever * z3) * ramp,
                            (z2 + I * k[1] * lever * z3) * ramp,
                            z3 * ramp,
                        ]
                    }
                }
            }
        })
        .collect();
    ModeField { mode: sol.mode, u }
}

pub fn reconstruct_limit_field(
    sols: &[ReducedSolution],
    params: &StackParameters,
    mesh: &ThicknessMesh,
) -> Field3D {
    Field3D {
        mesh: mesh.clone(),
        modes: sols.iter().map(|s| reconstruct_mode(s, params, mesh)).collect(),
        transverse_scale: 1.0,
    }
}

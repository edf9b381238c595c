//! Scaled energy and the first-order stationarity residual.

use super::assembly::{assemble_mode_system, ModeSystem};
use super::Field3D;
use crate::error::{Error, Result};
use crate::linalg::{norm2, norm_inf, C64};
use crate::load::Mode;
use crate::params::StackParameters;

/// Residual (constant) energy of the eigenstrains,
/// `|omega| h_f / 2 * sum_modes (lambda |tr phi|^2 + 2 mu |phi|^2)`.
pub fn load_constant(params: &StackParameters, load: &[Mode]) -> f64 {
    let (l, m) = (params.lambda_f, params.mu_f);
    let per_mode: f64 = load
        .iter()
        .map(|md| {
            let phi = &md.phi_hat;
            let tr = phi[0][0] + phi[1][1] + phi[2][2];
            let sq: f64 = phi.iter().flatten().map(|v| v.norm_sqr()).sum();
            l * tr.norm_sqr() + 2.0 * m * sq
        })
        .sum();
    0.5 * params.cell_area() * params.h_f * per_mode
}

fn systems<'a>(
    field: &'a Field3D,
    params: &'a StackParameters,
    eps: f64,
    load: &'a [Mode],
) -> Result<impl Iterator<Item = Result<(ModeSystem, Vec<C64>)>> + 'a> {
    if load.len() != field.modes.len() {
        return Err(Error::InvalidLoad(format!(
            "field has {} modes, load has {}",
            field.modes.len(),
            load.len()
        )));
    }
    Ok(field.modes.iter().zip(load).map(move |(mf, md)| {
        if mf.mode.n != md.n {
            return Err(Error::InvalidLoad(format!(
                "field mode {:?} paired with load mode {:?}",
                mf.mode.n, md.n
            )));
        }
        let sys = assemble_mode_system(params, eps, md, &field.mesh)?;
        // express the stored unknowns in the assembly's variables
        let ratio = sys.transverse_scale / field.transverse_scale;
        let mut q = mf.unknowns();
        if ratio != 1.0 {
            for v in q.iter_mut().skip(2).step_by(3) {
                *v *= ratio;
            }
        }
        Ok((sys, q))
    }))
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `E_eps(u) = |omega| sum_modes (q^H K q / 2 - Re q^H f) + F`.
pub fn energy(
    field: &Field3D,
    params: &StackParameters,
    eps: f64,
    load: &[Mode],
) -> Result<f64> {
    let mut total = 0.0;
    for item in systems(field, params, eps, load)? {
        let (sys, q) = item?;
        let kq = sys.matrix.matvec(&q);
        total += 0.5 * dot(&q, &kq).re - dot(&q, &sys.rhs).re;
    }
    Ok(params.cell_area() * total + load_constant(params, load))
}

/// Euclidean norm of `K q - f` for one assembled mode.
pub fn mode_residual_norm(system: &ModeSystem, q: &[C64]) -> f64 {
    let r: Vec<C64> = system
        .matrix
        .matvec(q)
        .iter()
        .zip(&system.rhs)
        .map(|(a, b)| a - b)
        .collect();
    norm2(&r)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationarityReport {
    /// `max_j |E'(u)(e_j)| / (||K||_inf ||q||_inf + ||f||_inf)` over modes.
    pub normalized: f64,
    /// Largest `||K q - f||_2` over modes.
    pub l2: f64,
}

/// Largest normalized derivative `E'_eps(u)(v)` over the nodal basis `v`
/// of the admissible space, over all modes.
pub fn stationarity_residual(
    field: &Field3D,
    params: &StackParameters,
    eps: f64,
    load: &[Mode],
) -> Result<StationarityReport> {
    let mut rep = StationarityReport {
        normalized: 0.0,
        l2: 0.0,
    };
    for item in systems(field, params, eps, load)? {
        let (sys, q) = item?;
        let r: Vec<C64> = sys
            .matrix
            .matvec(&q)
            .iter()
            .zip(&sys.rhs)
            .map(|(a, b)| a - b)
            .collect();
        let num = norm_inf(&r);
        let scale = sys.matrix.norm_inf() * norm_inf(&q) + norm_inf(&sys.rhs);
        let rel = if num == 0.0 { 0.0 } else { num / scale };
        rep.normalized = rep.normalized.max(rel);
        rep.l2 = rep.l2.max(norm2(&r));
    }
    Ok(rep)
}

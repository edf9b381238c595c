//! Scaled strains, evaluated at the two Gauss points of every element.
//!
//! P1 displacements make every strain component affine on an element, so
//! two-point Gauss quadrature integrates their squares exactly.

use serde::Serialize;

use super::assembly::{check_eps, LayerWeights, GAUSS};
use super::Field3D;
use crate::error::Result;
use crate::linalg::C64;
use crate::mesh::{Layer, ThicknessMesh};
use crate::params::StackParameters;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Strain vectors `[k11, k22, k12, k33, k13, k23]` of one mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeStrains {
    pub n: [i32; 2],
    /// `gauss[e][g]` at Gauss point `g` of element `e`.
    pub gauss: Vec<[[C64; 6]; 2]>,
}

impl ModeStrains {
    /// Element average (midpoint value, since strains are affine).
    pub fn midpoint(&self, e: usize) -> [C64; 6] {
        let [a, b] = &self.gauss[e];
        std::array::from_fn(|i| (a[i] + b[i]) * 0.5)
    }

    /// Full symmetric tensor at the element midpoint.
    pub fn tensor(&self, e: usize) -> [[C64; 3]; 3] {
        let s = self.midpoint(e);
        [
            [s[0], s[2], s[4]],
            [s[2], s[1], s[5]],
            [s[4], s[5], s[3]],
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScaledStrains {
    pub mesh: ThicknessMesh,
    pub cell_area: f64,
    pub modes: Vec<ModeStrains>,
}

/// L2 norms of the scaled strains over the film and the bonding layer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StrainNorms {
    /// `||k||` over the film (Frobenius).
    pub kappa_film: f64,
    /// `||k33||` over the film, i.e. `||e33|| / eps^2`.
    pub kappa33_film: f64,
    /// `||(k13, k23)||` over the film, i.e. `||e_a3|| / eps`.
    pub kappa_a3_film: f64,
    /// `||k^b_33||` over the bonding layer.
    pub kappa33_bond: f64,
    /// `||k^b||` over the bonding layer (Frobenius).
    pub kappa_bond: f64,
}

pub(crate) fn frobenius_sq(s: &[C64; 6]) -> f64 {
    s[0].norm_sqr()
        + s[1].norm_sqr()
        + s[3].norm_sqr()
        + 2.0 * (s[2].norm_sqr() + s[4].norm_sqr() + s[5].norm_sqr())
}

impl ScaledStrains {
    /// `sqrt(|omega| sum_modes int_layer |g(s)|^2 dx3)` for a pointwise
    /// squared magnitude `g`.
    pub fn layer_norm(&self, layer: Layer, g: impl Fn(&[C64; 6]) -> f64) -> f64 {
        let mut total = 0.0;
        for m in &self.modes {
            for (e, x0, x1, l) in self.mesh.elements() {
                if l != layer {
                    continue;
                }
                let h = x1 - x0;
                total += 0.5 * h * (g(&m.gauss[e][0]) + g(&m.gauss[e][1]));
            }
        }
        (self.cell_area * total).sqrt()
    }

    pub fn norms(&self) -> StrainNorms {
        StrainNorms {
            kappa_film: self.layer_norm(Layer::Film, frobenius_sq),
            kappa33_film: self.layer_norm(Layer::Film, |s| s[3].norm_sqr()),
            kappa_a3_film: self.layer_norm(Layer::Film, |s| s[4].norm_sqr() + s[5].norm_sqr()),
            kappa33_bond: self.layer_norm(Layer::Bonding, |s| s[3].norm_sqr()),
            kappa_bond: self.layer_norm(Layer::Bonding, frobenius_sq),
        }
    }
}

pub fn scaled_strains(
    field: &Field3D,
    params: &StackParameters,
    eps: f64,
) -> Result<ScaledStrains> {
    check_eps(eps)?;
    let film = LayerWeights::film(params, eps);
    let bond = LayerWeights::bonding(params, eps)?;
    let field = field.physical();
    let mesh = &field.mesh;
    let modes = field
        .modes
        .iter()
        .map(|mf| {
            let k = mf.mode.wave_vector(params.cell);
            let gauss = mesh
                .elements()
                .map(|(e, x0, x1, layer)| {
                    let w = if layer == Layer::Film { &film } else { &bond };
                    let q: [C64; 6] = std::array::from_fn(|a| mf.u[e + a / 3][a % 3]);
                    GAUSS.map(|t| {
                        let b = w.strain_matrix(k, x1 - x0, t, 1.0);
                        std::array::from_fn(|r| {
                            (0..6).fold(ZERO, |acc, c| acc + b[r][c] * q[c])
                        })
                    })
                })
                .collect();
            ModeStrains { n: mf.mode.n, gauss }
        })
        .collect();
    Ok(ScaledStrains {
        mesh: mesh.clone(),
        cell_area: params.cell_area(),
        modes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::load::Mode;
    use crate::solver3d::ModeField;

    #[test]
    fn zero_field_zero_strains() {
        let p = StackParameters::unit().with_exponents(0.0, 2.0);
        let mesh = ThicknessMesh::for_stack(&p, 3).unwrap();
        let f = Field3D::zeros(mesh, &[Mode::new([1, 1])]);
        let s = scaled_strains(&f, &p, 0.3).unwrap();
        assert!(s.modes[0].gauss.iter().flatten().flatten().all(|v| *v == ZERO));
        assert_eq!(s.norms().kappa_film, 0.0);
    }

    #[test]
    fn linear_transverse_profile_in_film() {
        // u3 = s x3 in the film, k = 0: k33 = s / eps^2
        let p = StackParameters::unit().with_exponents(0.0, 2.0);
        let mesh = ThicknessMesh::for_stack(&p, 4).unwrap();
        let slope = 0.7;
        let mut mf = ModeField::zeros(Mode::new([0, 0]), mesh.num_nodes());
        for (i, x) in mesh.nodes().iter().enumerate() {
            mf.u[i][2] = C64::new(slope * x.max(0.0), 0.0);
        }
        let f = Field3D {
            mesh: mesh.clone(),
            modes: vec![mf],
            transverse_scale: 1.0,
        };
        let s = scaled_strains(&f, &p, 0.1).unwrap();
        for (e, _, _, layer) in mesh.elements() {
            if layer == Layer::Film {
                let k33 = s.modes[0].midpoint(e)[3];
                assert!((k33.re - slope / 0.01).abs() < 1e-9);
            }
        }
    }
}

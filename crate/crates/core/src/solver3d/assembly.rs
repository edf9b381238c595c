//! Per-mode assembly of the scaled energy with P1 elements in `x3`.
//!
//! For `v(x) = v(x3) exp(i k.x')` the six scaled strain components
//! `[k11, k22, k12, k33, k13, k23]` of a layer are
//!
//! ```text
//! k_ab = w_ab * (i/2)(k_a v_b + k_b v_a)
//! k_33 = w_33 * v3'
//! k_a3 = (w_sd * v_a' + w_sg * i k_a v3) / 2
//! ```
//!
//! with film weights `(1, 1/eps^2, 1/eps, 1/eps)` and bonding weights
//! `(eps^gamma, eps^(delta-1), eps^delta, eps^(gamma-1))`. The energy density
//! is `s^H C s / 2` with
//! `s^H C s = lambda |k11+k22+k33|^2 + 2 mu (|k11|^2+|k22|^2+2|k12|^2+|k33|^2)
//!  + 8 mu (|k13|^2 + |k23|^2)`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{lift, HermitianBand, Real, C64, DD};
use crate::load::Mode;
use crate::mesh::{Layer, ThicknessMesh};
use crate::params::{Lame, StackParameters};
use crate::regime::Exponents;

/// Bandwidth of the assembled systems: three components per node, nearest
/// neighbour coupling.
pub const BANDWIDTH: usize = 5;

pub(crate) const GAUSS: [f64; 2] = [
    0.5 - 0.288_675_134_594_812_9, // 1/(2 sqrt 3)
    0.5 + 0.288_675_134_594_812_9,
];

const I: C64 = C64 { re: 0.0, im: 1.0 };
const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Strain weights and moduli of one layer at a given `eps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerWeights {
    pub lame: Lame,
    pub w_ab: f64,
    pub w_33: f64,
    /// Weight of `d v_a / d x3` in the shear strain.
    pub w_sd: f64,
    /// Weight of `i k_a v3` in the shear strain.
    pub w_sg: f64,
}

impl LayerWeights {
    pub fn film(params: &StackParameters, eps: f64) -> Self {
        LayerWeights {
            lame: params.film(),
            w_ab: 1.0,
            w_33: 1.0 / (eps * eps),
            w_sd: 1.0 / eps,
            w_sg: 1.0 / eps,
        }
    }

    pub fn bonding(params: &StackParameters, eps: f64) -> Result<Self> {
        let Exponents { gamma, delta, .. } = params.exponents();
        Ok(LayerWeights {
            lame: params.bonding_reference()?,
            w_ab: eps.powf(gamma),
            w_33: eps.powf(delta - 1.0),
            w_sd: eps.powf(delta),
            w_sg: eps.powf(gamma - 1.0),
        })
    }

    /// The 6x6 material matrix (real symmetric).
    pub fn material(&self) -> [[f64; 6]; 6] {
        let Lame { lambda: l, mu: m } = self.lame;
        let mut c = [[0.0; 6]; 6];
        for &a in &[0usize, 1, 3] {
            for &b in &[0usize, 1, 3] {
                c[a][b] = l;
            }
            c[a][a] += 2.0 * m;
        }
        c[2][2] = 4.0 * m;
        c[4][4] = 8.0 * m;
        c[5][5] = 8.0 * m;
        c
    }

    /// Strain-displacement matrix at local coordinate `t` of an element of
    /// length `h`; columns are `[u1, u2, u3]` of the left then right node.
    /// `inv_s` multiplies every `u3` column (transverse rescaling).
    pub fn strain_matrix(&self, k: [f64; 2], h: f64, t: f64, inv_s: f64) -> [[C64; 6]; 6] {
        let mut b = [[ZERO; 6]; 6];
        let shape = [1.0 - t, t];
        let dshape = [-1.0 / h, 1.0 / h];
        for a in 0..2 {
            let (n, dn) = (shape[a], dshape[a]);
            let (c1, c2, c3) = (3 * a, 3 * a + 1, 3 * a + 2);
            b[0][c1] = I * (self.w_ab * k[0] * n);
            b[1][c2] = I * (self.w_ab * k[1] * n);
            b[2][c1] = I * (0.5 * self.w_ab * k[1] * n);
            b[2][c2] = I * (0.5 * self.w_ab * k[0] * n);
            b[3][c3] = C64::new(self.w_33 * dn * inv_s, 0.0);
            b[4][c1] = C64::new(0.5 * self.w_sd * dn, 0.0);
            b[4][c3] = I * (0.5 * self.w_sg * k[0] * n * inv_s);
            b[5][c2] = C64::new(0.5 * self.w_sd * dn, 0.0);
            b[5][c3] = I * (0.5 * self.w_sg * k[1] * n * inv_s);
        }
        b
    }
}

/// Stress-like vector of the eigenstrain load, paired with the strain vector.
pub fn eigenstrain_stress(lame: Lame, phi: &[[C64; 3]; 3]) -> [C64; 6] {
    let Lame { lambda: l, mu: m } = lame;
    let paa = phi[0][0] + phi[1][1];
    let tr = paa + phi[2][2];
    [
        tr * l + phi[0][0] * (2.0 * m),
        tr * l + phi[1][1] * (2.0 * m),
        phi[0][1] * (4.0 * m),
        phi[2][2] * (2.0 * m) + paa * l,
        ZERO,
        ZERO,
    ]
}

/// Scale factor applied to stored transverse displacements: `eps^(1-delta)`
/// for `0 < delta < 1`, otherwise 1.
pub fn transverse_scale(params: &StackParameters, eps: f64) -> f64 {
    let delta = params.exponents().delta;
    if delta > 0.0 && delta < 1.0 {
        eps.powf(1.0 - delta)
    } else {
        1.0
    }
}

/// Constrained per-mode system `K q = f`; unknown `3 (i - 1) + c` is component
/// `c` of node `i >= 1` (node 0 at `x3 = -h_b` is clamped).
#[derive(Debug, Clone)]
pub struct ModeSystem<R: Real = f64> {
    pub matrix: HermitianBand<R>,
    pub rhs: Vec<Complex<R>>,
    pub transverse_scale: f64,
}

impl<R: Real> ModeSystem<R> {
    pub fn rounded(&self) -> ModeSystem<f64> {
        ModeSystem {
            matrix: self.matrix.rounded(),
            rhs: self.rhs.iter().map(|z| crate::linalg::round(*z)).collect(),
            transverse_scale: self.transverse_scale,
        }
    }
}

pub(crate) fn check_eps(eps: f64) -> Result<()> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "eps must be positive, got {eps}"
        )));
    }
    Ok(())
}

pub(crate) fn check_regime(params: &StackParameters, operation: &'static str) -> Result<()> {
    let e = params.exponents();
    if !e.regime.is_two_dimensional() {
        return Err(Error::Regime {
            operation,
            expected: "gamma - delta > 0",
            found: e.regime,
        });
    }
    Ok(())
}

/// Assembles the constrained system of one mode. Sums are accumulated in
/// double-double arithmetic and rounded once: the film's transverse terms are
/// `O(eps^-4)` larger than the bending energy they must not swamp.
pub fn assemble_mode_system(
    params: &StackParameters,
    eps: f64,
    mode: &Mode,
    mesh: &ThicknessMesh,
) -> Result<ModeSystem> {
    Ok(assemble_mode_system_precise(params, eps, mode, mesh)?.rounded())
}

/// [`assemble_mode_system`] without the final rounding.
pub fn assemble_mode_system_precise(
    params: &StackParameters,
    eps: f64,
    mode: &Mode,
    mesh: &ThicknessMesh,
) -> Result<ModeSystem<DD>> {
    assemble_in(params, eps, mode, mesh)
}

fn assemble_in<R: Real>(
    params: &StackParameters,
    eps: f64,
    mode: &Mode,
    mesh: &ThicknessMesh,
) -> Result<ModeSystem<R>> {
    check_eps(eps)?;
    params.validate()?;
    check_regime(params, "3D solve")?;
    mode.validate()?;
    if mesh.num_elements() < 4 {
        return Err(Error::InvalidMesh("mesh has too few elements".into()));
    }

    let k = mode.wave_vector(params.cell);
    let s = transverse_scale(params, eps);
    let inv_s = 1.0 / s;
    let film = LayerWeights::film(params, eps);
    let bond = LayerWeights::bonding(params, eps)?;
    let t_film = eigenstrain_stress(film.lame, &mode.phi_hat);
    let has_phi = t_film.iter().any(|v| *v != ZERO);

    let n = 3 * (mesh.num_nodes() - 1);
    let zr = Complex::new(R::zero(), R::zero());
    let mut matrix = HermitianBand::<R>::zeros(n, BANDWIDTH);
    let mut rhs = vec![zr; n];
    let lift_b = |b: &[[C64; 6]; 6]| -> [[Complex<R>; 6]; 6] { b.map(|row| row.map(lift::<R>)) };

    for (e, x0, x1, layer) in mesh.elements() {
        let h = x1 - x0;
        let w = match layer {
            Layer::Film => &film,
            Layer::Bonding => &bond,
        };
        let c = w.material().map(|row| row.map(R::from_f64));
        let mut ke = [[zr; 6]; 6];
        let mut fe = [zr; 6];
        let wt = R::from_f64(0.5 * h);
        for &t in &GAUSS {
            let b = lift_b(&w.strain_matrix(k, h, t, inv_s));
            // cb = C B
            let mut cb = [[zr; 6]; 6];
            for r in 0..6 {
                for col in 0..6 {
                    let mut acc = zr;
                    for q in 0..6 {
                        if c[r][q] != R::zero() {
                            acc += b[q][col] * c[r][q];
                        }
                    }
                    cb[r][col] = acc;
                }
            }
            for a in 0..6 {
                for bb in 0..=a {
                    let mut acc = zr;
                    for r in 0..6 {
                        acc += b[r][a].conj() * cb[r][bb];
                    }
                    ke[a][bb] += acc * wt;
                }
            }
            if layer == Layer::Film && has_phi {
                for a in 0..6 {
                    let mut acc = zr;
                    for r in 0..6 {
                        acc += b[r][a].conj() * lift::<R>(t_film[r]);
                    }
                    fe[a] += acc * wt;
                }
            }
        }
        // scatter; local dof a -> global node e + a/3
        for a in 0..6 {
            let na = e + a / 3;
            if na == 0 {
                continue;
            }
            let ga = 3 * (na - 1) + a % 3;
            rhs[ga] += fe[a];
            for bb in 0..=a {
                let nb = e + bb / 3;
                if nb == 0 {
                    continue;
                }
                let gb = 3 * (nb - 1) + bb % 3;
                // ke is stored for a >= bb; global ordering follows local order
                if ga >= gb {
                    matrix.add_lower(ga, gb, ke[a][bb]);
                } else {
                    matrix.add_lower(gb, ga, ke[a][bb].conj());
                }
            }
        }
    }

    let top = n - 1;
    rhs[top] += lift::<R>(mode.p_hat * inv_s);

    Ok(ModeSystem {
        matrix,
        rhs,
        transverse_scale: s,
    })
}

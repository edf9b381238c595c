//! Independent reference implementations used by the integration tests.
//!
//! Nothing here calls the library's assembly, strain or norm code: the
//! stiffness is rebuilt term by term from the scaled energy density and
//! solved with nalgebra.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C;
use winkler_limit::{Field3D, Mode, StackParameters, ThicknessMesh};

pub const I: C = C::new(0.0, 1.0);

/// 3-point Gauss on [0, 1]: exact for the quartic products of P1 data.
const G3: [(f64, f64); 3] = [
    (0.112_701_665_379_258_3, 5.0 / 18.0),
    (0.5, 8.0 / 18.0),
    (0.887_298_334_620_741_7, 5.0 / 18.0),
];

pub fn wave_vector(params: &StackParameters, n: [i32; 2]) -> [f64; 2] {
    let tau = 2.0 * std::f64::consts::PI;
    [tau * n[0] as f64 / params.cell[0], tau * n[1] as f64 / params.cell[1]]
}

/// Bonding-layer Lame pair at the reference `eps = 1`, from
/// `E_b = rho_E E_f`, `nu_b = rho_nu nu_f`.
pub fn bonding_lame(p: &StackParameters) -> (f64, f64) {
    let (l, m) = (p.lambda_f, p.mu_f);
    let e = m * (3.0 * l + 2.0 * m) / (l + m);
    let nu = l / (2.0 * (l + m));
    let (eb, nb) = (p.rho_e * e, p.rho_nu * nu);
    (eb * nb / ((1.0 + nb) * (1.0 - 2.0 * nb)), eb / (2.0 * (1.0 + nb)))
}

pub fn exponents(p: &StackParameters) -> (f64, f64) {
    ((p.alpha + p.beta) / 2.0, (p.beta - p.alpha) / 2.0 - 1.0)
}

/// Local value of a P1 basis function: component `c`, value and x3-slope.
#[derive(Clone, Copy)]
struct Basis {
    c: usize,
    v: f64,
    d: f64,
}

impl Basis {
    fn u(&self, c: usize) -> C {
        C::new(if c == self.c { self.v } else { 0.0 }, 0.0)
    }
    fn du(&self, c: usize) -> C {
        C::new(if c == self.c { self.d } else { 0.0 }, 0.0)
    }
}

/// `(weight, L(v))` pairs whose `sum weight |L(v)|^2` is twice the energy
/// density of the scaled energy at one point.
fn energy_terms(p: &StackParameters, eps: f64, k: [f64; 2], film: bool, b: &Basis) -> Vec<(f64, C)> {
    let e_ab = |a: usize, bb: usize| (b.u(bb) * k[a] + b.u(a) * k[bb]) * I * 0.5;
    let div = e_ab(0, 0) + e_ab(1, 1);
    let mut t = Vec::with_capacity(9);
    if film {
        let (l, m) = (p.lambda_f, p.mu_f);
        let e33 = b.du(2) / (eps * eps);
        t.push((l, e33 + div));
        for a in 0..2 {
            t.push((2.0 * m / (eps * eps), b.du(a) + I * k[a] * b.u(2)));
        }
        for a in 0..2 {
            for bb in 0..2 {
                t.push((2.0 * m, e_ab(a, bb)));
            }
        }
        t.push((2.0 * m, e33));
    } else {
        let (l, m) = bonding_lame(p);
        let (g, d) = exponents(p);
        let e33 = b.du(2) * eps.powf(d - 1.0);
        t.push((l, e33 + div * eps.powf(g)));
        for a in 0..2 {
            t.push((2.0 * m, b.du(a) * eps.powf(d) + I * k[a] * b.u(2) * eps.powf(g - 1.0)));
        }
        for a in 0..2 {
            for bb in 0..2 {
                t.push((2.0 * m, e_ab(a, bb) * eps.powf(g)));
            }
        }
        t.push((2.0 * m, e33));
    }
    t
}

/// Work of the film eigenstrain against one basis function.
fn load_density(p: &StackParameters, eps: f64, k: [f64; 2], phi: &[[C; 3]; 3], b: &Basis) -> C {
    let (l, m) = (p.lambda_f, p.mu_f);
    let e_ab = |a: usize, bb: usize| (b.u(bb) * k[a] + b.u(a) * k[bb]) * I * 0.5;
    let paa = phi[0][0] + phi[1][1];
    let mut w = (phi[2][2] * (2.0 * m) + paa * l) * (b.du(2) / (eps * eps)).conj();
    w += (paa + phi[2][2]) * l * (e_ab(0, 0) + e_ab(1, 1)).conj();
    for a in 0..2 {
        for bb in 0..2 {
            w += phi[a][bb] * (2.0 * m) * e_ab(a, bb).conj();
        }
    }
    w
}

/// Dense constrained system in the physical (unscaled) unknowns; node 0 is
/// dropped, unknown `3 (i - 1) + c`.
pub fn oracle_system(
    p: &StackParameters,
    eps: f64,
    mode: &Mode,
    nodes_b: &[f64],
    nodes_f: &[f64],
) -> (DMatrix<C>, DVector<C>) {
    let mut nodes: Vec<f64> = nodes_b.to_vec();
    nodes.extend_from_slice(&nodes_f[1..]);
    let nb = nodes_b.len() - 1;
    let nn = nodes.len();
    let k = wave_vector(p, mode.n);
    let mut kk = DMatrix::<C>::zeros(3 * nn, 3 * nn);
    let mut ff = DVector::<C>::zeros(3 * nn);
    for e in 0..nn - 1 {
        let (x0, x1) = (nodes[e], nodes[e + 1]);
        let h = x1 - x0;
        let film = e >= nb;
        for &(t, wq) in &G3 {
            let w = wq * h;
            let basis: Vec<(usize, Basis)> = (0..6)
                .map(|a| {
                    let node = e + a / 3;
                    let (v, d) = if a / 3 == 0 { (1.0 - t, -1.0 / h) } else { (t, 1.0 / h) };
                    (3 * node + a % 3, Basis { c: a % 3, v, d })
                })
                .collect();
            let terms: Vec<Vec<(f64, C)>> =
                basis.iter().map(|(_, b)| energy_terms(p, eps, k, film, b)).collect();
            for (i, (gi, _)) in basis.iter().enumerate() {
                for (j, (gj, _)) in basis.iter().enumerate() {
                    let mut s = C::new(0.0, 0.0);
                    for (ti, tj) in terms[i].iter().zip(&terms[j]) {
                        s += ti.1.conj() * tj.1 * ti.0;
                    }
                    kk[(*gi, *gj)] += s * w;
                }
                if film {
                    ff[*gi] += load_density(p, eps, k, &mode.phi_hat, &basis[i].1) * w;
                }
            }
        }
    }
    ff[3 * (nn - 1) + 2] += mode.p_hat;
    let n = 3 * (nn - 1);
    (kk.view((3, 3), (n, n)).into_owned(), ff.rows(3, n).into_owned())
}

/// Physical nodal displacements (node 0 included) from the dense oracle.
pub fn oracle_solve(p: &StackParameters, eps: f64, mode: &Mode, nodes_b: &[f64], nodes_f: &[f64]) -> Vec<[C; 3]> {
    let (k, f) = oracle_system(p, eps, mode, nodes_b, nodes_f);
    let q = k.cholesky().expect("oracle stiffness is HPD").solve(&f);
    let mut u = vec![[C::new(0.0, 0.0); 3]];
    u.extend(q.as_slice().chunks_exact(3).map(|c| [c[0], c[1], c[2]]));
    u
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect();
    v[n] = b;
    v
}

/// Squared weighted H1 norm `int (1 + |k|^2) |u|^2 + |u'|^2` of a P1 field
/// over `[nodes[lo], nodes[hi]]`, by 3-point Gauss.
pub fn h1_sq(nodes: &[f64], u: &[[C; 3]], k: [f64; 2], lo: usize, hi: usize) -> f64 {
    let kk = k[0] * k[0] + k[1] * k[1];
    let mut s = 0.0;
    for e in lo..hi {
        let h = nodes[e + 1] - nodes[e];
        for c in 0..3 {
            let (a, b) = (u[e][c], u[e + 1][c]);
            let d = (b - a) / h;
            for &(t, w) in &G3 {
                let v = a * (1.0 - t) + b * t;
                s += w * h * ((1.0 + kk) * v.norm_sqr() + d.norm_sqr());
            }
        }
    }
    s
}

/// Squared L2 norm and squared L2 norm of the x3-derivative on
/// `[nodes[lo], nodes[hi]]`.
pub fn l2_parts(nodes: &[f64], u: &[[C; 3]], lo: usize, hi: usize) -> (f64, f64) {
    let (mut v2, mut d2) = (0.0, 0.0);
    for e in lo..hi {
        let h = nodes[e + 1] - nodes[e];
        for c in 0..3 {
            let (a, b) = (u[e][c], u[e + 1][c]);
            d2 += (b - a).norm_sqr() / h;
            for &(t, w) in &G3 {
                v2 += w * h * (a * (1.0 - t) + b * t).norm_sqr();
            }
        }
    }
    (v2, d2)
}

/// Values of the P1 field on `coarse` at the points of `fine`.
pub fn interpolate(coarse: &[f64], u: &[[C; 3]], fine: &[f64]) -> Vec<[C; 3]> {
    fine.iter()
        .map(|&x| {
            let e = coarse
                .windows(2)
                .position(|w| x <= w[1])
                .unwrap_or(coarse.len() - 2);
            let t = (x - coarse[e]) / (coarse[e + 1] - coarse[e]);
            std::array::from_fn(|c| u[e][c] * (1.0 - t) + u[e + 1][c] * t)
        })
        .collect()
}

/// Relative H1(Omega) distance between a library field mode and oracle data
/// on a nested finer mesh.
pub fn relative_h1_vs_fine(field: &Field3D, mode: usize, fine: &[f64], u_fine: &[[C; 3]], k: [f64; 2]) -> f64 {
    let phys = field.physical();
    let coarse_u = interpolate(field.mesh.nodes(), &phys.modes[mode].u, fine);
    let diff: Vec<[C; 3]> = coarse_u
        .iter()
        .zip(u_fine)
        .map(|(a, b)| std::array::from_fn(|c| a[c] - b[c]))
        .collect();
    let n = fine.len() - 1;
    (h1_sq(fine, &diff, k, 0, n) / h1_sq(fine, u_fine, k, 0, n)).sqrt()
}

pub fn uniform_mesh(p: &StackParameters, n: usize) -> (ThicknessMesh, Vec<f64>, Vec<f64>) {
    let nb = linspace(-p.h_b, 0.0, n);
    let nf = linspace(0.0, p.h_f, n);
    (ThicknessMesh::from_layers(&nb, &nf).unwrap(), nb, nf)
}

// ---- 2D limit equations by Fourier collocation on the periodic cell -------

/// Collocation grid points per direction (odd: no Nyquist mode).
const NGRID: usize = 9;

/// Dense spectral first-derivative matrix on `NGRID` points of a period `len`.
pub fn diff_matrix(len: f64) -> DMatrix<C> {
    let n = NGRID as i64;
    let h = len / NGRID as f64;
    DMatrix::from_fn(NGRID, NGRID, |j, l| {
        let mut s = C::new(0.0, 0.0);
        for m in -(n - 1) / 2..=(n - 1) / 2 {
            let km = 2.0 * std::f64::consts::PI * m as f64 / len;
            s += C::new(0.0, km) * C::from_polar(1.0, km * (j as f64 - l as f64) * h);
        }
        s / NGRID as f64
    })
}

pub struct Grid {
    pub d1: DMatrix<C>,
    pub d2: DMatrix<C>,
    pub pts: Vec<[f64; 2]>,
}

pub fn grid(cell: [f64; 2]) -> Grid {
    let a = diff_matrix(cell[0]);
    let b = diff_matrix(cell[1]);
    let id = DMatrix::<C>::identity(NGRID, NGRID);
    let pts = (0..NGRID * NGRID)
        .map(|p| [(p / NGRID) as f64 * cell[0] / NGRID as f64, (p % NGRID) as f64 * cell[1] / NGRID as f64])
        .collect();
    Grid { d1: a.kronecker(&id), d2: id.kronecker(&b), pts }
}

pub fn plane_wave(g: &Grid, k: [f64; 2], amp: C) -> DVector<C> {
    DVector::from_iterator(g.pts.len(), g.pts.iter().map(|x| amp * C::from_polar(1.0, k[0] * x[0] + k[1] * x[1])))
}

pub fn amplitude(g: &Grid, k: [f64; 2], f: &DVector<C>) -> C {
    let w = plane_wave(g, k, C::new(1.0, 0.0));
    w.iter().zip(f.iter()).map(|(a, b)| a.conj() * b).sum::<C>() / g.pts.len() as f64
}

/// Strong form of the membrane equations on the grid; `foundation = 0`
/// adds a mean-value penalty (zero-mean in-plane representative).
pub fn membrane_oracle(p: &StackParameters, m: &Mode, foundation: f64) -> [C; 2] {
    let (l, mu, h) = (p.lambda_f, p.mu_f, p.h_f);
    let c1 = 2.0 * l * mu / (l + 2.0 * mu);
    let c2 = l * l / (l + 2.0 * mu);
    let c3 = 2.0 * mu;
    let g = grid(p.cell);
    let d = [&g.d1, &g.d2];
    let np = g.pts.len();
    let id = DMatrix::<C>::identity(np, np);
    let lap = &g.d1 * &g.d1 + &g.d2 * &g.d2;
    let mut a = DMatrix::<C>::zeros(2 * np, 2 * np);
    for al in 0..2 {
        for be in 0..2 {
            let mut blk = -(d[al] * d[be]) * C::new(h * (c1 + mu), 0.0);
            if al == be {
                blk -= &lap * C::new(h * mu, 0.0);
                blk += &id * C::new(foundation, 0.0);
                if foundation == 0.0 {
                    blk += DMatrix::<C>::from_element(np, np, C::new(1.0 / np as f64, 0.0));
                }
            }
            a.view_mut((al * np, be * np), (np, np)).copy_from(&blk);
        }
    }
    let k = wave_vector(p, m.n);
    let phi = &m.phi_hat;
    let trace = (phi[0][0] + phi[1][1]) * c1 + phi[2][2] * c2;
    let mut rhs = DVector::<C>::zeros(2 * np);
    for al in 0..2 {
        let mut r = d[al] * plane_wave(&g, k, trace);
        for be in 0..2 {
            r += d[be] * plane_wave(&g, k, phi[al][be] * c3);
        }
        rhs.rows_mut(al * np, np).copy_from(&(r * C::new(-h, 0.0)));
    }
    let z = a.lu().solve(&rhs).expect("membrane oracle is regular");
    [
        amplitude(&g, k, &z.rows(0, np).into_owned()),
        amplitude(&g, k, &z.rows(np, np).into_owned()),
    ]
}

pub fn plate_transverse_oracle(p: &StackParameters, m: &Mode) -> C {
    let (l, mu, h) = (p.lambda_f, p.mu_f, p.h_f);
    let bend = h.powi(3) / 12.0 * (2.0 * l * mu / (l + 2.0 * mu) + 2.0 * mu);
    let (lb, mb) = bonding_lame(p);
    let k_tr = 4.0 * mb * (lb + mb) / ((lb + 2.0 * mb) * p.h_b);
    let g = grid(p.cell);
    let np = g.pts.len();
    let lap = &g.d1 * &g.d1 + &g.d2 * &g.d2;
    let a = &lap * &lap * C::new(bend, 0.0) + DMatrix::<C>::identity(np, np) * C::new(k_tr, 0.0);
    let k = wave_vector(p, m.n);
    let z = a.lu().solve(&plane_wave(&g, k, m.p_hat)).unwrap();
    amplitude(&g, k, &z)
}

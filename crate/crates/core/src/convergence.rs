//! Epsilon sweeps of the 3D solver against the matching limit model.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::coefficients::{limit_coefficients, LimitCoefficients};
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::load::Mode;
use crate::mesh::{sweep_mesh_size, Layer, ThicknessMesh};
use crate::params::StackParameters;
use crate::reduced::{reconstruct_limit_field, solve_reduced, ReducedSolution};
use crate::regime::{Regime, RegimeWarning};
use crate::solver3d::{scaled_strains, solve3d, stationarity_residual, Field3D, ScaledStrains};

/// Default sweep `eps = 2^-1, ..., 2^-8`.
pub fn default_eps() -> Vec<f64> {
    (1..=8).map(|j| 0.5f64.powi(j)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormError {
    pub value: f64,
    /// Set when the reference norm vanishes and `value` is absolute.
    pub absolute: bool,
}

/// `int |d|^2 dx3` and `int |d'|^2 dx3` of a P1 vector function over
/// `[x0, x1]`, from its end values.
fn p1_integrals(a: &[C64; 3], b: &[C64; 3], h: f64) -> (f64, f64) {
    let mut v = 0.0;
    let mut g = 0.0;
    for c in 0..3 {
        v += h / 3.0 * (a[c].norm_sqr() + (a[c] * b[c].conj()).re + b[c].norm_sqr());
        g += (b[c] - a[c]).norm_sqr() / h;
    }
    (v, g)
}

fn layer_sq_norms(
    field: &Field3D,
    other: Option<&Field3D>,
    cell: [f64; 2],
    layer: Layer,
    h1: bool,
) -> f64 {
    let zero = [C64::new(0.0, 0.0); 3];
    let mut total = 0.0;
    for (i, mf) in field.modes.iter().enumerate() {
        let k = mf.mode.wave_vector(cell);
        let kk = k[0] * k[0] + k[1] * k[1];
        for (e, x0, x1, l) in field.mesh.elements() {
            if l != layer {
                continue;
            }
            let diff = |n: usize| -> [C64; 3] {
                let u = mf.u[n];
                let w = other.map_or(zero, |o| o.modes[i].u[n]);
                [u[0] - w[0], u[1] - w[1], u[2] - w[2]]
            };
            let (v, g) = p1_integrals(&diff(e), &diff(e + 1), x1 - x0);
            total += if h1 { (1.0 + kk) * v + g } else { v };
        }
    }
    total
}

fn relative(field: &Field3D, limit: &Field3D, params: &StackParameters, layer: Layer, h1: bool) -> Result<NormError> {
    field.check_compatible(limit)?;
    let field = field.physical();
    let limit = limit.physical();
    let area = params.cell_area();
    let num = (area * layer_sq_norms(&field, Some(&limit), params.cell, layer, h1)).sqrt();
    let den = (area * layer_sq_norms(&limit, None, params.cell, layer, h1)).sqrt();
    Ok(if den == 0.0 {
        NormError {
            value: num,
            absolute: true,
        }
    } else {
        NormError {
            value: num / den,
            absolute: false,
        }
    })
}

/// Relative `H^1(film)` distance, exact for P1 fields (Parseval in-plane).
pub fn h1_error_film(field: &Field3D, limit: &Field3D, params: &StackParameters) -> Result<NormError> {
    relative(field, limit, params, Layer::Film, true)
}

/// Relative `L^2(bonding layer)` distance.
pub fn l2_error_bond(field: &Field3D, limit: &Field3D, params: &StackParameters) -> Result<NormError> {
    relative(field, limit, params, Layer::Bonding, false)
}

/// `sqrt(int_layer |u|^2 dx)` over all modes.
pub fn l2_norm(field: &Field3D, params: &StackParameters, layer: Option<Layer>) -> f64 {
    let f = field.physical();
    let sum = match layer {
        Some(l) => layer_sq_norms(&f, None, params.cell, l, false),
        None => {
            layer_sq_norms(&f, None, params.cell, Layer::Film, false)
                + layer_sq_norms(&f, None, params.cell, Layer::Bonding, false)
        }
    };
    (params.cell_area() * sum).sqrt()
}

/// `sqrt(int_layer |d u / d x3|^2 dx)` over all modes.
pub fn transverse_derivative_norm(field: &Field3D, params: &StackParameters, layer: Layer) -> f64 {
    let f = field.physical();
    let mut total = 0.0;
    for mf in &f.modes {
        for (e, x0, x1, l) in f.mesh.elements() {
            if l == layer {
                total += p1_integrals(&mf.u[e], &mf.u[e + 1], x1 - x0).1;
            }
        }
    }
    (params.cell_area() * total).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalityResiduals {
    /// `||k33 - (-l/(l+2m) k_aa + (2m phi33 + l phi_aa)/(l+2m))||` in the film.
    pub r_film_k33: f64,
    /// `||k_a3||` in the film.
    pub r_film_k3a: f64,
    /// `||k^b_aa + l_b/(l_b+2m_b) k^b_33||` in the bonding layer.
    pub r_bl_kaa: f64,
}

/// Defects of the limit relations between scaled strains, evaluated on the
/// strains of one 3D solve. The eigenstrain of mode `i` is read from
/// `field.modes[i]`.
pub fn optimality_residuals(
    strains: &ScaledStrains,
    field: &Field3D,
    params: &StackParameters,
) -> Result<OptimalityResiduals> {
    if strains.modes.len() != field.modes.len() {
        return Err(Error::InvalidLoad("strains and field carry different modes".into()));
    }
    let (l, m) = (params.lambda_f, params.mu_f);
    let bond = params.bonding_reference()?;
    let pf = l / (l + 2.0 * m);
    let pb = bond.lambda / (bond.lambda + 2.0 * bond.mu);
    let area = strains.cell_area;
    let (mut r33, mut r3a, mut rbl) = (0.0, 0.0, 0.0);
    for (ms, mf) in strains.modes.iter().zip(&field.modes) {
        let phi = mf.mode.phi_hat;
        let paa = phi[0][0] + phi[1][1];
        let offset = (phi[2][2] * (2.0 * m) + paa * l) / (l + 2.0 * m);
        for (e, x0, x1, layer) in strains.mesh.elements() {
            let w = 0.5 * (x1 - x0);
            for s in &ms.gauss[e] {
                match layer {
                    Layer::Film => {
                        let d = s[3] + (s[0] + s[1]) * pf - offset;
                        r33 += w * d.norm_sqr();
                        r3a += w * (s[4].norm_sqr() + s[5].norm_sqr());
                    }
                    Layer::Bonding => {
                        rbl += w * (s[0] + s[1] + s[3] * pb).norm_sqr();
                    }
                }
            }
        }
    }
    Ok(OptimalityResiduals {
        r_film_k33: (area * r33).sqrt(),
        r_film_k3a: (area * r3a).sqrt(),
        r_bl_kaa: (area * rbl).sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateEstimate {
    pub slope: f64,
    /// The errors increase somewhere after the first pair.
    pub low_confidence: bool,
}

/// Least-squares slope of `log(error)` against `log(eps)`.
pub fn rate_estimate(errors: &[f64], eps_values: &[f64]) -> Result<RateEstimate> {
    if errors.len() != eps_values.len() {
        return Err(Error::Numerical("errors and eps lists differ in length".into()));
    }
    if errors.len() < 3 {
        return Err(Error::Numerical("a rate needs at least 3 points".into()));
    }
    if errors
        .iter()
        .chain(eps_values)
        .any(|v| !(v.is_finite() && *v > 0.0))
    {
        return Err(Error::Numerical("rate estimate needs positive entries".into()));
    }
    let xs: Vec<f64> = eps_values.iter().map(|e| e.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::Numerical("rate estimate needs distinct eps values".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    // order by decreasing eps before checking monotonicity
    let mut pairs: Vec<(f64, f64)> = eps_values.iter().copied().zip(errors.iter().copied()).collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let low_confidence = pairs.windows(2).skip(1).any(|w| w[1].1 > w[0].1);
    Ok(RateEstimate {
        slope: sxy / sxx,
        low_confidence,
    })
}

/// Number of `i` with `v[i + 1] > v[i]`.
pub fn count_increases(v: &[f64]) -> usize {
    v.windows(2).filter(|w| w[1] > w[0]).count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SweepOptions {
    /// Elements per layer; `None` couples the mesh to `eps`.
    pub mesh_n: Option<usize>,
    /// Record wall-clock time per entry (otherwise written as 0).
    pub timing: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct StrainBounds {
    /// `||k||_{L2(film)}`
    pub kappa_film: Vec<f64>,
    /// `||e33||_{L2(film)} / eps^2`
    pub e33_film_eps2: Vec<f64>,
    /// `||e_a3||_{L2(film)} / eps`
    pub ea3_film_eps: Vec<f64>,
    /// `||k^b_33||_{L2(bonding)}`
    pub kappa33_bond: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ResidualSeries {
    pub r_film_k33: Vec<f64>,
    pub r_film_k3a: Vec<f64>,
    pub r_bl_kaa: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub regime: Regime,
    pub gamma: f64,
    pub delta: f64,
    pub warnings: Vec<RegimeWarning>,
    pub coefficients: LimitCoefficients,
    pub reduced: Vec<ReducedSolution>,
    pub eps_values: Vec<f64>,
    pub mesh_n: Vec<usize>,
    pub errors_h1_film: Vec<f64>,
    pub errors_h1_absolute: Vec<bool>,
    pub errors_l2_bond: Vec<f64>,
    pub strain_bound_ratios: StrainBounds,
    pub optimality_residuals: ResidualSeries,
    pub stationarity: Vec<f64>,
    pub rate_estimate: Option<RateEstimate>,
    pub runtime_ms: Vec<f64>,
}

struct Entry {
    n: usize,
    err: NormError,
    err_bond: f64,
    kappa_film: f64,
    e33: f64,
    ea3: f64,
    k33b: f64,
    res: OptimalityResiduals,
    stat: f64,
    ms: f64,
}

fn run_entry(
    params: &StackParameters,
    load: &[Mode],
    reduced: &[ReducedSolution],
    eps: f64,
    opts: SweepOptions,
) -> Result<Entry> {
    let start = Instant::now();
    let n = opts.mesh_n.unwrap_or_else(|| sweep_mesh_size(eps));
    let mesh = ThicknessMesh::for_stack(params, n)?;
    let field = solve3d(params, eps, load, &mesh)?;
    let stat = stationarity_residual(&field, params, eps, load)?.normalized;
    let strains = scaled_strains(&field, params, eps)?;
    let norms = strains.norms();
    let res = optimality_residuals(&strains, &field, params)?;
    let limit = reconstruct_limit_field(reduced, params, &mesh);
    let err = h1_error_film(&field, &limit, params)?;
    let err_bond = l2_error_bond(&field, &limit, params)?.value;
    let ms = if opts.timing {
        start.elapsed().as_secs_f64() * 1e3
    } else {
        0.0
    };
    Ok(Entry {
        n,
        err,
        err_bond,
        kappa_film: norms.kappa_film,
        e33: norms.kappa33_film,
        ea3: norms.kappa_a3_film,
        k33b: norms.kappa33_bond,
        res,
        stat,
        ms,
    })
}

pub fn run_sweep(
    params: &StackParameters,
    load: &[Mode],
    eps_list: &[f64],
    opts: SweepOptions,
) -> Result<SweepReport> {
    params.validate()?;
    let exps = params.exponents();
    if !matches!(
        exps.regime,
        Regime::MembraneInPlaneFoundation | Regime::PlateTransverseFoundation
    ) {
        return Err(Error::Regime {
            operation: "convergence sweep",
            expected: "membrane_in_plane_foundation or plate_transverse_foundation",
            found: exps.regime,
        });
    }
    if eps_list.is_empty() {
        return Err(Error::Config("eps list is empty".into()));
    }
    if let Some(n) = opts.mesh_n {
        if n < 2 {
            return Err(Error::InvalidMesh("mesh_n must be at least 2".into()));
        }
    }
    let coeffs = limit_coefficients(params)?;
    let reduced = solve_reduced(&coeffs, params, load)?;

    let entries = eps_list
        .par_iter()
        .map(|&eps| run_entry(params, load, &reduced, eps, opts))
        .collect::<Result<Vec<_>>>()?;

    let mut r = SweepReport {
        regime: exps.regime,
        gamma: exps.gamma,
        delta: exps.delta,
        warnings: exps.warnings(),
        coefficients: coeffs,
        reduced,
        eps_values: eps_list.to_vec(),
        mesh_n: vec![],
        errors_h1_film: vec![],
        errors_h1_absolute: vec![],
        errors_l2_bond: vec![],
        strain_bound_ratios: StrainBounds::default(),
        optimality_residuals: ResidualSeries::default(),
        stationarity: vec![],
        rate_estimate: None,
        runtime_ms: vec![],
    };
    for e in entries {
        r.mesh_n.push(e.n);
        r.errors_h1_film.push(e.err.value);
        r.errors_h1_absolute.push(e.err.absolute);
        r.errors_l2_bond.push(e.err_bond);
        r.strain_bound_ratios.kappa_film.push(e.kappa_film);
        r.strain_bound_ratios.e33_film_eps2.push(e.e33);
        r.strain_bound_ratios.ea3_film_eps.push(e.ea3);
        r.strain_bound_ratios.kappa33_bond.push(e.k33b);
        r.optimality_residuals.r_film_k33.push(e.res.r_film_k33);
        r.optimality_residuals.r_film_k3a.push(e.res.r_film_k3a);
        r.optimality_residuals.r_bl_kaa.push(e.res.r_bl_kaa);
        r.stationarity.push(e.stat);
        r.runtime_ms.push(e.ms);
    }
    r.rate_estimate = rate_estimate(&r.errors_h1_film, &r.eps_values).ok();
    Ok(r)
}

/// CSV column order.
pub const CSV_HEADER: [&str; 12] = [
    "eps",
    "err_h1",
    "err_l2_bond",
    "kappa_film",
    "e33_film_eps2",
    "ea3_film_eps",
    "kappa33_bond",
    "r_film_k33",
    "r_film_k3a",
    "r_bl_kaa",
    "mesh_n",
    "ms",
];

impl SweepReport {
    pub fn len(&self) -> usize {
        self.eps_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eps_values.is_empty()
    }

    /// One row per eps, `.` decimal separator, LF line endings.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(CSV_HEADER).map_err(csv_err)?;
        let s = &self.strain_bound_ratios;
        let o = &self.optimality_residuals;
        for i in 0..self.len() {
            let row = [
                format!("{:e}", self.eps_values[i]),
                format!("{:e}", self.errors_h1_film[i]),
                format!("{:e}", self.errors_l2_bond[i]),
                format!("{:e}", s.kappa_film[i]),
                format!("{:e}", s.e33_film_eps2[i]),
                format!("{:e}", s.ea3_film_eps[i]),
                format!("{:e}", s.kappa33_bond[i]),
                format!("{:e}", o.r_film_k33[i]),
                format!("{:e}", o.r_film_k3a[i]),
                format!("{:e}", o.r_bl_kaa[i]),
                self.mesh_n[i].to_string(),
                format!("{:e}", self.runtime_ms[i]),
            ];
            w.write_record(&row).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("csv output is ASCII")
    }
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Numerical(format!("csv: {other:?}")),
    }
}

//! Material and geometric parameters of the film / bonding-layer stack.
//!
//! The film carries Lamé moduli `(lambda_f, mu_f)`. The bonding layer is
//! described relative to the film: its Young modulus is `rho_E * eps^beta`
//! times the film's and its Poisson ratio is `rho_nu` times the film's. The
//! two ratios are converted once into Lamé ratios `(rho_lambda, rho_mu)`, so
//! that `lambda_b = rho_lambda * lambda_f * eps^beta` and
//! `mu_b = rho_mu * mu_f * eps^beta`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regime::Exponents;

/// Isotropic Lamé pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lame {
    pub lambda: f64,
    pub mu: f64,
}

impl Lame {
    pub fn new(lambda: f64, mu: f64) -> Self {
        Lame { lambda, mu }
    }

    pub fn scaled(self, factor: f64) -> Self {
        Lame {
            lambda: self.lambda * factor,
            mu: self.mu * factor,
        }
    }

    /// Young modulus and Poisson ratio.
    pub fn engineering(self) -> (f64, f64) {
        let Lame { lambda, mu } = self;
        let e = mu * (3.0 * lambda + 2.0 * mu) / (lambda + mu);
        let nu = lambda / (2.0 * (lambda + mu));
        (e, nu)
    }
}

/// Converts `(E, nu)` into Lamé moduli.
pub fn lame_from_engineering(e: f64, nu: f64) -> Result<Lame> {
    if !(e.is_finite() && e > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "Young modulus must be positive, got {e}"
        )));
    }
    if !(nu > -1.0 && nu < 0.5) {
        return Err(Error::InvalidParameter(format!(
            "Poisson ratio must lie in (-1, 0.5), got {nu}"
        )));
    }
    let lambda = e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
    let mu = e / (2.0 * (1.0 + nu));
    Ok(Lame { lambda, mu })
}

/// Parameters of the stack on the rescaled (fixed) domain
/// `omega x (-h_b, h_f)`, with `omega` a periodic rectangular cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StackParameters {
    pub lambda_f: f64,
    pub mu_f: f64,
    #[serde(rename = "rho_E")]
    pub rho_e: f64,
    pub rho_nu: f64,
    pub alpha: f64,
    pub beta: f64,
    pub h_f: f64,
    pub h_b: f64,
    #[serde(rename = "L")]
    pub diameter: f64,
    pub cell: [f64; 2],
}

impl StackParameters {
    /// Identical unit layers, unit cell, `(alpha, beta) = (0, 0)`.
    pub fn unit() -> Self {
        StackParameters {
            lambda_f: 1.0,
            mu_f: 1.0,
            rho_e: 1.0,
            rho_nu: 1.0,
            alpha: 0.0,
            beta: 0.0,
            h_f: 1.0,
            h_b: 1.0,
            diameter: 1.0,
            cell: [1.0, 1.0],
        }
    }

    pub fn with_exponents(mut self, alpha: f64, beta: f64) -> Self {
        self.alpha = alpha;
        self.beta = beta;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: f64| Err(Error::InvalidParameter(format!("{what} = {v}")));
        if !(self.mu_f.is_finite() && self.mu_f > 0.0) {
            return bad("mu_f must be positive", self.mu_f);
        }
        if !(self.lambda_f.is_finite() && self.lambda_f >= 0.0) {
            return bad("lambda_f must be non-negative", self.lambda_f);
        }
        if !(self.rho_e.is_finite() && self.rho_e > 0.0) {
            return bad("rho_E must be positive", self.rho_e);
        }
        if !self.rho_nu.is_finite() {
            return bad("rho_nu must be finite", self.rho_nu);
        }
        if !(self.alpha.is_finite() && self.beta.is_finite()) {
            return Err(Error::InvalidParameter(
                "scaling exponents must be finite".into(),
            ));
        }
        for (name, v) in [
            ("h_f", self.h_f),
            ("h_b", self.h_b),
            ("L", self.diameter),
            ("cell[0]", self.cell[0]),
            ("cell[1]", self.cell[1]),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return bad(&format!("{name} must be positive"), v);
            }
        }
        self.bonding_ratios()?;
        Ok(())
    }

    pub fn film(&self) -> Lame {
        Lame::new(self.lambda_f, self.mu_f)
    }

    pub fn exponents(&self) -> Exponents {
        Exponents::from_alpha_beta(self.alpha, self.beta)
    }

    /// Area of the periodic cell.
    pub fn cell_area(&self) -> f64 {
        self.cell[0] * self.cell[1]
    }

    /// `(rho_lambda, rho_mu)` such that the bonding-layer Lamé moduli are the
    /// film's times these ratios (times `eps^beta`).
    pub fn bonding_ratios(&self) -> Result<(f64, f64)> {
        let (_, nu_f) = self.film().engineering();
        let nu_b = self.rho_nu * nu_f;
        if !(nu_b > -1.0 && nu_b < 0.5) {
            return Err(Error::InvalidParameter(format!(
                "bonding-layer Poisson ratio {nu_b} outside (-1, 0.5)"
            )));
        }
        // mu = E / (2 (1 + nu)),  lambda = E nu / ((1 + nu)(1 - 2 nu))
        let rho_mu = self.rho_e * (1.0 + nu_f) / (1.0 + nu_b);
        let rho_lambda = if self.lambda_f == 0.0 {
            0.0
        } else {
            self.rho_e * self.rho_nu * (1.0 + nu_f) * (1.0 - 2.0 * nu_f)
                / ((1.0 + nu_b) * (1.0 - 2.0 * nu_b))
        };
        if rho_lambda < 0.0 {
            return Err(Error::InvalidParameter(
                "bonding-layer lambda would be negative".into(),
            ));
        }
        Ok((rho_lambda, rho_mu))
    }

    /// Bonding-layer moduli with the `eps^beta` factor left out. These are
    /// the moduli that appear in the rescaled energy, where the powers of
    /// `eps` are carried by the exponents `(gamma, delta)`.
    pub fn bonding_reference(&self) -> Result<Lame> {
        let (rl, rm) = self.bonding_ratios()?;
        Ok(Lame::new(rl * self.lambda_f, rm * self.mu_f))
    }
}

/// Physical bonding-layer moduli at thickness parameter `eps`.
pub fn bonding_moduli(params: &StackParameters, eps: f64) -> Result<Lame> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "eps must be positive, got {eps}"
        )));
    }
    Ok(params.bonding_reference()?.scaled(eps.powf(params.beta)))
}

/// On-disk form: either Lamé moduli or `(E_f, nu_f)` for the film.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParameters {
    lambda_f: Option<f64>,
    mu_f: Option<f64>,
    #[serde(rename = "E_f")]
    e_f: Option<f64>,
    nu_f: Option<f64>,
    #[serde(rename = "rho_E")]
    rho_e: f64,
    rho_nu: f64,
    alpha: f64,
    beta: f64,
    h_f: f64,
    h_b: f64,
    #[serde(rename = "L")]
    diameter: f64,
    cell: [f64; 2],
}

impl TryFrom<RawParameters> for StackParameters {
    type Error = Error;

    fn try_from(raw: RawParameters) -> Result<Self> {
        let film = match (raw.lambda_f, raw.mu_f, raw.e_f, raw.nu_f) {
            (Some(lambda), Some(mu), None, None) => Lame::new(lambda, mu),
            (None, None, Some(e), Some(nu)) => lame_from_engineering(e, nu)?,
            _ => {
                return Err(Error::Config(
                    "give the film either as {lambda_f, mu_f} or as {E_f, nu_f}".into(),
                ))
            }
        };
        let params = StackParameters {
            lambda_f: film.lambda,
            mu_f: film.mu,
            rho_e: raw.rho_e,
            rho_nu: raw.rho_nu,
            alpha: raw.alpha,
            beta: raw.beta,
            h_f: raw.h_f,
            h_b: raw.h_b,
            diameter: raw.diameter,
            cell: raw.cell,
        };
        params.validate()?;
        Ok(params)
    }
}

impl<'de> Deserialize<'de> for StackParameters {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawParameters::deserialize(d)?;
        StackParameters::try_from(raw).map_err(serde::de::Error::custom)
    }
}

//! Closed-form coefficients of the two limit models.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::params::StackParameters;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitCoefficients {
    /// `2 lambda_f mu_f / (lambda_f + 2 mu_f)`
    pub c1: f64,
    /// `lambda_f^2 / (lambda_f + 2 mu_f)`
    pub c2: f64,
    /// `2 mu_f`
    pub c3: f64,
    /// In-plane (shear) foundation stiffness `2 mu_b / h_b`.
    pub k_in: f64,
    /// Transverse foundation stiffness
    /// `4 mu_b (lambda_b + mu_b) / ((lambda_b + 2 mu_b) h_b)`.
    pub k_tr: f64,
    pub ell_in: f64,
    pub ell_tr: f64,
    /// Flexural rigidity `h_f^3 / 12 * (c1 + c3)` of the film.
    pub bending: f64,
}

impl LimitCoefficients {
    /// Membrane stiffnesses per unit area: `(h_f c1, h_f c3)`.
    pub fn membrane_moduli(&self, h_f: f64) -> (f64, f64) {
        (h_f * self.c1, h_f * self.c3)
    }
}

pub fn limit_coefficients(params: &StackParameters) -> Result<LimitCoefficients> {
    params.validate()?;
    let (lf, mf) = (params.lambda_f, params.mu_f);
    let b = params.bonding_reference()?;
    let (lb, mb) = (b.lambda, b.mu);
    let (h_f, h_b) = (params.h_f, params.h_b);

    let c1 = 2.0 * lf * mf / (lf + 2.0 * mf);
    let c2 = lf * lf / (lf + 2.0 * mf);
    let c3 = 2.0 * mf;
    let k_in = 2.0 * mb / h_b;
    let k_tr = 4.0 * mb * (lb + mb) / ((lb + 2.0 * mb) * h_b);
    let ell_in = (mf / mb * h_f * h_b).sqrt();
    let ell_tr = (mf * (lb + 2.0 * mb) * h_f * h_b / (12.0 * mb * (lb + mb))).sqrt();
    let bending = h_f.powi(3) / 12.0 * (c1 + c3);
    Ok(LimitCoefficients {
        c1,
        c2,
        c3,
        k_in,
        k_tr,
        ell_in,
        ell_tr,
        bending,
    })
}

/// Coefficients of the limit equations rewritten in the variable
/// `y = x' / L`. Reported for reference only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NondimensionalCoefficients {
    /// `c_i / (2 mu_f h_f)`
    pub c_hat: [f64; 3],
    /// `lambda_f / (lambda_f + 2 mu_f)`
    pub poisson_weight: f64,
    /// `L^2 / ell_in^2`
    pub membrane_foundation: f64,
    /// `L^2 / ell_tr^2`
    pub plate_foundation: f64,
    /// Pressure unit `mu_f h_f / 3`.
    pub pressure_unit: f64,
}

pub fn nondimensional_coefficients(
    params: &StackParameters,
    coeffs: &LimitCoefficients,
) -> NondimensionalCoefficients {
    let s = 2.0 * params.mu_f * params.h_f;
    let l2 = params.diameter * params.diameter;
    NondimensionalCoefficients {
        c_hat: [coeffs.c1 / s, coeffs.c2 / s, coeffs.c3 / s],
        poisson_weight: params.lambda_f / (params.lambda_f + 2.0 * params.mu_f),
        membrane_foundation: l2 / (coeffs.ell_in * coeffs.ell_in),
        plate_foundation: l2 / (coeffs.ell_tr * coeffs.ell_tr),
        pressure_unit: params.mu_f * params.h_f / 3.0,
    }
}

//! Scaling exponents `(gamma, delta)` and the phase-diagram classifier.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Absolute tolerance used when testing the exponents against the lines
/// `gamma = delta`, `delta = 0` and `delta = 1`.
pub const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `gamma - delta < 0`: the stack becomes slender (beam-like limits).
    Slender,
    /// `gamma - delta = 0`: the bonding layer keeps an O(1) thickness.
    #[serde(rename = "persistent_3d")]
    Persistent3D,
    /// `delta < 0`: displacements vanish at the chosen load intensity.
    Rigid,
    MembraneInPlaneFoundation,
    PlateTransverseFoundation,
    OutOfScope,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Slender => "slender",
            Regime::Persistent3D => "persistent_3d",
            Regime::Rigid => "rigid",
            Regime::MembraneInPlaneFoundation => "membrane_in_plane_foundation",
            Regime::PlateTransverseFoundation => "plate_transverse_foundation",
            Regime::OutOfScope => "out_of_scope",
        }
    }

    /// True in the half plane `gamma - delta > 0`, where the rescaled 3D
    /// problem is posed.
    pub fn is_two_dimensional(self) -> bool {
        matches!(
            self,
            Regime::Rigid
                | Regime::MembraneInPlaneFoundation
                | Regime::PlateTransverseFoundation
                | Regime::OutOfScope
        )
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeWarning {
    /// Plate regime point with `delta <= gamma`; the phase-diagram caption
    /// draws the plate region with `delta > gamma`.
    PlateBelowDiagonal,
    /// Plate regime point with `gamma <= 1`; the limit passage in the plate
    /// case drops terms carrying `eps^(gamma - 1)`.
    PlateGammaNotAboveOne,
}

impl fmt::Display for RegimeWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegimeWarning::PlateBelowDiagonal => {
                f.write_str("plate regime point lies on the strip 0 < delta <= gamma")
            }
            RegimeWarning::PlateGammaNotAboveOne => {
                f.write_str("plate regime point has gamma <= 1")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Exponents {
    pub gamma: f64,
    pub delta: f64,
    pub regime: Regime,
}

impl Exponents {
    pub fn from_alpha_beta(alpha: f64, beta: f64) -> Self {
        let gamma = (alpha + beta) / 2.0;
        let delta = (beta - alpha) / 2.0 - 1.0;
        Exponents {
            gamma,
            delta,
            regime: classify_regime(gamma, delta),
        }
    }

    pub fn alpha(&self) -> f64 {
        self.gamma - self.delta - 1.0
    }

    pub fn beta(&self) -> f64 {
        self.gamma + self.delta + 1.0
    }

    pub fn warnings(&self) -> Vec<RegimeWarning> {
        let mut out = Vec::new();
        if self.regime == Regime::PlateTransverseFoundation {
            if self.delta <= self.gamma + BOUNDARY_TOL {
                out.push(RegimeWarning::PlateBelowDiagonal);
            }
            if self.gamma <= 1.0 + BOUNDARY_TOL {
                out.push(RegimeWarning::PlateGammaNotAboveOne);
            }
        }
        out
    }
}

pub fn derive_exponents(alpha: f64, beta: f64) -> Exponents {
    Exponents::from_alpha_beta(alpha, beta)
}

/// Total classifier of the `(gamma, delta)` plane.
pub fn classify_regime(gamma: f64, delta: f64) -> Regime {
    if gamma.is_nan() || delta.is_nan() {
        return Regime::OutOfScope;
    }
    let gap = gamma - delta;
    if gap.abs() <= BOUNDARY_TOL {
        return Regime::Persistent3D;
    }
    if gap < 0.0 {
        return Regime::Slender;
    }
    if delta.abs() <= BOUNDARY_TOL {
        return if gamma > 0.0 {
            Regime::MembraneInPlaneFoundation
        } else {
            Regime::OutOfScope
        };
    }
    if delta < 0.0 {
        return Regime::Rigid;
    }
    if delta <= 1.0 + BOUNDARY_TOL && gamma > 0.0 {
        return Regime::PlateTransverseFoundation;
    }
    Regime::OutOfScope
}

/// Which exponent pair spans a phase-diagram grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Plane {
    AlphaBeta,
    GammaDelta,
}

/// Classifies an `n x n` grid over `[lo, hi]^2` of the chosen plane,
/// row-major in the first coordinate. Points are `(x, y, exponents)`.
pub fn phase_grid(plane: Plane, n: usize, lo: f64, hi: f64) -> Vec<(f64, f64, Exponents)> {
    let step = |i: usize| {
        if n == 1 {
            lo
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    };
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (step(i), step(j))))
        .map(|(x, y)| {
            let e = match plane {
                Plane::AlphaBeta => derive_exponents(x, y),
                Plane::GammaDelta => Exponents {
                    gamma: x,
                    delta: y,
                    regime: classify_regime(x, y),
                },
            };
            (x, y, e)
        })
        .collect()
}

/// CSV rendering `alpha,beta,gamma,delta,regime` with one decimal place
/// for `alpha, beta` and two for `gamma, delta`.
pub fn phase_csv(grid: &[(f64, f64, Exponents)]) -> String {
    let mut s = String::from("alpha,beta,gamma,delta,regime\n");
    for (_, _, e) in grid {
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            fixed(e.alpha(), 1),
            fixed(e.beta(), 1),
            fixed(e.gamma, 2),
            fixed(e.delta, 2),
            e.regime
        ));
    }
    s
}

/// Fixed-point with values that round to zero printed unsigned.
fn fixed(v: f64, digits: usize) -> String {
    let s = format!("{v:.digits$}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|c| c == b'0' || c == b'.') => rest.to_string(),
        _ => s,
    }
}

//! Fourier-mode loads: surface pressure on the top face and a film eigenstrain.

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::C64;

/// Serde helper writing a complex number as `[re, im]`.
pub mod cpx {
    use super::C64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(C64::new(re, im))
    }

    pub fn pair(z: C64) -> [f64; 2] {
        [z.re, z.im]
    }
}

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// One in-plane Fourier mode `exp(i k.x')` with `k = 2 pi (n1 / l1, n2 / l2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub n: [i32; 2],
    pub p_hat: C64,
    /// Symmetric eigenstrain amplitude, constant through the film.
    pub phi_hat: [[C64; 3]; 3],
}

impl Mode {
    pub fn new(n: [i32; 2]) -> Self {
        Mode {
            n,
            p_hat: ZERO,
            phi_hat: [[ZERO; 3]; 3],
        }
    }

    pub fn pressure(n: [i32; 2], p: C64) -> Self {
        Mode {
            p_hat: p,
            ..Mode::new(n)
        }
    }

    /// Eigenstrain with a single (symmetrized) component `(i, j)`.
    pub fn eigenstrain(n: [i32; 2], i: usize, j: usize, value: C64) -> Self {
        Mode::new(n).with_phi(i, j, value)
    }

    pub fn with_phi(mut self, i: usize, j: usize, value: C64) -> Self {
        self.phi_hat[i][j] = value;
        self.phi_hat[j][i] = value;
        self
    }

    pub fn with_pressure(mut self, p: C64) -> Self {
        self.p_hat = p;
        self
    }

    pub fn wave_vector(&self, cell: [f64; 2]) -> [f64; 2] {
        let tau = 2.0 * std::f64::consts::PI;
        [
            tau * self.n[0] as f64 / cell[0],
            tau * self.n[1] as f64 / cell[1],
        ]
    }

    pub fn is_zero_mode(&self) -> bool {
        self.n == [0, 0]
    }

    pub fn is_unloaded(&self) -> bool {
        self.p_hat == ZERO && self.phi_hat.iter().flatten().all(|v| *v == ZERO)
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut m = *self;
        m.p_hat *= s;
        for row in m.phi_hat.iter_mut() {
            for v in row.iter_mut() {
                *v *= s;
            }
        }
        m
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |z: C64| z.re.is_finite() && z.im.is_finite();
        if !finite(self.p_hat) || !self.phi_hat.iter().flatten().all(|z| finite(*z)) {
            return Err(Error::InvalidLoad(format!(
                "mode {:?} has non-finite amplitudes",
                self.n
            )));
        }
        for i in 0..3 {
            for j in 0..i {
                if self.phi_hat[i][j] != self.phi_hat[j][i] {
                    return Err(Error::InvalidLoad(format!(
                        "mode {:?}: eigenstrain is not symmetric",
                        self.n
                    )));
                }
            }
        }
        Ok(())
    }
}

/// True when every mode `n` with a nonzero load has a partner `-n` carrying
/// the conjugate amplitudes, i.e. the physical load is real.
pub fn is_conjugate_symmetric(load: &[Mode]) -> bool {
    load.iter().all(|m| {
        if m.is_unloaded() {
            return true;
        }
        let partner = [-m.n[0], -m.n[1]];
        load.iter().any(|q| {
            q.n == partner
                && q.p_hat == m.p_hat.conj()
                && (0..3).all(|i| (0..3).all(|j| q.phi_hat[i][j] == m.phi_hat[i][j].conj()))
        })
    })
}

const PHI_KEYS: [(&str, usize, usize); 6] = [
    ("11", 0, 0),
    ("22", 1, 1),
    ("33", 2, 2),
    ("12", 0, 1),
    ("13", 0, 2),
    ("23", 1, 2),
];

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMode {
    n: [i32; 2],
    #[serde(default, with = "opt_cpx")]
    p: Option<C64>,
    #[serde(default)]
    phi: Option<RawPhi>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPhi {
    #[serde(rename = "11", default, with = "opt_cpx")]
    p11: Option<C64>,
    #[serde(rename = "22", default, with = "opt_cpx")]
    p22: Option<C64>,
    #[serde(rename = "33", default, with = "opt_cpx")]
    p33: Option<C64>,
    #[serde(rename = "12", default, with = "opt_cpx")]
    p12: Option<C64>,
    #[serde(rename = "13", default, with = "opt_cpx")]
    p13: Option<C64>,
    #[serde(rename = "23", default, with = "opt_cpx")]
    p23: Option<C64>,
}

mod opt_cpx {
    use super::C64;
    use serde::{Deserialize, Deserializer};

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<C64>, D::Error> {
        Ok(Option::<[f64; 2]>::deserialize(d)?.map(|[re, im]| C64::new(re, im)))
    }
}

impl<'de> Deserialize<'de> for Mode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawMode::deserialize(d)?;
        let mut m = Mode::new(raw.n);
        if let Some(p) = raw.p {
            m.p_hat = p;
        }
        if let Some(phi) = raw.phi {
            let vals = [phi.p11, phi.p22, phi.p33, phi.p12, phi.p13, phi.p23];
            for ((_, i, j), v) in PHI_KEYS.iter().zip(vals) {
                if let Some(v) = v {
                    m = m.with_phi(*i, *j, v);
                }
            }
        }
        m.validate().map_err(serde::de::Error::custom)?;
        Ok(m)
    }
}

impl Serialize for Mode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("n", &self.n)?;
        if self.p_hat != ZERO {
            map.serialize_entry("p", &cpx::pair(self.p_hat))?;
        }
        let phi: Vec<(&str, [f64; 2])> = PHI_KEYS
            .iter()
            .filter(|(_, i, j)| self.phi_hat[*i][*j] != ZERO)
            .map(|(k, i, j)| (*k, cpx::pair(self.phi_hat[*i][*j])))
            .collect();
        if !phi.is_empty() {
            let obj: serde_json::Map<String, serde_json::Value> = phi
                .into_iter()
                .map(|(k, v)| (k.to_string(), serde_json::json!(v)))
                .collect();
            map.serialize_entry("phi", &obj)?;
        }
        map.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wave_vector_uses_cell() {
        let m = Mode::new([1, -2]);
        let k = m.wave_vector([2.0, 4.0]);
        assert_eq!(k, [std::f64::consts::PI, -std::f64::consts::PI]);
    }

    #[test]
    fn eigenstrain_is_symmetrized() {
        let m = Mode::eigenstrain([1, 0], 0, 1, C64::new(0.5, 0.0));
        assert_eq!(m.phi_hat[1][0], C64::new(0.5, 0.0));
        assert!(m.validate().is_ok());
        let mut bad = m;
        bad.phi_hat[1][0] = C64::new(0.0, 0.0);
        assert!(bad.validate().is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = r#"{"n":[1,0],"p":[1.0,0.0],"phi":{"11":[1.0,0.0],"23":[0.0,-2.0]}}"#;
        let m: Mode = serde_json::from_str(s).unwrap();
        assert_eq!(m.p_hat, C64::new(1.0, 0.0));
        assert_eq!(m.phi_hat[2][1], C64::new(0.0, -2.0));
        let back: Mode = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(serde_json::from_str::<Mode>(r#"{"n":[1,0],"q":[1,0]}"#).is_err());
        assert!(serde_json::from_str::<Mode>(r#"{"n":[1,0],"phi":{"21":[1,0]}}"#).is_err());
    }

    #[test]
    fn conjugate_symmetry() {
        let a = Mode::pressure([1, 0], C64::new(1.0, 2.0));
        let b = Mode::pressure([-1, 0], C64::new(1.0, -2.0));
        assert!(is_conjugate_symmetric(&[a, b]));
        assert!(!is_conjugate_symmetric(&[a]));
        assert!(is_conjugate_symmetric(&[Mode::new([3, 3])]));
    }
}

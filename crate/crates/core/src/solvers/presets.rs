use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analysis::{paskm_preset, ConvexityBounds, PaskmPreset};
use crate::error::{Error, Result};

use super::config::Variant;

/// Named parameter choices used in comparisons.
///
/// | label       | variant                                  |
/// |-------------|------------------------------------------|
/// | `SKM`       | SKM (GSKM with xi = 0)                   |
/// | `GSKM-1`    | GSKM, xi = -0.1                          |
/// | `GSKM-1b`   | GSKM, xi = -0.2                          |
/// | `GSKM-2`    | GSKM, xi = 0.5                           |
/// | `PASKM-1`   | PASKM, gamma = 1.5 sqrt(eta) preset      |
/// | `PASKM-2`   | PASKM, gamma = 2 sqrt(eta) preset        |
/// | `PASKM-zeta`| PASKM, zeta preset                       |
/// | `gskm:XI`   | GSKM with the given xi                   |
/// | `paskm:A,O,G` | PASKM with alpha, omega, gamma         |
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Preset {
    Skm,
    Gskm1,
    Gskm1b,
    Gskm2,
    Paskm1,
    Paskm2,
    PaskmZeta,
    Gskm(f64),
    Paskm(f64, f64, f64),
}

/// Zeta used by `PASKM-zeta` when `mu1 = 1`.
pub const DEFAULT_ZETA_FALLBACK: f64 = 1.0;

impl Preset {
    /// Whether resolving needs the convexity bounds of the problem.
    pub fn needs_bounds(&self) -> bool {
        matches!(self, Preset::Paskm1 | Preset::Paskm2 | Preset::PaskmZeta)
    }

    pub fn resolve(&self, delta: f64, bounds: Option<&ConvexityBounds>) -> Result<Variant> {
        let paskm = |p: PaskmPreset| -> Result<Variant> {
            let b = bounds.ok_or_else(|| {
                Error::InvalidParameter(format!("preset {self} needs spectral bounds of the problem"))
            })?;
            let (alpha, omega, gamma) = paskm_preset(delta, b, p)?;
            Ok(Variant::Paskm { alpha, omega, gamma })
        };
        match *self {
            Preset::Skm => Ok(Variant::Skm),
            Preset::Gskm1 => Ok(Variant::gskm(-0.1)),
            Preset::Gskm1b => Ok(Variant::gskm(-0.2)),
            Preset::Gskm2 => Ok(Variant::gskm(0.5)),
            Preset::Gskm(xi) => Ok(Variant::gskm(xi)),
            Preset::Paskm1 => paskm(PaskmPreset::Param1),
            Preset::Paskm2 => paskm(PaskmPreset::Param2),
            Preset::PaskmZeta => paskm(PaskmPreset::Zeta {
                fallback: DEFAULT_ZETA_FALLBACK,
            }),
            Preset::Paskm(alpha, omega, gamma) => Ok(Variant::Paskm { alpha, omega, gamma }),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Skm => f.write_str("SKM"),
            Preset::Gskm1 => f.write_str("GSKM-1"),
            Preset::Gskm1b => f.write_str("GSKM-1b"),
            Preset::Gskm2 => f.write_str("GSKM-2"),
            Preset::Paskm1 => f.write_str("PASKM-1"),
            Preset::Paskm2 => f.write_str("PASKM-2"),
            Preset::PaskmZeta => f.write_str("PASKM-zeta"),
            Preset::Gskm(xi) => write!(f, "gskm:{xi}"),
            Preset::Paskm(a, o, g) => write!(f, "paskm:{a},{o},{g}"),
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("unknown preset `{s}`"));
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
        if let Some(rest) = s.strip_prefix("gskm:") {
            return Ok(Preset::Gskm(num(rest)?));
        }
        if let Some(rest) = s.strip_prefix("paskm:") {
            let v: Vec<&str> = rest.split(',').collect();
            if v.len() != 3 {
                return Err(bad());
            }
            return Ok(Preset::Paskm(num(v[0])?, num(v[1])?, num(v[2])?));
        }
        Ok(match s.to_ascii_uppercase().as_str() {
            "SKM" => Preset::Skm,
            "GSKM-1" => Preset::Gskm1,
            "GSKM-1B" => Preset::Gskm1b,
            "GSKM-2" => Preset::Gskm2,
            "PASKM-1" => Preset::Paskm1,
            "PASKM-2" => Preset::Paskm2,
            "PASKM-ZETA" => Preset::PaskmZeta,
            _ => return Err(bad()),
        })
    }
}

impl Serialize for Preset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Preset {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::bounds_from_mu;

    #[test]
    fn labels_round_trip() {
        for p in [
            Preset::Skm,
            Preset::Gskm1,
            Preset::Gskm1b,
            Preset::Gskm2,
            Preset::Paskm1,
            Preset::Paskm2,
            Preset::PaskmZeta,
            Preset::Gskm(-0.3),
            Preset::Paskm(0.5, 0.2, 1.0),
        ] {
            assert_eq!(p.to_string().parse::<Preset>().unwrap(), p);
        }
        assert!("GSKM-9".parse::<Preset>().is_err());
    }

    #[test]
    fn resolution() {
        assert_eq!(Preset::Gskm1.resolve(0.5, None).unwrap(), Variant::gskm(-0.1));
        assert_eq!(Preset::Gskm2.resolve(0.5, None).unwrap(), Variant::gskm(0.5));
        assert!(Preset::Paskm1.resolve(1.0, None).is_err());
        let b = bounds_from_mu(0.3, 1.0, 1.0).unwrap();
        match Preset::Paskm2.resolve(1.0, Some(&b)).unwrap() {
            Variant::Paskm { omega, gamma, .. } => assert_eq!((omega, gamma), (0.0, 2.0)),
            other => panic!("unexpected {other:?}"),
        }
    }
}

//! Tolerance bands used by every zero/sign decision in the crate.
//!
//! All bands are relative. A quantity that is homogeneous of degree `k` in
//! the input scale is compared against `rel * scale^k`, so multiplying a
//! matrix (or a polynomial) by a constant never changes a verdict.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Relative tolerances shared by the decision procedures.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Zero tests on matrix invariants and the smallness boundary band.
    pub eps_rel: f64,
    /// Sign band for discriminants, relative to the sum of the magnitudes
    /// of their terms, and for coefficients that must vanish.
    ///
    /// Rounding in the coefficients leaves a tangency at about `1e-11` of
    /// that sum; a band much wider hides near-tangent configurations that are
    /// visibly apart.
    pub disc_rel: f64,
    /// Maximum entry of `RᵀR - I` (and `|det R - 1|`) accepted for a rotation.
    pub orthogonality: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eps_rel: 1e-9,
            disc_rel: 1e-10,
            orthogonality: 1e-9,
        }
    }
}

impl Tolerances {
    /// Threshold for a degree-`degree` quantity whose inputs have magnitude `scale`.
    pub fn invariant_band(&self, scale: f64, degree: i32) -> f64 {
        self.eps_rel * scale.powi(degree)
    }

    pub fn disc_band(&self, scale: f64, degree: i32) -> f64 {
        self.disc_rel * scale.powi(degree)
    }

    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [
            ("eps_rel", self.eps_rel),
            ("disc_rel", self.disc_rel),
            ("orthogonality", self.orthogonality),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(format!("tolerance {name} must be positive and finite, got {v}"));
            }
        }
        Ok(())
    }
}

/// Sign of a value after banding: anything within the band is `Zero`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn banded(value: f64, band: f64) -> Sign {
        if value.abs() <= band {
            Sign::Zero
        } else if value > 0.0 {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Negative => '-',
            Sign::Zero => '0',
            Sign::Positive => '+',
        }
    }

    pub fn from_symbol(c: char) -> Option<Sign> {
        match c {
            '-' => Some(Sign::Negative),
            '0' => Some(Sign::Zero),
            '+' => Some(Sign::Positive),
            _ => None,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_char(self.symbol())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let c = char::deserialize(d)?;
        Sign::from_symbol(c).ok_or_else(|| serde::de::Error::custom(format!("invalid sign {c:?}")))
    }
}

/// Renders a sign sequence as a compact string such as `-++-+`.
pub fn sign_string(signs: &[Sign]) -> String {
    signs.iter().map(|s| s.symbol()).collect()
}

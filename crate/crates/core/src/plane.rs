//! Ellipsoid against a plane. No smallness hypothesis is needed: the pencil
//! always has a double root at zero, and the two remaining roots are real
//! with the sign of the side the ellipsoid lies on, or non-real when it
//! crosses the plane.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::classifier::{coefficient_signs, discriminants, report_from_parts, ContactReport, PositionMatch, Region};
use crate::error::{Error, Result};
use crate::invariants::QuadricClass;
use crate::pencil::{char_poly, QuarticPoly};
use crate::quadric::{Ellipsoid, Quadric};
use crate::tolerance::{sign_string, Sign, Tolerances};

/// `n · x - d = 0`, kept in the user's orientation: `R+` is `n · x ≥ d`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PlaneJson", into = "PlaneJson")]
pub struct Plane {
    n: Vector3<f64>,
    d: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlaneJson {
    n: [f64; 3],
    d: f64,
}

impl TryFrom<PlaneJson> for Plane {
    type Error = Error;
    fn try_from(j: PlaneJson) -> Result<Self> {
        Plane::new(Vector3::from(j.n), j.d)
    }
}

impl From<Plane> for PlaneJson {
    fn from(p: Plane) -> Self {
        PlaneJson {
            n: [p.n.x, p.n.y, p.n.z],
            d: p.d,
        }
    }
}

impl Plane {
    pub fn new(n: Vector3<f64>, d: f64) -> Result<Self> {
        if n.iter().any(|v| !v.is_finite()) || !d.is_finite() {
            return Err(Error::NonFinite);
        }
        if n == Vector3::zeros() {
            return Err(Error::ZeroNormal);
        }
        Ok(Self { n, d })
    }

    /// Reads a quadric whose quadratic part vanishes within tolerance.
    pub fn from_quadric(q: &Quadric, tol: &Tolerances) -> Result<Self> {
        let band = tol.invariant_band(q.scale(), 1);
        if q.quadratic_part().iter().any(|v| v.abs() > band) {
            return Err(Error::NotAPlane);
        }
        Self::new(2.0 * q.linear_part(), -q.constant())
    }

    pub fn normal(&self) -> &Vector3<f64> {
        &self.n
    }

    pub fn offset(&self) -> f64 {
        self.d
    }

    /// Matrix with zero quadratic block, `b = n/2`, `c = -d`.
    pub fn quadric(&self) -> Quadric {
        Quadric::new([0.0; 6], [0.5 * self.n.x, 0.5 * self.n.y, 0.5 * self.n.z], -self.d)
            .expect("plane normal is nonzero")
    }

    pub fn evaluate(&self, p: &Vector3<f64>) -> f64 {
        self.n.dot(p) - self.d
    }
}

/// Banded sign of `n · p - d`.
pub fn side_of_plane(plane: &Plane, p: &Vector3<f64>, tol: &Tolerances) -> Sign {
    let band = tol.eps_rel * (plane.n.norm() * p.norm() + plane.d.abs());
    Sign::banded(plane.evaluate(p), band)
}

/// Contact between an ellipsoid and a plane.
///
/// `c1` and `c0` must vanish within the coefficient band and are then
/// treated as exact zeros. The surfaces cross iff `Δ3 < 0`; otherwise the
/// sign of `c3` gives the side. A `c3` inside its band is resolved by the
/// sign of the plane at the ellipsoid center.
pub fn plane_contact(e: &Ellipsoid, plane: &Plane, tol: &Tolerances) -> Result<ContactReport> {
    let raw = char_poly(e.quadric(), &plane.quadric());
    let band = tol.disc_band(raw.max_abs(), 1);
    for (name, value) in [("c1", raw.c1), ("c0", raw.c0)] {
        if value.abs() > band {
            return Err(Error::StructuralZero { name, value, band });
        }
    }
    let p = QuarticPoly::new(raw.c4, raw.c3, raw.c2, 0.0, 0.0);
    let disc = discriminants(&p, tol);
    let transversal = disc.s3 == Sign::Negative;

    let region = if transversal {
        Region::Straddling
    } else {
        match Sign::banded(p.c3, band) {
            Sign::Positive => Region::RPlus,
            Sign::Negative => Region::RMinus,
            Sign::Zero => {
                if plane.evaluate(e.center()) >= 0.0 {
                    Region::RPlus
                } else {
                    Region::RMinus
                }
            }
        }
    };
    let position = (!transversal).then(|| PositionMatch {
        region,
        class: QuadricClass::SinglePlane,
        coefficient_signs: sign_string(&coefficient_signs(&p)),
        root_signs: if region == Region::RPlus { "00++" } else { "--00" }.into(),
        orientation: 1,
    });
    Ok(report_from_parts(p, disc, transversal, region, position, None, true))
}

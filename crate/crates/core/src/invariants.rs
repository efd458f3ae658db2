//! Euclidean invariants of a quadric, its affine class, and the parameters of
//! its reduced equation recovered from invariants alone.
//!
//! Every quantity here is unchanged by rigid motions. Zero tests compare a
//! degree-`k` quantity against `eps_rel * scale^k`, with `scale` the largest
//! matrix entry, so the verdicts are also unchanged by positive rescaling.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues_sym3, principal_minor3};
use crate::quadric::Quadric;
use crate::tolerance::{Sign, Tolerances};

const CENTERING_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantSet {
    pub det_q: f64,
    /// Eigenvalues of the quadratic block, descending.
    pub mu: [f64; 3],
    pub tr_q00: f64,
    pub det_q00: f64,
    /// Sum of the principal 2×2 minors of the quadratic block.
    pub j: f64,
    /// Sum of the 3×3 principal minors of `Q` that keep the last row.
    pub k: f64,
    /// `Σ (a_ii c - b_i²)`.
    pub jp: f64,
    /// Largest absolute entry of the centered matrix, the reference for
    /// every zero band.
    pub scale: f64,
}

/// Invariants, computed in the quadric's canonical frame so that zero bands
/// do not grow with distance from the origin.
pub fn invariant_set(q: &Quadric) -> InvariantSet {
    let q = &q.centered(CENTERING_EPS);
    let a = q.quadratic_part();
    let b = q.linear_part();
    let c = q.constant();
    let m = q.matrix();
    let mu = eigenvalues_sym3(&a);
    let j = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(0, 1)] + a[(0, 0)] * a[(2, 2)] - a[(0, 2)] * a[(0, 2)]
        + a[(1, 1)] * a[(2, 2)]
        - a[(1, 2)] * a[(1, 2)];
    InvariantSet {
        det_q: crate::linalg::det4(&m),
        mu,
        tr_q00: mu.iter().sum(),
        det_q00: mu.iter().product(),
        j,
        k: (0..3).map(|i| principal_minor3(&m, i)).sum(),
        jp: c * a.trace() - b.norm_squared(),
        scale: q.scale(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QuadricClass {
    Ellipsoid,
    HyperboloidOneSheet,
    HyperboloidTwoSheets,
    EllipticParaboloid,
    HyperbolicParaboloid,
    EllipticCylinder,
    HyperbolicCylinder,
    ParabolicCylinder,
    ParallelPlanes,
    SinglePlane,
    Cone,
    IntersectingPlanes,
    /// Imaginary or point-like sets.
    Other,
}

impl QuadricClass {
    /// Classes with a reduced form, a smallness test and a sign-pattern row.
    pub const SUPPORTED: [QuadricClass; 9] = [
        QuadricClass::Ellipsoid,
        QuadricClass::HyperboloidOneSheet,
        QuadricClass::HyperboloidTwoSheets,
        QuadricClass::EllipticParaboloid,
        QuadricClass::HyperbolicParaboloid,
        QuadricClass::EllipticCylinder,
        QuadricClass::HyperbolicCylinder,
        QuadricClass::ParabolicCylinder,
        QuadricClass::ParallelPlanes,
    ];

    pub fn is_supported(self) -> bool {
        Self::SUPPORTED.contains(&self)
    }

    pub fn name(self) -> &'static str {
        match self {
            QuadricClass::Ellipsoid => "ellipsoid",
            QuadricClass::HyperboloidOneSheet => "hyperboloid of one sheet",
            QuadricClass::HyperboloidTwoSheets => "hyperboloid of two sheets",
            QuadricClass::EllipticParaboloid => "elliptic paraboloid",
            QuadricClass::HyperbolicParaboloid => "hyperbolic paraboloid",
            QuadricClass::EllipticCylinder => "elliptic cylinder",
            QuadricClass::HyperbolicCylinder => "hyperbolic cylinder",
            QuadricClass::ParabolicCylinder => "parabolic cylinder",
            QuadricClass::ParallelPlanes => "pair of parallel planes",
            QuadricClass::SinglePlane => "plane",
            QuadricClass::Cone => "cone",
            QuadricClass::IntersectingPlanes => "pair of intersecting planes",
            QuadricClass::Other => "degenerate or imaginary quadric",
        }
    }
}

impl fmt::Display for QuadricClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

struct Signs {
    det_q: Sign,
    mu: [Sign; 3],
    k: Sign,
    jp: Sign,
}

fn banded_signs(inv: &InvariantSet, tol: &Tolerances) -> Signs {
    let s = inv.scale;
    Signs {
        det_q: Sign::banded(inv.det_q, tol.invariant_band(s, 4)),
        mu: inv.mu.map(|m| Sign::banded(m, tol.invariant_band(s, 1))),
        k: Sign::banded(inv.k, tol.invariant_band(s, 3)),
        jp: Sign::banded(inv.jp, tol.invariant_band(s, 2)),
    }
}

pub fn classify(q: &Quadric, tol: &Tolerances) -> QuadricClass {
    classify_invariants(&invariant_set(q), tol)
}

pub fn classify_invariants(inv: &InvariantSet, tol: &Tolerances) -> QuadricClass {
    use QuadricClass::*;
    let s = banded_signs(inv, tol);
    let pos = s.mu.iter().filter(|&&m| m == Sign::Positive).count();
    let neg = s.mu.iter().filter(|&&m| m == Sign::Negative).count();
    let same_sign = pos == 0 || neg == 0;

    match pos + neg {
        3 => match (s.det_q, same_sign) {
            (Sign::Negative, true) => Ellipsoid,
            (Sign::Positive, true) => Other,
            (Sign::Positive, false) => HyperboloidOneSheet,
            (Sign::Negative, false) => HyperboloidTwoSheets,
            (Sign::Zero, false) => Cone,
            (Sign::Zero, true) => Other,
        },
        2 => match (s.det_q, same_sign) {
            (Sign::Zero, true) => {
                // Real iff the constant has the opposite sign of the eigenvalues.
                let tr = if pos > 0 { Sign::Positive } else { Sign::Negative };
                if s.k != Sign::Zero && s.k != tr {
                    EllipticCylinder
                } else {
                    Other
                }
            }
            (Sign::Zero, false) => {
                if s.k == Sign::Zero {
                    IntersectingPlanes
                } else {
                    HyperbolicCylinder
                }
            }
            (_, true) => EllipticParaboloid,
            (_, false) => HyperbolicParaboloid,
        },
        1 => match (s.k, s.jp) {
            (Sign::Zero, Sign::Negative) => ParallelPlanes,
            (Sign::Zero, Sign::Zero) => SinglePlane,
            (Sign::Zero, Sign::Positive) => Other,
            _ => ParabolicCylinder,
        },
        _ => {
            if q_linear_nonzero(inv, tol) {
                SinglePlane
            } else {
                Other
            }
        }
    }
}

// With a vanishing quadratic block `jp = -|b|²`.
fn q_linear_nonzero(inv: &InvariantSet, tol: &Tolerances) -> bool {
    inv.jp.abs() > tol.invariant_band(inv.scale, 2)
}

/// Parameters of the reduced equation.
///
/// Axis parameters satisfy `a ≥ b ≥ c` where the class orders them. The
/// remaining field is the class's size invariant:
///
/// | class | equation | size |
/// |---|---|---|
/// | ellipsoid | `x²/a² + y²/b² + z²/c² = d²` | `d` |
/// | hyperboloid, one sheet | `x²/a² + y²/b² - z²/c² = d²` | `d` |
/// | hyperboloid, two sheets | `x²/a² + y²/b² - z²/c² = -d²` | `d` |
/// | paraboloids | `x²/a² ± y²/b² = L z` | `l` |
/// | elliptic / hyperbolic cylinder | `x²/a² ± y²/b² = M²` | `m` |
/// | parabolic cylinder | `x²/a² = d z` | `d` |
/// | parallel planes | `x²/a² = d²` | `d` |
///
/// For the hyperbolic cylinder `a` belongs to the vertex axis, so `a < b` is
/// possible.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedForm {
    pub class: QuadricClass,
    pub a: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
}

impl ReducedForm {
    fn new(class: QuadricClass, a: f64) -> Self {
        Self {
            class,
            a,
            b: None,
            c: None,
            d: None,
            l: None,
            m: None,
        }
    }
}

fn positive_sqrt(quantity: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value.sqrt())
    } else {
        Err(Error::Degenerate { quantity, value })
    }
}

fn axis(mu: f64) -> Result<f64> {
    positive_sqrt("eigenvalue", mu).map(|s| 1.0 / s)
}

pub fn reduced_form(q: &Quadric, tol: &Tolerances) -> Result<ReducedForm> {
    let inv = invariant_set(q);
    let class = classify_invariants(&inv, tol);
    reduced_form_from(&inv, class)
}

/// Reduced form for an already classified invariant set.
pub fn reduced_form_from(inv: &InvariantSet, class: QuadricClass) -> Result<ReducedForm> {
    use QuadricClass::*;
    let mu = inv.mu;
    let mut r = ReducedForm::new(class, 0.0);

    match class {
        Ellipsoid => {
            let s = mu[0].signum();
            // Smallest eigenvalue gives the longest axis.
            let mut n = mu.map(|m| s * m);
            n.sort_by(|x, y| x.total_cmp(y));
            let (a, b, c) = (axis(n[0])?, axis(n[1])?, axis(n[2])?);
            r.a = a;
            r.b = Some(b);
            r.c = Some(c);
            r.d = Some(positive_sqrt("d'^2", -(a * b * c).powi(2) * inv.det_q)?);
        }
        HyperboloidOneSheet | HyperboloidTwoSheets => {
            let s = if mu[1] > 0.0 { 1.0 } else { -1.0 };
            let mut n = mu.map(|m| s * m);
            n.sort_by(|x, y| y.total_cmp(x));
            let (a, b, c) = (axis(n[1])?, axis(n[0])?, axis(-n[2])?);
            r.a = a;
            r.b = Some(b);
            r.c = Some(c);
            let sign = if class == HyperboloidOneSheet { 1.0 } else { -1.0 };
            r.d = Some(positive_sqrt("d'^2", sign * (a * b * c).powi(2) * inv.det_q)?);
        }
        EllipticParaboloid | HyperbolicParaboloid => {
            let (p, q) = nonzero_pair(&mu);
            let (a, b) = (axis(p.abs())?, axis(q.abs())?);
            r.a = a;
            r.b = Some(b);
            r.l = Some(positive_sqrt("L^2", -4.0 * inv.det_q / inv.j)?);
        }
        EllipticCylinder => {
            let (p, q) = nonzero_pair(&mu);
            let s = p.signum();
            r.a = axis(s * p)?;
            r.b = Some(axis(s * q)?);
            r.m = Some(positive_sqrt("M^2", -s * inv.k / inv.j)?);
        }
        HyperbolicCylinder => {
            let s = inv.k.signum();
            let (p, q) = nonzero_pair(&mu);
            let (pos, neg) = if s * p > 0.0 { (s * p, s * q) } else { (s * q, s * p) };
            r.a = axis(pos)?;
            r.b = Some(axis(-neg)?);
            r.m = Some(positive_sqrt("M^2", -s * inv.k / inv.j)?);
        }
        ParabolicCylinder => {
            let p = dominant(&mu);
            let a = axis(p.abs())?;
            r.a = a;
            r.d = Some(positive_sqrt("d'^2", -4.0 * p.signum() * inv.k * a * a)?);
        }
        ParallelPlanes => {
            let a = axis(dominant(&mu).abs())?;
            r.a = a;
            r.d = Some(positive_sqrt("d'^2", -a * a * inv.jp)?);
        }
        SinglePlane | Cone | IntersectingPlanes | Other => return Err(Error::UnsupportedClass { class }),
    }
    Ok(r)
}

/// The two eigenvalues of largest magnitude, smaller magnitude first.
fn nonzero_pair(mu: &[f64; 3]) -> (f64, f64) {
    let mut v = *mu;
    v.sort_by(|x, y| x.abs().total_cmp(&y.abs()));
    (v[1], v[2])
}

fn dominant(mu: &[f64; 3]) -> f64 {
    *mu.iter().max_by(|x, y| x.abs().total_cmp(&y.abs())).unwrap()
}

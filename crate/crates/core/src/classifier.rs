//! Root-free contact decisions on the characteristic polynomial.
//!
//! Transversal contact is read off two discriminants. When the surfaces do
//! not cross, the relative position (ellipsoid inside `XᵀQX ≤ 0` or inside
//! `XᵀQX ≥ 0`) is read off the coefficient signs: once all four roots are
//! known to be real, Descartes' rule counts the positive, negative and zero
//! roots exactly, and each quadric class has one expected count per region.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::{classify_invariants, invariant_set, InvariantSet, QuadricClass};
use crate::pencil::{char_poly, QuarticPoly};
use crate::quadric::{Ellipsoid, Quadric};
use crate::smallness::{is_small, SmallnessVerdict};
use crate::tolerance::{sign_string, Sign, Tolerances};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Discriminants {
    pub d3: f64,
    pub d4: f64,
    pub s3: Sign,
    pub s4: Sign,
    pub tau3: f64,
    pub tau4: f64,
}

impl Discriminants {
    /// Non-real roots are present.
    pub fn transversal(&self) -> bool {
        self.s4 == Sign::Negative || (self.s4 == Sign::Zero && self.s3 == Sign::Negative)
    }
}

fn delta3_terms(p: &QuarticPoly) -> [f64; 7] {
    let QuarticPoly { c4, c3, c2, c1, c0 } = *p;
    [
        16.0 * c4 * c4 * c0 * c2,
        -18.0 * c4 * c4 * c1 * c1,
        -4.0 * c4 * c2.powi(3),
        14.0 * c4 * c1 * c3 * c2,
        -6.0 * c4 * c0 * c3 * c3,
        c2 * c2 * c3 * c3,
        -3.0 * c1 * c3.powi(3),
    ]
}

fn delta4_terms(p: &QuarticPoly) -> [f64; 16] {
    let QuarticPoly {
        c4: a,
        c3: b,
        c2: c,
        c1: d,
        c0: e,
    } = *p;
    [
        256.0 * a.powi(3) * e.powi(3),
        -192.0 * a * a * b * d * e * e,
        -128.0 * a * a * c * c * e * e,
        144.0 * a * a * c * d * d * e,
        -27.0 * a * a * d.powi(4),
        144.0 * a * b * b * c * e * e,
        -6.0 * a * b * b * d * d * e,
        -80.0 * a * b * c * c * d * e,
        18.0 * a * b * c * d.powi(3),
        16.0 * a * c.powi(4) * e,
        -4.0 * a * c.powi(3) * d * d,
        -27.0 * b.powi(4) * e * e,
        18.0 * b.powi(3) * c * d * e,
        -4.0 * b.powi(3) * d.powi(3),
        -4.0 * b * b * c.powi(3) * e,
        b * b * c * c * d * d,
    ]
}

pub fn delta3(p: &QuarticPoly) -> f64 {
    delta3_terms(p).iter().sum()
}

/// The quartic discriminant.
pub fn delta4(p: &QuarticPoly) -> f64 {
    delta4_terms(p).iter().sum()
}

/// Both discriminants with signs banded relative to the sum of the absolute
/// values of their terms.
///
/// That sum scales exactly like the discriminant when the polynomial is
/// multiplied by a constant and when `λ` is rescaled, i.e. when `E` and `Q`
/// are rescaled independently, so verdicts do not depend on either
/// normalization.
pub fn discriminants(p: &QuarticPoly, tol: &Tolerances) -> Discriminants {
    let magnitude = |t: &[f64]| t.iter().map(|v| v.abs()).sum::<f64>();
    let (t3, t4) = (delta3_terms(p), delta4_terms(p));
    let (d3, d4) = (t3.iter().sum(), t4.iter().sum());
    let (tau3, tau4) = (tol.disc_rel * magnitude(&t3), tol.disc_rel * magnitude(&t4));
    Discriminants {
        d3,
        d4,
        s3: Sign::banded(d3, tau3),
        s4: Sign::banded(d4, tau4),
        tau3,
        tau4,
    }
}

/// Signs of `c4 … c0`. Structural zeros must already be exact; see
/// [`with_structural_zeros`].
pub fn coefficient_signs(p: &QuarticPoly) -> [Sign; 5] {
    p.descending().map(|c| Sign::banded(c, 0.0))
}

/// Number of zero roots forced by `Q` alone. `E` is positive definite, so
/// this is the nullity of `Q`.
pub fn structural_zeros(class: QuadricClass) -> usize {
    use QuadricClass::*;
    match class {
        EllipticCylinder | HyperbolicCylinder | ParabolicCylinder => 1,
        ParallelPlanes | SinglePlane => 2,
        _ => 0,
    }
}

/// `p` with its lowest `zeros` coefficients set to exactly zero.
pub fn with_structural_zeros(p: &QuarticPoly, zeros: usize) -> QuarticPoly {
    let mut c = p.ascending();
    for v in c.iter_mut().take(zeros) {
        *v = 0.0;
    }
    QuarticPoly::new(c[4], c[3], c[2], c[1], c[0])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    /// Inside `XᵀQX ≤ 0`.
    RMinus,
    /// Inside `XᵀQX ≥ 0`.
    RPlus,
    /// The ellipsoid crosses the surface.
    Straddling,
    Indeterminate,
}

impl Region {
    pub fn flip(self) -> Region {
        match self {
            Region::RMinus => Region::RPlus,
            Region::RPlus => Region::RMinus,
            r => r,
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Region::RMinus => "R-",
            Region::RPlus => "R+",
            Region::Straddling => "straddling",
            Region::Indeterminate => "indeterminate",
        })
    }
}

/// Root counts derived from coefficient signs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootCounts {
    pub negative: usize,
    pub zero: usize,
    pub positive: usize,
}

impl RootCounts {
    /// Root signs in ascending order, e.g. `--0+`.
    pub fn pattern(&self) -> String {
        "-".repeat(self.negative) + &"0".repeat(self.zero) + &"+".repeat(self.positive)
    }
}

/// One row of the expected-pattern table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternRow {
    pub region: Region,
    pub root_signs: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositionMatch {
    pub region: Region,
    pub class: QuadricClass,
    /// Coefficient signs `c4 … c0` of the polynomial as given.
    pub coefficient_signs: String,
    /// Root signs of the class-oriented polynomial.
    pub root_signs: String,
    /// `-1` when `Q` was negated to reach the class's standard orientation.
    pub orientation: i8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternMismatch {
    pub class: QuadricClass,
    pub coefficient_signs: String,
    /// Descartes counts when they add up to four.
    pub counts: Option<RootCounts>,
    pub expected: Vec<PatternRow>,
}

impl fmt::Display for PatternMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "coefficient signs {} match no row for a {} (root signs {}; expected ",
            self.coefficient_signs,
            self.class,
            self.counts.map(|c| c.pattern()).unwrap_or_else(|| "not all real".into()),
        )?;
        let rows: Vec<String> = self.expected.iter().map(|r| format!("{} for {}", r.root_signs, r.region)).collect();
        write!(f, "{})", rows.join(" or "))
    }
}

/// Expected root-sign patterns for `XᵀQX ≤ 0` and `XᵀQX ≥ 0`, in that order,
/// with `Q` in the class's standard orientation.
pub fn expected_patterns(class: QuadricClass) -> Option<[&'static str; 2]> {
    use QuadricClass::*;
    Some(match class {
        Ellipsoid | HyperboloidTwoSheets | EllipticParaboloid => ["----", "--++"],
        HyperboloidOneSheet | HyperbolicParaboloid => ["---+", "-+++"],
        EllipticCylinder | ParabolicCylinder => ["---0", "-0++"],
        HyperbolicCylinder => ["--0+", "0+++"],
        ParallelPlanes => ["--00", "00++"],
        _ => return None,
    })
}

/// `+1` if `Q` already has the sign of its class's standard equation, else `-1`.
///
/// Standard equations: ellipsoid, paraboloids, elliptic and parabolic
/// cylinders and parallel planes have a positive semidefinite quadratic part;
/// hyperboloids have two positive eigenvalues; the hyperbolic cylinder is
/// `x²/a² - y²/b² - 1` with `K > 0`. The hyperbolic paraboloid is congruent
/// to its own negative and needs no normalization.
pub fn standard_orientation(inv: &InvariantSet, class: QuadricClass) -> f64 {
    use QuadricClass::*;
    let positive = inv.mu.iter().filter(|&&m| m > 0.0).count();
    let s = match class {
        HyperboloidOneSheet | HyperboloidTwoSheets => positive >= 2,
        HyperbolicCylinder => inv.k > 0.0,
        HyperbolicParaboloid => true,
        _ => inv.tr_q00 > 0.0,
    };
    if s {
        1.0
    } else {
        -1.0
    }
}

fn sign_changes(signs: impl Iterator<Item = Sign>) -> usize {
    let nonzero: Vec<Sign> = signs.filter(|&s| s != Sign::Zero).collect();
    nonzero.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Descartes counts. `None` unless positive, negative and zero counts add up
/// to four, which pins every root as real with the counted signs.
pub fn descartes_counts(signs: &[Sign; 5]) -> Option<RootCounts> {
    // signs[i] is the sign of c_{4-i}
    let zero = signs.iter().rev().take_while(|&&s| s == Sign::Zero).count();
    if zero >= 5 {
        return None;
    }
    let kept = &signs[..5 - zero];
    let positive = sign_changes(kept.iter().copied());
    let negative = sign_changes(kept.iter().enumerate().map(|(i, &s)| if (4 - i) % 2 == 1 { s.flip() } else { s }));
    (positive + negative + zero == 4).then_some(RootCounts {
        negative,
        zero,
        positive,
    })
}

/// Relative position from a polynomial and the class of `Q`.
pub fn position_from_poly(
    p: &QuarticPoly,
    class: QuadricClass,
    orientation: f64,
) -> std::result::Result<PositionMatch, PatternMismatch> {
    let signs = coefficient_signs(&with_structural_zeros(p, structural_zeros(class)));
    // det(λE - Q) = p(-λ): negating Q negates every root.
    let oriented: [Sign; 5] = if orientation < 0.0 {
        let mut s = signs;
        for (i, v) in s.iter_mut().enumerate() {
            if (4 - i) % 2 == 1 {
                *v = v.flip();
            }
        }
        s
    } else {
        signs
    };
    let counts = descartes_counts(&oriented);
    let expected = expected_patterns(class);
    let mismatch = || PatternMismatch {
        class,
        coefficient_signs: sign_string(&signs),
        counts,
        expected: expected
            .map(|[m, p]| {
                let flip = |r: Region| if orientation < 0.0 { r.flip() } else { r };
                vec![
                    PatternRow {
                        region: flip(Region::RMinus),
                        root_signs: m.into(),
                    },
                    PatternRow {
                        region: flip(Region::RPlus),
                        root_signs: p.into(),
                    },
                ]
            })
            .unwrap_or_default(),
    };
    let (Some(c), Some([minus, plus])) = (counts, expected) else {
        return Err(mismatch());
    };
    let pattern = c.pattern();
    let region = if pattern == minus {
        Region::RMinus
    } else if pattern == plus {
        Region::RPlus
    } else {
        return Err(mismatch());
    };
    Ok(PositionMatch {
        region: if orientation < 0.0 { region.flip() } else { region },
        class,
        coefficient_signs: sign_string(&signs),
        root_signs: pattern,
        orientation: orientation as i8,
    })
}

/// Region of the ellipsoid relative to `q`, assuming no transversal contact.
pub fn relative_position(q: &Quadric, p: &QuarticPoly, tol: &Tolerances) -> Result<PositionMatch> {
    let inv = invariant_set(q);
    let class = classify_invariants(&inv, tol);
    if !class.is_supported() {
        return Err(Error::UnsupportedClass { class });
    }
    position_from_poly(p, class, standard_orientation(&inv, class)).map_err(|m| Error::PatternMismatch(Box::new(m)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub poly: QuarticPoly,
    pub coefficient_signs: String,
    pub discriminants: Discriminants,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub position: Option<PositionMatch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mismatch: Option<PatternMismatch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub smallness: Option<SmallnessVerdict>,
}

/// `transversal` implies `region == Straddling`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContactReport {
    pub transversal: bool,
    pub region: Region,
    /// `Δ4` vanishes without transversal contact: tangency of some kind, or
    /// disjoint surfaces, which the discriminants cannot tell apart.
    pub nontransversal_note: bool,
    /// False when a negative verdict was reached without the smallness
    /// hypothesis and therefore proves nothing.
    pub conclusive: bool,
    pub evidence: Evidence,
}

impl ContactReport {
    pub fn contact(&self) -> bool {
        self.transversal
    }
}

/// Contact report from an already computed polynomial.
pub fn report_from_poly(
    p: QuarticPoly,
    q_inv: &InvariantSet,
    class: QuadricClass,
    smallness: Option<SmallnessVerdict>,
    tol: &Tolerances,
) -> ContactReport {
    let p = with_structural_zeros(&p, structural_zeros(class));
    let disc = discriminants(&p, tol);
    let transversal = disc.transversal();
    let small = smallness.as_ref().is_some_and(|v| v.small);
    let mut evidence = Evidence {
        poly: p,
        coefficient_signs: sign_string(&coefficient_signs(&p)),
        discriminants: disc,
        position: None,
        mismatch: None,
        smallness,
    };
    let region = if transversal {
        Region::Straddling
    } else if small {
        match position_from_poly(&p, class, standard_orientation(q_inv, class)) {
            Ok(m) => {
                let r = m.region;
                evidence.position = Some(m);
                r
            }
            Err(m) => {
                evidence.mismatch = Some(m);
                Region::Indeterminate
            }
        }
    } else {
        Region::Indeterminate
    };
    ContactReport {
        transversal,
        region,
        nontransversal_note: !transversal && disc.s4 == Sign::Zero,
        conclusive: transversal || small,
        evidence,
    }
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn report_from_parts(
    poly: QuarticPoly,
    discriminants: Discriminants,
    transversal: bool,
    region: Region,
    position: Option<PositionMatch>,
    smallness: Option<SmallnessVerdict>,
    conclusive: bool,
) -> ContactReport {
    ContactReport {
        transversal,
        region,
        nontransversal_note: !transversal && discriminants.s4 == Sign::Zero,
        conclusive,
        evidence: Evidence {
            poly,
            coefficient_signs: sign_string(&coefficient_signs(&poly)),
            discriminants,
            position,
            mismatch: None,
            smallness,
        },
    }
}

/// Transversal-contact test between an ellipsoid and a quadric.
///
/// With `require_smallness` the smallness hypothesis is checked first and
/// its failure is an error. Without it, a positive verdict is still sound,
/// but a negative verdict is reported as not conclusive.
pub fn is_transversal_contact(e: &Ellipsoid, q: &Quadric, require_smallness: bool, tol: &Tolerances) -> Result<ContactReport> {
    let inv = invariant_set(q);
    let class = classify_invariants(&inv, tol);
    let smallness = if require_smallness {
        let v = is_small(e, q, tol)?;
        if !v.small {
            return Err(Error::SmallnessViolated {
                piece: None,
                verdict: Box::new(v),
            });
        }
        Some(v)
    } else {
        None
    };
    let p = char_poly(e.quadric(), q);
    Ok(report_from_poly(p, &inv, class, smallness, tol))
}

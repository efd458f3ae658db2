//! Whether an ellipsoid is small with respect to another quadric: no relative
//! placement of the two can make them meet in two separate curves.
//!
//! Two entry points are provided. [`is_small`] works on arbitrary matrices
//! through the reduced-form parameters; [`is_small_standard`] works on the
//! axis parameters of quadrics already in standard position and doubles as a
//! cross-check.
//!
//! The two tables of conditions differ in two rows. For the hyperboloid of two
//! sheets the matrix form checks `c'/(d'c'²)` while the standard form checks
//! `c/a²`. For the hyperbolic cylinder the matrix form checks `M b' ≥ δ'α'`
//! while the standard form checks `a ≥ α`. Both rows are implemented as
//! written; they are not reconciled.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::{reduced_form, QuadricClass, ReducedForm};
use crate::quadric::{Ellipsoid, Quadric};
use crate::tolerance::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmallnessCheck {
    pub name: String,
    pub left: f64,
    pub relation: Relation,
    pub right: f64,
    pub passed: bool,
}

impl SmallnessCheck {
    fn new(name: &str, left: f64, relation: Relation, right: f64, eps_rel: f64) -> Self {
        let (lo, hi) = match relation {
            Relation::AtMost => (left, right),
            Relation::AtLeast => (right, left),
        };
        let band = eps_rel * left.abs().max(right.abs()).max(1.0);
        Self {
            name: name.to_string(),
            left,
            relation,
            right,
            passed: lo <= hi + band,
        }
    }
}

/// `small` is the conjunction of every check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmallnessVerdict {
    pub small: bool,
    pub class: QuadricClass,
    pub checks: Vec<SmallnessCheck>,
}

impl SmallnessVerdict {
    fn from_checks(class: QuadricClass, checks: Vec<SmallnessCheck>) -> Self {
        Self {
            small: checks.iter().all(|c| c.passed),
            class,
            checks,
        }
    }

    pub fn failed_names(&self) -> Vec<String> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect()
    }

    pub fn check(&self, name: &str) -> Option<&SmallnessCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub fn is_small(e: &Ellipsoid, q: &Quadric, tol: &Tolerances) -> Result<SmallnessVerdict> {
    let rf = reduced_form(q, tol)?;
    Ok(is_small_reduced(e.reduced_axes(), e.delta(), &rf, tol))
}

/// Conditions on reduced-form parameters. `e_axes` are `α' ≥ β' ≥ γ'`.
pub fn is_small_reduced(e_axes: [f64; 3], delta: f64, rf: &ReducedForm, tol: &Tolerances) -> SmallnessVerdict {
    use QuadricClass::*;
    use Relation::*;
    let [alpha, _, gamma] = e_axes;
    let size = delta * alpha;
    let shape = gamma / (delta * alpha * alpha);
    let eps = tol.eps_rel;
    let a = rf.a;
    let b = rf.b.unwrap_or(f64::NAN);
    let c = rf.c.unwrap_or(f64::NAN);
    let d = rf.d.unwrap_or(f64::NAN);

    let checks = match rf.class {
        Ellipsoid => vec![
            SmallnessCheck::new("d'c' >= delta'alpha'", d * c, AtLeast, size, eps),
            SmallnessCheck::new("a'/(d'c'^2) <= gamma'/(delta'alpha'^2)", a / (d * c * c), AtMost, shape, eps),
        ],
        HyperboloidOneSheet => vec![
            SmallnessCheck::new("b'd' >= delta'alpha'", b * d, AtLeast, size, eps),
            SmallnessCheck::new("a'/(d'c'^2) <= gamma'/(delta'alpha'^2)", a / (d * c * c), AtMost, shape, eps),
        ],
        HyperboloidTwoSheets => vec![
            SmallnessCheck::new("c'd' >= delta'alpha'", c * d, AtLeast, size, eps),
            SmallnessCheck::new("c'/(d'c'^2) <= gamma'/(delta'alpha'^2)", c / (d * c * c), AtMost, shape, eps),
        ],
        EllipticParaboloid | HyperbolicParaboloid => {
            let l = rf.l.unwrap_or(f64::NAN);
            vec![SmallnessCheck::new("2/(Lb'^2) <= gamma'/(delta'alpha'^2)", 2.0 / (l * b * b), AtMost, shape, eps)]
        }
        EllipticCylinder | HyperbolicCylinder => {
            let m = rf.m.unwrap_or(f64::NAN);
            vec![
                SmallnessCheck::new("Mb' >= delta'alpha'", m * b, AtLeast, size, eps),
                SmallnessCheck::new("a'/(Mb'^2) <= gamma'/(delta'alpha'^2)", a / (m * b * b), AtMost, shape, eps),
            ]
        }
        ParabolicCylinder => vec![SmallnessCheck::new(
            "2/(d'a'^2) <= gamma'/(delta'alpha'^2)",
            2.0 / (d * a * a),
            AtMost,
            shape,
            eps,
        )],
        ParallelPlanes => vec![SmallnessCheck::new("a'd' >= alpha'delta'", a * d, AtLeast, size, eps)],
        SinglePlane | Cone | IntersectingPlanes | Other => unreachable!("reduced form exists only for supported classes"),
    };
    SmallnessVerdict::from_checks(rf.class, checks)
}

/// A quadric in standard position, described by its axis parameters.
///
/// Unused parameters are ignored. Equations, with `a ≥ b` where both appear
/// (except the hyperbolic cylinder, which has no ordering):
///
/// | class | equation |
/// |---|---|
/// | ellipsoid | `x²/a² + y²/b² + z²/c² = 1`, `a ≥ b ≥ c` |
/// | hyperboloid, one sheet | `x²/a² + y²/b² - z²/c² = 1` |
/// | hyperboloid, two sheets | `x²/a² + y²/b² - z²/c² = -1` |
/// | elliptic paraboloid | `x²/a² + y²/b² - z = 0` |
/// | hyperbolic paraboloid | `x²/a² - y²/b² - z = 0` |
/// | elliptic cylinder | `x²/a² + y²/b² = 1` |
/// | hyperbolic cylinder | `x²/a² - y²/b² = 1` |
/// | parabolic cylinder | `x²/a² - z = 0` |
/// | parallel planes | `x²/a² - 1 = 0` |
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StandardQuadric {
    pub class: QuadricClass,
    pub a: f64,
    #[serde(default)]
    pub b: f64,
    #[serde(default)]
    pub c: f64,
}

impl StandardQuadric {
    pub fn new(class: QuadricClass, a: f64, b: f64, c: f64) -> Self {
        Self { class, a, b, c }
    }

    /// The homogeneous matrix of the standard equation.
    pub fn quadric(&self) -> Result<Quadric> {
        use QuadricClass::*;
        let ia = 1.0 / (self.a * self.a);
        let ib = 1.0 / (self.b * self.b);
        let ic = 1.0 / (self.c * self.c);
        let diag = |d: [f64; 3], b3: f64, c: f64| Quadric::new([d[0], d[1], d[2], 0.0, 0.0, 0.0], [0.0, 0.0, b3], c);
        match self.class {
            Ellipsoid => diag([ia, ib, ic], 0.0, -1.0),
            HyperboloidOneSheet => diag([ia, ib, -ic], 0.0, -1.0),
            HyperboloidTwoSheets => diag([ia, ib, -ic], 0.0, 1.0),
            EllipticParaboloid => diag([ia, ib, 0.0], -0.5, 0.0),
            HyperbolicParaboloid => diag([ia, -ib, 0.0], -0.5, 0.0),
            EllipticCylinder => diag([ia, ib, 0.0], 0.0, -1.0),
            HyperbolicCylinder => diag([ia, -ib, 0.0], 0.0, -1.0),
            ParabolicCylinder => diag([ia, 0.0, 0.0], -0.5, 0.0),
            ParallelPlanes => diag([ia, 0.0, 0.0], 0.0, -1.0),
            class => Err(Error::UnsupportedClass { class }),
        }
    }
}

fn require(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::BadOrdering(what.to_string()))
    }
}

/// Conditions on standard-form parameters. `e_axes` are the ellipsoid's
/// semi-axes `α ≥ β ≥ γ`.
pub fn is_small_standard(e_axes: [f64; 3], q: &StandardQuadric, tol: &Tolerances) -> Result<SmallnessVerdict> {
    use QuadricClass::*;
    use Relation::*;
    let [alpha, beta, gamma] = e_axes;
    require(e_axes.iter().all(|&v| v > 0.0 && v.is_finite()), "ellipsoid semi-axes must be positive")?;
    require(alpha >= beta && beta >= gamma, "ellipsoid semi-axes must satisfy alpha >= beta >= gamma")?;
    let StandardQuadric { class, a, b, c } = *q;
    let uses_b = !matches!(class, ParabolicCylinder | ParallelPlanes);
    let uses_c = matches!(class, Ellipsoid | HyperboloidOneSheet | HyperboloidTwoSheets);
    require(a > 0.0 && a.is_finite(), "a must be positive")?;
    if uses_b {
        require(b > 0.0 && b.is_finite(), "b must be positive")?;
    }
    if uses_c {
        require(c > 0.0 && c.is_finite(), "c must be positive")?;
    }
    match class {
        Ellipsoid => require(a >= b && b >= c, "ellipsoid requires a >= b >= c")?,
        HyperbolicCylinder => {}
        _ if uses_b => require(a >= b, "requires a >= b")?,
        _ => {}
    }

    let shape = gamma / (alpha * alpha);
    let eps = tol.eps_rel;
    let checks = match class {
        Ellipsoid => vec![
            SmallnessCheck::new("c >= alpha", c, AtLeast, alpha, eps),
            SmallnessCheck::new("a/c^2 <= gamma/alpha^2", a / (c * c), AtMost, shape, eps),
        ],
        HyperboloidOneSheet => vec![
            SmallnessCheck::new("b >= alpha", b, AtLeast, alpha, eps),
            SmallnessCheck::new("a/c^2 <= gamma/alpha^2", a / (c * c), AtMost, shape, eps),
        ],
        HyperboloidTwoSheets => vec![
            SmallnessCheck::new("c >= alpha", c, AtLeast, alpha, eps),
            SmallnessCheck::new("c/a^2 <= gamma/alpha^2", c / (a * a), AtMost, shape, eps),
        ],
        EllipticParaboloid | HyperbolicParaboloid => {
            vec![SmallnessCheck::new("2/b^2 <= gamma/alpha^2", 2.0 / (b * b), AtMost, shape, eps)]
        }
        EllipticCylinder => vec![
            SmallnessCheck::new("b >= alpha", b, AtLeast, alpha, eps),
            SmallnessCheck::new("a/b^2 <= gamma/alpha^2", a / (b * b), AtMost, shape, eps),
        ],
        HyperbolicCylinder => vec![
            SmallnessCheck::new("a >= alpha", a, AtLeast, alpha, eps),
            SmallnessCheck::new("a/b^2 <= gamma/alpha^2", a / (b * b), AtMost, shape, eps),
        ],
        ParabolicCylinder => vec![SmallnessCheck::new("2/a^2 <= gamma/alpha^2", 2.0 / (a * a), AtMost, shape, eps)],
        ParallelPlanes => vec![SmallnessCheck::new("a >= alpha", a, AtLeast, alpha, eps)],
        class => return Err(Error::UnsupportedClass { class }),
    };
    Ok(SmallnessVerdict::from_checks(class, checks))
}

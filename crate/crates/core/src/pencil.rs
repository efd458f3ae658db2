//! The characteristic polynomial `det(λE + Q)` of a pencil of quadrics.

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use crate::linalg::{det4, max_abs4};
use crate::quadric::{Quadric, RigidMotion};

/// `c4 λ⁴ + c3 λ³ + c2 λ² + c1 λ + c0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuarticPoly {
    pub c4: f64,
    pub c3: f64,
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
}

impl QuarticPoly {
    pub fn new(c4: f64, c3: f64, c2: f64, c1: f64, c0: f64) -> Self {
        Self { c4, c3, c2, c1, c0 }
    }

    /// Coefficients from `c4` down to `c0`.
    pub fn from_descending(c: [f64; 5]) -> Self {
        Self::new(c[0], c[1], c[2], c[3], c[4])
    }

    pub fn descending(&self) -> [f64; 5] {
        [self.c4, self.c3, self.c2, self.c1, self.c0]
    }

    /// `c[k]` is the coefficient of `λᵏ`.
    pub fn ascending(&self) -> [f64; 5] {
        [self.c0, self.c1, self.c2, self.c3, self.c4]
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        (((self.c4 * x + self.c3) * x + self.c2) * x + self.c1) * x + self.c0
    }

    /// `λ⁴ p(1/λ)`: the polynomial of the pencil with its arguments swapped.
    pub fn reversed(&self) -> Self {
        Self::new(self.c0, self.c1, self.c2, self.c3, self.c4)
    }

    pub fn max_abs(&self) -> f64 {
        self.descending().iter().fold(0.0, |m: f64, c| m.max(c.abs()))
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self::from_descending(self.descending().map(|c| c * k))
    }

    /// Expands `lead · Π (λ - r)` over real roots.
    pub fn from_roots(lead: f64, roots: [f64; 4]) -> Self {
        let mut c = [lead, 0.0, 0.0, 0.0, 0.0];
        for (n, r) in roots.iter().enumerate() {
            for k in (1..=n + 1).rev() {
                c[k] -= r * c[k - 1];
            }
        }
        Self::from_descending(c)
    }
}

pub fn eval_quartic(p: &QuarticPoly, x: f64) -> f64 {
    p.eval(x)
}

fn power_of_two_scale(m: &Matrix4<f64>) -> f64 {
    let s = max_abs4(m);
    if s == 0.0 {
        1.0
    } else {
        2f64.powi(-(s.log2().round() as i32))
    }
}

/// Coefficients of `det(λE + Q)`.
///
/// Both surfaces are first translated together to the canonical origin of
/// `e`. The determinant is sampled at `λ ∈ {-2, -1, 0, 1, 2}` and interpolated
/// with a fixed exact inverse. Both matrices are first rescaled by powers of
/// two so their largest entries are near one; the rescaling is exact and is
/// undone coefficient by coefficient.
pub fn char_poly(e: &Quadric, q: &Quadric) -> QuarticPoly {
    // A shared translation leaves the polynomial unchanged and keeps the
    // entries small when both surfaces are far from the origin.
    let shift = RigidMotion::translation(-e.canonical_origin(1e-12));
    let em = e.transform(&shift).matrix();
    let qm = q.transform(&shift).matrix();
    let se = power_of_two_scale(&em);
    let sq = power_of_two_scale(&qm);
    let (em, qm) = (em * se, qm * sq);

    let f = |l: f64| det4(&(em * l + qm));
    let (fm2, fm1, f0, f1, f2) = (f(-2.0), f(-1.0), f(0.0), f(1.0), f(2.0));

    let e1 = 0.5 * (f1 + fm1) - f0;
    let e2 = 0.5 * (f2 + fm2) - f0;
    let c4 = (e2 - 4.0 * e1) / 12.0;
    let c2 = e1 - c4;
    let o1 = 0.5 * (f1 - fm1);
    let o2 = 0.5 * (f2 - fm2);
    let c3 = (o2 - 2.0 * o1) / 6.0;
    let c1 = o1 - c3;

    let unscale = |c: f64, k: i32| c / (se.powi(k) * sq.powi(4 - k));
    QuarticPoly::new(unscale(c4, 4), unscale(c3, 3), unscale(c2, 2), unscale(c1, 1), unscale(f0, 0))
}

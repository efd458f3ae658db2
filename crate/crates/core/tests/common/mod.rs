//! Random configurations shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{Matrix3, Quaternion, UnitQuaternion, Vector3};
use qcontact::invariants::QuadricClass;
use qcontact::smallness::{is_small, StandardQuadric};
use qcontact::{Ellipsoid, Quadric, RigidMotion, Tolerances};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::atomic::{AtomicUsize, Ordering};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform rotation from three uniforms.
pub fn rotation(rng: &mut impl Rng) -> Matrix3<f64> {
    let (u1, u2, u3): (f64, f64, f64) = (rng.random(), rng.random(), rng.random());
    let tau = std::f64::consts::TAU;
    let q = Quaternion::new(
        u1.sqrt() * (tau * u3).cos(),
        (1.0 - u1).sqrt() * (tau * u2).sin(),
        (1.0 - u1).sqrt() * (tau * u2).cos(),
        u1.sqrt() * (tau * u3).sin(),
    );
    UnitQuaternion::from_quaternion(q).to_rotation_matrix().into_inner()
}

pub fn motion(rng: &mut impl Rng, reach: f64) -> RigidMotion {
    let t = Vector3::from_fn(|_, _| rng.random_range(-reach..reach));
    RigidMotion::new(rotation(rng), t).expect("generated rotation is orthonormal")
}

pub fn log_uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

/// Semi-axes `α ≥ β ≥ γ`.
pub fn ellipsoid_axes(rng: &mut impl Rng) -> [f64; 3] {
    let a = rng.random_range(0.3..1.0);
    let b = a * rng.random_range(0.5..1.0);
    let c = b * rng.random_range(0.5..1.0);
    [a, b, c]
}

fn standard_params(rng: &mut impl Rng, class: QuadricClass, alpha: f64) -> StandardQuadric {
    let mut p = [0.0; 3].map(|_| alpha * log_uniform(rng, 0.5, 40.0));
    match class {
        QuadricClass::Ellipsoid => p.sort_by(|x, y| y.total_cmp(x)),
        QuadricClass::HyperbolicCylinder => {}
        _ => {
            if p[0] < p[1] {
                p.swap(0, 1);
            }
        }
    }
    StandardQuadric::new(class, p[0], p[1], p[2])
}

/// Moves `p` onto `f = 0` along the gradient.
pub fn project(q: &Quadric, mut p: Vector3<f64>) -> Option<Vector3<f64>> {
    for _ in 0..100 {
        let f = q.evaluate(&p);
        let g = q.gradient(&p);
        let g2 = g.norm_squared();
        if g2 == 0.0 {
            return None;
        }
        p -= g * (f / g2);
        if f.abs() < 1e-13 * q.scale() {
            return Some(p);
        }
    }
    (q.evaluate(&p).abs() < 1e-10 * q.scale()).then_some(p)
}

/// A surface point of `q` near a random point of a box, and its unit normal
/// pointing into `q > 0`.
pub fn surface_point(rng: &mut impl Rng, q: &Quadric, reach: f64) -> (Vector3<f64>, Vector3<f64>) {
    loop {
        let start = Vector3::from_fn(|_, _| rng.random_range(-reach..reach));
        if let Some(p) = project(q, start) {
            let g = q.gradient(&p);
            if g.norm() > 1e-6 * q.scale() {
                return (p, g.normalize());
            }
        }
    }
}

/// Draws that passed the library's smallness check but failed
/// [`geometrically_small`].
pub static GEOMETRY_REJECTIONS: AtomicUsize = AtomicUsize::new(0);

/// Definition-level smallness for standard-form parameters: the ellipsoid
/// fits every gap of the quadric and its least curvature `γ/α²` bounds the
/// largest principal curvature of the quadric.
///
/// Stricter than the library's table check, which misses the throat and
/// vertex curvatures of the hyperboloids and uses the wrong semi-axis for
/// the hyperbolic-cylinder gap.
pub fn geometrically_small(s: &StandardQuadric, axes: [f64; 3]) -> bool {
    use QuadricClass::*;
    let [alpha, _, gamma] = axes;
    let (a, b, c) = (s.a, s.b, s.c);
    let (gap, kappa) = match s.class {
        Ellipsoid => (c, a / (c * c)),
        HyperboloidOneSheet => (b, (a / (b * b)).max(a / (c * c))),
        HyperboloidTwoSheets => (c, (c / (a * a)).max(c / (b * b))),
        EllipticParaboloid | HyperbolicParaboloid => (f64::INFINITY, 2.0 / (a.min(b) * a.min(b))),
        EllipticCylinder => (b, a / (b * b)),
        HyperbolicCylinder => (a, a / (b * b)),
        ParabolicCylinder => (f64::INFINITY, 2.0 / (a * a)),
        ParallelPlanes => (a, 0.0),
        _ => return false,
    };
    gap >= alpha && kappa <= gamma / (alpha * alpha)
}

/// A configuration in standard frame before any rigid motion.
#[derive(Clone, Debug)]
pub struct Config {
    pub class: QuadricClass,
    pub standard: StandardQuadric,
    pub ellipsoid: Ellipsoid,
    pub quadric: Quadric,
    /// Sign applied to the standard matrix before storage.
    pub orientation: f64,
    /// Offset of the ellipsoid center along the surface normal, in units of
    /// its largest semi-axis. Positive means the `q > 0` side in standard
    /// orientation.
    pub offset: f64,
}

/// A small ellipsoid placed near the surface of a quadric of `class`.
///
/// The center sits at a normal offset of `|s| ∈ [lo, hi)` times `α` from a
/// surface point, on side `side` (`±1`) or on a random side.
/// Both surfaces are then moved by one random rigid motion and the quadric
/// matrix is rescaled by a random factor of random sign.
pub fn small_config(rng: &mut impl Rng, class: QuadricClass, lo: f64, hi: f64, side: Option<f64>) -> Config {
    let tol = Tolerances::default();
    loop {
        let axes = ellipsoid_axes(rng);
        let rot = rotation(rng);
        let probe = Ellipsoid::from_axes(Vector3::zeros(), axes, &rot).unwrap();
        let standard = standard_params(rng, class, axes[0]);
        let q_std = standard.quadric().unwrap();
        let Ok(v) = is_small(&probe, &q_std, &tol) else { continue };
        if !v.small {
            continue;
        }
        if !geometrically_small(&standard, axes) {
            GEOMETRY_REJECTIONS.fetch_add(1, Ordering::Relaxed);
            continue;
        }
        let reach = 2.0 * standard.a.max(standard.b).max(standard.c).max(1.0);
        let (p, n) = surface_point(rng, &q_std, reach);
        let side = side.unwrap_or(if rng.random::<bool>() { 1.0 } else { -1.0 });
        let s = side * rng.random_range(lo..hi);
        let center = p + n * (s * axes[0]);
        let m = motion(rng, 5.0);
        let orientation = if rng.random::<bool>() { 1.0 } else { -1.0 };
        let k = orientation * log_uniform(rng, 0.1, 10.0);
        let quadric = q_std.transform(&m).scaled(k).unwrap();
        let ellipsoid = Ellipsoid::from_axes(m.apply(&center), axes, &(m.rotation() * rot)).unwrap();
        return Config {
            class,
            standard,
            ellipsoid,
            quadric,
            orientation,
            offset: s,
        };
    }
}

/// An ellipsoid tangent to `q` at a random surface point, on the `q > 0`
/// side when `outside`.
pub fn tangent_config(rng: &mut impl Rng, class: QuadricClass, outside: bool) -> (Ellipsoid, Quadric) {
    let tol = Tolerances::default();
    loop {
        let axes = ellipsoid_axes(rng);
        let rot = rotation(rng);
        let probe = Ellipsoid::from_axes(Vector3::zeros(), axes, &rot).unwrap();
        let standard = standard_params(rng, class, axes[0]);
        let q = standard.quadric().unwrap();
        if !is_small(&probe, &q, &tol).is_ok_and(|v| v.small) || !geometrically_small(&standard, axes) {
            continue;
        }
        let reach = 2.0 * standard.a.max(standard.b).max(standard.c).max(1.0);
        let (p, n) = surface_point(rng, &q, reach);
        let n = if outside { n } else { -n };
        // The point of the ellipsoid with outward normal -n sits at p.
        let a_inv = rot * Matrix3::from_diagonal(&Vector3::from(axes.map(|s| s * s))) * rot.transpose();
        let w = a_inv * n;
        let center = p + w / n.dot(&w).sqrt();
        return (Ellipsoid::from_axes(center, axes, &rot).unwrap(), q);
    }
}

/// Roots sign pattern with `+` and `-` swapped, for `λ ↦ -λ`.
pub fn negate_pattern(p: &str) -> String {
    p.chars()
        .rev()
        .map(|c| match c {
            '+' => '-',
            '-' => '+',
            c => c,
        })
        .collect()
}

/// Sign changes in a coefficient sequence, zeros skipped.
pub fn sign_changes(c: &[f64]) -> usize {
    let s: Vec<bool> = c.iter().filter(|v| **v != 0.0).map(|v| *v > 0.0).collect();
    s.windows(2).filter(|w| w[0] != w[1]).count()
}

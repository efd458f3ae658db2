//! Independent checks for the root-free classifier: numeric roots of the
//! characteristic polynomial, and a direct sampling of the quadric's form
//! over the ellipsoid surface. Neither is used by the decision procedures.

use nalgebra::{DMatrix, Matrix4, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pencil::QuarticPoly;
use crate::quadric::{Ellipsoid, Quadric, RigidMotion};

pub const MIN_RESOLUTION: usize = 64;
pub const DEFAULT_RESOLUTION: usize = 512;

fn cluster_radius(r: Complex64) -> f64 {
    1e-5 * (1.0 + r.norm())
}

/// Four roots sorted by real part, then imaginary part. Roots stripped as
/// structural zeros are exactly zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    pub structural_zeros: usize,
}

impl RootSet {
    pub fn is_real(r: &Complex64) -> bool {
        r.im.abs() <= cluster_radius(*r)
    }

    pub fn has_nonreal(&self) -> bool {
        self.roots.iter().any(|r| !Self::is_real(r))
    }

    /// Root signs in ascending order, e.g. `--0+`. `None` if a root is not real.
    pub fn sign_pattern(&self) -> Option<String> {
        if self.has_nonreal() {
            return None;
        }
        let (mut neg, mut zero, mut pos) = (0, 0, 0);
        for r in &self.roots {
            if r.re == 0.0 && r.im == 0.0 {
                zero += 1;
            } else if r.re < 0.0 {
                neg += 1;
            } else {
                pos += 1;
            }
        }
        Some("-".repeat(neg) + &"0".repeat(zero) + &"+".repeat(pos))
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.re).collect()
    }
}

/// All four roots from the companion matrix of the monic polynomial.
///
/// Only exact trailing zeros count as zero roots; a structural zero that
/// picked up rounding in the coefficients shows up as a small root of
/// either sign. [`pencil_roots`] does not have that weakness.
pub fn quartic_roots(p: &QuarticPoly) -> Result<RootSet> {
    let c = p.descending();
    if c[0] == 0.0 || !c.iter().all(|v| v.is_finite()) {
        return Err(Error::LeadingZero);
    }
    let exact = c.iter().rev().take_while(|&&v| v == 0.0).count();
    let m = 4 - exact;
    let mut roots: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); exact];
    if m > 0 {
        // x^m + a_{m-1} x^{m-1} + … + a_0, with a_k = c_{k+exact} / c4
        let mut comp = DMatrix::<f64>::zeros(m, m);
        for i in 1..m {
            comp[(i, i - 1)] = 1.0;
        }
        for k in 0..m {
            comp[(k, m - 1)] = -c[4 - (k + exact)] / c[0];
        }
        roots.extend(comp.complex_eigenvalues().iter().map(|z| polish(p, *z)));
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(RootSet {
        roots,
        structural_zeros: exact,
    })
}

/// Pencil eigenvalues below this fraction of the largest are zero roots.
pub const ZERO_ROOT_REL: f64 = 1e-9;

/// Roots of `det(λE + Q)` as eigenvalues of the pencil itself, without
/// forming the polynomial.
///
/// With `E` centered, `E = S J Sᵀ` where `S = diag(L, √-c)`, `A = L Lᵀ` and
/// `J = diag(1, 1, 1, -1)`, so the roots are the eigenvalues of `-J W` with
/// `W = S⁻¹ Q S⁻ᵀ`. A null vector of `Q` is one of `J W`, so structural zero
/// roots come out at rounding level and are snapped to exact zeros below
/// [`ZERO_ROOT_REL`] times the largest root modulus.
pub fn pencil_roots(e: &Ellipsoid, q: &Quadric) -> Result<RootSet> {
    let shift = RigidMotion::translation(-e.center());
    let ec = e.quadric().transform(&shift);
    let qm = q.transform(&shift).matrix();
    let chol = ec.quadratic_part().cholesky().ok_or(Error::Degenerate { quantity: "ellipsoid quadratic part", value: 0.0 })?;
    let k = -ec.constant();
    if !(k > 0.0) {
        return Err(Error::Degenerate { quantity: "-c at the ellipsoid center", value: k });
    }
    let mut s = Matrix4::<f64>::zeros();
    s.fixed_view_mut::<3, 3>(0, 0).copy_from(&chol.l());
    s[(3, 3)] = k.sqrt();
    // Lower triangular with a positive diagonal.
    let s_inv = s.try_inverse().expect("triangular factor with positive diagonal");
    let w = s_inv * qm * s_inv.transpose();
    let mut jw = w;
    for j in 0..4 {
        jw[(3, j)] = -w[(3, j)];
    }
    let mut roots: Vec<Complex64> = jw.complex_eigenvalues().iter().map(|z| -z).collect();
    let scale = roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut structural_zeros = 0;
    for z in roots.iter_mut() {
        if z.norm() <= ZERO_ROOT_REL * scale {
            *z = Complex64::new(0.0, 0.0);
            structural_zeros += 1;
        }
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(RootSet { roots, structural_zeros })
}

/// One Newton step on the full polynomial when it reduces the residual.
fn polish(p: &QuarticPoly, z: Complex64) -> Complex64 {
    let eval = |z: Complex64| {
        p.descending()
            .iter()
            .fold((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)), |(v, d), &c| (v * z + c, d * z + v))
    };
    let (v, d) = eval(z);
    if d.norm() == 0.0 {
        return z;
    }
    let w = z - v / d;
    if eval(w).0.norm() < v.norm() {
        w
    } else {
        z
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SampleVerdict {
    SeparatedSign,
    MixedSign,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub verdict: SampleVerdict,
    pub min: f64,
    pub max: f64,
    pub min_point: [f64; 3],
    pub max_point: [f64; 3],
    /// Noise floor: values within `±eta` count as zero.
    pub eta: f64,
    pub resolution: usize,
}

impl SampleReport {
    /// Distance of the extremum closest to zero, as a form value.
    pub fn gap(&self) -> f64 {
        if self.min >= 0.0 {
            self.min
        } else if self.max <= 0.0 {
            -self.max
        } else {
            0.0
        }
    }
}

fn direction(theta: f64, phi: f64) -> Vector3<f64> {
    Vector3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos())
}

const REFINE_SEEDS: usize = 6;
const REFINE_STEPS: usize = 60;

/// Pattern search on the unit sphere, starting at `u` with angular step `h`.
/// `sense` is `1` to minimize, `-1` to maximize.
fn refine(f: &dyn Fn(&Vector3<f64>) -> f64, mut u: Vector3<f64>, mut h: f64, sense: f64) -> (f64, Vector3<f64>) {
    let mut best = sense * f(&u);
    for _ in 0..REFINE_STEPS {
        let t1 = if u.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
        let t1 = (t1 - u * u.dot(&t1)).normalize();
        let t2 = u.cross(&t1);
        let mut improved = false;
        for t in [t1, -t1, t2, -t2, (t1 + t2) / 2f64.sqrt(), -(t1 + t2) / 2f64.sqrt(), (t1 - t2) / 2f64.sqrt(), (t2 - t1) / 2f64.sqrt()] {
            let cand = (u * h.cos() + t * h.sin()).normalize();
            let v = sense * f(&cand);
            if v < best {
                best = v;
                u = cand;
                improved = true;
            }
        }
        if !improved {
            h *= 0.5;
            if h < 1e-12 {
                break;
            }
        }
    }
    (sense * best, u)
}

/// Samples `XᵀQX` over the ellipsoid surface on an `n × n` angular grid,
/// then refines the best few minima and maxima by local search.
pub fn sample_intersection(e: &Ellipsoid, q: &Quadric, n: usize) -> SampleReport {
    let n = n.max(MIN_RESOLUTION);
    let f = |u: &Vector3<f64>| q.evaluate(&e.surface_point(u));
    let grid: Vec<(f64, usize, usize)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let theta = std::f64::consts::PI * (i as f64 + 0.5) / n as f64;
            (0..n).map(move |j| {
                let phi = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
                (f(&direction(theta, phi)), i, j)
            })
        })
        .collect();

    let angle = |i: usize, j: usize| {
        direction(
            std::f64::consts::PI * (i as f64 + 0.5) / n as f64,
            2.0 * std::f64::consts::PI * j as f64 / n as f64,
        )
    };
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by(|&a, &b| grid[a].0.total_cmp(&grid[b].0));
    let h = std::f64::consts::PI / n as f64;

    let extremum = |seeds: &[usize], sense: f64| {
        seeds
            .iter()
            .map(|&k| refine(&f, angle(grid[k].1, grid[k].2), h, sense))
            .fold((f64::INFINITY * sense, Vector3::zeros()), |acc, c| if sense * c.0 < sense * acc.0 { c } else { acc })
    };
    let (min, umin) = extremum(&order[..REFINE_SEEDS.min(order.len())], 1.0);
    let (max, umax) = extremum(&order[order.len().saturating_sub(REFINE_SEEDS)..], -1.0);

    let eta = 1e-9 * q.scale();
    let pmin = e.surface_point(&umin);
    let pmax = e.surface_point(&umax);
    SampleReport {
        verdict: if min < -eta && max > eta {
            SampleVerdict::MixedSign
        } else {
            SampleVerdict::SeparatedSign
        },
        min,
        max,
        min_point: [pmin.x, pmin.y, pmin.z],
        max_point: [pmax.x, pmax.y, pmax.z],
        eta,
        resolution: n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pencil::char_poly;
    use crate::plane::Plane;

    fn tol() -> crate::Tolerances {
        crate::Tolerances::default()
    }

    fn close(a: Complex64, re: f64, im: f64) -> bool {
        (a.re - re).abs() < 1e-6 && (a.im - im).abs() < 1e-6
    }

    #[test]
    fn double_real_and_conjugate_pair() {
        let r = quartic_roots(&QuarticPoly::new(-12.0, -12.0, -67.0, -64.0, -16.0)).unwrap();
        let s = 4.0 / 3f64.sqrt();
        assert!(r.has_nonreal());
        let real: Vec<_> = r.roots.iter().filter(|z| RootSet::is_real(z)).collect();
        assert_eq!(real.len(), 2);
        assert!(real.iter().all(|z| (z.re + 0.5).abs() < 1e-6));
        assert!(r.roots.iter().any(|z| close(*z, 0.0, s)));
        assert!(r.roots.iter().any(|z| close(*z, 0.0, -s)));
        assert!(r.sign_pattern().is_none());
    }

    #[test]
    fn quadruple_root() {
        let r = quartic_roots(&QuarticPoly::new(-1.0, -4.0, -6.0, -4.0, -1.0)).unwrap();
        for z in &r.roots {
            assert!((z - Complex64::new(-1.0, 0.0)).norm() < 1e-3, "{z}");
        }
    }

    #[test]
    fn recovers_constructed_roots() {
        let want = [-3.0, -2.0, -1.0, 1.0];
        let r = quartic_roots(&QuarticPoly::from_roots(-1.0, want)).unwrap();
        for (z, w) in r.roots.iter().zip(want) {
            assert!(close(*z, w, 0.0), "{z} vs {w}");
        }
        assert_eq!(r.sign_pattern().unwrap(), "---+");
    }

    #[test]
    fn structural_zeros_stripped() {
        let r = quartic_roots(&QuarticPoly::new(-0.3, -1.5, -0.25, 0.0, 0.0)).unwrap();
        assert_eq!(r.structural_zeros, 2);
        assert_eq!(r.sign_pattern().unwrap(), "--00");
        assert!(matches!(
            quartic_roots(&QuarticPoly::new(0.0, 1.0, 1.0, 1.0, 1.0)),
            Err(Error::LeadingZero)
        ));
    }

    #[test]
    fn pencil_roots_examples() {
        let unit = Ellipsoid::from_quadric(&Quadric::unit_sphere(), &tol()).unwrap();
        let h2s = Quadric::from_coefficients(0.25, 0.25, -0.25, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0).unwrap();
        let r = pencil_roots(&unit, &h2s).unwrap();
        for (z, w) in r.roots.iter().zip([-0.25, -0.25, 0.25, 1.0]) {
            assert!(close(*z, w, 0.0), "{z} vs {w}");
        }

        // Two parallel planes have a double zero root wherever the ellipsoid is.
        let e = Ellipsoid::from_axes(Vector3::new(3.0, -1.0, 7.0), [0.9, 0.5, 0.2], &nalgebra::Matrix3::identity()).unwrap();
        let n = Vector3::new(1.0, 2.0, -2.0) / 3.0;
        let pp = Quadric::from_parts(&(n * n.transpose()), &(-n * 4.0), 15.0).unwrap();
        let r = pencil_roots(&e, &pp).unwrap();
        assert_eq!(r.structural_zeros, 2);
        let p = char_poly(e.quadric(), &pp);
        let bare = quartic_roots(&QuarticPoly::new(p.c4, p.c3, p.c2, 0.0, 0.0)).unwrap();
        assert_eq!(r.sign_pattern(), bare.sign_pattern());
        for (a, b) in r.roots.iter().zip(&bare.roots) {
            assert!((a - b).norm() < 1e-9 * (1.0 + b.norm()), "{a} vs {b}");
        }
    }

    #[test]
    fn sampling_examples() {
        let e = Ellipsoid::from_quadric(
            &Quadric::from_coefficients(2.0, 2.0, 3.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0).unwrap(),
            &tol(),
        )
        .unwrap();
        let paraboloid = Quadric::from_coefficients(1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 4.0, 0.0).unwrap();
        assert_eq!(sample_intersection(&e, &paraboloid, 64).verdict, SampleVerdict::MixedSign);

        let sphere = Ellipsoid::from_quadric(&Quadric::unit_sphere(), &tol()).unwrap();
        let far = Plane::new(Vector3::z(), 10.0).unwrap().quadric();
        let s = sample_intersection(&sphere, &far, 64);
        assert_eq!(s.verdict, SampleVerdict::SeparatedSign);
        assert!(s.max < 0.0);
        assert!((s.max + 9.0).abs() < 1e-9);
    }

    #[test]
    fn sampling_agrees_with_roots_on_probe() {
        let probe = Ellipsoid::from_quadric(
            &Quadric::from_coefficients(1.0, 1.0, 3.0, 0.0, 0.0, 0.0, -3.0, -3.0, -16.5, 108.65).unwrap(),
            &tol(),
        )
        .unwrap();
        let s2 = Quadric::from_coefficients(1.0, 1.0, -0.25, 0.0, 0.0, 0.0, 0.0, 0.0, 0.75, -3.25).unwrap();
        let s = sample_intersection(&probe, &s2, 128);
        assert_eq!(s.verdict, SampleVerdict::SeparatedSign);
        assert!(s.min > 0.0);
        let r = quartic_roots(&char_poly(probe.quadric(), &s2)).unwrap();
        assert_eq!(r.sign_pattern().unwrap(), "-+++");
    }
}

//! Published reference values for a small set of worked configurations.

use approx::assert_relative_eq;
use nalgebra::Vector3;
use qcontact::classifier::discriminants;
use qcontact::oracle::{pencil_roots, quartic_roots, sample_intersection, SampleVerdict};
use qcontact::{
    char_poly, classify, detect_contact, is_small, is_transversal_contact, plane_contact, reduced_form,
    side_of_plane, Ellipsoid, Plane, Quadric, QuadricClass, QuarticPoly, Region, Scene, Sign, Tolerances,
};

fn tol() -> Tolerances {
    Tolerances::default()
}

/// `2x² + 2y² + 3z² = 1`.
fn small_ellipsoid() -> Ellipsoid {
    Ellipsoid::from_quadric(&Quadric::new([2.0, 2.0, 3.0, 0.0, 0.0, 0.0], [0.0; 3], -1.0).unwrap(), &tol()).unwrap()
}

/// `x² + y² + 8z = 0`.
fn paraboloid() -> Quadric {
    Quadric::new([1.0, 1.0, 0.0, 0.0, 0.0, 0.0], [0.0, 0.0, 4.0], 0.0).unwrap()
}

/// `(x-3)² + (y-3)² + 3(z-5.5)² = 0.1`.
fn probe() -> Ellipsoid {
    Ellipsoid::from_quadric(
        &Quadric::new([1.0, 1.0, 3.0, 0.0, 0.0, 0.0], [-3.0, -3.0, -16.5], 108.65).unwrap(),
        &tol(),
    )
    .unwrap()
}

const UPPER_Z: f64 = 8.36291;

/// `x² + y² + 3(z-8.36291)² = 20`.
fn upper_piece() -> Quadric {
    Quadric::new([1.0, 1.0, 3.0, 0.0, 0.0, 0.0], [0.0, 0.0, -3.0 * UPPER_Z], 3.0 * UPPER_Z * UPPER_Z - 20.0).unwrap()
}

/// `x² + y² - 0.25(z-3)² = 1`.
fn lower_piece() -> Quadric {
    Quadric::new([1.0, 1.0, -0.25, 0.0, 0.0, 0.0], [0.0, 0.0, 0.75], -3.25).unwrap()
}

fn cut() -> Plane {
    Plane::new(Vector3::z(), 6.0).unwrap()
}

fn assert_poly(p: &QuarticPoly, want: [f64; 5], rel: f64) {
    for (g, w) in p.descending().iter().zip(want) {
        assert_relative_eq!(*g, w, max_relative = rel, epsilon = 1e-12);
    }
}

#[test]
fn paraboloid_pair_polynomial() {
    let p = char_poly(small_ellipsoid().quadric(), &paraboloid());
    assert_poly(&p, [-12.0, -12.0, -67.0, -64.0, -16.0], 1e-12);
    assert!(p.eval(-0.5).abs() < 1e-12);
    assert_eq!(classify(&paraboloid(), &tol()), QuadricClass::EllipticParaboloid);
}

#[test]
fn paraboloid_pair_discriminants() {
    let p = QuarticPoly::new(-12.0, -12.0, -67.0, -64.0, -16.0);
    let d = discriminants(&p, &tol());
    assert_eq!(d.s4, Sign::Zero);
    assert_eq!(d.s3, Sign::Negative);
}

#[test]
fn paraboloid_pair_roots() {
    let r = quartic_roots(&QuarticPoly::new(-12.0, -12.0, -67.0, -64.0, -16.0)).unwrap();
    let mut re: Vec<f64> = r.roots.iter().filter(|z| z.im.abs() < 1e-6).map(|z| z.re).collect();
    re.sort_by(f64::total_cmp);
    assert_eq!(re.len(), 2);
    for x in re {
        assert!((x + 0.5).abs() < 1e-6, "{:?}", r.roots);
    }
    let im: Vec<f64> = r.roots.iter().filter(|z| z.im.abs() > 1e-6).map(|z| z.im.abs()).collect();
    for y in im {
        assert_relative_eq!(y, 4.0 / 3f64.sqrt(), max_relative = 1e-9);
    }
}

#[test]
fn paraboloid_pair_is_transversal() {
    let r = is_transversal_contact(&small_ellipsoid(), &paraboloid(), true, &tol()).unwrap();
    assert!(r.transversal);
    assert_eq!(r.region, Region::Straddling);
    let s = sample_intersection(&small_ellipsoid(), &paraboloid(), 64);
    assert_eq!(s.verdict, SampleVerdict::MixedSign);
}

#[test]
fn probe_invariants() {
    let e = probe();
    assert_relative_eq!(e.quadric().matrix().determinant(), -0.3, max_relative = 1e-12);
    let [a, b, c] = e.reduced_axes();
    assert_relative_eq!(a, 1.0, max_relative = 1e-12);
    assert_relative_eq!(b, 1.0, max_relative = 1e-12);
    assert_relative_eq!(c, 1.0 / 3f64.sqrt(), max_relative = 1e-12);
    assert_relative_eq!(e.delta(), 1.0 / 10f64.sqrt(), max_relative = 1e-12);
}

#[test]
fn piece_reduced_forms() {
    let top = reduced_form(&upper_piece(), &tol()).unwrap();
    assert_eq!(top.class, QuadricClass::Ellipsoid);
    assert_relative_eq!(top.a, 1.0, max_relative = 1e-9);
    assert_relative_eq!(top.b.unwrap(), 1.0, max_relative = 1e-9);
    assert_relative_eq!(top.c.unwrap(), 1.0 / 3f64.sqrt(), max_relative = 1e-9);
    assert_relative_eq!(top.d.unwrap(), 20f64.sqrt(), max_relative = 1e-6);

    let lower = reduced_form(&lower_piece(), &tol()).unwrap();
    assert_eq!(lower.class, QuadricClass::HyperboloidOneSheet);
    for (g, w) in [(lower.a, 1.0), (lower.b.unwrap(), 1.0), (lower.c.unwrap(), 2.0), (lower.d.unwrap(), 1.0)] {
        assert_relative_eq!(g, w, max_relative = 1e-12);
    }
}

#[test]
fn probe_is_small_for_both_pieces() {
    let cases = [(upper_piece(), 2.58199, 0.67082), (lower_piece(), 1.0, 0.25)];
    for (q, size, shape) in cases {
        let v = is_small(&probe(), &q, &tol()).unwrap();
        assert!(v.small);
        let [first, second] = [&v.checks[0], &v.checks[1]];
        assert_relative_eq!(first.left, size, max_relative = 1e-5);
        assert_relative_eq!(first.right, 0.316228, max_relative = 1e-5);
        assert_relative_eq!(second.left, shape, max_relative = 1e-5);
        assert_relative_eq!(second.right, 1.82574, max_relative = 1e-5);
    }
}

#[test]
fn probe_below_the_cut() {
    let r = plane_contact(&probe(), &cut(), &tol()).unwrap();
    assert_poly(&r.evidence.poly, [-0.3, -1.5, -0.25, 0.0, 0.0], 1e-12);
    assert_relative_eq!(r.evidence.discriminants.d3, 0.121875, max_relative = 1e-12);
    assert_eq!(r.evidence.discriminants.s3, Sign::Positive);
    assert!(!r.transversal);
    assert_eq!(r.region, Region::RMinus);
    assert_eq!(side_of_plane(&cut(), &Vector3::new(3.0, 3.0, 5.5), &tol()), Sign::Negative);
}

#[test]
fn probe_outside_the_lower_piece() {
    let p = char_poly(probe().quadric(), &lower_piece());
    assert_poly(&p, [-0.3, 45.7375, 34.125, -11.6625, 0.25], 1e-12);
    let d = discriminants(&p, &tol());
    assert_relative_eq!(d.d4, 6.90965e8, max_relative = 1e-5);
    assert_eq!(d.s4, Sign::Positive);

    let r = is_transversal_contact(&probe(), &lower_piece(), true, &tol()).unwrap();
    assert!(!r.transversal);
    assert_eq!(r.evidence.coefficient_signs, "-++-+");
    assert_eq!(r.region, Region::RPlus);

    let s = sample_intersection(&probe(), &lower_piece(), 64);
    assert_eq!(s.verdict, SampleVerdict::SeparatedSign);
    assert!(s.min > 0.0);
}

#[test]
fn two_piece_scene() {
    let scene = Scene::new(
        vec![cut()],
        vec![
            qcontact::Zone { signs: "+".into(), quadric: Some(upper_piece()) },
            qcontact::Zone { signs: "-".into(), quadric: Some(lower_piece()) },
        ],
    )
    .unwrap();
    let r = detect_contact(&scene, &probe(), &tol()).unwrap();
    assert_eq!(r.zone.zone, 2);
    assert!(!r.contact && r.conclusive);
    assert_eq!(r.surfaces.len(), 1);
    assert_eq!(r.surfaces[0].zone, 2);
}

/// Sphere against the two-sheet hyperboloid `a = b = c = 2`.
#[test]
fn sphere_and_two_sheets() {
    let h2 = Quadric::new([0.25, 0.25, -0.25, 0.0, 0.0, 0.0], [0.0; 3], 1.0).unwrap();
    let sphere = Ellipsoid::from_quadric(&Quadric::unit_sphere(), &tol()).unwrap();
    let mut roots = pencil_roots(&sphere, &h2).unwrap().real_parts();
    roots.sort_by(f64::total_cmp);
    for (g, w) in roots.iter().zip([-0.25, -0.25, 0.25, 1.0]) {
        assert!((g - w).abs() < 1e-9, "{roots:?}");
    }
    let r = is_transversal_contact(&sphere, &h2, true, &tol()).unwrap();
    assert!(!r.transversal);
    assert_eq!(r.region, Region::RPlus);

    // Touching the vertex from inside the upper sheet.
    let inside = Ellipsoid::from_quadric(&Quadric::sphere(Vector3::new(0.0, 0.0, 3.0), 1.0).unwrap(), &tol()).unwrap();
    let roots = pencil_roots(&inside, &h2).unwrap();
    assert!(roots.real_parts().iter().all(|&x| x < 0.0), "{:?}", roots.roots);
    let r = is_transversal_contact(&inside, &h2, true, &tol()).unwrap();
    assert!(!r.transversal);
    assert_eq!(r.region, Region::RMinus);
}

#[test]
fn sphere_and_plane() {
    let plane = Plane::new(Vector3::z(), 0.0).unwrap();
    let above = Ellipsoid::from_quadric(&Quadric::sphere(Vector3::new(0.0, 0.0, 2.0), 1.0).unwrap(), &tol()).unwrap();
    let mut roots = pencil_roots(&above, &plane.quadric()).unwrap().real_parts();
    roots.sort_by(f64::total_cmp);
    let s = 3f64.sqrt();
    for (g, w) in roots.iter().zip([0.0, 0.0, (2.0 - s) / 2.0, (2.0 + s) / 2.0]) {
        assert!((g - w).abs() < 1e-9, "{roots:?}");
    }
    let r = plane_contact(&above, &plane, &tol()).unwrap();
    assert!(!r.transversal);
    assert_eq!(r.region, Region::RPlus);

    let through = Ellipsoid::from_quadric(&Quadric::unit_sphere(), &tol()).unwrap();
    let r = plane_contact(&through, &plane, &tol()).unwrap();
    let p = r.evidence.poly;
    // -λ²(1 + 4λ²)/4, up to a positive factor.
    assert_relative_eq!(p.c2 / p.c4, 0.25, max_relative = 1e-12);
    assert_eq!((p.c3, p.c1, p.c0), (0.0, 0.0, 0.0));
    assert!(p.c4 < 0.0);
    assert!(r.transversal);
}

/// The unit sphere is not small against a comparable ellipsoid, and a
/// flattened ellipsoid sits exactly on the paraboloid bound.
#[test]
fn smallness_boundary_examples() {
    use qcontact::smallness::{is_small_standard, StandardQuadric};
    let v = is_small_standard([1.0, 1.0, 1.0], &StandardQuadric::new(QuadricClass::Ellipsoid, 3.0, 2.0, 1.0), &tol()).unwrap();
    assert!(!v.small);
    let v = is_small_standard([1.0, 1.0, 0.5], &StandardQuadric::new(QuadricClass::EllipticParaboloid, 2.0, 2.0, 0.0), &tol())
        .unwrap();
    assert!(v.small);
    assert_relative_eq!(v.checks[0].left, v.checks[0].right, max_relative = 1e-12);
}

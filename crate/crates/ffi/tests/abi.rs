use std::ffi::{CStr, CString};
use std::ptr;

use qcontact_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(qc_last_error_message()) }.to_string_lossy().into_owned()
}

fn quadric(a: [f64; 6], b: [f64; 3], c: f64) -> *mut QcQuadric {
    let mut q = ptr::null_mut();
    assert_eq!(unsafe { qc_quadric_from_coefficients(a.as_ptr(), b.as_ptr(), c, &mut q) }, QcStatus::Ok);
    q
}

fn ellipsoid(a: [f64; 6], b: [f64; 3], c: f64) -> *mut QcEllipsoid {
    let q = quadric(a, b, c);
    let mut e = ptr::null_mut();
    assert_eq!(unsafe { qc_ellipsoid_from_quadric(q, ptr::null(), &mut e) }, QcStatus::Ok);
    unsafe { qc_quadric_free(q) };
    e
}

/// A small ellipsoid, `x² + y² + 3z² - 6x - 6y - 33z + 108.65 = 0`.
fn probe() -> *mut QcEllipsoid {
    ellipsoid([1.0, 1.0, 3.0, 0.0, 0.0, 0.0], [-3.0, -3.0, -16.5], 108.65)
}

#[test]
fn version_and_defaults() {
    let v = unsafe { CStr::from_ptr(qc_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
    let t = qc_tolerances_default();
    assert!(t.eps_rel > 0.0 && t.disc_rel > 0.0 && t.orthogonality > 0.0);
}

#[test]
fn classify_and_char_poly() {
    let paraboloid = quadric([1.0, 1.0, 0.0, 0.0, 0.0, 0.0], [0.0, 0.0, 4.0], 0.0);
    let mut class = QcClass::Other;
    assert_eq!(unsafe { qc_classify(paraboloid, ptr::null(), &mut class) }, QcStatus::Ok);
    assert_eq!(class, QcClass::EllipticParaboloid);

    let e = quadric([2.0, 2.0, 3.0, 0.0, 0.0, 0.0], [0.0; 3], -1.0);
    let mut c = [0.0; 5];
    assert_eq!(unsafe { qc_char_poly(e, paraboloid, c.as_mut_ptr()) }, QcStatus::Ok);
    for (g, w) in c.iter().zip([-12.0, -12.0, -67.0, -64.0, -16.0]) {
        assert!((g - w).abs() < 1e-9, "{c:?}");
    }

    let mut d = QcDiscriminants { d3: 0.0, d4: 1.0, s3: 9, s4: 9 };
    assert_eq!(unsafe { qc_discriminants(c.as_ptr(), ptr::null(), &mut d) }, QcStatus::Ok);
    assert_eq!((d.s3, d.s4), (-1, 0));
    unsafe {
        qc_quadric_free(e);
        qc_quadric_free(paraboloid);
    }
}

#[test]
fn contact_through_handles() {
    let e = ellipsoid([2.0, 2.0, 3.0, 0.0, 0.0, 0.0], [0.0; 3], -1.0);
    let paraboloid = quadric([1.0, 1.0, 0.0, 0.0, 0.0, 0.0], [0.0, 0.0, 4.0], 0.0);
    let mut r = QcContact {
        transversal: false,
        region: QcRegion::Indeterminate,
        conclusive: false,
        poly: [0.0; 5],
    };
    assert_eq!(unsafe { qc_contact(e, paraboloid, false, ptr::null(), &mut r) }, QcStatus::Ok);
    assert!(r.transversal && r.conclusive);
    assert_eq!(r.region, QcRegion::Straddling);

    // The ellipsoid is far too large for a sharp paraboloid.
    let sharp = quadric([100.0, 100.0, 0.0, 0.0, 0.0, 0.0], [0.0, 0.0, -0.5], 0.0);
    assert_eq!(unsafe { qc_contact(e, sharp, true, ptr::null(), &mut r) }, QcStatus::SmallnessViolated);
    assert!(last_error().contains("smallness"), "{}", last_error());
    unsafe {
        qc_quadric_free(sharp);
        qc_quadric_free(paraboloid);
        qc_ellipsoid_free(e);
    }
}

#[test]
fn plane_contact_sides() {
    let id = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0];
    let mut e = ptr::null_mut();
    assert_eq!(
        unsafe { qc_ellipsoid_from_axes([0.0, 0.0, 2.0].as_ptr(), [1.0, 0.5, 0.25].as_ptr(), id.as_ptr(), &mut e) },
        QcStatus::Ok
    );
    let mut r = QcContact {
        transversal: true,
        region: QcRegion::Indeterminate,
        conclusive: false,
        poly: [0.0; 5],
    };
    let z = [0.0, 0.0, 1.0];
    assert_eq!(unsafe { qc_plane_contact(e, z.as_ptr(), 0.0, ptr::null(), &mut r) }, QcStatus::Ok);
    assert!(!r.transversal);
    assert_eq!(r.region, QcRegion::RPlus);
    assert_eq!((r.poly[3], r.poly[4]), (0.0, 0.0));

    assert_eq!(unsafe { qc_plane_contact(e, z.as_ptr(), 2.1, ptr::null(), &mut r) }, QcStatus::Ok);
    assert!(r.transversal);
    unsafe { qc_ellipsoid_free(e) };
}

#[test]
fn scene_round_trip() {
    let json = CString::new(
        r#"{"planes":[{"n":[0,0,1],"d":6}],
            "zones":[{"signs":"+","quadric":{"a":[1,1,3,0,0,0],"b":[0,0,-25.08873],"c":189.814791004}},
                     {"signs":"-","quadric":{"a":[1,1,-0.25,0,0,0],"b":[0,0,0.75],"c":-3.25}}]}"#,
    )
    .unwrap();
    let mut scene = ptr::null_mut();
    assert_eq!(unsafe { qc_scene_from_json(json.as_ptr(), ptr::null(), &mut scene) }, QcStatus::Ok);
    let e = probe();
    let mut r = QcSceneResult {
        zone: 99,
        contact: true,
        conclusive: false,
    };
    for _ in 0..2 {
        assert_eq!(unsafe { qc_scene_detect_contact(scene, e, false, &mut r) }, QcStatus::Ok);
        assert_eq!(r.zone, 2);
        assert!(!r.contact && r.conclusive);
    }
    unsafe {
        qc_ellipsoid_free(e);
        qc_scene_free(scene);
    }
}

#[test]
fn error_codes() {
    let mut q = ptr::null_mut();
    assert_eq!(unsafe { qc_quadric_from_coefficients(ptr::null(), ptr::null(), 0.0, &mut q) }, QcStatus::NullPointer);
    assert!(last_error().contains("null"));

    let bad = CString::new("{\"a\":[1,2]}").unwrap();
    assert_eq!(unsafe { qc_quadric_from_json(bad.as_ptr(), &mut q) }, QcStatus::InvalidInput);
    assert!(q.is_null());

    let zero = [0.0; 6];
    assert_eq!(
        unsafe { qc_quadric_from_coefficients(zero.as_ptr(), [0.0; 3].as_ptr(), 0.0, &mut q) },
        QcStatus::InvalidInput
    );

    let hyperboloid = quadric([1.0, 1.0, -1.0, 0.0, 0.0, 0.0], [0.0; 3], -1.0);
    let mut e = ptr::null_mut();
    assert_eq!(unsafe { qc_ellipsoid_from_quadric(hyperboloid, ptr::null(), &mut e) }, QcStatus::NotAnEllipsoid);
    assert!(e.is_null());

    let t = QcTolerances {
        eps_rel: -1.0,
        ..qc_tolerances_default()
    };
    let mut class = QcClass::Other;
    assert_eq!(unsafe { qc_classify(hyperboloid, &t, &mut class) }, QcStatus::InvalidInput);
    assert!(last_error().contains("eps_rel"));

    let not_rotation = [1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 1.0];
    assert_eq!(
        unsafe { qc_ellipsoid_from_axes([0.0; 3].as_ptr(), [1.0; 3].as_ptr(), not_rotation.as_ptr(), &mut e) },
        QcStatus::InvalidInput
    );

    let empty = CString::new(r#"{"planes":[{"n":[0,0,1],"d":0}],"zones":[{"signs":"+","quadric":null}]}"#).unwrap();
    let mut scene = ptr::null_mut();
    assert_eq!(unsafe { qc_scene_from_json(empty.as_ptr(), ptr::null(), &mut scene) }, QcStatus::Ok);
    let below = probe_below();
    let mut r = QcSceneResult {
        zone: 0,
        contact: false,
        conclusive: false,
    };
    assert_eq!(unsafe { qc_scene_detect_contact(scene, below, false, &mut r) }, QcStatus::NoMatchingZone);
    unsafe {
        qc_ellipsoid_free(below);
        qc_scene_free(scene);
        qc_quadric_free(hyperboloid);
        // Freeing null is a no-op.
        qc_quadric_free(ptr::null_mut());
        qc_ellipsoid_free(ptr::null_mut());
        qc_scene_free(ptr::null_mut());
    }
}

/// A unit sphere centered at `z = -5`.
fn probe_below() -> *mut QcEllipsoid {
    ellipsoid([1.0, 1.0, 1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 5.0], 24.0)
}

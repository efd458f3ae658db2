//! C ABI for `qcontact`.
//!
//! Objects cross the boundary as opaque pointers created by `*_from_*`
//! functions and released by the matching `*_free`. Every fallible call
//! returns a [`QcStatus`]; on failure a message is kept per thread and can be
//! read with [`qc_last_error_message`]. Output parameters are written only on
//! success. A null tolerance pointer selects the defaults.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use qcontact::invariants::QuadricClass;
use nalgebra::{Matrix3, Vector3};
use qcontact::{ContactDetector, Ellipsoid, Error, Plane, Quadric, Region, Scene, Sign, Tolerances};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    NotAnEllipsoid = 3,
    UnsupportedClass = 4,
    SmallnessViolated = 5,
    NoMatchingZone = 6,
    Numerical = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QcClass {
    Ellipsoid = 0,
    HyperboloidOneSheet = 1,
    HyperboloidTwoSheets = 2,
    EllipticParaboloid = 3,
    HyperbolicParaboloid = 4,
    EllipticCylinder = 5,
    HyperbolicCylinder = 6,
    ParabolicCylinder = 7,
    ParallelPlanes = 8,
    SinglePlane = 9,
    Cone = 10,
    IntersectingPlanes = 11,
    Other = 12,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QcRegion {
    RMinus = 0,
    RPlus = 1,
    Straddling = 2,
    Indeterminate = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QcTolerances {
    pub eps_rel: f64,
    pub disc_rel: f64,
    pub orthogonality: f64,
}

/// Discriminants with their banded signs (-1, 0 or 1).
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QcDiscriminants {
    pub d3: f64,
    pub d4: f64,
    pub s3: i8,
    pub s4: i8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QcContact {
    pub transversal: bool,
    pub region: QcRegion,
    /// False when a negative verdict was reached without smallness.
    pub conclusive: bool,
    /// Coefficients of the characteristic polynomial, `c4` first.
    pub poly: [f64; 5],
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QcSceneResult {
    /// 1-based zone id, 0 when the ellipsoid crosses a separating plane.
    pub zone: usize,
    pub contact: bool,
    pub conclusive: bool,
}

/// Opaque quadric.
pub struct QcQuadric(Quadric);

/// Opaque ellipsoid.
pub struct QcEllipsoid(Ellipsoid);

/// Opaque scene with its tolerances fixed at creation. Smallness verdicts
/// are cached per ellipsoid shape across queries.
pub struct QcScene {
    strict: ContactDetector,
    one_sided: ContactDetector,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> QcStatus {
    match e {
        Error::NotAnEllipsoid { .. } => QcStatus::NotAnEllipsoid,
        Error::UnsupportedClass { .. } => QcStatus::UnsupportedClass,
        Error::SmallnessViolated { .. } => QcStatus::SmallnessViolated,
        Error::NoMatchingZone { .. } => QcStatus::NoMatchingZone,
        Error::PatternMismatch(_) | Error::StructuralZero { .. } | Error::LeadingZero => QcStatus::Numerical,
        _ => QcStatus::InvalidInput,
    }
}

struct Fail(QcStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

type Res<T> = Result<T, Fail>;

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Res<()>) -> QcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QcStatus::Ok,
        Ok(Err(Fail(s, m))) => {
            set_error(&m);
            s
        }
        Err(_) => {
            set_error("internal panic");
            QcStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(p: *const T, name: &str) -> Res<&'a T> {
    p.as_ref().ok_or_else(|| Fail(QcStatus::NullPointer, format!("{name} is null")))
}

unsafe fn out<'a, T>(p: *mut T, name: &str) -> Res<&'a mut T> {
    p.as_mut().ok_or_else(|| Fail(QcStatus::NullPointer, format!("{name} is null")))
}

unsafe fn array<const N: usize>(p: *const f64, name: &str) -> Res<[f64; N]> {
    if p.is_null() {
        return Err(Fail(QcStatus::NullPointer, format!("{name} is null")));
    }
    Ok(std::array::from_fn(|i| *p.add(i)))
}

unsafe fn tolerances(p: *const QcTolerances) -> Res<Tolerances> {
    let t = match p.as_ref() {
        None => return Ok(Tolerances::default()),
        Some(t) => Tolerances {
            eps_rel: t.eps_rel,
            disc_rel: t.disc_rel,
            orthogonality: t.orthogonality,
        },
    };
    t.validate().map_err(|m| Fail(QcStatus::InvalidInput, m))?;
    Ok(t)
}

unsafe fn string<'a>(p: *const c_char, name: &str) -> Res<&'a str> {
    if p.is_null() {
        return Err(Fail(QcStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Fail(QcStatus::InvalidInput, format!("{name}: {e}")))
}

fn class_of(c: QuadricClass) -> QcClass {
    match c {
        QuadricClass::Ellipsoid => QcClass::Ellipsoid,
        QuadricClass::HyperboloidOneSheet => QcClass::HyperboloidOneSheet,
        QuadricClass::HyperboloidTwoSheets => QcClass::HyperboloidTwoSheets,
        QuadricClass::EllipticParaboloid => QcClass::EllipticParaboloid,
        QuadricClass::HyperbolicParaboloid => QcClass::HyperbolicParaboloid,
        QuadricClass::EllipticCylinder => QcClass::EllipticCylinder,
        QuadricClass::HyperbolicCylinder => QcClass::HyperbolicCylinder,
        QuadricClass::ParabolicCylinder => QcClass::ParabolicCylinder,
        QuadricClass::ParallelPlanes => QcClass::ParallelPlanes,
        QuadricClass::SinglePlane => QcClass::SinglePlane,
        QuadricClass::Cone => QcClass::Cone,
        QuadricClass::IntersectingPlanes => QcClass::IntersectingPlanes,
        QuadricClass::Other => QcClass::Other,
    }
}

fn region_of(r: Region) -> QcRegion {
    match r {
        Region::RMinus => QcRegion::RMinus,
        Region::RPlus => QcRegion::RPlus,
        Region::Straddling => QcRegion::Straddling,
        Region::Indeterminate => QcRegion::Indeterminate,
    }
}

fn sign_of(s: Sign) -> i8 {
    match s {
        Sign::Negative => -1,
        Sign::Zero => 0,
        Sign::Positive => 1,
    }
}

fn contact_of(r: &qcontact::ContactReport) -> QcContact {
    QcContact {
        transversal: r.transversal,
        region: region_of(r.region),
        conclusive: r.conclusive,
        poly: r.evidence.poly.descending(),
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failure on this thread. Valid until the next failing
/// call on the same thread; empty if there was none.
#[no_mangle]
pub extern "C" fn qc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn qc_tolerances_default() -> QcTolerances {
    let t = Tolerances::default();
    QcTolerances {
        eps_rel: t.eps_rel,
        disc_rel: t.disc_rel,
        orthogonality: t.orthogonality,
    }
}

/// `a` holds `a11 a22 a33 a12 a13 a23`, `b` the linear half-coefficients.
#[no_mangle]
pub unsafe extern "C" fn qc_quadric_from_coefficients(a: *const f64, b: *const f64, c: f64, out_quadric: *mut *mut QcQuadric) -> QcStatus {
    guard(|| {
        let slot = out(out_quadric, "out_quadric")?;
        let q = Quadric::new(array::<6>(a, "a")?, array::<3>(b, "b")?, c)?;
        *slot = Box::into_raw(Box::new(QcQuadric(q)));
        Ok(())
    })
}

/// Parses `{"a":[6 numbers],"b":[3 numbers],"c":number}`.
#[no_mangle]
pub unsafe extern "C" fn qc_quadric_from_json(json: *const c_char, out_quadric: *mut *mut QcQuadric) -> QcStatus {
    guard(|| {
        let slot = out(out_quadric, "out_quadric")?;
        let q: Quadric = serde_json::from_str(string(json, "json")?).map_err(|e| Fail(QcStatus::InvalidInput, e.to_string()))?;
        *slot = Box::into_raw(Box::new(QcQuadric(q)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn qc_quadric_free(q: *mut QcQuadric) {
    if !q.is_null() {
        drop(Box::from_raw(q));
    }
}

#[no_mangle]
pub unsafe extern "C" fn qc_classify(q: *const QcQuadric, tol: *const QcTolerances, out_class: *mut QcClass) -> QcStatus {
    guard(|| {
        let q = get(q, "q")?;
        let t = tolerances(tol)?;
        *out(out_class, "out_class")? = class_of(qcontact::classify(&q.0, &t));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn qc_ellipsoid_from_quadric(q: *const QcQuadric, tol: *const QcTolerances, out_ellipsoid: *mut *mut QcEllipsoid) -> QcStatus {
    guard(|| {
        let q = get(q, "q")?;
        let t = tolerances(tol)?;
        let slot = out(out_ellipsoid, "out_ellipsoid")?;
        *slot = Box::into_raw(Box::new(QcEllipsoid(Ellipsoid::from_quadric(&q.0, &t)?)));
        Ok(())
    })
}

/// `rotation` is row-major; its columns are the axis directions.
#[no_mangle]
pub unsafe extern "C" fn qc_ellipsoid_from_axes(
    center: *const f64,
    semi_axes: *const f64,
    rotation: *const f64,
    out_ellipsoid: *mut *mut QcEllipsoid,
) -> QcStatus {
    guard(|| {
        let slot = out(out_ellipsoid, "out_ellipsoid")?;
        let c = Vector3::from(array::<3>(center, "center")?);
        let r = Matrix3::from_row_slice(&array::<9>(rotation, "rotation")?);
        let e = Ellipsoid::from_axes(c, array::<3>(semi_axes, "semi_axes")?, &r)?;
        *slot = Box::into_raw(Box::new(QcEllipsoid(e)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn qc_ellipsoid_free(e: *mut QcEllipsoid) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// Coefficients of `det(λE + Q)`, `c4` first, into `out_coeffs[5]`.
#[no_mangle]
pub unsafe extern "C" fn qc_char_poly(e: *const QcQuadric, q: *const QcQuadric, out_coeffs: *mut f64) -> QcStatus {
    guard(|| {
        let (e, q) = (get(e, "e")?, get(q, "q")?);
        if out_coeffs.is_null() {
            return Err(Fail(QcStatus::NullPointer, "out_coeffs is null".into()));
        }
        let c = qcontact::char_poly(&e.0, &q.0).descending();
        std::ptr::copy_nonoverlapping(c.as_ptr(), out_coeffs, 5);
        Ok(())
    })
}

/// `coeffs[5]` is `c4` first.
#[no_mangle]
pub unsafe extern "C" fn qc_discriminants(coeffs: *const f64, tol: *const QcTolerances, out_disc: *mut QcDiscriminants) -> QcStatus {
    guard(|| {
        let p = qcontact::QuarticPoly::from_descending(array::<5>(coeffs, "coeffs")?);
        let t = tolerances(tol)?;
        let d = qcontact::classifier::discriminants(&p, &t);
        *out(out_disc, "out_disc")? = QcDiscriminants {
            d3: d.d3,
            d4: d.d4,
            s3: sign_of(d.s3),
            s4: sign_of(d.s4),
        };
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn qc_is_small(e: *const QcEllipsoid, q: *const QcQuadric, tol: *const QcTolerances, out_small: *mut bool) -> QcStatus {
    guard(|| {
        let (e, q) = (get(e, "e")?, get(q, "q")?);
        let t = tolerances(tol)?;
        *out(out_small, "out_small")? = qcontact::is_small(&e.0, &q.0, &t)?.small;
        Ok(())
    })
}

/// Transversal-contact test. With `require_smallness` a failed smallness
/// check is reported as `SmallnessViolated`.
#[no_mangle]
pub unsafe extern "C" fn qc_contact(
    e: *const QcEllipsoid,
    q: *const QcQuadric,
    require_smallness: bool,
    tol: *const QcTolerances,
    out_contact: *mut QcContact,
) -> QcStatus {
    guard(|| {
        let (e, q) = (get(e, "e")?, get(q, "q")?);
        let t = tolerances(tol)?;
        let r = qcontact::is_transversal_contact(&e.0, &q.0, require_smallness, &t)?;
        *out(out_contact, "out_contact")? = contact_of(&r);
        Ok(())
    })
}

/// Ellipsoid against the plane `n · x = d`.
#[no_mangle]
pub unsafe extern "C" fn qc_plane_contact(
    e: *const QcEllipsoid,
    n: *const f64,
    d: f64,
    tol: *const QcTolerances,
    out_contact: *mut QcContact,
) -> QcStatus {
    guard(|| {
        let e = get(e, "e")?;
        let t = tolerances(tol)?;
        let plane = Plane::new(Vector3::from(array::<3>(n, "n")?), d)?;
        let r = qcontact::plane_contact(&e.0, &plane, &t)?;
        *out(out_contact, "out_contact")? = contact_of(&r);
        Ok(())
    })
}

/// Parses `{"planes":[{"n":[3],"d":x}, …],"zones":[{"signs":"+-","quadric":{…}}, …]}`.
#[no_mangle]
pub unsafe extern "C" fn qc_scene_from_json(json: *const c_char, tol: *const QcTolerances, out_scene: *mut *mut QcScene) -> QcStatus {
    guard(|| {
        let slot = out(out_scene, "out_scene")?;
        let t = tolerances(tol)?;
        let s: Scene = serde_json::from_str(string(json, "json")?).map_err(|e| Fail(QcStatus::InvalidInput, e.to_string()))?;
        let s = Scene::with_tolerance(s.planes().to_vec(), s.zones().to_vec(), &t)?;
        *slot = Box::into_raw(Box::new(QcScene {
            strict: ContactDetector::new(s.clone(), t, false),
            one_sided: ContactDetector::new(s, t, true),
        }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn qc_scene_free(s: *mut QcScene) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Scene query. Without `one_sided`, any piece failing smallness is an
/// error; with it, such pieces give inconclusive negative verdicts.
#[no_mangle]
pub unsafe extern "C" fn qc_scene_detect_contact(
    scene: *const QcScene,
    e: *const QcEllipsoid,
    one_sided: bool,
    out_result: *mut QcSceneResult,
) -> QcStatus {
    guard(|| {
        let (s, e) = (get(scene, "scene")?, get(e, "e")?);
        let detector = if one_sided { &s.one_sided } else { &s.strict };
        let r = detector.detect(&e.0)?;
        *out(out_result, "out_result")? = QcSceneResult {
            zone: r.zone.zone,
            contact: r.contact,
            conclusive: r.conclusive,
        };
        Ok(())
    })
}

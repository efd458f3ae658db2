//! Quadrics as symmetric homogeneous 4×4 matrices, rigid motions, and the
//! ellipsoid wrapper used by every contact query.
//!
//! A quadric is the zero set of
//!
//! ```text
//! Σ a_ij x_i x_j + Σ 2 b_i x_i + c = 0,   a_ij = a_ji
//! ```
//!
//! stored as `Q = [[A, b], [bᵀ, c]]` so that the left-hand side equals `XᵀQX`
//! for `X = (x, y, z, 1)`. Note the factor two on the linear terms: the plane
//! `z = 0` is `b = (0, 0, 1/2)`, and an off-diagonal `a_12` contributes
//! `2 a_12 x y`.

use nalgebra::{Matrix3, Matrix4, Rotation3, Unit, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::{classify, reduced_form, QuadricClass};
use crate::linalg::{self, sym3_eigen};
use crate::tolerance::Tolerances;

/// Symmetric homogeneous quadric. Immutable once built.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "QuadricJson", into = "QuadricJson")]
pub struct Quadric {
    /// `[a11, a22, a33, a12, a13, a23]`
    a: [f64; 6],
    b: [f64; 3],
    c: f64,
}

/// Wire form: `{"a":[a11,a22,a33,a12,a13,a23], "b":[b1,b2,b3], "c":c}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuadricJson {
    a: [f64; 6],
    b: [f64; 3],
    c: f64,
}

impl TryFrom<QuadricJson> for Quadric {
    type Error = Error;
    fn try_from(j: QuadricJson) -> Result<Self> {
        Quadric::new(j.a, j.b, j.c)
    }
}

impl From<Quadric> for QuadricJson {
    fn from(q: Quadric) -> Self {
        QuadricJson { a: q.a, b: q.b, c: q.c }
    }
}

impl Quadric {
    pub fn new(a: [f64; 6], b: [f64; 3], c: f64) -> Result<Self> {
        if a.iter().chain(b.iter()).chain(std::iter::once(&c)).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        if a.iter().all(|&v| v == 0.0) && b.iter().all(|&v| v == 0.0) && c == 0.0 {
            return Err(Error::AllZero);
        }
        Ok(Self { a, b, c })
    }

    /// Builds the quadric `Σ a_ij x_i x_j + Σ 2 b_i x_i + c = 0`.
    #[allow(clippy::too_many_arguments)]
    pub fn from_coefficients(
        a11: f64,
        a22: f64,
        a33: f64,
        a12: f64,
        a13: f64,
        a23: f64,
        b1: f64,
        b2: f64,
        b3: f64,
        c: f64,
    ) -> Result<Self> {
        Self::new([a11, a22, a33, a12, a13, a23], [b1, b2, b3], c)
    }

    /// Reads the upper triangle of a 4×4 matrix.
    pub fn from_matrix(m: &Matrix4<f64>) -> Result<Self> {
        Self::new(
            [m[(0, 0)], m[(1, 1)], m[(2, 2)], m[(0, 1)], m[(0, 2)], m[(1, 2)]],
            [m[(0, 3)], m[(1, 3)], m[(2, 3)]],
            m[(3, 3)],
        )
    }

    /// Builds `xᵀAx + 2bᵀx + c` from blocks; `a` is symmetrized.
    pub fn from_parts(a: &Matrix3<f64>, b: &Vector3<f64>, c: f64) -> Result<Self> {
        let s = (a + a.transpose()) * 0.5;
        Self::new(
            [s[(0, 0)], s[(1, 1)], s[(2, 2)], s[(0, 1)], s[(0, 2)], s[(1, 2)]],
            [b[0], b[1], b[2]],
            c,
        )
    }

    pub fn unit_sphere() -> Self {
        Self {
            a: [1.0, 1.0, 1.0, 0.0, 0.0, 0.0],
            b: [0.0; 3],
            c: -1.0,
        }
    }

    /// `|x - center|² = r²`, interior negative.
    pub fn sphere(center: Vector3<f64>, radius: f64) -> Result<Self> {
        Self::new(
            [1.0, 1.0, 1.0, 0.0, 0.0, 0.0],
            [-center.x, -center.y, -center.z],
            center.norm_squared() - radius * radius,
        )
    }

    pub fn coefficients(&self) -> ([f64; 6], [f64; 3], f64) {
        (self.a, self.b, self.c)
    }

    /// The quadratic block `Q₀₀`.
    pub fn quadratic_part(&self) -> Matrix3<f64> {
        let [a11, a22, a33, a12, a13, a23] = self.a;
        Matrix3::new(a11, a12, a13, a12, a22, a23, a13, a23, a33)
    }

    pub fn linear_part(&self) -> Vector3<f64> {
        Vector3::from(self.b)
    }

    pub fn constant(&self) -> f64 {
        self.c
    }

    pub fn matrix(&self) -> Matrix4<f64> {
        let [a11, a22, a33, a12, a13, a23] = self.a;
        let [b1, b2, b3] = self.b;
        Matrix4::new(
            a11, a12, a13, b1, //
            a12, a22, a23, b2, //
            a13, a23, a33, b3, //
            b1, b2, b3, self.c,
        )
    }

    /// Largest absolute matrix entry; the natural scale for relative zero tests.
    pub fn scale(&self) -> f64 {
        self.a
            .iter()
            .chain(self.b.iter())
            .chain(std::iter::once(&self.c))
            .fold(0.0, |m: f64, v| m.max(v.abs()))
    }

    /// `XᵀQX` at `X = (p, 1)`.
    pub fn evaluate(&self, p: &Vector3<f64>) -> f64 {
        let a = self.quadratic_part();
        p.dot(&(a * p)) + 2.0 * self.linear_part().dot(p) + self.c
    }

    pub fn gradient(&self, p: &Vector3<f64>) -> Vector3<f64> {
        2.0 * (self.quadratic_part() * p + self.linear_part())
    }

    pub fn scaled(&self, k: f64) -> Result<Self> {
        let a = self.a.map(|v| v * k);
        let b = self.b.map(|v| v * k);
        Self::new(a, b, self.c * k)
    }

    pub fn negated(&self) -> Self {
        Self {
            a: self.a.map(|v| -v),
            b: self.b.map(|v| -v),
            c: -self.c,
        }
    }

    /// A point that moves the quadric to canonical position when taken as
    /// the origin: its center where one exists, and for paraboloids and
    /// parabolic cylinders a point on the surface along the axis.
    ///
    /// Eigenvalues of the quadratic block below `eps_rel` times the largest
    /// one are treated as zero.
    pub fn canonical_origin(&self, eps_rel: f64) -> Vector3<f64> {
        let a = self.quadratic_part();
        let b = self.linear_part();
        let (mu, v) = sym3_eigen(&a);
        let cut = eps_rel * mu.iter().fold(0.0, |m: f64, x| m.max(x.abs()));
        let mut p = Vector3::zeros();
        let mut b_null = b;
        for i in 0..3 {
            let vi = v.column(i).into_owned();
            let bi = vi.dot(&b);
            if mu[i].abs() > cut {
                p -= vi * (bi / mu[i]);
                b_null -= vi * bi;
            }
        }
        let c = self.c + b.dot(&p);
        let nb = b_null.norm_squared();
        if nb > 0.0 && nb.sqrt() > eps_rel * self.scale() {
            p -= b_null * (c / (2.0 * nb));
        }
        p
    }

    /// The same surface expressed with `canonical_origin` as the origin.
    pub fn centered(&self, eps_rel: f64) -> Self {
        self.transform(&RigidMotion::translation(-self.canonical_origin(eps_rel)))
    }

    /// The quadric `q'` with `q'(m(p)) = q(p)` for every point `p`.
    pub fn transform(&self, m: &RigidMotion) -> Self {
        let r = m.rotation;
        let t = m.translation;
        let a = r * self.quadratic_part() * r.transpose();
        let a = (a + a.transpose()) * 0.5;
        let rb = r * self.linear_part();
        let b = rb - a * t;
        let c = t.dot(&(a * t)) - 2.0 * rb.dot(&t) + self.c;
        Self {
            a: [a[(0, 0)], a[(1, 1)], a[(2, 2)], a[(0, 1)], a[(0, 2)], a[(1, 2)]],
            b: [b[0], b[1], b[2]],
            c,
        }
    }
}

/// Proper rigid motion `p ↦ R p + t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RigidMotion {
    rotation: Matrix3<f64>,
    translation: Vector3<f64>,
}

impl RigidMotion {
    pub fn new(rotation: Matrix3<f64>, translation: Vector3<f64>) -> Result<Self> {
        Self::with_tolerance(rotation, translation, &Tolerances::default())
    }

    pub fn with_tolerance(
        rotation: Matrix3<f64>,
        translation: Vector3<f64>,
        tol: &Tolerances,
    ) -> Result<Self> {
        if rotation.iter().chain(translation.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let gram = rotation.transpose() * rotation - Matrix3::identity();
        let deviation = linalg::max_abs3(&gram).max((rotation.determinant() - 1.0).abs());
        if deviation > tol.orthogonality {
            return Err(Error::InvalidMotion { deviation });
        }
        Ok(Self { rotation, translation })
    }

    pub fn identity() -> Self {
        Self {
            rotation: Matrix3::identity(),
            translation: Vector3::zeros(),
        }
    }

    pub fn translation(t: Vector3<f64>) -> Self {
        Self {
            rotation: Matrix3::identity(),
            translation: t,
        }
    }

    pub fn from_axis_angle(axis: &Vector3<f64>, angle: f64, translation: Vector3<f64>) -> Self {
        let rotation = if axis.norm() == 0.0 {
            Matrix3::identity()
        } else {
            Rotation3::from_axis_angle(&Unit::new_normalize(*axis), angle).into_inner()
        };
        Self { rotation, translation }
    }

    pub fn from_rotation(rotation: Rotation3<f64>, translation: Vector3<f64>) -> Self {
        Self {
            rotation: rotation.into_inner(),
            translation,
        }
    }

    pub fn rotation(&self) -> &Matrix3<f64> {
        &self.rotation
    }

    pub fn translation_vector(&self) -> &Vector3<f64> {
        &self.translation
    }

    pub fn apply(&self, p: &Vector3<f64>) -> Vector3<f64> {
        self.rotation * p + self.translation
    }

    /// `other ∘ self`: first `self`, then `other`.
    pub fn then(&self, other: &RigidMotion) -> RigidMotion {
        RigidMotion {
            rotation: other.rotation * self.rotation,
            translation: other.rotation * self.translation + other.translation,
        }
    }

    pub fn inverse(&self) -> RigidMotion {
        let rt = self.rotation.transpose();
        RigidMotion {
            rotation: rt,
            translation: -(rt * self.translation),
        }
    }

    pub fn homogeneous(&self) -> Matrix4<f64> {
        let mut m = Matrix4::identity();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(&self.rotation);
        m.fixed_view_mut::<3, 1>(0, 3).copy_from(&self.translation);
        m
    }
}

/// An ellipsoid with its matrix sign normalized so that the interior is
/// `XᵀEX < 0` and `A` is positive definite.
///
/// The user's matrix scale is kept: only the overall sign may change, and
/// [`Ellipsoid::sign_flipped`] records whether it did.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ellipsoid {
    quadric: Quadric,
    flipped: bool,
    center: Vector3<f64>,
    /// Unit principal directions as columns, ordered like `semi_axes`.
    axes: Matrix3<f64>,
    semi_axes: [f64; 3],
    reduced_axes: [f64; 3],
    delta: f64,
}

impl Ellipsoid {
    pub fn from_quadric(q: &Quadric, tol: &Tolerances) -> Result<Self> {
        let class = classify(q, tol);
        if class != QuadricClass::Ellipsoid {
            return Err(Error::NotAnEllipsoid { class });
        }
        let flipped = q.quadratic_part().trace() < 0.0;
        let quadric = if flipped { q.negated() } else { *q };
        let reduced = reduced_form(&quadric, tol)?;
        let (alpha, beta, gamma) = (reduced.a, reduced.b.unwrap_or(reduced.a), reduced.c.unwrap_or(reduced.a));
        let delta = reduced.d.ok_or(Error::Degenerate { quantity: "delta'^2", value: 0.0 })?;

        let a = quadric.quadratic_part();
        let center = a
            .lu()
            .solve(&(-quadric.linear_part()))
            .ok_or(Error::Degenerate { quantity: "det(A)", value: 0.0 })?;

        // Ascending eigenvalues go with descending semi-axes.
        let (_, vecs) = sym3_eigen(&a);
        let axes = Matrix3::from_columns(&[vecs.column(2), vecs.column(1), vecs.column(0)]);

        Ok(Self {
            quadric,
            flipped,
            center,
            axes,
            semi_axes: [alpha * delta, beta * delta, gamma * delta],
            reduced_axes: [alpha, beta, gamma],
            delta,
        })
    }

    /// Ellipsoid with the given center, semi-axes (any order) and orientation;
    /// column `i` of `rotation` is the direction of `semi_axes[i]`.
    pub fn from_axes(center: Vector3<f64>, semi_axes: [f64; 3], rotation: &Matrix3<f64>) -> Result<Self> {
        if semi_axes.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
            return Err(Error::Degenerate {
                quantity: "semi-axis",
                value: semi_axes.iter().cloned().fold(f64::INFINITY, f64::min),
            });
        }
        RigidMotion::new(*rotation, Vector3::zeros())?;
        let d = Matrix3::from_diagonal(&Vector3::from(semi_axes.map(|s| 1.0 / (s * s))));
        let a = rotation * d * rotation.transpose();
        let b = -(a * center);
        let c = center.dot(&(a * center)) - 1.0;
        let q = Quadric::from_parts(&a, &b, c)?;
        Self::from_quadric(&q, &Tolerances::default())
    }

    /// The sign-normalized matrix used in every pencil computation.
    pub fn quadric(&self) -> &Quadric {
        &self.quadric
    }

    pub fn sign_flipped(&self) -> bool {
        self.flipped
    }

    pub fn center(&self) -> &Vector3<f64> {
        &self.center
    }

    pub fn axes(&self) -> &Matrix3<f64> {
        &self.axes
    }

    /// Semi-axis lengths `α ≥ β ≥ γ`.
    pub fn semi_axes(&self) -> [f64; 3] {
        self.semi_axes
    }

    /// `α' ≥ β' ≥ γ'` of the reduced equation `x²/α'² + y²/β'² + z²/γ'² = δ'²`.
    pub fn reduced_axes(&self) -> [f64; 3] {
        self.reduced_axes
    }

    /// `δ'` of the reduced equation.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn transform(&self, m: &RigidMotion) -> Result<Self> {
        Self::from_quadric(&self.quadric.transform(m), &Tolerances::default())
    }

    /// Same shape and orientation, centered at `center`.
    pub fn moved_to(&self, center: &Vector3<f64>) -> Result<Self> {
        self.transform(&RigidMotion::translation(center - self.center))
    }

    /// Surface point for the unit direction `u` in the principal frame.
    pub fn surface_point(&self, u: &Vector3<f64>) -> Vector3<f64> {
        let scaled = Vector3::new(u.x * self.semi_axes[0], u.y * self.semi_axes[1], u.z * self.semi_axes[2]);
        self.center + self.axes * scaled
    }
}

//! Contact detection between an ellipsoid and a quadric surface.
//!
//! The two surfaces cross iff the characteristic polynomial `det(λE + Q)` of
//! their pencil has non-real roots, provided the ellipsoid is small with
//! respect to the quadric. The decision uses only discriminant signs and the
//! coefficient sign pattern; no root is ever computed outside [`oracle`].

pub mod classifier;
pub mod cli;
pub mod error;
pub mod invariants;
pub mod linalg;
pub mod oracle;
pub mod pencil;
pub mod plane;
pub mod quadric;
pub mod scene;
pub mod smallness;
pub mod tolerance;

pub use classifier::{is_transversal_contact, relative_position, ContactReport, Discriminants, Region};
pub use error::{Error, Result};
pub use invariants::{classify, invariant_set, reduced_form, InvariantSet, QuadricClass, ReducedForm};
pub use pencil::{char_poly, QuarticPoly};
pub use plane::{plane_contact, side_of_plane, Plane};
pub use quadric::{Ellipsoid, Quadric, RigidMotion};
pub use scene::{detect_contact, detect_zone, ContactDetector, Scene, SceneReport, Zone};
pub use smallness::{is_small, SmallnessVerdict};
pub use tolerance::{Sign, Tolerances};

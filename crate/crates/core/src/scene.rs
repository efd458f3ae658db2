//! Composite objects: separating planes cut space into sign-vector zones and
//! each zone holds at most one quadric piece.
//!
//! A query first locates the ellipsoid with one plane test per plane, then
//! checks only the piece of the zone it lies in. When it crosses planes,
//! every zone compatible with the planes it does not cross is checked.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifier::{report_from_poly, ContactReport, Region};
use crate::error::{Error, Result};
use crate::invariants::{classify_invariants, invariant_set, InvariantSet, QuadricClass};
use crate::pencil::char_poly;
use crate::plane::{plane_contact, Plane};
use crate::quadric::{Ellipsoid, Quadric};
use crate::smallness::{is_small, SmallnessVerdict};
use crate::tolerance::{sign_string, Sign, Tolerances};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Zone {
    /// One of `+` or `-` per plane.
    pub signs: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadric: Option<Quadric>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneJson {
    planes: Vec<Plane>,
    #[serde(default)]
    zones: Vec<Zone>,
}

#[derive(Clone, Debug)]
struct Piece {
    quadric: Quadric,
    inv: InvariantSet,
    class: QuadricClass,
}

/// Immutable once built. Zone ids are 1-based positions in [`Scene::zones`].
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "SceneJson", into = "SceneJson")]
pub struct Scene {
    planes: Vec<Plane>,
    zones: Vec<Zone>,
    signs: Vec<Vec<Sign>>,
    pieces: Vec<Option<Piece>>,
}

impl TryFrom<SceneJson> for Scene {
    type Error = Error;
    fn try_from(j: SceneJson) -> Result<Self> {
        Scene::new(j.planes, j.zones)
    }
}

impl From<Scene> for SceneJson {
    fn from(s: Scene) -> Self {
        SceneJson {
            planes: s.planes,
            zones: s.zones,
        }
    }
}

/// Every sign vector over `k` planes, `+` before `-`.
fn all_sign_vectors(k: usize) -> Vec<String> {
    (0..1usize << k)
        .map(|i| (0..k).map(|j| if i >> (k - 1 - j) & 1 == 0 { '+' } else { '-' }).collect())
        .collect()
}

impl Scene {
    /// With no zones listed, every sign cell becomes an empty zone, numbered
    /// in lexicographic order with `+` first.
    pub fn new(planes: Vec<Plane>, zones: Vec<Zone>) -> Result<Self> {
        Self::with_tolerance(planes, zones, &Tolerances::default())
    }

    pub fn with_tolerance(planes: Vec<Plane>, mut zones: Vec<Zone>, tol: &Tolerances) -> Result<Self> {
        let k = planes.len();
        if k > 16 {
            return Err(Error::InvalidScene(format!("{k} planes; at most 16 are supported")));
        }
        if zones.is_empty() {
            zones = all_sign_vectors(k)
                .into_iter()
                .map(|signs| Zone { signs, quadric: None })
                .collect();
        }
        let mut signs = Vec::with_capacity(zones.len());
        let mut pieces = Vec::with_capacity(zones.len());
        for (i, z) in zones.iter().enumerate() {
            let v: Vec<Sign> = z
                .signs
                .chars()
                .map(|c| match c {
                    '+' => Ok(Sign::Positive),
                    '-' => Ok(Sign::Negative),
                    _ => Err(Error::InvalidScene(format!("zone {} has sign {c:?}; use + or -", i + 1))),
                })
                .collect::<Result<_>>()?;
            if v.len() != k {
                return Err(Error::InvalidScene(format!(
                    "zone {} has {} signs for {k} planes",
                    i + 1,
                    v.len()
                )));
            }
            if signs.contains(&v) {
                return Err(Error::InvalidScene(format!("zone {} repeats sign vector {}", i + 1, z.signs)));
            }
            signs.push(v);
            pieces.push(match z.quadric {
                None => None,
                Some(q) => {
                    let inv = invariant_set(&q);
                    let class = classify_invariants(&inv, tol);
                    if !class.is_supported() {
                        return Err(Error::InvalidScene(format!("zone {} holds a {class}, which is not supported", i + 1)));
                    }
                    Some(Piece { quadric: q, inv, class })
                }
            });
        }
        Ok(Self {
            planes,
            zones,
            signs,
            pieces,
        })
    }

    pub fn planes(&self) -> &[Plane] {
        &self.planes
    }

    pub fn zones(&self) -> &[Zone] {
        &self.zones
    }

    /// Zone by 1-based id.
    pub fn zone(&self, id: usize) -> Option<&Zone> {
        id.checked_sub(1).and_then(|i| self.zones.get(i))
    }

    fn zone_with_signs(&self, v: &[Sign]) -> Option<usize> {
        self.signs.iter().position(|s| s == v).map(|i| i + 1)
    }

    /// Zones agreeing with `v` wherever `v` is not zero.
    fn compatible_zones(&self, v: &[Sign]) -> Vec<usize> {
        self.signs
            .iter()
            .enumerate()
            .filter(|(_, s)| s.iter().zip(v).all(|(a, b)| *b == Sign::Zero || a == b))
            .map(|(i, _)| i + 1)
            .collect()
    }
}

/// Where the ellipsoid lies. `zone == 0` means it crosses at least one plane.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZoneVerdict {
    pub zone: usize,
    /// Side per plane, `0` where the ellipsoid crosses it.
    pub signs: String,
    /// 0-based indices of crossed planes.
    pub crossed: Vec<usize>,
    /// Zones whose pieces must be checked.
    pub candidates: Vec<usize>,
}

impl ZoneVerdict {
    pub fn straddling(&self) -> bool {
        self.zone == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZoneReport {
    pub verdict: ZoneVerdict,
    pub planes: Vec<ContactReport>,
}

pub fn detect_zone(scene: &Scene, e: &Ellipsoid, tol: &Tolerances) -> Result<ZoneReport> {
    let planes = scene
        .planes
        .iter()
        .map(|p| plane_contact(e, p, tol))
        .collect::<Result<Vec<_>>>()?;
    let v: Vec<Sign> = planes
        .iter()
        .map(|r| match r.region {
            Region::RPlus => Sign::Positive,
            Region::RMinus => Sign::Negative,
            _ => Sign::Zero,
        })
        .collect();
    let crossed: Vec<usize> = v.iter().enumerate().filter(|(_, s)| **s == Sign::Zero).map(|(i, _)| i).collect();
    let verdict = if crossed.is_empty() {
        let zone = scene
            .zone_with_signs(&v)
            .ok_or_else(|| Error::NoMatchingZone { signs: sign_string(&v) })?;
        ZoneVerdict {
            zone,
            signs: sign_string(&v),
            crossed,
            candidates: vec![zone],
        }
    } else {
        ZoneVerdict {
            zone: 0,
            signs: sign_string(&v),
            crossed,
            candidates: scene.compatible_zones(&v),
        }
    };
    Ok(ZoneReport { verdict, planes })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceReport {
    pub zone: usize,
    pub class: QuadricClass,
    pub report: ContactReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SceneReport {
    pub zone: ZoneVerdict,
    pub contact: bool,
    /// False when a piece failed smallness in one-sided mode and no contact
    /// was found.
    pub conclusive: bool,
    pub planes: Vec<ContactReport>,
    pub surfaces: Vec<SurfaceReport>,
    /// Characteristic polynomials computed, in order: `plane i` or `zone i`.
    pub computed: Vec<String>,
}

/// Smallness of one ellipsoid shape against every piece.
type ShapeVerdicts = Arc<Vec<Option<SmallnessVerdict>>>;

/// Reusable query object. Smallness depends only on the ellipsoid's shape,
/// so it is computed once per shape and cached.
pub struct ContactDetector {
    scene: Scene,
    tol: Tolerances,
    one_sided: bool,
    cache: Mutex<HashMap<[String; 4], ShapeVerdicts>>,
}

impl ContactDetector {
    /// `one_sided` accepts pieces that fail smallness; their negative
    /// verdicts are then reported as not conclusive.
    pub fn new(scene: Scene, tol: Tolerances, one_sided: bool) -> Self {
        Self {
            scene,
            tol,
            one_sided,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn scene(&self) -> &Scene {
        &self.scene
    }

    pub fn cached_shapes(&self) -> usize {
        self.cache.lock().expect("cache lock").len()
    }

    fn smallness(&self, e: &Ellipsoid) -> Result<ShapeVerdicts> {
        let [a, b, c] = e.reduced_axes();
        // Rounded so that round-off from the ellipsoid's position does not
        // split one shape into several keys.
        let key = [a, b, c, e.delta()].map(|v| format!("{v:.10e}"));
        if let Some(v) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(v.clone());
        }
        let verdicts = self
            .scene
            .pieces
            .iter()
            .map(|p| p.as_ref().map(|p| is_small(e, &p.quadric, &self.tol)).transpose())
            .collect::<Result<Vec<_>>>()?;
        let verdicts = Arc::new(verdicts);
        self.cache.lock().expect("cache lock").insert(key, verdicts.clone());
        Ok(verdicts)
    }

    pub fn detect(&self, e: &Ellipsoid) -> Result<SceneReport> {
        let small = self.smallness(e)?;
        if !self.one_sided {
            if let Some((i, v)) = small
                .iter()
                .enumerate()
                .find_map(|(i, v)| v.as_ref().filter(|v| !v.small).map(|v| (i, v)))
            {
                return Err(Error::SmallnessViolated {
                    piece: Some(i + 1),
                    verdict: Box::new(v.clone()),
                });
            }
        }

        let ZoneReport { verdict, planes } = detect_zone(&self.scene, e, &self.tol)?;
        let mut computed: Vec<String> = (1..=planes.len()).map(|i| format!("plane {i}")).collect();

        let checked: Vec<usize> = verdict
            .candidates
            .iter()
            .copied()
            .filter(|&z| self.scene.pieces[z - 1].is_some())
            .collect();
        let surfaces: Vec<SurfaceReport> = checked
            .par_iter()
            .map(|&z| {
                let piece = self.scene.pieces[z - 1].as_ref().expect("filtered above");
                let p = char_poly(e.quadric(), &piece.quadric);
                SurfaceReport {
                    zone: z,
                    class: piece.class,
                    report: report_from_poly(p, &piece.inv, piece.class, small[z - 1].clone(), &self.tol),
                }
            })
            .collect();
        computed.extend(checked.iter().map(|z| format!("zone {z}")));

        let contact = surfaces.iter().any(|s| s.report.transversal);
        let conclusive = contact || surfaces.iter().all(|s| s.report.conclusive);
        Ok(SceneReport {
            zone: verdict,
            contact,
            conclusive,
            planes,
            surfaces,
            computed,
        })
    }
}

/// One-off query requiring smallness against every piece.
pub fn detect_contact(scene: &Scene, e: &Ellipsoid, tol: &Tolerances) -> Result<SceneReport> {
    ContactDetector::new(scene.clone(), *tol, false).detect(e)
}

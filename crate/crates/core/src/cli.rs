//! Command-line front end. Every subcommand reads JSON inputs, runs one
//! library operation and writes a report as JSON, text or CSV.
//!
//! Exit codes: 0 success without contact, 10 contact, 2 input or
//! configuration error, 3 smallness violated.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::Vector3;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::classifier::{is_transversal_contact, relative_position, ContactReport, Region};
use crate::error::Error;
use crate::invariants::{classify_invariants, invariant_set, reduced_form_from, InvariantSet, QuadricClass, ReducedForm};
use crate::oracle::{pencil_roots, sample_intersection, RootSet, SampleReport, SampleVerdict, MIN_RESOLUTION};
use crate::pencil::{char_poly, QuarticPoly};
use crate::plane::{plane_contact, Plane};
use crate::quadric::{Ellipsoid, Quadric};
use crate::scene::{ContactDetector, Scene, SceneReport};
use crate::smallness::{is_small, SmallnessVerdict};
use crate::tolerance::Tolerances;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SMALLNESS: i32 = 3;
pub const EXIT_CONTACT: i32 = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "qcontact", version, about = "Ellipsoid–quadric contact detection")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,

    /// Relative band for invariant zero tests.
    #[arg(long, global = true, env = "QCONTACT_EPS_REL")]
    pub eps_rel: Option<f64>,

    /// Relative band for discriminant and coefficient signs.
    #[arg(long, global = true)]
    pub disc_rel: Option<f64>,

    /// Cross-check verdicts against the root and sampling oracles.
    #[arg(long, global = true)]
    pub verify: bool,

    /// Sampling grid resolution per angle.
    #[arg(long, global = true, default_value_t = 512)]
    pub resolution: usize,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    /// Ellipsoid as a quadric JSON file.
    #[arg(long)]
    pub e: PathBuf,
    /// Quadric JSON file.
    #[arg(long)]
    pub q: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Class and reduced form of a quadric.
    Classify {
        /// Quadric JSON file.
        #[arg(long)]
        q: PathBuf,
    },
    /// Rigid-motion invariants of a quadric.
    Invariants {
        /// Quadric JSON file.
        #[arg(long)]
        q: PathBuf,
    },
    /// Smallness of an ellipsoid with respect to a quadric.
    Smallness(PairArgs),
    /// Coefficients of det(λE + Q).
    Charpoly(PairArgs),
    /// Transversal-contact test.
    Contact {
        #[command(flatten)]
        pair: PairArgs,
        /// Skip the smallness check; negative verdicts become inconclusive.
        #[arg(long)]
        no_smallness: bool,
    },
    /// Region of the ellipsoid relative to the quadric.
    Position(PairArgs),
    /// Ellipsoid against a plane.
    Plane {
        /// Ellipsoid as a quadric JSON file.
        #[arg(long)]
        e: PathBuf,
        /// Plane JSON file, `{"n": [x, y, z], "d": d}` for `n·X = d`.
        #[arg(long)]
        plane: PathBuf,
    },
    /// Ellipsoid against a scene of planes and zone pieces.
    Scene {
        /// Scene JSON file with `planes` and `zones`.
        #[arg(long)]
        scene: PathBuf,
        /// Ellipsoid as a quadric JSON file.
        #[arg(long)]
        ellipsoid: PathBuf,
        /// Accept pieces failing smallness; their negative verdicts are inconclusive.
        #[arg(long)]
        one_sided: bool,
    },
    /// Numeric roots and surface sampling for a pair.
    Oracle(PairArgs),
    /// Moves the ellipsoid center along a segment and reports each step.
    Sweep {
        /// Ellipsoid as a quadric JSON file; its center is replaced at each step.
        #[arg(long)]
        e: PathBuf,
        /// Quadric JSON file.
        #[arg(long, conflicts_with = "plane", required_unless_present = "plane")]
        q: Option<PathBuf>,
        /// Plane JSON file, instead of a quadric.
        #[arg(long)]
        plane: Option<PathBuf>,
        /// Start center as x,y,z.
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        from: Vector3<f64>,
        /// End center as x,y,z.
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        to: Vector3<f64>,
        /// Number of steps; both endpoints are included.
        #[arg(long, default_value_t = 100)]
        steps: usize,
    },
}

fn parse_point(s: &str) -> Result<Vector3<f64>, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [x, y, z] if v.iter().all(|c| c.is_finite()) => Ok(Vector3::new(x, y, z)),
        _ => Err(format!("expected three finite numbers x,y,z, got {s:?}")),
    }
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify { .. } => "classify",
            Command::Invariants { .. } => "invariants",
            Command::Smallness(_) => "smallness",
            Command::Charpoly(_) => "charpoly",
            Command::Contact { .. } => "contact",
            Command::Position(_) => "position",
            Command::Plane { .. } => "plane",
            Command::Scene { .. } => "scene",
            Command::Oracle(_) => "oracle",
            Command::Sweep { .. } => "sweep",
        }
    }
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SmallnessViolated { .. } => EXIT_SMALLNESS,
            _ => EXIT_CONFIG,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl RunConfig {
    pub fn tolerances(&self) -> Result<Tolerances, Failure> {
        let mut tol = Tolerances::default();
        for (field, value, slot) in [
            ("--eps-rel", self.eps_rel, &mut tol.eps_rel),
            ("--disc-rel", self.disc_rel, &mut tol.disc_rel),
        ] {
            if let Some(v) = value {
                if !(v.is_finite() && v > 0.0) {
                    return Err(Failure::config(format!("{field} must be positive and finite, got {v}")));
                }
                *slot = v;
            }
        }
        Ok(tol)
    }

    fn validate(&self) -> Result<Tolerances, Failure> {
        if self.resolution < MIN_RESOLUTION {
            return Err(Failure::config(format!(
                "--resolution must be at least {MIN_RESOLUTION}, got {}",
                self.resolution
            )));
        }
        match (&self.command, self.format) {
            (Command::Sweep { steps, .. }, _) if *steps == 0 => return Err(Failure::config("--steps must be at least 1")),
            (Command::Sweep { .. } | Command::Charpoly(_), Format::Csv) | (_, Format::Json | Format::Text) => {}
            (c, Format::Csv) => {
                return Err(Failure::config(format!(
                    "--format csv is only available for sweep and charpoly, not {}",
                    c.name()
                )))
            }
        }
        self.tolerances()
    }
}

fn read_json<T: DeserializeOwned>(path: &Path, field: &str) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::config(format!("{field} {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::config(format!("{field} {}: {e}", path.display())))
}

fn read_ellipsoid(path: &Path, field: &str, tol: &Tolerances) -> Result<Ellipsoid, Failure> {
    let q: Quadric = read_json(path, field)?;
    Ellipsoid::from_quadric(&q, tol).map_err(|e| Failure::config(format!("{field} {}: {e}", path.display())))
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    command: &'a str,
    tolerances: Tolerances,
    result: T,
}

#[derive(Clone, Debug, Serialize, serde::Deserialize)]
pub struct ClassifyResult {
    pub class: QuadricClass,
    pub supported: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduced: Option<ReducedForm>,
}

#[derive(Clone, Debug, Serialize, serde::Deserialize)]
pub struct OracleResult {
    pub poly: QuarticPoly,
    pub roots: RootSet,
    pub root_signs: Option<String>,
    pub sampling: SampleReport,
}

/// Classifier verdict next to both oracles.
#[derive(Clone, Debug, Serialize, serde::Deserialize)]
pub struct Verification {
    pub roots_nonreal: bool,
    pub sampling: SampleVerdict,
    pub agree: bool,
}

#[derive(Clone, Debug, Serialize, serde::Deserialize)]
pub struct ContactResult {
    #[serde(flatten)]
    pub report: ContactReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<Verification>,
}

#[derive(Clone, Debug, PartialEq, Serialize, serde::Deserialize)]
pub struct SweepRow {
    pub step: usize,
    pub cx: f64,
    pub cy: f64,
    pub cz: f64,
    pub c4: f64,
    pub c3: f64,
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
    pub d3: f64,
    pub d4: f64,
    pub verdict: String,
    pub region: Region,
}

fn verdict_word(r: &ContactReport) -> &'static str {
    if r.transversal {
        "contact"
    } else if r.conclusive {
        "no-contact"
    } else {
        "inconclusive"
    }
}

fn verify(e: &Ellipsoid, q: &Quadric, r: &ContactReport, n: usize) -> Result<Verification, Failure> {
    let roots = pencil_roots(e, q)?;
    let sampling = sample_intersection(e, q, n).verdict;
    let agree = roots.has_nonreal() == r.transversal && (sampling == SampleVerdict::MixedSign) == r.transversal;
    Ok(Verification {
        roots_nonreal: roots.has_nonreal(),
        sampling,
        agree,
    })
}

struct Output {
    body: String,
    code: i32,
}

fn emit<T: Serialize>(cfg: &RunConfig, tol: &Tolerances, result: &T, text: impl FnOnce() -> String) -> String {
    match cfg.format {
        Format::Text => text(),
        _ => {
            let env = Envelope {
                command: cfg.command.name(),
                tolerances: *tol,
                result,
            };
            serde_json::to_string_pretty(&env).expect("reports serialize") + "\n"
        }
    }
}

fn fmt_poly(p: &QuarticPoly) -> String {
    let [c4, c3, c2, c1, c0] = p.descending();
    format!("({c4}, {c3}, {c2}, {c1}, {c0})")
}

fn contact_text(r: &ContactReport) -> String {
    let d = &r.evidence.discriminants;
    let mut s = format!(
        "verdict: {}\nregion: {}\npoly: {}\nsigns: {}\ndelta3: {:e}\ndelta4: {:e}\n",
        verdict_word(r),
        r.region,
        fmt_poly(&r.evidence.poly),
        r.evidence.coefficient_signs,
        d.d3,
        d.d4
    );
    if r.nontransversal_note {
        s.push_str("note: delta4 vanishes without transversal contact\n");
    }
    s
}

fn smallness_text(v: &SmallnessVerdict) -> String {
    let mut s = format!("class: {}\nsmall: {}\n", v.class, v.small);
    for c in &v.checks {
        let rel = serde_json::to_value(c.relation).expect("relation serializes");
        s.push_str(&format!(
            "  {} : {} {} {} [{}]\n",
            c.name,
            c.left,
            rel.as_str().unwrap_or("?"),
            c.right,
            if c.passed { "ok" } else { "FAIL" }
        ));
    }
    s
}

fn scene_text(r: &SceneReport) -> String {
    let mut s = format!(
        "zone: {}\nsigns: {}\ncontact: {}\nconclusive: {}\n",
        r.zone.zone, r.zone.signs, r.contact, r.conclusive
    );
    for sr in &r.surfaces {
        s.push_str(&format!("  zone {} ({}): {}\n", sr.zone, sr.class, verdict_word(&sr.report)));
    }
    s.push_str(&format!("computed: {}\n", r.computed.join(", ")));
    s
}

fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from("step,cx,cy,cz,c4,c3,c2,c1,c0,d3,d4,verdict,region\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.step, r.cx, r.cy, r.cz, r.c4, r.c3, r.c2, r.c1, r.c0, r.d3, r.d4, r.verdict, r.region
        ));
    }
    s
}

fn contact_code(contact: bool) -> i32 {
    if contact {
        EXIT_CONTACT
    } else {
        EXIT_OK
    }
}

fn execute(cfg: &RunConfig, tol: &Tolerances) -> Result<Output, Failure> {
    let ok = |body| Ok(Output { body, code: EXIT_OK });
    match &cfg.command {
        Command::Classify { q } => {
            let q: Quadric = read_json(q, "--q")?;
            let inv = invariant_set(&q);
            let class = classify_invariants(&inv, tol);
            let res = ClassifyResult {
                class,
                supported: class.is_supported(),
                reduced: reduced_form_from(&inv, class).ok(),
            };
            ok(emit(cfg, tol, &res, || {
                let mut s = format!("class: {class}\nsupported: {}\n", res.supported);
                if let Some(rf) = &res.reduced {
                    for (k, v) in [("a", Some(rf.a)), ("b", rf.b), ("c", rf.c), ("d", rf.d), ("l", rf.l), ("m", rf.m)] {
                        if let Some(v) = v {
                            s.push_str(&format!("{k}': {v}\n"));
                        }
                    }
                }
                s
            }))
        }
        Command::Invariants { q } => {
            let q: Quadric = read_json(q, "--q")?;
            let inv: InvariantSet = invariant_set(&q);
            ok(emit(cfg, tol, &inv, || {
                format!(
                    "det_q: {}\nmu: {:?}\ntr_q00: {}\ndet_q00: {}\nj: {}\nk: {}\njp: {}\nscale: {}\n",
                    inv.det_q, inv.mu, inv.tr_q00, inv.det_q00, inv.j, inv.k, inv.jp, inv.scale
                )
            }))
        }
        Command::Smallness(p) => {
            let e = read_ellipsoid(&p.e, "--e", tol)?;
            let q: Quadric = read_json(&p.q, "--q")?;
            let v = is_small(&e, &q, tol)?;
            ok(emit(cfg, tol, &v, || smallness_text(&v)))
        }
        Command::Charpoly(p) => {
            let e = read_ellipsoid(&p.e, "--e", tol)?;
            let q: Quadric = read_json(&p.q, "--q")?;
            let poly = char_poly(e.quadric(), &q);
            let body = match cfg.format {
                Format::Csv => {
                    let [c4, c3, c2, c1, c0] = poly.descending();
                    format!("c4,c3,c2,c1,c0\n{c4},{c3},{c2},{c1},{c0}\n")
                }
                _ => emit(cfg, tol, &poly, || fmt_poly(&poly) + "\n"),
            };
            ok(body)
        }
        Command::Contact { pair, no_smallness } => {
            let e = read_ellipsoid(&pair.e, "--e", tol)?;
            let q: Quadric = read_json(&pair.q, "--q")?;
            let report = is_transversal_contact(&e, &q, !no_smallness, tol)?;
            let verification = cfg
                .verify
                .then(|| verify(&e, &q, &report, cfg.resolution))
                .transpose()?;
            let code = contact_code(report.transversal);
            let res = ContactResult { report, verification };
            let body = emit(cfg, tol, &res, || {
                let mut s = contact_text(&res.report);
                if let Some(v) = &res.verification {
                    s.push_str(&format!("oracles agree: {}\n", v.agree));
                }
                s
            });
            Ok(Output { body, code })
        }
        Command::Position(p) => {
            let e = read_ellipsoid(&p.e, "--e", tol)?;
            let q: Quadric = read_json(&p.q, "--q")?;
            let m = relative_position(&q, &char_poly(e.quadric(), &q), tol)?;
            ok(emit(cfg, tol, &m, || {
                format!(
                    "region: {}\nclass: {}\nsigns: {}\nroots: {}\n",
                    m.region, m.class, m.coefficient_signs, m.root_signs
                )
            }))
        }
        Command::Plane { e, plane } => {
            let e = read_ellipsoid(e, "--e", tol)?;
            let plane: Plane = read_json(plane, "--plane")?;
            let report = plane_contact(&e, &plane, tol)?;
            let verification = cfg
                .verify
                .then(|| verify(&e, &plane.quadric(), &report, cfg.resolution))
                .transpose()?;
            let code = contact_code(report.transversal);
            let res = ContactResult { report, verification };
            let body = emit(cfg, tol, &res, || contact_text(&res.report));
            Ok(Output { body, code })
        }
        Command::Scene {
            scene,
            ellipsoid,
            one_sided,
        } => {
            let e = read_ellipsoid(ellipsoid, "--ellipsoid", tol)?;
            let text = std::fs::read_to_string(scene).map_err(|err| Failure::config(format!("--scene {}: {err}", scene.display())))?;
            let json: serde_json::Value = serde_json::from_str(&text).map_err(|err| Failure::config(format!("--scene {}: {err}", scene.display())))?;
            let s: Scene = serde_json::from_value(json.clone()).map_err(|err| Failure::config(format!("--scene {}: {err}", scene.display())))?;
            // Rebuilt so that the classification bands follow the overrides.
            let s = Scene::with_tolerance(s.planes().to_vec(), s.zones().to_vec(), tol)?;
            let report = ContactDetector::new(s, *tol, *one_sided).detect(&e)?;
            let code = contact_code(report.contact);
            let body = emit(cfg, tol, &report, || scene_text(&report));
            Ok(Output { body, code })
        }
        Command::Oracle(p) => {
            let e = read_ellipsoid(&p.e, "--e", tol)?;
            let q: Quadric = read_json(&p.q, "--q")?;
            let poly = char_poly(e.quadric(), &q);
            let roots = pencil_roots(&e, &q)?;
            let res = OracleResult {
                poly,
                root_signs: roots.sign_pattern(),
                roots,
                sampling: sample_intersection(&e, &q, cfg.resolution),
            };
            ok(emit(cfg, tol, &res, || {
                let mut s = format!("poly: {}\nroots:\n", fmt_poly(&res.poly));
                for r in &res.roots.roots {
                    s.push_str(&format!("  {} {:+}i\n", r.re, r.im));
                }
                s.push_str(&format!(
                    "root signs: {}\nsampling: {:?} (min {}, max {})\n",
                    res.root_signs.as_deref().unwrap_or("non-real"),
                    res.sampling.verdict,
                    res.sampling.min,
                    res.sampling.max
                ));
                s
            }))
        }
        Command::Sweep {
            e,
            q,
            plane,
            from,
            to,
            steps,
        } => {
            let e = read_ellipsoid(e, "--e", tol)?;
            let target = match (q, plane) {
                (Some(q), _) => Target::Quadric(read_json(q, "--q")?),
                (None, Some(p)) => Target::Plane(read_json(p, "--plane")?),
                (None, None) => return Err(Failure::config("one of --q or --plane is required")),
            };
            let rows = sweep(&e, &target, from, to, *steps, tol)?;
            let body = match cfg.format {
                Format::Csv => sweep_csv(&rows),
                _ => emit(cfg, tol, &rows, || sweep_csv(&rows)),
            };
            ok(body)
        }
    }
}

enum Target {
    Quadric(Quadric),
    Plane(Plane),
}

fn sweep(e: &Ellipsoid, target: &Target, from: &Vector3<f64>, to: &Vector3<f64>, steps: usize, tol: &Tolerances) -> Result<Vec<SweepRow>, Failure> {
    // Smallness depends only on the shape, so one check covers every step.
    let small = match target {
        Target::Quadric(q) => is_small(e, q, tol).map(|v| v.small).unwrap_or(false),
        Target::Plane(_) => true,
    };
    let rows = (0..=steps)
        .into_par_iter()
        .map(|i| {
            let t = i as f64 / steps as f64;
            let c = from + (to - from) * t;
            let moved = e.moved_to(&c)?;
            let r = match target {
                Target::Quadric(q) => is_transversal_contact(&moved, q, small, tol)?,
                Target::Plane(p) => plane_contact(&moved, p, tol)?,
            };
            let [c4, c3, c2, c1, c0] = r.evidence.poly.descending();
            let d = &r.evidence.discriminants;
            Ok(SweepRow {
                step: i,
                cx: c.x,
                cy: c.y,
                cz: c.z,
                c4,
                c3,
                c2,
                c1,
                c0,
                d3: d.d3,
                d4: d.d4,
                verdict: verdict_word(&r).into(),
                region: r.region,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(rows)
}

/// Runs one invocation, writing the report to `out` and diagnostics to
/// `err`. Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                EXIT_OK
            } else {
                let _ = write!(err, "{e}");
                EXIT_CONFIG
            };
        }
    };
    let result = cfg.validate().and_then(|tol| execute(&cfg, &tol));
    match result {
        Ok(o) => {
            if out.write_all(o.body.as_bytes()).is_err() {
                return EXIT_CONFIG;
            }
            o.code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

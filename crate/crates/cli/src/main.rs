//! Command-line front end for the disjunctive cut library.
//!
//! Instances are JSON documents; results go to stdout as JSON (or CSV for
//! `sample-hull`) with a one-line human summary on stderr. All floats are
//! printed with 17 significant digits so runs are byte-reproducible.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use socdisj_core::cone::{AmbientVector, ConeSpec, DEFAULT_TOL};
use socdisj_core::cut_engine::{CutDescription, CutEngine, CutForm, SeparationResult};
use socdisj_core::disjunction::{normalize, ClassificationReport, Disjunction};
use socdisj_core::error::Error as CoreError;
use socdisj_core::interval::BetaInterval;
use socdisj_core::oracle::{sample_hull_points, verify_validity};
use socdisj_core::porder::{self, POrderCase, POrderSplitInstance};

#[derive(Parser)]
#[command(name = "socdisj", version, about = "Disjunctive cuts on second-order and p-order cones")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the preflight classification report for an instance.
    Classify { file: PathBuf },
    /// Emit the cut family over a uniform multiplier grid.
    Cuts {
        file: PathBuf,
        #[arg(long, default_value_t = 21)]
        beta_grid: usize,
    },
    /// Decide whether a point belongs to the closed convex hull.
    Membership {
        file: PathBuf,
        /// Comma-separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Certify membership or return a most-violated cut.
    Separate {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Sample hull points and check every emitted cut against them.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Write a CSV point cloud labelling grid points by union/hull membership.
    SampleHull {
        file: PathBuf,
        #[arg(long, default_value_t = 50)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

/// CLI failure with its process exit code (2 = bad instance or assumption
/// violation, 3 = numerical failure).
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn instance(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        let code = match e {
            CoreError::Numerical(_) => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

// ---------------------------------------------------------------------------
// Instance documents

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConeDoc {
    #[serde(rename = "type")]
    kind: String,
    n: usize,
    #[serde(default)]
    p: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDocument {
    cone: ConeDoc,
    c1: Vec<f64>,
    c1_0: f64,
    c2: Vec<f64>,
    c2_0: f64,
}

/// A parsed instance: the normalized disjunction plus, on p-order cones, the
/// closed-form case it falls into.
struct Instance {
    d: Disjunction,
    porder: Option<POrderCase>,
}

fn check_coeffs(name: &str, v: &[f64], n: usize) -> CliResult<()> {
    if v.len() != n {
        return Err(Failure::instance(format!("{name}: expected length {n}, got {}", v.len())));
    }
    for (i, x) in v.iter().enumerate() {
        if !x.is_finite() {
            return Err(Failure::instance(format!("{name}[{i}]: non-finite value {x}")));
        }
    }
    Ok(())
}

fn load_instance(path: &PathBuf) -> CliResult<Instance> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::instance(format!("{}: {e}", path.display())))?;
    let doc: InstanceDocument = serde_json::from_str(&text)
        .map_err(|e| Failure::instance(format!("{}: {e}", path.display())))?;

    let n = doc.cone.n;
    let cone = match doc.cone.kind.as_str() {
        "second-order" => {
            if doc.cone.p.is_some() {
                return Err(Failure::instance("cone.p: not allowed for a second-order cone"));
            }
            ConeSpec::second_order(n).map_err(|e| Failure::instance(format!("cone.n: {e}")))?
        }
        "p-order" => {
            let p = doc
                .cone
                .p
                .ok_or_else(|| Failure::instance("cone.p: required for a p-order cone"))?;
            ConeSpec::p_order(n, p).map_err(|e| Failure::instance(format!("cone: {e}")))?
        }
        other => {
            return Err(Failure::instance(format!(
                "cone.type: expected \"second-order\" or \"p-order\", got \"{other}\""
            )))
        }
    };
    check_coeffs("c1", &doc.c1, n)?;
    check_coeffs("c2", &doc.c2, n)?;
    for (name, v) in [("c1_0", doc.c1_0), ("c2_0", doc.c2_0)] {
        if !v.is_finite() {
            return Err(Failure::instance(format!("{name}: non-finite value {v}")));
        }
    }

    let c1 = AmbientVector::new(doc.c1)?;
    let c2 = AmbientVector::new(doc.c2)?;
    let d = normalize(cone, c1, doc.c1_0, c2, doc.c2_0)?;
    let porder = match d.cone() {
        ConeSpec::SecondOrder { .. } => None,
        ConeSpec::POrder { .. } => Some(porder::analyze(&d).map_err(|e| Failure {
            code: 2,
            message: format!("{e}; only elementary splits are supported on p-order cones"),
        })?),
    };
    Ok(Instance { d, porder })
}

fn classification_tol() -> CliResult<f64> {
    match std::env::var("SOCDISJ_TOL") {
        Ok(s) => {
            let t: f64 = s
                .parse()
                .map_err(|_| Failure::instance(format!("SOCDISJ_TOL: not a number: {s:?}")))?;
            if !(t > 0.0) {
                return Err(Failure::instance(format!("SOCDISJ_TOL: must be positive, got {t}")));
            }
            Ok(t)
        }
        Err(_) => Ok(DEFAULT_TOL),
    }
}

fn parse_point(csv: &str, n: usize) -> CliResult<AmbientVector> {
    let coords: Vec<f64> = csv
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Failure::instance(format!("--point: not a number: {s:?}")))
        })
        .collect::<CliResult<_>>()?;
    if coords.len() != n {
        return Err(Failure::instance(format!(
            "--point: expected {n} coordinates, got {}",
            coords.len()
        )));
    }
    Ok(AmbientVector::new(coords)?)
}

// ---------------------------------------------------------------------------
// JSON emission (hand-rolled so floats carry 17 significant digits)

fn g(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".into()
    }
}

fn jvec(v: &AmbientVector) -> String {
    let parts: Vec<String> = v.entries().iter().map(|&x| g(x)).collect();
    format!("[{}]", parts.join(","))
}

fn jinterval(iv: &BetaInterval) -> String {
    match *iv {
        BetaInterval::Empty => "{\"empty\":true}".into(),
        BetaInterval::Range { lo, hi, lo_closed, hi_closed } => format!(
            "{{\"lo\":{},\"hi\":{},\"lo_closed\":{lo_closed},\"hi_closed\":{hi_closed}}}",
            g(lo),
            g(hi)
        ),
    }
}

fn jcut(cut: &CutDescription) -> String {
    let form = match &cut.form {
        CutForm::Linear { coeffs, rhs } => {
            format!("{{\"type\":\"linear\",\"coeffs\":{},\"rhs\":{}}}", jvec(coeffs), g(*rhs))
        }
        CutForm::ConvexRadical { affine, rhs, radical, n } => format!(
            "{{\"type\":\"convex-radical\",\"affine\":{},\"rhs\":{},\"radical\":{},\"n\":{}}}",
            jvec(affine),
            g(*rhs),
            jvec(radical),
            g(*n)
        ),
    };
    format!("{{\"side\":{},\"beta\":{},\"form\":{form}}}", cut.side.index(), g(cut.beta))
}

fn jreport(r: &ClassificationReport) -> String {
    format!(
        "{{\"assumption1_holds\":{},\"containment\":{:?},\"assumption2_holds\":{},\
         \"strict_feasible\":[{},{}],\"hull_is_cone\":{},\"conv_closed\":{:?},\
         \"single_inequality\":{},\"case_tag\":{:?},\"d1\":{},\"d2\":{}}}",
        r.assumption1_holds,
        format!("{:?}", r.containment),
        r.assumption2_holds,
        r.strict_feasible.0,
        r.strict_feasible.1,
        r.hull_is_cone,
        format!("{:?}", r.conv_closed),
        r.single_inequality,
        format!("{:?}", r.case_tag),
        jinterval(&r.d_sets.d1),
        jinterval(&r.d_sets.d2),
    )
}

fn jinstance(d: &Disjunction) -> String {
    let cone = match d.cone() {
        ConeSpec::SecondOrder { dim } => format!("{{\"type\":\"second-order\",\"n\":{dim}}}"),
        ConeSpec::POrder { dim, p } => {
            format!("{{\"type\":\"p-order\",\"n\":{dim},\"p\":{}}}", g(*p))
        }
    };
    format!(
        "{{\"cone\":{cone},\"c1\":{},\"c1_0\":{},\"c2\":{},\"c2_0\":{},\"swapped\":{}}}",
        jvec(d.c1()),
        d.c1_0(),
        jvec(d.c2()),
        d.c2_0(),
        d.swapped()
    )
}

fn jsplit(inst: &POrderSplitInstance) -> String {
    let warn = match inst.conditioning_warning() {
        Some(w) => format!("\"{w}\""),
        None => "null".into(),
    };
    format!(
        "{{\"case\":\"split\",\"i\":{},\"t1\":{},\"t2\":{},\"p\":{},\"warning\":{warn}}}",
        inst.i(),
        g(inst.t1()),
        g(inst.t2()),
        g(inst.p())
    )
}

/// The single closed-form p-order hull cut
/// `|(t1+t2)*x~ - 2*(t2*x_i + 1)*e_i|_p <= (t1+t2)*x_n`.
fn jporder_cut(inst: &POrderSplitInstance) -> String {
    format!(
        "{{\"type\":\"p-radical\",\"p\":{},\"i\":{},\"t1\":{},\"t2\":{}}}",
        g(inst.p()),
        inst.i(),
        g(inst.t1()),
        g(inst.t2())
    )
}

// ---------------------------------------------------------------------------
// Subcommands

fn run(cli: Cli) -> CliResult<()> {
    let tol = classification_tol()?;
    match cli.cmd {
        Cmd::Classify { file } => classify(&file, tol),
        Cmd::Cuts { file, beta_grid } => cuts(&file, beta_grid, tol),
        Cmd::Membership { file, point } => membership(&file, &point, tol),
        Cmd::Separate { file, point } => separate(&file, &point, tol),
        Cmd::Verify { file, samples, seed, tol: tol_flag } => {
            verify(&file, samples, seed, tol_flag.unwrap_or(tol))
        }
        Cmd::SampleHull { file, grid, out } => sample_hull(&file, grid, &out, tol),
    }
}

fn engine_for(inst: &Instance, tol: f64) -> CliResult<CutEngine> {
    Ok(CutEngine::with_tol(inst.d.clone(), tol)?)
}

fn classify(file: &PathBuf, tol: f64) -> CliResult<()> {
    let inst = load_instance(file)?;
    match &inst.porder {
        None => {
            let engine = engine_for(&inst, tol)?;
            let r = engine.report();
            println!(
                "{{\"instance\":{},\"report\":{},\"b1\":[{}],\"b2\":[{}]}}",
                jinstance(&inst.d),
                jreport(r),
                engine.b_sets().b1.iter().map(jinterval).collect::<Vec<_>>().join(","),
                engine.b_sets().b2.iter().map(jinterval).collect::<Vec<_>>().join(","),
            );
            eprintln!(
                "classified: single_inequality={} conv_closed={:?} case={:?}",
                r.single_inequality, r.conv_closed, r.case_tag
            );
        }
        Some(POrderCase::HullIsCone) => {
            println!(
                "{{\"instance\":{},\"porder\":{{\"case\":\"hull-is-cone\"}}}}",
                jinstance(&inst.d)
            );
            eprintln!("classified: p-order, hull equals the cone");
        }
        Some(POrderCase::Split(split)) => {
            println!("{{\"instance\":{},\"porder\":{}}}", jinstance(&inst.d), jsplit(split));
            eprintln!(
                "classified: p-order elementary split i={} t1={} t2={}",
                split.i(),
                split.t1(),
                split.t2()
            );
        }
    }
    Ok(())
}

fn cuts(file: &PathBuf, beta_grid: usize, tol: f64) -> CliResult<()> {
    let inst = load_instance(file)?;
    match &inst.porder {
        None => {
            let engine = engine_for(&inst, tol)?;
            let cuts = engine.cuts(beta_grid)?;
            let body: Vec<String> = cuts.iter().map(jcut).collect();
            println!("{{\"cuts\":[{}]}}", body.join(","));
            eprintln!("emitted {} cuts over a {beta_grid}-point multiplier grid", cuts.len());
        }
        Some(POrderCase::HullIsCone) => {
            println!("{{\"cuts\":[]}}");
            eprintln!("hull equals the cone; no cuts to emit");
        }
        Some(POrderCase::Split(split)) => {
            println!("{{\"cuts\":[{}]}}", jporder_cut(split));
            eprintln!("emitted the closed-form p-order split cut");
        }
    }
    Ok(())
}

fn point_in_hull(inst: &Instance, x: &AmbientVector, tol: f64) -> CliResult<bool> {
    match &inst.porder {
        None => {
            let engine = engine_for(inst, tol)?;
            Ok(engine.membership(x)?)
        }
        Some(POrderCase::HullIsCone) => Ok(inst.d.cone().contains(x, tol)?),
        Some(POrderCase::Split(split)) => {
            if !inst.d.cone().contains(x, tol)? {
                return Ok(false);
            }
            Ok(porder::split_cut_margin(split, x)? >= -tol)
        }
    }
}

fn membership(file: &PathBuf, point: &str, tol: f64) -> CliResult<()> {
    let inst = load_instance(file)?;
    let x = parse_point(point, inst.d.dim())?;
    let member = point_in_hull(&inst, &x, tol)?;
    println!("{{\"point\":{},\"member\":{member}}}", jvec(&x));
    eprintln!("{}", if member { "member of the closed convex hull" } else { "not a member" });
    Ok(())
}

fn separate(file: &PathBuf, point: &str, tol: f64) -> CliResult<()> {
    let inst = load_instance(file)?;
    let x = parse_point(point, inst.d.dim())?;
    match &inst.porder {
        None => {
            let engine = engine_for(&inst, tol)?;
            match engine.separate(&x)? {
                SeparationResult::Member => {
                    println!("{{\"point\":{},\"result\":\"member\"}}", jvec(&x));
                    eprintln!("member; no separating cut exists");
                }
                SeparationResult::OutsideCone { deficit } => {
                    println!(
                        "{{\"point\":{},\"result\":\"outside-cone\",\"deficit\":{}}}",
                        jvec(&x),
                        g(deficit)
                    );
                    eprintln!("point violates the cone itself (deficit {deficit:e})");
                }
                SeparationResult::Separated { cut, violation } => {
                    println!(
                        "{{\"point\":{},\"result\":\"separated\",\"violation\":{},\"cut\":{}}}",
                        jvec(&x),
                        g(violation),
                        jcut(&cut)
                    );
                    eprintln!("separated (violation {violation:e})");
                }
            }
        }
        Some(case) => {
            let cone = inst.d.cone();
            if !cone.contains(&x, tol)? {
                let deficit =
                    socdisj_core::cone::p_norm(x.tilde(), cone.exponent())? - x.height();
                println!(
                    "{{\"point\":{},\"result\":\"outside-cone\",\"deficit\":{}}}",
                    jvec(&x),
                    g(deficit)
                );
                eprintln!("point violates the cone itself (deficit {deficit:e})");
                return Ok(());
            }
            match case {
                POrderCase::HullIsCone => {
                    println!("{{\"point\":{},\"result\":\"member\"}}", jvec(&x));
                    eprintln!("member; hull equals the cone");
                }
                POrderCase::Split(split) => {
                    let margin = porder::split_cut_margin(split, &x)?;
                    if margin >= -tol {
                        println!("{{\"point\":{},\"result\":\"member\"}}", jvec(&x));
                        eprintln!("member; no separating cut exists");
                    } else {
                        println!(
                            "{{\"point\":{},\"result\":\"separated\",\"violation\":{},\"cut\":{}}}",
                            jvec(&x),
                            g(-margin),
                            jporder_cut(split)
                        );
                        eprintln!("separated (violation {:e})", -margin);
                    }
                }
            }
        }
    }
    Ok(())
}

fn verify(file: &PathBuf, samples: usize, seed: u64, tol: f64) -> CliResult<()> {
    let inst = load_instance(file)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (tested, max_violation, worst) = match &inst.porder {
        None => {
            let engine = engine_for(&inst, tol.max(f64::MIN_POSITIVE))?;
            let cuts = engine.cuts(21)?;
            let rep = verify_validity(&inst.d, &cuts, samples, tol, &mut rng)?;
            (rep.samples_tested, rep.max_violation, rep.worst_point)
        }
        Some(POrderCase::HullIsCone) => {
            // Every hull point is a cone point; nothing can be violated.
            (0, 0.0, None)
        }
        Some(POrderCase::Split(split)) => {
            let pts = sample_hull_points(&inst.d, samples, &mut rng)?;
            let mut max_violation = 0.0f64;
            let mut worst = None;
            for x in &pts {
                let violation = -porder::pmain_margin(split, x)?;
                if violation > max_violation {
                    max_violation = violation;
                    worst = Some(x.clone());
                }
            }
            (pts.len(), max_violation, worst)
        }
    };
    let passed = max_violation <= tol;
    let worst_json = worst.as_ref().map(jvec).unwrap_or_else(|| "null".into());
    println!(
        "{{\"samples\":{tested},\"max_violation\":{},\"tol\":{},\"passed\":{passed},\
         \"worst_point\":{worst_json}}}",
        g(max_violation),
        g(tol)
    );
    eprintln!(
        "verify: {} (max violation {max_violation:e} over {tested} hull samples)",
        if passed { "passed" } else { "FAILED" }
    );
    if passed {
        Ok(())
    } else {
        Err(Failure { code: 3, message: "emitted cuts violated on sampled hull points".into() })
    }
}

fn sample_hull(file: &PathBuf, grid: usize, out: &PathBuf, tol: f64) -> CliResult<()> {
    if grid < 2 {
        return Err(Failure::instance(format!("--grid: need at least 2 points, got {grid}")));
    }
    let inst = load_instance(file)?;
    let n = inst.d.dim();
    let cone = inst.d.cone().clone();
    let engine = match inst.porder {
        None => Some(engine_for(&inst, tol)?),
        Some(_) => None,
    };

    // Grid over [-2,2]^(n-1) x [0,3]; hull flags use the closed-form
    // membership test, union flags the raw disjunction.
    let mut csv = String::new();
    for k in 1..=n {
        let _ = write!(csv, "x{k},");
    }
    csv.push_str("in_union,in_hull\n");
    let mut rows = 0usize;
    let mut idx = vec![0usize; n];
    loop {
        let coords: Vec<f64> = idx
            .iter()
            .enumerate()
            .map(|(j, &i)| {
                let t = i as f64 / (grid - 1) as f64;
                if j + 1 == n {
                    3.0 * t
                } else {
                    -2.0 + 4.0 * t
                }
            })
            .collect();
        let x = AmbientVector::new(coords)?;
        let in_cone = cone.contains(&x, tol)?;
        let in_union = in_cone
            && (inst.d.c1().dot(&x) >= inst.d.c1_0() as f64 - tol
                || inst.d.c2().dot(&x) >= inst.d.c2_0() as f64 - tol);
        let in_hull = match &engine {
            Some(engine) => engine.membership(&x)?,
            None => point_in_hull(&inst, &x, tol)?,
        };
        for v in x.entries() {
            let _ = write!(csv, "{},", g(*v));
        }
        let _ = writeln!(csv, "{},{}", in_union as u8, in_hull as u8);
        rows += 1;

        let mut j = n;
        loop {
            if j == 0 {
                break;
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < grid {
                break;
            }
            idx[j] = 0;
        }
        if idx.iter().all(|&i| i == 0) {
            break;
        }
    }
    std::fs::write(out, csv).map_err(|e| Failure::instance(format!("{}: {e}", out.display())))?;
    eprintln!("wrote {rows} rows to {}", out.display());
    Ok(())
}

//! Independent brute-force verifiers used by the test suites and the CLI
//! `verify` subcommand: dual-root evaluation, hull-point sampling, grid
//! minimization of the cut family's one-dimensional functions, and
//! cut-validity reports.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cone::{sample_cone_point, AmbientVector, Membership, Region, DEFAULT_TOL};
use crate::cut_engine::{CutDescription, CutEngine, CutForm};
use crate::disjunction::{boundary_quadratic, normalize, preflight, ClassificationReport, Disjunction, Side};
use crate::error::{Error, Result};

/// Outcome of evaluating a cut list over sampled hull points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub samples_tested: usize,
    pub max_violation: f64,
    pub worst_point: Option<AmbientVector>,
    pub passed: bool,
    pub tol: f64,
}

/// The two roots `tau_-` and `tau_+` of the dual line search behind the
/// side-1 cut: `(u +- sqrt(u^2 + N1(beta) * slack)) / N1(beta)` with
/// `u = (beta*c1 - c2)'x`. Requires `N1(beta) > 0`.
pub fn tau_roots(d: &Disjunction, beta: f64, x: &AmbientVector) -> Result<(f64, f64)> {
    let q = boundary_quadratic(d);
    let n1 = q.a * beta * beta - 2.0 * q.m * beta + q.c;
    if !(n1 > 0.0) {
        return Err(Error::InvalidArgument(format!("N1({beta}) = {n1} is not positive")));
    }
    let u = beta * d.c1().dot(x) - d.c2().dot(x);
    let t = x.tilde_norm2();
    let slack = x.height() * x.height() - t * t;
    let radicand = u * u + n1 * slack;
    if radicand < -1e-12 * (1.0 + u * u) {
        return Err(Error::Numerical(format!("radicand {radicand} negative; x outside the cone?")));
    }
    let root = radicand.max(0.0).sqrt();
    Ok(((u - root) / n1, (u + root) / n1))
}

/// Evaluate the side's `f` at `beta` directly from the instance vectors.
fn f_value(d: &Disjunction, side: Side, beta: f64, x: &AmbientVector) -> f64 {
    let (cs, co) = match side {
        Side::One => (d.c1(), d.c2()),
        Side::Two => (d.c2(), d.c1()),
    };
    let q = boundary_quadratic(d);
    let n = match side {
        Side::One => q.a * beta * beta - 2.0 * q.m * beta + q.c,
        Side::Two => q.c * beta * beta - 2.0 * q.m * beta + q.a,
    };
    let u = beta * cs.dot(x) - co.dot(x);
    let t = x.tilde_norm2();
    let slack = x.height() * x.height() - t * t;
    beta * cs.dot(x) + (u * u + n * slack).max(0.0).sqrt()
}

/// Brute-force minimum of the side's `f` over a uniform grid on its `B` set
/// (unbounded ends clipped at 10^3). Test-only oracle for `inf_f`.
pub fn grid_infimum(d: &Disjunction, x: &AmbientVector, side: Side, grid_points: usize) -> Result<f64> {
    if grid_points < 2 {
        return Err(Error::InvalidArgument("grid needs at least two points".into()));
    }
    let engine = CutEngine::new(d.clone())?;
    if engine.b_sets().side_is_empty(side) {
        return Err(Error::InvalidArgument(format!("B{} is empty", side.index())));
    }
    let mut min = f64::INFINITY;
    for piece in engine.b_sets().side(side) {
        for beta in piece.grid(grid_points, 0.0, 1e3) {
            min = min.min(f_value(d, side, beta, x));
        }
    }
    Ok(min)
}

/// Draw a point of the side's feasible set `{x in K : c'x >= c_0}`.
fn sample_side_point<R: Rng>(d: &Disjunction, side: Side, rng: &mut R) -> Result<AmbientVector> {
    let (c, c0) = d.side(side);
    for _ in 0..100_000 {
        let region = if rng.gen_bool(0.7) { Region::Interior } else { Region::Boundary };
        let x = sample_cone_point(d.cone(), region, rng).scale(rng.gen_range(0.1..3.0));
        let t = c.dot(&x);
        match c0 {
            1 => {
                if t > 1e-9 {
                    // Occasionally land exactly on the side's hyperplane so
                    // tight faces of the hull are exercised.
                    let u = if rng.gen_bool(0.3) { 1.0 } else { rng.gen_range(1.0..3.0) };
                    return Ok(x.scale(u / t));
                }
            }
            0 => {
                if t >= 0.0 {
                    return Ok(x);
                }
            }
            -1 => {
                if t < 0.0 && rng.gen_bool(0.3) {
                    // Land exactly on the side's hyperplane.
                    return Ok(x.scale(1.0 / -t));
                }
                if t >= -1.0 {
                    return Ok(x);
                }
                return Ok(x.scale(rng.gen_range(0.0..1.0) / (-t)));
            }
            _ => unreachable!("normalized rhs"),
        }
    }
    Err(Error::Numerical(format!(
        "could not sample a point of side {}; is it strictly feasible?",
        side.index()
    )))
}

/// Draw a recession direction of the side: `r in K` with `c'r >= 0`. Returns
/// `None` when the recession cone is (numerically) just the origin.
fn sample_recession_direction<R: Rng>(
    d: &Disjunction,
    side: Side,
    rng: &mut R,
) -> Result<Option<AmbientVector>> {
    let (c, _) = d.side(side);
    match d.cone().classify(c, DEFAULT_TOL)? {
        // c in -int(K): c'r < 0 for every nonzero r in K.
        Membership::InteriorNegK => return Ok(None),
        // c in -bd(K): the unique admissible ray is (c~ / |c~|, 1).
        Membership::BoundaryNegK => {
            let norm = c.tilde_norm2();
            if norm == 0.0 {
                return Ok(None);
            }
            let mut entries: Vec<f64> = c.tilde().iter().map(|v| v / norm).collect();
            entries.push(1.0);
            return Ok(Some(AmbientVector::new(entries)?));
        }
        _ => {}
    }
    for _ in 0..1000 {
        let region = if rng.gen_bool(0.5) { Region::Interior } else { Region::Boundary };
        let r = sample_cone_point(d.cone(), region, rng);
        if c.dot(&r) >= 0.0 {
            return Ok(Some(r.scale(rng.gen_range(0.1..2.0))));
        }
    }
    Ok(None)
}

/// Sample guaranteed members of the closed convex hull of the union: convex
/// combinations of side points, plus side points pushed along recession
/// directions of the opposite side.
pub fn sample_hull_points<R: Rng>(
    d: &Disjunction,
    count: usize,
    rng: &mut R,
) -> Result<Vec<AmbientVector>> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x1 = sample_side_point(d, Side::One, rng)?;
        let x2 = sample_side_point(d, Side::Two, rng)?;
        if rng.gen_bool(0.6) {
            let lam = rng.gen_range(0.0..=1.0);
            out.push(x1.combine(lam, &x2, 1.0 - lam));
        } else {
            // Augment one side's point with a recession direction of the
            // other side; fall back to a convex combination if that side's
            // recession cone is degenerate.
            let (base, other) = if rng.gen_bool(0.5) { (x1, Side::Two) } else { (x2, Side::One) };
            match sample_recession_direction(d, other, rng)? {
                Some(r) => out.push(base.combine(1.0, &r, 1.0)),
                None => {
                    let x1 = sample_side_point(d, Side::One, rng)?;
                    let x2 = sample_side_point(d, Side::Two, rng)?;
                    let lam = rng.gen_range(0.0..=1.0);
                    out.push(x1.combine(lam, &x2, 1.0 - lam));
                }
            }
        }
    }
    Ok(out)
}

/// Signed violation of a cut at `x` (positive means the cut is violated).
pub fn cut_violation(cut: &CutDescription, x: &AmbientVector) -> f64 {
    match &cut.form {
        CutForm::Linear { coeffs, rhs } => rhs - coeffs.dot(x),
        CutForm::ConvexRadical { affine, rhs, radical, n } => {
            let t = x.tilde_norm2();
            let slack = x.height() * x.height() - t * t;
            let u = radical.dot(x);
            let sqrt = (u * u + n * slack).max(0.0).sqrt();
            (rhs - affine.dot(x)) - sqrt
        }
    }
}

/// Evaluate every cut on `count` sampled hull points.
pub fn verify_validity<R: Rng>(
    d: &Disjunction,
    cuts: &[CutDescription],
    count: usize,
    tol: f64,
    rng: &mut R,
) -> Result<ValidityReport> {
    let samples = sample_hull_points(d, count, rng)?;
    let mut max_violation = f64::NEG_INFINITY;
    let mut worst_point = None;
    for x in &samples {
        for cut in cuts {
            let violation = cut_violation(cut, x);
            if violation > max_violation {
                max_violation = violation;
                worst_point = Some(x.clone());
            }
        }
    }
    if !max_violation.is_finite() {
        max_violation = 0.0;
    }
    Ok(ValidityReport {
        samples_tested: samples.len(),
        max_violation,
        worst_point,
        passed: max_violation <= tol,
        tol,
    })
}

/// Draw a random preflight-passing second-order cone instance.
pub fn random_instance<R: Rng>(n: usize, rng: &mut R) -> (Disjunction, ClassificationReport) {
    let cone = crate::cone::ConeSpec::second_order(n).expect("n >= 2");
    loop {
        let draw = |rng: &mut R| -> Vec<f64> { (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect() };
        let rhs = [-1.0, 0.0, 1.0];
        let c1_0 = rhs[rng.gen_range(0..3)];
        let c2_0 = rhs[rng.gen_range(0..3)];
        let Ok(c1) = AmbientVector::new(draw(rng)) else { continue };
        let Ok(c2) = AmbientVector::new(draw(rng)) else { continue };
        let Ok(d) = normalize(cone, c1, c1_0, c2, c2_0) else { continue };
        let Ok(report) = preflight(&d) else { continue };
        if report.assumption1_holds && report.assumption2_holds {
            return (d, report);
        }
    }
}

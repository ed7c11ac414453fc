//! Cut generation, membership, and separation for two-term disjunctions on
//! the second-order cone.
//!
//! Every undominated valid linear inequality for the union corresponds to a
//! multiplier `beta` in one of two sets `B1`, `B2`; each such `beta` yields a
//! closed-form convex inequality, and the closed convex hull is exactly the
//! set of cone points satisfying all of them. Membership therefore reduces to
//! minimizing a one-dimensional function `f` of `beta` over each `B` set, and
//! separation to reporting the minimizing `beta` when the bound is violated.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cone::{sample_cone_point, AmbientVector, Region, DEFAULT_TOL};
use crate::disjunction::{
    boundary_quadratic, preflight, rhs_halfline, ClassificationReport, Disjunction, Side,
};
use crate::error::{Error, Result};
use crate::interval::{quadratic_nonnegative_set, BetaInterval};

/// Multiplier sets generating the cut families of the two sides. Each side is
/// a union of at most two disjoint intervals of positive multipliers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BSets {
    pub b1: Vec<BetaInterval>,
    pub b2: Vec<BetaInterval>,
}

impl BSets {
    pub fn side(&self, side: Side) -> &[BetaInterval] {
        match side {
            Side::One => &self.b1,
            Side::Two => &self.b2,
        }
    }

    pub fn side_is_empty(&self, side: Side) -> bool {
        self.side(side).iter().all(|p| p.is_empty())
    }

    pub fn side_contains(&self, side: Side, beta: f64, tol: f64) -> bool {
        self.side(side).iter().any(|p| p.contains(beta, tol))
    }
}

/// The quantities `R`, `P`, `Q` attached to a query point; the radicand of
/// the side-1 cut at `beta` is `R beta^2 - 2 P beta + Q` and the side-2
/// radicand swaps `R` and `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointQuadratics {
    pub r: f64,
    pub p: f64,
    pub q: f64,
    /// `x_n^2 - |x~|^2`, nonnegative on the cone.
    pub slack: f64,
    pub c1x: f64,
    pub c2x: f64,
}

/// Outcome of minimizing `f` over one `B` set. `value` may be `-inf` (the
/// point is then cut off by every sufficiently large multiplier) and `argmin`
/// may be `+inf` when the infimum is only approached asymptotically.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfResult {
    pub value: f64,
    pub argmin: f64,
    pub n_at_argmin: f64,
}

/// A concrete cut. `Linear` reads `coeffs'x >= rhs`; `ConvexRadical` reads
/// `rhs - affine'x <= sqrt((radical'x)^2 + n (x_n^2 - |x~|^2))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutDescription {
    pub side: Side,
    pub beta: f64,
    pub form: CutForm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CutForm {
    Linear {
        coeffs: AmbientVector,
        rhs: f64,
    },
    ConvexRadical {
        affine: AmbientVector,
        rhs: f64,
        radical: AmbientVector,
        n: f64,
    },
}

/// Verdict of [`CutEngine::separate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SeparationResult {
    Member,
    /// The query violates the cone itself; `deficit = |x~| - x_n`.
    OutsideCone { deficit: f64 },
    Separated { cut: CutDescription, violation: f64 },
}

/// A dual certificate that a multiplier/direction pair generates a valid
/// linear inequality `mu'x >= rhs` tight on both sides of the disjunction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VLICertificate {
    pub side: Side,
    pub beta: f64,
    /// Scaling of the boundary ray `(w~; 1)` on the `beta` side.
    pub s: f64,
    /// Cone multiplier on the `beta` side: `s * (w~; 1)`.
    pub alpha_side: AmbientVector,
    /// Cone multiplier on the opposite side; lies on the cone boundary.
    pub alpha_other: AmbientVector,
    /// The common inequality vector `alpha_side + beta*c_side = alpha_other + c_other`.
    pub mu: AmbientVector,
}

/// Cut generator for a normalized second-order cone disjunction that passes
/// the containment and strict-feasibility preflight.
#[derive(Debug, Clone)]
pub struct CutEngine {
    d: Disjunction,
    report: ClassificationReport,
    raw: BSets,
    bsets: BSets,
    quad: (f64, f64, f64),
    tol: f64,
}

pub(crate) fn raw_b_sets(d: &Disjunction) -> BSets {
    let q = boundary_quadratic(d);
    let positive = BetaInterval::range(0.0, f64::INFINITY, false, false);
    let build = |lead: f64, tail: f64, lhs_rhs: i8, rhs_rhs: i8| -> Vec<BetaInterval> {
        let halfline = rhs_halfline(lhs_rhs, rhs_rhs).intersect(&positive);
        quadratic_nonnegative_set(lead, q.m, tail)
            .into_iter()
            .map(|piece| piece.intersect(&halfline))
            .filter(|piece| !piece.is_empty())
            .collect()
    };
    BSets {
        b1: build(q.a, q.c, d.c1_0(), d.c2_0()),
        b2: build(q.c, q.a, d.c2_0(), d.c1_0()),
    }
}

impl CutEngine {
    pub fn new(d: Disjunction) -> Result<Self> {
        Self::with_tol(d, DEFAULT_TOL)
    }

    pub fn with_tol(d: Disjunction, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::InvalidInput(format!("tolerance {tol} must be positive")));
        }
        let report = preflight(&d)?;
        if !report.assumption1_holds {
            return Err(Error::AssumptionViolated(format!(
                "one side contains the other ({:?}); the union is convex already",
                report.containment
            )));
        }
        if !report.assumption2_holds {
            return Err(Error::AssumptionViolated(format!(
                "strict feasibility fails (side1: {}, side2: {})",
                report.strict_feasible.0, report.strict_feasible.1
            )));
        }
        let raw = raw_b_sets(&d);
        let bsets = if report.single_inequality {
            BSets { b1: vec![BetaInterval::singleton(1.0)], b2: vec![BetaInterval::singleton(1.0)] }
        } else {
            raw.clone()
        };
        let q = boundary_quadratic(&d);
        Ok(CutEngine { d, report, raw, bsets, quad: (q.a, q.m, q.c), tol })
    }

    pub fn disjunction(&self) -> &Disjunction {
        &self.d
    }

    pub fn report(&self) -> &ClassificationReport {
        &self.report
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// The multiplier sets actually used for membership and separation; both
    /// collapse to `{1}` when a single inequality describes the hull.
    pub fn b_sets(&self) -> &BSets {
        &self.bsets
    }

    /// The uncollapsed multiplier sets.
    pub fn b_sets_raw(&self) -> &BSets {
        &self.raw
    }

    fn side_vectors(&self, side: Side) -> (&AmbientVector, &AmbientVector) {
        match side {
            Side::One => (self.d.c1(), self.d.c2()),
            Side::Two => (self.d.c2(), self.d.c1()),
        }
    }

    fn n_quad(&self, side: Side) -> (f64, f64, f64) {
        let (a, b, c) = self.quad;
        match side {
            Side::One => (a, b, c),
            Side::Two => (c, b, a),
        }
    }

    /// The coefficient `N(beta)` multiplying the cone slack in the radicand
    /// of the side's cut.
    pub fn n_coefficient(&self, side: Side, beta: f64) -> f64 {
        let (lead, mid, tail) = self.n_quad(side);
        lead * beta * beta - 2.0 * mid * beta + tail
    }

    fn check_beta(&self, side: Side, beta: f64) -> Result<()> {
        if !beta.is_finite() {
            return Err(Error::InvalidArgument(format!("multiplier {beta} is not finite")));
        }
        if !self.raw.side_contains(side, beta, 1e-9) {
            return Err(Error::InvalidArgument(format!(
                "multiplier {beta} lies outside B{}",
                side.index()
            )));
        }
        Ok(())
    }

    /// The linear cut `beta * c_side'x >= c2_0`, valid when the cut's
    /// radicand degenerates: `N(beta) = 0` with `beta*c_side - c_other` on
    /// the cone's boundary.
    pub fn linear_cut(&self, side: Side, beta: f64) -> Result<CutDescription> {
        self.check_beta(side, beta)?;
        let n = self.n_coefficient(side, beta);
        let (cs, co) = self.side_vectors(side);
        let scale = self.n_scale(side, beta);
        if n.abs() > 1e-7 * scale {
            return Err(Error::InvalidArgument(format!(
                "N(beta) = {n} is not zero; the cut does not reduce to a linear one"
            )));
        }
        let v = cs.combine(beta, co, -1.0);
        if !self.d.cone().contains(&v, 1e-7)? {
            return Err(Error::InvalidArgument(
                "beta*c_side - c_other is not in the cone; the degenerate cut is the trivial one"
                    .into(),
            ));
        }
        Ok(CutDescription {
            side,
            beta,
            form: CutForm::Linear { coeffs: cs.scale(beta), rhs: self.d.c2_0() as f64 },
        })
    }

    fn n_scale(&self, side: Side, beta: f64) -> f64 {
        let (lead, mid, tail) = self.n_quad(side);
        1.0f64.max(lead.abs() * beta * beta + 2.0 * mid.abs() * beta.abs() + tail.abs())
    }

    /// Signed satisfaction margin of the side's convex cut at `beta`:
    /// `sqrt(radicand) - (2 c2_0 - (beta*c_side + c_other)'x)`, nonnegative
    /// exactly when `x` satisfies the cut.
    pub fn convex_cut_margin(&self, side: Side, beta: f64, x: &AmbientVector) -> Result<f64> {
        self.check_beta(side, beta)?;
        self.check_dim(x)?;
        let (cs, co) = self.side_vectors(side);
        let n = self.n_coefficient(side, beta);
        let slack = x.height() * x.height() - {
            let t = x.tilde_norm2();
            t * t
        };
        let u = beta * cs.dot(x) - co.dot(x);
        let radicand = u * u + n * slack;
        let scale = 1.0f64.max(u * u).max((n * slack).abs());
        let radicand = clamp_radicand(radicand, scale)?;
        let lhs = 2.0 * self.d.c2_0() as f64 - (beta * cs.dot(x) + co.dot(x));
        Ok(radicand.sqrt() - lhs)
    }

    /// The vector whose cone membership is equivalent to `x` satisfying the
    /// side's convex cut: `N(beta) x + 2 (c_other'x - c2_0) (v~; -v_n)` where
    /// `v = beta*c_side - c_other`.
    pub fn conic_form_vector(&self, side: Side, beta: f64, x: &AmbientVector) -> Result<AmbientVector> {
        self.check_beta(side, beta)?;
        self.check_dim(x)?;
        let (cs, co) = self.side_vectors(side);
        let n = self.n_coefficient(side, beta);
        let v = cs.combine(beta, co, -1.0);
        let reflected = reflect_height(&v);
        let weight = 2.0 * (co.dot(x) - self.d.c2_0() as f64);
        Ok(x.combine(n, &reflected, weight))
    }

    /// Whether the side's cut at `beta` is conic-quadratic representable with
    /// the plain reverse inequality, i.e. no cone point strictly satisfies
    /// both `beta*c_side'x > c2_0` and `c_other'x > c2_0`.
    pub fn cqr_holds(&self, side: Side, beta: f64) -> Result<bool> {
        self.check_beta(side, beta)?;
        if self.d.c2_0() < 0 {
            // The origin strictly satisfies both inequalities.
            return Ok(false);
        }
        let (cs, co) = self.side_vectors(side);
        let u = cs.scale(beta);
        // The pair is simultaneously unsatisfiable over the cone exactly when
        // some convex combination of the two vectors lies in -K, i.e. the
        // support value |z~| + z_n reaches zero.
        let g = |lam: f64| -> f64 {
            let z = u.combine(lam, co, 1.0 - lam);
            z.tilde_norm2() + z.height()
        };
        let min = golden_min(0.0, 1.0, &g).min(g(0.0)).min(g(1.0));
        Ok(min <= 1e-9)
    }

    fn check_dim(&self, x: &AmbientVector) -> Result<()> {
        if x.dim() != self.d.dim() {
            return Err(Error::InvalidArgument(format!(
                "point has dimension {}, instance has {}",
                x.dim(),
                self.d.dim()
            )));
        }
        Ok(())
    }

    /// The point-dependent quadratic data driving membership and separation.
    pub fn point_quadratics(&self, x: &AmbientVector) -> Result<PointQuadratics> {
        self.check_dim(x)?;
        let (a, b, c) = self.quad;
        let t = x.tilde_norm2();
        let slack = x.height() * x.height() - t * t;
        let c1x = self.d.c1().dot(x);
        let c2x = self.d.c2().dot(x);
        Ok(PointQuadratics {
            r: c1x * c1x + a * slack,
            p: c1x * c2x + b * slack,
            q: c2x * c2x + c * slack,
            slack,
            c1x,
            c2x,
        })
    }

    /// The stationary point of the side's `f`, when one exists. It is the
    /// minimizer when `f` is convex (`P^2 <= QR`) and the maximizer when `f`
    /// is concave.
    pub fn beta_star(&self, side: Side, x: &AmbientVector) -> Result<Option<f64>> {
        let pq = self.point_quadratics(x)?;
        let (lead_n, _, _) = self.n_quad(side);
        let (lead, s) = match side {
            Side::One => (pq.r, pq.c1x),
            Side::Two => (pq.q, pq.c2x),
        };
        if lead == 0.0 {
            return Ok(None);
        }
        let denom = -lead_n * pq.slack;
        if denom == 0.0 {
            return Ok(None);
        }
        let arg = (pq.p * pq.p - pq.q * pq.r) / denom;
        if arg < 0.0 {
            return Ok(None);
        }
        Ok(Some(pq.p / lead - (s / lead) * arg.sqrt()))
    }

    /// Minimize the side's `f` over its `B` set for a cone point `x`.
    pub fn inf_f(&self, side: Side, x: &AmbientVector) -> Result<InfResult> {
        let tag = self.d.cone().classify(x, self.tol)?;
        if !tag.in_cone() {
            return Err(Error::InvalidArgument("query point is not in the cone".into()));
        }
        if self.bsets.side_is_empty(side) {
            return Err(Error::InvalidArgument(format!("B{} is empty", side.index())));
        }
        let pq = self.point_quadratics(x)?;
        let mut best: Option<(f64, f64)> = None;
        for piece in self.bsets.side(side) {
            let (value, argmin) = self.piece_infimum(side, &pq, x, piece)?;
            let better = match best {
                None => true,
                Some((bv, ba)) => value < bv - 0.0 || (value == bv && argmin < ba),
            };
            if better {
                best = Some((value, argmin));
            }
        }
        let (value, argmin) = best.expect("nonempty side");
        let n_at_argmin = if argmin.is_finite() {
            self.n_coefficient(side, argmin)
        } else {
            f64::INFINITY
        };
        Ok(InfResult { value, argmin, n_at_argmin })
    }

    fn piece_infimum(
        &self,
        side: Side,
        pq: &PointQuadratics,
        x: &AmbientVector,
        piece: &BetaInterval,
    ) -> Result<(f64, f64)> {
        let (lo, hi) = match *piece {
            BetaInterval::Empty => return Err(Error::InvalidArgument("empty piece".into())),
            BetaInterval::Range { lo, hi, .. } => (lo, hi),
        };
        let (lead, tail, s, t) = match side {
            Side::One => (pq.r, pq.q, pq.c1x, pq.c2x),
            Side::Two => (pq.q, pq.r, pq.c2x, pq.c1x),
        };
        let p = pq.p;
        let f = |beta: f64| -> f64 {
            let radicand = lead * beta * beta - 2.0 * p * beta + tail;
            beta * s + radicand.max(0.0).sqrt()
        };
        let mut candidates: Vec<(f64, f64)> = Vec::new();
        let mut push = |beta: f64| {
            if beta.is_finite() && beta >= lo - 1e-12 && beta <= hi + 1e-12 {
                let b = beta.clamp(lo, hi.min(f64::MAX));
                candidates.push((f(b), b));
            }
        };
        push(lo);
        if hi.is_finite() {
            push(hi);
        }
        // Kink of the piecewise-linear case (boundary points of the cone).
        if s != 0.0 {
            push(t / s);
        }
        if let Some(bs) = self.beta_star(side, x)? {
            push(bs);
        }
        if hi.is_infinite() {
            let slope = s + lead.max(0.0).sqrt();
            if slope < -1e-12 * (1.0 + s.abs()) {
                return Ok((f64::NEG_INFINITY, f64::INFINITY));
            }
            if slope.abs() <= 1e-12 * (1.0 + s.abs()) && lead > 0.0 {
                // f decreases to its horizontal asymptote.
                candidates.push((-p / lead.sqrt(), f64::INFINITY));
            }
        }
        let mut best = candidates[0];
        for cand in &candidates[1..] {
            if cand.0 < best.0 - 1e-15 || (cand.0 <= best.0 && cand.1 < best.1) {
                best = *cand;
            }
        }
        Ok(best)
    }

    fn side_bound(&self, side: Side, x: &AmbientVector) -> Result<Option<(f64, InfResult)>> {
        if self.bsets.side_is_empty(side) {
            return Ok(None);
        }
        let (_, co) = self.side_vectors(side);
        let lhs = 2.0 * self.d.c2_0() as f64 - co.dot(x);
        let inf = self.inf_f(side, x)?;
        Ok(Some((lhs, inf)))
    }

    /// Whether `x` belongs to the closed convex hull of the union, within the
    /// engine tolerance.
    pub fn membership(&self, x: &AmbientVector) -> Result<bool> {
        let tag = self.d.cone().classify(x, self.tol)?;
        if !tag.in_cone() {
            return Ok(false);
        }
        for side in [Side::One, Side::Two] {
            if let Some((lhs, inf)) = self.side_bound(side, x)? {
                if !(lhs <= inf.value + self.tol) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Produce a most-violated cut for `x`, or report membership.
    pub fn separate(&self, x: &AmbientVector) -> Result<SeparationResult> {
        self.check_dim(x)?;
        let tag = self.d.cone().classify(x, self.tol)?;
        if !tag.in_cone() {
            return Ok(SeparationResult::OutsideCone { deficit: x.tilde_norm2() - x.height() });
        }
        let mut best: Option<(Side, f64, InfResult, f64)> = None;
        for side in [Side::One, Side::Two] {
            if let Some((lhs, inf)) = self.side_bound(side, x)? {
                let violation = lhs - inf.value;
                if violation > self.tol {
                    let better = match &best {
                        None => true,
                        Some((_, _, _, bv)) => violation > *bv,
                    };
                    if better {
                        best = Some((side, lhs, inf, violation));
                    }
                }
            }
        }
        let Some((side, lhs, inf, _)) = best else {
            return Ok(SeparationResult::Member);
        };
        let beta = self.finite_separating_beta(side, x, lhs, &inf)?;
        let n = self.n_coefficient(side, beta);
        let (cs, _) = self.side_vectors(side);
        if n.abs() <= 1e-7 * self.n_scale(side, beta) {
            if let Ok(cut) = self.linear_cut(side, beta) {
                let violation = self.d.c2_0() as f64 - beta * cs.dot(x);
                return Ok(SeparationResult::Separated { cut, violation });
            }
        }
        let cut = self.cut_at(side, beta);
        let violation = lhs - self.eval_f(side, x, beta)?;
        Ok(SeparationResult::Separated { cut, violation })
    }

    fn eval_f(&self, side: Side, x: &AmbientVector, beta: f64) -> Result<f64> {
        let pq = self.point_quadratics(x)?;
        let (lead, tail, s) = match side {
            Side::One => (pq.r, pq.q, pq.c1x),
            Side::Two => (pq.q, pq.r, pq.c2x),
        };
        let radicand = lead * beta * beta - 2.0 * pq.p * beta + tail;
        Ok(beta * s + radicand.max(0.0).sqrt())
    }

    /// Replace an asymptotic argmin by a finite multiplier that still
    /// realizes at least half the violation.
    fn finite_separating_beta(
        &self,
        side: Side,
        x: &AmbientVector,
        lhs: f64,
        inf: &InfResult,
    ) -> Result<f64> {
        if inf.argmin.is_finite() {
            return Ok(inf.argmin);
        }
        let target = if inf.value.is_finite() {
            lhs - 0.5 * (lhs - inf.value)
        } else {
            lhs - 1.0
        };
        let lo = self
            .bsets
            .side(side)
            .iter()
            .filter_map(|piece| piece.lo())
            .fold(f64::INFINITY, f64::min)
            .max(0.0);
        let mut beta = lo.max(1.0);
        for _ in 0..200 {
            if self.bsets.side_contains(side, beta, 0.0) && self.eval_f(side, x, beta)? <= target {
                return Ok(beta);
            }
            beta *= 2.0;
        }
        Err(Error::Numerical(
            "no finite multiplier realized the asymptotic violation".into(),
        ))
    }

    fn cut_at(&self, side: Side, beta: f64) -> CutDescription {
        let (cs, co) = self.side_vectors(side);
        CutDescription {
            side,
            beta,
            form: CutForm::ConvexRadical {
                affine: cs.combine(beta, co, 1.0),
                rhs: 2.0 * self.d.c2_0() as f64,
                radical: cs.combine(beta, co, -1.0),
                n: self.n_coefficient(side, beta),
            },
        }
    }

    /// Enumerate cuts over a multiplier grid of each nonempty `B` set,
    /// emitting the linear form where the radicand degenerates.
    pub fn cuts(&self, grid: usize) -> Result<Vec<CutDescription>> {
        if grid == 0 {
            return Err(Error::InvalidArgument("grid must have at least one point".into()));
        }
        let mut out = Vec::new();
        for side in [Side::One, Side::Two] {
            for piece in self.bsets.side(side) {
                for beta in piece.grid(grid, 0.0, 1e3) {
                    if self.n_coefficient(side, beta).abs() <= 1e-7 * self.n_scale(side, beta) {
                        if let Ok(cut) = self.linear_cut(side, beta) {
                            out.push(cut);
                            continue;
                        }
                    }
                    out.push(self.cut_at(side, beta));
                }
            }
        }
        Ok(out)
    }

    /// Build the dual certificate showing that the boundary direction
    /// `(w~; 1)` and multiplier `beta` generate a valid linear inequality
    /// `mu'x >= c2_0 * (1 + beta)`-style member of the side's linear family.
    pub fn linear_certificate(&self, side: Side, beta: f64, w_tilde: &[f64]) -> Result<VLICertificate> {
        self.check_beta(side, beta)?;
        let n = self.d.dim();
        if w_tilde.len() != n - 1 {
            return Err(Error::InvalidArgument(format!(
                "direction has {} entries, expected {}",
                w_tilde.len(),
                n - 1
            )));
        }
        let norm = crate::cone::norm2(w_tilde);
        if (norm - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidArgument(format!(
                "direction must be a unit vector, got norm {norm}"
            )));
        }
        let (cs, co) = self.side_vectors(side);
        let v = cs.combine(beta, co, -1.0);
        let h = v.height();
        let vw = crate::cone::dot(v.tilde(), w_tilde);
        let denom = vw - h;
        if denom >= -1e-12 {
            return Err(Error::NoCertificate(format!(
                "direction does not oppose beta*c_side - c_other (v'w - h = {denom})"
            )));
        }
        let n_val = self.n_coefficient(side, beta);
        let s = -n_val / (2.0 * denom);
        if s < -1e-12 {
            return Err(Error::NoCertificate(format!("negative scaling s = {s}")));
        }
        if h + s < -1e-12 {
            return Err(Error::NoCertificate(format!(
                "opposite-side multiplier has negative height {}",
                h + s
            )));
        }
        let mut w_full: Vec<f64> = w_tilde.to_vec();
        w_full.push(1.0);
        let w = AmbientVector::new(w_full)?;
        let alpha_side = w.scale(s);
        let alpha_other = v.combine(1.0, &w, s);
        let mu = alpha_side.combine(1.0, cs, beta);
        Ok(VLICertificate { side, beta, s, alpha_side, alpha_other, mu })
    }
}

fn reflect_height(v: &AmbientVector) -> AmbientVector {
    let mut entries = v.entries().to_vec();
    let last = entries.len() - 1;
    entries[last] = -entries[last];
    AmbientVector::new(entries).expect("finite reflection")
}

fn clamp_radicand(r: f64, scale: f64) -> Result<f64> {
    if r >= 0.0 {
        Ok(r)
    } else if r >= -1e-12 * scale.max(1.0) {
        Ok(0.0)
    } else {
        Err(Error::Numerical(format!("radicand {r} fell below the negative guard")))
    }
}

fn golden_min(mut lo: f64, mut hi: f64, g: &dyn Fn(f64) -> f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut gc = g(c);
    let mut gd = g(d);
    for _ in 0..120 {
        if gc <= gd {
            hi = d;
            d = c;
            gd = gc;
            c = hi - INV_PHI * (hi - lo);
            gc = g(c);
        } else {
            lo = c;
            c = d;
            gc = gd;
            d = lo + INV_PHI * (hi - lo);
            gd = g(d);
        }
    }
    gc.min(gd)
}

/// Membership check against the hull described by the raw multiplier sets,
/// usable before a full preflight report exists. Returns the worst violation
/// (0 for members). The query must belong to the cone.
fn raw_violation(d: &Disjunction, bsets: &BSets, x: &AmbientVector) -> Result<f64> {
    // A lightweight engine clone that skips preflight.
    let q = boundary_quadratic(d);
    let engine = CutEngine {
        d: d.clone(),
        report: dummy_report(),
        raw: bsets.clone(),
        bsets: bsets.clone(),
        quad: (q.a, q.m, q.c),
        tol: DEFAULT_TOL,
    };
    let mut worst = 0.0f64;
    for side in [Side::One, Side::Two] {
        if let Some((lhs, inf)) = engine.side_bound(side, x)? {
            worst = worst.max(lhs - inf.value);
        }
    }
    Ok(worst)
}

fn dummy_report() -> ClassificationReport {
    use crate::disjunction::{CaseTag, Closedness, Containment, DSets};
    ClassificationReport {
        assumption1_holds: true,
        containment: Containment::None,
        assumption2_holds: true,
        strict_feasible: (true, true),
        hull_is_cone: false,
        conv_closed: Closedness::Unknown,
        single_inequality: false,
        case_tag: CaseTag::BothDEmpty,
        d_sets: DSets { d1: BetaInterval::Empty, d2: BetaInterval::Empty },
    }
}

/// Search a deterministic sample of cone points for one that the raw cut
/// family separates; used by preflight to certify non-closedness.
pub(crate) fn separated_cone_point_exists(d: &Disjunction, _tol: f64) -> Result<bool> {
    let bsets = raw_b_sets(d);
    if bsets.b1.is_empty() && bsets.b2.is_empty() {
        return Ok(false);
    }
    let n = d.dim();
    let mut candidates: Vec<AmbientVector> = Vec::new();
    for i in 0..n - 1 {
        for sign in [1.0, -1.0] {
            for scale in [1.0, 8.0] {
                let mut e = vec![0.0; n];
                e[i] = sign * scale;
                e[n - 1] = scale;
                candidates.push(AmbientVector::new(e)?);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..256 {
        let x = sample_cone_point(d.cone(), Region::Interior, &mut rng);
        candidates.push(x.clone());
        candidates.push(x.scale(10.0));
        let xb = sample_cone_point(d.cone(), Region::Boundary, &mut rng);
        candidates.push(xb.scale(5.0));
    }
    for x in &candidates {
        if raw_violation(d, &bsets, x)? > 1e-6 {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::ConeSpec;
    use crate::disjunction::normalize;
    use rand::Rng;

    fn v(entries: &[f64]) -> AmbientVector {
        AmbientVector::new(entries.to_vec()).unwrap()
    }

    fn soc3() -> ConeSpec {
        ConeSpec::second_order(3).unwrap()
    }

    /// `x3 >= 1 OR x1 + x3 >= 1`.
    fn tee() -> CutEngine {
        let d = normalize(soc3(), v(&[0.0, 0.0, 1.0]), 1.0, v(&[1.0, 0.0, 1.0]), 1.0).unwrap();
        CutEngine::new(d).unwrap()
    }

    /// `-x2 >= 0 OR -x3 >= -1`.
    fn wedge() -> CutEngine {
        let d = normalize(soc3(), v(&[0.0, -1.0, 0.0]), 0.0, v(&[0.0, 0.0, -1.0]), -1.0).unwrap();
        CutEngine::new(d).unwrap()
    }

    #[test]
    fn engine_rejects_contained_sides() {
        let d = normalize(soc3(), v(&[0.0, 0.0, 1.0]), 1.0, v(&[0.0, 0.0, 1.0]), 0.0).unwrap();
        assert!(matches!(CutEngine::new(d), Err(Error::AssumptionViolated(_))));
    }

    #[test]
    fn raw_b_sets_tee() {
        let e = tee();
        let raw = e.b_sets_raw();
        assert_eq!(raw.b1.len(), 1);
        assert_eq!(raw.b1[0], BetaInterval::closed(1.0, 2.0));
        assert_eq!(raw.b2.len(), 1);
        assert_eq!(raw.b2[0].lo(), Some(1.0));
        assert_eq!(raw.b2[0].hi(), Some(f64::INFINITY));
        // Single-inequality collapse.
        assert!(e.report().single_inequality);
        assert_eq!(e.b_sets().b1, vec![BetaInterval::singleton(1.0)]);
        assert_eq!(e.b_sets().b2, vec![BetaInterval::singleton(1.0)]);
    }

    #[test]
    fn raw_b_sets_wedge() {
        let e = wedge();
        let b = e.b_sets();
        assert_eq!(b.b1, vec![BetaInterval::at_least(1.0, true)]);
        assert!(b.b2.is_empty());
    }

    #[test]
    fn n_coefficient_values() {
        let e = tee();
        // a = -1, b = -1, c = 0.
        assert_eq!(e.n_coefficient(Side::One, 1.0), 1.0);
        assert_eq!(e.n_coefficient(Side::One, 2.0), 0.0);
        assert_eq!(e.n_coefficient(Side::Two, 1.0), 1.0);
        let e = wedge();
        // a = 1, b = 0, c = -1.
        assert_eq!(e.n_coefficient(Side::One, 1.0), 0.0);
        assert_eq!(e.n_coefficient(Side::One, 2.0), 3.0);
    }

    #[test]
    fn point_quadratics_wedge() {
        let e = wedge();
        let pq = e.point_quadratics(&v(&[0.0, 2.0, 3.0])).unwrap();
        assert_eq!(pq.r, 9.0);
        assert_eq!(pq.p, 6.0);
        assert_eq!(pq.q, 4.0);
        assert_eq!(pq.slack, 5.0);
    }

    #[test]
    fn radicand_identity() {
        // R b^2 - 2 P b + Q equals ((b c1 - c2)'x)^2 + N1(b) (x_n^2 - |x~|^2).
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut checked = 0;
        while checked < 200 {
            let c1 = v(&[rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]);
            let c2 = v(&[rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]);
            let Ok(d) = normalize(soc3(), c1, 1.0, c2, 1.0) else { continue };
            let Ok(e) = CutEngine::new(d) else { continue };
            let x = sample_cone_point(&soc3(), Region::Interior, &mut rng);
            let pq = e.point_quadratics(&x).unwrap();
            for k in 0..10 {
                let beta = -2.0 + 0.5 * k as f64;
                let lhs = pq.r * beta * beta - 2.0 * pq.p * beta + pq.q;
                let u = beta * e.disjunction().c1().dot(&x) - e.disjunction().c2().dot(&x);
                let rhs = u * u + e.n_coefficient(Side::One, beta) * pq.slack;
                assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs()), "{lhs} vs {rhs}");
            }
            checked += 1;
        }
    }

    #[test]
    fn beta_star_wedge() {
        let e = wedge();
        let x = v(&[0.5, 0.5, 1.0]);
        let bs = e.beta_star(Side::One, &x).unwrap().unwrap();
        assert!((bs - 1.0).abs() < 1e-12);
        // Closed form x2 / (x3 - |x1|) on random interior points.
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..200 {
            let x = sample_cone_point(&soc3(), Region::Interior, &mut rng);
            if x[1] <= 1e-3 {
                continue;
            }
            let expect = x[1] / (x[2] - x[0].abs());
            let got = e.beta_star(Side::One, &x).unwrap();
            if let Some(got) = got {
                assert!((got - expect).abs() <= 1e-7 * (1.0 + expect.abs()), "{got} vs {expect}");
            }
        }
    }

    #[test]
    fn beta_star_is_stationary() {
        let e = wedge();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..500 {
            let x = sample_cone_point(&soc3(), Region::Interior, &mut rng);
            if let Some(bs) = e.beta_star(Side::One, &x).unwrap() {
                let h = 1e-6 * (1.0 + bs.abs());
                let f0 = e.eval_f(Side::One, &x, bs - h).unwrap();
                let f1 = e.eval_f(Side::One, &x, bs).unwrap();
                let f2 = e.eval_f(Side::One, &x, bs + h).unwrap();
                let deriv = (f2 - f0) / (2.0 * h);
                assert!(deriv.abs() < 1e-4, "f' = {deriv} at beta* = {bs}");
                assert!(f1 <= f0 + 1e-9 && f1 <= f2 + 1e-9 || f1 >= f0 - 1e-9 && f1 >= f2 - 1e-9);
            }
        }
    }

    #[test]
    fn inf_f_pinned_values() {
        let e = wedge();
        let inf = e.inf_f(Side::One, &v(&[0.0, 2.0, 3.0])).unwrap();
        assert!((inf.value - -1.0).abs() < 1e-12);
        assert_eq!(inf.argmin, 1.0);
        assert!(inf.n_at_argmin.abs() < 1e-12);

        let inf = e.inf_f(Side::One, &v(&[0.5, 0.5, 1.0])).unwrap();
        assert!(inf.value.abs() < 1e-12);
        assert!((inf.argmin - 1.0).abs() < 1e-9);

        let e = tee();
        let inf = e.inf_f(Side::One, &v(&[0.0, 0.0, 0.4])).unwrap();
        assert!((inf.value - 0.8).abs() < 1e-12);
        assert_eq!(inf.argmin, 1.0);
    }

    #[test]
    fn inf_matches_dense_grid() {
        let engines = [tee(), wedge()];
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for e in &engines {
            for _ in 0..100 {
                let region = if rng.gen_bool(0.5) { Region::Interior } else { Region::Boundary };
                let x = sample_cone_point(&soc3(), region, &mut rng).scale(rng.gen_range(0.2..3.0));
                for side in [Side::One, Side::Two] {
                    if e.b_sets().side_is_empty(side) {
                        continue;
                    }
                    let inf = e.inf_f(side, &x).unwrap();
                    let mut grid_min = f64::INFINITY;
                    for piece in e.b_sets().side(side) {
                        for beta in piece.grid(20_001, 0.0, 50.0) {
                            grid_min = grid_min.min(e.eval_f(side, &x, beta).unwrap());
                        }
                    }
                    if inf.value.is_finite() && inf.argmin <= 50.0 {
                        assert!(
                            inf.value <= grid_min + 1e-9,
                            "analytic {} above grid {grid_min}",
                            inf.value
                        );
                        assert!(
                            grid_min - inf.value <= 1e-4,
                            "grid {grid_min} far from analytic {}",
                            inf.value
                        );
                    } else {
                        assert!(inf.value <= grid_min + 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn membership_pinned() {
        let e = tee();
        assert!(!e.membership(&v(&[0.0, 0.0, 0.4])).unwrap());
        assert!(e.membership(&v(&[0.0, 0.0, 1.0])).unwrap());
        assert!(e.membership(&v(&[0.5, 0.0, 1.0])).unwrap());
        let e = wedge();
        assert!(e.membership(&v(&[0.5, 0.5, 1.0])).unwrap());
        assert!(!e.membership(&v(&[0.0, 2.0, 3.0])).unwrap());
        assert!(e.membership(&v(&[0.0, -2.0, 3.0])).unwrap());
        assert!(!e.membership(&v(&[5.0, 0.0, 1.0])).unwrap(), "outside the cone");
    }

    #[test]
    fn membership_agrees_with_explicit_hull_wedge() {
        // Hull: x2 <= 1 and 1 + |x1| - x3 <= sqrt(1 - max(0, x2)^2).
        let e = wedge();
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..2000 {
            let x = sample_cone_point(&soc3(), Region::Interior, &mut rng)
                .scale(rng.gen_range(0.1..4.0));
            let m = x[1].max(0.0);
            let explicit =
                x[1] <= 1.0 + 1e-9 && 1.0 + x[0].abs() - x[2] <= (1.0 - (m * m).min(1.0)).sqrt() + 1e-9;
            let got = e.membership(&x).unwrap();
            let margin1 = 1.0 - x[1];
            let margin2 = (1.0 - (m * m).min(1.0)).sqrt() - (1.0 + x[0].abs() - x[2]);
            if margin1.abs() > 1e-6 && margin2.abs() > 1e-6 {
                assert_eq!(got, explicit, "x = {:?}", x.entries());
            }
        }
    }

    #[test]
    fn separate_pinned_tee() {
        let e = tee();
        let r = e.separate(&v(&[0.0, 0.0, 0.4])).unwrap();
        match r {
            SeparationResult::Separated { cut, violation } => {
                assert_eq!(cut.beta, 1.0);
                assert!((violation - 0.8).abs() < 1e-12);
                match cut.form {
                    CutForm::ConvexRadical { affine, rhs, radical, n } => {
                        assert_eq!(affine.entries(), &[1.0, 0.0, 2.0]);
                        assert_eq!(rhs, 2.0);
                        assert_eq!(radical.entries(), &[-1.0, 0.0, 0.0]);
                        assert_eq!(n, 1.0);
                    }
                    other => panic!("expected radical cut, got {other:?}"),
                }
            }
            other => panic!("expected separation, got {other:?}"),
        }
        assert!(matches!(e.separate(&v(&[0.0, 0.0, 1.5])).unwrap(), SeparationResult::Member));
    }

    #[test]
    fn separate_pinned_wedge_linear() {
        let e = wedge();
        let r = e.separate(&v(&[0.0, 2.0, 3.0])).unwrap();
        match r {
            SeparationResult::Separated { cut, violation } => {
                assert_eq!(cut.beta, 1.0);
                assert!((violation - 1.0).abs() < 1e-12);
                match cut.form {
                    CutForm::Linear { coeffs, rhs } => {
                        // -x2 >= -1, i.e. x2 <= 1.
                        assert_eq!(coeffs.entries(), &[0.0, -1.0, 0.0]);
                        assert_eq!(rhs, -1.0);
                    }
                    other => panic!("expected linear cut, got {other:?}"),
                }
            }
            other => panic!("expected separation, got {other:?}"),
        }
    }

    #[test]
    fn separate_outside_cone() {
        let e = tee();
        match e.separate(&v(&[2.0, 0.0, 1.0])).unwrap() {
            SeparationResult::OutsideCone { deficit } => assert!((deficit - 1.0).abs() < 1e-12),
            other => panic!("expected outside-cone verdict, got {other:?}"),
        }
    }

    #[test]
    fn convex_cut_margin_matches_hull_tee() {
        // At beta = 1 the cut is 2 - (x1 + 2 x3) <= sqrt(x3^2 - x2^2).
        let e = tee();
        let x = v(&[0.0, 0.0, 0.4]);
        // lhs = 2 - 0.8 = 1.2, radical = sqrt(0.16) = 0.4, margin = -0.8.
        let m = e.convex_cut_margin(Side::One, 1.0, &x).unwrap();
        assert!((m + 0.8).abs() < 1e-12);
        let x = v(&[0.0, 0.0, 1.0]);
        let m = e.convex_cut_margin(Side::One, 1.0, &x).unwrap();
        assert!((m - 1.0).abs() < 1e-12);
        assert!(e.convex_cut_margin(Side::One, 5.0, &x).is_err(), "beta outside B1");
    }

    #[test]
    fn conic_form_membership_implies_cut() {
        // Whenever N(beta) > 0, membership of the conic-form vector forces
        // the cut to hold; the converse needs the CQR condition.
        let e = tee();
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..2000 {
            let x = sample_cone_point(&soc3(), Region::Interior, &mut rng)
                .scale(rng.gen_range(0.1..10.0));
            for beta in [1.0, 1.5] {
                let vec = e.conic_form_vector(Side::One, beta, &x).unwrap();
                if e.disjunction().cone().contains(&vec, 1e-9).unwrap() {
                    let margin = e.convex_cut_margin(Side::One, beta, &x).unwrap();
                    assert!(margin >= -1e-7, "beta = {beta}, x = {:?}", x.entries());
                }
            }
        }
    }

    #[test]
    fn conic_form_equivalence_under_cqr() {
        // Opposing shallow vectors: the CQR condition holds at every beta and
        // the conic form is exactly equivalent to the cut.
        let d = normalize(soc3(), v(&[2.0, 0.0, -1.0]), 0.0, v(&[-2.0, 0.0, -1.0]), 0.0).unwrap();
        let e = CutEngine::new(d).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(49);
        for beta in [0.5, 1.0, 2.0] {
            assert!(e.cqr_holds(Side::One, beta).unwrap());
            for _ in 0..1000 {
                let x = sample_cone_point(&soc3(), Region::Interior, &mut rng)
                    .scale(rng.gen_range(0.1..10.0));
                let margin = e.convex_cut_margin(Side::One, beta, &x).unwrap();
                let vec = e.conic_form_vector(Side::One, beta, &x).unwrap();
                let in_cone = e.disjunction().cone().contains(&vec, 1e-9).unwrap();
                if margin.abs() > 1e-6 {
                    assert_eq!(margin >= 0.0, in_cone, "beta = {beta}, x = {:?}", x.entries());
                }
            }
        }
    }

    #[test]
    fn cqr_examples() {
        let e = wedge();
        assert!(!e.cqr_holds(Side::One, 1.0).unwrap(), "rhs -1 keeps the origin feasible");
        let e = tee();
        assert!(!e.cqr_holds(Side::One, 1.0).unwrap());
        // Opposing shallow vectors: some convex combination falls in -K.
        let d = normalize(soc3(), v(&[2.0, 0.0, -1.0]), 0.0, v(&[-2.0, 0.0, -1.0]), 0.0).unwrap();
        let e = CutEngine::new(d).unwrap();
        assert!(e.b_sets().side_contains(Side::One, 1.0, 0.0));
        assert!(e.cqr_holds(Side::One, 1.0).unwrap());
    }

    #[test]
    fn linear_cut_requires_degenerate_radicand() {
        let e = wedge();
        let cut = e.linear_cut(Side::One, 1.0).unwrap();
        match cut.form {
            CutForm::Linear { coeffs, rhs } => {
                assert_eq!(coeffs.entries(), &[0.0, -1.0, 0.0]);
                assert_eq!(rhs, -1.0);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(e.linear_cut(Side::One, 2.0).is_err());
    }

    #[test]
    fn linear_certificate_pinned() {
        let e = tee();
        let cert = e.linear_certificate(Side::One, 1.0, &[1.0, 0.0]).unwrap();
        assert!((cert.s - 0.5).abs() < 1e-12);
        assert_eq!(cert.alpha_side.entries(), &[0.5, 0.0, 0.5]);
        assert_eq!(cert.alpha_other.entries(), &[-0.5, 0.0, 0.5]);
        assert_eq!(cert.mu.entries(), &[0.5, 0.0, 1.5]);
        // alpha_other sits on the cone boundary by construction.
        assert!((cert.alpha_other.tilde_norm2() - cert.alpha_other.height()).abs() < 1e-12);
        // mu is consistent from both sides.
        let via_two = cert.alpha_other.combine(1.0, e.disjunction().c2(), 1.0);
        assert_eq!(cert.mu, via_two);
    }

    #[test]
    fn linear_certificate_rejects_aligned_direction() {
        let e = tee();
        assert!(matches!(
            e.linear_certificate(Side::One, 1.0, &[-1.0, 0.0]),
            Err(Error::NoCertificate(_))
        ));
        assert!(e.linear_certificate(Side::One, 1.0, &[0.5, 0.5]).is_err(), "not unit");
    }

    #[test]
    fn certificate_inequality_is_valid_on_union() {
        let e = wedge();
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for beta in [1.0, 1.5, 2.0, 4.0] {
            for _ in 0..50 {
                let ang: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                let w = [ang.cos(), ang.sin()];
                let Ok(cert) = e.linear_certificate(Side::One, beta, &w) else { continue };
                // mu'x >= beta * c1_0 on side-1 points and >= c2_0 on side-2
                // points; with beta*c1_0 >= c2_0 the inequality mu'x >= c2_0
                // is valid on the whole union.
                for _ in 0..50 {
                    let x = sample_cone_point(&soc3(), Region::Interior, &mut rng)
                        .scale(rng.gen_range(0.1..4.0));
                    let d = e.disjunction();
                    let on1 = d.c1().dot(&x) >= d.c1_0() as f64;
                    let on2 = d.c2().dot(&x) >= d.c2_0() as f64;
                    if on1 {
                        assert!(cert.mu.dot(&x) >= beta * d.c1_0() as f64 - 1e-9);
                    }
                    if on2 {
                        assert!(cert.mu.dot(&x) >= d.c2_0() as f64 - 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn cuts_enumeration() {
        let e = tee();
        let cuts = e.cuts(5).unwrap();
        // Both collapsed sides sit at the singleton beta = 1.
        assert_eq!(cuts.len(), 2);
        assert!(cuts.iter().all(|c| c.beta == 1.0));
        let e = wedge();
        let cuts = e.cuts(11).unwrap();
        assert!(!cuts.is_empty());
        assert!(matches!(cuts[0].form, CutForm::Linear { .. }), "beta = 1 degenerates");
        assert!(cuts[1..].iter().all(|c| matches!(c.form, CutForm::ConvexRadical { .. })));
    }

    #[test]
    fn cuts_are_valid_on_union_points() {
        for e in [tee(), wedge()] {
            let d = e.disjunction().clone();
            let cuts = e.cuts(9).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(59);
            let mut produced = 0;
            while produced < 500 {
                let x = sample_cone_point(&soc3(), Region::Interior, &mut rng)
                    .scale(rng.gen_range(0.1..5.0));
                let on1 = d.c1().dot(&x) >= d.c1_0() as f64 - 1e-12;
                let on2 = d.c2().dot(&x) >= d.c2_0() as f64 - 1e-12;
                if !on1 && !on2 {
                    continue;
                }
                produced += 1;
                for cut in &cuts {
                    match &cut.form {
                        CutForm::Linear { coeffs, rhs } => {
                            assert!(coeffs.dot(&x) >= rhs - 1e-9, "linear cut cuts union point");
                        }
                        CutForm::ConvexRadical { .. } => {
                            let m = e.convex_cut_margin(cut.side, cut.beta, &x).unwrap();
                            assert!(m >= -1e-9, "cut at beta = {} cuts union point", cut.beta);
                        }
                    }
                }
            }
        }
    }
}

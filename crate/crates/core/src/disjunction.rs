//! Instance model and preflight classification for two-term disjunctions
//! `c1'x >= c1_0  OR  c2'x >= c2_0` on a cone.
//!
//! Normalization scales each side so its right-hand side lies in `{0, +-1}`
//! and orders the sides so `c1_0 >= c2_0`. Preflight checks the containment
//! and strict-feasibility assumptions, computes the multiplier sets that
//! certify closedness of the hull, and decides whether a single inequality
//! describes the closed convex hull.

use serde::{Deserialize, Serialize};

use crate::cone::{AmbientVector, ConeSpec, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::interval::{quadratic_nonpositive_set, BetaInterval};

/// A normalized two-term disjunction on a cone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Disjunction {
    cone: ConeSpec,
    c1: AmbientVector,
    c1_0: i8,
    c2: AmbientVector,
    c2_0: i8,
    swapped: bool,
}

/// Multiplier ranges certifying recession-cone containments; both nonempty
/// implies the convex hull of the union is closed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DSets {
    pub d1: BetaInterval,
    pub d2: BetaInterval,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Containment {
    None,
    C1subC2,
    C2subC1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Closedness {
    Closed,
    NotClosed,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    BothDNonempty,
    D1EmptyD2Nonempty,
    D2EmptyD1Nonempty,
    BothDEmpty,
}

/// Preflight verdicts for a normalized instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub assumption1_holds: bool,
    pub containment: Containment,
    pub assumption2_holds: bool,
    pub strict_feasible: (bool, bool),
    pub hull_is_cone: bool,
    pub conv_closed: Closedness,
    pub single_inequality: bool,
    pub case_tag: CaseTag,
    pub d_sets: DSets,
}

impl Disjunction {
    pub fn cone(&self) -> &ConeSpec {
        &self.cone
    }
    pub fn c1(&self) -> &AmbientVector {
        &self.c1
    }
    pub fn c2(&self) -> &AmbientVector {
        &self.c2
    }
    pub fn c1_0(&self) -> i8 {
        self.c1_0
    }
    pub fn c2_0(&self) -> i8 {
        self.c2_0
    }
    /// Whether normalization exchanged the two sides of the user's input.
    pub fn swapped(&self) -> bool {
        self.swapped
    }
    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    /// Coefficient vector of the requested side (1 or 2).
    pub fn side(&self, side: Side) -> (&AmbientVector, i8) {
        match side {
            Side::One => (&self.c1, self.c1_0),
            Side::Two => (&self.c2, self.c2_0),
        }
    }
}

/// Which side of the disjunction an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    One,
    Two,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::One => Side::Two,
            Side::Two => Side::One,
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Side::One => 1,
            Side::Two => 2,
        }
    }
}

/// Build a normalized instance from raw inequality data.
///
/// Each side is scaled by a positive factor so its right-hand side is 0 or
/// +-1, and the sides are swapped if necessary so `c1_0 >= c2_0`.
pub fn normalize(
    cone: ConeSpec,
    c1: AmbientVector,
    c1_0: f64,
    c2: AmbientVector,
    c2_0: f64,
) -> Result<Disjunction> {
    let n = cone.dim();
    for (name, c) in [("c1", &c1), ("c2", &c2)] {
        if c.dim() != n {
            return Err(Error::InvalidInstance(format!(
                "{name} has dimension {} but the cone has dimension {n}",
                c.dim()
            )));
        }
        if c.entries().iter().all(|v| *v == 0.0) {
            return Err(Error::InvalidInstance(format!("{name} is the zero vector")));
        }
    }
    if !c1_0.is_finite() || !c2_0.is_finite() {
        return Err(Error::InvalidInstance("non-finite right-hand side".into()));
    }

    let scale_side = |c: AmbientVector, rhs: f64| -> (AmbientVector, i8) {
        if rhs.abs() > 0.0 {
            (c.scale(1.0 / rhs.abs()), if rhs > 0.0 { 1 } else { -1 })
        } else {
            (c, 0)
        }
    };
    let (c1, c1_0) = scale_side(c1, c1_0);
    let (c2, c2_0) = scale_side(c2, c2_0);

    let (c1, c1_0, c2, c2_0, swapped) = if c1_0 >= c2_0 {
        (c1, c1_0, c2, c2_0, false)
    } else {
        (c2, c2_0, c1, c1_0, true)
    };
    Ok(Disjunction { cone, c1, c1_0, c2, c2_0, swapped })
}

/// Coefficients of the boundary quadratic `a*b^2 - 2*m*b + c` whose sign
/// decides whether `b*c1 - c2` lies inside or outside the cone pair.
#[derive(Debug, Clone, Copy)]
pub(crate) struct BoundaryQuadratic {
    /// `|c1~|^2 - c1_n^2`
    pub a: f64,
    /// `c1~'c2~ - c1_n c2_n`
    pub m: f64,
    /// `|c2~|^2 - c2_n^2`
    pub c: f64,
}

pub(crate) fn boundary_quadratic(d: &Disjunction) -> BoundaryQuadratic {
    let c1 = &d.c1;
    let c2 = &d.c2;
    let t1 = c1.tilde();
    let t2 = c2.tilde();
    BoundaryQuadratic {
        a: crate::cone::dot(t1, t1) - c1.height() * c1.height(),
        m: crate::cone::dot(t1, t2) - c1.height() * c2.height(),
        c: crate::cone::dot(t2, t2) - c2.height() * c2.height(),
    }
}

/// `{b : c2_n - b*c1_n >= 0}` (resp. sides swapped) as an interval.
fn height_halfline(c_num: f64, c_den: f64) -> BetaInterval {
    // Solve c_num - b * c_den >= 0.
    if c_den > 0.0 {
        BetaInterval::at_most(c_num / c_den, true)
    } else if c_den < 0.0 {
        BetaInterval::at_least(c_num / c_den, true)
    } else if c_num >= 0.0 {
        BetaInterval::all()
    } else {
        BetaInterval::Empty
    }
}

/// Intersect a union of disjoint intervals with a constraint interval,
/// merging the (provably convex) result into a single interval.
fn intersect_pieces(pieces: &[BetaInterval], constraint: &BetaInterval) -> BetaInterval {
    let mut result = BetaInterval::Empty;
    for piece in pieces {
        let inter = piece.intersect(constraint);
        if inter.is_empty() {
            continue;
        }
        result = match result {
            BetaInterval::Empty => inter,
            BetaInterval::Range { lo, hi, lo_closed, hi_closed } => {
                // The solution set is convex; take the hull if rounding
                // split it into touching pieces.
                let (ilo, ihi) = (inter.lo().unwrap(), inter.hi().unwrap());
                BetaInterval::range(lo.min(ilo), hi.max(ihi), lo_closed, hi_closed)
            }
        };
    }
    result
}

fn require_soc(d: &Disjunction) -> Result<()> {
    match d.cone {
        ConeSpec::SecondOrder { .. } => Ok(()),
        ConeSpec::POrder { .. } => Err(Error::InvalidArgument(
            "operation is defined for second-order cone instances only".into(),
        )),
    }
}

/// The multiplier sets `{b : c2 - b*c1 in K}` and `{b : c1 - b*c2 in K}`.
pub fn d_sets(d: &Disjunction) -> Result<DSets> {
    require_soc(d)?;
    let q = boundary_quadratic(d);
    // Side 1: c2_n - b*c1_n >= 0 and N1(b) = a b^2 - 2 m b + c <= 0.
    let d1 = intersect_pieces(
        &quadratic_nonpositive_set(q.a, q.m, q.c),
        &height_halfline(d.c2.height(), d.c1.height()),
    );
    // Side 2: c1_n - b*c2_n >= 0 and N2(b) = c b^2 - 2 m b + a <= 0.
    let d2 = intersect_pieces(
        &quadratic_nonpositive_set(q.c, q.m, q.a),
        &height_halfline(d.c1.height(), d.c2.height()),
    );
    Ok(DSets { d1, d2 })
}

/// `{b : b * lhs_rhs >= rhs_rhs}` for right-hand sides in `{0, +-1}`.
pub(crate) fn rhs_halfline(lhs_rhs: i8, rhs_rhs: i8) -> BetaInterval {
    match lhs_rhs.cmp(&0) {
        std::cmp::Ordering::Greater => BetaInterval::at_least(rhs_rhs as f64 / lhs_rhs as f64, true),
        std::cmp::Ordering::Less => BetaInterval::at_most(rhs_rhs as f64 / lhs_rhs as f64, true),
        std::cmp::Ordering::Equal => {
            if rhs_rhs <= 0 {
                BetaInterval::all()
            } else {
                BetaInterval::Empty
            }
        }
    }
}

/// Decide whether one side's feasible set contains the other's, via the
/// consistency of the dual multiplier system.
pub fn containment(d: &Disjunction) -> Result<Containment> {
    let sets = d_sets(d)?;
    let nonneg = BetaInterval::at_least(0.0, true);
    // C1 within C2: exists b >= 0 with b*c1_0 >= c2_0 and c2 - b*c1 in K.
    let sys1 = sets
        .d1
        .intersect(&nonneg)
        .intersect(&rhs_halfline(d.c1_0, d.c2_0));
    if !sys1.is_empty() {
        return Ok(Containment::C1subC2);
    }
    let sys2 = sets
        .d2
        .intersect(&nonneg)
        .intersect(&rhs_halfline(d.c2_0, d.c1_0));
    if !sys2.is_empty() {
        return Ok(Containment::C2subC1);
    }
    Ok(Containment::None)
}

/// Strict feasibility of each side: the side meets the interior of the cone.
///
/// For nonzero `c`, the side `{x in K : c'x >= c_0}` is strictly feasible
/// exactly when `c` is not in `-K` or `c_0 = -1`: the supremum of `c'x` over
/// the cone is unbounded unless `c` lies in `-K`, in which case it is
/// nonpositive and strictly negative on the interior.
pub fn strict_feasibility(d: &Disjunction) -> Result<(bool, bool)> {
    let check = |c: &AmbientVector, c_0: i8| -> Result<bool> {
        let tag = d.cone.classify(c, DEFAULT_TOL)?;
        Ok(!tag.in_neg_cone() || c_0 == -1)
    };
    Ok((check(&d.c1, d.c1_0)?, check(&d.c2, d.c2_0)?))
}

/// Assemble the full preflight report for a second-order cone instance.
pub fn preflight(d: &Disjunction) -> Result<ClassificationReport> {
    require_soc(d)?;
    let tol = DEFAULT_TOL;
    let sets = d_sets(d)?;
    let cont = containment(d)?;
    let assumption1_holds = cont == Containment::None;
    let strict_feasible = strict_feasibility(d)?;
    let assumption2_holds = strict_feasible.0 && strict_feasible.1;

    let tag1 = d.cone.classify(&d.c1, tol)?;
    let tag2 = d.cone.classify(&d.c2, tol)?;
    let hull_is_cone = tag1.in_cone() && tag2.in_cone() && d.c2_0 <= 0;

    let case_tag = match (sets.d1.is_empty(), sets.d2.is_empty()) {
        (false, false) => CaseTag::BothDNonempty,
        (true, false) => CaseTag::D1EmptyD2Nonempty,
        (false, true) => CaseTag::D2EmptyD1Nonempty,
        (true, true) => CaseTag::BothDEmpty,
    };

    let assumptions_hold = assumption1_holds && assumption2_holds;

    // N1(1) > 0 means c1 - c2 stays outside both cones, the setting in which
    // the single-inequality description applies.
    let q = boundary_quadratic(d);
    let n1_at_one = q.a - 2.0 * q.m + q.c;
    let single_inequality = assumptions_hold
        && n1_at_one > 0.0
        && (tag1.in_cone()
            || tag2.in_cone()
            || (d.c1_0 == d.c2_0 && d.c1_0 != 0 && case_tag == CaseTag::BothDNonempty));

    let conv_closed = if case_tag == CaseTag::BothDNonempty {
        // Re-verify a witness pair before declaring closedness.
        let b1 = witness_point(&sets.d1);
        let b2 = witness_point(&sets.d2);
        let w1 = d.c2.combine(1.0, &d.c1, -b1);
        let w2 = d.c1.combine(1.0, &d.c2, -b2);
        if d.cone.contains(&w1, 1e-7)? && d.cone.contains(&w2, 1e-7)? {
            Closedness::Closed
        } else {
            Closedness::Unknown
        }
    } else if d.c1_0 > d.c2_0 && assumptions_hold && !hull_is_cone {
        // Not closed as soon as some point of the cone is separated by an
        // emitted cut; search a deterministic sample for a witness.
        if crate::cut_engine::separated_cone_point_exists(d, tol)? {
            Closedness::NotClosed
        } else {
            Closedness::Unknown
        }
    } else {
        Closedness::Unknown
    };

    Ok(ClassificationReport {
        assumption1_holds,
        containment: cont,
        assumption2_holds,
        strict_feasible,
        hull_is_cone,
        conv_closed,
        single_inequality,
        case_tag,
        d_sets: sets,
    })
}

/// A finite representative of a nonempty interval.
fn witness_point(interval: &BetaInterval) -> f64 {
    match *interval {
        BetaInterval::Empty => f64::NAN,
        BetaInterval::Range { lo, hi, .. } => {
            if lo.is_finite() && hi.is_finite() {
                0.5 * (lo + hi)
            } else if lo.is_finite() {
                lo
            } else if hi.is_finite() {
                hi
            } else {
                0.0
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::sample_cone_point;
    use crate::cone::Region;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v(entries: &[f64]) -> AmbientVector {
        AmbientVector::new(entries.to_vec()).unwrap()
    }

    fn soc3() -> ConeSpec {
        ConeSpec::second_order(3).unwrap()
    }

    /// The worked instance `x3 >= 1 OR x1 + x3 >= 1`.
    pub(crate) fn tee_instance() -> Disjunction {
        normalize(soc3(), v(&[0.0, 0.0, 1.0]), 1.0, v(&[1.0, 0.0, 1.0]), 1.0).unwrap()
    }

    /// The worked instance `-x2 >= 0 OR -x3 >= -1`.
    pub(crate) fn wedge_instance() -> Disjunction {
        normalize(soc3(), v(&[0.0, -1.0, 0.0]), 0.0, v(&[0.0, 0.0, -1.0]), -1.0).unwrap()
    }

    #[test]
    fn normalize_scales_to_unit_rhs() {
        let d = normalize(soc3(), v(&[0.0, 0.0, 2.0]), 2.0, v(&[1.0, 0.0, 1.0]), 1.0).unwrap();
        assert_eq!(d.c1().entries(), &[0.0, 0.0, 1.0]);
        assert_eq!(d.c1_0(), 1);
        assert_eq!(d.c2().entries(), &[1.0, 0.0, 1.0]);
        assert!(!d.swapped());

        let d = normalize(soc3(), v(&[0.0, 0.0, 1.0]), 0.5, v(&[1.0, 0.0, 1.0]), 1.0).unwrap();
        assert_eq!(d.c1().entries(), &[0.0, 0.0, 2.0]);
        assert_eq!(d.c1_0(), 1);
    }

    #[test]
    fn normalize_swaps_to_order_rhs() {
        let d = normalize(soc3(), v(&[0.0, -1.0, 0.0]), 0.0, v(&[0.0, 0.0, -1.0]), -1.0).unwrap();
        assert_eq!(d.c1().entries(), &[0.0, -1.0, 0.0]);
        assert_eq!(d.c1_0(), 0);
        assert_eq!(d.c2_0(), -1);
        assert!(!d.swapped());

        let d = normalize(soc3(), v(&[0.0, 0.0, -1.0]), -1.0, v(&[0.0, -1.0, 0.0]), 0.0).unwrap();
        assert_eq!(d.c1().entries(), &[0.0, -1.0, 0.0]);
        assert_eq!(d.c1_0(), 0);
        assert!(d.swapped());
    }

    #[test]
    fn normalize_rejects_zero_vectors() {
        assert!(normalize(soc3(), v(&[0.0, 0.0, 0.0]), 1.0, v(&[1.0, 0.0, 1.0]), 1.0).is_err());
    }

    #[test]
    fn d_sets_tee_instance() {
        // Oracle values: D1 = (-inf, 0], D2 = (-inf, 1/2].
        let sets = d_sets(&tee_instance()).unwrap();
        assert_eq!(sets.d1.hi(), Some(0.0));
        assert_eq!(sets.d1.lo(), Some(f64::NEG_INFINITY));
        assert_eq!(sets.d2.hi(), Some(0.5));
        assert_eq!(sets.d2.lo(), Some(f64::NEG_INFINITY));
    }

    #[test]
    fn d_sets_wedge_instance() {
        let sets = d_sets(&wedge_instance()).unwrap();
        assert!(sets.d1.is_empty());
        assert_eq!(sets.d2.lo(), Some(1.0));
        assert_eq!(sets.d2.hi(), Some(f64::INFINITY));
    }

    #[test]
    fn d_sets_identical_sides() {
        let d = normalize(soc3(), v(&[0.0, 0.0, 1.0]), 1.0, v(&[0.0, 0.0, 1.0]), 1.0).unwrap();
        let sets = d_sets(&d).unwrap();
        assert_eq!(sets.d1.hi(), Some(1.0));
        assert_eq!(sets.d2.hi(), Some(1.0));
    }

    #[test]
    fn containment_examples() {
        assert_eq!(containment(&tee_instance()).unwrap(), Containment::None);
        assert_eq!(containment(&wedge_instance()).unwrap(), Containment::None);
        let d = normalize(soc3(), v(&[0.0, 0.0, 1.0]), 1.0, v(&[0.0, 0.0, 0.5]), 0.0).unwrap();
        assert_eq!(containment(&d).unwrap(), Containment::C1subC2);
    }

    #[test]
    fn strict_feasibility_examples() {
        let d = normalize(soc3(), v(&[0.0, -1.0, 0.0]), 0.0, v(&[0.0, 0.0, 1.0]), 1.0).unwrap();
        // After ordering, c1 is the rhs-1 side; the -e2 side sits second.
        let (s1, s2) = strict_feasibility(&d).unwrap();
        assert!(s1 && s2);

        let d = normalize(soc3(), v(&[0.0, 0.0, -1.0]), 0.0, v(&[0.0, 0.0, 1.0]), 1.0).unwrap();
        let (_, s2) = strict_feasibility(&d).unwrap();
        assert!(!s2, "c in -int(K) with rhs 0 has no strictly feasible point");

        let d = normalize(soc3(), v(&[0.0, 0.0, -1.0]), -1.0, v(&[0.0, 0.0, 1.0]), 1.0).unwrap();
        let (_, s2) = strict_feasibility(&d).unwrap();
        assert!(s2, "rhs -1 keeps a neighborhood of the origin feasible");
    }

    #[test]
    fn strict_feasibility_sampling_oracle() {
        // c = (0,-1,0), rhs 0: attainable on interior points such as (0,-1,1.01).
        let d = normalize(soc3(), v(&[0.0, -1.0, 0.0]), 0.0, v(&[0.0, 0.0, 1.0]), 1.0).unwrap();
        let side = if d.swapped() { d.c2() } else { d.c1() };
        assert_eq!(side.entries(), &[0.0, -1.0, 0.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut found = false;
        for _ in 0..100_000 {
            let x = sample_cone_point(&soc3(), Region::Interior, &mut rng);
            if side.dot(&x) >= 0.0 {
                found = true;
                break;
            }
        }
        assert!(found);
    }

    #[test]
    fn preflight_tee_instance() {
        let r = preflight(&tee_instance()).unwrap();
        assert!(r.assumption1_holds);
        assert!(r.assumption2_holds);
        assert!(r.single_inequality, "c1 = e3 lies in the cone");
        assert_eq!(r.conv_closed, Closedness::Closed);
        assert_eq!(r.case_tag, CaseTag::BothDNonempty);
        assert!(!r.hull_is_cone);
    }

    #[test]
    fn preflight_wedge_instance() {
        let r = preflight(&wedge_instance()).unwrap();
        assert!(r.assumption1_holds);
        assert!(r.assumption2_holds);
        assert!(!r.single_inequality);
        assert_eq!(r.conv_closed, Closedness::NotClosed);
        assert_eq!(r.case_tag, CaseTag::D1EmptyD2Nonempty);
    }

    #[test]
    fn preflight_flags_containment() {
        let d = normalize(soc3(), v(&[0.0, 0.0, 1.0]), 1.0, v(&[0.0, 0.0, 1.0]), 0.0).unwrap();
        let r = preflight(&d).unwrap();
        assert!(!r.assumption1_holds);
        assert_eq!(r.containment, Containment::C1subC2);
        assert!(!r.single_inequality);
    }

    #[test]
    fn d_sets_agree_with_beta_grid() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let mut checked = 0;
        while checked < 100 {
            let n = *[3usize, 4, 5].iter().nth(rng.gen_range(0..3)).unwrap();
            let cone = ConeSpec::second_order(n).unwrap();
            let c1 = v(&(0..n).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<_>>());
            let c2 = v(&(0..n).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<_>>());
            let Ok(d) = normalize(cone, c1, 1.0, c2, 1.0) else { continue };
            let sets = d_sets(&d).unwrap();
            for k in 0..=400 {
                let beta = -20.0 + 0.1 * k as f64;
                let w = d.c2().combine(1.0, d.c1(), -beta);
                let in_cone = d.cone().contains(&w, 1e-12).unwrap();
                let near_edge = [sets.d1.lo(), sets.d1.hi()]
                    .iter()
                    .flatten()
                    .any(|e| (beta - e).abs() < 1e-7);
                if !near_edge {
                    assert_eq!(sets.d1.contains(beta, 0.0), in_cone, "beta = {beta}");
                }
            }
            checked += 1;
        }
    }

    #[test]
    fn containment_soundness_by_sampling() {
        let d = normalize(soc3(), v(&[0.0, 0.0, 1.0]), 1.0, v(&[0.0, 0.0, 1.0]), 0.0).unwrap();
        assert_eq!(containment(&d).unwrap(), Containment::C1subC2);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut produced = 0;
        while produced < 1000 {
            let x = sample_cone_point(&soc3(), Region::Interior, &mut rng);
            let c1x = d.c1().dot(&x);
            if c1x <= 0.0 {
                continue;
            }
            let x = x.scale((d.c1_0() as f64 / c1x).max(1.0));
            assert!(d.c1().dot(&x) >= d.c1_0() as f64 - 1e-9);
            assert!(d.c2().dot(&x) >= d.c2_0() as f64 - 1e-9);
            produced += 1;
        }
    }

    #[test]
    fn inconsistent_systems_empty_under_assumption1() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let nonneg = BetaInterval::at_least(0.0, true);
        let mut checked = 0;
        while checked < 50 {
            let c1 = v(&[rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]);
            let c2 = v(&[rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]);
            let Ok(d) = normalize(soc3(), c1, 1.0, c2, 1.0) else { continue };
            if containment(&d).unwrap() != Containment::None {
                continue;
            }
            let sets = d_sets(&d).unwrap();
            let sys1 = sets.d1.intersect(&nonneg).intersect(&rhs_halfline(d.c1_0(), d.c2_0()));
            let sys2 = sets.d2.intersect(&nonneg).intersect(&rhs_halfline(d.c2_0(), d.c1_0()));
            assert!(sys1.is_empty() && sys2.is_empty());
            checked += 1;
        }
    }
}

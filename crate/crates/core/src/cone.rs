//! Geometry of the second-order (Lorentz) cone and the p-order cone:
//! membership classification, norms, and seeded point sampling.
//!
//! Points live in `R^n` with the convention that the last coordinate is the
//! cone's height and the first `n - 1` coordinates form the base vector.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default absolute classification tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

/// A point of the ambient space. The last entry is the cone height.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmbientVector {
    entries: Vec<f64>,
}

impl AmbientVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "ambient dimension must be at least 2, got {}",
                entries.len()
            )));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite entry".into()));
        }
        Ok(Self { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// The base part: all coordinates except the height.
    pub fn tilde(&self) -> &[f64] {
        &self.entries[..self.entries.len() - 1]
    }

    /// The height coordinate.
    pub fn height(&self) -> f64 {
        self.entries[self.entries.len() - 1]
    }

    pub fn dot(&self, other: &Self) -> f64 {
        dot(&self.entries, &other.entries)
    }

    /// Euclidean norm of the base part.
    pub fn tilde_norm2(&self) -> f64 {
        norm2(self.tilde())
    }

    /// `a * self + b * other`, entrywise.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(u, v)| a * u + b * v)
            .collect();
        Self { entries }
    }

    pub fn scale(&self, a: f64) -> Self {
        Self {
            entries: self.entries.iter().map(|v| a * v).collect(),
        }
    }
}

impl std::ops::Index<usize> for AmbientVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.entries[i]
    }
}

pub fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

pub fn norm2(u: &[f64]) -> f64 {
    dot(u, u).sqrt()
}

/// The p-norm of a slice; `p` must lie in `[1, inf)`.
pub fn p_norm(w: &[f64], p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidInput(format!("p-norm exponent {p} outside [1, inf)")));
    }
    if p == 2.0 {
        return Ok(norm2(w));
    }
    if p == 1.0 {
        return Ok(w.iter().map(|v| v.abs()).sum());
    }
    // Scale out the largest magnitude so |w_j|^p cannot overflow.
    let m = w.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if m == 0.0 {
        return Ok(0.0);
    }
    let s: f64 = w.iter().map(|v| (v.abs() / m).powf(p)).sum();
    Ok(m * s.powf(1.0 / p))
}

/// Which cone a disjunction lives on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ConeSpec {
    SecondOrder { dim: usize },
    POrder { dim: usize, p: f64 },
}

impl ConeSpec {
    pub fn second_order(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidInput(format!("cone dimension {dim} < 2")));
        }
        Ok(ConeSpec::SecondOrder { dim })
    }

    pub fn p_order(dim: usize, p: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidInput(format!("cone dimension {dim} < 2")));
        }
        check_p(p)?;
        Ok(ConeSpec::POrder { dim, p })
    }

    pub fn dim(&self) -> usize {
        match *self {
            ConeSpec::SecondOrder { dim } | ConeSpec::POrder { dim, .. } => dim,
        }
    }

    /// Norm exponent defining the cone (2 for the second-order cone).
    pub fn exponent(&self) -> f64 {
        match *self {
            ConeSpec::SecondOrder { .. } => 2.0,
            ConeSpec::POrder { p, .. } => p,
        }
    }

    /// Exponent of the dual cone: `1/p + 1/q = 1`.
    pub fn dual_exponent(&self) -> f64 {
        let p = self.exponent();
        p / (p - 1.0)
    }

    pub fn classify(&self, v: &AmbientVector, tol: f64) -> Result<Membership> {
        match *self {
            ConeSpec::SecondOrder { .. } => classify_soc(v, tol),
            ConeSpec::POrder { p, .. } => classify_porder(v, p, tol),
        }
    }

    pub fn contains(&self, v: &AmbientVector, tol: f64) -> Result<bool> {
        Ok(self.classify(v, tol)?.in_cone())
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::InvalidInput(format!("p-order exponent {p} outside (1, inf)")));
    }
    Ok(())
}

/// Where a point sits relative to a cone `K` and its negative `-K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    InteriorK,
    BoundaryK,
    InteriorNegK,
    BoundaryNegK,
    Outside,
}

impl Membership {
    pub fn in_cone(self) -> bool {
        matches!(self, Membership::InteriorK | Membership::BoundaryK)
    }

    pub fn in_neg_cone(self) -> bool {
        matches!(self, Membership::InteriorNegK | Membership::BoundaryNegK)
    }

    pub fn on_boundary(self) -> bool {
        matches!(self, Membership::BoundaryK | Membership::BoundaryNegK)
    }

    pub fn interior(self) -> bool {
        matches!(self, Membership::InteriorK | Membership::InteriorNegK)
    }

    /// The tag of the mirrored point `-v`.
    pub fn negated(self) -> Self {
        match self {
            Membership::InteriorK => Membership::InteriorNegK,
            Membership::BoundaryK => Membership::BoundaryNegK,
            Membership::InteriorNegK => Membership::InteriorK,
            Membership::BoundaryNegK => Membership::BoundaryK,
            Membership::Outside => Membership::Outside,
        }
    }
}

fn classify_with_norm(v: &AmbientVector, base_norm: f64, tol: f64) -> Membership {
    let h = v.height();
    // Gap to the cone surface; positive inside K, negative inside -K when
    // evaluated on -v. Ties near the origin resolve to BoundaryK.
    let gap = h - base_norm;
    if gap > tol {
        return Membership::InteriorK;
    }
    if gap.abs() <= tol && h >= -tol {
        return Membership::BoundaryK;
    }
    let neg_gap = -h - base_norm;
    if neg_gap > tol {
        return Membership::InteriorNegK;
    }
    if neg_gap.abs() <= tol && -h >= -tol {
        return Membership::BoundaryNegK;
    }
    Membership::Outside
}

/// Classify a point against the second-order cone with absolute tolerance `tol`.
pub fn classify_soc(v: &AmbientVector, tol: f64) -> Result<Membership> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance {tol} must be positive")));
    }
    Ok(classify_with_norm(v, v.tilde_norm2(), tol))
}

/// Classify a point against the p-order cone, `p` in `(1, inf)`.
pub fn classify_porder(v: &AmbientVector, p: f64, tol: f64) -> Result<Membership> {
    check_p(p)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance {tol} must be positive")));
    }
    Ok(classify_with_norm(v, p_norm(v.tilde(), p)?, tol))
}

/// Requested region for [`sample_cone_point`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Interior,
    Boundary,
}

/// Sample a point of the requested region of the cone, deterministic in `rng`.
///
/// Interior points take the base uniformly in the open unit p-ball with the
/// height fixed at 1; boundary points put the height exactly on the surface.
pub fn sample_cone_point<R: Rng>(spec: &ConeSpec, region: Region, rng: &mut R) -> AmbientVector {
    let n = spec.dim();
    let p = spec.exponent();
    let mut tilde = sample_unit_p_ball(n - 1, p, rng);
    let scale: f64 = rng.gen_range(0.0..0.99);
    for t in &mut tilde {
        *t *= scale;
    }
    let height = match region {
        Region::Interior => 1.0,
        Region::Boundary => p_norm(&tilde, p).expect("valid exponent"),
    };
    let mut entries = tilde;
    entries.push(height);
    AmbientVector::new(entries).expect("finite sample")
}

/// A direction on the surface of the unit p-sphere in `R^d`, scaled to norm 1.
fn sample_unit_p_ball<R: Rng>(d: usize, p: f64, rng: &mut R) -> Vec<f64> {
    loop {
        let raw: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = p_norm(&raw, p).expect("valid exponent");
        if norm > 1e-6 {
            return raw.iter().map(|v| v / norm).collect();
        }
    }
}

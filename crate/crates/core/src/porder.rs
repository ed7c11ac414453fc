//! Elementary split disjunctions `t1*x_i >= 1  OR  -t2*x_i >= 1` on the
//! p-order cone. The closed convex hull is a single conic inequality,
//! `|(t1+t2)x~ - 2(t2*x_i + 1)e~i|_p <= (t1+t2)x_n`, and this module also
//! exposes the intermediate quantities of its derivation for cross-checks.

use serde::{Deserialize, Serialize};

use crate::cone::{p_norm, AmbientVector, ConeSpec};
use crate::disjunction::Disjunction;
use crate::error::{Error, Result};

/// An elementary split on `K_p^n`: `t1*x_i >= 1 OR -t2*x_i >= 1` with the
/// coordinate index `i` one-based in `{1, ..., n-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct POrderSplitInstance {
    n: usize,
    p: f64,
    i: usize,
    t1: f64,
    t2: f64,
}

/// How an elementary p-order disjunction resolves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum POrderCase {
    /// Any right-hand-side combination other than `(1, 1)`: the closed
    /// convex hull is the cone itself.
    HullIsCone,
    Split(POrderSplitInstance),
}

impl POrderSplitInstance {
    pub fn new(n: usize, p: f64, i: usize, t1: f64, t2: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInstance(format!("dimension {n} < 2")));
        }
        if !(p > 1.0) || !p.is_finite() {
            return Err(Error::InvalidInstance(format!("exponent {p} outside (1, inf)")));
        }
        if i < 1 || i > n - 1 {
            return Err(Error::InvalidInstance(format!(
                "split coordinate {i} outside 1..={}",
                n - 1
            )));
        }
        if !(t1 > 0.0) || !(t2 > 0.0) || !t1.is_finite() || !t2.is_finite() {
            return Err(Error::InvalidInstance(format!(
                "split slopes must be positive and finite, got t1 = {t1}, t2 = {t2}"
            )));
        }
        Ok(Self { n, p, i, t1, t2 })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn p(&self) -> f64 {
        self.p
    }
    /// One-based split coordinate.
    pub fn i(&self) -> usize {
        self.i
    }
    pub fn t1(&self) -> f64 {
        self.t1
    }
    pub fn t2(&self) -> f64 {
        self.t2
    }

    pub fn cone(&self) -> ConeSpec {
        ConeSpec::p_order(self.n, self.p).expect("validated in constructor")
    }

    /// Large exponents make `|.|^p` ill-conditioned with O(1) data.
    pub fn conditioning_warning(&self) -> Option<String> {
        if self.p > 64.0 {
            Some(format!(
                "exponent p = {} is large; p-th powers of O(1) data lose precision",
                self.p
            ))
        } else {
            None
        }
    }

    fn check_dim(&self, x: &AmbientVector) -> Result<()> {
        if x.dim() != self.n {
            return Err(Error::InvalidArgument(format!(
                "point has dimension {}, instance has {}",
                x.dim(),
                self.n
            )));
        }
        Ok(())
    }
}

/// Interpret a normalized disjunction on a p-order cone as an elementary
/// split. Rejects anything that is not a pair of opposite-sign multiples of
/// one standard unit base vector.
pub fn analyze(d: &Disjunction) -> Result<POrderCase> {
    let (n, p) = match *d.cone() {
        ConeSpec::POrder { dim, p } => (dim, p),
        ConeSpec::SecondOrder { .. } => {
            return Err(Error::InvalidArgument(
                "p-order analysis applies to p-order cone instances".into(),
            ))
        }
    };
    let axis = |c: &AmbientVector| -> Option<(usize, f64)> {
        let mut found = None;
        for (j, v) in c.entries().iter().enumerate() {
            if *v != 0.0 {
                if found.is_some() || j == c.dim() - 1 {
                    return None;
                }
                found = Some((j, *v));
            }
        }
        found
    };
    let (Some((i1, v1)), Some((i2, v2))) = (axis(d.c1()), axis(d.c2())) else {
        return Err(Error::InvalidInstance(
            "p-order instances must be elementary splits: each side a multiple of one standard \
             base unit vector"
                .into(),
        ));
    };
    if i1 != i2 || v1 * v2 >= 0.0 {
        return Err(Error::InvalidInstance(
            "p-order instances must split one coordinate with opposite signs".into(),
        ));
    }
    if d.c1_0() != 1 || d.c2_0() != 1 {
        return Ok(POrderCase::HullIsCone);
    }
    let (t1, t2) = if v1 > 0.0 { (v1, -v2) } else { (v2, -v1) };
    Ok(POrderCase::Split(POrderSplitInstance::new(n, p, i1 + 1, t1, t2)?))
}

/// `(x_n^p - sum_{j not in {i, n}} |x_j|^p)^(1/p)`, the reach of the split
/// coordinate inside the cone slice; `i` is one-based.
fn slice_root(x: &AmbientVector, i: usize, p: f64) -> Result<f64> {
    let n = x.dim();
    let m = x
        .entries()
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != i - 1)
        .fold(0.0f64, |m, (_, v)| m.max(v.abs()));
    if m == 0.0 {
        return Ok(0.0);
    }
    let mut radicand = (x.height() / m).powf(p);
    for (j, v) in x.entries().iter().enumerate() {
        if j != i - 1 && j != n - 1 {
            radicand -= (v.abs() / m).powf(p);
        }
    }
    if radicand < 0.0 {
        if radicand < -1e-12 {
            return Err(Error::Numerical(format!(
                "slice radicand {radicand} is negative; the point is outside the cone slice"
            )));
        }
        radicand = 0.0;
    }
    Ok(m * radicand.powf(1.0 / p))
}

/// Satisfaction margin of the hull inequality:
/// `(t1+t2)x_n - |(t1+t2)x~ - 2(t2*x_i + 1)e~i|_p`. For `x` in the cone,
/// nonnegative exactly on the closed convex hull of the split.
pub fn split_cut_margin(inst: &POrderSplitInstance, x: &AmbientVector) -> Result<f64> {
    inst.check_dim(x)?;
    let t = inst.t1 + inst.t2;
    let mut w: Vec<f64> = x.tilde().iter().map(|v| t * v).collect();
    w[inst.i - 1] -= 2.0 * (inst.t2 * x[inst.i - 1] + 1.0);
    Ok(t * x.height() - p_norm(&w, inst.p)?)
}

/// The largest shift `tau` keeping `x - 2*tau*e^i` in the cone:
/// `tau*(x) = (x_i + (x_n^p - sum_{j not in {i,n}} |x_j|^p)^(1/p)) / 2`.
/// `i` is one-based.
pub fn tau_star(x: &AmbientVector, i: usize, p: f64) -> Result<f64> {
    if i < 1 || i >= x.dim() {
        return Err(Error::InvalidArgument(format!(
            "split coordinate {i} outside 1..={}",
            x.dim() - 1
        )));
    }
    Ok(0.5 * (x[i - 1] + slice_root(x, i, p)?))
}

/// Margin of the derivation's intermediate inequality:
/// `(x_n^p - sum |x_j|^p)^(1/p) - (2 - (t1 - t2)x_i) / (t1 + t2)`.
pub fn pmain_margin(inst: &POrderSplitInstance, x: &AmbientVector) -> Result<f64> {
    inst.check_dim(x)?;
    let root = slice_root(x, inst.i, inst.p)?;
    Ok(root - (2.0 - (inst.t1 - inst.t2) * x[inst.i - 1]) / (inst.t1 + inst.t2))
}

/// Margin of the complementary inequality, with left-hand side
/// `(-2 + (t1 - t2)x_i) / (t1 + t2)`; nonnegative on the whole cone.
pub fn pcomplement_margin(inst: &POrderSplitInstance, x: &AmbientVector) -> Result<f64> {
    inst.check_dim(x)?;
    let root = slice_root(x, inst.i, inst.p)?;
    Ok(root - (-2.0 + (inst.t1 - inst.t2) * x[inst.i - 1]) / (inst.t1 + inst.t2))
}

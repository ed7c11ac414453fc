//! Closed, possibly unbounded intervals of the cut multiplier, plus the
//! quadratic-sign machinery used to compute them.

use serde::{Deserialize, Serialize};

/// An interval of multiplier values. Unbounded ends carry `f64` infinities
/// and are always open.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BetaInterval {
    Empty,
    Range {
        lo: f64,
        hi: f64,
        lo_closed: bool,
        hi_closed: bool,
    },
}

impl BetaInterval {
    pub fn all() -> Self {
        BetaInterval::Range {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
            lo_closed: false,
            hi_closed: false,
        }
    }

    pub fn closed(lo: f64, hi: f64) -> Self {
        if lo > hi {
            BetaInterval::Empty
        } else {
            BetaInterval::Range { lo, hi, lo_closed: true, hi_closed: true }
        }
    }

    pub fn singleton(v: f64) -> Self {
        Self::closed(v, v)
    }

    pub fn at_least(lo: f64, lo_closed: bool) -> Self {
        BetaInterval::Range { lo, hi: f64::INFINITY, lo_closed, hi_closed: false }
    }

    pub fn at_most(hi: f64, hi_closed: bool) -> Self {
        BetaInterval::Range { lo: f64::NEG_INFINITY, hi, lo_closed: false, hi_closed }
    }

    pub fn range(lo: f64, hi: f64, lo_closed: bool, hi_closed: bool) -> Self {
        let lo_closed = lo_closed && lo.is_finite();
        let hi_closed = hi_closed && hi.is_finite();
        if lo > hi || (lo == hi && !(lo_closed && hi_closed)) {
            BetaInterval::Empty
        } else {
            BetaInterval::Range { lo, hi, lo_closed, hi_closed }
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, BetaInterval::Empty)
    }

    pub fn lo(&self) -> Option<f64> {
        match *self {
            BetaInterval::Empty => None,
            BetaInterval::Range { lo, .. } => Some(lo),
        }
    }

    pub fn hi(&self) -> Option<f64> {
        match *self {
            BetaInterval::Empty => None,
            BetaInterval::Range { hi, .. } => Some(hi),
        }
    }

    pub fn is_singleton(&self) -> bool {
        matches!(*self, BetaInterval::Range { lo, hi, .. } if lo == hi)
    }

    /// Membership with an absolute slack at finite endpoints.
    pub fn contains(&self, beta: f64, tol: f64) -> bool {
        match *self {
            BetaInterval::Empty => false,
            BetaInterval::Range { lo, hi, lo_closed, hi_closed } => {
                let above = if lo_closed || !lo.is_finite() { beta >= lo - tol } else { beta > lo - tol };
                let below = if hi_closed || !hi.is_finite() { beta <= hi + tol } else { beta < hi + tol };
                above && below
            }
        }
    }

    pub fn intersect(&self, other: &BetaInterval) -> BetaInterval {
        match (*self, *other) {
            (BetaInterval::Empty, _) | (_, BetaInterval::Empty) => BetaInterval::Empty,
            (
                BetaInterval::Range { lo: a, hi: b, lo_closed: ac, hi_closed: bc },
                BetaInterval::Range { lo: c, hi: d, lo_closed: cc, hi_closed: dc },
            ) => {
                let (lo, lo_closed) = if a > c {
                    (a, ac)
                } else if c > a {
                    (c, cc)
                } else {
                    (a, ac && cc)
                };
                let (hi, hi_closed) = if b < d {
                    (b, bc)
                } else if d < b {
                    (d, dc)
                } else {
                    (b, bc && dc)
                };
                BetaInterval::range(lo, hi, lo_closed, hi_closed)
            }
        }
    }

    /// Clip to `[lo_cap, hi_cap]`, used by grid oracles on unbounded ranges.
    pub fn clip(&self, lo_cap: f64, hi_cap: f64) -> BetaInterval {
        self.intersect(&BetaInterval::closed(lo_cap, hi_cap))
    }

    /// A uniform grid over the interval with unbounded ends clipped.
    pub fn grid(&self, points: usize, lo_cap: f64, hi_cap: f64) -> Vec<f64> {
        let clipped = self.clip(lo_cap, hi_cap);
        match clipped {
            BetaInterval::Empty => Vec::new(),
            BetaInterval::Range { lo, hi, .. } => {
                if points < 2 || lo == hi {
                    return vec![lo];
                }
                let step = (hi - lo) / (points - 1) as f64;
                (0..points).map(|k| lo + step * k as f64).collect()
            }
        }
    }
}

/// Solution set of `a*b^2 - 2*m*b + c (op) 0` as up to two intervals.
/// `op` is `<= 0` for [`quadratic_nonpositive_set`] and `>= 0` for
/// [`quadratic_nonnegative_set`].
#[derive(Debug, Clone, Copy)]
pub struct QuadraticRoots {
    pub lower: f64,
    pub upper: f64,
}

/// Real roots of `a*b^2 - 2*m*b + c = 0`, sorted, when they exist.
pub fn quadratic_roots(a: f64, m: f64, c: f64) -> Option<QuadraticRoots> {
    if a == 0.0 {
        return None;
    }
    let disc = m * m - a * c;
    if disc < 0.0 {
        return None;
    }
    let s = disc.sqrt();
    let r1 = (m - s) / a;
    let r2 = (m + s) / a;
    Some(QuadraticRoots { lower: r1.min(r2), upper: r1.max(r2) })
}

/// `{b : a*b^2 - 2*m*b + c <= 0}` as a list of disjoint intervals.
pub fn quadratic_nonpositive_set(a: f64, m: f64, c: f64) -> Vec<BetaInterval> {
    if a == 0.0 {
        // Linear: -2*m*b + c <= 0.
        return if m > 0.0 {
            vec![BetaInterval::at_least(c / (2.0 * m), true)]
        } else if m < 0.0 {
            vec![BetaInterval::at_most(c / (2.0 * m), true)]
        } else if c <= 0.0 {
            vec![BetaInterval::all()]
        } else {
            vec![]
        };
    }
    match quadratic_roots(a, m, c) {
        None => {
            if a > 0.0 {
                vec![]
            } else {
                vec![BetaInterval::all()]
            }
        }
        Some(QuadraticRoots { lower, upper }) => {
            if a > 0.0 {
                vec![BetaInterval::closed(lower, upper)]
            } else {
                vec![BetaInterval::at_most(lower, true), BetaInterval::at_least(upper, true)]
            }
        }
    }
}

/// `{b : a*b^2 - 2*m*b + c >= 0}` as a list of disjoint intervals.
pub fn quadratic_nonnegative_set(a: f64, m: f64, c: f64) -> Vec<BetaInterval> {
    quadratic_nonpositive_set(-a, -m, -c)
}

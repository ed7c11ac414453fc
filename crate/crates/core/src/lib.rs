//! Closed-form convex-hull descriptions, cut generation, and separation for
//! two-term disjunctions on the second-order cone, plus elementary split
//! disjunctions on p-order cones, with brute-force verification oracles.

pub mod cone;
pub mod cut_engine;
pub mod disjunction;
pub mod error;
pub mod interval;
pub mod oracle;
pub mod porder;

pub use cone::{
    classify_porder, classify_soc, p_norm, sample_cone_point, AmbientVector, ConeSpec, Membership,
    Region, DEFAULT_TOL,
};
pub use cut_engine::{
    BSets, CutDescription, CutEngine, CutForm, InfResult, PointQuadratics, SeparationResult,
    VLICertificate,
};
pub use disjunction::{
    containment, d_sets, normalize, preflight, strict_feasibility, CaseTag, ClassificationReport,
    Closedness, Containment, DSets, Disjunction, Side,
};
pub use error::{Error, Result};
pub use interval::BetaInterval;
pub use oracle::{
    cut_violation, grid_infimum, random_instance, sample_hull_points, tau_roots, verify_validity,
    ValidityReport,
};
pub use porder::{POrderCase, POrderSplitInstance};

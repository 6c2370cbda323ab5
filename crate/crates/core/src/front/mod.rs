//! Flat fronts built from a pair of hyperbolic Gauss maps.
//!
//! The lift is `E = [[G/xi, xi G*/(G-G*)], [1/xi, xi/(G-G*)]]` with
//! `xi = c exp(int dG/(G-G*))`. Every output depends on `xi` only through
//! `|xi|^2`, so only `|c|` is stored and `log |xi|^2` is assembled from the
//! partial-fraction primitive of `dG/(G-G*)`.

mod ends;
mod geometry;
mod hermitian;
mod locus;
mod mesh;
mod spec;

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::sphere::SphereError;

pub use ends::{classify_ends, linear_order, quadratic_order, sasakian_density, EndRecord, OssermanSummary};
pub use geometry::{
    apply_motion, apply_motion_to_point, canonical_data, canonical_data_of, dual, dual_matching, evaluate_front,
    front_from_frame, inversion_motion, log_rho_sq, motion_matrix, xi_log_modulus, CanonicalData, FrontGeometry,
    FrontPoint, GaugedForm, LocalFrame, PreparedFront,
};
pub use hermitian::{adjoint, det2, mat_mul, unimodular_inverse, HermitianPoint, Matrix2};
pub use locus::{singular_locus, SamplingPlan, SingularLocus, Window};
pub use mesh::{mesh, Mesh, DEFAULT_EXCLUSION_FRACTION, DEFAULT_RESOLUTION};
pub use spec::{
    coincidence_order_at_infinity, coincidence_polynomial, front_condition, infer_ends, period_check, point_cmp,
    sort_points, values_agree, FrontCondition, FrontSpec, PeriodReport, PoleRecord, NUMERIC_RESIDUE_TOL,
};


#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrontError {
    #[error("G ≡ G*: the Gauss maps coincide identically")]
    GaussMapsEqual,
    #[error("G and G* are both constant; no flat front has two constant Gauss maps")]
    BothConstant,
    #[error("scale |c| must be positive and finite, got {0}")]
    InvalidScale(f64),
    #[error("the period condition fails: dG/(G-G*) has a non-real residue")]
    PeriodFailed,
    #[error("the point is an end")]
    AtEnd,
    #[error("the point is a pole of the primitive of dG/(G-G*)")]
    PoleOfPrimitive,
    #[error("evaluation produced a non-finite value")]
    NonFinite,
    #[error("motion must have determinant one")]
    NonUnitDeterminant,
    #[error("the motion sends a constant Gauss map to infinity")]
    MotionDegenerates,
    #[error("sampling window is degenerate")]
    DegenerateWindow,
    #[error("resolution must be at least 2, got {0}")]
    InvalidResolution(usize),
    #[error("no sample point survived the exclusion policy")]
    EmptyMesh,
    #[error(transparent)]
    Sphere(#[from] SphereError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

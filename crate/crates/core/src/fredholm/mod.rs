//! Nyström discretisation of Fredholm determinants `det(I - xi K)` on
//! `(t, oo)`, the first-order correction functional
//! `Omega = -det(I - xi K) Tr((I - xi K)^{-1} xi L)`, and the curves
//! `F`, `p0 = F'`, `p1 = Omega'` built from them.

mod curve;
mod export;
mod nystrom;
mod quadrature;

pub(crate) use curve::check_grid;
pub use curve::{
    curve, finite_curve, scaled_difference, CurveMeta, CurveParams, DistributionCurve, Route, ScaledDifference,
};
pub(crate) use export::write_json;
pub use export::{read_curve_csv, sidecar_path, write_curve, write_scaled_difference, CURVE_HEADER};
pub use nystrom::{fredholm_det, omega, Determinant, NystromSystem};
pub use quadrature::{build_rule, default_tail, QuadratureRule};

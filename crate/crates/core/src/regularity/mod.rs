//! Exponents of Green's functions near a set and the Jackson-property grid check.

mod consistency;
mod exponents;
mod jp;

pub use consistency::{
    green_lower_bound, theorem14_consistency, union_jp_check, ConsistencyOptions, ConsistencyReport,
    GreenLowerBound, Outcome, UnionReport,
};
pub use exponents::{
    dyadic_scales, fit_hcp_exponent, fit_ls_exponent, ExponentFit, ExponentKind, FitOptions, ScaleSample,
};
pub use jp::{
    adequate_boundary_mesh, jp_condition5_check, Feasibility, JpOptions, JpReport, LhsNode, PhiNode,
    Violation,
};

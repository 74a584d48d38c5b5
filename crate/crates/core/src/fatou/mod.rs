//! Boundary-limit experiments: Hölder estimates on disc restrictions,
//! tangent-curve comparison, scaling sequences and ray-family verdicts.

pub mod holder;
pub mod limits;
pub mod lindelof;
pub mod rays;
pub mod scaling;
pub mod testfn;

pub use holder::{holder_bound_check, holder_pairs, rescaled_holder_check, restrict_to_disc, HolderReport, RescaledReport, Restriction};
pub use limits::{extrapolate, limit_along, radial_limit_probe, Approach, LimitEstimate, LimitVerdict};
pub use lindelof::{chirka_lindelof_compare, AdmissibleCurve, LindelofOptions, LindelofReport};
pub use rays::{edge_sample, ray_family_limits, summarize, FatouSummary, PointVerdict, RayFamily, RayOptions, Verdict};
pub use scaling::{scaling_montel, ScalingOptions, ScalingReport};
pub use testfn::{BoundCheck, Term, TestFunction};

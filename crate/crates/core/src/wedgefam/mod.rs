//! Wedges with totally real edges, cones at edge points, and the disc
//! families attached to the edge.

pub mod cone;
pub mod family;
pub mod foliation;
pub mod wedge;

pub use cone::{build_cone, build_cone_with, cone_membership, Cone};
pub use family::{
    evaluation_map, flat_disc, flat_family, flat_inverse, glued_family, gluing_residual, invert_evaluation, DiscFamily,
    FamilyOptions, FamilyPoint,
};
pub use foliation::{foliation_check, FoliationReport, FoliationSamples};
pub use wedge::{WedgeDomain, DEFAULT_DELTA};

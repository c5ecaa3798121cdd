//! Cusp and plumbing coordinates near nodes and marked points.

mod annulus;
mod cusp;
mod horocycle;

pub use annulus::{excision_region, plumb, Fixture, NodeRegion};
pub use cusp::{cusp_to_disk, horocycle_length, CUSP_RADIUS};
pub use horocycle::{blend, certificate, certified_radius, validate_horocycle, HorocycleCheck, HorocycleStructure, DEFAULT_DEGREE};

//! Plaque towers: pullbacks of disks along backward orbits.
//!
//! A level is a closed polyline approximating the boundary of `U_n`, the
//! component of `f^{−(n−1)}(U_1)` containing `x_n`. Critical-point containment
//! is decided by winding numbers.

mod census;
mod lift;
mod orbit;
mod signature;
mod tower;
mod winding;

pub use census::{component_census, CensusLevel};
pub use lift::{decimate, lift_boundary, lift_closed, Lift, LiftOptions};
pub use orbit::{BackwardOrbit, OrbitPolicy, ORBIT_TOL};
pub use signature::{signature_estimate, DepthSchedule, Ring, SignatureEstimate, SignatureParams};
pub use tower::{
    index_sequence, pullback_polyline, pullback_tower, rh_check, Containment, Disk, PlaqueLevel, PlaqueTower,
    RhReport, RhViolation, TowerOptions, Truncation,
};
pub use winding::{circle, diameter, distance_to_polyline, winding_number};

//! Finite Blaschke products as boundary models of parabolic basins.

mod angle;
mod blaschke;
mod conjugacy;
mod proximity;

pub use angle::{champernowne2_digits, Angle};
pub use blaschke::{check_denjoy_wolff, BlaschkeProduct, DenjoyWolff};
pub use conjugacy::{conjugacy_residual, phi_inverse, DAdicAngle, PhiInverseTable, MAX_TABLE};
pub use proximity::{boundary_signature, proximity_bits, ProximityBits, MAX_EXACT_STEPS};

//! Signatures of points in the plaque inverse limit of a polynomial map.
//!
//! The crate has three layers:
//!
//! * [`seq_algebra`] and [`sig_lattice`]: exact algebra on almost-equality
//!   classes of binary sequences and the σ-lattice spanned by their principal
//!   ideals.
//! * [`poly_dynamics`] and [`plaque_engine`]: numerical pullback of disks along
//!   backward orbits, critical-point containment by winding numbers, index
//!   windows and signature estimates.
//! * [`boundary_models`]: finite Blaschke products, their conjugacy with
//!   `z ↦ z^d` on the circle, and proximity-bit signatures of boundary angles.
//!
//! Independent work items run on rayon when the `parallel` feature is on (the
//! default); see [`Execution`].

pub mod boundary_models;
pub mod error;
mod exec;
pub mod plaque_engine;
pub mod poly_dynamics;
pub mod seq_algebra;
pub mod sig_lattice;

pub use error::{Error, Result};
pub use exec::Execution;
pub use num_complex::Complex64;

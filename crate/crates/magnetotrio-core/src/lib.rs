//! Planar Coulomb charges in a uniform magnetic field `B ẑ`.
//!
//! Units: Coulomb constant 1, no speed-of-light factor, symmetric gauge
//! `A(r) = ½ B ẑ × r`. Everything here is `no_std` + `alloc`; file formats,
//! threads and the command line live in the `magnetotrio` crate.
#![no_std]
// `!(x > y)` is used on purpose so that NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod dynamics;
pub mod error;
pub mod invariants;
pub mod jacobi;
pub mod linalg;
pub mod model;
pub mod ode;
pub mod scalar;
pub mod solvers;
pub mod vector;

pub use error::Error;
pub use model::{ParticleSpec, PhaseState, SystemSpec};
pub use vector::PlanarVector;

pub type Result<T> = core::result::Result<T, Error>;

//! Entanglement between superposed static charges and the scalar modes of
//! the electromagnetic field in the Lorenz gauge, and the open-loop
//! two-charge tomography that would reveal it.
//!
//! All numerical code is generic over [`Real`]; the aliases below fix the
//! scalar to `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod fock;
pub mod integrals;
pub mod linalg;
pub mod physics;
pub mod quadrature;
pub mod scalar;
pub mod tomography;

pub use error::{Error, Result};
pub use scalar::Real;

pub use num_complex::Complex;

pub type Complex64 = num_complex::Complex<f64>;
pub type Context = physics::PhysicsContext<f64>;
pub type Position = physics::Position3<f64>;
pub type WaveVec = physics::WaveVector<f64>;
pub type Charges = physics::ChargeConfiguration<f64>;
pub type Cutoffs = quadrature::CutoffPair<f64>;
pub type Grid = quadrature::RadialModeGrid<f64>;
pub type Geometry = integrals::SeparationGeometry<f64>;
pub type Fock = fock::FockVector<f64>;
pub type Scenario = tomography::TomographyScenario<f64>;
pub type Gram = tomography::FieldGram<f64>;
pub type Density = tomography::ChargeDensityMatrix<f64>;

//! Numerical laboratory for the relativistic quantum transfer equation
//!
//! ```text
//! i hbar D_tau psi = -L psi - i hbar (div V) psi
//! ```
//!
//! whose solution operator is a weighted composition operator: initial data
//! pulled back along the characteristic flow `G^{-tau}`, damped by the
//! divergence accumulated on the way and rotated by the action phase `S / hbar`.
//!
//! Modules:
//!
//! - [`units`], [`grid`]: constants, unit systems, spacetime points, sampled wavefunctions.
//! - [`flow`]: RK4 characteristics with divergence and action line integrals.
//! - [`lagrangian`]: Fock, relativistic free and classical-potential Lagrangians.
//! - [`propagator`]: the weighted composition operator, pointwise and on grids.
//! - [`dirac`]: Dirac matrices, boosted spinors, bilinear table, scalar reduction.
//! - [`wavepacket`]: dispersion, de Broglie relations, Gaussian packet spreading.
//! - [`spectral`]: phase-closure spectra and the mass/wavenumber/string identities.
//! - [`scenario`]: the reproducible experiment runner behind the `rqte` binary.

pub mod dirac;
pub mod error;
pub mod flow;
pub mod grid;
pub mod lagrangian;
pub mod propagator;
pub mod scenario;
pub mod spectral;
pub mod units;
pub mod wavepacket;

pub use error::{Error, Result};
pub use flow::{Trajectory, VelocityFieldSpec};
pub use grid::{SpacetimePoint, WavefunctionGrid};
pub use lagrangian::LagrangianSpec;
pub use propagator::{DivergenceWeight, PropagatorConfig};
pub use units::{ActionPhase, MassWavenumber, PhysicalConstants, UnitSystem};

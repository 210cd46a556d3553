//! The weighted composition operator
//!
//! ```text
//! W^tau psi0 (y) = psi0(X0) * exp(-w * int_0^tau div V(G^s X0) ds) * exp(i S(tau, y) / hbar)
//! ```
//!
//! with `X0 = G^{-tau}(y)`. `w = 1` evolves `psi` itself, `w = 1/2` evolves
//! the probability amplitude `phi`, whose squared modulus is transported as an
//! invariant density. The divergence weight and the phase are accumulated on
//! the same forward re-integration from `X0`, never on the backward pass.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::flow::{backward_point, integrate_flow, StateLayout, VelocityFieldSpec, DEFAULT_DT};
use crate::grid::{SpacetimePoint, WavefunctionGrid};
use crate::lagrangian::LagrangianSpec;
use crate::units::PhysicalConstants;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DivergenceWeight {
    /// Full divergence: the wavefunction `psi`.
    Full,
    /// Half divergence: the amplitude `phi = (rho / |DY|)^{1/2} e^{-iY}`.
    Half,
}

impl DivergenceWeight {
    #[inline]
    pub fn exponent(self) -> f64 {
        match self {
            DivergenceWeight::Full => 1.0,
            DivergenceWeight::Half => 0.5,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PropagatorConfig {
    pub field: VelocityFieldSpec,
    pub lagrangian: LagrangianSpec,
    pub dt: f64,
    pub weight: DivergenceWeight,
    /// Fraction of grid nodes whose characteristic starts outside the
    /// initial grid above which [`evolve_grid`] logs a warning.
    pub hull_warning_fraction: f64,
}

impl PropagatorConfig {
    pub fn new(field: VelocityFieldSpec, lagrangian: LagrangianSpec, weight: DivergenceWeight) -> Self {
        Self { field, lagrangian, dt: DEFAULT_DT, weight, hull_warning_fraction: 0.05 }
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    pub fn constants(&self) -> &PhysicalConstants {
        self.lagrangian.constants()
    }
}

/// Everything `evolve_point` computes on the way to its value.
#[derive(Debug, Clone, PartialEq)]
pub struct PointEvolution {
    /// `X0 = G^{-tau}(y)`.
    pub origin: SpacetimePoint,
    pub initial_value: Complex64,
    /// `int_0^tau div V ds` along the forward path from `X0`.
    pub divergence_integral: f64,
    /// `S(tau, y)`.
    pub action: f64,
    pub value: Complex64,
}

fn finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

pub fn evolve_point_detailed<F>(
    cfg: &PropagatorConfig,
    psi0: F,
    y: &SpacetimePoint,
    tau: f64,
) -> Result<PointEvolution>
where
    F: Fn(&SpacetimePoint) -> Complex64,
{
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(Error::validation(format!("proper time must be >= 0, got {tau}")));
    }
    if tau == 0.0 {
        let v = psi0(y);
        if !finite(v) {
            return Err(Error::NonFinite("initial data".into()));
        }
        return Ok(PointEvolution {
            origin: y.clone(),
            initial_value: v,
            divergence_integral: 0.0,
            action: 0.0,
            value: v,
        });
    }
    let origin = backward_point(&cfg.field, y, tau, cfg.dt)?;
    let initial_value = psi0(&origin);
    if !finite(initial_value) {
        return Err(Error::NonFinite(format!("initial data at {:?}", origin.x)));
    }
    let path = integrate_flow(&cfg.field, &origin, tau, cfg.dt)?.with_action(&cfg.lagrangian)?;
    let divergence_integral = path.total_divergence();
    let action = path.total_action();
    let weight = (-cfg.weight.exponent() * divergence_integral).exp();
    let phase = Complex64::from_polar(1.0, action / cfg.constants().hbar());
    Ok(PointEvolution {
        origin,
        initial_value,
        divergence_integral,
        action,
        value: initial_value * weight * phase,
    })
}

/// `(W^tau psi0)(y)`.
pub fn evolve_point<F>(cfg: &PropagatorConfig, psi0: F, y: &SpacetimePoint, tau: f64) -> Result<Complex64>
where
    F: Fn(&SpacetimePoint) -> Complex64,
{
    evolve_point_detailed(cfg, psi0, y, tau).map(|e| e.value)
}

/// Applies `W^tau` at every node of a 1-D grid. Off-grid initial data is
/// cubic-interpolated inside the grid and zero outside. Node coordinate times
/// are `time_rate * (grid0.tau + tau)`.
pub fn evolve_grid(cfg: &PropagatorConfig, grid0: &WavefunctionGrid, tau: f64) -> Result<WavefunctionGrid> {
    if cfg.field.dim() != 1 || cfg.field.layout() != StateLayout::Configuration {
        return Err(Error::validation("grid evolution needs a 1-D configuration-space field"));
    }
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(Error::validation(format!("proper time must be >= 0, got {tau}")));
    }
    if tau == 0.0 {
        return Ok(grid0.clone());
    }
    let t_target = cfg.field.time_rate() * (grid0.tau() + tau);
    let psi0 = |p: &SpacetimePoint| grid0.interpolate(p.x[0]);

    let evolved = (0..grid0.len())
        .into_par_iter()
        .map(|i| {
            let y = SpacetimePoint::line(t_target, grid0.position(i));
            evolve_point_detailed(cfg, psi0, &y, tau)
                .map(|e| (e.value, !grid0.contains(e.origin.x[0])))
        })
        .collect::<Result<Vec<_>>>()?;

    let outside = evolved.iter().filter(|(_, out)| *out).count();
    let fraction = outside as f64 / grid0.len() as f64;
    if fraction > cfg.hull_warning_fraction {
        log::warn!(
            "{outside} of {} characteristics start outside the initial grid ({:.1}%)",
            grid0.len(),
            100.0 * fraction
        );
    }
    grid0.with_values(evolved.into_iter().map(|(v, _)| v).collect(), grid0.tau() + tau)
}

/// `max |W^{tau1 + tau2} psi0 - W^{tau2} W^{tau1} psi0|` over the grid nodes.
pub fn compose_check(
    cfg: &PropagatorConfig,
    grid0: &WavefunctionGrid,
    tau1: f64,
    tau2: f64,
) -> Result<f64> {
    let direct = evolve_grid(cfg, grid0, tau1 + tau2)?;
    let stepped = evolve_grid(cfg, &evolve_grid(cfg, grid0, tau1)?, tau2)?;
    Ok(direct
        .values()
        .iter()
        .zip(stepped.values())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max))
}

//! Lagrangians that generate the phase of the transported wavefunction.
//!
//! Signature convention is `(-1, 1, 1, 1)`, so a physical four-velocity has
//! `||V||^2 = -c^2` and the proper-time Lagrangian of a free particle reduces
//! to the rest term `-m c^2`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::flow::{StateLayout, TrajectorySample};
use crate::units::{MassWavenumber, PhysicalConstants};

/// Static potential energy `U(x)`.
pub type Potential = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// `U(x) = k |x|^2 / 2`.
pub fn harmonic_potential(spring: f64) -> Potential {
    Arc::new(move |x: &[f64]| 0.5 * spring * x.iter().map(|v| v * v).sum::<f64>())
}

#[derive(Clone)]
pub enum LagrangianKind {
    /// `(m/2) ||V||^2 - m c^2 / 2`.
    Fock,
    /// `-m c^2 / gamma(v)`, `v` the coordinate speed.
    RelativisticFree,
    /// `m v^2 / 2 - U(x) - m c^2 / 2`; the last term is the `g_00` contribution.
    ClassicalPotential(Potential),
    /// A fixed value, independent of the state.
    Constant(f64),
}

impl fmt::Debug for LagrangianKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LagrangianKind::Fock => f.write_str("Fock"),
            LagrangianKind::RelativisticFree => f.write_str("RelativisticFree"),
            LagrangianKind::ClassicalPotential(_) => f.write_str("ClassicalPotential(..)"),
            LagrangianKind::Constant(v) => write!(f, "Constant({v})"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LagrangianSpec {
    kind: LagrangianKind,
    mass: MassWavenumber,
    constants: PhysicalConstants,
}

impl LagrangianSpec {
    pub fn fock(mass: MassWavenumber, constants: PhysicalConstants) -> Self {
        Self { kind: LagrangianKind::Fock, mass, constants }
    }

    pub fn relativistic_free(mass: MassWavenumber, constants: PhysicalConstants) -> Self {
        Self { kind: LagrangianKind::RelativisticFree, mass, constants }
    }

    pub fn classical(potential: Potential, mass: MassWavenumber, constants: PhysicalConstants) -> Self {
        Self { kind: LagrangianKind::ClassicalPotential(potential), mass, constants }
    }

    pub fn constant(value: f64, mass: MassWavenumber, constants: PhysicalConstants) -> Self {
        Self { kind: LagrangianKind::Constant(value), mass, constants }
    }

    #[inline]
    pub fn kind(&self) -> &LagrangianKind {
        &self.kind
    }

    #[inline]
    pub fn mass(&self) -> MassWavenumber {
        self.mass
    }

    #[inline]
    pub fn constants(&self) -> &PhysicalConstants {
        &self.constants
    }

    /// Same kind and constants, different mass.
    pub fn with_mass(&self, mass: MassWavenumber) -> Self {
        Self { mass, ..self.clone() }
    }

    fn rest_energy(&self) -> f64 {
        self.mass.rest_energy(&self.constants)
    }

    /// Evaluates the Lagrangian at a trajectory sample.
    pub(crate) fn eval_sample(
        &self,
        sample: &TrajectorySample,
        layout: StateLayout,
        time_rate: f64,
    ) -> Result<f64> {
        let (position, velocity) = match layout {
            StateLayout::Configuration => (&sample.point.x[..], &sample.velocity[..]),
            StateLayout::PhaseSpace => sample.point.x.split_at(sample.point.x.len() / 2),
        };
        let value = match &self.kind {
            LagrangianKind::Constant(v) => *v,
            LagrangianKind::Fock => {
                let c = self.constants.c();
                let mut four = Vec::with_capacity(velocity.len() + 1);
                four.push(c * time_rate);
                four.extend_from_slice(velocity);
                eval_fock(self, &four)?
            }
            LagrangianKind::RelativisticFree => {
                let speed = velocity.iter().map(|v| v * v).sum::<f64>().sqrt() / time_rate;
                eval_rel_free(self, speed)?
            }
            LagrangianKind::ClassicalPotential(_) => {
                let coord: Vec<f64> = velocity.iter().map(|v| v / time_rate).collect();
                eval_classical(self, position, &coord)?
            }
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::NonFinite(format!("Lagrangian at tau = {}", sample.tau)))
        }
    }
}

fn wrong_kind(op: &str, spec: &LagrangianSpec) -> Error {
    Error::validation(format!("{op} called on a {:?} Lagrangian", spec.kind))
}

/// Minkowski square with signature (-1, 1, 1, 1); component 0 is `c dt/dtau`.
pub fn minkowski_norm_sq(four_velocity: &[f64]) -> f64 {
    let (time, space) = four_velocity.split_first().expect("empty four-velocity");
    -time * time + space.iter().map(|v| v * v).sum::<f64>()
}

/// Fock's proper-time Lagrangian `(m/2) ||V||^2 - m c^2 / 2`.
pub fn eval_fock(spec: &LagrangianSpec, four_velocity: &[f64]) -> Result<f64> {
    if !matches!(spec.kind, LagrangianKind::Fock) {
        return Err(wrong_kind("eval_fock", spec));
    }
    if four_velocity.len() < 2 || four_velocity.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("four-velocity".into()));
    }
    let m = spec.mass.mass();
    Ok(0.5 * m * minkowski_norm_sq(four_velocity) - 0.5 * spec.rest_energy())
}

/// Classical limit `m v^2 / 2 - U(x) - m c^2 / 2`.
pub fn eval_classical(spec: &LagrangianSpec, x: &[f64], v: &[f64]) -> Result<f64> {
    let LagrangianKind::ClassicalPotential(potential) = &spec.kind else {
        return Err(wrong_kind("eval_classical", spec));
    };
    let u = potential(x);
    if !u.is_finite() {
        return Err(Error::NonFinite(format!("potential at {x:?}")));
    }
    let v2: f64 = v.iter().map(|c| c * c).sum();
    Ok(0.5 * spec.mass.mass() * v2 - u - 0.5 * spec.rest_energy())
}

/// `-m c^2 / gamma` for coordinate speed `speed`.
pub fn eval_rel_free(spec: &LagrangianSpec, speed: f64) -> Result<f64> {
    if !matches!(spec.kind, LagrangianKind::RelativisticFree) {
        return Err(wrong_kind("eval_rel_free", spec));
    }
    let gamma = spec.constants.lorentz_factor(speed)?;
    Ok(-spec.rest_energy() / gamma)
}

/// Weak-field time metric component `g_00 = 1 + 2U / (m c^2)`.
pub fn g00_from_potential(potential: f64, mass: f64, c: f64) -> Result<f64> {
    if !(mass > 0.0 && c > 0.0) {
        return Err(Error::validation("g00 needs positive mass and c"));
    }
    Ok(1.0 + 2.0 * potential / (mass * c * c))
}

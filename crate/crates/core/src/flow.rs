//! Characteristic curves of a spacetime velocity field.
//!
//! A [`VelocityFieldSpec`] supplies the spatial components of the
//! four-velocity, `dx/dtau`, together with a constant time rate `dt/dtau`.
//! Integration is classical fourth-order Runge-Kutta with a fixed step; the
//! divergence and action line integrals are trapezoid sums over the
//! integrator's own samples, so weight and phase always see the same path.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::SpacetimePoint;
use crate::lagrangian::LagrangianSpec;
use crate::units::{ActionPhase, PhysicalConstants};

/// Default proper-time step in natural units.
pub const DEFAULT_DT: f64 = 1e-3;

/// Relative step of the central-difference divergence fallback.
const FD_REL_STEP: f64 = 1e-5;

type VelocityFn = dyn Fn(&SpacetimePoint, &mut [f64]) + Send + Sync;
type DivergenceFn = dyn Fn(&SpacetimePoint) -> f64 + Send + Sync;

/// How a state vector maps onto configuration space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateLayout {
    /// The state is a position; its velocity is the field value.
    Configuration,
    /// The state is `(q, v)` with equal halves; position `q`, velocity `v`.
    PhaseSpace,
}

#[derive(Clone)]
pub struct VelocityFieldSpec {
    dim: usize,
    velocity: Arc<VelocityFn>,
    divergence: Option<Arc<DivergenceFn>>,
    autonomous: bool,
    time_rate: f64,
    layout: StateLayout,
}

impl fmt::Debug for VelocityFieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VelocityFieldSpec")
            .field("dim", &self.dim)
            .field("analytic_divergence", &self.divergence.is_some())
            .field("autonomous", &self.autonomous)
            .field("time_rate", &self.time_rate)
            .field("layout", &self.layout)
            .finish()
    }
}

impl VelocityFieldSpec {
    /// An autonomous field with unit time rate and no analytic divergence.
    /// The closure writes `dx/dtau` into its output slice.
    pub fn new<F>(dim: usize, velocity: F) -> Result<Self>
    where
        F: Fn(&SpacetimePoint, &mut [f64]) + Send + Sync + 'static,
    {
        if !(1..=6).contains(&dim) {
            return Err(Error::validation(format!("field dimension {dim} out of range")));
        }
        Ok(Self {
            dim,
            velocity: Arc::new(velocity),
            divergence: None,
            autonomous: true,
            time_rate: 1.0,
            layout: StateLayout::Configuration,
        })
    }

    pub fn with_divergence<F>(mut self, divergence: F) -> Self
    where
        F: Fn(&SpacetimePoint) -> f64 + Send + Sync + 'static,
    {
        self.divergence = Some(Arc::new(divergence));
        self
    }

    /// Marks the field as depending on coordinate time.
    pub fn non_autonomous(mut self) -> Self {
        self.autonomous = false;
        self
    }

    /// Sets `dt/dtau` (the Lorentz factor for a physical four-velocity).
    pub fn with_time_rate(mut self, rate: f64) -> Result<Self> {
        if !(rate.is_finite() && rate > 0.0) {
            return Err(Error::validation(format!("time rate must be positive, got {rate}")));
        }
        self.time_rate = rate;
        Ok(self)
    }

    pub fn phase_space(mut self) -> Result<Self> {
        if self.dim % 2 != 0 {
            return Err(Error::validation("phase-space layout needs an even dimension"));
        }
        self.layout = StateLayout::PhaseSpace;
        Ok(self)
    }

    /// Uniform translation `dx/dtau = u`.
    pub fn constant(u: Vec<f64>) -> Result<Self> {
        let dim = u.len();
        Ok(Self::new(dim, move |_, out| out.copy_from_slice(&u))?.with_divergence(|_| 0.0))
    }

    /// Free particle moving with coordinate velocity `u`: spatial four-velocity
    /// `gamma u`, time rate `gamma`.
    pub fn relativistic_constant(u: Vec<f64>, k: &PhysicalConstants) -> Result<Self> {
        let speed = u.iter().map(|v| v * v).sum::<f64>().sqrt();
        let gamma = k.lorentz_factor(speed)?;
        Self::constant(u.iter().map(|v| gamma * v).collect())?.with_time_rate(gamma)
    }

    /// 1-D linear field `dx/dtau = a x`, divergence `a`.
    pub fn linear(a: f64) -> Result<Self> {
        Ok(Self::new(1, move |p, out| out[0] = a * p.x[0])?.with_divergence(move |_| a))
    }

    /// Harmonic oscillator in phase space, `(x, v)' = (v, -omega^2 x)`.
    pub fn harmonic_phase_space(omega: f64) -> Result<Self> {
        let w2 = omega * omega;
        Self::new(2, move |p, out| {
            out[0] = p.x[1];
            out[1] = -w2 * p.x[0];
        })?
        .with_divergence(|_| 0.0)
        .phase_space()
    }

    /// The oscillator's configuration-space field on classical spacetime,
    /// `dx/dt = amplitude cos(omega t)`: spatially uniform, divergence-free,
    /// time-dependent.
    pub fn oscillating_drift(amplitude: f64, omega: f64) -> Result<Self> {
        Ok(Self::new(1, move |p, out| out[0] = amplitude * (omega * p.t).cos())?
            .with_divergence(|_| 0.0)
            .non_autonomous())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn is_autonomous(&self) -> bool {
        self.autonomous
    }

    #[inline]
    pub fn time_rate(&self) -> f64 {
        self.time_rate
    }

    #[inline]
    pub fn layout(&self) -> StateLayout {
        self.layout
    }

    pub fn has_analytic_divergence(&self) -> bool {
        self.divergence.is_some()
    }

    #[inline]
    pub fn velocity_into(&self, p: &SpacetimePoint, out: &mut [f64]) {
        (self.velocity)(p, out)
    }

    pub fn velocity(&self, p: &SpacetimePoint) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.velocity_into(p, &mut out);
        out
    }

    /// Spatial divergence of the field. The time component of the
    /// four-velocity is constant so it contributes nothing.
    pub fn divergence(&self, p: &SpacetimePoint) -> f64 {
        match &self.divergence {
            Some(div) => div(p),
            None => self.fd_divergence(p),
        }
    }

    fn fd_divergence(&self, p: &SpacetimePoint) -> f64 {
        let mut probe = p.clone();
        let mut plus = vec![0.0; self.dim];
        let mut minus = vec![0.0; self.dim];
        let mut total = 0.0;
        for j in 0..self.dim {
            let x = p.x[j];
            let h = FD_REL_STEP * x.abs().max(1.0);
            probe.x[j] = x + h;
            self.velocity_into(&probe, &mut plus);
            probe.x[j] = x - h;
            self.velocity_into(&probe, &mut minus);
            probe.x[j] = x;
            total += (plus[j] - minus[j]) / (2.0 * h);
        }
        total
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySample {
    pub tau: f64,
    pub point: SpacetimePoint,
    /// Field value `dx/dtau` at the sample.
    pub velocity: Vec<f64>,
}

/// A sampled characteristic. Proper times start at zero and move
/// monotonically toward the requested final time (decreasing when
/// integrating backward).
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    samples: Vec<TrajectorySample>,
    div_integral: Vec<f64>,
    action_integral: Vec<f64>,
    time_rate: f64,
    layout: StateLayout,
}

impl Trajectory {
    #[inline]
    pub fn samples(&self) -> &[TrajectorySample] {
        &self.samples
    }

    /// Cumulative `int div V dtau` at each sample.
    #[inline]
    pub fn div_integral(&self) -> &[f64] {
        &self.div_integral
    }

    /// Cumulative `int L dtau` at each sample; zeros until [`Trajectory::with_action`].
    #[inline]
    pub fn action_integral(&self) -> &[f64] {
        &self.action_integral
    }

    #[inline]
    pub fn time_rate(&self) -> f64 {
        self.time_rate
    }

    #[inline]
    pub fn layout(&self) -> StateLayout {
        self.layout
    }

    pub fn start(&self) -> &SpacetimePoint {
        &self.samples[0].point
    }

    pub fn end(&self) -> &SpacetimePoint {
        &self.samples[self.samples.len() - 1].point
    }

    pub fn final_tau(&self) -> f64 {
        self.samples[self.samples.len() - 1].tau
    }

    pub fn total_divergence(&self) -> f64 {
        *self.div_integral.last().unwrap_or(&0.0)
    }

    pub fn total_action(&self) -> f64 {
        *self.action_integral.last().unwrap_or(&0.0)
    }

    /// Fills the cumulative action with the given Lagrangian.
    pub fn with_action(mut self, lagrangian: &LagrangianSpec) -> Result<Self> {
        let values = self
            .samples
            .iter()
            .map(|s| lagrangian.eval_sample(s, self.layout, self.time_rate))
            .collect::<Result<Vec<_>>>()?;
        self.action_integral = cumulative_trapezoid(&self.samples, &values);
        Ok(self)
    }

    /// Appends a segment that starts where this one ends. Proper times and
    /// cumulative integrals of `next` are offset by this trajectory's totals.
    pub fn concat(mut self, next: Trajectory) -> Result<Self> {
        if next.samples.is_empty() {
            return Ok(self);
        }
        if self.end().max_abs_diff(next.start()) > 1e-12 * (1.0 + self.end().t.abs()) {
            return Err(Error::validation("trajectory segments are not contiguous"));
        }
        let tau0 = self.final_tau();
        let div0 = self.total_divergence();
        let act0 = self.total_action();
        for (i, mut s) in next.samples.into_iter().enumerate().skip(1) {
            s.tau += tau0;
            self.samples.push(s);
            self.div_integral.push(div0 + next.div_integral[i]);
            self.action_integral.push(act0 + next.action_integral[i]);
        }
        Ok(self)
    }
}

fn cumulative_trapezoid(samples: &[TrajectorySample], values: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(samples.len());
    let mut acc = 0.0;
    out.push(0.0);
    for i in 1..samples.len() {
        acc += 0.5 * (values[i - 1] + values[i]) * (samples[i].tau - samples[i - 1].tau);
        out.push(acc);
    }
    out
}

/// Number of steps and the nominal step for a span, tolerant of the
/// rounding in `span / dt` when `dt` divides the span.
fn step_plan(span: f64, dt: f64) -> usize {
    let ratio = span / dt;
    let nearest = ratio.round();
    if (ratio - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        (nearest as usize).max(1)
    } else {
        ratio.ceil() as usize
    }
}

/// Fixed-step RK4 with reusable stage buffers.
struct Stepper<'a> {
    field: &'a VelocityFieldSpec,
    k: [Vec<f64>; 4],
    stage: SpacetimePoint,
}

impl<'a> Stepper<'a> {
    fn new(field: &'a VelocityFieldSpec) -> Self {
        let d = field.dim;
        Self {
            field,
            k: [vec![0.0; d], vec![0.0; d], vec![0.0; d], vec![0.0; d]],
            stage: SpacetimePoint::new(0.0, vec![0.0; d]),
        }
    }

    /// Advances `p` by proper-time step `h` (negative steps run backward).
    fn step(&mut self, p: &mut SpacetimePoint, h: f64) {
        let rate = self.field.time_rate;
        let d = self.field.dim;
        let [k1, k2, k3, k4] = &mut self.k;

        self.field.velocity_into(p, k1);

        self.stage.t = p.t + 0.5 * h * rate;
        for j in 0..d {
            self.stage.x[j] = p.x[j] + 0.5 * h * k1[j];
        }
        self.field.velocity_into(&self.stage, k2);

        for j in 0..d {
            self.stage.x[j] = p.x[j] + 0.5 * h * k2[j];
        }
        self.field.velocity_into(&self.stage, k3);

        self.stage.t = p.t + h * rate;
        for j in 0..d {
            self.stage.x[j] = p.x[j] + h * k3[j];
        }
        self.field.velocity_into(&self.stage, k4);

        for j in 0..d {
            p.x[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        p.t += h * rate;
    }

    /// Integrates to `tau_final`, invoking `visit(tau, point)` after every step.
    fn run(
        &mut self,
        p: &mut SpacetimePoint,
        tau_final: f64,
        dt: f64,
        mut visit: impl FnMut(f64, &SpacetimePoint) -> Result<()>,
    ) -> Result<()> {
        let span = tau_final.abs();
        let sign = tau_final.signum();
        let n = step_plan(span, dt);
        let t_start = p.t;
        for i in 1..=n {
            let (tau_prev, tau_next) = if i == n {
                (sign * (i - 1) as f64 * dt, tau_final)
            } else {
                (sign * (i - 1) as f64 * dt, sign * i as f64 * dt)
            };
            self.step(p, tau_next - tau_prev);
            // keep the time coordinate free of accumulated rounding
            p.t = t_start + self.field.time_rate * tau_next;
            if !p.is_finite() {
                return Err(Error::FlowDivergence {
                    tau: tau_next,
                    reason: "non-finite state".into(),
                });
            }
            visit(tau_next, p)?;
        }
        Ok(())
    }
}

fn check_inputs(field: &VelocityFieldSpec, x0: &SpacetimePoint, dt: f64) -> Result<()> {
    if x0.dim() != field.dim {
        return Err(Error::validation(format!(
            "point has dimension {}, field has {}",
            x0.dim(),
            field.dim
        )));
    }
    if !x0.is_finite() {
        return Err(Error::validation("start point is not finite"));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::validation(format!("step must be positive, got {dt}")));
    }
    Ok(())
}

fn finite_divergence(field: &VelocityFieldSpec, p: &SpacetimePoint, tau: f64) -> Result<f64> {
    let d = field.divergence(p);
    if d.is_finite() {
        Ok(d)
    } else {
        Err(Error::NonFinite(format!("divergence at tau = {tau}")))
    }
}

/// Integrates the characteristic through `x0` to proper time `tau_final`
/// (negative values integrate backward). Produces `ceil(|tau_final| / dt)`
/// steps, the last one shortened to land exactly on `tau_final`.
pub fn integrate_flow(
    field: &VelocityFieldSpec,
    x0: &SpacetimePoint,
    tau_final: f64,
    dt: f64,
) -> Result<Trajectory> {
    check_inputs(field, x0, dt)?;
    if tau_final == 0.0 || !tau_final.is_finite() {
        return Err(Error::validation("final proper time must be finite and non-zero"));
    }
    let n = step_plan(tau_final.abs(), dt);
    let mut samples = Vec::with_capacity(n + 1);
    let mut divs = Vec::with_capacity(n + 1);

    samples.push(TrajectorySample { tau: 0.0, point: x0.clone(), velocity: field.velocity(x0) });
    divs.push(finite_divergence(field, x0, 0.0)?);

    let mut p = x0.clone();
    let mut stepper = Stepper::new(field);
    stepper.run(&mut p, tau_final, dt, |tau, point| {
        let velocity = field.velocity(point);
        if velocity.iter().any(|v| !v.is_finite()) {
            return Err(Error::FlowDivergence { tau, reason: "non-finite velocity".into() });
        }
        divs.push(finite_divergence(field, point, tau)?);
        samples.push(TrajectorySample { tau, point: point.clone(), velocity });
        Ok(())
    })?;

    let div_integral = cumulative_trapezoid(&samples, &divs);
    let action_integral = vec![0.0; samples.len()];
    Ok(Trajectory {
        samples,
        div_integral,
        action_integral,
        time_rate: field.time_rate,
        layout: field.layout,
    })
}

/// `G^{-tau}(y)`: the point that the flow carries onto `y` after proper time `tau`.
pub fn backward_point(
    field: &VelocityFieldSpec,
    y: &SpacetimePoint,
    tau: f64,
    dt: f64,
) -> Result<SpacetimePoint> {
    check_inputs(field, y, dt)?;
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(Error::validation(format!("backward time must be >= 0, got {tau}")));
    }
    let mut p = y.clone();
    if tau == 0.0 {
        return Ok(p);
    }
    // A negative RK4 step is exactly a positive step of the negated field.
    Stepper::new(field).run(&mut p, -tau, dt, |_, _| Ok(()))?;
    Ok(p)
}

/// Trapezoid of `div V` over the trajectory's own samples.
pub fn divergence_integral(field: &VelocityFieldSpec, traj: &Trajectory) -> Result<f64> {
    if traj.samples.len() < 2 {
        return Err(Error::validation("trajectory has fewer than two samples"));
    }
    let divs = traj
        .samples
        .iter()
        .map(|s| finite_divergence(field, &s.point, s.tau))
        .collect::<Result<Vec<_>>>()?;
    Ok(*cumulative_trapezoid(&traj.samples, &divs).last().unwrap())
}

/// `S = int L dtau` along the trajectory and `Y = -S / hbar`.
pub fn action_integral(lagrangian: &LagrangianSpec, traj: &Trajectory) -> Result<ActionPhase> {
    let with = traj.clone().with_action(lagrangian)?;
    Ok(ActionPhase::from_action(with.total_action(), lagrangian.constants()))
}

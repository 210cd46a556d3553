//! Plane-wave dispersion, the de Broglie relations, and Gaussian wavepackets.
//!
//! A plane wave `A e^{i(k.x - omega t)}` transported by a constant velocity
//! `u` solves the free transfer equation iff
//! `hbar omega - hbar k.u = m c^2 / gamma`. Requiring `hbar omega = m c^2 gamma`
//! closes the system at `u = hbar k / (m gamma)`, the relativistic group
//! velocity. Packets are superpositions of such waves, evaluated here by
//! direct trapezoid quadrature in wavenumber with the exact `gamma(k)` at
//! every node.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::WavefunctionGrid;
use crate::units::PhysicalConstants;

fn check_mass(m: f64) -> Result<()> {
    if m.is_finite() && m > 0.0 {
        Ok(())
    } else {
        Err(Error::validation(format!("mass must be positive, got {m}")))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `omega = k.u + m c^2 / (hbar gamma(u))`.
pub fn dispersion_omega(k: &[f64], u: &[f64], m: f64, kc: &PhysicalConstants) -> Result<f64> {
    check_mass(m)?;
    if k.len() != u.len() {
        return Err(Error::validation("wavenumber and velocity dimensions differ"));
    }
    let gamma = kc.lorentz_factor(dot(u, u).sqrt())?;
    Ok(dot(k, u) + m * kc.c() * kc.c() / (kc.hbar() * gamma))
}

/// A plane wave together with how well it satisfies the dispersion relation.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneWaveParams {
    pub k: Vec<f64>,
    pub omega: f64,
    pub u: Vec<f64>,
    pub gamma: f64,
    pub m: f64,
    /// `hbar omega - hbar k.u - m c^2 / gamma`.
    pub dispersion_residual: f64,
}

impl PlaneWaveParams {
    pub fn new(k: Vec<f64>, omega: f64, u: Vec<f64>, m: f64, kc: &PhysicalConstants) -> Result<Self> {
        check_mass(m)?;
        let gamma = kc.lorentz_factor(dot(&u, &u).sqrt())?;
        let hbar = kc.hbar();
        let dispersion_residual = hbar * omega - hbar * dot(&k, &u) - m * kc.c() * kc.c() / gamma;
        Ok(Self { k, omega, u, gamma, m, dispersion_residual })
    }
}

/// Solution of the de Broglie closure for one wavenumber.
#[derive(Debug, Clone, PartialEq)]
pub struct DeBroglie {
    pub u: Vec<f64>,
    pub gamma: f64,
    pub omega: f64,
    /// `E = m c^2 gamma`.
    pub energy: f64,
    /// `hbar omega - hbar k.u - m c^2 / gamma`.
    pub dispersion_residual: f64,
    /// `hbar omega - m c^2 gamma`.
    pub energy_residual: f64,
    /// `max_j |m gamma u_j - hbar k_j|`.
    pub momentum_residual: f64,
}

/// Solves `u = hbar k / (m gamma(u))`, i.e. `u = hbar k / sqrt(m^2 + hbar^2 k^2 / c^2)`,
/// and reports both de Broglie relation residuals.
pub fn debroglie_check(k: &[f64], m: f64, kc: &PhysicalConstants) -> Result<DeBroglie> {
    check_mass(m)?;
    let (hbar, c) = (kc.hbar(), kc.c());
    let k2 = dot(k, k);
    let gamma = (1.0 + hbar * hbar * k2 / (m * m * c * c)).sqrt();
    let u: Vec<f64> = k.iter().map(|kj| hbar * kj / (m * gamma)).collect();
    let omega = dispersion_omega(k, &u, m, kc)?;
    let energy = m * c * c * gamma;
    let dispersion_residual = hbar * omega - hbar * dot(k, &u) - m * c * c / gamma;
    let energy_residual = hbar * omega - energy;
    let momentum_residual = k
        .iter()
        .zip(&u)
        .map(|(kj, uj)| (m * gamma * uj - hbar * kj).abs())
        .fold(0.0, f64::max);
    Ok(DeBroglie { u, gamma, omega, energy, dispersion_residual, energy_residual, momentum_residual })
}

/// How each wavenumber in a packet advances in time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DispersionModel {
    /// `E(k) = m c^2 gamma(k)` with the exact de Broglie velocity per node.
    Relativistic,
    /// `gamma = 1` with the kinetic correction `m u^2 / 2` in the Lagrangian:
    /// `E(k) = m c^2 + hbar^2 k^2 / (2m)`, the Schrodinger limit.
    NonRelativistic,
}

/// A 1-D Gaussian packet `phi(k) = exp(-sigma^2 (k - k0)^2 / 2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WavepacketParams {
    pub sigma: f64,
    pub mass: f64,
    /// Velocity of the central wavenumber.
    pub v_center: f64,
    pub amplitude: f64,
    pub k_nodes: usize,
    /// Half-width of the wavenumber grid in units of `1/sigma`.
    pub k_span: f64,
    pub model: DispersionModel,
}

pub const DEFAULT_K_NODES: usize = 2048;
pub const DEFAULT_K_SPAN: f64 = 8.0;
const TAIL_TOLERANCE: f64 = 1e-12;

impl WavepacketParams {
    pub fn new(sigma: f64, mass: f64) -> Self {
        Self {
            sigma,
            mass,
            v_center: 0.0,
            amplitude: 1.0,
            k_nodes: DEFAULT_K_NODES,
            k_span: DEFAULT_K_SPAN,
            model: DispersionModel::Relativistic,
        }
    }

    pub fn with_model(mut self, model: DispersionModel) -> Self {
        self.model = model;
        self
    }

    pub fn with_center_velocity(mut self, v: f64) -> Self {
        self.v_center = v;
        self
    }

    /// Centres the packet on the speed with Lorentz factor `gamma`.
    pub fn with_center_gamma(self, gamma: f64, kc: &PhysicalConstants) -> Result<Self> {
        if !(gamma.is_finite() && gamma >= 1.0) {
            return Err(Error::validation(format!("central gamma must be >= 1, got {gamma}")));
        }
        let v = kc.c() * (1.0 - 1.0 / (gamma * gamma)).sqrt();
        Ok(self.with_center_velocity(v))
    }

    fn validate(&self, kc: &PhysicalConstants) -> Result<()> {
        check_mass(self.mass)?;
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::validation(format!("sigma must be positive, got {}", self.sigma)));
        }
        if self.k_nodes < 2 {
            return Err(Error::Configuration("wavenumber grid needs at least 2 nodes".into()));
        }
        if !(self.k_span.is_finite() && self.k_span > 0.0) {
            return Err(Error::Configuration("wavenumber span must be positive".into()));
        }
        let s = self.k_span;
        // Mills-ratio bound on the Gaussian mass beyond +/- s standard deviations
        let tail = (-0.5 * s * s).exp() * (2.0 / PI).sqrt() / s;
        if tail > TAIL_TOLERANCE {
            return Err(Error::Configuration(format!(
                "wavenumber grid of +/-{s}/sigma leaves tail mass {tail:.2e} > {TAIL_TOLERANCE:e}"
            )));
        }
        kc.lorentz_factor(self.v_center)?;
        Ok(())
    }

    /// Wavenumber of the packet centre.
    pub fn central_wavenumber(&self, kc: &PhysicalConstants) -> Result<f64> {
        let gamma = match self.model {
            DispersionModel::Relativistic => kc.lorentz_factor(self.v_center)?,
            DispersionModel::NonRelativistic => 1.0,
        };
        Ok(self.mass * gamma * self.v_center / kc.hbar())
    }

    /// Symmetric quadrature nodes around the central wavenumber.
    pub fn k_grid(&self, kc: &PhysicalConstants) -> Result<Vec<f64>> {
        self.validate(kc)?;
        let k0 = self.central_wavenumber(kc)?;
        let half = self.k_span / self.sigma;
        let step = 2.0 * half / (self.k_nodes - 1) as f64;
        Ok((0..self.k_nodes).map(|i| k0 - half + i as f64 * step).collect())
    }

    /// Group velocity of the central wavenumber.
    pub fn group_velocity(&self, kc: &PhysicalConstants) -> Result<f64> {
        let k0 = self.central_wavenumber(kc)?;
        Ok(match self.model {
            DispersionModel::Relativistic => debroglie_check(&[k0], self.mass, kc)?.u[0],
            DispersionModel::NonRelativistic => kc.hbar() * k0 / self.mass,
        })
    }

    /// `E(k) - m c^2`, written to avoid cancellation for small `k`.
    fn kinetic_energy(&self, k: f64, kc: &PhysicalConstants) -> f64 {
        let (hbar, c, m) = (kc.hbar(), kc.c(), self.mass);
        let rest = m * c * c;
        match self.model {
            DispersionModel::Relativistic => {
                let pc = hbar * k * c;
                pc * pc / ((rest * rest + pc * pc).sqrt() + rest)
            }
            DispersionModel::NonRelativistic => hbar * hbar * k * k / (2.0 * m),
        }
    }
}

/// Precomputed weights and phases of one time slice.
struct PacketSlice {
    k: Vec<f64>,
    weight: Vec<Complex64>,
    global: Complex64,
    alias_half_period: f64,
    center: f64,
}

impl PacketSlice {
    fn new(p: &WavepacketParams, t: f64, kc: &PhysicalConstants) -> Result<Self> {
        if !t.is_finite() {
            return Err(Error::validation("time must be finite"));
        }
        let k = p.k_grid(kc)?;
        let k0 = p.central_wavenumber(kc)?;
        let dk = k[1] - k[0];
        let hbar = kc.hbar();
        let prefactor = 2.0 * PI * p.sigma * p.amplitude;
        let n = k.len();
        let weight = k
            .iter()
            .enumerate()
            .map(|(i, &kj)| {
                let trap = if i == 0 || i == n - 1 { 0.5 * dk } else { dk };
                let envelope = (-0.5 * (p.sigma * (kj - k0)).powi(2)).exp();
                let phase = -t * p.kinetic_energy(kj, kc) / hbar;
                Complex64::from_polar(prefactor * trap * envelope, phase)
            })
            .collect();
        let rest_phase = -p.mass * kc.c() * kc.c() * t / hbar;
        Ok(Self {
            k,
            weight,
            global: Complex64::from_polar(1.0, rest_phase),
            alias_half_period: PI / dk,
            center: p.group_velocity(kc)? * t,
        })
    }

    fn eval(&self, x: f64) -> Result<Complex64> {
        if (x - self.center).abs() > self.alias_half_period {
            return Err(Error::Configuration(format!(
                "x = {x} is beyond the quadrature's alias-free range around {}",
                self.center
            )));
        }
        let sum: Complex64 = self
            .k
            .iter()
            .zip(&self.weight)
            .map(|(&kj, w)| w * Complex64::from_polar(1.0, kj * x))
            .sum();
        Ok(sum * self.global)
    }
}

/// `psi(x, t) = 2 pi sigma A int phi(k) e^{i k (x - u(k) t)} e^{-i m c^2 t / (hbar gamma(k))} dk`
/// by the trapezoid rule on the packet's wavenumber grid.
pub fn relativistic_packet_quadrature(
    p: &WavepacketParams,
    x: f64,
    t: f64,
    kc: &PhysicalConstants,
) -> Result<Complex64> {
    PacketSlice::new(p, t, kc)?.eval(x)
}

/// The packet sampled on `n` nodes spanning `center +/- half_width`.
pub fn packet_grid(
    p: &WavepacketParams,
    t: f64,
    center: f64,
    half_width: f64,
    n: usize,
    kc: &PhysicalConstants,
) -> Result<WavefunctionGrid> {
    if n < 2 || !(half_width > 0.0) {
        return Err(Error::validation("packet grid needs n >= 2 and positive half-width"));
    }
    let slice = PacketSlice::new(p, t, kc)?;
    let spacing = 2.0 * half_width / (n - 1) as f64;
    let origin = center - half_width;
    let values = (0..n)
        .into_par_iter()
        .map(|i| slice.eval(origin + i as f64 * spacing))
        .collect::<Result<Vec<_>>>()?;
    WavefunctionGrid::new(origin, spacing, values, t)
}

/// Grid that comfortably holds the packet at time `t`: centred on the group
/// position, ten Schrodinger widths either side.
pub fn packet_grid_auto(
    p: &WavepacketParams,
    t: f64,
    n: usize,
    kc: &PhysicalConstants,
) -> Result<WavefunctionGrid> {
    let center = p.group_velocity(kc)? * t;
    let half = 10.0 * schrodinger_width(p.sigma, p.mass, t, kc);
    packet_grid(p, t, center, half, n, kc)
}

/// `a e^{-i m c^2 t / hbar} (sigma^2 / (sigma^2 + i t hbar / m))^{1/2} exp(-x^2 / (2 (sigma^2 + i t hbar / m)))`.
pub fn schrodinger_packet_closed_form(
    sigma: f64,
    m: f64,
    amplitude: f64,
    x: f64,
    t: f64,
    kc: &PhysicalConstants,
) -> Complex64 {
    let hbar = kc.hbar();
    let s2 = Complex64::new(sigma * sigma, t * hbar / m);
    let rest = Complex64::from_polar(amplitude, -m * kc.c() * kc.c() * t / hbar);
    rest * (Complex64::new(sigma * sigma, 0.0) / s2).sqrt() * (-(x * x) / (2.0 * s2)).exp()
}

/// Width parameter of a free Schrodinger packet, `sqrt(sigma^2 + (t hbar / (m sigma))^2)`.
pub fn schrodinger_width(sigma: f64, m: f64, t: f64, kc: &PhysicalConstants) -> f64 {
    (sigma * sigma + (t * kc.hbar() / (m * sigma)).powi(2)).sqrt()
}

/// Square root of the `|psi|^2`-weighted second central moment.
pub fn packet_width(grid: &WavefunctionGrid) -> Result<f64> {
    let weights: Vec<f64> = grid.values().iter().map(|z| z.norm_sqr()).collect();
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return Err(Error::validation("packet width of a zero-norm grid"));
    }
    let mean = grid.positions().zip(&weights).map(|(x, w)| x * w).sum::<f64>() / total;
    let var = grid
        .positions()
        .zip(&weights)
        .map(|(x, w)| (x - mean).powi(2) * w)
        .sum::<f64>()
        / total;
    Ok(var.sqrt())
}

/// The `sigma` of a packet with `|psi| ~ exp(-x^2 / (2 sigma^2))`, i.e.
/// `sqrt(2)` times [`packet_width`].
pub fn gaussian_width(grid: &WavefunctionGrid) -> Result<f64> {
    Ok(std::f64::consts::SQRT_2 * packet_width(grid)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat() -> PhysicalConstants {
        PhysicalConstants::natural()
    }

    #[test]
    fn rest_frequency() {
        assert_eq!(dispersion_omega(&[0.0], &[0.0], 1.0, &nat()).unwrap(), 1.0);
        assert!(dispersion_omega(&[1.0], &[1.0], 1.0, &nat()).is_err());
    }

    #[test]
    fn debroglie_rest() {
        let d = debroglie_check(&[0.0], 1.0, &nat()).unwrap();
        assert_eq!(d.u, vec![0.0]);
        assert_eq!(d.energy, 1.0);
    }

    #[test]
    fn debroglie_unit_wavenumber() {
        let d = debroglie_check(&[1.0], 1.0, &nat()).unwrap();
        assert!((d.u[0] - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert!((d.gamma - 2f64.sqrt()).abs() < 1e-15);
        assert!((d.energy - 2f64.sqrt()).abs() < 1e-15);
        assert!(d.dispersion_residual.abs() < 1e-12);
        assert!(d.energy_residual.abs() < 1e-12);
        assert!(d.momentum_residual < 1e-12);
        // independent check: substitute back into u = k / (m gamma(u))
        let g = 1.0 / (1.0 - d.u[0] * d.u[0]).sqrt();
        assert!((d.u[0] - 1.0 / g).abs() < 1e-15);
    }

    #[test]
    fn consistent_pair_gives_relativistic_energy() {
        let kc = nat();
        let d = debroglie_check(&[0.3, -1.2, 2.0], 1.7, &kc).unwrap();
        let pw = PlaneWaveParams::new(vec![0.3, -1.2, 2.0], d.omega, d.u.clone(), 1.7, &kc).unwrap();
        assert!(pw.dispersion_residual.abs() < 1e-12);
        assert!((kc.hbar() * pw.omega - 1.7 * pw.gamma).abs() < 1e-12);
    }

    #[test]
    fn speed_approaches_c_monotonically() {
        let kc = nat();
        let mut last = 0.0;
        for i in 1..=1000 {
            let k = i as f64;
            let u = debroglie_check(&[k], 1.0, &kc).unwrap().u[0];
            assert!(u > last && u < 1.0);
            last = u;
        }
        assert!(1.0 - last < 1e-6);
    }

    #[test]
    fn coverage_is_enforced() {
        let kc = nat();
        let mut p = WavepacketParams::new(1.0, 1.0);
        p.k_span = 5.0;
        assert!(matches!(relativistic_packet_quadrature(&p, 0.0, 0.0, &kc), Err(Error::Configuration(_))));
        p.k_span = 8.0;
        assert!(relativistic_packet_quadrature(&p, 0.0, 0.0, &kc).is_ok());
        // far outside the alias-free window
        assert!(relativistic_packet_quadrature(&p, 1e4, 0.0, &kc).is_err());
    }

    #[test]
    fn initial_profile_is_the_fourier_pair() {
        // int exp(-s^2 k^2 / 2) e^{ikx} dk = sqrt(2 pi) / s exp(-x^2 / 2 s^2)
        let kc = nat();
        for sigma in [0.5, 1.0, 2.0] {
            let p = WavepacketParams::new(sigma, 1.0);
            for x in [-2.0, -0.3, 0.0, 0.7, 3.1] {
                let got = relativistic_packet_quadrature(&p, x * sigma, 0.0, &kc).unwrap();
                let want = 2.0 * PI * sigma * (2.0 * PI).sqrt() / sigma * (-x * x / 2.0).exp();
                assert!((got - Complex64::new(want, 0.0)).norm() < 1e-10 * want.max(1e-3));
            }
        }
    }

    #[test]
    fn nonrelativistic_model_matches_closed_form_profile() {
        let kc = nat();
        let (sigma, m) = (1.0, 1.0);
        let p = WavepacketParams::new(sigma, m).with_model(DispersionModel::NonRelativistic);
        let norm = 2.0 * PI * sigma * (2.0 * PI).sqrt() / sigma;
        for t in [0.0, 1.0, 3.0] {
            for x in [-4.0, -1.0, 0.0, 2.5] {
                let q = relativistic_packet_quadrature(&p, x, t, &kc).unwrap() / norm;
                let c = schrodinger_packet_closed_form(sigma, m, 1.0, x, t, &kc);
                assert!((q - c).norm() < 1e-10, "t={t} x={x}: {q} vs {c}");
            }
        }
    }

    #[test]
    fn relativistic_quadrature_in_the_heavy_limit() {
        // m sigma >> hbar / c: spreading follows the Schrodinger law
        let kc = nat();
        let (sigma, m) = (1.0, 1000.0);
        let p = WavepacketParams::new(sigma, m);
        for t in [0.0, 1000.0, 3000.0] {
            let g = packet_grid_auto(&p, t, 801, &kc).unwrap();
            let w = gaussian_width(&g).unwrap();
            let want = schrodinger_width(sigma, m, t, &kc);
            assert!((w - want).abs() < 1e-4 * want, "t={t}: {w} vs {want}");
        }
    }

    #[test]
    fn closed_form_peak_decay() {
        let kc = nat();
        let (sigma, m, a) = (0.8, 2.0, 1.3);
        assert!((schrodinger_packet_closed_form(sigma, m, a, 0.4, 0.0, &kc).re
            - a * (-0.16f64 / (2.0 * 0.64)).exp())
        .abs()
            < 1e-15);
        for t in [0.5, 2.0, 10.0] {
            let peak = schrodinger_packet_closed_form(sigma, m, a, 0.0, t, &kc).norm_sqr();
            let s4 = sigma.powi(4);
            let want = a * a * sigma * sigma / (s4 + (t / m).powi(2)).sqrt();
            assert!((peak - want).abs() < 1e-14 * want.max(1.0));
        }
    }

    #[test]
    fn closed_form_second_moment() {
        let kc = nat();
        let (sigma, m) = (1.0, 1.0);
        for t in [0.0, 1.0, 4.0] {
            let w = schrodinger_width(sigma, m, t, &kc);
            let g = WavefunctionGrid::over_interval(-12.0 * w, 12.0 * w, 2001, t, |x| {
                schrodinger_packet_closed_form(sigma, m, 1.0, x, t, &kc)
            })
            .unwrap();
            assert!((gaussian_width(&g).unwrap() - w).abs() < 1e-8);
        }
    }

    #[test]
    fn width_of_gaussians() {
        let sigma = 0.9;
        // |psi|^2 with standard deviation sigma
        let f = |c: f64| move |x: f64| Complex64::new((-(x - c).powi(2) / (4.0 * sigma * sigma)).exp(), 0.0);
        let g = WavefunctionGrid::over_interval(-15.0, 15.0, 1201, 0.0, f(0.0)).unwrap();
        assert!((packet_width(&g).unwrap() - sigma).abs() < 1e-6);
        let shifted = WavefunctionGrid::over_interval(-15.0, 15.0, 1201, 0.0, f(2.5)).unwrap();
        assert!((packet_width(&shifted).unwrap() - sigma).abs() < 1e-6);

        let two = WavefunctionGrid::over_interval(-15.0, 15.0, 1201, 0.0, |x| f(-3.0)(x) + f(3.0)(x)).unwrap();
        assert!(packet_width(&two).unwrap() > sigma);

        let zero = WavefunctionGrid::from_fn(0.0, 1.0, 4, 0.0, |_| Complex64::new(0.0, 0.0)).unwrap();
        assert!(packet_width(&zero).is_err());
    }

    #[test]
    fn width_is_non_decreasing() {
        let kc = nat();
        let p = WavepacketParams::new(1.0, 1.0).with_center_gamma(1.25, &kc).unwrap();
        let mut last = 0.0;
        for i in 0..=8 {
            let t = i as f64;
            let w = gaussian_width(&packet_grid_auto(&p, t, 512, &kc).unwrap()).unwrap();
            assert!(w >= last - 1e-12, "t={t}: {w} < {last}");
            last = w;
        }
    }

    #[test]
    fn positive_energy_per_node() {
        let kc = nat();
        let p = WavepacketParams::new(1.0, 1.0);
        for k in p.k_grid(&kc).unwrap() {
            assert!(debroglie_check(&[k], 1.0, &kc).unwrap().energy > 0.0);
        }
    }
}

//! Spectra from phase closure on periodic orbits, plus the constant identities
//! tying mass to the conserved wavenumber and to open-string parameters.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::{integrate_flow, TrajectorySample, VelocityFieldSpec};
use crate::grid::SpacetimePoint;
use crate::units::{mass_from_wavenumber, MassWavenumber, PhysicalConstants};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Level {
    pub n: u32,
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantizationResult {
    pub levels: Vec<Level>,
    /// `int_0^T (L + m c^2 / 2) dt = int_0^T (m v^2 / 2 - U) dt` over one numerically integrated period.
    pub action_residual: Option<f64>,
    pub period: Option<f64>,
    /// Full `int_0^T L dt` on the orbit, metric term included.
    pub orbit_action: Option<f64>,
}

/// Harmonic oscillator levels from `int_0^T (lambda + L) dt = 2 pi n hbar`.
///
/// The classical orbit from `(x0, 0)` is integrated over one period with the
/// flow engine and the classical Lagrangian is integrated along it. The
/// constant metric term `-m c^2 / 2` is evaluated with the mass identified
/// through the oscillator frequency, `m c^2 = rho hbar c` with `rho c = omega`,
/// which yields `lambda_n = hbar omega (n + 1/2)`.
pub fn harmonic_levels(
    mass: f64,
    omega: f64,
    x0: f64,
    n_max: u32,
    kc: &PhysicalConstants,
    dt: f64,
) -> Result<QuantizationResult> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::validation(format!("omega must be positive, got {omega}")));
    }
    if !(x0.is_finite() && x0 != 0.0) {
        return Err(Error::validation("orbit amplitude must be finite and non-zero"));
    }
    MassWavenumber::from_mass(mass, kc)?;
    let spring = mass * omega * omega;
    let period = 2.0 * PI / omega;

    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::validation(format!("dt must be positive, got {dt}")));
    }
    // uniform samples over exactly one period keep the trapezoid action
    // integral spectrally accurate
    let dt = period / (period / dt).ceil();

    let field = VelocityFieldSpec::harmonic_phase_space(omega)?;
    let start = SpacetimePoint::new(0.0, vec![x0, 0.0]);
    let orbit = integrate_flow(&field, &start, period, dt)?;

    let closure = orbit.end().max_abs_diff(&SpacetimePoint::new(orbit.end().t, vec![x0, 0.0]));
    if !(closure <= 1e-6 * x0.abs().max(x0.abs() * omega)) {
        return Err(Error::Numerical(format!(
            "orbit did not close after one period (error {closure:.3e}); reduce dt"
        )));
    }

    // m v^2 / 2 - U by trapezoid over the orbit samples; the constant -m c^2 / 2
    // is added in closed form since in SI it dwarfs the rest by ~1e5
    let lc = |s: &TrajectorySample| 0.5 * mass * s.point.x[1].powi(2) - 0.5 * spring * s.point.x[0].powi(2);
    let action_residual: f64 = orbit
        .samples()
        .windows(2)
        .map(|w| 0.5 * (w[1].tau - w[0].tau) * (lc(&w[0]) + lc(&w[1])))
        .sum();
    // metric term with the oscillator's own wavenumber rho = omega / c
    let oscillator = mass_from_wavenumber(omega / kc.c(), kc)?;
    let metric_action = -0.5 * oscillator.rest_energy(kc) * period;
    let closure_action = action_residual + metric_action;

    let hbar = kc.hbar();
    let levels = (0..=n_max)
        .map(|n| Level { n, lambda: (2.0 * PI * hbar * n as f64 - closure_action) / period })
        .collect();
    Ok(QuantizationResult {
        levels,
        action_residual: Some(action_residual),
        period: Some(period),
        orbit_action: Some(action_residual + metric_action),
    })
}

/// `exp(-(i/hbar) int_0^T (lambda + L) dt)` for a level, with the action that
/// entered its quantization. Equals one for every level of [`harmonic_levels`].
pub fn closure_phase(level: &Level, result: &QuantizationResult, kc: &PhysicalConstants) -> Option<num_complex::Complex64> {
    let period = result.period?;
    let action = result.orbit_action?;
    let phase = -(level.lambda * period + action) / kc.hbar();
    Some(num_complex::Complex64::from_polar(1.0, phase))
}

/// Particle in a box of length `l`: spatial resonance `lambda_p = 2l/n`,
/// de Broglie speed `v = 2 pi hbar / (m lambda_p)`, and
/// `lambda_n = hbar n pi v / l - m v^2 / 2 = pi^2 hbar^2 n^2 / (2 m l^2)`.
pub fn box_levels(l: f64, mass: f64, n_max: u32, kc: &PhysicalConstants) -> Result<QuantizationResult> {
    if !(l.is_finite() && l > 0.0) {
        return Err(Error::validation(format!("box length must be positive, got {l}")));
    }
    if n_max < 1 {
        return Err(Error::validation("n = 0 is the trivial eigenfunction; need n_max >= 1"));
    }
    MassWavenumber::from_mass(mass, kc)?;
    let hbar = kc.hbar();
    let levels = (1..=n_max)
        .map(|n| {
            let wavelength = 2.0 * l / n as f64;
            let v = 2.0 * PI * hbar / (mass * wavelength);
            let lagrangian = 0.5 * mass * v * v;
            let resonance = hbar * n as f64 * PI * v / l;
            Level { n, lambda: resonance - lagrangian }
        })
        .collect();
    Ok(QuantizationResult { levels, action_residual: None, period: None, orbit_action: None })
}

/// Box level for a single quantum number; `n = 0` is rejected.
pub fn box_level(n: u32, l: f64, mass: f64, kc: &PhysicalConstants) -> Result<f64> {
    if n == 0 {
        return Err(Error::validation("n = 0 is the trivial eigenfunction"));
    }
    Ok(box_levels(l, mass, n, kc)?.levels[n as usize - 1].lambda)
}

/// Open-string parameters implied by a string length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StringParameters {
    pub l_s: f64,
    pub rho: f64,
    pub mass: f64,
    /// Rest mass per unit length.
    pub mu0: f64,
    pub tension: f64,
    pub sigma1: f64,
    /// Rotational frequency `2 rho c`.
    pub omega_s: f64,
    /// Observation-field frequency `m c^2 / hbar`.
    pub omega_field: f64,
    /// `rho c hbar / (m c^2)`; one by construction.
    pub resonance: f64,
    /// `sigma1 T0 - m c^2`.
    pub closure_residual: f64,
    /// The two stated frequency conventions side by side.
    pub frequency_ratio: FrequencyRatioDiagnostic,
}

/// The string frequency enters once as `omega_s = rho c` (the resonance
/// `omega_s / Omega = 1`) and once as `omega_s = 2 rho c` (rotating string).
/// Both ratios are reported; they differ by a factor of two.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrequencyRatioDiagnostic {
    /// `rho c / Omega`.
    pub natural_ratio: f64,
    /// `2 rho c / Omega`.
    pub rotational_ratio: f64,
    pub factor: f64,
    pub consistent: bool,
}

pub fn string_identities(l_s: f64, kc: &PhysicalConstants) -> Result<StringParameters> {
    if !(l_s.is_finite() && l_s > 0.0) {
        return Err(Error::validation(format!("string length must be positive, got {l_s}")));
    }
    let (hbar, c) = (kc.hbar(), kc.c());
    let rho = 1.0 / l_s;
    let m = mass_from_wavenumber(rho, kc)?;
    let mass = m.mass();
    let rest = m.rest_energy(kc);
    let omega_field = rest / hbar;
    let omega_s = 2.0 * rho * c;
    let sigma1 = PI * l_s / 2.0;
    let tension = 2.0 * hbar * c / (PI * l_s * l_s);
    let natural_ratio = rho * c / omega_field;
    let rotational_ratio = omega_s / omega_field;
    let factor = rotational_ratio / natural_ratio;
    Ok(StringParameters {
        l_s,
        rho,
        mass,
        mu0: mass / l_s,
        tension,
        sigma1,
        omega_s,
        omega_field,
        resonance: rho * c * hbar / rest,
        closure_residual: sigma1 * tension - rest,
        frequency_ratio: FrequencyRatioDiagnostic {
            natural_ratio,
            rotational_ratio,
            factor,
            consistent: (factor - 1.0).abs() < 1e-12,
        },
    })
}

/// Reduced Compton wavelength `hbar / (m c) = 1 / rho`.
pub fn compton_wavelength(mass: f64, kc: &PhysicalConstants) -> Result<f64> {
    let m = MassWavenumber::from_mass(mass, kc)?;
    Ok(1.0 / m.rho())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::DEFAULT_DT;
    use crate::units::{ELECTRON_MASS_SI, HBAR_SI, C_SI};

    fn nat() -> PhysicalConstants {
        PhysicalConstants::natural()
    }

    #[test]
    fn harmonic_ground_state() {
        let r = harmonic_levels(1.0, 2.0, 1.0, 5, &nat(), DEFAULT_DT).unwrap();
        assert!((r.levels[0].lambda - 1.0).abs() < 1e-8);
        assert_eq!(r.levels.len(), 6);
    }

    #[test]
    fn harmonic_third_level() {
        let r = harmonic_levels(1.0, 1.0, 1.0, 3, &nat(), DEFAULT_DT).unwrap();
        assert!((r.levels[3].lambda - 3.5).abs() < 1e-8);
    }

    #[test]
    fn harmonic_action_residual_vanishes() {
        let (m, omega) = (1.0, 2.0);
        for x0 in [0.5, 1.0, 2.0] {
            let r = harmonic_levels(m, omega, x0, 0, &nat(), DEFAULT_DT).unwrap();
            let scale = 0.5 * m * omega * omega * x0 * x0 * r.period.unwrap();
            assert!(r.action_residual.unwrap().abs() < 1e-8 * scale);
        }
    }

    #[test]
    fn harmonic_spacing_and_closure() {
        let kc = nat();
        let r = harmonic_levels(1.3, 5.0, 0.7, 10, &kc, DEFAULT_DT).unwrap();
        for w in r.levels.windows(2) {
            assert!((w[1].lambda - w[0].lambda - 5.0).abs() < 1e-9);
        }
        for level in &r.levels {
            let z = closure_phase(level, &r, &kc).unwrap();
            assert!((z - num_complex::Complex64::new(1.0, 0.0)).norm() < 1e-8);
        }
    }

    #[test]
    fn harmonic_levels_si() {
        // nanometre-scale electron oscillator
        let kc = PhysicalConstants::si();
        let omega = 1e15;
        let r = harmonic_levels(ELECTRON_MASS_SI, omega, 1e-9, 3, &kc, 1e-19).unwrap();
        for level in &r.levels {
            let want = HBAR_SI * omega * (level.n as f64 + 0.5);
            assert!((level.lambda - want).abs() < 1e-8 * want, "{:?}", level);
        }
    }

    #[test]
    fn harmonic_rejects_coarse_step() {
        assert!(matches!(
            harmonic_levels(1.0, 2.0, 1.0, 1, &nat(), 1.0),
            Err(Error::Numerical(_))
        ));
        assert!(harmonic_levels(1.0, 0.0, 1.0, 1, &nat(), 1e-3).is_err());
    }

    #[test]
    fn box_ground_state_and_scaling() {
        let kc = nat();
        let r = box_levels(1.0, 1.0, 10, &kc).unwrap();
        assert!((r.levels[0].lambda - PI * PI / 2.0).abs() < 1e-10);
        assert!((r.levels[0].lambda - 4.934_802_200_544_679).abs() < 1e-10);
        assert!((r.levels[1].lambda - 4.0 * r.levels[0].lambda).abs() < 1e-12);
        let wide = box_levels(2.0, 1.0, 10, &kc).unwrap();
        for (a, b) in r.levels.iter().zip(&wide.levels) {
            assert!((b.lambda - a.lambda / 4.0).abs() < 1e-12 * a.lambda);
        }
    }

    #[test]
    fn box_rejects_trivial_level() {
        assert!(box_levels(1.0, 1.0, 0, &nat()).is_err());
        assert!(box_level(0, 1.0, 1.0, &nat()).is_err());
        assert!(box_levels(-1.0, 1.0, 3, &nat()).is_err());
    }

    #[test]
    fn string_unit_length() {
        let s = string_identities(1.0, &nat()).unwrap();
        assert_eq!(s.rho, 1.0);
        assert_eq!(s.mass, 1.0);
        assert_eq!(s.omega_field, 1.0);
        assert_eq!(s.omega_s, 2.0);
        assert!((s.sigma1 - PI / 2.0).abs() < 1e-15);
        assert!((s.tension - 2.0 / PI).abs() < 1e-15);
        assert!(s.closure_residual.abs() < 1e-12);
        assert!((s.resonance - 1.0).abs() < 1e-15);
        assert!((s.frequency_ratio.natural_ratio - 1.0).abs() < 1e-15);
        assert!((s.frequency_ratio.rotational_ratio - 2.0).abs() < 1e-15);
        assert!(!s.frequency_ratio.consistent);
    }

    #[test]
    fn string_closure_si() {
        let kc = PhysicalConstants::si();
        for l in [1e-35, 1e-15, 1e-3] {
            let s = string_identities(l, &kc).unwrap();
            let rest = s.mass * C_SI * C_SI;
            assert!(s.closure_residual.abs() < 1e-12 * rest);
            assert_eq!(s.tension, 2.0 * HBAR_SI * C_SI / (PI * l * l));
        }
    }

    #[test]
    fn compton() {
        assert_eq!(compton_wavelength(1.0, &nat()).unwrap(), 1.0);
        assert_eq!(compton_wavelength(2.0, &nat()).unwrap(), 0.5);
        let lambda = compton_wavelength(9.109e-31, &PhysicalConstants::si()).unwrap();
        assert!((lambda - 3.8616e-13).abs() < 1e-3 * 3.8616e-13);
    }
}

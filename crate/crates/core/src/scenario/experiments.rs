use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Cell, ParamValue, Params, ResultsTable, ScenarioKind};
use crate::dirac::{build_spinors, verify_relation_table};
use crate::error::{Error, Result};
use crate::flow::{integrate_flow, VelocityFieldSpec};
use crate::grid::SpacetimePoint;
use crate::spectral::{box_levels, harmonic_levels, string_identities};
use crate::units::PhysicalConstants;
use crate::wavepacket::{debroglie_check, gaussian_width, packet_grid_auto, WavepacketParams};

struct Args<'a>(&'a Params);

impl Args<'_> {
    fn f(&self, key: &str) -> f64 {
        self.0[key].as_f64().expect("resolved scalar parameter")
    }

    fn count(&self, key: &str, min: i64) -> Result<usize> {
        match self.0[key] {
            ParamValue::Int(i) if i >= min => Ok(i as usize),
            ref v => Err(Error::validation(format!("parameter '{key}' must be an integer >= {min}, got {v}"))),
        }
    }

    fn list(&self, key: &str) -> &[f64] {
        match &self.0[key] {
            ParamValue::List(v) => v,
            _ => unreachable!("resolved list parameter"),
        }
    }
}

/// Computes a scenario's results table from fully resolved parameters.
/// Everything here runs in natural units.
pub fn execute(kind: ScenarioKind, params: &Params) -> Result<ResultsTable> {
    let a = Args(params);
    let kc = PhysicalConstants::natural();
    match kind {
        ScenarioKind::Packet => packet(&a, &kc),
        ScenarioKind::Dirac => dirac(&a, &kc),
        ScenarioKind::Dispersion => dispersion(&a, &kc),
        ScenarioKind::Harmonic => harmonic(&a, &kc),
        ScenarioKind::Box => box_scenario(&a, &kc),
        ScenarioKind::String => string(&a, &kc),
        ScenarioKind::Flowtest => flowtest(&a),
    }
}

fn packet(a: &Args, kc: &PhysicalConstants) -> Result<ResultsTable> {
    let steps = a.count("steps", 1)?;
    let x_nodes = a.count("x-nodes", 16)?;
    let mut base = WavepacketParams::new(a.f("sigma"), a.f("m"));
    base.amplitude = a.f("amplitude");
    base.k_nodes = a.count("k-nodes", 2)?;
    let rest = base.clone();
    let boosted = base.with_center_gamma(a.f("gamma"), kc)?;
    let t_max = a.f("t-max");
    if !(t_max > 0.0) {
        return Err(Error::validation("t-max must be positive"));
    }

    let mut table = ResultsTable::new(&["t", "width_rest", "width_boosted", "growth_rest", "growth_boosted"]);
    let w0_rest = gaussian_width(&packet_grid_auto(&rest, 0.0, x_nodes, kc)?)?;
    let w0_boost = gaussian_width(&packet_grid_auto(&boosted, 0.0, x_nodes, kc)?)?;
    for i in 0..=steps {
        let t = t_max * i as f64 / steps as f64;
        let wr = gaussian_width(&packet_grid_auto(&rest, t, x_nodes, kc)?)?;
        let wb = gaussian_width(&packet_grid_auto(&boosted, t, x_nodes, kc)?)?;
        table.push(vec![t.into(), wr.into(), wb.into(), (wr - w0_rest).into(), (wb - w0_boost).into()]);
    }
    Ok(table)
}

fn dirac(a: &Args, kc: &PhysicalConstants) -> Result<ResultsTable> {
    let spinors = build_spinors([a.f("vx"), a.f("vy"), a.f("vz")], a.f("m"), kc)?;
    let report = verify_relation_table(&spinors, kc);
    let mut table = ResultsTable::new(&["index", "relation", "value", "expected", "residual"]);
    for (i, r) in report.relations.iter().enumerate() {
        table.push(vec![
            Cell::Int(i as i64 + 1),
            r.name.clone().into(),
            r.value.into(),
            r.expected.into(),
            r.residual.into(),
        ]);
    }
    Ok(table)
}

fn dispersion(a: &Args, kc: &PhysicalConstants) -> Result<ResultsTable> {
    let samples = a.count("samples", 1)?;
    let k_max = a.f("k-max");
    if !(k_max > 0.0) {
        return Err(Error::validation("k-max must be positive"));
    }
    let seed = a.count("seed", 0)? as u64;
    let m = a.f("m");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = ResultsTable::new(&[
        "k",
        "u",
        "gamma",
        "omega",
        "energy",
        "dispersion_residual",
        "energy_residual",
        "momentum_residual",
    ]);
    for _ in 0..samples {
        let k = rng.gen_range(-k_max..=k_max);
        let d = debroglie_check(&[k], m, kc)?;
        table.push(vec![
            k.into(),
            d.u[0].into(),
            d.gamma.into(),
            d.omega.into(),
            d.energy.into(),
            d.dispersion_residual.into(),
            d.energy_residual.into(),
            d.momentum_residual.into(),
        ]);
    }
    Ok(table)
}

fn harmonic(a: &Args, kc: &PhysicalConstants) -> Result<ResultsTable> {
    let omega = a.f("omega");
    let n_max = a.count("n-max", 0)? as u32;
    let r = harmonic_levels(a.f("m"), omega, a.f("x0"), n_max, kc, a.f("dt"))?;
    let residual = r.action_residual.unwrap_or(f64::NAN);
    let mut table = ResultsTable::new(&["n", "lambda", "expected", "relative_error", "action_residual"]);
    for level in &r.levels {
        let want = kc.hbar() * omega * (level.n as f64 + 0.5);
        table.push(vec![
            level.n.into(),
            level.lambda.into(),
            want.into(),
            ((level.lambda - want) / want).into(),
            residual.into(),
        ]);
    }
    Ok(table)
}

fn box_scenario(a: &Args, kc: &PhysicalConstants) -> Result<ResultsTable> {
    let n_max = a.count("n-max", 1)? as u32;
    let r = box_levels(a.f("l"), a.f("m"), n_max, kc)?;
    let ground = r.levels[0].lambda;
    let mut table = ResultsTable::new(&["n", "lambda", "ratio_to_ground"]);
    for level in &r.levels {
        table.push(vec![level.n.into(), level.lambda.into(), (level.lambda / ground).into()]);
    }
    Ok(table)
}

fn string(a: &Args, kc: &PhysicalConstants) -> Result<ResultsTable> {
    let mut table = ResultsTable::new(&[
        "l_s",
        "rho",
        "mass",
        "mu0",
        "tension",
        "sigma1",
        "omega_s",
        "omega_field",
        "resonance",
        "closure_residual",
        "natural_ratio",
        "rotational_ratio",
        "ratio_factor",
    ]);
    for &l in a.list("l-s") {
        let s = string_identities(l, kc)?;
        let f = s.frequency_ratio;
        table.push(vec![
            s.l_s.into(),
            s.rho.into(),
            s.mass.into(),
            s.mu0.into(),
            s.tension.into(),
            s.sigma1.into(),
            s.omega_s.into(),
            s.omega_field.into(),
            s.resonance.into(),
            s.closure_residual.into(),
            f.natural_ratio.into(),
            f.rotational_ratio.into(),
            f.factor.into(),
        ]);
    }
    if !table.rows.is_empty() {
        log::warn!("string frequency conventions differ by a factor of 2 (rho c vs 2 rho c)");
    }
    Ok(table)
}

fn flowtest(a: &Args) -> Result<ResultsTable> {
    let omega = a.f("omega");
    let field = VelocityFieldSpec::harmonic_phase_space(omega)?;
    let period = 2.0 * std::f64::consts::PI / omega;
    let start = SpacetimePoint::new(0.0, vec![1.0, 0.0]);
    let mut table = ResultsTable::new(&["dt", "steps", "return_error", "error_ratio"]);
    let mut previous: Option<f64> = None;
    for &dt in a.list("dt") {
        if !(dt > 0.0) {
            return Err(Error::validation(format!("step sizes must be positive, got {dt}")));
        }
        let traj = integrate_flow(&field, &start, period, dt)?;
        let end = traj.end();
        let err = (end.x[0] - 1.0).hypot(end.x[1]);
        let ratio = match previous {
            Some(p) => Cell::Float(p / err),
            None => Cell::Empty,
        };
        table.push(vec![dt.into(), Cell::Int(traj.samples().len() as i64 - 1), err.into(), ratio]);
        previous = Some(err);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::resolve_params;

    fn run(kind: ScenarioKind) -> ResultsTable {
        execute(kind, &resolve_params(kind, &Params::new()).unwrap()).unwrap()
    }

    #[test]
    fn defaults_run_and_first_column_is_independent() {
        for kind in [ScenarioKind::Dirac, ScenarioKind::Box, ScenarioKind::String, ScenarioKind::Harmonic] {
            let t = run(kind);
            assert!(!t.rows.is_empty(), "{kind}");
        }
        assert_eq!(run(ScenarioKind::Dirac).rows.len(), 24);
        assert_eq!(run(ScenarioKind::Box).columns[0], "n");
    }

    #[test]
    fn flowtest_shows_fourth_order() {
        let mut p = resolve_params(ScenarioKind::Flowtest, &Params::new()).unwrap();
        p.insert("dt".into(), ParamValue::List(vec![0.02, 0.01]));
        let t = execute(ScenarioKind::Flowtest, &p).unwrap();
        let ratio = t.rows[1][3].as_f64().unwrap();
        assert!((12.0..=20.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn dispersion_is_seeded() {
        let p = resolve_params(ScenarioKind::Dispersion, &Params::new()).unwrap();
        assert_eq!(execute(ScenarioKind::Dispersion, &p).unwrap(), execute(ScenarioKind::Dispersion, &p).unwrap());
    }
}

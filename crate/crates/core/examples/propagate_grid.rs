//! Transports a Gaussian on a grid through a compressible flow with both
//! divergence weights and reports norms and the semigroup deviation.

use num_complex::Complex64;
use rqte::flow::VelocityFieldSpec;
use rqte::grid::WavefunctionGrid;
use rqte::lagrangian::LagrangianSpec;
use rqte::propagator::{compose_check, evolve_grid, DivergenceWeight, PropagatorConfig};
use rqte::{MassWavenumber, PhysicalConstants};

fn main() -> rqte::Result<()> {
    let kc = PhysicalConstants::natural();
    let mass = MassWavenumber::from_mass(1.0, &kc)?;
    let g0 = WavefunctionGrid::over_interval(-15.0, 15.0, 1201, 0.0, |x| {
        Complex64::new((-(x - 0.5) * (x - 0.5) / 2.0).exp(), 0.0)
    })?;
    for weight in [DivergenceWeight::Full, DivergenceWeight::Half] {
        let cfg = PropagatorConfig::new(
            VelocityFieldSpec::linear(0.3)?,
            LagrangianSpec::constant(-mass.rest_energy(&kc), mass, kc),
            weight,
        );
        for tau in [0.5, 1.0, 2.0] {
            let g = evolve_grid(&cfg, &g0, tau)?;
            println!("{weight:?} tau {tau}: norm {:.9} (initial {:.9})", g.norm(), g0.norm());
        }
        println!("{weight:?} semigroup deviation 0.6 + 0.9: {:.2e}", compose_check(&cfg, &g0, 0.6, 0.9)?);
    }
    Ok(())
}

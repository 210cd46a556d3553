//! Builds the four spinors of a moving frame, prints the bilinear relation
//! table, and checks that the scalar reduction matches the propagator.

use num_complex::Complex64;
use rqte::dirac::{build_spinors, plane_wave_residual, scalar_reduction_factor, verify_relation_table, ReductionBranch, SpinorKind};
use rqte::flow::VelocityFieldSpec;
use rqte::grid::SpacetimePoint;
use rqte::lagrangian::LagrangianSpec;
use rqte::propagator::{evolve_point, DivergenceWeight, PropagatorConfig};
use rqte::{MassWavenumber, PhysicalConstants};

fn main() -> rqte::Result<()> {
    let kc = PhysicalConstants::natural();
    let v = [0.2, -0.1, 0.6];
    let spinors = build_spinors(v, 1.0, &kc)?;
    println!("gamma = {:.12}, E = {:.12}", spinors.gamma, spinors.energy);

    let report = verify_relation_table(&spinors, &kc);
    for r in &report.relations {
        println!("{:<18} {:>+.15} (expected {:>+.15})", r.name, r.value, r.expected);
    }
    println!("max residual {:.2e}", report.max_residual);

    for kind in SpinorKind::ALL {
        let res = plane_wave_residual(&spinors, kind, 0.7, [0.1, 0.2, -0.3], &kc);
        println!("plane wave {}: Dirac residual {res:.2e}", kind.name());
    }

    let mass = MassWavenumber::from_mass(1.0, &kc)?;
    let cfg = PropagatorConfig::new(
        VelocityFieldSpec::relativistic_constant(v.to_vec(), &kc)?,
        LagrangianSpec::fock(mass, kc),
        DivergenceWeight::Full,
    );
    let y = SpacetimePoint::new(0.0, vec![0.0; 3]);
    for tau in [0.0, 1.0, 2.5, 10.0] {
        let w = evolve_point(&cfg, |_| Complex64::new(1.0, 0.0), &y, tau)?;
        let s = scalar_reduction_factor(ReductionBranch::UPlus, 1.0, tau, &kc)?;
        println!("tau {tau:>4}: propagator {w:.12}, reduction {s:.12}, |diff| {:.1e}", (w - s).norm());
    }
    Ok(())
}

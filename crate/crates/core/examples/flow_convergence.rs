//! Fourth-order convergence of the characteristic integrator on a harmonic orbit.

use std::f64::consts::PI;

use rqte::flow::{integrate_flow, VelocityFieldSpec};
use rqte::grid::SpacetimePoint;

fn main() -> rqte::Result<()> {
    let omega = 2.0;
    let period = 2.0 * PI / omega;
    let field = VelocityFieldSpec::harmonic_phase_space(omega)?;
    let start = SpacetimePoint::new(0.0, vec![1.0, 0.0]);
    let mut last: Option<f64> = None;
    for steps in [25, 50, 100, 200, 400] {
        let end = integrate_flow(&field, &start, period, period / steps as f64)?.end().clone();
        let err = (end.x[0] - 1.0).hypot(end.x[1]);
        match last {
            Some(prev) => println!("steps {steps:>4}: return error {err:.3e}, ratio {:.2}", prev / err),
            None => println!("steps {steps:>4}: return error {err:.3e}"),
        }
        last = Some(err);
    }
    Ok(())
}

//! Oscillator levels from phase closure on a numerically integrated orbit.

use rqte::flow::DEFAULT_DT;
use rqte::spectral::{closure_phase, harmonic_levels};
use rqte::PhysicalConstants;

fn main() -> rqte::Result<()> {
    let kc = PhysicalConstants::natural();
    for omega in [1.0, 2.0, 5.0] {
        let r = harmonic_levels(1.0, omega, 1.0, 5, &kc, DEFAULT_DT)?;
        println!("omega = {omega}: period action residual {:.2e}", r.action_residual.unwrap());
        for level in &r.levels {
            let phase = closure_phase(level, &r, &kc).unwrap();
            println!(
                "  n = {}  lambda = {:.12}  hbar omega (n + 1/2) = {:.12}  closure {:.3e}",
                level.n,
                level.lambda,
                omega * (level.n as f64 + 0.5),
                (phase - 1.0).norm()
            );
        }
    }
    Ok(())
}

//! Particle-in-box levels from the spatial resonance condition.

use rqte::spectral::box_levels;
use rqte::PhysicalConstants;

fn main() -> rqte::Result<()> {
    let kc = PhysicalConstants::natural();
    for l in [1.0, 2.0] {
        let r = box_levels(l, 1.0, 6, &kc)?;
        println!("l = {l}");
        for level in &r.levels {
            println!("  n = {}  lambda = {:.12}", level.n, level.lambda);
        }
    }
    Ok(())
}

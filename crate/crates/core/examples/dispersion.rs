//! Solves the de Broglie closure for a range of wavenumbers.

use rqte::wavepacket::debroglie_check;
use rqte::PhysicalConstants;

fn main() -> rqte::Result<()> {
    let kc = PhysicalConstants::natural();
    println!("{:>8} {:>16} {:>16} {:>10} {:>10}", "k", "u", "hbar omega", "disp", "energy");
    for i in 0..=12 {
        let k = 0.25 * (1u64 << i) as f64 - 0.25;
        let d = debroglie_check(&[k], 1.0, &kc)?;
        println!(
            "{k:>8.2} {:>16.12} {:>16.12} {:>10.1e} {:>10.1e}",
            d.u[0], d.omega, d.dispersion_residual, d.energy_residual
        );
    }
    Ok(())
}

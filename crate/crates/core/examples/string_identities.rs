//! Open-string constants in natural and SI units, including the two
//! frequency conventions that differ by a factor of two.

use rqte::spectral::{compton_wavelength, string_identities};
use rqte::units::ELECTRON_MASS_SI;
use rqte::PhysicalConstants;

fn main() -> rqte::Result<()> {
    for (label, kc, lengths) in [
        ("natural", PhysicalConstants::natural(), [0.5, 1.0, 2.0]),
        ("SI", PhysicalConstants::si(), [1e-35, 1e-18, 1e-15]),
    ] {
        println!("{label} units");
        for l in lengths {
            let s = string_identities(l, &kc)?;
            println!(
                "  l_s = {l:e}: m = {:.6e}, T0 = {:.6e}, sigma1 T0 - m c^2 = {:.1e}, ratios {} vs {}",
                s.mass, s.tension, s.closure_residual, s.frequency_ratio.natural_ratio, s.frequency_ratio.rotational_ratio
            );
        }
    }
    let lambda = compton_wavelength(ELECTRON_MASS_SI, &PhysicalConstants::si())?;
    println!("electron reduced Compton wavelength: {lambda:.6e} m");
    Ok(())
}

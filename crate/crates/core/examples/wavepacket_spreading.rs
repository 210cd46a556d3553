//! Width of a Gaussian packet against time at several central Lorentz
//! factors, next to the Schrodinger width law.

use rqte::wavepacket::{gaussian_width, packet_grid_auto, schrodinger_width, WavepacketParams};
use rqte::PhysicalConstants;

fn main() -> rqte::Result<()> {
    let kc = PhysicalConstants::natural();
    let gammas = [1.0, 1.25, 2.0, 5.0];
    let packets = gammas
        .iter()
        .map(|&g| WavepacketParams::new(1.0, 1.0).with_center_gamma(g, &kc))
        .collect::<rqte::Result<Vec<_>>>()?;

    print!("{:>6} {:>12}", "t", "schrodinger");
    for g in gammas {
        print!(" {:>12}", format!("gamma={g}"));
    }
    println!();
    for i in 0..=10 {
        let t = i as f64;
        print!("{t:>6.1} {:>12.6}", schrodinger_width(1.0, 1.0, t, &kc));
        for p in &packets {
            print!(" {:>12.6}", gaussian_width(&packet_grid_auto(p, t, 512, &kc)?)?);
        }
        println!();
    }
    Ok(())
}

//! Fraction of a Gaussian cluster captured by rectangular and triangular
//! beams, aligned and misaligned.

use mmwave_beamwidth::antenna::{BeamShape, BeamSpec};
use mmwave_beamwidth::cluster::{rho_rect, rho_tri, GaussianCluster, Spectrum};

fn main() -> mmwave_beamwidth::Result<()> {
    let sigma = 5.0;
    println!("sigma = {sigma} deg");
    println!("{:>6} {:>6} {:>10} {:>10}", "bw", "delta", "rho_rect", "rho_tri");
    for bw in [2.0, 5.0, 10.0, 20.0, 40.0] {
        for delta in [0.0, 5.0, 10.0] {
            println!(
                "{bw:>6.1} {delta:>6.1} {:>10.6} {:>10.6}",
                rho_rect(sigma, delta, bw),
                rho_tri(sigma, delta, bw)?
            );
        }
    }

    // The same through the spectrum interface, in milliwatts.
    let cluster = GaussianCluster::conference_room(1.0, 60.0)?;
    for shape in [BeamShape::Rectangular, BeamShape::Triangular] {
        let beam = BeamSpec::new(shape, 10.0, 53.0)?;
        println!("{shape:?} 10 deg beam at 53 deg: {:.6} mW", cluster.extracted_power(&beam)?);
    }
    Ok(())
}

//! Rectangular versus triangular beam patterns: window values and the loss
//! of the narrow-beam limit.

use mmwave_beamwidth::antenna::{to_db, window_value, BeamShape, BeamSpec};
use mmwave_beamwidth::cluster::GaussianCluster;
use mmwave_beamwidth::optimizer::{p_max_theoretical, received_power};

fn main() -> mmwave_beamwidth::Result<()> {
    let rect = BeamSpec::rectangular(10.0, 90.0)?;
    let tri = BeamSpec::triangular(10.0, 90.0)?;
    println!("{:>8} {:>6} {:>6}", "angle", "rect", "tri");
    for k in -6..=6 {
        let a = 90.0 + k as f64;
        println!("{a:>8.1} {:>6.2} {:>6.2}", window_value(&rect, a), window_value(&tri, a));
    }

    let cluster = GaussianCluster::conference_room(1.0, 53.0)?;
    let r = p_max_theoretical(&cluster, 53.0, BeamShape::Rectangular)?;
    let t = p_max_theoretical(&cluster, 53.0, BeamShape::Triangular)?;
    println!("\nnarrow-beam limit: rect/tri = {:.4} dB", to_db(r / t));
    for bw in [0.01, 1.0, 5.0, 20.0] {
        let pr = received_power(&cluster, &BeamSpec::rectangular(bw, 53.0)?)?;
        let pt = received_power(&cluster, &BeamSpec::triangular(bw, 53.0)?)?;
        println!("bw {bw:>5}: rect/tri = {:.4} dB", to_db(pr / pt));
    }
    Ok(())
}

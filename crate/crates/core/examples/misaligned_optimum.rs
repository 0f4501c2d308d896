//! Optimum beamwidth under beam misalignment in the three regimes.

use mmwave_beamwidth::antenna::BeamShape;
use mmwave_beamwidth::cli::to_dbm;
use mmwave_beamwidth::cluster::GaussianCluster;
use mmwave_beamwidth::optimizer::optimize_misaligned;

fn main() -> mmwave_beamwidth::Result<()> {
    let phi0 = 53.0;
    let cluster = GaussianCluster::conference_room(1.0, phi0)?;
    println!(
        "{:>6} {:>14} {:>10} {:>6} {:>10} {:>6}",
        "delta", "regime", "bw_opt", "N", "P_max dBm", "d2<0"
    );
    for delta in [0.0, 3.0, 5.0, 6.0, 7.0, 8.0, 10.0, 15.0] {
        let opt = optimize_misaligned(&cluster, phi0, delta, BeamShape::Rectangular)?;
        let n = opt.n_elements.map_or("inf".to_string(), |n| n.to_string());
        println!(
            "{delta:>6.1} {:>14} {:>10.4} {n:>6} {:>10.3} {:>6}",
            opt.regime.as_str(),
            opt.beamwidth_opt,
            to_dbm(opt.p_max),
            opt.second_derivative_ok
        );
    }

    let tri = optimize_misaligned(&cluster, phi0, 10.0, BeamShape::Triangular)?;
    println!("\ntriangular beam at delta 10: bw_opt {:.4} deg", tri.beamwidth_opt);
    Ok(())
}

//! Beamwidth and array size needed to reach a fraction of the narrow-beam
//! power limit, exact and approximate.

use mmwave_beamwidth::cli::{table1, TABLE1_ETAS};
use mmwave_beamwidth::cluster::GaussianCluster;
use mmwave_beamwidth::optimizer::percentile_plan;

fn main() -> mmwave_beamwidth::Result<()> {
    let rows = table1(5.0, 9.23, 53.0, &TABLE1_ETAS)?;
    println!("{:>6} {:>10} {:>5} {:>10} {:>5}", "eta", "bw std", "N", "bw rticm", "N");
    for r in &rows {
        println!(
            "{:>6} {:>10.4} {:>5} {:>10.4} {:>5}",
            r.eta, r.beamwidth_st, r.n_st, r.beamwidth_rt, r.n_rt
        );
    }

    let cluster = GaussianCluster::living_room(1.0, 53.0)?;
    println!("\nliving room, sigma 10:");
    for eta in [0.5, 0.8, 0.9, 0.95] {
        let p = percentile_plan(&cluster, 53.0, eta)?;
        println!(
            "  eta {eta:.2}: exact {:.3} deg, approx {:.3} deg{}, N = {}",
            p.beamwidth_exact,
            p.beamwidth_approx,
            if p.approx_in_support { "" } else { " (outside support)" },
            p.n_elements
        );
    }
    Ok(())
}

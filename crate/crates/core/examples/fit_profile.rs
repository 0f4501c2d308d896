//! Fit a Gaussian to a measured angle/power profile and compare discrete and
//! fitted extraction.
//!
//! ```text
//! cargo run --example fit_profile -- [profile.csv]
//! ```

use std::path::PathBuf;

use mmwave_beamwidth::antenna::BeamSpec;
use mmwave_beamwidth::cli::{ingest_profile, to_dbm};
use mmwave_beamwidth::cluster::{
    extracted_power_discrete, profile_to_fitted, total_power_discrete, Spectrum,
};

fn main() -> mmwave_beamwidth::Result<()> {
    let path = std::env::args_os().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/data/case_study_profile.csv")
    });
    let profile = ingest_profile(&path)?;
    let fitted = profile_to_fitted(&profile)?;
    println!(
        "{} rays, spacing {:.4} deg, total {:.3} dBm",
        profile.ray_count(),
        profile.ray_spacing(),
        to_dbm(total_power_discrete(&profile))
    );
    println!("fit: u = {:.4e}, v = {:.4}, x = {:.4}", fitted.u, fitted.v, fitted.x);

    // The fit covers the diffuse rays only; add the specular ray back for a
    // like-for-like comparison.
    println!("\n{:>6} {:>12} {:>12} {:>14} {:>6}", "bw", "discrete", "fitted", "fitted+spec", "rays");
    for bw in [1.0, 2.0, 5.0, 10.0, 20.0, 40.0] {
        let beam = BeamSpec::rectangular(bw, fitted.x)?;
        let d = extracted_power_discrete(&profile, &beam)?;
        let f = fitted.extracted_power(&beam)?;
        let spec = if d.specular_in_beam { profile.specular_power() } else { 0.0 };
        println!(
            "{bw:>6.1} {:>12.3} {:>12.3} {:>14.3} {:>6}",
            to_dbm(d.power),
            to_dbm(f),
            to_dbm(f + spec),
            d.rays_in_beam
        );
    }
    Ok(())
}

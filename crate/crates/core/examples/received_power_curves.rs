//! Received power against beamwidth for several misalignments, written as
//! CSV to stdout.

use mmwave_beamwidth::antenna::BeamSpec;
use mmwave_beamwidth::cli::{fmt_g, to_dbm, CsvTable};
use mmwave_beamwidth::cluster::GaussianCluster;
use mmwave_beamwidth::optimizer::received_power;

fn main() -> mmwave_beamwidth::Result<()> {
    let phi0 = 53.0;
    let deltas = [0.0, 5.0, 10.0, 15.0];
    let mut header = vec!["beamwidth_deg".to_string()];
    header.extend(deltas.iter().map(|d| format!("dbm_delta_{d}")));
    let mut table = CsvTable {
        header,
        rows: Vec::new(),
    };
    for k in 1..=60 {
        let bw = k as f64;
        let mut row = vec![fmt_g(bw)];
        for d in deltas {
            let cluster = GaussianCluster::conference_room(1.0, phi0 + d)?;
            let p = received_power(&cluster, &BeamSpec::rectangular(bw, phi0)?)?;
            row.push(fmt_g(to_dbm(p)));
        }
        table.push(row);
    }
    print!("{}", String::from_utf8(table.to_bytes()?).expect("csv is utf-8"));
    Ok(())
}

//! Gain, beamwidth and element count of a half-wavelength ULA across scan
//! angles.

use mmwave_beamwidth::antenna::{
    beamwidth_from_elements, elements_from_beamwidth, gain_from_elements, to_db, UlaGeometry,
};

fn main() -> mmwave_beamwidth::Result<()> {
    println!("{:>5} {:>8} {:>10} {:>10} {:>10}", "N", "gain dB", "bw@90", "bw@53", "bw@0");
    for n in [2u64, 4, 8, 16, 32, 64, 128] {
        let ula = UlaGeometry::new(n)?;
        println!(
            "{n:>5} {:>8.2} {:>10.3} {:>10.3} {:>10.3}",
            to_db(gain_from_elements(&ula)),
            beamwidth_from_elements(&ula, 90.0)?,
            beamwidth_from_elements(&ula, 53.0)?,
            beamwidth_from_elements(&ula, 0.0)?,
        );
    }

    // The inverse rounds up: a 5 degree beam at 53 degrees needs 26 elements.
    println!("\n5 deg at 53 deg needs N = {}", elements_from_beamwidth(5.0, 53.0)?);
    Ok(())
}

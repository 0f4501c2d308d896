//! Angle/power profile files.
//!
//! ```text
//! angle_deg,power_linear,specular
//! 53.0,1.81e-4,1
//! 16.9,1.24e-12,0
//! ...
//! ```
//!
//! The header and the third column are optional. At most one row may be
//! flagged specular; the remaining rows are the diffuse rays and must be
//! uniformly spaced in increasing angle order.

use std::io::Read;
use std::path::Path;

use crate::cluster::ClusterProfile;
use crate::error::{Error, Result};

/// Absolute tolerance, in degrees, on the diffuse ray spacing.
pub const SPACING_TOL_DEG: f64 = 1e-6;
pub const MIN_ROWS: usize = 4;

pub fn ingest_profile(path: &Path) -> Result<ClusterProfile> {
    let file = std::fs::File::open(path)?;
    read_profile(file).map_err(|e| match e {
        Error::Format(m) => Error::Format(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn read_profile<R: Read>(reader: R) -> Result<ClusterProfile> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);

    let mut specular: Option<(f64, f64)> = None;
    let mut diffuse: Vec<(f64, f64)> = Vec::new();
    let mut rows = 0usize;
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let line = i + 1;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        if i == 0 && record.get(0).is_some_and(|f| f.parse::<f64>().is_err()) {
            continue;
        }
        if !(2..=3).contains(&record.len()) {
            return Err(Error::Format(format!(
                "line {line}: expected 2 or 3 columns, got {}",
                record.len()
            )));
        }
        let angle = number(&record[0], line, "angle")?;
        let power = number(&record[1], line, "power")?;
        if power < 0.0 {
            return Err(Error::Format(format!("line {line}: negative power {power}")));
        }
        let is_specular = match record.get(2) {
            None | Some("0") | Some("") => false,
            Some("1") => true,
            Some(other) => {
                return Err(Error::Format(format!(
                    "line {line}: specular flag must be 0 or 1, got {other:?}"
                )))
            }
        };
        rows += 1;
        if is_specular {
            if specular.replace((angle, power)).is_some() {
                return Err(Error::Format(format!(
                    "line {line}: more than one row is flagged specular"
                )));
            }
        } else {
            diffuse.push((angle, power));
        }
    }

    if rows < MIN_ROWS {
        return Err(Error::InsufficientData(format!(
            "profile has {rows} rows, need at least {MIN_ROWS}"
        )));
    }
    check_spacing(&diffuse)?;

    let (specular_aoa, specular_power) = specular.unwrap_or_else(|| {
        let lo = diffuse.first().map_or(0.0, |r| r.0);
        let hi = diffuse.last().map_or(0.0, |r| r.0);
        (0.5 * (lo + hi), 0.0)
    });
    let offsets = diffuse.iter().map(|(a, _)| a - specular_aoa).collect();
    let powers = diffuse.iter().map(|(_, p)| *p).collect();
    ClusterProfile::new(specular_power, specular_aoa, offsets, powers)
        .map_err(|e| Error::Format(e.to_string()))
}

fn number(field: &str, line: usize, what: &str) -> Result<f64> {
    match field.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::Format(format!("line {line}: {what} {field:?} is not a finite number"))),
    }
}

fn check_spacing(diffuse: &[(f64, f64)]) -> Result<()> {
    if diffuse.len() < 2 {
        return Ok(());
    }
    let n = diffuse.len();
    let spacing = (diffuse[n - 1].0 - diffuse[0].0) / (n - 1) as f64;
    if !(spacing > 0.0) {
        return Err(Error::Format("diffuse ray angles must increase".into()));
    }
    for (k, w) in diffuse.windows(2).enumerate() {
        let step = w[1].0 - w[0].0;
        if (step - spacing).abs() > SPACING_TOL_DEG {
            return Err(Error::Format(format!(
                "diffuse rays are not uniformly spaced: step {step} after ray {k}, expected {spacing}"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(n: usize, span: f64) -> String {
        let mut s = String::from("angle_deg,power_linear\n");
        for k in 0..n {
            let a = 10.0 + k as f64 * span / (n - 1) as f64;
            s.push_str(&format!("{a},{}\n", 1e-5));
        }
        s
    }

    #[test]
    fn uniform_file() {
        let p = read_profile(rows(75, 75.0).as_bytes()).unwrap();
        assert_eq!(p.ray_count(), 75);
        assert!((p.angle_spread() - 75.0).abs() < 1e-9);
        assert_eq!(p.specular_power(), 0.0);
    }

    #[test]
    fn specular_row() {
        let text = "50,0.5,1\n49,1,0\n50,2,0\n51,1,0\n";
        let p = read_profile(text.as_bytes()).unwrap();
        assert_eq!(p.specular_power(), 0.5);
        assert_eq!(p.ray_offsets(), &[-1.0, 0.0, 1.0]);
        assert!(read_profile("50,0.5,1\n49,1,1\n50,2,0\n51,1,0\n".as_bytes()).is_err());
    }

    #[test]
    fn rejects_bad_files() {
        assert!(matches!(
            read_profile("1,1\n2,NaN\n3,1\n4,1\n".as_bytes()),
            Err(Error::Format(_))
        ));
        assert!(matches!(
            read_profile("1,1\n2,-1\n3,1\n4,1\n".as_bytes()),
            Err(Error::Format(_))
        ));
        assert!(matches!(
            read_profile("1,1\n2,1\n3.5,1\n4,1\n".as_bytes()),
            Err(Error::Format(_))
        ));
        assert!(matches!(
            read_profile("1,1\n2,1\n3,1\n".as_bytes()),
            Err(Error::InsufficientData(_))
        ));
    }
}

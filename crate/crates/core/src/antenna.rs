//! Uniform linear array: gain, half-power beamwidth and element count, plus
//! the two idealised main-lobe windows.
//!
//! All angles are in degrees. The array spacing is fixed at half a
//! wavelength, for which
//!
//! ```text
//! beamwidth = 101.5 / (N sin(phi0))        0 < phi0 < 180
//! beamwidth = 152.53 / sqrt(N)             phi0 = 0 or 180 (endfire)
//! gain      = N
//! ```

use crate::error::{domain, Result};

/// Broadside beamwidth constant (degrees) for half-wavelength spacing.
pub const BEAMWIDTH_CONST: f64 = 101.5;
/// Endfire beamwidth constant (degrees) for half-wavelength spacing.
pub const ENDFIRE_BEAMWIDTH_CONST: f64 = 152.53;
/// The only supported element spacing, in wavelengths.
pub const HALF_WAVELENGTH: f64 = 0.5;
/// Smallest array the relations are applied to.
pub const MIN_ELEMENTS: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UlaGeometry {
    n_elements: u64,
}

impl UlaGeometry {
    pub fn new(n_elements: u64) -> Result<Self> {
        if n_elements < MIN_ELEMENTS {
            return Err(domain(format!(
                "a ULA needs at least {MIN_ELEMENTS} elements, got {n_elements}"
            )));
        }
        Ok(UlaGeometry { n_elements })
    }

    /// Any spacing other than half a wavelength is rejected.
    pub fn with_spacing(n_elements: u64, spacing_ratio: f64) -> Result<Self> {
        if spacing_ratio != HALF_WAVELENGTH {
            return Err(domain(format!(
                "only d/lambda = 0.5 is supported, got {spacing_ratio}"
            )));
        }
        Self::new(n_elements)
    }

    pub fn n_elements(&self) -> u64 {
        self.n_elements
    }

    pub fn spacing_ratio(&self) -> f64 {
        HALF_WAVELENGTH
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BeamShape {
    /// Flat unit gain across the main lobe; an upper bound on captured power.
    Rectangular,
    /// Linear roll-off to 0.5 at the half-power edges; a lower bound.
    Triangular,
}

/// A main lobe of half-power width `beamwidth` steered to `scan_angle`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSpec {
    pub shape: BeamShape,
    pub beamwidth: f64,
    pub scan_angle: f64,
}

impl BeamSpec {
    pub fn new(shape: BeamShape, beamwidth: f64, scan_angle: f64) -> Result<Self> {
        if !(beamwidth > 0.0) || !beamwidth.is_finite() {
            return Err(domain(format!("beamwidth must be positive, got {beamwidth}")));
        }
        check_scan_angle(scan_angle)?;
        Ok(BeamSpec {
            shape,
            beamwidth,
            scan_angle,
        })
    }

    pub fn rectangular(beamwidth: f64, scan_angle: f64) -> Result<Self> {
        Self::new(BeamShape::Rectangular, beamwidth, scan_angle)
    }

    pub fn triangular(beamwidth: f64, scan_angle: f64) -> Result<Self> {
        Self::new(BeamShape::Triangular, beamwidth, scan_angle)
    }

    /// Lower and upper edge of the main lobe.
    pub fn edges(&self) -> (f64, f64) {
        let half = 0.5 * self.beamwidth;
        (self.scan_angle - half, self.scan_angle + half)
    }
}

pub fn check_scan_angle(scan_angle: f64) -> Result<()> {
    if !(0.0..=180.0).contains(&scan_angle) {
        return Err(domain(format!(
            "scan angle must lie in [0, 180] degrees, got {scan_angle}"
        )));
    }
    Ok(())
}

/// Exactly 0 or 180 degrees. Angles arbitrarily close to endfire still use
/// the interior formula.
pub fn is_endfire(scan_angle: f64) -> bool {
    scan_angle == 0.0 || scan_angle == 180.0
}

fn sin_deg(angle: f64) -> f64 {
    angle.to_radians().sin()
}

/// Array gain of a uniformly excited ULA: the element count.
pub fn gain_from_elements(ula: &UlaGeometry) -> f64 {
    ula.n_elements as f64
}

/// Half-power beamwidth (degrees) of an `N`-element ULA steered to `scan_angle`.
pub fn beamwidth_from_elements(ula: &UlaGeometry, scan_angle: f64) -> Result<f64> {
    check_scan_angle(scan_angle)?;
    let n = ula.n_elements as f64;
    Ok(if is_endfire(scan_angle) {
        ENDFIRE_BEAMWIDTH_CONST / n.sqrt()
    } else {
        BEAMWIDTH_CONST / (n * sin_deg(scan_angle))
    })
}

/// Array gain as a function of beamwidth, with `N` eliminated.
pub fn gain_from_beamwidth(beamwidth: f64, scan_angle: f64) -> Result<f64> {
    if !(beamwidth > 0.0) {
        return Err(domain(format!("beamwidth must be positive, got {beamwidth}")));
    }
    check_scan_angle(scan_angle)?;
    Ok(if is_endfire(scan_angle) {
        let r = ENDFIRE_BEAMWIDTH_CONST / beamwidth;
        r * r
    } else {
        BEAMWIDTH_CONST / (beamwidth * sin_deg(scan_angle))
    })
}

/// Smallest element count whose beamwidth does not exceed `beamwidth`,
/// clamped to at least two elements.
pub fn elements_from_beamwidth(beamwidth: f64, scan_angle: f64) -> Result<u64> {
    let n = gain_from_beamwidth(beamwidth, scan_angle)?;
    if !n.is_finite() || n > 1e15 {
        return Err(domain(format!(
            "beamwidth {beamwidth} deg needs an unrepresentable number of elements"
        )));
    }
    // A round trip through the beamwidth formula may land a few ulps above
    // an integer; do not let that bump the count.
    let nearest = n.round();
    let count = if (n - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest
    } else {
        n.ceil()
    };
    Ok((count as u64).max(MIN_ELEMENTS))
}

/// Main-lobe window weight at `angle` (zero outside the half-power edges).
pub fn window_value(beam: &BeamSpec, angle: f64) -> f64 {
    let offset = (angle - beam.scan_angle).abs();
    if offset > 0.5 * beam.beamwidth {
        return 0.0;
    }
    match beam.shape {
        BeamShape::Rectangular => 1.0,
        BeamShape::Triangular => 1.0 - offset / beam.beamwidth,
    }
}

pub fn to_db(ratio: f64) -> f64 {
    10.0 * ratio.log10()
}

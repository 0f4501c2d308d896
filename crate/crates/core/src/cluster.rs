//! Cluster power-angle spectra and the power a beam extracts from them.
//!
//! Three descriptions of one cluster are supported:
//!
//! * [`ClusterProfile`]: a discrete ray-traced profile, one specular ray plus
//!   uniformly spaced diffuse rays whose squared amplitudes are power
//!   densities (power per degree).
//! * [`GaussianCluster`]: a normal power-angle spectrum with total power
//!   `P_tot` and standard deviation `sigma` (the 802.11ad description).
//! * [`FittedGaussianCluster`]: `u * exp(-(phi - x)^2 / v^2)` fitted to a
//!   discrete profile. It is the same family as `GaussianCluster` under
//!   `P_tot = u v sqrt(pi)` and `sigma = v / sqrt(2)`.
//!
//! Powers are carried in arbitrary linear units; the command-line layer
//! treats them as milliwatts.

use std::f64::consts::{PI, SQRT_2};

use crate::antenna::{BeamShape, BeamSpec};
use crate::error::{domain, Error, Result};
use crate::numerics::{erf, erf_span, fit_gaussian, integrate};

/// 802.11ad angular spread for conference-room and cubicle channels.
pub const SIGMA_CONFERENCE_ROOM: f64 = 5.0;
/// 802.11ad angular spread for living-room channels.
pub const SIGMA_LIVING_ROOM: f64 = 10.0;

/// Relative tolerance on the spacing of diffuse ray offsets.
const SPACING_TOL: f64 = 1e-6;

/// Discrete power-angle profile of a single cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterProfile {
    specular_power: f64,
    specular_aoa: f64,
    ray_offsets: Vec<f64>,
    ray_amplitudes_sq: Vec<f64>,
    ray_spacing: f64,
    angle_spread: f64,
}

impl ClusterProfile {
    /// Build a profile from diffuse ray offsets (degrees, relative to the
    /// specular ray) and their squared amplitudes.
    ///
    /// Offsets must be strictly increasing with uniform spacing.
    pub fn new(
        specular_power: f64,
        specular_aoa: f64,
        ray_offsets: Vec<f64>,
        ray_amplitudes_sq: Vec<f64>,
    ) -> Result<Self> {
        if ray_offsets.len() != ray_amplitudes_sq.len() {
            return Err(domain(format!(
                "{} ray offsets but {} ray powers",
                ray_offsets.len(),
                ray_amplitudes_sq.len()
            )));
        }
        if !(specular_power >= 0.0) || !specular_power.is_finite() {
            return Err(domain(format!("specular power must be >= 0, got {specular_power}")));
        }
        if !specular_aoa.is_finite() {
            return Err(domain("specular AoA is not finite"));
        }
        if let Some(p) = ray_amplitudes_sq.iter().find(|p| !(**p >= 0.0) || !p.is_finite()) {
            return Err(domain(format!("ray powers must be finite and >= 0, got {p}")));
        }
        if ray_offsets.iter().any(|a| !a.is_finite()) {
            return Err(domain("ray offsets must be finite"));
        }
        let ray_spacing = uniform_spacing(&ray_offsets)?;
        let angle_spread = match ray_offsets.len() {
            0 => 0.0,
            n => ray_spacing * (n - 1) as f64,
        };
        Ok(ClusterProfile {
            specular_power,
            specular_aoa,
            ray_offsets,
            ray_amplitudes_sq,
            ray_spacing,
            angle_spread,
        })
    }

    /// Profile whose `k`-th diffuse ray sits at `first_offset + k * spacing`.
    pub fn uniform(
        specular_power: f64,
        specular_aoa: f64,
        first_offset: f64,
        spacing: f64,
        ray_amplitudes_sq: Vec<f64>,
    ) -> Result<Self> {
        let offsets = (0..ray_amplitudes_sq.len())
            .map(|k| first_offset + k as f64 * spacing)
            .collect();
        Self::new(specular_power, specular_aoa, offsets, ray_amplitudes_sq)
    }

    pub fn specular_power(&self) -> f64 {
        self.specular_power
    }

    pub fn specular_aoa(&self) -> f64 {
        self.specular_aoa
    }

    pub fn ray_offsets(&self) -> &[f64] {
        &self.ray_offsets
    }

    pub fn ray_amplitudes_sq(&self) -> &[f64] {
        &self.ray_amplitudes_sq
    }

    pub fn ray_count(&self) -> usize {
        self.ray_offsets.len()
    }

    pub fn ray_spacing(&self) -> f64 {
        self.ray_spacing
    }

    /// `phi_max - phi_min` over the diffuse rays.
    pub fn angle_spread(&self) -> f64 {
        self.angle_spread
    }

    /// Absolute arrival angles of the diffuse rays.
    pub fn ray_angles(&self) -> impl Iterator<Item = f64> + '_ {
        self.ray_offsets.iter().map(move |a| self.specular_aoa + a)
    }
}

fn uniform_spacing(offsets: &[f64]) -> Result<f64> {
    if offsets.len() < 2 {
        return Ok(0.0);
    }
    let n = offsets.len();
    let spacing = (offsets[n - 1] - offsets[0]) / (n - 1) as f64;
    if !(spacing > 0.0) {
        return Err(domain("ray offsets must be strictly increasing"));
    }
    for (k, pair) in offsets.windows(2).enumerate() {
        let step = pair[1] - pair[0];
        if (step - spacing).abs() > SPACING_TOL * spacing.max(1.0) {
            return Err(domain(format!(
                "ray offsets are not uniformly spaced: step {step} at index {k}, expected {spacing}"
            )));
        }
    }
    Ok(spacing)
}

/// Normal power-angle spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianCluster {
    pub total_power: f64,
    pub sigma: f64,
    pub center_aoa: f64,
}

impl GaussianCluster {
    pub fn new(total_power: f64, sigma: f64, center_aoa: f64) -> Result<Self> {
        if !(total_power > 0.0) || !total_power.is_finite() {
            return Err(domain(format!("total power must be positive, got {total_power}")));
        }
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(domain(format!("sigma must be positive, got {sigma}")));
        }
        if !center_aoa.is_finite() {
            return Err(domain("cluster AoA is not finite"));
        }
        Ok(GaussianCluster {
            total_power,
            sigma,
            center_aoa,
        })
    }

    pub fn conference_room(total_power: f64, center_aoa: f64) -> Result<Self> {
        Self::new(total_power, SIGMA_CONFERENCE_ROOM, center_aoa)
    }

    pub fn living_room(total_power: f64, center_aoa: f64) -> Result<Self> {
        Self::new(total_power, SIGMA_LIVING_ROOM, center_aoa)
    }

    /// Power density (per degree) at `angle`.
    pub fn density(&self, angle: f64) -> f64 {
        let z = (angle - self.center_aoa) / self.sigma;
        self.total_power * (-0.5 * z * z).exp() / ((2.0 * PI).sqrt() * self.sigma)
    }
}

/// Gaussian `u * exp(-(phi - x)^2 / v^2)` fitted to a discrete profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FittedGaussianCluster {
    pub u: f64,
    pub v: f64,
    pub x: f64,
}

impl FittedGaussianCluster {
    pub fn new(u: f64, v: f64, x: f64) -> Result<Self> {
        if !(u > 0.0) || !u.is_finite() {
            return Err(domain(format!("u must be positive, got {u}")));
        }
        if !(v > 0.0) || !v.is_finite() {
            return Err(domain(format!("v must be positive, got {v}")));
        }
        if !x.is_finite() {
            return Err(domain("x is not finite"));
        }
        Ok(FittedGaussianCluster { u, v, x })
    }

    /// `u v sqrt(pi)`, the integral of the fitted density.
    pub fn total_power(&self) -> f64 {
        self.u * self.v * PI.sqrt()
    }

    pub fn sigma(&self) -> f64 {
        self.v / SQRT_2
    }

    pub fn density(&self, angle: f64) -> f64 {
        let d = (angle - self.x) / self.v;
        self.u * (-d * d).exp()
    }

    pub fn to_standard(&self) -> GaussianCluster {
        GaussianCluster {
            total_power: self.total_power(),
            sigma: self.sigma(),
            center_aoa: self.x,
        }
    }
}

/// Common view of the two continuous spectra.
pub trait Spectrum {
    fn total_power(&self) -> f64;
    fn sigma(&self) -> f64;
    fn center_aoa(&self) -> f64;
    /// Power captured by `beam` (linear units, before antenna gain).
    fn extracted_power(&self, beam: &BeamSpec) -> Result<f64>;
    /// Same spectrum moved so its centre sits at `center_aoa`.
    fn recentered(&self, center_aoa: f64) -> Self
    where
        Self: Sized;
}

impl Spectrum for GaussianCluster {
    fn total_power(&self) -> f64 {
        self.total_power
    }
    fn sigma(&self) -> f64 {
        self.sigma
    }
    fn center_aoa(&self) -> f64 {
        self.center_aoa
    }
    fn extracted_power(&self, beam: &BeamSpec) -> Result<f64> {
        extracted_power_standard(self, beam)
    }
    fn recentered(&self, center_aoa: f64) -> Self {
        GaussianCluster {
            center_aoa,
            ..*self
        }
    }
}

impl Spectrum for FittedGaussianCluster {
    fn total_power(&self) -> f64 {
        FittedGaussianCluster::total_power(self)
    }
    fn sigma(&self) -> f64 {
        FittedGaussianCluster::sigma(self)
    }
    fn center_aoa(&self) -> f64 {
        self.x
    }
    fn extracted_power(&self, beam: &BeamSpec) -> Result<f64> {
        extracted_power_fitted(self, beam)
    }
    fn recentered(&self, center_aoa: f64) -> Self {
        FittedGaussianCluster {
            x: center_aoa,
            ..*self
        }
    }
}

/// `a_sp^2 + (S_phi / N) * sum(a_k^2)`.
pub fn total_power_discrete(profile: &ClusterProfile) -> f64 {
    let n = profile.ray_count();
    if n == 0 {
        return profile.specular_power;
    }
    let diffuse: f64 = profile.ray_amplitudes_sq.iter().sum();
    profile.specular_power + profile.angle_spread / n as f64 * diffuse
}

/// Fraction of a normal spectrum captured by a rectangular window of width
/// `beamwidth` whose centre is `delta` away from the spectrum mean.
///
/// `0.5 * (erf((bw + 2 delta) / (2 sqrt2 sigma)) + erf((bw - 2 delta) / (2 sqrt2 sigma)))`
///
/// Even in `delta`. Evaluated as a single `erf` difference over the beam
/// so that narrow beams and beams far out in the tail keep their relative
/// precision.
pub fn rho_rect(sigma: f64, delta: f64, beamwidth: f64) -> f64 {
    if beamwidth == 0.0 {
        return 0.0;
    }
    let scale = 2.0 * SQRT_2 * sigma;
    0.5 * erf_span(2.0 * delta.abs() / scale, beamwidth / scale)
}

/// Fraction of a normal spectrum captured by a triangular window.
///
/// Aligned beams use the closed form
/// `erf(bw / (2 sqrt2 sigma)) - sqrt2 sigma (1 - exp(-bw^2 / 8 sigma^2)) / (sqrt(pi) bw)`;
/// misaligned beams integrate the window against the density numerically.
pub fn rho_tri(sigma: f64, delta: f64, beamwidth: f64) -> Result<f64> {
    if !(sigma > 0.0) || !(beamwidth >= 0.0) || !delta.is_finite() {
        return Err(domain(format!(
            "rho_tri: need sigma > 0 and beamwidth >= 0 (sigma={sigma}, beamwidth={beamwidth}, delta={delta})"
        )));
    }
    if beamwidth == 0.0 {
        return Ok(0.0);
    }
    if beamwidth.is_infinite() {
        return Ok(1.0);
    }
    let delta = delta.abs();
    if delta == 0.0 {
        let x = beamwidth / (2.0 * SQRT_2 * sigma);
        let edge = -(-x * x).exp_m1();
        return Ok(erf(x) - SQRT_2 * sigma * edge / (PI.sqrt() * beamwidth));
    }

    // Beam centred at 0, density centred at delta. The window has a kink at
    // 0 and the density peaks at delta, so split there: every piece is then
    // smooth and peaks at one of its ends. Each piece is integrated with
    // the density divided by that peak value, so beams deep in the tail keep
    // their relative precision; the factor goes back on at the end.
    let half = 0.5 * beamwidth;
    let reach = 40.0 * sigma;
    let lo = (-half).max(delta - reach);
    let hi = half.min(delta + reach);
    if !(lo < hi) {
        return Ok(0.0);
    }
    let mut cuts = vec![lo, hi];
    cuts.extend([0.0, delta].into_iter().filter(|c| lo < *c && *c < hi));
    cuts.sort_by(f64::total_cmp);

    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let peak = delta.clamp(a, b);
        let log_peak = -0.5 * ((peak - delta) / sigma).powi(2);
        // z^2 - z_peak^2 in factored form; the expanded difference of two
        // large squares would swamp the tolerance with rounding noise.
        let scaled = |t: f64| {
            let expo = -0.5 * ((t - peak) / sigma) * ((t + peak - 2.0 * delta) / sigma);
            (1.0 - t.abs() / beamwidth) * expo.exp()
        };
        // The scaled integrand is at least 0.5 near the peak and decays over
        // `decay`, which bounds the piece's integral from below.
        let decay = sigma * (sigma / (peak - delta).abs()).min(1.0);
        let tol = 1e-14 * (b - a).min(decay);
        let piece = integrate(scaled, a, b, tol).map_err(|e| match e {
            Error::Numeric(m) => Error::Numeric(format!("rho_tri quadrature: {m}")),
            other => other,
        })?;
        total += piece * log_peak.exp() / ((2.0 * PI).sqrt() * sigma);
    }
    Ok(total)
}

fn rho(shape: BeamShape, sigma: f64, delta: f64, beamwidth: f64) -> Result<f64> {
    match shape {
        BeamShape::Rectangular => Ok(rho_rect(sigma, delta, beamwidth)),
        BeamShape::Triangular => rho_tri(sigma, delta, beamwidth),
    }
}

/// `P_tot * rho`, with the misalignment taken as `|phi0 - phi_cl|`.
pub fn extracted_power_standard(cluster: &GaussianCluster, beam: &BeamSpec) -> Result<f64> {
    let delta = (beam.scan_angle - cluster.center_aoa).abs();
    Ok(cluster.total_power * rho(beam.shape, cluster.sigma, delta, beam.beamwidth)?)
}

/// Power captured from a fitted Gaussian.
///
/// Rectangular beams use the closed form in `(u, v)` directly:
/// `u v sqrt(pi) / 2 * (erf((bw + 2 delta) / 2v) + erf((bw - 2 delta) / 2v))`.
pub fn extracted_power_fitted(cluster: &FittedGaussianCluster, beam: &BeamSpec) -> Result<f64> {
    let delta = (beam.scan_angle - cluster.x).abs();
    match beam.shape {
        BeamShape::Rectangular => {
            let bw = beam.beamwidth;
            let two_v = 2.0 * cluster.v;
            let frac = 0.5 * erf_span(2.0 * delta / two_v, bw / two_v);
            Ok(cluster.u * cluster.v * PI.sqrt() * frac)
        }
        BeamShape::Triangular => extracted_power_standard(&cluster.to_standard(), beam),
    }
}

/// Result of a discrete-profile extraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteExtraction {
    pub power: f64,
    /// Diffuse rays that entered the sum.
    pub rays_in_beam: usize,
    pub specular_in_beam: bool,
    /// The beam is narrower than one ray spacing, so only the specular ray
    /// can contribute.
    pub narrower_than_spacing: bool,
}

/// Power a rectangular beam extracts from a discrete profile.
///
/// `N_b = floor(bw / spacing)` consecutive rays starting at the first one
/// inside `[phi0 - bw/2, phi0 + bw/2)` are summed and scaled by `bw / N_b`.
/// The specular ray contributes only when it falls inside the beam.
pub fn extracted_power_discrete(
    profile: &ClusterProfile,
    beam: &BeamSpec,
) -> Result<DiscreteExtraction> {
    if beam.shape != BeamShape::Rectangular {
        return Err(domain("discrete extraction is defined for rectangular beams only"));
    }
    let (lo, hi) = beam.edges();
    let specular_in_beam = (profile.specular_aoa - beam.scan_angle).abs() <= 0.5 * beam.beamwidth;
    let mut power = if specular_in_beam {
        profile.specular_power
    } else {
        0.0
    };

    let n_b = if profile.ray_spacing > 0.0 {
        // Guard against 10 / (10 / 3) landing just under 3.
        let ratio = beam.beamwidth / profile.ray_spacing;
        let nearest = ratio.round();
        if (ratio - nearest).abs() <= 1e-9 * nearest.max(1.0) {
            nearest as usize
        } else {
            ratio.floor() as usize
        }
    } else {
        0
    };
    if n_b == 0 {
        return Ok(DiscreteExtraction {
            power,
            rays_in_beam: 0,
            specular_in_beam,
            narrower_than_spacing: profile.ray_count() > 0,
        });
    }

    let first = profile
        .ray_angles()
        .position(|phi| phi >= lo && phi < hi);
    let mut rays_in_beam = 0;
    if let Some(m) = first {
        let diffuse: f64 = profile
            .ray_angles()
            .zip(profile.ray_amplitudes_sq.iter())
            .skip(m)
            .take(n_b)
            .take_while(|(phi, _)| *phi < hi)
            .map(|(_, p)| {
                rays_in_beam += 1;
                *p
            })
            .sum();
        power += beam.beamwidth / n_b as f64 * diffuse;
    }
    Ok(DiscreteExtraction {
        power,
        rays_in_beam,
        specular_in_beam,
        narrower_than_spacing: false,
    })
}

/// Fit a Gaussian to the diffuse part of a profile.
///
/// Samples are the absolute ray angles and the ray power densities `a_k^2`,
/// so the fitted `u v sqrt(pi)` approximates the diffuse power.
pub fn profile_to_fitted(profile: &ClusterProfile) -> Result<FittedGaussianCluster> {
    let samples: Vec<(f64, f64)> = profile
        .ray_angles()
        .zip(profile.ray_amplitudes_sq.iter().copied())
        .collect();
    let fit = fit_gaussian(&samples)?;
    FittedGaussianCluster::new(fit.u, fit.v, fit.x)
}

//! Received-power objective and beamwidth selection.
//!
//! With a ULA steered to `phi0`, narrowing the beam raises the gain as
//! `1 / beamwidth` but captures less of the cluster. For a rectangular beam
//! `delta` away from a normal cluster the received power is
//!
//! ```text
//! P_R(bw) = 101.5 / (bw sin phi0) * P_tot * rho_rect(sigma, delta, bw)
//! ```
//!
//! and its behaviour splits into three regimes:
//!
//! * `delta <= sigma`: `P_R` keeps growing as the beam narrows; the optimum
//!   is `bw -> 0`, which no finite array reaches. Use [`percentile_plan`] for
//!   a realisable beamwidth.
//! * `sigma < delta <= sqrt(2) sigma`: a finite interior optimum.
//! * `delta > sqrt(2) sigma`: the optimum beam is wider than `2 delta`, so
//!   it covers the cluster centre.

use std::f64::consts::{PI, SQRT_2};
use std::fmt::Write as _;

use crate::antenna::{
    elements_from_beamwidth, gain_from_beamwidth, is_endfire, check_scan_angle, BeamShape,
    BeamSpec, BEAMWIDTH_CONST,
};
use crate::cluster::{rho_rect, rho_tri, Spectrum};
use crate::error::{domain, Error, Result};
use crate::numerics::{erf, find_root, Bracket};

/// Lower end of every beamwidth bracket, in degrees.
pub const MIN_BEAMWIDTH: f64 = 1e-6;
/// The exact-percentile root is searched on `(0, PERCENTILE_BRACKET_SIGMAS * sigma]`.
pub const PERCENTILE_BRACKET_SIGMAS: f64 = 50.0;

const ROOT_TOL: f64 = 1e-9;
const SCAN_INTERVALS: usize = 512;
/// Triangular capture relative to rectangular in the narrow-beam limit.
const TRI_LIMIT_FACTOR: f64 = 0.75;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `delta <= sigma`: optimum at `bw -> 0`.
    ZeroOptimum,
    /// `sigma < delta <= sqrt(2) sigma`.
    Interior,
    /// `delta > sqrt(2) sigma`: optimum wider than `2 delta`.
    CoversCenter,
}

impl Regime {
    pub fn classify(sigma: f64, delta: f64) -> Regime {
        if delta <= sigma {
            Regime::ZeroOptimum
        } else if delta <= SQRT_2 * sigma {
            Regime::Interior
        } else {
            Regime::CoversCenter
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::ZeroOptimum => "zero_optimum",
            Regime::Interior => "interior",
            Regime::CoversCenter => "covers_center",
        }
    }
}

/// The three curvature checks evaluated at one beamwidth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureReport {
    /// Closed-form second-derivative inequality.
    pub analytic: bool,
    /// The same inequality with the `8 sqrt(2 pi) sigma^3` factor dropped,
    /// kept for comparison with the commonly quoted form.
    pub unnormalized: bool,
    /// Centred finite difference of `rho / bw` is negative. Authoritative.
    pub finite_difference: bool,
    pub finite_difference_value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    /// `0` in the zero-optimum regime.
    pub beamwidth_opt: f64,
    /// Maximum received power; the `bw -> 0` limit in the zero-optimum regime.
    pub p_max: f64,
    /// `None` when the optimum needs an unbounded array.
    pub n_elements: Option<u64>,
    pub regime: Regime,
    pub second_derivative_ok: bool,
    pub curvature: Option<CurvatureReport>,
    /// No sign change of the first-order condition was found and the
    /// optimum was taken from a grid scan instead.
    pub grid_fallback: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PercentileResult {
    pub eta: f64,
    pub beamwidth_exact: f64,
    pub beamwidth_approx: f64,
    /// The closed-form approximation is inside its validity region.
    pub approx_in_support: bool,
    /// Elements needed for `beamwidth_exact` (unrounded).
    pub n_elements: u64,
    /// `eta * p_max_theoretical`.
    pub p_eta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxBeamwidth {
    pub beamwidth: f64,
    pub in_support: bool,
}

fn check_sigma_delta(sigma: f64, delta: f64) -> Result<()> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(domain(format!("sigma must be positive, got {sigma}")));
    }
    if !(delta >= 0.0) || !delta.is_finite() {
        return Err(domain(format!("misalignment must be >= 0, got {delta}")));
    }
    Ok(())
}

fn check_eta(eta: f64) -> Result<()> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(domain(format!(
            "eta must lie in (0, 1), got {eta} (eta = 1 needs a zero beamwidth)"
        )));
    }
    Ok(())
}

fn capture(shape: BeamShape, sigma: f64, delta: f64, beamwidth: f64) -> Result<f64> {
    match shape {
        BeamShape::Rectangular => Ok(rho_rect(sigma, delta, beamwidth)),
        BeamShape::Triangular => rho_tri(sigma, delta, beamwidth),
    }
}

/// Array gain times extracted power.
pub fn received_power<S: Spectrum>(cluster: &S, beam: &BeamSpec) -> Result<f64> {
    let gain = gain_from_beamwidth(beam.beamwidth, beam.scan_angle)?;
    Ok(gain * cluster.extracted_power(beam)?)
}

/// Sign of the slope of `P_R` in the beamwidth (broadside gain law):
///
/// `bw (e1 + e2) - sigma sqrt(2 pi) (erf(a) + erf(b))` with
/// `a, b = (bw +- 2 delta) / (2 sqrt2 sigma)` and `e1, e2 = exp(-a^2), exp(-b^2)`.
pub fn optimality_residual(beamwidth: f64, sigma: f64, delta: f64) -> f64 {
    let scale = 2.0 * SQRT_2 * sigma;
    let a = (beamwidth + 2.0 * delta) / scale;
    let b = (beamwidth - 2.0 * delta) / scale;
    beamwidth * ((-a * a).exp() + (-b * b).exp()) - sigma * (2.0 * PI).sqrt() * (erf(a) + erf(b))
}

/// `rho / bw`, the part of `P_R` that depends on the beamwidth.
fn objective(shape: BeamShape, sigma: f64, delta: f64, beamwidth: f64) -> Result<f64> {
    Ok(capture(shape, sigma, delta, beamwidth)? / beamwidth)
}

fn finite_difference_curvature(shape: BeamShape, beamwidth: f64, sigma: f64, delta: f64) -> Result<f64> {
    let h = 1e-3 * beamwidth;
    let q = |bw| objective(shape, sigma, delta, bw);
    Ok((q(beamwidth + h)? - 2.0 * q(beamwidth)? + q(beamwidth - h)?) / (h * h))
}

/// Closed-form and finite-difference second-derivative checks at `beamwidth`.
pub fn curvature_report(beamwidth: f64, sigma: f64, delta: f64) -> Result<CurvatureReport> {
    check_sigma_delta(sigma, delta)?;
    if !(beamwidth > 0.0) || !beamwidth.is_finite() {
        return Err(domain(format!("beamwidth must be positive, got {beamwidth}")));
    }
    let scale = 2.0 * SQRT_2 * sigma;
    let a = (beamwidth + 2.0 * delta) / scale;
    let b = (beamwidth - 2.0 * delta) / scale;
    let lhs = beamwidth * (beamwidth * (beamwidth + 2.0 * delta) + 8.0 * sigma * sigma) * (-a * a).exp()
        + beamwidth * (beamwidth * (beamwidth - 2.0 * delta) + 8.0 * sigma * sigma) * (-b * b).exp();
    let s = erf(a) + erf(b);
    let fd = finite_difference_curvature(BeamShape::Rectangular, beamwidth, sigma, delta)?;
    Ok(CurvatureReport {
        analytic: lhs > 8.0 * (2.0 * PI).sqrt() * sigma.powi(3) * s,
        unnormalized: lhs > s,
        finite_difference: fd < 0.0,
        finite_difference_value: fd,
    })
}

/// Whether `P_R` is locally concave at `beamwidth` (closed form).
pub fn second_derivative_test(beamwidth: f64, sigma: f64, delta: f64) -> bool {
    curvature_report(beamwidth, sigma, delta)
        .map(|r| r.analytic)
        .unwrap_or(false)
}

/// Limit of the received power as the beamwidth goes to zero.
///
/// Rectangular: `101.5 P_tot exp(-delta^2 / 2 sigma^2) / (sqrt(2 pi) sigma sin phi0)`,
/// which for a fitted cluster is `101.5 u / sin phi0` when aligned.
/// Triangular beams capture three quarters of that. Infinite at endfire.
pub fn p_max_theoretical<S: Spectrum>(cluster: &S, scan_angle: f64, shape: BeamShape) -> Result<f64> {
    check_scan_angle(scan_angle)?;
    if is_endfire(scan_angle) {
        return Ok(f64::INFINITY);
    }
    let sigma = cluster.sigma();
    let delta = (scan_angle - cluster.center_aoa()).abs();
    let density = cluster.total_power() * (-0.5 * (delta / sigma).powi(2)).exp()
        / ((2.0 * PI).sqrt() * sigma);
    let rect = BEAMWIDTH_CONST * density / scan_angle.to_radians().sin();
    Ok(match shape {
        BeamShape::Rectangular => rect,
        BeamShape::Triangular => TRI_LIMIT_FACTOR * rect,
    })
}

/// Beamwidth maximising the received power when the beam is steered to
/// `scan_angle` and the cluster centre sits `delta` away from it.
pub fn optimize_misaligned<S: Spectrum>(
    cluster: &S,
    scan_angle: f64,
    delta: f64,
    shape: BeamShape,
) -> Result<OptimizationResult> {
    let sigma = cluster.sigma();
    check_sigma_delta(sigma, delta)?;
    check_scan_angle(scan_angle)?;
    if is_endfire(scan_angle) {
        return Err(domain(
            "at endfire the received power grows without bound as the beam narrows",
        ));
    }
    let placed = cluster.recentered(scan_angle + delta);
    let regime = Regime::classify(sigma, delta);

    if regime == Regime::ZeroOptimum {
        return Ok(OptimizationResult {
            beamwidth_opt: 0.0,
            p_max: p_max_theoretical(&placed, scan_angle, shape)?,
            n_elements: None,
            regime,
            second_derivative_ok: true,
            curvature: None,
            grid_fallback: false,
        });
    }

    let hi = 8.0 * (sigma + delta);
    let (beamwidth_opt, grid_fallback) = match shape {
        BeamShape::Rectangular => match bracket_first_maximum(sigma, delta, hi) {
            Some(bracket) => (
                find_root(|bw| optimality_residual(bw, sigma, delta), bracket, ROOT_TOL)?,
                false,
            ),
            None if regime == Regime::Interior => {
                (grid_argmax(shape, sigma, delta, 10.0 * (sigma + delta), 0.01)?.0, true)
            }
            None => {
                return Err(Error::OptimizationFailed {
                    message: format!(
                        "no sign change of the first-order condition on ({MIN_BEAMWIDTH}, {hi}] \
                         for sigma={sigma}, delta={delta}"
                    ),
                    scan: residual_scan(sigma, delta, hi),
                })
            }
        },
        BeamShape::Triangular => (refine_argmax(shape, sigma, delta, hi)?, false),
    };

    let (second_derivative_ok, curvature) = match shape {
        BeamShape::Rectangular => {
            let report = curvature_report(beamwidth_opt, sigma, delta)?;
            (report.finite_difference, Some(report))
        }
        BeamShape::Triangular => (
            finite_difference_curvature(shape, beamwidth_opt, sigma, delta)? < 0.0,
            None,
        ),
    };
    let beam = BeamSpec::new(shape, beamwidth_opt, scan_angle)?;
    Ok(OptimizationResult {
        beamwidth_opt,
        p_max: received_power(&placed, &beam)?,
        n_elements: Some(elements_from_beamwidth(beamwidth_opt, scan_angle)?),
        regime,
        second_derivative_ok,
        curvature,
        grid_fallback,
    })
}

/// First positive-to-non-positive change of the residual on a uniform scan.
///
/// Right next to zero the residual is dominated by cancellation noise, so a
/// sign is only trusted once it clears a small threshold.
fn bracket_first_maximum(sigma: f64, delta: f64, hi: f64) -> Option<Bracket> {
    let threshold = 1e-12 * sigma;
    let step = (hi - MIN_BEAMWIDTH) / SCAN_INTERVALS as f64;
    let mut last_positive = None;
    for k in 0..=SCAN_INTERVALS {
        let bw = MIN_BEAMWIDTH + k as f64 * step;
        let r = optimality_residual(bw, sigma, delta);
        if r > threshold {
            last_positive = Some(bw);
        } else if r <= 0.0 {
            if let Some(lo) = last_positive {
                return Bracket::new(lo, bw).ok();
            }
        }
    }
    None
}

fn residual_scan(sigma: f64, delta: f64, hi: f64) -> String {
    let mut out = String::from("beamwidth_deg,residual\n");
    for k in 0..=32 {
        let bw = MIN_BEAMWIDTH + k as f64 * (hi - MIN_BEAMWIDTH) / 32.0;
        let _ = writeln!(out, "{bw:.6},{:.6e}", optimality_residual(bw, sigma, delta));
    }
    out
}

/// Argmax of `rho / bw` over a uniform grid starting at `step`.
fn grid_argmax(shape: BeamShape, sigma: f64, delta: f64, hi: f64, step: f64) -> Result<(f64, f64)> {
    let n = (hi / step).floor() as usize;
    let mut best = (step, f64::NEG_INFINITY);
    for k in 1..=n {
        let bw = k as f64 * step;
        let q = objective(shape, sigma, delta, bw)?;
        if q > best.1 {
            best = (bw, q);
        }
    }
    Ok(best)
}

/// Coarse grid then golden-section search around the best cell.
fn refine_argmax(shape: BeamShape, sigma: f64, delta: f64, hi: f64) -> Result<f64> {
    let step = hi / SCAN_INTERVALS as f64;
    let (coarse, _) = grid_argmax(shape, sigma, delta, hi, step)?;
    let (mut a, mut b) = ((coarse - step).max(MIN_BEAMWIDTH), coarse + step);
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let q = |bw| objective(shape, sigma, delta, bw);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut qc, mut qd) = (q(c)?, q(d)?);
    while b - a > ROOT_TOL {
        if qc > qd {
            b = d;
            d = c;
            qd = qc;
            c = b - inv_phi * (b - a);
            qc = q(c)?;
        } else {
            a = c;
            c = d;
            qc = qd;
            d = a + inv_phi * (b - a);
            qd = q(d)?;
        }
    }
    Ok(0.5 * (a + b))
}

/// Beamwidth at which a rectangular beam reaches `eta` of the narrow-beam
/// limit, from `bw / erf(bw / (2 sqrt2 sigma)) = sqrt(2 pi) sigma / eta`.
pub fn percentile_beamwidth_exact<S: Spectrum>(cluster: &S, eta: f64) -> Result<f64> {
    check_eta(eta)?;
    let sigma = cluster.sigma();
    let target = (2.0 * PI).sqrt() * sigma / eta;
    let scale = 2.0 * SQRT_2 * sigma;
    // erf(x) / bw falls monotonically from its bw -> 0 limit, so compare it
    // against the target in that form to keep the small-bw end well scaled.
    let f = |bw: f64| erf(bw / scale) * target - bw;
    let bracket = Bracket::new(1e-9 * sigma, PERCENTILE_BRACKET_SIGMAS * sigma)?;
    find_root(f, bracket, 1e-12 * sigma)
}

/// Closed-form approximation `sqrt(24) sigma sqrt(1 - eta)`, valid while the
/// result stays below `sqrt(8) sigma` (that is, `eta >= 2/3`).
pub fn percentile_beamwidth_approx<S: Spectrum>(cluster: &S, eta: f64) -> Result<ApproxBeamwidth> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(domain(format!("eta must lie in (0, 1], got {eta}")));
    }
    let sigma = cluster.sigma();
    let beamwidth = 24f64.sqrt() * sigma * (1.0 - eta).sqrt();
    Ok(ApproxBeamwidth {
        beamwidth,
        in_support: beamwidth <= 8f64.sqrt() * sigma * (1.0 + 1e-12),
    })
}

/// Exact and approximate `eta`-percentile beamwidths with the matching
/// array size and power, for an aligned rectangular beam.
pub fn percentile_plan<S: Spectrum>(cluster: &S, scan_angle: f64, eta: f64) -> Result<PercentileResult> {
    check_eta(eta)?;
    check_scan_angle(scan_angle)?;
    let aligned = cluster.recentered(scan_angle);
    let beamwidth_exact = percentile_beamwidth_exact(&aligned, eta)?;
    let approx = percentile_beamwidth_approx(&aligned, eta)?;
    Ok(PercentileResult {
        eta,
        beamwidth_exact,
        beamwidth_approx: approx.beamwidth,
        approx_in_support: approx.in_support,
        n_elements: elements_from_beamwidth(beamwidth_exact, scan_angle)?,
        p_eta: eta * p_max_theoretical(&aligned, scan_angle, BeamShape::Rectangular)?,
    })
}

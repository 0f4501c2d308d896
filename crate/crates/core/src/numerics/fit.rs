//! Gaussian peak fitting by weighted least squares on log-power.
//!
//! Taking logs turns `g(phi) = u * exp(-(phi - x)^2 / v^2)` into a parabola
//! `ln u - (phi - x)^2 / v^2`, so the fit reduces to a 3x3 linear solve.
//! Each residual is weighted by the squared sample power, which undoes the
//! noise amplification the logarithm applies to weak samples (Guo's
//! weighting).

use crate::error::{domain, Error, Result};

/// Parameters of `g(phi) = u * exp(-(phi - x)^2 / v^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    /// Peak value (linear power).
    pub u: f64,
    /// Width in degrees; the matching standard deviation is `v / sqrt(2)`.
    pub v: f64,
    /// Centre angle in degrees.
    pub x: f64,
    /// Residual sum of squares in the linear power domain.
    pub rss: f64,
}

impl FitResult {
    pub fn eval(&self, phi: f64) -> f64 {
        let d = (phi - self.x) / self.v;
        self.u * (-d * d).exp()
    }
}

/// A width beyond this multiple of the sampled span is treated as a flat
/// (zero-curvature) profile.
const MAX_WIDTH_OVER_SPAN: f64 = 1e3;

/// Fit a Gaussian to `(angle_deg, power_linear)` samples.
///
/// Samples with non-positive power carry no log-domain information and are
/// skipped by the parabola fit, though they still enter `rss`.
pub fn fit_gaussian(samples: &[(f64, f64)]) -> Result<FitResult> {
    if samples
        .iter()
        .any(|&(phi, p)| !phi.is_finite() || !p.is_finite())
    {
        return Err(domain("fit_gaussian: non-finite sample"));
    }
    let positive: Vec<(f64, f64)> = samples.iter().copied().filter(|&(_, p)| p > 0.0).collect();
    if positive.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "need at least 3 samples with positive power, got {}",
            positive.len()
        )));
    }

    let (lo, hi) = positive
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(phi, _)| {
            (lo.min(phi), hi.max(phi))
        });
    let span = hi - lo;
    if !(span > 0.0) {
        return Err(Error::InsufficientData("all sample angles coincide".into()));
    }
    let center = 0.5 * (lo + hi);
    let peak = positive.iter().fold(0.0_f64, |m, &(_, p)| m.max(p));

    // Normal equations in the scaled abscissa s = (phi - center) / span.
    let mut ata = [[0.0_f64; 3]; 3];
    let mut atb = [0.0_f64; 3];
    for &(phi, p) in &positive {
        let s = (phi - center) / span;
        let w = (p / peak) * (p / peak);
        let basis = [1.0, s, s * s];
        let y = p.ln();
        for i in 0..3 {
            atb[i] += w * basis[i] * y;
            for j in 0..3 {
                ata[i][j] += w * basis[i] * basis[j];
            }
        }
    }
    let [a, b, c] = solve3(ata, atb)
        .ok_or_else(|| Error::FitFailed("singular normal equations (repeated angles?)".into()))?;

    // Back to degrees.
    let b = b / span;
    let c = c / (span * span);
    if !(c < 0.0) {
        return Err(Error::FitFailed(format!(
            "log-power parabola is not concave (curvature {c:e})"
        )));
    }
    let v = (-1.0 / c).sqrt();
    if !(v.is_finite() && v <= MAX_WIDTH_OVER_SPAN * span) {
        return Err(Error::FitFailed(format!(
            "fitted width {v:e} deg is degenerate for a {span} deg span (zero curvature)"
        )));
    }
    let x = center - b / (2.0 * c);
    let u = (a - b * b / (4.0 * c)).exp();
    if !(u.is_finite() && u > 0.0 && x.is_finite()) {
        return Err(Error::FitFailed(format!("non-finite parameters u={u}, x={x}")));
    }

    let mut fit = FitResult { u, v, x, rss: 0.0 };
    fit.rss = samples
        .iter()
        .map(|&(phi, p)| {
            let r = p - fit.eval(phi);
            r * r
        })
        .sum();
    Ok(fit)
}

/// Gaussian elimination with partial pivoting on a 3x3 system.
fn solve3(mut m: [[f64; 3]; 3], mut r: [f64; 3]) -> Option<[f64; 3]> {
    let scale = m.iter().flatten().fold(0.0_f64, |s, v| s.max(v.abs()));
    if scale == 0.0 {
        return None;
    }
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[pivot][col].abs() <= 1e-14 * scale {
            return None;
        }
        m.swap(col, pivot);
        r.swap(col, pivot);
        for row in col + 1..3 {
            let k = m[row][col] / m[col][col];
            for j in col..3 {
                m[row][j] -= k * m[col][j];
            }
            r[row] -= k * r[col];
        }
    }
    let mut x = [0.0; 3];
    for i in (0..3).rev() {
        let s: f64 = (i + 1..3).map(|j| m[i][j] * x[j]).sum();
        x[i] = (r[i] - s) / m[i][i];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(u: f64, v: f64, x: f64, angles: impl Iterator<Item = f64>) -> Vec<(f64, f64)> {
        let g = FitResult { u, v, x, rss: 0.0 };
        angles.map(|a| (a, g.eval(a))).collect()
    }

    #[test]
    fn exact_recovery() {
        let s = sample(2.0, 3.0, 1.0, (-5..=7).map(f64::from));
        let fit = fit_gaussian(&s).unwrap();
        assert!((fit.u - 2.0).abs() < 1e-9);
        assert!((fit.v - 3.0).abs() < 1e-9);
        assert!((fit.x - 1.0).abs() < 1e-9);
        assert!(fit.rss < 1e-20);
    }

    #[test]
    fn small_powers_and_offset_angles() {
        let s = sample(6.43e-5, 9.23, 53.0, (0..75).map(|k| 16.9 + k as f64 * 72.2 / 74.0));
        let fit = fit_gaussian(&s).unwrap();
        assert!(((fit.u - 6.43e-5) / 6.43e-5).abs() < 1e-9);
        assert!((fit.v - 9.23).abs() < 1e-9);
        assert!((fit.x - 53.0).abs() < 1e-9);
    }

    #[test]
    fn constant_samples_fail() {
        let s: Vec<_> = (0..10).map(|k| (k as f64, 0.3)).collect();
        assert!(matches!(fit_gaussian(&s), Err(Error::FitFailed(_))));
    }

    #[test]
    fn convex_samples_fail() {
        let s: Vec<_> = (-3..=3).map(|k| (k as f64, (0.1 * (k * k) as f64).exp())).collect();
        assert!(matches!(fit_gaussian(&s), Err(Error::FitFailed(_))));
    }

    #[test]
    fn too_few_positive_samples() {
        let s = [(0.0, 1.0), (1.0, 0.5), (2.0, 0.0), (3.0, -1.0)];
        assert!(matches!(fit_gaussian(&s), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn zeros_enter_rss_only() {
        let mut s = sample(1.0, 2.0, 0.0, (-4..=4).map(f64::from));
        s.push((30.0, 0.0));
        let fit = fit_gaussian(&s).unwrap();
        assert!((fit.v - 2.0).abs() < 1e-9);
        assert!(fit.rss < 1e-20);
    }
}

//! Error function and helpers.
//!
//! `erf`/`erfc` are backed by `libm` (a port of the musl implementation,
//! sub-ulp accuracy). The rest of the crate mostly needs differences of the
//! form `erf(b) - erf(a)`, which lose all their significant digits when the
//! two arguments are close or both deep in a tail; [`erf_diff`] handles those
//! cases directly.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{domain, Result};

const TWO_OVER_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// Standard error function, `erf(z) = 2/sqrt(pi) * int_0^z exp(-t^2) dt`.
#[inline]
pub fn erf(z: f64) -> f64 {
    libm::erf(z)
}

/// Complementary error function, `1 - erf(z)` without cancellation for large `z`.
#[inline]
pub fn erfc(z: f64) -> f64 {
    libm::erfc(z)
}

/// Four-term Maclaurin expansion of `erf`, valid for `|z| <= 1`.
///
/// `2/sqrt(pi) * (z - z^3/3 + z^5/10 - z^7/42)`
pub fn erf_taylor(z: f64) -> Result<f64> {
    if !(z.abs() <= 1.0) {
        return Err(domain(format!("erf_taylor: |z| = {} exceeds 1", z.abs())));
    }
    let z2 = z * z;
    let poly = z * (1.0 - z2 * (1.0 / 3.0 - z2 * (1.0 / 10.0 - z2 / 42.0)));
    Ok(TWO_OVER_SQRT_PI * poly)
}

/// `erf(b) - erf(a)` evaluated to near full relative precision.
///
/// Narrow intervals are integrated directly with Gauss-Legendre; wide
/// intervals on one side of the origin go through `erfc`.
pub fn erf_diff(b: f64, a: f64) -> f64 {
    if a > b {
        return -erf_diff(a, b);
    }
    if b - a <= 1.0 {
        gl_span(0.5 * (b + a), 0.5 * (b - a))
    } else if a >= 0.0 {
        erfc(a) - erfc(b)
    } else if b <= 0.0 {
        erfc(-b) - erfc(-a)
    } else {
        erf(b) - erf(a)
    }
}

/// `erf(mid + half) - erf(mid - half)` for `half >= 0`.
///
/// Prefer this over [`erf_diff`] when the half-width is known directly:
/// recovering a narrow width from two rounded endpoints costs its relative
/// precision.
pub fn erf_span(mid: f64, half: f64) -> f64 {
    if half <= 0.5 {
        gl_span(mid, half)
    } else {
        erf_diff(mid + half, mid - half)
    }
}

fn gl_span(mid: f64, half: f64) -> f64 {
    let s: f64 = gauss_legendre()
        .iter()
        .map(|&(x, w)| {
            let t = mid + half * x;
            w * (-t * t).exp()
        })
        .sum();
    TWO_OVER_SQRT_PI * half * s
}

const GL_ORDER: usize = 20;

/// Nodes and weights of the 20-point Gauss-Legendre rule on [-1, 1].
fn gauss_legendre() -> &'static [(f64, f64); GL_ORDER] {
    static RULE: OnceLock<[(f64, f64); GL_ORDER]> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let mut rule = [(0.0, 0.0); GL_ORDER];
        for i in 0..n.div_ceil(2) {
            // Chebyshev-like initial guess, refined by Newton on P_n.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            rule[i] = (x, w);
            rule[n - 1 - i] = (-x, w);
        }
        rule
    })
}

/// Legendre polynomial `P_n(x)` and its derivative.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values computed with mpmath at 40 digits.
    const TABLE: &[(f64, f64, f64)] = &[
        (0.1, 0.112_462_916_018_284_89, 0.887_537_083_981_715_1),
        (0.5, 0.520_499_877_813_046_5, 0.479_500_122_186_953_5),
        (1.0, 0.842_700_792_949_714_9, 0.157_299_207_050_285_13),
        (1.5, 0.966_105_146_475_310_7, 0.033_894_853_524_689_27),
        (2.0, 0.995_322_265_018_952_7, 0.004_677_734_981_047_266),
        (2.5, 0.999_593_047_982_555, 4.069_520_174_449_589_4e-4),
        (3.0, 0.999_977_909_503_001_4, 2.209_049_699_858_544e-5),
        (4.0, 0.999_999_984_582_742_1, 1.541_725_790_028_002e-8),
        (5.5, 0.999_999_999_999_992_6, 7.357_847_917_974_398e-15),
    ];

    #[test]
    fn erf_matches_reference_table() {
        for &(z, e, c) in TABLE {
            assert!((erf(z) - e).abs() <= 1e-15, "erf({z})");
            assert!((erf(-z) + e).abs() <= 1e-15, "erf(-{z})");
            assert!(((erfc(z) - c) / c).abs() <= 1e-13, "erfc({z})");
        }
    }

    #[test]
    fn spec_examples() {
        assert_eq!(erf(0.0), 0.0);
        assert!((erf(std::f64::consts::FRAC_1_SQRT_2) - 0.682_689_492_137_085_9).abs() < 1e-12);
        assert_eq!(erf(-1.0), -erf(1.0));
    }

    #[test]
    fn taylor_support_and_accuracy() {
        assert_eq!(erf_taylor(0.0).unwrap(), 0.0);
        assert!((erf_taylor(0.5).unwrap() - erf(0.5)).abs() < 1e-4);
        assert!((erf_taylor(1.0).unwrap() - erf(1.0)).abs() < 5e-3);
        assert!(erf_taylor(-1.0).is_ok());
        assert!(erf_taylor(1.0 + 1e-12).is_err());
        assert!(erf_taylor(f64::NAN).is_err());
    }

    #[test]
    fn gauss_legendre_weights_sum_to_two() {
        let s: f64 = gauss_legendre().iter().map(|&(_, w)| w).sum();
        assert!((s - 2.0).abs() < 1e-14);
        // Exact for polynomials of degree 2n - 1.
        let m: f64 = gauss_legendre().iter().map(|&(x, w)| w * x.powi(38)).sum();
        assert!((m - 2.0 / 39.0).abs() < 1e-14);
    }

    #[test]
    fn erf_diff_keeps_relative_precision() {
        // (b, a, erf(b) - erf(a)) from mpmath.
        let cases = [
            (3.0001, 3.0, 1.392_112_839_211_258_1e-8),
            (1.2, 1.1999, 2.673_764_300_005_310_6e-5),
            (6.0, 5.0, 1.537_438_274_691_322_4e-12),
        ];
        for (b, a, want) in cases {
            let got = erf_diff(b, a);
            assert!(((got - want) / want).abs() < 1e-9, "erf_diff({b}, {a}) = {got:e}");
        }
        assert!((erf_diff(2.0, -1.0) - (erf(2.0) + erf(1.0))).abs() < 1e-15);
        assert!((erf_diff(-4.0, -6.0) - erf_diff(6.0, 4.0)).abs() < 1e-22);
        assert_eq!(erf_diff(1.0, 2.0), -erf_diff(2.0, 1.0));
    }

    #[test]
    fn erf_span_from_half_width() {
        let got = erf_span(0.7, 1e-4);
        assert!((got / 1.382_549_720_728_907_2e-4 - 1.0).abs() < 1e-14);
        let got = erf_span(2.0, 0.75);
        assert!((got / 0.076_999_249_821_422_13 - 1.0).abs() < 1e-14);
        assert_eq!(erf_span(0.3, f64::INFINITY), 2.0);
        assert_eq!(erf_span(0.3, 0.0), 0.0);
    }
}

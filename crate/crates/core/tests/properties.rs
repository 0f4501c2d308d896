use std::f64::consts::{PI, SQRT_2};

use mmwave_beamwidth::antenna::{
    beamwidth_from_elements, elements_from_beamwidth, gain_from_beamwidth, window_value, BeamShape,
    BeamSpec, UlaGeometry,
};
use mmwave_beamwidth::cli::{fmt_g, Range};
use mmwave_beamwidth::cluster::{
    extracted_power_fitted, extracted_power_standard, rho_rect, rho_tri, FittedGaussianCluster,
    GaussianCluster, Spectrum,
};
use mmwave_beamwidth::numerics::{erf, erf_diff, erfc, fit_gaussian, FitResult};
use mmwave_beamwidth::optimizer::{
    optimize_misaligned, p_max_theoretical, percentile_beamwidth_exact, received_power, Regime,
};
use proptest::prelude::*;

proptest! {
    #[test]
    fn erf_is_odd_and_bounded(z in -8.0f64..8.0) {
        prop_assert_eq!(erf(-z), -erf(z));
        prop_assert!(erf(z).abs() <= 1.0);
        prop_assert!((erf(z) + erfc(z) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn erf_diff_matches_plain_difference_when_well_conditioned(a in -3.0f64..3.0, w in 0.1f64..3.0) {
        let b = a + w;
        prop_assert!((erf_diff(b, a) - (erf(b) - erf(a))).abs() < 1e-14);
    }

    #[test]
    fn element_round_trip(n in 2u64..100_000, phi0 in 1.0f64..179.0) {
        let ula = UlaGeometry::new(n).unwrap();
        let bw = beamwidth_from_elements(&ula, phi0).unwrap();
        prop_assert!((gain_from_beamwidth(bw, phi0).unwrap() / n as f64 - 1.0).abs() < 1e-12);
        prop_assert_eq!(elements_from_beamwidth(bw, phi0).unwrap(), n);
    }

    #[test]
    fn endfire_round_trip(n in 2u64..10_000) {
        let ula = UlaGeometry::new(n).unwrap();
        let bw = beamwidth_from_elements(&ula, 180.0).unwrap();
        prop_assert_eq!(elements_from_beamwidth(bw, 0.0).unwrap(), n);
    }

    #[test]
    fn rho_rect_is_a_fraction(sigma in 0.5f64..20.0, delta in -50.0f64..50.0, bw in 0.0f64..200.0) {
        let r = rho_rect(sigma, delta, bw);
        prop_assert!((0.0..=1.0).contains(&r));
        prop_assert_eq!(r, rho_rect(sigma, -delta, bw));
    }

    #[test]
    fn rho_rect_grows_with_beamwidth(sigma in 0.5f64..20.0, delta in 0.0f64..30.0, bw in 0.01f64..100.0, extra in 0.01f64..10.0) {
        prop_assert!(rho_rect(sigma, delta, bw + extra) >= rho_rect(sigma, delta, bw));
    }

    #[test]
    fn rho_rect_shrinks_with_misalignment(sigma in 0.5f64..20.0, delta in 0.0f64..30.0, bw in 0.01f64..100.0, extra in 0.01f64..10.0) {
        prop_assert!(rho_rect(sigma, delta + extra, bw) <= rho_rect(sigma, delta, bw) * (1.0 + 1e-14));
    }

    #[test]
    fn triangular_between_half_and_full_rect(sigma in 0.5f64..20.0, delta in 0.0f64..30.0, bw in 0.01f64..100.0) {
        let r = rho_rect(sigma, delta, bw);
        let t = rho_tri(sigma, delta, bw).unwrap();
        prop_assert!(t <= r * (1.0 + 1e-12));
        prop_assert!(t >= 0.5 * r * (1.0 - 1e-12));
    }

    #[test]
    fn windows_bounded(bw in 0.1f64..90.0, offset in -100.0f64..100.0) {
        let rect = BeamSpec::rectangular(bw, 90.0).unwrap();
        let tri = BeamSpec::triangular(bw, 90.0).unwrap();
        let (r, t) = (window_value(&rect, 90.0 + offset), window_value(&tri, 90.0 + offset));
        prop_assert!(t <= r);
        prop_assert!(r == 0.0 || t >= 0.5);
    }

    #[test]
    fn fitted_and_standard_agree(u in 1e-7f64..1.0, v in 0.5f64..30.0, dx in -60.0f64..60.0, bw in 0.01f64..120.0, tri in any::<bool>()) {
        let shape = if tri { BeamShape::Triangular } else { BeamShape::Rectangular };
        let f = FittedGaussianCluster::new(u, v, 90.0 + dx).unwrap();
        let s = GaussianCluster::new(u * v * PI.sqrt(), v / SQRT_2, 90.0 + dx).unwrap();
        let beam = BeamSpec::new(shape, bw, 90.0).unwrap();
        let a = extracted_power_fitted(&f, &beam).unwrap();
        let b = extracted_power_standard(&s, &beam).unwrap();
        prop_assume!(b > 1e-250);
        prop_assert!(((a - b) / b).abs() < 1e-10);
    }

    #[test]
    fn p_max_follows_cosecant(sigma in 0.5f64..20.0, phi0 in 1.0f64..179.0) {
        let c = GaussianCluster::new(1.0, sigma, phi0).unwrap();
        let at = p_max_theoretical(&c, phi0, BeamShape::Rectangular).unwrap();
        let broadside = p_max_theoretical(&c.recentered(90.0), 90.0, BeamShape::Rectangular).unwrap();
        prop_assert!((at * phi0.to_radians().sin() / broadside - 1.0).abs() < 1e-12);
    }

    #[test]
    fn received_power_never_beats_the_limit(sigma in 1.0f64..15.0, bw in 0.01f64..60.0, phi0 in 5.0f64..175.0) {
        let c = GaussianCluster::new(1.0, sigma, phi0).unwrap();
        let lim = p_max_theoretical(&c, phi0, BeamShape::Rectangular).unwrap();
        let p = received_power(&c, &BeamSpec::rectangular(bw, phi0).unwrap()).unwrap();
        prop_assert!(p <= lim * (1.0 + 1e-12));
    }

    #[test]
    fn p_max_nonincreasing_in_misalignment(sigma in 2.0f64..10.0, d1 in 0.0f64..3.0, step in 0.05f64..1.0) {
        let c = GaussianCluster::new(1.0, sigma, 53.0).unwrap();
        let a = optimize_misaligned(&c, 53.0, d1 * sigma, BeamShape::Rectangular).unwrap();
        let b = optimize_misaligned(&c, 53.0, (d1 + step) * sigma, BeamShape::Rectangular).unwrap();
        prop_assert!(b.p_max <= a.p_max * (1.0 + 1e-9));
    }

    #[test]
    fn covers_center_is_wider_than_twice_the_error(sigma in 2.0f64..10.0, ratio in 1.45f64..4.0) {
        let c = GaussianCluster::new(1.0, sigma, 53.0).unwrap();
        let opt = optimize_misaligned(&c, 53.0, ratio * sigma, BeamShape::Rectangular).unwrap();
        prop_assert_eq!(opt.regime, Regime::CoversCenter);
        prop_assert!(opt.beamwidth_opt > 2.0 * ratio * sigma);
        prop_assert!(opt.second_derivative_ok);
    }

    #[test]
    fn percentile_beamwidth_solves_its_equation(sigma in 0.5f64..20.0, eta in 0.1f64..0.9999) {
        let c = GaussianCluster::new(1.0, sigma, 53.0).unwrap();
        let bw = percentile_beamwidth_exact(&c, eta).unwrap();
        let lhs = bw / erf(bw / (2.0 * SQRT_2 * sigma));
        prop_assert!((lhs * eta / ((2.0 * PI).sqrt() * sigma) - 1.0).abs() < 1e-9);
        let beam = BeamSpec::rectangular(bw, 53.0).unwrap();
        let ratio = received_power(&c, &beam).unwrap() / p_max_theoretical(&c, 53.0, BeamShape::Rectangular).unwrap();
        prop_assert!((ratio - eta).abs() < 1e-9);
    }

    #[test]
    fn percentile_beamwidth_falls_with_eta(sigma in 0.5f64..20.0, eta in 0.1f64..0.99, more in 0.001f64..0.009) {
        let c = GaussianCluster::new(1.0, sigma, 53.0).unwrap();
        prop_assert!(percentile_beamwidth_exact(&c, eta + more).unwrap() < percentile_beamwidth_exact(&c, eta).unwrap());
    }

    #[test]
    fn gaussian_fit_recovers_parameters(u in 1e-8f64..1e2, v in 1.0f64..20.0, x in 20.0f64..160.0, n in 9usize..200) {
        let g = FitResult { u, v, x, rss: 0.0 };
        let span = 6.0 * v;
        let samples: Vec<(f64, f64)> = (0..n)
            .map(|k| {
                let a = x - 0.5 * span + k as f64 * span / (n - 1) as f64;
                (a, g.eval(a))
            })
            .collect();
        let fit = fit_gaussian(&samples).unwrap();
        prop_assert!((fit.u / u - 1.0).abs() < 1e-8);
        prop_assert!((fit.v / v - 1.0).abs() < 1e-8);
        prop_assert!((fit.x - x).abs() < 1e-7 * v);
    }

    #[test]
    fn g_format_keeps_six_digits(x in -1e9f64..1e9) {
        let back: f64 = fmt_g(x).parse().unwrap();
        prop_assert!((back - x).abs() <= 5e-6 * x.abs());
    }

    #[test]
    fn ranges_are_half_open(lo in -100.0f64..100.0, len in 0.0f64..50.0, step in 0.01f64..5.0) {
        let r = Range { lo, hi: lo + len, step };
        let v: Vec<f64> = r.values().collect();
        prop_assert!(v.iter().all(|&x| x >= lo && x < lo + len));
        prop_assert!(v.windows(2).all(|w| w[1] > w[0]));
        let expected = (len / step).ceil() as usize;
        prop_assert!(v.len().abs_diff(expected) <= 1);
    }
}

#[test]
fn aligned_optimum_is_shape_invariant() {
    let c = GaussianCluster::conference_room(1.0, 53.0).unwrap();
    let r = optimize_misaligned(&c, 53.0, 0.0, BeamShape::Rectangular).unwrap();
    let t = optimize_misaligned(&c, 53.0, 0.0, BeamShape::Triangular).unwrap();
    assert_eq!(r.beamwidth_opt, t.beamwidth_opt);
}

#[test]
fn misaligned_triangular_optimum_is_wider() {
    // With the beam off the cluster the triangular roll-off favours a wider
    // beam than the rectangular window.
    let c = GaussianCluster::conference_room(1.0, 53.0).unwrap();
    let r = optimize_misaligned(&c, 53.0, 10.0, BeamShape::Rectangular).unwrap();
    let t = optimize_misaligned(&c, 53.0, 10.0, BeamShape::Triangular).unwrap();
    assert!(t.beamwidth_opt > r.beamwidth_opt + 1.0);
}

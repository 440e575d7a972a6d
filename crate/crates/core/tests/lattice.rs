#![allow(clippy::needless_range_loop)]

use dualrlpn::lattice::*;
use dualrlpn::math::{ln_gamma, ratio_to_f64};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `J_ν(x)` for integer `ν` and rational `x/2 = num/den`, summed exactly.
fn bessel_oracle(nu: u32, half_num: i64, half_den: i64, terms: u32) -> f64 {
    let half = BigRational::new(BigInt::from(half_num), BigInt::from(half_den));
    let q = &half * &half;
    let mut lead = BigRational::one();
    for i in 1..=nu {
        lead = lead * &half / BigInt::from(i);
    }
    let mut term = lead.clone();
    let mut sum = BigRational::zero();
    for m in 0..terms {
        sum += &term;
        let m1 = BigInt::from(m + 1);
        let mn = BigInt::from(m + 1 + nu);
        term = -term * &q / (m1 * mn);
    }
    ratio_to_f64(&sum)
}

fn j(nu: f64, x: f64) -> f64 {
    let (s, l) = log_bessel_j(nu, x).unwrap();
    s * l.exp()
}

#[test]
fn bessel_matches_exact_series() {
    let cases = [(29, 15, 1), (29, 10, 1), (0, 5, 1), (1, 7, 2), (5, 6, 1), (39, 20, 1), (29, 40, 1)];
    for (nu, num, den) in cases {
        let x = 2.0 * num as f64 / den as f64;
        let want = bessel_oracle(nu, num, den, 200);
        let got = j(nu as f64, x);
        assert!(((got - want) / want).abs() < 1e-8, "J_{nu}({x}): {got} vs {want}");
    }
}

#[test]
fn bessel_tiny_arguments_stay_finite() {
    let (s, l) = log_bessel_j(29.0, 1e-8).unwrap();
    assert_eq!(s, 1.0);
    let want = 29.0 * (0.5e-8f64).ln() - ln_gamma(30.0);
    assert!((l - want).abs() < 1e-9);
}

#[test]
fn bessel_rejects_bad_input() {
    assert!(log_bessel_j(-1.0, 1.0).is_err());
    assert!(log_bessel_j(1.0, -1.0).is_err());
    assert!(log_bessel_j(1.0, f64::NAN).is_err());
}

#[test]
fn floor_sign_follows_bessel_zeros() {
    let p = LatticeScoreParams::fig3_left();
    let nu = p.n as f64 / 2.0 - 1.0;
    let mut flips = 0;
    let mut prev = 1.0;
    for i in 1..4000 {
        let jv = i as f64 * 0.5;
        let g = floor_value(&p, jv).unwrap().0;
        let b = log_bessel_j(nu, 2.0 * std::f64::consts::PI * p.w * jv).unwrap().0;
        assert_eq!(g, b, "sign mismatch at j = {jv}");
        if g != prev {
            flips += 1;
        }
        prev = g;
    }
    assert!(flips >= 5);
}

#[test]
fn floor_onset_is_finite_positive() {
    for p in [LatticeScoreParams::fig3_left(), LatticeScoreParams::fig3_right()] {
        let (jgh, x) = floor_onset(&p).unwrap();
        assert!(jgh > 0.0 && x.is_finite() && x > 0.0);
        let back = floor_preimage(&p, x).unwrap().unwrap();
        assert!((back / jgh - 1.0).abs() < 1e-9);
    }
}

#[test]
fn stirling_floor_tracks_exact_floor() {
    let p = LatticeScoreParams::fig3_left();
    let n = p.n as f64;
    // Γ(n/2) against √(nπ)/e·(n/2e)^{n/2-1}.
    let stirling = 0.5 * (n * std::f64::consts::PI).ln() - 1.0 + (n / 2.0 - 1.0) * (n / (2.0 * std::f64::consts::E)).ln();
    let ratio = (stirling - ln_gamma(n / 2.0)).exp();
    for jv in [20.0, 80.0, 150.0] {
        let a = floor_value_f64(&p, jv).unwrap();
        let b = floor_value_exact(&p, jv).unwrap();
        assert!((a / b - ratio).abs() < 1e-9 * ratio);
    }
    assert!((ratio - 1.0).abs() < 0.05);
}

#[test]
fn band_width_cancels() {
    let p = LatticeScoreParams::fig3_left();
    for jv in [30.0, 120.0] {
        let exact = floor_value_exact(&p, jv).unwrap();
        let mut prev_err = f64::INFINITY;
        for eps in [1e-3, 1e-4, 1e-5] {
            let err = (band_floor_value(&p, jv, eps).unwrap() - exact).abs();
            assert!(err <= prev_err);
            prev_err = err;
        }
        assert!(prev_err < 2e-3 * exact.abs().max(1.0));
    }
}

#[test]
fn gaussian_heuristic_vs_exact_ball() {
    for n in [20usize, 60, 80, 200] {
        let ln_v = 100.0;
        let x = 3.0;
        let ln_gh = gaussian_heuristic_expect(n, ln_v, x).unwrap();
        let ln_exact = ln_unit_ball(n) + n as f64 * x.ln() - ln_v;
        // The Stirling gap is the Γ correction, about 1/(6n).
        let gap = ln_gh - ln_exact;
        assert!(gap.abs() < 1.0 / (3.0 * n as f64), "n = {n}: gap {gap}");
        let r = gaussian_heuristic_radius(n, ln_v);
        assert!(gaussian_heuristic_expect(n, ln_v, r).unwrap().abs() < 1e-9);
    }
}

#[test]
fn gamma_survival_against_point_process() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let theta = 1.0;
    let k = 2u32;
    let alpha = 3.0;
    let trials = 200_000u64;
    let width = 40.0;
    let mut hits = 0u64;
    for _ in 0..trials {
        let count = rand_distr::Distribution::sample(&rand_distr::Poisson::new(theta * width).unwrap(), &mut rng) as usize;
        let mut pts: Vec<f64> = (0..count).map(|_| rand::Rng::random::<f64>(&mut rng) * width).collect();
        pts.sort_by(f64::total_cmp);
        let kth = pts.get(k as usize).copied().unwrap_or(f64::INFINITY);
        if kth >= alpha {
            hits += 1;
        }
    }
    let want = gamma_survival(k, theta, alpha).unwrap();
    let got = hits as f64 / trials as f64;
    let sigma = (want * (1.0 - want) / trials as f64).sqrt();
    assert!((got - want).abs() < 4.0 * sigma, "{got} vs {want}");
}

#[test]
fn floor_model_lengths_increase_with_index() {
    let p = LatticeScoreParams::fig3_left();
    let m0 = FloorModel::new(&p, 0).unwrap();
    let m3 = FloorModel::new(&p, 3).unwrap();
    let (jgh, _) = floor_onset(&p).unwrap();
    let a = jgh.powi(p.n as i32);
    assert!(m3.survival(a).unwrap() > m0.survival(a).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mean = |m: &FloorModel, rng: &mut ChaCha8Rng| (0..20_000).map(|_| m.sample_length(rng)).sum::<f64>() / 20_000.0;
    assert!(mean(&m3, &mut rng) > mean(&m0, &mut rng));
}

fn sd_grid(p: &LatticeScoreParams, steps: usize, stride: f64) -> Vec<f64> {
    let sd = (p.n_vectors / 2.0).sqrt();
    (0..steps).map(|i| i as f64 * stride * sd).collect()
}

#[test]
fn zero_variance_gives_crude_model() {
    let p = LatticeScoreParams::fig3_left();
    let ts = sd_grid(&p, 20, 1.0)[1..].to_vec();
    let opts = RefinedOptions {
        fall_variance: Some(0.0),
        ..Default::default()
    };
    let c = survival_refined(&p, &ts, &opts).unwrap();
    for i in 0..ts.len() {
        assert_eq!(c.refined.counts[i], c.floor.counts[i]);
        let rel = (c.floor.counts[i] / c.crude.counts[i] - 1.0).abs();
        assert!(rel < 0.02, "t = {}: floor {} crude {}", ts[i], c.floor.counts[i], c.crude.counts[i]);
    }
}

#[test]
fn refined_dominates_components() {
    let p = LatticeScoreParams::fig3_left();
    let ts = sd_grid(&p, 30, 0.5);
    let c = survival_refined(&p, &ts, &RefinedOptions::default()).unwrap();
    for curve in c.all() {
        assert!(curve.is_non_increasing(), "{:?}", curve.label);
    }
    let sd = (p.n_vectors / 2.0).sqrt();
    for i in 0..ts.len() {
        assert!(c.refined.counts[i] >= c.independence.counts[i] * (1.0 - 1e-3), "t = {}", ts[i]);
        // Symmetric noise halves the bulk, so the floor is only dominated in the tail.
        if ts[i] >= 2.0 * sd {
            assert!(c.refined.counts[i] >= c.floor.counts[i], "t = {}", ts[i]);
        }
        let mc = &c.refined_mc;
        if mc.counts[i] > 1e-3 {
            assert!(c.refined.counts[i] >= mc.ci_low[i] * 0.9 && c.refined.counts[i] <= mc.ci_high[i] * 1.1);
        }
    }
}

#[test]
fn many_vectors_suppress_the_floor() {
    // A sparser lattice pushes j₀ out by 100x, where G is negligible against the waterfall.
    let mut p = LatticeScoreParams::fig3_left();
    p.volume = VolumeSpec::Explicit {
        ln_volume: p.ln_volume() + p.n as f64 * 100f64.ln(),
    };
    let ts = sd_grid(&p, 8, 1.0);
    let c = survival_refined(&p, &ts, &RefinedOptions::default()).unwrap();
    for i in 0..ts.len() {
        let rel = (c.refined.counts[i] / c.independence.counts[i] - 1.0).abs();
        assert!(rel < 0.05, "t = {}: {} vs {}", ts[i], c.refined.counts[i], c.independence.counts[i]);
    }
}

#[test]
fn refined_is_deterministic() {
    let p = LatticeScoreParams::fig3_left();
    let ts = sd_grid(&p, 5, 1.0);
    let a = survival_refined(&p, &ts, &RefinedOptions::default()).unwrap();
    let b = survival_refined(&p, &ts, &RefinedOptions::default()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn survival_rejects_bad_options() {
    let p = LatticeScoreParams::fig3_left();
    let low = RefinedOptions {
        mc_trials: 10,
        ..Default::default()
    };
    assert!(survival_refined(&p, &[0.0], &low).is_err());
    assert!(survival_refined(&p, &[1.0, 0.0], &RefinedOptions::default()).is_err());
    let mut odd = p;
    odd.n = 61;
    assert!(odd.validate().is_err());
    assert!(LatticeScoreParams::preset("nope").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gamma_survival_is_a_survival_function(k in 0u32..20, theta in 0.01f64..10.0, a in 0.0f64..50.0, b in 0.0f64..50.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let s_lo = gamma_survival(k, theta, lo).unwrap();
        let s_hi = gamma_survival(k, theta, hi).unwrap();
        prop_assert!((0.0..=1.0).contains(&s_lo));
        prop_assert!(s_hi <= s_lo + 1e-14);
        prop_assert!(gamma_survival(k + 1, theta, hi).unwrap() >= s_hi - 1e-14);
    }

    #[test]
    fn floor_scales_only_with_n_vectors(scale in 0.1f64..100.0, jv in 1.0f64..300.0) {
        let p = LatticeScoreParams::fig3_left();
        let mut q = p;
        q.n_vectors *= scale;
        q.q = 7681;
        q.log2_samples = 10.0;
        let a = floor_value(&p, jv).unwrap();
        let b = floor_value(&q, jv).unwrap();
        prop_assert_eq!(a.0, b.0);
        prop_assert!((b.1 - a.1 - scale.ln()).abs() < 1e-9);
    }

    #[test]
    fn bessel_recurrence_holds(nu in 1.0f64..50.0, x in 0.5f64..120.0) {
        let lhs = j(nu - 1.0, x) + j(nu + 1.0, x);
        let rhs = 2.0 * nu / x * j(nu, x);
        let scale = j(nu - 1.0, x).abs().max(j(nu + 1.0, x).abs()).max(1e-300);
        prop_assert!((lhs - rhs).abs() <= 1e-8 * scale, "nu {} x {}: {} vs {}", nu, x, lhs, rhs);
    }
}

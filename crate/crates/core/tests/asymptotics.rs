use dualrlpn::asymptotics::*;
use dualrlpn::krawtchouk::kappa_tilde;
use dualrlpn::math::{h2, h2_inv};
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn xh(len: f64, x: f64) -> f64 {
    if len <= 0.0 {
        0.0
    } else {
        len * h2((x / len).clamp(0.0, 1.0))
    }
}

fn xk(len: f64, point: f64, degree: f64) -> f64 {
    if len <= 0.0 {
        0.0
    } else {
        len * kappa_tilde(point / len, degree / len)
    }
}

/// Re-derives every constraint at a reported point, without the optimizer's residual vector.
fn assert_feasible(rate: f64, tau: f64, p: &AsymParams) {
    let (s, m) = (p.sigma, 1.0 - p.sigma);
    assert!(p.sigma >= -TOL && p.sigma <= rate + TOL);
    assert!(p.r_aux >= -TOL && p.r_aux <= p.sigma + TOL);
    assert!(p.omega >= -TOL && p.omega <= m + TOL);
    assert!(p.mu >= -TOL && p.mu <= tau + TOL && tau - p.mu <= s + TOL);
    assert!(p.tau_aux >= -TOL);
    let cap = xh(m, p.omega) + xh(s, p.tau_aux);
    assert!(cap <= rate + TOL, "capacity {cap} > {rate}");
    assert!(xh(s, p.tau_aux) <= s - p.r_aux + TOL);
    let eps = xk(s, tau - p.mu, p.tau_aux) - xh(s, p.tau_aux) + xk(m, p.mu, p.omega) - xh(m, p.omega);
    let nu_samples = cap - (rate - p.r_aux);
    assert!(eps <= TOL, "bias exponent {eps} is a gain");
    assert!(-2.0 * eps <= nu_samples + TOL, "samples {nu_samples} < {}", -2.0 * eps);
}

fn quick() -> OptimizerOptions {
    OptimizerOptions {
        restarts: 8,
        ..Default::default()
    }
}

#[test]
fn reported_optima_are_feasible() {
    for rate in [0.1, 0.3, 0.5] {
        let pt = double_rlpn_exponent(rate, None, &quick()).unwrap();
        assert!(pt.feasible);
        let p = pt.argmin.unwrap();
        assert_feasible(rate, pt.tau, &p);
        let ev = double_rlpn_objective(rate, pt.tau, &p);
        assert_eq!(ev.alpha, pt.alpha);
        assert!(ev.eps_bias <= TOL);
    }
}

#[test]
fn never_above_a_supplied_feasible_point() {
    let rate = 0.25;
    let tau = h2_inv(1.0 - rate);
    let coarse = double_rlpn_exponent(
        rate,
        None,
        &OptimizerOptions {
            restarts: 2,
            max_iter: 40,
            seed: 5,
            ..Default::default()
        },
    )
    .unwrap();
    let user = coarse.argmin.unwrap();
    let user_alpha = double_rlpn_objective(rate, tau, &user);
    assert!(user_alpha.feasible());
    let mut opts = quick();
    opts.starts.push(user);
    let pt = double_rlpn_exponent(rate, None, &opts).unwrap();
    assert!(pt.alpha <= user_alpha.alpha);
}

#[test]
fn ordering_against_classical_baselines() {
    for rate in [0.1, 0.3] {
        let tau = h2_inv(1.0 - rate);
        let d = dumer_exponent(rate, tau).unwrap().alpha;
        let p = prange_at(rate, tau);
        assert!(d <= p + 1e-12);
        assert!(double_rlpn_exponent(rate, None, &quick()).unwrap().alpha < d);
    }
}

#[test]
fn exponent_curve_rows_follow_the_grid() {
    let rates = [0.2, 0.4];
    let algs = [Algorithm::Prange, Algorithm::Dumer, Algorithm::BjmmEq];
    let rows = exponent_curve(&algs, &rates, &quick()).unwrap();
    assert_eq!(rows.len(), 6);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.algorithm, algs[i / 2]);
        assert_eq!(row.rate, rates[i % 2]);
        assert!(row.alpha.is_finite() && row.alpha >= 0.0);
    }
    assert!(exponent_curve(&algs, &[1.2], &quick()).is_err());
    assert_eq!("bjmm-eq".parse::<Algorithm>().unwrap(), Algorithm::BjmmEq);
    assert!("stern".parse::<Algorithm>().is_err());
}

#[test]
fn prange_closed_form() {
    for i in 1..20 {
        let r = i as f64 / 20.0;
        let tau = h2_inv(1.0 - r);
        let want = h2(tau) - (1.0 - r) * h2(tau / (1.0 - r));
        assert!((prange_exponent(r).unwrap() - want).abs() < 1e-12);
    }
}

/// Dense scan over `(λ, ω′)` of Dumer's cost, written out independently of the library.
fn dumer_scan(rate: f64, tau: f64) -> f64 {
    let steps = 600;
    let mut best = f64::INFINITY;
    for a in 0..=steps {
        let lambda = a as f64 / steps as f64 * 0.15 * (1.0 - rate);
        let rl = rate + lambda;
        for b in 0..=steps {
            let omega = b as f64 / steps as f64 * 0.04;
            if omega > tau || tau - omega > 1.0 - rl {
                continue;
            }
            let pi = h2(tau) - xh(1.0 - rl, tau - omega) - xh(rl, omega);
            let list = xh(rl, omega);
            best = best.min(pi + (list / 2.0).max(list - lambda));
        }
    }
    best
}

#[test]
fn dumer_matches_a_dense_scan() {
    for rate in [0.1, 0.2, 0.3, 0.45, 0.6] {
        let tau = h2_inv(1.0 - rate);
        let got = dumer_exponent(rate, tau).unwrap().alpha;
        let scan = dumer_scan(rate, tau);
        assert!(got <= scan + 1e-9 && got >= scan - 2e-4, "R = {rate}: {got} vs scan {scan}");
        assert!(got < prange_at(rate, tau) - 1e-3, "R = {rate}: no gain over Prange");
    }
}

#[test]
fn restarts_agree_at_rate_one_fifth() {
    let alphas: Vec<f64> = (0..3)
        .map(|seed| {
            let opts = OptimizerOptions {
                restarts: 20,
                seed,
                ..Default::default()
            };
            double_rlpn_exponent(0.2, None, &opts).unwrap().alpha
        })
        .collect();
    let lo = alphas.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = alphas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    assert!(hi - lo <= 1e-4, "{alphas:?}");
}

#[test]
fn warm_started_curve_has_no_jumps() {
    let rates: Vec<f64> = (20..=30).map(|i| i as f64 / 100.0).collect();
    let opts = OptimizerOptions {
        restarts: 2,
        ..Default::default()
    };
    let rows = exponent_curve(&[Algorithm::DoubleRlpn], &rates, &opts).unwrap();
    for pair in rows.windows(2) {
        assert!(pair[1].feasible);
        assert!((pair[1].alpha - pair[0].alpha).abs() <= 0.01, "{} -> {}", pair[0].alpha, pair[1].alpha);
    }
}

#[test]
fn degenerate_point_is_finite() {
    // All of the secret on P and no parity-check weight on N.
    let rate = 0.3;
    let tau = h2_inv(1.0 - rate);
    let r_aux = 0.1;
    let p = AsymParams {
        sigma: rate,
        r_aux,
        tau_aux: rate * h2_inv(1.0 - r_aux / rate),
        omega: 0.0,
        mu: tau,
        n_aux: 1,
    };
    let ev = double_rlpn_objective(rate, tau, &p);
    assert!(ev.feasible() && ev.alpha.is_finite() && ev.alpha > 0.0);
}

#[test]
fn boundary_values() {
    assert!(prange_exponent(1e-3).unwrap() < 2e-3);
    assert!(prange_exponent(1.0 - 1e-3).unwrap() < 2e-3);
    assert_eq!(dumer_exponent(0.3, 0.0).unwrap().alpha, 0.0);
    assert_eq!(bjmm_eq_exponent(0.3, 0.0).unwrap().gamma, 0.0);
    let one = exponent_curve(&[Algorithm::Prange], &[0.5], &quick()).unwrap();
    assert_eq!(one.len(), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dumer_is_below_prange(rate in 0.02f64..0.98) {
        let tau = h2_inv(1.0 - rate);
        let d = dumer_exponent(rate, tau).unwrap();
        prop_assert!(d.alpha <= prange_at(rate, tau) + 1e-12);
        prop_assert!(d.alpha >= 0.0);
    }

    #[test]
    fn objective_terms_are_finite_on_the_box(rate in 0.05f64..0.95, a in 0.0f64..1.0, b in 0.0f64..1.0, c in 0.0f64..1.0, d in 0.0f64..1.0) {
        let tau = h2_inv(1.0 - rate);
        let sigma = a * rate;
        let r_aux = b * sigma;
        let tau_aux = if sigma > 0.0 { sigma * h2_inv(1.0 - r_aux / sigma) * 0.999 } else { 0.0 };
        let lo = (tau - sigma).max(0.0);
        let hi = tau.min(1.0 - sigma);
        let p = AsymParams { sigma, r_aux, tau_aux, omega: c * (rate - sigma), mu: lo + d * (hi - lo).max(0.0), n_aux: 1 };
        let ev = double_rlpn_objective(rate, tau, &p);
        prop_assert!(ev.pi >= -1e-12);
        prop_assert!(ev.eps_bias <= 1e-12);
        if ev.feasible() {
            prop_assert!(ev.alpha >= ev.pi);
        }
    }
}

//! Asymptotic complexity exponents (base 2, per code bit): Prange, Dumer's
//! ISD returning all solutions, BJMM-style parity-check enumeration, and the
//! double-RLPN decoder optimized over its parameters.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::krawtchouk::kappa_tilde;
use crate::math::{h2, h2_inv};

/// Residual below which a constraint counts as satisfied.
pub const FEASIBILITY_TOL: f64 = 1e-9;
const PENALTY_MARGIN: f64 = 1e-6;
const PENALTY_WEIGHT: f64 = 100.0;

/// `x·h(y/x)`, zero when `x` vanishes.
fn xh(x: f64, y: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * h2((y / x).clamp(0.0, 1.0))
    }
}

/// `h⁻¹` rounded down so that `h(h⁻¹(y)) ≤ y`.
fn h2_inv_lower(y: f64) -> f64 {
    let mut x = h2_inv(y);
    while x > 0.0 && h2(x) > y {
        x = (x - 1e-13).max(0.0);
    }
    x
}

/// Minimizes `f` over the unit cube by Nelder–Mead with clamped vertices.
fn nelder_mead(f: &dyn Fn(&[f64]) -> f64, x0: &[f64], step: f64, max_iter: usize, tol: f64) -> (Vec<f64>, f64) {
    let d = x0.len();
    let clamp = |x: &mut Vec<f64>| x.iter_mut().for_each(|v| *v = v.clamp(0.0, 1.0));
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(d + 1);
    let mut start = x0.to_vec();
    clamp(&mut start);
    simplex.push((start.clone(), f(&start)));
    for i in 0..d {
        let mut v = start.clone();
        v[i] += if v[i] + step <= 1.0 { step } else { -step };
        clamp(&mut v);
        let fv = f(&v);
        simplex.push((v, fv));
    }
    let cmp = |a: &(Vec<f64>, f64), b: &(Vec<f64>, f64)| a.1.total_cmp(&b.1);
    for _ in 0..max_iter {
        simplex.sort_by(cmp);
        let spread = simplex[d].1 - simplex[0].1;
        let size = simplex[1..]
            .iter()
            .map(|(v, _)| v.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if spread.abs() < tol && size < 1e-9 {
            break;
        }
        let mut centroid = vec![0.0; d];
        for (v, _) in &simplex[..d] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / d as f64;
            }
        }
        let along = |t: f64| {
            let mut p: Vec<f64> = centroid.iter().zip(&simplex[d].0).map(|(c, w)| c + t * (w - c)).collect();
            clamp(&mut p);
            p
        };
        let xr = along(-1.0);
        let fr = f(&xr);
        if fr < simplex[0].1 {
            let xe = along(-2.0);
            let fe = f(&xe);
            simplex[d] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[d - 1].1 {
            simplex[d] = (xr, fr);
        } else {
            let (xc, fc) = if fr < simplex[d].1 {
                let x = along(-0.5);
                let fx = f(&x);
                (x, fx)
            } else {
                let x = along(0.5);
                let fx = f(&x);
                (x, fx)
            };
            if fc < simplex[d].1.min(fr) {
                simplex[d] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for (v, fv) in simplex.iter_mut().skip(1) {
                    for (x, b) in v.iter_mut().zip(&best) {
                        *x = b + 0.5 * (*x - b);
                    }
                    *fv = f(v);
                }
            }
        }
    }
    simplex.sort_by(cmp);
    simplex.swap_remove(0)
}

/// Grid scan of the unit square followed by a Nelder–Mead polish.
fn minimize_square(f: &dyn Fn(&[f64]) -> f64, grid: usize) -> (Vec<f64>, f64) {
    // Optima of the ISD exponents sit close to the lower edges, so the grid is squared toward 0.
    let node = |i: usize| (i as f64 / grid as f64).powi(2);
    let mut best = (vec![0.0, 0.0], f64::INFINITY);
    for i in 0..=grid {
        for j in 0..=grid {
            let x = [node(i), node(j)];
            let v = f(&x);
            if v < best.1 {
                best = (x.to_vec(), v);
            }
        }
    }
    if !best.1.is_finite() {
        return best;
    }
    let polished = nelder_mead(f, &best.0, 0.5 / grid as f64, 400, 1e-13);
    if polished.1 < best.1 {
        polished
    } else {
        best
    }
}

/// `h(τ) - (1-R)·h(τ/(1-R))` at `τ = h⁻¹(1-R)`.
pub fn prange_exponent(rate: f64) -> Result<f64> {
    if !(rate > 0.0 && rate < 1.0) {
        return Err(invalid(format!("rate must lie in (0, 1), got {rate}")));
    }
    let tau = h2_inv(1.0 - rate);
    Ok(prange_at(rate, tau))
}

pub fn prange_at(rate: f64, tau: f64) -> f64 {
    h2(tau) - xh(1.0 - rate, tau)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DumerPoint {
    pub alpha: f64,
    pub beta: f64,
    pub nu_sol: f64,
    pub lambda: f64,
    pub omega: f64,
}

fn dumer_terms(rate: f64, tau: f64, lambda: f64, omega: f64) -> (f64, f64) {
    let rl = rate + lambda;
    let pi = h2(tau) - xh(1.0 - rl, tau - omega) - xh(rl, omega);
    let list = xh(rl, omega);
    (pi + (list / 2.0).max(list - lambda), list / 2.0)
}

fn dumer_box(rate: f64, tau: f64, x: &[f64]) -> (f64, f64) {
    let lambda = x[0] * (1.0 - rate);
    let lo = (rate + lambda + tau - 1.0).max(0.0);
    let hi = tau.min(rate + lambda);
    (lambda, lo + x[1] * (hi - lo).max(0.0))
}

/// Dumer's exponent minimized over `(λ, ω′)`; `+∞` when the box is empty.
pub fn dumer_exponent(rate: f64, tau: f64) -> Result<DumerPoint> {
    if !(0.0..=1.0).contains(&rate) || !(0.0..=1.0).contains(&tau) {
        return Err(invalid(format!("need R, tau in [0, 1], got ({rate}, {tau})")));
    }
    Ok(dumer_unchecked(rate, tau))
}

fn dumer_unchecked(rate: f64, tau: f64) -> DumerPoint {
    let nu_sol = (h2(tau) - (1.0 - rate)).max(0.0);
    if tau == 0.0 {
        return DumerPoint {
            alpha: 0.0,
            beta: 0.0,
            nu_sol,
            lambda: 0.0,
            omega: 0.0,
        };
    }
    let f = |x: &[f64]| {
        let (lambda, omega) = dumer_box(rate, tau, x);
        let lo = (rate + lambda + tau - 1.0).max(0.0);
        if lo > tau.min(rate + lambda) + 1e-15 {
            return f64::INFINITY;
        }
        dumer_terms(rate, tau, lambda, omega).0
    };
    let (x, alpha) = minimize_square(&f, 32);
    let (lambda, omega) = dumer_box(rate, tau, &x);
    DumerPoint {
        alpha,
        beta: dumer_terms(rate, tau, lambda, omega).1,
        nu_sol,
        lambda,
        omega,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BjmmPoint {
    pub gamma: f64,
    pub pi1: f64,
    pub pi2: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    /// Exponent of the number of parity-checks produced.
    pub nu3: f64,
}

/// `γ` at `(π₁, π₂)` with `λ₁, λ₂` eliminated, final weight `ω` and `λ = R′`;
/// `None` outside the region.
fn bjmm_gamma(rate: f64, omega: f64, pi1: f64, pi2: f64) -> Option<(f64, f64, f64)> {
    let lambda = rate;
    let l1 = pi2 + xh(1.0 - pi2, pi1 - pi2 / 2.0);
    let l2 = omega + xh(1.0 - omega, pi2 - omega / 2.0);
    if l1 > l2 + 1e-15 || l2 > lambda + 1e-15 || pi2 > l1 + 1e-15 {
        return None;
    }
    let nu0 = h2(pi1) / 2.0;
    let nu1 = h2(pi1) - l1;
    let nu2 = h2(pi2) - l2;
    let g1 = nu0.max(2.0 * nu0 - l1);
    let g2 = nu1.max(2.0 * nu1 - (l2 - l1));
    let g3 = nu2.max(2.0 * nu2 - (lambda - l2));
    Some((g1.max(g2).max(g3), l1, l2))
}

/// Parity-checks of relative weight `ω` in a code of rate `R′`: the target
/// weight plays the role of `π` and the rate the role of `λ`. `+∞` if `ω > R′`.
pub fn bjmm_eq_exponent(rate: f64, omega: f64) -> Result<BjmmPoint> {
    if !(0.0..=1.0).contains(&omega) || !(0.0..=1.0).contains(&rate) {
        return Err(invalid(format!("need R', omega in [0, 1], got ({rate}, {omega})")));
    }
    Ok(bjmm_unchecked(rate, omega))
}

fn bjmm_unchecked(rate: f64, omega: f64) -> BjmmPoint {
    let nu3 = h2(omega) - rate;
    if omega == 0.0 {
        return BjmmPoint {
            gamma: 0.0,
            pi1: 0.0,
            pi2: 0.0,
            lambda1: 0.0,
            lambda2: 0.0,
            nu3,
        };
    }
    let split = |x: &[f64]| {
        let pi2 = omega / 2.0 + x[1] * omega / 2.0;
        let pi1 = pi2 / 2.0 + x[0] * pi2 / 2.0;
        (pi1, pi2)
    };
    let f = |x: &[f64]| {
        let (pi1, pi2) = split(x);
        bjmm_gamma(rate, omega, pi1, pi2).map_or(f64::INFINITY, |g| g.0)
    };
    let (x, gamma) = minimize_square(&f, 32);
    let (pi1, pi2) = split(&x);
    let (lambda1, lambda2) = bjmm_gamma(rate, omega, pi1, pi2).map_or((f64::NAN, f64::NAN), |g| (g.1, g.2));
    BjmmPoint {
        gamma,
        pi1,
        pi2,
        lambda1,
        lambda2,
        nu3,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymParams {
    pub sigma: f64,
    pub r_aux: f64,
    pub tau_aux: f64,
    pub omega: f64,
    pub mu: f64,
    pub n_aux: usize,
}

/// Every term of the double-RLPN exponent at one parameter point.
#[derive(Clone, Debug, PartialEq)]
pub struct DoubleRlpnEvaluation {
    pub alpha: f64,
    pub pi: f64,
    pub alpha_eq: f64,
    pub nu_samples: f64,
    pub nu_candidates: f64,
    pub alpha_isd: f64,
    pub eps_bias: f64,
    /// Every constraint written as `g ≤ 0`.
    pub residuals: Vec<f64>,
}

impl DoubleRlpnEvaluation {
    pub fn feasible(&self) -> bool {
        self.alpha.is_finite() && self.residuals.iter().all(|&g| g <= FEASIBILITY_TOL)
    }

    fn penalized(&self) -> f64 {
        if !self.alpha.is_finite() {
            return 1e3;
        }
        let hinge: f64 = self.residuals[..2].iter().map(|&g| (g + PENALTY_MARGIN).max(0.0)).sum::<f64>()
            + self.residuals[2..].iter().map(|&g| g.max(0.0)).sum::<f64>();
        self.alpha + PENALTY_WEIGHT * hinge
    }
}

/// `log₂|K_deg(pt)|/len` for relative point and degree, on a block of relative length `len`.
fn block_kappa(len: f64, point: f64, degree: f64) -> f64 {
    if len <= 0.0 {
        0.0
    } else {
        len * kappa_tilde(point / len, degree / len)
    }
}

/// Largest entropy of a wrong candidate whose Krawtchouk product is at least the secret's.
fn nu_candidates(rate: f64, tau: f64, p: &AsymParams) -> f64 {
    let (sigma, m) = (p.sigma, 1.0 - p.sigma);
    let secret = block_kappa(sigma, tau - p.mu, p.tau_aux) + block_kappa(m, p.mu, p.omega);
    let best_eta = |zeta: f64| -> Option<f64> {
        let need = secret - block_kappa(sigma, zeta, p.tau_aux);
        if m <= 0.0 {
            return (need <= 1e-15).then_some(0.0);
        }
        let k = |eta: f64| block_kappa(m, eta, p.omega);
        if k(0.0) < need - 1e-15 {
            return None;
        }
        if k(m / 2.0) >= need {
            return Some(m / 2.0);
        }
        let (mut lo, mut hi) = (0.0, m / 2.0);
        for _ in 0..45 {
            let mid = 0.5 * (lo + hi);
            if k(mid) >= need {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(lo)
    };
    let value = |zeta: f64| best_eta(zeta).map_or(f64::NEG_INFINITY, |eta| xh(sigma, zeta) + xh(m, eta));
    let steps = 48;
    let half = sigma / 2.0;
    let mut best = (0.0, value(0.0));
    for i in 1..=steps {
        let z = half * i as f64 / steps as f64;
        let v = value(z);
        if v > best.1 {
            best = (z, v);
        }
    }
    // Golden-section refinement around the best grid cell.
    let h = half / steps as f64;
    let (mut a, mut b) = ((best.0 - h).max(0.0), (best.0 + h).min(half));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut c, mut d) = (b - g * (b - a), a + g * (b - a));
    let (mut vc, mut vd) = (value(c), value(d));
    for _ in 0..30 {
        if vc >= vd {
            b = d;
            d = c;
            vd = vc;
            c = b - g * (b - a);
            vc = value(c);
        } else {
            a = c;
            c = d;
            vc = vd;
            d = a + g * (b - a);
            vd = value(d);
        }
        best.1 = best.1.max(vc).max(vd);
    }
    (best.1 - (1.0 - rate)).max(0.0)
}

/// The double-RLPN exponent and its constraint residuals at a given point.
pub fn double_rlpn_objective(rate: f64, tau: f64, p: &AsymParams) -> DoubleRlpnEvaluation {
    let (sigma, m) = (p.sigma, 1.0 - p.sigma);
    let n_aux = p.n_aux as f64;
    let pi = h2(tau) - xh(sigma, tau - p.mu) - xh(m, p.mu);
    let r_short = if m > 0.0 { (rate - sigma) / m } else { 0.0 };
    let alpha_eq = if m > 0.0 {
        m * bjmm_unchecked(r_short.clamp(0.0, 1.0), (p.omega / m).clamp(0.0, 1.0)).gamma
    } else {
        0.0
    };
    let nu_samples = xh(m, p.omega) + xh(sigma, p.tau_aux) - (rate - p.r_aux);
    let eps_bias = block_kappa(sigma, tau - p.mu, p.tau_aux) - xh(sigma, p.tau_aux) + block_kappa(m, p.mu, p.omega)
        - xh(m, p.omega);
    let nu_isd = (xh(sigma, tau - p.mu) - n_aux * p.r_aux).max(0.0);
    let isd_p = if sigma > 0.0 {
        sigma * dumer_unchecked((1.0 - n_aux * p.r_aux / sigma).clamp(0.0, 1.0), ((tau - p.mu) / sigma).clamp(0.0, 1.0)).alpha
    } else {
        0.0
    };
    let isd_n = if m > 0.0 {
        m * dumer_unchecked(r_short.clamp(0.0, 1.0), (p.mu / m).clamp(0.0, 1.0)).alpha
    } else {
        0.0
    };
    let alpha_isd = isd_p.max(nu_isd + isd_n);
    let nu_cand = nu_candidates(rate, tau, p);
    let alpha = pi + alpha_eq.max(nu_samples).max(p.r_aux).max(nu_cand * n_aux + alpha_isd);
    let residuals = vec![
        -2.0 * eps_bias - nu_samples,
        xh(m, p.omega) + xh(sigma, p.tau_aux) - rate,
        xh(sigma, p.tau_aux) - (sigma - p.r_aux),
        sigma - rate,
        (tau - sigma) - p.mu,
        p.mu - tau,
        p.omega - m,
        p.r_aux - sigma,
        -sigma,
        -p.r_aux,
        -p.tau_aux,
        -p.omega,
        -p.mu,
    ];
    DoubleRlpnEvaluation {
        alpha,
        pi,
        alpha_eq,
        nu_samples,
        nu_candidates: nu_cand,
        alpha_isd,
        eps_bias,
        residuals,
    }
}

/// Maps the unit cube onto the parameter box, with `τ_aux` at the auxiliary GV distance.
fn from_unit(rate: f64, tau: f64, n_aux: usize, x: &[f64]) -> AsymParams {
    let sigma = x[0] * rate;
    let r_aux = x[1] * sigma;
    let omega = x[2] * (rate - sigma);
    let lo = (tau - sigma).max(0.0);
    let hi = tau.min(1.0 - sigma);
    let mu = lo + x[3] * (hi - lo).max(0.0);
    let tau_aux = if sigma > 0.0 {
        sigma * h2_inv_lower(1.0 - r_aux / sigma)
    } else {
        0.0
    };
    AsymParams {
        sigma,
        r_aux,
        tau_aux,
        omega,
        mu,
        n_aux,
    }
}

fn to_unit(rate: f64, tau: f64, p: &AsymParams) -> Vec<f64> {
    let safe = |a: f64, b: f64| if b > 0.0 { (a / b).clamp(0.0, 1.0) } else { 0.0 };
    let lo = (tau - p.sigma).max(0.0);
    let hi = tau.min(1.0 - p.sigma);
    vec![
        safe(p.sigma, rate),
        safe(p.r_aux, p.sigma),
        safe(p.omega, rate - p.sigma),
        safe(p.mu - lo, hi - lo),
    ]
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerOptions {
    pub restarts: usize,
    pub seed: u64,
    pub n_aux: usize,
    pub max_iter: usize,
    /// Extra starting points, tried before the random restarts.
    pub starts: Vec<AsymParams>,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        OptimizerOptions {
            restarts: 64,
            seed: 0,
            n_aux: 1,
            max_iter: 600,
            starts: Vec::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    Prange,
    Dumer,
    BjmmEq,
    DoubleRlpn,
}

impl Algorithm {
    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::Prange => "prange",
            Algorithm::Dumer => "dumer",
            Algorithm::BjmmEq => "bjmm-eq",
            Algorithm::DoubleRlpn => "double-rlpn",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "prange" => Ok(Algorithm::Prange),
            "dumer" => Ok(Algorithm::Dumer),
            "bjmm-eq" => Ok(Algorithm::BjmmEq),
            "double-rlpn" => Ok(Algorithm::DoubleRlpn),
            other => Err(invalid(format!("unknown algorithm {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExponentPoint {
    pub algorithm: Algorithm,
    pub rate: f64,
    pub tau: f64,
    pub alpha: f64,
    pub feasible: bool,
    pub argmin: Option<AsymParams>,
    pub constraint_residuals: Vec<f64>,
}

/// Minimizes the double-RLPN exponent at `(R, τ)`; `τ` defaults to `h⁻¹(1-R)`.
pub fn double_rlpn_exponent(rate: f64, tau: Option<f64>, opts: &OptimizerOptions) -> Result<ExponentPoint> {
    if !(rate > 0.0 && rate < 1.0) {
        return Err(invalid(format!("rate must lie in (0, 1), got {rate}")));
    }
    if opts.n_aux == 0 {
        return Err(invalid("N_aux must be at least 1"));
    }
    let tau = tau.unwrap_or_else(|| h2_inv(1.0 - rate));
    if !(0.0..=0.5).contains(&tau) {
        return Err(invalid(format!("tau must lie in [0, 1/2], got {tau}")));
    }
    let n_aux = opts.n_aux;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut starts: Vec<Vec<f64>> = opts.starts.iter().map(|p| to_unit(rate, tau, p)).collect();
    for _ in 0..opts.restarts {
        starts.push((0..4).map(|_| rng.random::<f64>()).collect());
    }
    let penalized = |x: &[f64]| double_rlpn_objective(rate, tau, &from_unit(rate, tau, n_aux, x)).penalized();
    let runs: Vec<(Vec<f64>, f64)> = starts
        .par_iter()
        .map(|x0| {
            let (x, _) = nelder_mead(&penalized, x0, 0.1, opts.max_iter, 1e-12);
            nelder_mead(&penalized, &x, 0.01, opts.max_iter, 1e-13)
        })
        .collect();
    let mut best: Option<(AsymParams, DoubleRlpnEvaluation)> = None;
    let mut best_any: Option<(AsymParams, DoubleRlpnEvaluation)> = None;
    let mut consider = |p: AsymParams| {
        let ev = double_rlpn_objective(rate, tau, &p);
        if ev.feasible() && best.as_ref().is_none_or(|b| ev.alpha < b.1.alpha) {
            best = Some((p, ev.clone()));
        }
        if best_any.as_ref().is_none_or(|b| ev.penalized() < b.1.penalized()) {
            best_any = Some((p, ev));
        }
    };
    for p in &opts.starts {
        consider(*p);
    }
    for x in starts.iter().chain(runs.iter().map(|r| &r.0)) {
        consider(from_unit(rate, tau, n_aux, x));
    }
    let (p, ev, feasible) = match (best, best_any) {
        (Some((p, ev)), _) => (p, ev, true),
        (None, Some((p, ev))) => (p, ev, false),
        (None, None) => return Err(Error::Internal("optimizer produced no point".into())),
    };
    Ok(ExponentPoint {
        algorithm: Algorithm::DoubleRlpn,
        rate,
        tau,
        alpha: ev.alpha,
        feasible,
        argmin: Some(p),
        constraint_residuals: ev.residuals,
    })
}

/// One point per algorithm and rate, decoding at `τ = h⁻¹(1-R)`. The
/// `bjmm-eq` rows report parity-checks at the dual's GV weight `ω = h⁻¹(R)`.
pub fn exponent_curve(algorithms: &[Algorithm], rates: &[f64], opts: &OptimizerOptions) -> Result<Vec<ExponentPoint>> {
    if let Some(r) = rates.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
        return Err(invalid(format!("rate grid must lie in (0, 1), got {r}")));
    }
    let mut out = Vec::new();
    for &alg in algorithms {
        let mut warm: Option<AsymParams> = None;
        for &rate in rates {
            let tau = h2_inv(1.0 - rate);
            let point = match alg {
                Algorithm::Prange => simple(alg, rate, tau, prange_at(rate, tau)),
                Algorithm::Dumer => simple(alg, rate, tau, dumer_unchecked(rate, tau).alpha),
                Algorithm::BjmmEq => {
                    let omega = h2_inv(rate);
                    simple(alg, rate, omega, bjmm_unchecked(rate, omega).gamma)
                }
                Algorithm::DoubleRlpn => {
                    let mut o = opts.clone();
                    if let Some(w) = warm {
                        o.starts.push(w);
                    }
                    let p = double_rlpn_exponent(rate, Some(tau), &o)?;
                    warm = p.argmin;
                    p
                }
            };
            out.push(point);
        }
    }
    Ok(out)
}

fn simple(algorithm: Algorithm, rate: f64, tau: f64, alpha: f64) -> ExponentPoint {
    ExponentPoint {
        algorithm,
        rate,
        tau,
        alpha,
        feasible: alpha.is_finite(),
        argmin: None,
        constraint_residuals: Vec::new(),
    }
}

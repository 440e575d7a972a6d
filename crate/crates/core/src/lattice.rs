//! Lattice-side score model: the Bessel floor term `G(j)`, Gamma-distributed
//! shortest lengths, the Gaussian heuristic, and the waterfall + floor curve.

// `!(x > 0.0)` is meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decoder::trial_rng;
use crate::duality::{tally, CurveLabel, SurvivalCurve};
use crate::error::{invalid, Result};
use crate::math::{ln_gamma, normal_sf, wilson_interval, Z95};

const LN_PI: f64 = 1.144_729_885_849_400_2;

/// `(sign, ln|J_ν(x)|)`. Ascending series while its terms shrink from the start, otherwise
/// Miller's backward recurrence normalized by Neumann's sum
/// `Σ_k (μ+2k)·Γ(μ+k)/k!·J_{μ+2k}(x) = (x/2)^μ`.
pub fn log_bessel_j(nu: f64, x: f64) -> Result<(f64, f64)> {
    if !(nu >= 0.0) || !(x >= 0.0) || !nu.is_finite() || !x.is_finite() {
        return Err(invalid(format!("J_nu(x) needs finite nu, x >= 0, got ({nu}, {x})")));
    }
    if x == 0.0 {
        return Ok(if nu == 0.0 { (1.0, 0.0) } else { (0.0, f64::NEG_INFINITY) });
    }
    if x <= 2.0 || x * x <= 4.0 * (nu + 1.0) {
        Ok(bessel_series(nu, x))
    } else {
        Ok(bessel_miller(nu, x))
    }
}

fn bessel_series(nu: f64, x: f64) -> (f64, f64) {
    let lead = nu * (x / 2.0).ln() - ln_gamma(nu + 1.0);
    let q = (x / 2.0) * (x / 2.0);
    let (mut sum, mut term) = (1.0f64, 1.0f64);
    let mut m = 1.0;
    loop {
        term *= -q / (m * (m + nu));
        sum += term;
        if term.abs() < 1e-17 * sum.abs() && m > x / 2.0 {
            break;
        }
        m += 1.0;
    }
    (sum.signum(), lead + sum.abs().ln())
}

fn bessel_miller(nu: f64, x: f64) -> (f64, f64) {
    let base = nu.floor();
    let mu = nu - base;
    let target = base as usize;
    let top = nu.max(x);
    let mut start = top as usize + 30 + (50.0 * top).sqrt() as usize;
    start += start % 2;
    let coeff = |k: usize| -> f64 {
        if k == 0 {
            ln_gamma(mu + 1.0).exp()
        } else {
            let i = (k / 2) as f64;
            ((mu + 2.0 * i).ln() + ln_gamma(mu + i) - ln_gamma(i + 1.0)).exp()
        }
    };
    // j_next = J_{k+1}, j_cur = J_k, both unnormalized.
    let (mut j_next, mut j_cur) = (0.0f64, 1e-30f64);
    let mut norm = if start.is_multiple_of(2) { coeff(start) * j_cur } else { 0.0 };
    let mut value = if start == target { j_cur } else { 0.0 };
    let mut captured = start == target;
    let mut shifts_after = 0i32;
    for k in (1..=start).rev() {
        let j_prev = 2.0 * (mu + k as f64) / x * j_cur - j_next;
        j_next = j_cur;
        j_cur = j_prev;
        let idx = k - 1;
        if idx % 2 == 0 {
            norm += coeff(idx) * j_cur;
        }
        if idx == target {
            value = j_cur;
            captured = true;
        }
        if j_cur.abs() > 1e250 {
            j_cur *= 1e-250;
            j_next *= 1e-250;
            norm *= 1e-250;
            if captured {
                shifts_after += 1;
            }
        }
    }
    let sign = value.signum() * norm.signum();
    let ln_shift = shifts_after as f64 * 250.0 * std::f64::consts::LN_10;
    (sign, value.abs().ln() - ln_shift + mu * (x / 2.0).ln() - norm.abs().ln())
}

/// How the primal lattice volume `|Λ|` is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum VolumeSpec {
    /// `N` dual vectors fill the ball of radius `w`: `|Λ| = N / Vol(B_w)`.
    FromSieve,
    /// `|Λ| = q^{n/2}·2^{k_fft}`.
    Modular { k_fft: u32 },
    Explicit { ln_volume: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeScoreParams {
    pub n: usize,
    pub q: u64,
    /// Number of dual vectors `N`.
    pub n_vectors: f64,
    /// Dual-vector norm `w`.
    pub w: f64,
    /// `log₂ T`, the number of score samples in the reference experiment.
    pub log2_samples: f64,
    pub volume: VolumeSpec,
}

impl LatticeScoreParams {
    pub fn fig3_left() -> Self {
        LatticeScoreParams {
            n: 60,
            q: 3329,
            n_vectors: 5040.0,
            w: 0.0320,
            log2_samples: 45.0,
            volume: VolumeSpec::FromSieve,
        }
    }

    pub fn fig3_right() -> Self {
        LatticeScoreParams {
            n: 80,
            q: 3329,
            n_vectors: 89494.0,
            w: 0.0376,
            log2_samples: 48.0,
            volume: VolumeSpec::FromSieve,
        }
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "fig3-left" => Ok(Self::fig3_left()),
            "fig3-right" => Ok(Self::fig3_right()),
            other => Err(invalid(format!("unknown lattice preset {other:?}"))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || !self.n.is_multiple_of(2) {
            return Err(invalid(format!("n must be even and at least 2, got {}", self.n)));
        }
        if !(self.n_vectors >= 1.0) {
            return Err(invalid("N must be at least 1"));
        }
        if !(self.w > 0.0) || !self.w.is_finite() {
            return Err(invalid("w must be positive"));
        }
        Ok(())
    }

    pub fn ln_volume(&self) -> f64 {
        let n = self.n as f64;
        match self.volume {
            VolumeSpec::FromSieve => self.n_vectors.ln() - ln_unit_ball(self.n) - n * self.w.ln(),
            VolumeSpec::Modular { k_fft } => n / 2.0 * (self.q as f64).ln() + k_fft as f64 * std::f64::consts::LN_2,
            VolumeSpec::Explicit { ln_volume } => ln_volume,
        }
    }

    /// `ln θ` with `θ = Vol(B₁)/|Λ|`, exact Γ.
    pub fn ln_theta(&self) -> f64 {
        ln_unit_ball(self.n) - self.ln_volume()
    }

    fn order(&self) -> f64 {
        self.n as f64 / 2.0 - 1.0
    }

    fn arg(&self, j: f64) -> f64 {
        2.0 * std::f64::consts::PI * self.w * j
    }
}

/// `ln Vol(B₁) = (n/2)·ln π - ln Γ(n/2 + 1)`.
pub fn ln_unit_ball(n: usize) -> f64 {
    n as f64 / 2.0 * LN_PI - ln_gamma(n as f64 / 2.0 + 1.0)
}

/// `G(j) = N·(√(nπ)/e)·(n/(2πewj))^{n/2-1}·J_{n/2-1}(2πwj)` as `(sign, ln|G|)`.
pub fn floor_value(p: &LatticeScoreParams, j: f64) -> Result<(f64, f64)> {
    if !(j > 0.0) {
        return Err(invalid("floor_value needs j > 0"));
    }
    let n = p.n as f64;
    let (sign, lj) = log_bessel_j(p.order(), p.arg(j))?;
    let e = std::f64::consts::E;
    let ln = p.n_vectors.ln() + 0.5 * (n * std::f64::consts::PI).ln() - 1.0
        + p.order() * (n / (2.0 * std::f64::consts::PI * e * p.w * j)).ln()
        + lj;
    Ok((sign, ln))
}

/// `G(j)` as a plain float.
pub fn floor_value_f64(p: &LatticeScoreParams, j: f64) -> Result<f64> {
    let (s, l) = floor_value(p, j)?;
    Ok(s * l.exp())
}

/// The thin-band limit `N·Γ(n/2)·(πwj)^{1-n/2}·J_{n/2-1}(2πwj)`, of which
/// `floor_value` is the Stirling form. Equals `N` at `j → 0`.
pub fn floor_value_exact(p: &LatticeScoreParams, j: f64) -> Result<f64> {
    if !(j > 0.0) {
        return Err(invalid("floor_value_exact needs j > 0"));
    }
    let (sign, lj) = log_bessel_j(p.order(), p.arg(j))?;
    let ln = p.n_vectors.ln() + ln_gamma(p.n as f64 / 2.0) - p.order() * (std::f64::consts::PI * p.w * j).ln() + lj;
    Ok(sign * ln.exp())
}

/// One `j` term of the band sum over dual norms in `(w-ε, w+ε)`, rescaled to `N` vectors.
pub fn band_floor_value(p: &LatticeScoreParams, j: f64, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < p.w) || !(j > 0.0) {
        return Err(invalid("band term needs 0 < eps < w and j > 0"));
    }
    let n = p.n as f64;
    let half = n / 2.0;
    let tpi = 2.0 * std::f64::consts::PI;
    // F(a)/(j^n (2π)^{n/2}) = a^{n/2} j^{-n/2} J_{n/2}(2πaj), kept in log form.
    let big_f = |a: f64| -> Result<f64> {
        let (s, lj) = log_bessel_j(half, tpi * a * j)?;
        Ok(s * (half * a.ln() - half * j.ln() + lj - p.w.ln() * n).exp())
    };
    let num = big_f(p.w + eps)? - big_f(p.w - eps)?;
    let shell = ((1.0 + eps / p.w).powf(n) - (1.0 - eps / p.w).powf(n)) * ln_unit_ball(p.n).exp();
    Ok(p.n_vectors * num / shell)
}

/// `ln E[N_{≤x}]` under the Gaussian heuristic in its Stirling form.
pub fn gaussian_heuristic_expect(n: usize, ln_volume: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(invalid("gaussian heuristic needs x > 0"));
    }
    let nf = n as f64;
    let e = std::f64::consts::E;
    Ok(nf * x.ln() - (nf / 2.0 * (nf / (2.0 * std::f64::consts::PI * e)).ln() + 0.5 * (std::f64::consts::PI * nf).ln() + ln_volume))
}

/// Radius at which the Gaussian heuristic expects one lattice point.
pub fn gaussian_heuristic_radius(n: usize, ln_volume: f64) -> f64 {
    let nf = n as f64;
    let e = std::f64::consts::E;
    ((nf / 2.0 * (nf / (2.0 * std::f64::consts::PI * e)).ln() + 0.5 * (std::f64::consts::PI * nf).ln() + ln_volume) / nf).exp()
}

/// `P(Z ≥ α)` for `Z ~ Gamma(k+1, θ)`: `e^{-θα}·Σ_{i≤k} (θα)^i/i!`.
pub fn gamma_survival(k: u32, theta: f64, alpha: f64) -> Result<f64> {
    if !(theta > 0.0) || !(alpha >= 0.0) {
        return Err(invalid("gamma_survival needs theta > 0 and alpha >= 0"));
    }
    if alpha == 0.0 {
        return Ok(1.0);
    }
    let lam = theta * alpha;
    let ll = lam.ln();
    let terms: Vec<f64> = (0..=k).map(|i| i as f64 * ll - ln_gamma(i as f64 + 1.0) - lam).collect();
    let mx = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let s: f64 = terms.iter().map(|t| (t - mx).exp()).sum();
    Ok((mx + s.ln()).exp().min(1.0))
}

/// Smallest positive zero of `J_ν`, by scanning then bisecting.
pub fn first_bessel_zero(nu: f64) -> Result<f64> {
    let sign_at = |z: f64| log_bessel_j(nu, z).map(|v| v.0);
    let mut a = nu.max(0.5);
    let step = 0.05;
    let mut b = a + step;
    while sign_at(b)? > 0.0 {
        a = b;
        b += step;
        if b > nu + 10.0 * (nu + 10.0) {
            return Err(invalid("no Bessel zero found"));
        }
    }
    for _ in 0..80 {
        let m = 0.5 * (a + b);
        if sign_at(m)? > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// The `j` in `(0, first zero)` with `G(j) = x`, where `G` is decreasing.
/// `None` when `x` is not in `(0, sup G)`.
pub fn floor_preimage(p: &LatticeScoreParams, x: f64) -> Result<Option<f64>> {
    p.validate()?;
    if !(x > 0.0) {
        return Ok(None);
    }
    let hi0 = first_bessel_zero(p.order())? / (2.0 * std::f64::consts::PI * p.w);
    let (mut lo, mut hi) = (hi0 * 1e-9, hi0);
    if floor_value_f64(p, lo)? < x {
        return Ok(None);
    }
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if floor_value_f64(p, m)? >= x {
            lo = m;
        } else {
            hi = m;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// Gaussian-heuristic first length `j_GH` and the floor onset `G(j_GH)`.
pub fn floor_onset(p: &LatticeScoreParams) -> Result<(f64, f64)> {
    p.validate()?;
    let j = gaussian_heuristic_radius(p.n, p.ln_volume());
    Ok((j, floor_value_f64(p, j)?))
}

/// Law of the `k`-th shortest length: `j_kⁿ ~ Gamma(k+1, θ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FloorModel {
    pub gamma_theta: f64,
    pub index: u32,
    pub n: usize,
}

impl FloorModel {
    pub fn new(p: &LatticeScoreParams, index: u32) -> Result<Self> {
        p.validate()?;
        Ok(FloorModel {
            gamma_theta: p.ln_theta().exp(),
            index,
            n: p.n,
        })
    }

    /// `P(j_kⁿ ≥ α)`.
    pub fn survival(&self, alpha: f64) -> Result<f64> {
        gamma_survival(self.index, self.gamma_theta, alpha)
    }

    pub fn sample_length<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let z: f64 = Gamma::new(self.index as f64 + 1.0, 1.0)
            .expect("shape is positive")
            .sample(rng);
        ((z.ln() - self.gamma_theta.ln()) / self.n as f64).exp()
    }

    fn ln_density_z(&self, z: f64) -> f64 {
        let k = self.index as f64;
        k * z.ln() - z - ln_gamma(k + 1.0)
    }
}

pub const MIN_MC_TRIALS: u64 = 100_000;

#[derive(Clone, Debug, PartialEq)]
pub struct RefinedOptions {
    /// Variance of the waterfall term; `None` means `N/2`.
    pub fall_variance: Option<f64>,
    pub mc_trials: u64,
    pub seed: u64,
    pub quadrature_nodes: usize,
    /// Which shortest vector drives the floor; 0 is the shortest.
    pub floor_index: u32,
}

impl Default for RefinedOptions {
    fn default() -> Self {
        RefinedOptions {
            fall_variance: None,
            mc_trials: 100_000,
            seed: 0,
            quadrature_nodes: 40_000,
            floor_index: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LatticeCurves {
    /// Waterfall + floor, by quadrature over `j₀`.
    pub refined: SurvivalCurve,
    /// `G(j₀)` alone, by the same quadrature.
    pub floor: SurvivalCurve,
    /// Gaussian heuristic at the `G`-preimage of each threshold.
    pub crude: SurvivalCurve,
    /// Waterfall alone.
    pub independence: SurvivalCurve,
    /// Monte-Carlo estimate of the refined curve with Wilson bands.
    pub refined_mc: SurvivalCurve,
}

impl LatticeCurves {
    pub fn all(&self) -> [&SurvivalCurve; 5] {
        [&self.refined, &self.floor, &self.crude, &self.independence, &self.refined_mc]
    }
}

/// `G(j)` at quadrature nodes in `u = ln z`, `z = θ·jⁿ`, weighted by the density of `z` times `z·du`.
fn floor_nodes(p: &LatticeScoreParams, model: &FloorModel, nodes: usize) -> Result<Vec<(f64, f64)>> {
    let (u_lo, u_hi) = (-110.0f64, (80.0 + 4.0 * model.index as f64).ln());
    let du = (u_hi - u_lo) / nodes as f64;
    let ln_theta = model.gamma_theta.ln();
    let n = p.n as f64;
    (0..nodes)
        .map(|i| {
            let u = u_lo + (i as f64 + 0.5) * du;
            let z = u.exp();
            let j = ((u - ln_theta) / n).exp();
            Ok((floor_value_f64(p, j)?, (model.ln_density_z(z) + u).exp() * du))
        })
        .collect()
}

/// Survival of the refined model `X_fall + X_floor` with `X_fall ~ Normal(0, N/2)`
/// and `X_floor = G(j_k)`, together with its two components and the crude estimate.
/// The crude curve always uses the first point, as the Gaussian heuristic count does.
pub fn survival_refined(p: &LatticeScoreParams, thresholds: &[f64], opts: &RefinedOptions) -> Result<LatticeCurves> {
    p.validate()?;
    if thresholds.windows(2).any(|w| w[1] < w[0]) || thresholds.iter().any(|t| t.is_nan()) {
        return Err(invalid("thresholds must be sorted ascending"));
    }
    if opts.mc_trials < MIN_MC_TRIALS || opts.quadrature_nodes == 0 {
        return Err(invalid(format!(
            "mc_trials must be at least {MIN_MC_TRIALS} and quadrature_nodes positive"
        )));
    }
    let model = FloorModel::new(p, opts.floor_index)?;
    let var = opts.fall_variance.unwrap_or(p.n_vectors / 2.0);
    if !(var >= 0.0) {
        return Err(invalid("fall variance must be non-negative"));
    }
    let sd = var.sqrt();
    let fall_sf = |t: f64| {
        if sd == 0.0 {
            if t <= 0.0 {
                1.0
            } else {
                0.0
            }
        } else {
            normal_sf(t / sd)
        }
    };
    let nodes = floor_nodes(p, &model, opts.quadrature_nodes)?;
    let mut refined = Vec::with_capacity(thresholds.len());
    let mut floor = Vec::with_capacity(thresholds.len());
    for &t in thresholds {
        let mut r = 0.0;
        let mut f = 0.0;
        for &(g, wgt) in &nodes {
            r += wgt * fall_sf(t - g);
            if g >= t {
                f += wgt;
            }
        }
        refined.push(r.min(1.0));
        floor.push(f.min(1.0));
    }
    let ln_v = p.ln_volume();
    let crude = thresholds
        .iter()
        .map(|&t| {
            Ok(match floor_preimage(p, t)? {
                Some(x) => gaussian_heuristic_expect(p.n, ln_v, x)?.exp().min(1.0),
                None if t <= 0.0 => 1.0,
                None => 0.0,
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    let fall: Vec<f64> = thresholds.iter().map(|&t| fall_sf(t)).collect();
    let refined_mc = refined_monte_carlo(p, &model, thresholds, sd, opts)?;
    Ok(LatticeCurves {
        refined: SurvivalCurve::exact(CurveLabel::Refined, thresholds.to_vec(), refined),
        floor: SurvivalCurve::exact(CurveLabel::Floor, thresholds.to_vec(), floor),
        crude: SurvivalCurve::exact(CurveLabel::Crude, thresholds.to_vec(), crude),
        independence: SurvivalCurve::exact(CurveLabel::Independence, thresholds.to_vec(), fall),
        refined_mc,
    })
}

const MC_CHUNK: u64 = 1 << 14;

fn refined_monte_carlo(
    p: &LatticeScoreParams,
    model: &FloorModel,
    thresholds: &[f64],
    sd: f64,
    opts: &RefinedOptions,
) -> Result<SurvivalCurve> {
    let trials = opts.mc_trials;
    let chunks = trials.div_ceil(MC_CHUNK);
    let per_chunk: Vec<Vec<u64>> = (0..chunks)
        .into_par_iter()
        .map(|c| -> Result<Vec<u64>> {
            let mut rng = trial_rng(opts.seed, c);
            let len = MC_CHUNK.min(trials - c * MC_CHUNK);
            let mut draws = Vec::with_capacity(len as usize);
            for _ in 0..len {
                let z: f64 = StandardNormal.sample(&mut rng);
                draws.push(floor_value_f64(p, model.sample_length(&mut rng))? + sd * z);
            }
            Ok(tally(thresholds, draws.into_iter()))
        })
        .collect::<Result<_>>()?;
    let mut hits = vec![0u64; thresholds.len()];
    for c in per_chunk {
        for (h, x) in hits.iter_mut().zip(c) {
            *h += x;
        }
    }
    let mut curve = SurvivalCurve {
        label: CurveLabel::RefinedMc,
        thresholds: thresholds.to_vec(),
        counts: Vec::new(),
        ci_low: Vec::new(),
        ci_high: Vec::new(),
    };
    for h in hits {
        let (lo, hi) = wilson_interval(h, trials, Z95);
        curve.counts.push(h as f64 / trials as f64);
        curve.ci_low.push(lo);
        curve.ci_high.push(hi);
    }
    Ok(curve)
}

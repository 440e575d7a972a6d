//! Joint weight counts, the exact duality check, and the survival-curve
//! models (experimental, Poisson, independence) for the candidate scores.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Poisson, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::BitVec;
use crate::codes::{random_code_with, systematic_form, DecodingInstance, LinearCode, Partition};
use crate::decoder::{delta, trial_rng, BiasEstimate, DoubleRlpnParams};
use crate::error::{budget, invalid, Error, Result};
use crate::fourier::{candidates_above, fhat, secret_index, FourierTable};
use crate::krawtchouk::KrawtchoukTable;
use crate::math::{binomial, ln_binomial, log2_abs, normal_sf, wilson_interval, Z95};
use crate::samples::{build_sample_set, AuxCode, AuxStructure, SampleSet};

/// Budget on `(s - k_aux) + (k - s)` for the brute-force counts.
pub const JOINT_ENUM_MAX_DIM: usize = 26;
/// Exponent of `n` bounding the admissible Krawtchouk ratio.
pub const ADMISSIBLE_EXPONENT: f64 = 3.2;
/// Above this many samples the independence model uses a normal tail.
pub const INDEPENDENCE_EXACT_MAX: u64 = 100_000;

/// `counts[i][j]`: pairs whose `N`-side weight is `i` and `P`-side weight is `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointWeightCounts {
    pub counts: Vec<Vec<u64>>,
}

impl JointWeightCounts {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.counts.len(), self.counts.first().map_or(0, Vec::len))
    }
}

/// Pairs `(r, c^N) ∈ (x + C_aux^⊥) × C^N` by `|(r + e_P)·R + e_N + c^N|` and `|r|`.
pub fn joint_weight_counts(
    code: &LinearCode,
    aux: &AuxCode,
    part: &Partition,
    e: &BitVec,
    x: &BitVec,
) -> Result<JointWeightCounts> {
    let s = part.s();
    let sys = systematic_form(code, part)?;
    let codim_aux = s - aux.k_aux;
    let dim_short = code.k() - s;
    if codim_aux > 12 || dim_short > 14 || codim_aux + dim_short > JOINT_ENUM_MAX_DIM {
        return Err(budget("joint weight enumeration", codim_aux + dim_short, JOINT_ENUM_MAX_DIM));
    }
    let short = sys.shortened_code().codewords()?;
    let e_p = e.restrict(&part.p);
    let e_n = e.restrict(&part.n);
    let mut counts = vec![vec![0u64; s + 1]; part.n.len() + 1];
    let aux_dual = aux.code.dual();
    aux_dual.for_each_coset_word(x, |r| {
        let mut a = sys.r.vec_mul(&r.xor(&e_p));
        a.xor_assign(&e_n);
        let j = r.weight();
        for c in &short {
            counts[a.distance(c)][j] += 1;
        }
    })?;
    Ok(JointWeightCounts { counts })
}

/// Both sides of the duality identity for the score of `x`:
/// the empirical bias over `H̃` and the Krawtchouk-weighted joint counts.
pub fn duality_check(
    code: &LinearCode,
    aux: &AuxCode,
    part: &Partition,
    e: &BitVec,
    y: &BitVec,
    x: &BitVec,
    w: usize,
) -> Result<(BigRational, BigRational)> {
    if aux.structure != AuxStructure::Single {
        return Err(invalid("the duality identity is stated for a single auxiliary code"));
    }
    let samples = build_sample_set(code, part, w, aux)?;
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let hcount = BigInt::from(samples.len());
    let mut acc: i64 = 0;
    for (h, c) in &samples.pairs {
        let parity = y.dot(h) ^ x.dot(c);
        acc += if parity { -1 } else { 1 };
    }
    let lhs = BigRational::new(BigInt::from(acc), hcount.clone());
    let counts = joint_weight_counts(code, aux, part, e, x)?;
    let kn = KrawtchoukTable::new(part.n.len(), w)?;
    let kp = KrawtchoukTable::new(part.s(), aux.t_aux)?;
    let mut sum = BigInt::zero();
    for (i, row) in counts.counts.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c != 0 {
                sum += BigInt::from(c) * kn.get(i) * kp.get(j);
            }
        }
    }
    let scale = BigInt::from(1u8) << (code.k() - aux.k_aux);
    let rhs = BigRational::new(sum, scale * hcount);
    Ok((lhs, rhs))
}

/// Parameters `(n, k, s, w, t_aux, k_aux, u, t)` of a score model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    pub n: usize,
    pub k: usize,
    pub s: usize,
    pub w: usize,
    pub t_aux: usize,
    pub k_aux: usize,
    pub u: usize,
    pub t: usize,
}

impl ModelParams {
    pub fn fig2() -> Self {
        ModelParams {
            n: 60,
            k: 30,
            s: 28,
            w: 5,
            t_aux: 2,
            k_aux: 20,
            u: 8,
            t: 8,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let p = self;
        if p.k >= p.n || p.s > p.k || p.w > p.n - p.s || p.t_aux > p.s || p.k_aux > p.s || p.u > p.t || p.t - p.u > p.s {
            return Err(invalid(format!("inconsistent model parameters {p:?}")));
        }
        if p.k_aux > 40 {
            return Err(invalid("k_aux above 40 is not supported"));
        }
        Ok(())
    }

    pub fn decoder_params(&self) -> DoubleRlpnParams {
        DoubleRlpnParams {
            s: self.s,
            u: self.u,
            w: self.w,
            k_aux: self.k_aux,
            t_aux: self.t_aux,
            n_aux: 1,
            n_iter: None,
            sample_budget: None,
            seed: 0,
            aux_blocks: 1,
        }
    }

    pub fn bias(&self) -> Result<BiasEstimate> {
        delta(&self.decoder_params(), self.n, self.k, self.t)
    }

    /// `E|H̃|` as a float.
    pub fn htilde_expected_f64(&self) -> Result<f64> {
        Ok(self.bias()?.htilde_expected.to_f64().unwrap_or(f64::INFINITY))
    }

    /// Number of wrong candidates, `2^{k_aux} - 1`.
    pub fn wrong_candidates(&self) -> f64 {
        (2f64).powi(self.k_aux as i32) - 1.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveLabel {
    Experimental,
    Poisson,
    Independence,
    Refined,
    Floor,
    Crude,
    #[serde(rename = "refined-mc")]
    RefinedMc,
}

impl CurveLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            CurveLabel::Experimental => "experimental",
            CurveLabel::Poisson => "poisson",
            CurveLabel::Independence => "independence",
            CurveLabel::Refined => "refined",
            CurveLabel::Floor => "floor",
            CurveLabel::Crude => "crude",
            CurveLabel::RefinedMc => "refined-mc",
        }
    }
}

/// Expected or observed number of candidates with score at least each threshold.
#[derive(Clone, Debug, PartialEq)]
pub struct SurvivalCurve {
    pub label: CurveLabel,
    pub thresholds: Vec<f64>,
    pub counts: Vec<f64>,
    pub ci_low: Vec<f64>,
    pub ci_high: Vec<f64>,
}

impl SurvivalCurve {
    pub fn exact(label: CurveLabel, thresholds: Vec<f64>, counts: Vec<f64>) -> Self {
        SurvivalCurve {
            label,
            ci_low: counts.clone(),
            ci_high: counts.clone(),
            thresholds,
            counts,
        }
    }

    pub fn is_non_increasing(&self) -> bool {
        self.counts.windows(2).all(|w| w[1] <= w[0])
    }

    /// Count at the first threshold at or above `t`, or 0 past the end.
    pub fn count_at(&self, t: f64) -> f64 {
        let i = self.thresholds.partition_point(|&x| x < t);
        self.counts.get(i).copied().unwrap_or(0.0)
    }
}

/// How model statistics are mapped onto the raw-score axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ScoreAxis {
    /// Scores over the whole of `H̃`.
    FullSet,
    /// Scores over a uniform subsample of `samples` pairs: the full-set statistic
    /// is scaled by `samples / E|H̃|` and blurred by the sampling variance.
    Subsampled { samples: u64 },
}

struct PoissonSampler {
    parents_mean: f64,
    children_per_parent: f64,
    k_p: Vec<f64>,
    k_n: Vec<f64>,
    s: usize,
    m: usize,
    norm: f64,
    scale: f64,
    noise_sd: f64,
}

impl PoissonSampler {
    fn new(p: &ModelParams, axis: ScoreAxis) -> Result<Self> {
        p.validate()?;
        let m = p.n - p.s;
        let htilde = p.htilde_expected_f64()?;
        let (scale, noise_sd) = match axis {
            ScoreAxis::FullSet => (1.0, 0.0),
            ScoreAxis::Subsampled { samples } => {
                let rho = (samples as f64 / htilde).min(1.0);
                (rho, (samples as f64 * (1.0 - rho)).max(0.0).sqrt())
            }
        };
        Ok(PoissonSampler {
            parents_mean: (2f64).powi(p.s as i32 - p.k_aux as i32),
            children_per_parent: (2f64).powi(p.k as i32 - p.s as i32),
            k_p: KrawtchoukTable::new(p.s, p.t_aux)?.to_f64(),
            k_n: KrawtchoukTable::new(m, p.w)?.to_f64(),
            s: p.s,
            m,
            norm: (2f64).powi(p.k as i32 - p.k_aux as i32),
            scale,
            noise_sd,
        })
    }

    fn weight<R: Rng>(len: usize, rng: &mut R) -> usize {
        if len <= 64 {
            let mask = if len == 64 { !0 } else { (1u64 << len) - 1 };
            (rng.random::<u64>() & mask).count_ones() as usize
        } else {
            Binomial::new(len as u64, 0.5).unwrap().sample(rng) as usize
        }
    }

    fn poisson<R: Rng>(mean: f64, rng: &mut R) -> u64 {
        if mean <= 0.0 {
            0
        } else {
            Poisson::new(mean).unwrap().sample(rng) as u64
        }
    }

    /// One draw of the raw (full-set) statistic.
    fn raw<R: Rng>(&self, rng: &mut R, parents: &mut Vec<f64>) -> f64 {
        let j = Self::poisson(self.parents_mean, rng);
        parents.clear();
        for _ in 0..j {
            parents.push(self.k_p[Self::weight(self.s, rng)]);
        }
        if j == 0 {
            return 0.0;
        }
        let kids = Self::poisson(j as f64 * self.children_per_parent, rng);
        let mut acc = 0.0;
        for _ in 0..kids {
            let parent = rng.random_range(0..parents.len());
            acc += parents[parent] * self.k_n[Self::weight(self.m, rng)];
        }
        acc / self.norm
    }

    fn sample<R: Rng>(&self, rng: &mut R, parents: &mut Vec<f64>) -> f64 {
        let raw = self.raw(rng, parents) * self.scale;
        if self.noise_sd > 0.0 {
            let z: f64 = StandardNormal.sample(rng);
            raw + self.noise_sd * z
        } else {
            raw
        }
    }
}

/// Tallies `#{draws ≥ T}` for every sorted threshold.
pub(crate) fn tally(thresholds: &[f64], draws: impl Iterator<Item = f64>) -> Vec<u64> {
    let mut hist = vec![0u64; thresholds.len() + 1];
    for v in draws {
        // Number of thresholds at or below v.
        hist[thresholds.partition_point(|&t| t <= v)] += 1;
    }
    let mut out = vec![0u64; thresholds.len()];
    let mut acc = 0;
    for i in (0..thresholds.len()).rev() {
        acc += hist[i + 1];
        out[i] = acc;
    }
    out
}

fn check_thresholds(thresholds: &[f64]) -> Result<()> {
    if thresholds.windows(2).any(|w| w[1] < w[0]) || thresholds.iter().any(|t| t.is_nan()) {
        return Err(invalid("thresholds must be sorted ascending"));
    }
    Ok(())
}

const MC_CHUNK: u64 = 1 << 14;

/// Monte-Carlo survival of a wrong candidate's score under the Poisson model,
/// scaled by `2^{k_aux} - 1`, with Wilson 95% bands.
pub fn poisson_survival(
    p: &ModelParams,
    thresholds: &[f64],
    trials: u64,
    seed: u64,
    axis: ScoreAxis,
) -> Result<SurvivalCurve> {
    check_thresholds(thresholds)?;
    if trials == 0 {
        return Err(invalid("trials must be positive"));
    }
    let sampler = PoissonSampler::new(p, axis)?;
    let chunks = trials.div_ceil(MC_CHUNK);
    let hits = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = trial_rng(seed, c);
            let len = MC_CHUNK.min(trials - c * MC_CHUNK);
            let mut parents = Vec::new();
            let draws: Vec<f64> = (0..len).map(|_| sampler.sample(&mut rng, &mut parents)).collect();
            tally(thresholds, draws.into_iter())
        })
        .reduce(
            || vec![0u64; thresholds.len()],
            |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect(),
        );
    let scale = p.wrong_candidates();
    let mut curve = SurvivalCurve {
        label: CurveLabel::Poisson,
        thresholds: thresholds.to_vec(),
        counts: Vec::new(),
        ci_low: Vec::new(),
        ci_high: Vec::new(),
    };
    for &h in &hits {
        let (lo, hi) = wilson_interval(h, trials, Z95);
        curve.counts.push(scale * h as f64 / trials as f64);
        curve.ci_low.push(scale * lo);
        curve.ci_high.push(scale * hi);
    }
    Ok(curve)
}

/// Draws of the model's parent weights and per-parent child weights, exposed
/// for the expectation checks on `N_j` and `N_i`.
pub fn poisson_weight_draws(p: &ModelParams, trials: u64, seed: u64) -> Result<(Vec<f64>, Vec<f64>)> {
    let sampler = PoissonSampler::new(p, ScoreAxis::FullSet)?;
    let mut rng = trial_rng(seed, 0);
    let mut nj = vec![0f64; p.s + 1];
    let mut ni = vec![0f64; p.n - p.s + 1];
    for _ in 0..trials {
        let j = PoissonSampler::poisson(sampler.parents_mean, &mut rng);
        for _ in 0..j {
            nj[PoissonSampler::weight(p.s, &mut rng)] += 1.0;
        }
        // Children of a single parent.
        let kids = PoissonSampler::poisson(sampler.children_per_parent, &mut rng);
        for _ in 0..kids {
            ni[PoissonSampler::weight(p.n - p.s, &mut rng)] += 1.0;
        }
    }
    let t = trials as f64;
    Ok((nj.into_iter().map(|x| x / t).collect(), ni.into_iter().map(|x| x / t).collect()))
}

/// `2^{k_aux}·P(Σ of N iid ±1 ≥ T)`; exact up to `N = 10^5`, normal tail beyond.
pub fn independence_survival(k_aux: usize, samples: u64, thresholds: &[f64]) -> Result<SurvivalCurve> {
    check_thresholds(thresholds)?;
    if samples == 0 {
        return Err(invalid("independence model needs N >= 1"));
    }
    let scale = (2f64).powi(k_aux as i32);
    let counts = thresholds
        .iter()
        .map(|&t| scale * pm_one_tail(samples, t))
        .collect();
    Ok(SurvivalCurve::exact(CurveLabel::Independence, thresholds.to_vec(), counts))
}

/// `P(2B - N ≥ T)` for `B ~ Bin(N, 1/2)`.
pub fn pm_one_tail(n: u64, t: f64) -> f64 {
    let nf = n as f64;
    if t > nf {
        return 0.0;
    }
    if t <= -nf {
        return 1.0;
    }
    let b0 = ((t + nf) / 2.0).ceil().max(0.0) as u64;
    if n > INDEPENDENCE_EXACT_MAX {
        // Continuity-corrected normal tail.
        let z = (b0 as f64 - 0.5 - nf / 2.0) / (nf / 4.0).sqrt();
        return normal_sf(z);
    }
    let ln2n = nf * std::f64::consts::LN_2;
    let mut terms: Vec<f64> = Vec::new();
    for b in b0..=n {
        let lt = ln_binomial(nf, b as f64) - ln2n;
        if lt < -745.0 && b as f64 > nf / 2.0 {
            break;
        }
        terms.push(lt);
    }
    let mx = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if mx == f64::NEG_INFINITY {
        return 0.0;
    }
    let s: f64 = terms.iter().map(|x| (x - mx).exp()).sum();
    (mx + s.ln()).exp().min(1.0)
}

/// `(i, j)` pairs whose Krawtchouk product is within `n^exponent` of the secret's.
#[derive(Clone, Debug, PartialEq)]
pub struct AdmissibleRegion {
    pub pairs: Vec<(usize, usize)>,
    pub exponent: f64,
}

pub fn admissible_region(p: &ModelParams, exponent: f64) -> Result<AdmissibleRegion> {
    p.validate()?;
    let kn = KrawtchoukTable::new(p.n - p.s, p.w)?;
    let kp = KrawtchoukTable::new(p.s, p.t_aux)?;
    let target = log2_abs(kn.get(p.u)) + log2_abs(kp.get(p.t - p.u));
    let slack = exponent * (p.n as f64).log2();
    let mut pairs = Vec::new();
    for i in 0..=p.n - p.s {
        for j in 0..=p.s {
            let (a, b) = (kn.get(i), kp.get(j));
            if a.is_zero() || b.is_zero() {
                continue;
            }
            if target - (log2_abs(a) + log2_abs(b)) <= slack + 1e-12 {
                pairs.push((i, j));
            }
        }
    }
    Ok(AdmissibleRegion { pairs, exponent })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CandidateBound {
    pub log2_value: f64,
    pub value: f64,
    pub region: AdmissibleRegion,
}

/// `1 + max over the admissible region of C(s, j)·C(n-s, i) / 2^{n-k}`.
pub fn candidate_bound(p: &ModelParams, exponent: f64) -> Result<CandidateBound> {
    let region = admissible_region(p, exponent)?;
    Ok(bound_over(p, region))
}

pub fn bound_over(p: &ModelParams, region: AdmissibleRegion) -> CandidateBound {
    let mut best = f64::NEG_INFINITY;
    for &(i, j) in &region.pairs {
        let l = crate::math::ln_biguint(&(binomial(p.s as u64, j as u64) * binomial((p.n - p.s) as u64, i as u64)))
            / std::f64::consts::LN_2
            - (p.n - p.k) as f64;
        best = best.max(l);
    }
    // log2(2^best + 1)
    let log2_value = if best == f64::NEG_INFINITY {
        0.0
    } else if best > 0.0 {
        best + (1.0 + (-best).exp2()).log2()
    } else {
        (1.0 + best.exp2()).log2()
    };
    CandidateBound {
        log2_value,
        value: log2_value.exp2(),
        region,
    }
}

/// Which wrong candidates an experimental curve scans.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XSelection {
    All,
    Sample(usize),
}

/// A bet-valid planted instance, its FFT scores, and the secret's index.
#[derive(Clone, Debug)]
pub struct ExperimentRun {
    pub params: ModelParams,
    pub fhat: FourierTable,
    pub secret: BitVec,
    pub samples_used: usize,
    pub htilde_total: usize,
    pub complete: bool,
    pub bias: BiasEstimate,
}

impl ExperimentRun {
    /// Planted instance with exactly `u` errors on `N`, random aux code, optional subsampling.
    pub fn generate(p: &ModelParams, sample_budget: Option<usize>, seed: u64) -> Result<Self> {
        p.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (code, part) = loop {
            let code = random_code_with(p.n, p.k, &mut rng)?;
            let part = Partition::random(p.n, p.s, &mut rng)?;
            if systematic_form(&code, &part).is_ok() {
                break (code, part);
            }
        };
        let e_p = BitVec::random_weight(p.s, p.t - p.u, &mut rng);
        let e_n = BitVec::random_weight(p.n - p.s, p.u, &mut rng);
        let e = part.join(&e_p, &e_n);
        let inst = DecodingInstance::planted_with_error(code, e, &mut rng);
        let aux = AuxCode::random(p.s, p.k_aux, p.t_aux, AuxStructure::Single, &mut rng)?;
        let full = build_sample_set(&inst.code, &part, p.w, &aux)?;
        let htilde_total = full.len();
        let samples: SampleSet = match sample_budget {
            Some(b) => full.subsample(b, &mut rng),
            None => full,
        };
        let table = fhat(&inst.y, &samples, aux.generator())?;
        Ok(ExperimentRun {
            params: *p,
            fhat: table,
            secret: secret_index(aux.generator(), &e_p),
            samples_used: samples.len(),
            htilde_total,
            complete: samples.complete,
            bias: p.bias()?,
        })
    }

    pub fn secret_score(&self) -> i64 {
        self.fhat.get(&self.secret)
    }

    /// `(δ/2)·base`, with the same base rule as `fft_decode`.
    pub fn threshold(&self) -> BigRational {
        let base = if self.complete {
            self.bias.htilde_expected.clone()
        } else {
            BigRational::from_integer(BigInt::from(self.samples_used))
        };
        &self.bias.delta * base / BigRational::from_integer(BigInt::from(2))
    }

    /// `|S|`: every index, secret included, strictly above the threshold.
    pub fn candidate_count(&self) -> usize {
        candidates_above(&self.fhat, self.threshold()).len()
    }

    /// Scores of the wrong candidates, ascending.
    pub fn wrong_scores(&self, selection: XSelection, seed: u64) -> Vec<i64> {
        let secret = self.secret.to_u64() as usize;
        let mut v: Vec<i64> = match selection {
            XSelection::All => self
                .fhat
                .values
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != secret)
                .map(|(_, &x)| x)
                .collect(),
            XSelection::Sample(m) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let total = self.fhat.values.len();
                (0..m)
                    .map(|_| loop {
                        let i = rng.random_range(0..total);
                        if i != secret {
                            break self.fhat.values[i];
                        }
                    })
                    .collect()
            }
        };
        v.sort_unstable();
        v
    }
}

/// Observed `#{u ≠ secret : f̂(u) ≥ T}`; the default grid is the distinct wrong scores.
pub fn experimental_survival(
    run: &ExperimentRun,
    selection: XSelection,
    thresholds: Option<&[f64]>,
    seed: u64,
) -> Result<SurvivalCurve> {
    let scores = run.wrong_scores(selection, seed);
    let grid: Vec<f64> = match thresholds {
        Some(t) => {
            check_thresholds(t)?;
            t.to_vec()
        }
        None => {
            let mut g: Vec<f64> = scores.iter().map(|&x| x as f64).collect();
            g.dedup();
            g
        }
    };
    let scale = match selection {
        XSelection::All => 1.0,
        XSelection::Sample(m) => run.params.wrong_candidates() / m as f64,
    };
    let counts: Vec<f64> = grid
        .iter()
        .map(|&t| {
            let below = scores.partition_point(|&x| (x as f64) < t);
            scale * (scores.len() - below) as f64
        })
        .collect();
    Ok(SurvivalCurve::exact(CurveLabel::Experimental, grid, counts))
}

/// Mean and standard error of each coordinate over rows of observations.
pub fn mean_and_stderr(rows: &[Vec<f64>]) -> Vec<(f64, f64)> {
    let m = rows.len() as f64;
    let d = rows.first().map_or(0, Vec::len);
    (0..d)
        .map(|c| {
            let mean = rows.iter().map(|r| r[c]).sum::<f64>() / m;
            let var = rows.iter().map(|r| (r[c] - mean).powi(2)).sum::<f64>() / (m - 1.0).max(1.0);
            (mean, (var / m).sqrt())
        })
        .collect()
}

/// Exact `C(len, i) / 2^{shift}` as a float.
pub fn binomial_over_pow2(len: usize, i: usize, shift: usize) -> f64 {
    binomial(len as u64, i as u64).to_f64().unwrap_or(f64::INFINITY) / (2f64).powi(shift as i32)
}

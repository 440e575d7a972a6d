//! The double-RLPN decoder: partition loop, FFT decoding per auxiliary code,
//! secret recovery and final verification.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::{BitMatrix, BitVec};
use crate::codes::{systematic_form, DecodingInstance, LinearCode, Partition, SystematicForm};
use crate::error::{budget, invalid, Error, Result};
use crate::fourier::{fft_decode, CandidateSet};
use crate::krawtchouk::krawtchouk_exact;
use crate::math::{binomial, binomial_i, ln_biguint, pow2, Combinations};
use crate::samples::{build_sample_set, AuxCode, AuxStructure};

/// Largest exhaustive syndrome-decoding enumeration.
pub const EXHAUSTIVE_BUDGET: u64 = 1_000_000_000;
/// Largest half-list kept by the birthday split.
pub const SPLIT_LIST_BUDGET: u64 = 1 << 26;
const PARTITION_RETRIES: usize = 100;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DoubleRlpnParams {
    pub s: usize,
    pub u: usize,
    pub w: usize,
    pub k_aux: usize,
    pub t_aux: usize,
    #[serde(default = "one")]
    pub n_aux: usize,
    /// Defaults to `⌈8 / p_succ⌉`.
    #[serde(default)]
    pub n_iter: Option<usize>,
    #[serde(default)]
    pub sample_budget: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    /// Number of blocks of a product auxiliary code; 1 means a single random code.
    #[serde(default = "one")]
    pub aux_blocks: usize,
}

fn one() -> usize {
    1
}

impl DoubleRlpnParams {
    pub fn validate(&self, n: usize, k: usize, t: usize) -> Result<()> {
        let p = self;
        if p.s == 0 || p.s > k {
            return Err(invalid(format!("need 0 < s <= k, got s = {}", p.s)));
        }
        if p.u > t || t - p.u > p.s {
            return Err(invalid(format!("need u <= t and t - u <= s, got u = {}", p.u)));
        }
        if p.w > n - p.s {
            return Err(invalid(format!("need w <= n - s, got w = {}", p.w)));
        }
        if p.t_aux > p.s || p.k_aux > p.s {
            return Err(invalid("need t_aux <= s and k_aux <= s"));
        }
        if p.n_aux == 0 {
            return Err(invalid("need N_aux >= 1"));
        }
        if p.aux_blocks == 0 {
            return Err(invalid("need aux_blocks >= 1"));
        }
        Ok(())
    }

    pub fn aux_structure(&self) -> AuxStructure {
        if self.aux_blocks <= 1 {
            AuxStructure::Single
        } else {
            AuxStructure::Product {
                blocks: self.aux_blocks,
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiasEstimate {
    pub delta: BigRational,
    pub htilde_expected: BigRational,
}

/// `δ = K_w^{(n-s)}(u)·K_{t_aux}^{(s)}(t-u) / (C(n-s, w)·C(s, t_aux))` and
/// `E|H̃| = C(n-s, w)·C(s, t_aux) / 2^{k-k_aux}`.
pub fn delta(params: &DoubleRlpnParams, n: usize, k: usize, t: usize) -> Result<BiasEstimate> {
    params.validate(n, k, t)?;
    let p = params;
    let kn = krawtchouk_exact(n - p.s, p.w, p.u)?;
    let kp = krawtchouk_exact(p.s, p.t_aux, t - p.u)?;
    let bn = BigInt::from(binomial((n - p.s) as u64, p.w as u64));
    let bp = BigInt::from(binomial(p.s as u64, p.t_aux as u64));
    let delta = BigRational::new(kn * kp, &bn * &bp);
    let htilde_expected = if k >= p.k_aux {
        BigRational::new(bn * bp, BigInt::from(pow2((k - p.k_aux) as u32)))
    } else {
        BigRational::from_integer(bn * bp * BigInt::from(pow2((p.k_aux - k) as u32)))
    };
    Ok(BiasEstimate {
        delta,
        htilde_expected,
    })
}

impl BiasEstimate {
    /// Whether `E|H̃| ≥ n^α / δ²`.
    pub fn sample_constraint_holds(&self, n: usize, alpha: f64) -> bool {
        if self.delta.is_zero() {
            return false;
        }
        let ln_h = ln_rational(&self.htilde_expected);
        let ln_d = ln_rational(&self.delta.abs());
        ln_h >= alpha * (n as f64).ln() - 2.0 * ln_d
    }
}

fn ln_rational(r: &BigRational) -> f64 {
    ln_biguint(r.numer().magnitude()) - ln_biguint(r.denom().magnitude())
}

/// Probability that a random `P` of size `s` leaves exactly `u` errors on `N`.
pub fn p_succ(n: usize, s: usize, t: usize, u: usize) -> BigRational {
    let (n, s, t, u) = (n as i64, s as i64, t as i64, u as i64);
    let num = binomial_i(t, u) * binomial_i(n - t, n - u - s);
    let den = binomial_i(n, n - s);
    if den.is_zero() {
        return BigRational::zero();
    }
    BigRational::new(num, den)
}

/// `⌈8 / p_succ⌉`, or `None` when `p_succ = 0`.
pub fn default_n_iter(n: usize, s: usize, t: usize, u: usize) -> Option<usize> {
    let p = p_succ(n, s, t, u);
    if p.is_zero() {
        return None;
    }
    let q = BigRational::from_integer(BigInt::from(8)) / p;
    q.ceil().to_integer().to_usize()
}

/// Every `e` of weight `t` with `H·eᵀ = syndrome`, sorted.
pub fn syndrome_decode_all(h: &BitMatrix, syndrome: &BitVec, t: usize) -> Result<Vec<BitVec>> {
    if syndrome.len() != h.rows() {
        return Err(invalid("syndrome length differs from the number of parity checks"));
    }
    let len = h.cols();
    if t > len {
        return Ok(Vec::new());
    }
    let ht = h.transpose();
    let cols = ht.row_vecs();
    let exhaustive = binomial(len as u64, t as u64);
    let left = len / 2;
    let split_lists: BigUint = (0..=t)
        .map(|t1| binomial(left as u64, t1 as u64) + binomial((len - left) as u64, (t - t1) as u64))
        .sum();
    let use_split = exhaustive > BigUint::from(1u64 << 16) && split_lists < exhaustive;
    let mut out = if use_split {
        decode_split(cols, syndrome, len, left, t)?
    } else {
        if exhaustive > BigUint::from(EXHAUSTIVE_BUDGET) {
            return Err(budget("exhaustive syndrome decoding", exhaustive, EXHAUSTIVE_BUDGET));
        }
        let mut out = Vec::new();
        let mut acc = BitVec::zeros(h.rows());
        let mut comb = Combinations::new(len, t);
        while let Some(idx) = comb.next_ref() {
            acc.clear();
            for &i in idx {
                acc.xor_assign(&cols[i]);
            }
            if acc == *syndrome {
                out.push(BitVec::from_indices(len, idx));
            }
        }
        out
    };
    out.sort();
    Ok(out)
}

fn decode_split(cols: &[BitVec], syndrome: &BitVec, len: usize, left: usize, t: usize) -> Result<Vec<BitVec>> {
    let right = len - left;
    let mut out = Vec::new();
    for t1 in t.saturating_sub(right)..=t.min(left) {
        let size = binomial(left as u64, t1 as u64);
        if size > BigUint::from(SPLIT_LIST_BUDGET) {
            return Err(budget("birthday-split list", size, SPLIT_LIST_BUDGET));
        }
        let mut table: HashMap<BitVec, Vec<Vec<usize>>> = HashMap::new();
        let mut comb = Combinations::new(left, t1);
        while let Some(idx) = comb.next_ref() {
            let mut acc = BitVec::zeros(syndrome.len());
            for &i in idx {
                acc.xor_assign(&cols[i]);
            }
            table.entry(acc).or_default().push(idx.to_vec());
        }
        let mut comb = Combinations::new(right, t - t1);
        while let Some(idx) = comb.next_ref() {
            let mut need = syndrome.clone();
            for &i in idx {
                need.xor_assign(&cols[left + i]);
            }
            if let Some(lefts) = table.get(&need) {
                for l in lefts {
                    let mut e = BitVec::from_indices(len, l);
                    for &i in idx {
                        e.set(left + i, true);
                    }
                    out.push(e);
                }
            }
        }
    }
    Ok(out)
}

/// Parity-check matrix of the shortened code `C^N` generated by `R'`.
pub fn shortened_parity_check(sys: &SystematicForm) -> BitMatrix {
    sys.r_prime.kernel()
}

/// Decodes `y' = y_N + (y_P + v)·R` in `C^N` at distance exactly `u`; returns `e_N`.
pub fn solve_subproblem(code: &LinearCode, part: &Partition, y: &BitVec, v: &BitVec, u: usize) -> Result<Option<BitVec>> {
    let sys = systematic_form(code, part)?;
    let h_n = shortened_parity_check(&sys);
    solve_subproblem_with(&sys, &h_n, part, y, v, u)
}

pub fn solve_subproblem_with(
    sys: &SystematicForm,
    h_n: &BitMatrix,
    part: &Partition,
    y: &BitVec,
    v: &BitVec,
    u: usize,
) -> Result<Option<BitVec>> {
    let mut m1 = y.restrict(&part.p);
    m1.xor_assign(v);
    let mut yp = y.restrict(&part.n);
    yp.xor_assign(&sys.r.vec_mul(&m1));
    let syn = h_n.mul_vec(&yp);
    Ok(syndrome_decode_all(h_n, &syn, u)?.into_iter().next())
}

/// Tries every tuple of candidates; returns the first verified error vector.
#[allow(clippy::too_many_arguments)]
pub fn recover_e(
    candidate_sets: &[CandidateSet],
    g_aux_list: &[BitMatrix],
    part: &Partition,
    y: &BitVec,
    code: &LinearCode,
    t: usize,
    u: usize,
) -> Result<Option<BitVec>> {
    let sys = systematic_form(code, part)?;
    recover_e_with(candidate_sets, g_aux_list, &sys, part, y, code, t, u)
}

#[allow(clippy::too_many_arguments)]
fn recover_e_with(
    candidate_sets: &[CandidateSet],
    g_aux_list: &[BitMatrix],
    sys: &SystematicForm,
    part: &Partition,
    y: &BitVec,
    code: &LinearCode,
    t: usize,
    u: usize,
) -> Result<Option<BitVec>> {
    if candidate_sets.len() != g_aux_list.len() {
        return Err(invalid("one candidate set per auxiliary code is required"));
    }
    if candidate_sets.iter().any(CandidateSet::is_empty) || t < u {
        return Ok(None);
    }
    let s = part.s();
    let mut stacked = BitMatrix::zeros(0, s);
    for g in g_aux_list {
        stacked = stacked.vstack(g);
    }
    let h_n = shortened_parity_check(sys);
    let mut choice = vec![0usize; candidate_sets.len()];
    loop {
        let mut syn = BitVec::zeros(0);
        for (set, &c) in candidate_sets.iter().zip(&choice) {
            syn = syn.concat(&set.members[c].0);
        }
        for v in syndrome_decode_all(&stacked, &syn, t - u)? {
            if let Some(e_n) = solve_subproblem_with(sys, &h_n, part, y, &v, u)? {
                let e = part.join(&v, &e_n);
                if e.weight() == t && code.contains(&y.xor(&e)) {
                    return Ok(Some(e));
                }
            }
        }
        // Next tuple, last index fastest.
        let mut i = choice.len();
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < candidate_sets[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub e: Option<BitVec>,
    /// Index of the successful trial plus one, or the number of trials run.
    pub trials_used: usize,
    pub n_iter: usize,
}

/// Per-trial randomness, reproducible regardless of scheduling.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// One partition trial. Returns a verified error vector or `None`.
pub fn run_trial(instance: &DecodingInstance, params: &DoubleRlpnParams, est: &BiasEstimate, trial: u64) -> Result<Option<BitVec>> {
    let code = &instance.code;
    let n = code.n();
    let mut rng = trial_rng(params.seed, trial);
    let (part, sys) = {
        let mut found = None;
        for _ in 0..PARTITION_RETRIES {
            let part = Partition::random(n, params.s, &mut rng)?;
            if let Ok(sys) = systematic_form(code, &part) {
                found = Some((part, sys));
                break;
            }
        }
        match found {
            Some(x) => x,
            None => return Err(Error::RankDeficient),
        }
    };
    let mut sets = Vec::with_capacity(params.n_aux);
    let mut gens = Vec::with_capacity(params.n_aux);
    for _ in 0..params.n_aux {
        let aux = AuxCode::random(params.s, params.k_aux, params.t_aux, params.aux_structure(), &mut rng)?;
        let mut samples = build_sample_set(code, &part, params.w, &aux)?;
        if let Some(b) = params.sample_budget {
            samples = samples.subsample(b, &mut rng);
        }
        let cands = fft_decode(&instance.y, &samples, aux.generator(), &est.delta, &est.htilde_expected)?;
        sets.push(cands);
        gens.push(aux.generator().clone());
    }
    let e = recover_e_with(&sets, &gens, &sys, &part, &instance.y, code, instance.t, params.u)?;
    Ok(e.filter(|e| instance.is_solution(e)))
}

/// Runs up to `N_iter` partition trials and returns the first verified solution.
pub fn double_rlpn(instance: &DecodingInstance, params: &DoubleRlpnParams) -> Result<DecodeOutcome> {
    let (n, k, t) = (instance.code.n(), instance.code.k(), instance.t);
    if t == 0 {
        let zero = BitVec::zeros(n);
        let ok = instance.code.contains(&instance.y);
        return Ok(DecodeOutcome {
            e: ok.then_some(zero),
            trials_used: 0,
            n_iter: 0,
        });
    }
    params.validate(n, k, t)?;
    let est = delta(params, n, k, t)?;
    if !est.delta.is_positive() {
        return Err(invalid("parameters give a non-positive bias"));
    }
    let n_iter = match params.n_iter {
        Some(x) => x,
        None => default_n_iter(n, params.s, t, params.u).ok_or_else(|| invalid("p_succ is zero for these parameters"))?,
    };
    let chunk = rayon::current_num_threads().max(1);
    let mut start = 0;
    while start < n_iter {
        let end = (start + chunk).min(n_iter);
        let results: Vec<Result<Option<BitVec>>> = (start..end)
            .into_par_iter()
            .map(|i| run_trial(instance, params, &est, i as u64))
            .collect();
        for (off, r) in results.into_iter().enumerate() {
            if let Some(e) = r? {
                return Ok(DecodeOutcome {
                    e: Some(e),
                    trials_used: start + off + 1,
                    n_iter,
                });
            }
        }
        start = end;
    }
    Ok(DecodeOutcome {
        e: None,
        trials_used: n_iter,
        n_iter,
    })
}

/// `p_succ` as a float, for reporting.
pub fn p_succ_f64(n: usize, s: usize, t: usize, u: usize) -> f64 {
    let p = p_succ(n, s, t, u);
    if p.is_zero() {
        0.0
    } else if p == BigRational::one() {
        1.0
    } else {
        p.to_f64().unwrap_or(0.0)
    }
}

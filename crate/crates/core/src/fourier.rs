//! FFT decoding: the table `f`, its Walsh–Hadamard transform, and the
//! candidate list read off the transformed scores.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Signed;

use crate::bits::{BitMatrix, BitVec, RowSpaceSolver};
use crate::error::{budget, invalid, Error, Result};
use crate::samples::SampleSet;

/// Largest `k_aux` for which a dense table is allocated.
pub const MAX_K_AUX: usize = 28;

/// Index `i` stands for the vector whose bit `j` is bit `j` of `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierTable {
    pub k_aux: usize,
    pub values: Vec<i64>,
}

impl FourierTable {
    pub fn zeros(k_aux: usize) -> Result<Self> {
        if k_aux > MAX_K_AUX {
            return Err(budget("Fourier table dimension", k_aux, MAX_K_AUX));
        }
        Ok(FourierTable {
            k_aux,
            values: vec![0; 1 << k_aux],
        })
    }

    pub fn get(&self, u: &BitVec) -> i64 {
        self.values[u.to_u64() as usize]
    }
}

/// `f(m_aux) = Σ (-1)^{⟨y, h⟩}` over pairs whose `c_aux = m_aux · G_aux`.
pub fn build_f(y: &BitVec, samples: &SampleSet, g_aux: &BitMatrix) -> Result<FourierTable> {
    let mut table = FourierTable::zeros(g_aux.rows())?;
    if samples.is_empty() {
        return Ok(table);
    }
    let solver = RowSpaceSolver::new(g_aux).ok_or_else(|| invalid("auxiliary generator is not full rank"))?;
    for (h, c) in &samples.pairs {
        let m = solver.solve(c).ok_or(Error::InconsistentAux)?;
        let idx = m.to_u64() as usize;
        table.values[idx] += if y.dot(h) { -1 } else { 1 };
    }
    Ok(table)
}

/// In-place butterfly; applying it twice multiplies by `2^{k_aux}`.
pub fn wht_in_place(values: &mut [i64]) {
    let n = values.len();
    assert!(n.is_power_of_two(), "table length must be a power of two");
    let mut half = 1;
    while half < n {
        for block in values.chunks_mut(2 * half) {
            let (a, b) = block.split_at_mut(half);
            for (x, y) in a.iter_mut().zip(b.iter_mut()) {
                let (s, d) = (*x + *y, *x - *y);
                *x = s;
                *y = d;
            }
        }
        half *= 2;
    }
}

pub fn wht(mut table: FourierTable) -> FourierTable {
    wht_in_place(&mut table.values);
    table
}

/// `f̂(u) / count` as an exact rational.
pub fn bias_from_fhat(fhat: &FourierTable, u: &BitVec, count: usize) -> Result<BigRational> {
    if count == 0 {
        return Err(Error::EmptySamples);
    }
    Ok(BigRational::new(BigInt::from(fhat.get(u)), BigInt::from(count)))
}

/// Candidates sorted by decreasing score, ties by increasing index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateSet {
    pub threshold: BigRational,
    pub members: Vec<(BitVec, i64)>,
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, u: &BitVec) -> bool {
        self.members.iter().any(|(v, _)| v == u)
    }
}

/// Smallest integer strictly above `x`.
pub fn strict_integer_cutoff(x: &BigRational) -> i64 {
    let fl = x.numer().div_floor(x.denom());
    i64::try_from(fl + 1).unwrap_or(i64::MAX)
}

/// `(δ/2)·base`; `base` is `E|H̃|` for complete sample sets and the realised `|H|` otherwise.
pub fn candidate_threshold(samples: &SampleSet, delta: &BigRational, htilde_expected: &BigRational) -> BigRational {
    let base = if samples.complete {
        htilde_expected.clone()
    } else {
        BigRational::from_integer(BigInt::from(samples.len()))
    };
    delta * base / BigRational::from_integer(BigInt::from(2))
}

/// Transformed scores `f̂` for a sample set.
pub fn fhat(y: &BitVec, samples: &SampleSet, g_aux: &BitMatrix) -> Result<FourierTable> {
    Ok(wht(build_f(y, samples, g_aux)?))
}

/// `{u : f̂(u) > (δ/2)·base}`.
pub fn fft_decode(
    y: &BitVec,
    samples: &SampleSet,
    g_aux: &BitMatrix,
    delta: &BigRational,
    htilde_expected: &BigRational,
) -> Result<CandidateSet> {
    if !delta.is_positive() {
        return Err(invalid("fft_decode needs delta > 0"));
    }
    let table = fhat(y, samples, g_aux)?;
    let threshold = candidate_threshold(samples, delta, htilde_expected);
    Ok(candidates_above(&table, threshold))
}

pub fn candidates_above(table: &FourierTable, threshold: BigRational) -> CandidateSet {
    let cut = strict_integer_cutoff(&threshold);
    let mut members: Vec<(BitVec, i64)> = table
        .values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v >= cut)
        .map(|(i, &v)| (BitVec::from_u64(table.k_aux, i as u64), v))
        .collect();
    members.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.to_u64().cmp(&b.0.to_u64())));
    CandidateSet { threshold, members }
}

/// The index the true secret maps to: `G_aux · e_Pᵀ`.
pub fn secret_index(g_aux: &BitMatrix, e_p: &BitVec) -> BitVec {
    g_aux.mul_vec(e_p)
}

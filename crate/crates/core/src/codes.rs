//! Binary linear codes, partitions of the positions, the partial systematic
//! form used by the decoder, and exhaustive coset enumeration.

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::{BitMatrix, BitVec};
use crate::error::{budget, invalid, Error, Result};
use crate::math::{binomial, pow2};

/// Largest code dimension `coset_weight_enumerator` will walk.
pub const COSET_ENUM_MAX_DIM: usize = 26;
const MAX_N: usize = 1 << 20;

/// An `[n, k]` binary code with generator and parity-check kept in sync.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    n: usize,
    k: usize,
    generator: BitMatrix,
    parity_check: BitMatrix,
}

impl LinearCode {
    /// Builds a code from a full-row-rank generator. `k = 0` and `k = n` are allowed.
    pub fn from_generator(generator: BitMatrix) -> Result<Self> {
        let (k, n) = (generator.rows(), generator.cols());
        if generator.rank() != k {
            return Err(Error::RankDeficient);
        }
        let parity_check = generator.kernel();
        Ok(LinearCode {
            n,
            k,
            generator,
            parity_check,
        })
    }

    pub fn from_parity_check(parity_check: BitMatrix) -> Result<Self> {
        Ok(LinearCode::from_generator(parity_check)?.dual())
    }

    /// The whole space `F_2^n`.
    pub fn full_space(n: usize) -> Self {
        LinearCode::from_generator(BitMatrix::identity(n)).expect("identity has full rank")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    pub fn parity_check(&self) -> &BitMatrix {
        &self.parity_check
    }

    pub fn contains(&self, c: &BitVec) -> bool {
        c.len() == self.n && self.parity_check.mul_vec(c).is_zero()
    }

    pub fn encode(&self, m: &BitVec) -> BitVec {
        self.generator.vec_mul(m)
    }

    pub fn syndrome(&self, y: &BitVec) -> BitVec {
        self.parity_check.mul_vec(y)
    }

    pub fn dual(&self) -> LinearCode {
        LinearCode {
            n: self.n,
            k: self.n - self.k,
            generator: self.parity_check.clone(),
            parity_check: self.generator.clone(),
        }
    }

    /// `C_I = {c_I : c ∈ C}`, coordinates in the order given by `idx`.
    pub fn puncture(&self, idx: &[usize]) -> LinearCode {
        let g = self.generator.select_columns(idx);
        let (red, piv) = g.rref();
        let basis = red.select_rows(&(0..piv.len()).collect::<Vec<_>>());
        LinearCode::from_generator(basis).expect("reduced rows are independent")
    }

    /// `C^I = {c_I : c ∈ C, c outside I is zero}`.
    pub fn shorten(&self, idx: &[usize]) -> LinearCode {
        let outside = complement(self.n, idx);
        // Messages m with m·G vanishing outside I.
        let g_out = self.generator.select_columns(&outside);
        let msgs = g_out.transpose().kernel();
        let rows = msgs.mul(&self.generator).select_columns(idx);
        let (red, piv) = rows.rref();
        let basis = red.select_rows(&(0..piv.len()).collect::<Vec<_>>());
        LinearCode::from_generator(basis).expect("reduced rows are independent")
    }

    /// Calls `f` on every codeword of `x + C` in Gray-code order.
    pub fn for_each_coset_word(&self, x: &BitVec, mut f: impl FnMut(&BitVec)) -> Result<()> {
        if self.k > COSET_ENUM_MAX_DIM {
            return Err(budget("coset enumeration dimension", self.k, COSET_ENUM_MAX_DIM));
        }
        gray_walk(&self.generator, x.clone(), &mut f);
        Ok(())
    }

    pub fn codewords(&self) -> Result<Vec<BitVec>> {
        let mut out = Vec::with_capacity(1 << self.k.min(COSET_ENUM_MAX_DIM));
        self.for_each_coset_word(&BitVec::zeros(self.n), |c| out.push(c.clone()))?;
        Ok(out)
    }
}

/// Visits `start + span(rows of g)` once each, flipping one row per step.
pub fn gray_walk(g: &BitMatrix, start: BitVec, f: &mut impl FnMut(&BitVec)) {
    let mut v = start;
    f(&v);
    let total: u64 = 1u64 << g.rows();
    for i in 1..total {
        v.xor_assign(g.row(i.trailing_zeros() as usize));
        f(&v);
    }
}

/// A uniformly random `[n, k]` code, deterministic in `seed`.
pub fn random_code(n: usize, k: usize, seed: u64) -> Result<LinearCode> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_code_with(n, k, &mut rng)
}

pub fn random_code_with<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<LinearCode> {
    if k == 0 || k >= n {
        return Err(invalid(format!("need 0 < k < n, got n = {n}, k = {k}")));
    }
    if n > MAX_N {
        return Err(invalid(format!("n = {n} exceeds {MAX_N}")));
    }
    for _ in 0..100 {
        let g = BitMatrix::random(k, n, rng);
        if let Ok(c) = LinearCode::from_generator(g) {
            return Ok(c);
        }
    }
    Err(Error::Internal("no full-rank generator after 100 draws".into()))
}

/// Splits the positions into `P` (size `s`) and its complement `N`, both sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub p: Vec<usize>,
    pub n: Vec<usize>,
}

impl Partition {
    pub fn new(len: usize, mut p: Vec<usize>) -> Result<Self> {
        p.sort_unstable();
        p.dedup();
        if p.last().is_some_and(|&i| i >= len) {
            return Err(invalid("partition index out of range"));
        }
        let n = complement(len, &p);
        Ok(Partition { p, n })
    }

    pub fn random<R: Rng + ?Sized>(len: usize, s: usize, rng: &mut R) -> Result<Self> {
        if s > len {
            return Err(invalid(format!("s = {s} exceeds n = {len}")));
        }
        let mut idx: Vec<usize> = (0..len).collect();
        idx.shuffle(rng);
        idx.truncate(s);
        Partition::new(len, idx)
    }

    pub fn len(&self) -> usize {
        self.p.len() + self.n.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn s(&self) -> usize {
        self.p.len()
    }

    /// Reassembles a word from its `P` and `N` parts.
    pub fn join(&self, xp: &BitVec, xn: &BitVec) -> BitVec {
        let mut v = xp.scatter(&self.p, self.len());
        v.xor_assign(&xn.scatter(&self.n, self.len()));
        v
    }
}

fn complement(len: usize, idx: &[usize]) -> Vec<usize> {
    let mut mark = vec![false; len];
    for &i in idx {
        mark[i] = true;
    }
    (0..len).filter(|&i| !mark[i]).collect()
}

/// `G' = [[I_s, R], [0, R']]` after placing the `P` columns first.
///
/// Every dual word satisfies `h_P = R·h_Nᵀ` and `R'·h_Nᵀ = 0`, and the
/// shortened code `C^N` is generated by `R'`.
#[derive(Clone, Debug)]
pub struct SystematicForm {
    pub r: BitMatrix,
    pub r_prime: BitMatrix,
    pub column_order: Vec<usize>,
}

pub fn systematic_form(code: &LinearCode, part: &Partition) -> Result<SystematicForm> {
    let s = part.s();
    if part.len() != code.n() {
        return Err(invalid("partition length differs from code length"));
    }
    if s > code.k() {
        return Err(Error::RankDeficient);
    }
    let mut order = part.p.clone();
    order.extend_from_slice(&part.n);
    let g = code.generator().select_columns(&order);
    let p_cols: Vec<usize> = (0..s).collect();
    let (red, piv) = g.rref_in_order(&p_cols);
    if piv.len() < s {
        return Err(Error::RankDeficient);
    }
    let n_cols: Vec<usize> = (s..code.n()).collect();
    let top: Vec<usize> = (0..s).collect();
    let bottom: Vec<usize> = (s..code.k()).collect();
    Ok(SystematicForm {
        r: red.select_rows(&top).select_columns(&n_cols),
        r_prime: red.select_rows(&bottom).select_columns(&n_cols),
        column_order: order,
    })
}

impl SystematicForm {
    pub fn s(&self) -> usize {
        self.r.rows()
    }

    /// `h_P` determined by `h_N` for a dual word.
    pub fn dual_p_part(&self, h_n: &BitVec) -> BitVec {
        self.r.mul_vec(h_n)
    }

    /// The shortened code `C^N`, generated by `R'`.
    pub fn shortened_code(&self) -> LinearCode {
        LinearCode::from_generator(self.r_prime.clone()).expect("R' has full rank")
    }
}

/// Entry `i` counts the words of weight `i` in `x + C`.
pub fn coset_weight_enumerator(code: &LinearCode, x: &BitVec) -> Result<Vec<u64>> {
    let mut counts = vec![0u64; code.n() + 1];
    code.for_each_coset_word(x, |c| counts[c.weight()] += 1)?;
    Ok(counts)
}

/// Largest `d` with `2^k · |B_d| < 2^n`, or 0 when no `d` qualifies.
pub fn gv_distance(n: usize, k: usize) -> usize {
    let target = pow2(n as u32);
    let scale = pow2(k as u32);
    let mut ball = BigUint::from(0u32);
    let mut best = 0;
    for d in 0..=n {
        ball += binomial(n as u64, d as u64);
        if &scale * &ball < target {
            best = d;
        } else {
            break;
        }
    }
    best
}

/// `y = c + e` with the error possibly known.
#[derive(Clone, Debug)]
pub struct DecodingInstance {
    pub code: LinearCode,
    pub y: BitVec,
    pub t: usize,
    pub e: Option<BitVec>,
}

impl DecodingInstance {
    pub fn new(code: LinearCode, y: BitVec, t: usize) -> Result<Self> {
        if y.len() != code.n() || t > code.n() {
            return Err(invalid("received word length or weight out of range"));
        }
        Ok(DecodingInstance {
            code,
            y,
            t,
            e: None,
        })
    }

    /// Uniform codeword plus a uniform error of weight exactly `t`.
    pub fn planted<R: Rng + ?Sized>(code: LinearCode, t: usize, rng: &mut R) -> Self {
        let e = BitVec::random_weight(code.n(), t, rng);
        DecodingInstance::planted_with_error(code, e, rng)
    }

    pub fn planted_with_error<R: Rng + ?Sized>(code: LinearCode, e: BitVec, rng: &mut R) -> Self {
        let m = BitVec::random(code.k(), rng);
        let mut y = code.encode(&m);
        y.xor_assign(&e);
        DecodingInstance {
            t: e.weight(),
            code,
            y,
            e: Some(e),
        }
    }

    /// `|e| = t` and `y - e ∈ C`.
    pub fn is_solution(&self, e: &BitVec) -> bool {
        e.len() == self.code.n() && e.weight() == self.t && self.code.contains(&self.y.xor(e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hamming74() -> LinearCode {
        let rows = [
            [1, 0, 0, 0, 1, 1, 0],
            [0, 1, 0, 0, 1, 0, 1],
            [0, 0, 1, 0, 0, 1, 1],
            [0, 0, 0, 1, 1, 1, 1],
        ];
        let g = BitMatrix::from_rows(7, rows.iter().map(|r| BitVec::from_bits(r)).collect());
        LinearCode::from_generator(g).unwrap()
    }

    #[test]
    fn random_code_rejects_bad_dims() {
        assert!(random_code(4, 4, 0).is_err());
        assert!(random_code(4, 0, 0).is_err());
    }

    #[test]
    fn random_code_is_deterministic() {
        let a = random_code(10, 5, 1).unwrap();
        let b = random_code(10, 5, 1).unwrap();
        assert_eq!(a.generator(), b.generator());
    }

    #[test]
    fn generator_and_parity_check_are_orthogonal() {
        let c = random_code(60, 30, 7).unwrap();
        assert!(c.generator().mul(&c.parity_check().transpose()).is_zero());
        assert_eq!(c.parity_check().rank(), 30);
        assert_eq!(c.generator().rank(), 30);
    }

    #[test]
    fn hamming_weight_enumerator() {
        let c = hamming74();
        assert_eq!(
            coset_weight_enumerator(&c, &BitVec::zeros(7)).unwrap(),
            vec![1, 0, 0, 7, 7, 0, 0, 1]
        );
    }

    #[test]
    fn trivial_enumerators() {
        let zero = LinearCode::from_generator(BitMatrix::zeros(0, 5)).unwrap();
        assert_eq!(
            coset_weight_enumerator(&zero, &BitVec::zeros(5)).unwrap(),
            vec![1, 0, 0, 0, 0, 0]
        );
        let full = LinearCode::full_space(6);
        let x = BitVec::from_bits(&[1, 0, 1, 1, 0, 0]);
        let want: Vec<u64> = (0..=6).map(|i| binomial(6, i).try_into().unwrap()).collect();
        assert_eq!(coset_weight_enumerator(&full, &x).unwrap(), want);
    }

    #[test]
    fn gv_values() {
        assert_eq!(gv_distance(60, 30), 7);
        assert_eq!(gv_distance(5, 5), 0);
        assert_eq!(gv_distance(40, 20), 5);
    }

    #[test]
    fn systematic_form_relations_hold_on_whole_dual() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for seed in 0..20 {
            let code = random_code(12, 6, seed).unwrap();
            let part = Partition::random(12, 4, &mut rng).unwrap();
            let Ok(sf) = systematic_form(&code, &part) else {
                continue;
            };
            for h in code.dual().codewords().unwrap() {
                let hp = h.restrict(&part.p);
                let hn = h.restrict(&part.n);
                assert_eq!(sf.dual_p_part(&hn), hp);
                assert!(sf.r_prime.mul_vec(&hn).is_zero());
            }
        }
    }

    #[test]
    fn systematic_form_of_identity_code() {
        let code = LinearCode::full_space(6);
        let part = Partition::new(6, vec![0, 1, 2]).unwrap();
        let sf = systematic_form(&code, &part).unwrap();
        assert!(sf.r.is_zero());
        assert_eq!(sf.r_prime, BitMatrix::identity(3));
    }

    #[test]
    fn duplicated_columns_are_rank_deficient() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut g = BitMatrix::random(4, 8, &mut rng);
        for i in 0..4 {
            let b = g.get(i, 0);
            g.set(i, 1, b);
        }
        g.set(0, 7, !g.get(0, 7));
        let Ok(code) = LinearCode::from_generator(g) else {
            return;
        };
        let part = Partition::new(8, vec![0, 1]).unwrap();
        assert_eq!(systematic_form(&code, &part).unwrap_err(), Error::RankDeficient);
    }

    #[test]
    fn shortened_code_matches_r_prime() {
        let code = random_code(14, 8, 5).unwrap();
        let part = Partition::new(14, vec![1, 4, 6, 9]).unwrap();
        let sf = systematic_form(&code, &part).unwrap();
        let mut a = code.shorten(&part.n).codewords().unwrap();
        let mut b = sf.shortened_code().codewords().unwrap();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn planted_instance_is_solution() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let code = random_code(30, 15, 3).unwrap();
        let inst = DecodingInstance::planted(code, 4, &mut rng);
        assert!(inst.is_solution(inst.e.as_ref().unwrap()));
    }
}

//! The LPN sample set: dual words of weight `w` on `N`, paired with every
//! auxiliary codeword at distance exactly `t_aux` from their `P` part.

use std::collections::HashMap;
use std::io::{Read, Write};

use num_bigint::BigUint;
use rand::Rng;

use crate::bits::{BitMatrix, BitVec};
use crate::codes::{gray_walk, systematic_form, LinearCode, Partition, SystematicForm};
use crate::error::{budget, invalid, Error, Result};
use crate::math::{binomial, Combinations};

/// Largest syndrome table, in entries, per auxiliary block.
pub const AUX_TABLE_BUDGET: u64 = 1 << 26;
/// Largest `n - k` walked by the Gray-code strategy.
pub const GRAY_MAX_CODIM: usize = 34;
/// Largest number of supports walked by the support strategy.
pub const SUPPORT_BUDGET: u64 = 1 << 34;

pub const SAMPLE_FILE_MAGIC: &[u8; 8] = b"DRLPNSMP";
pub const SAMPLE_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AuxStructure {
    /// One random `[s, k_aux]` code.
    Single,
    /// Direct product of `blocks` small random codes, each decoded at `t_aux / blocks`.
    Product { blocks: usize },
}

#[derive(Clone, Debug)]
struct AuxBlock {
    offset: usize,
    len: usize,
    t: usize,
    // Syndrome of each coordinate, as packed bits.
    col_syndromes: Vec<u64>,
    table: HashMap<u64, Vec<u64>>,
}

impl AuxBlock {
    fn new(code: &LinearCode, offset: usize, t: usize) -> Result<Self> {
        let len = code.n();
        let h = code.parity_check();
        if len > 64 || h.rows() > 64 {
            return Err(budget("auxiliary block length", len, 64));
        }
        let entries = binomial(len as u64, t as u64);
        if entries > BigUint::from(AUX_TABLE_BUDGET) {
            return Err(budget("auxiliary syndrome table", entries, AUX_TABLE_BUDGET));
        }
        let ht = h.transpose();
        let col_syndromes: Vec<u64> = (0..len).map(|i| ht.row(i).to_u64()).collect();
        let mut table: HashMap<u64, Vec<u64>> = HashMap::new();
        let mut comb = Combinations::new(len, t);
        while let Some(idx) = comb.next_ref() {
            let mut e = 0u64;
            let mut syn = 0u64;
            for &i in idx {
                e |= 1 << i;
                syn ^= col_syndromes[i];
            }
            table.entry(syn).or_default().push(e);
        }
        Ok(AuxBlock {
            offset,
            len,
            t,
            col_syndromes,
            table,
        })
    }

    fn syndrome(&self, z: u64) -> u64 {
        let mut syn = 0;
        let mut z = z;
        while z != 0 {
            syn ^= self.col_syndromes[z.trailing_zeros() as usize];
            z &= z - 1;
        }
        syn
    }

    fn decode(&self, z: u64) -> impl Iterator<Item = u64> + '_ {
        self.table
            .get(&self.syndrome(z))
            .into_iter()
            .flatten()
            .map(move |e| z ^ e)
    }
}

/// An `[s, k_aux]` code list-decoded at distance exactly `t_aux` by syndrome lookup.
#[derive(Clone, Debug)]
pub struct AuxCode {
    pub s: usize,
    pub k_aux: usize,
    pub t_aux: usize,
    pub code: LinearCode,
    pub structure: AuxStructure,
    blocks: Vec<AuxBlock>,
}

fn random_full_rank<R: Rng + ?Sized>(k: usize, n: usize, rng: &mut R) -> Result<LinearCode> {
    for _ in 0..100 {
        if let Ok(c) = LinearCode::from_generator(BitMatrix::random(k, n, rng)) {
            return Ok(c);
        }
    }
    Err(Error::Internal("no full-rank auxiliary generator after 100 draws".into()))
}

fn balanced_split(total: usize, parts: usize) -> Vec<usize> {
    (0..parts)
        .map(|i| total / parts + usize::from(i < total % parts))
        .collect()
}

impl AuxCode {
    pub fn random<R: Rng + ?Sized>(
        s: usize,
        k_aux: usize,
        t_aux: usize,
        structure: AuxStructure,
        rng: &mut R,
    ) -> Result<Self> {
        if k_aux > s || t_aux > s {
            return Err(invalid(format!("auxiliary code needs k_aux, t_aux <= s = {s}")));
        }
        match structure {
            AuxStructure::Single => {
                let code = random_full_rank(k_aux, s, rng)?;
                AuxCode::from_code(code, t_aux)
            }
            AuxStructure::Product { blocks } => {
                if blocks == 0 || blocks > s || !t_aux.is_multiple_of(blocks) {
                    return Err(invalid(format!(
                        "product structure needs 1 <= blocks <= s and blocks | t_aux, got blocks = {blocks}"
                    )));
                }
                let lens = balanced_split(s, blocks);
                let dims = balanced_split(k_aux, blocks);
                let codes = lens
                    .iter()
                    .zip(&dims)
                    .map(|(&l, &d)| random_full_rank(d, l, rng))
                    .collect::<Result<Vec<_>>>()?;
                AuxCode::from_product(codes, t_aux / blocks)
            }
        }
    }

    pub fn from_code(code: LinearCode, t_aux: usize) -> Result<Self> {
        let block = AuxBlock::new(&code, 0, t_aux)?;
        Ok(AuxCode {
            s: code.n(),
            k_aux: code.k(),
            t_aux,
            code,
            structure: AuxStructure::Single,
            blocks: vec![block],
        })
    }

    /// Direct product; each component is decoded at exactly `t_block`.
    pub fn from_product(codes: Vec<LinearCode>, t_block: usize) -> Result<Self> {
        let s: usize = codes.iter().map(LinearCode::n).sum();
        let k: usize = codes.iter().map(LinearCode::k).sum();
        let mut g = BitMatrix::zeros(k, s);
        let (mut ro, mut co) = (0, 0);
        let mut blocks = Vec::new();
        for c in &codes {
            for i in 0..c.k() {
                for j in c.generator().row(i).iter_ones() {
                    g.set(ro + i, co + j, true);
                }
            }
            blocks.push(AuxBlock::new(c, co, t_block)?);
            ro += c.k();
            co += c.n();
        }
        Ok(AuxCode {
            s,
            k_aux: k,
            t_aux: t_block * codes.len(),
            code: LinearCode::from_generator(g)?,
            structure: AuxStructure::Product {
                blocks: codes.len(),
            },
            blocks,
        })
    }

    pub fn generator(&self) -> &BitMatrix {
        self.code.generator()
    }

    /// Block boundaries as `(offset, len, t)`.
    pub fn block_layout(&self) -> Vec<(usize, usize, usize)> {
        self.blocks.iter().map(|b| (b.offset, b.len, b.t)).collect()
    }

    /// All `c ∈ C_aux` with `|c + z| = t_aux` (block-wise distances for products), sorted.
    pub fn decode(&self, z: &BitVec) -> Vec<BitVec> {
        assert_eq!(z.len(), self.s);
        let mut partial: Vec<BitVec> = vec![BitVec::zeros(self.s)];
        for b in &self.blocks {
            let zb = z.restrict(&(b.offset..b.offset + b.len).collect::<Vec<_>>()).to_u64();
            let words: Vec<u64> = b.decode(zb).collect();
            let mut next = Vec::with_capacity(partial.len() * words.len());
            for p in &partial {
                for &c in &words {
                    let mut v = p.clone();
                    for i in BitVec::from_u64(b.len, c).iter_ones() {
                        v.set(b.offset + i, true);
                    }
                    next.push(v);
                }
            }
            partial = next;
            if partial.is_empty() {
                break;
            }
        }
        partial.sort();
        partial
    }

    /// Fast path for `s ≤ 64` and a single block, on packed words.
    fn decode_packed(&self, z: u64, out: &mut Vec<u64>) {
        out.clear();
        out.extend(self.blocks[0].decode(z));
    }
}

/// `aux_decode(aux, z)`: the list `{c ∈ C_aux : |c + z| = t_aux}`.
pub fn aux_decode(aux: &AuxCode, z: &BitVec) -> Vec<BitVec> {
    aux.decode(z)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualStrategy {
    /// Whichever of the two below walks fewer words.
    Auto,
    /// Walks weight-`w` supports on `N`, keeping those in the kernel of `R'`.
    Support,
    /// Walks all `2^{n-k}` dual words.
    GrayCode,
}

/// Per-block weight filter on `N` used with product auxiliary codes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NBlocks {
    pub lens: Vec<usize>,
    pub weight_each: usize,
}

impl NBlocks {
    pub fn balanced(n_len: usize, blocks: usize, w: usize) -> Result<Self> {
        if blocks == 0 || !w.is_multiple_of(blocks) || blocks > n_len {
            return Err(invalid(format!("cannot split weight {w} evenly over {blocks} blocks")));
        }
        Ok(NBlocks {
            lens: balanced_split(n_len, blocks),
            weight_each: w / blocks,
        })
    }

    pub fn accepts(&self, h_n: &BitVec) -> bool {
        let mut start = 0;
        for &l in &self.lens {
            let wt = (start..start + l).filter(|&i| h_n.get(i)).count();
            if wt != self.weight_each {
                return false;
            }
            start += l;
        }
        true
    }
}

fn support_cost(part: &Partition, w: usize) -> BigUint {
    binomial(part.n.len() as u64, w as u64)
}

/// Every `h ∈ C^⊥` with `|h_N| = w`, sorted.
pub fn enumerate_dual_low_weight(code: &LinearCode, part: &Partition, w: usize) -> Result<Vec<BitVec>> {
    enumerate_dual_low_weight_with(code, part, w, DualStrategy::Auto, None)
}

pub fn enumerate_dual_low_weight_with(
    code: &LinearCode,
    part: &Partition,
    w: usize,
    strategy: DualStrategy,
    filter: Option<&NBlocks>,
) -> Result<Vec<BitVec>> {
    if part.len() != code.n() {
        return Err(invalid("partition length differs from code length"));
    }
    let codim = code.n() - code.k();
    let sys = systematic_form(code, part);
    let strategy = match strategy {
        DualStrategy::Auto => {
            let gray_ok = codim <= GRAY_MAX_CODIM;
            match &sys {
                Ok(_) if !gray_ok || support_cost(part, w) <= BigUint::from(1u64) << codim => {
                    DualStrategy::Support
                }
                _ => DualStrategy::GrayCode,
            }
        }
        s => s,
    };
    let mut out = match strategy {
        DualStrategy::Support => enumerate_by_support(&sys?, part, w, filter)?,
        _ => enumerate_by_gray(code, part, w, filter)?,
    };
    out.sort();
    Ok(out)
}

fn enumerate_by_support(
    sys: &SystematicForm,
    part: &Partition,
    w: usize,
    filter: Option<&NBlocks>,
) -> Result<Vec<BitVec>> {
    let m = part.n.len();
    let cost = support_cost(part, w);
    if cost > BigUint::from(SUPPORT_BUDGET) {
        return Err(budget("support enumeration", cost, SUPPORT_BUDGET));
    }
    // Column i of R' and of R.
    let rpt = sys.r_prime.transpose();
    let rt = sys.r.transpose();
    let mut out = Vec::new();
    let mut comb = Combinations::new(m, w);
    let keep = |idx: &[usize], out: &mut Vec<BitVec>| {
        let h_n = BitVec::from_indices(m, idx);
        if filter.is_some_and(|f| !f.accepts(&h_n)) {
            return;
        }
        let mut h_p = BitVec::zeros(sys.s());
        for &i in idx {
            h_p.xor_assign(rt.row(i));
        }
        out.push(part.join(&h_p, &h_n));
    };
    if rpt.cols() <= 64 {
        let cols: Vec<u64> = (0..m).map(|i| rpt.row(i).to_u64()).collect();
        while let Some(idx) = comb.next_ref() {
            if idx.iter().fold(0u64, |a, &i| a ^ cols[i]) == 0 {
                keep(idx, &mut out);
            }
        }
    } else {
        let mut acc = BitVec::zeros(rpt.cols());
        while let Some(idx) = comb.next_ref() {
            acc.clear();
            for &i in idx {
                acc.xor_assign(rpt.row(i));
            }
            if acc.is_zero() {
                keep(idx, &mut out);
            }
        }
    }
    Ok(out)
}

fn enumerate_by_gray(
    code: &LinearCode,
    part: &Partition,
    w: usize,
    filter: Option<&NBlocks>,
) -> Result<Vec<BitVec>> {
    let codim = code.n() - code.k();
    if codim > GRAY_MAX_CODIM {
        return Err(budget("Gray-code dual enumeration codimension", codim, GRAY_MAX_CODIM));
    }
    let n_mask = BitVec::from_indices(code.n(), &part.n);
    let mut out = Vec::new();
    gray_walk(code.parity_check(), BitVec::zeros(code.n()), &mut |h: &BitVec| {
        let wt: usize = h
            .words()
            .iter()
            .zip(n_mask.words())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum();
        if wt == w && filter.is_none_or(|f| f.accepts(&h.restrict(&part.n))) {
            out.push(h.clone());
        }
    });
    Ok(out)
}

/// The pairs `(h, c_aux)` of one partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleSet {
    pub n: usize,
    pub k: usize,
    pub partition: Partition,
    pub w: usize,
    pub t_aux: usize,
    pub pairs: Vec<(BitVec, BitVec)>,
    /// True when `pairs` is the whole of `H̃`.
    pub complete: bool,
    /// `|H̃|` before any subsampling.
    pub total: usize,
}

impl SampleSet {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Uniform subset of `budget` pairs without replacement; unchanged if already small enough.
    pub fn subsample<R: Rng + ?Sized>(&self, budget: usize, rng: &mut R) -> SampleSet {
        if budget >= self.pairs.len() {
            return self.clone();
        }
        let mut idx: Vec<usize> = rand::seq::index::sample(rng, self.pairs.len(), budget).into_vec();
        idx.sort_unstable();
        SampleSet {
            pairs: idx.into_iter().map(|i| self.pairs[i].clone()).collect(),
            complete: false,
            ..self.clone()
        }
    }

    /// Binary layout: magic, `format_version` (u32), then `n, k, s, w, t_aux,
    /// count, total` (u64), `complete` (u8), the `s` positions of `P` (u32),
    /// and finally `count` records of packed `h` then packed `c_aux`. All
    /// integers little-endian; bits packed little-endian within bytes.
    pub fn write_to<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        out.write_all(SAMPLE_FILE_MAGIC)?;
        out.write_all(&SAMPLE_FORMAT_VERSION.to_le_bytes())?;
        for v in [
            self.n,
            self.k,
            self.partition.s(),
            self.w,
            self.t_aux,
            self.pairs.len(),
            self.total,
        ] {
            out.write_all(&(v as u64).to_le_bytes())?;
        }
        out.write_all(&[u8::from(self.complete)])?;
        for &p in &self.partition.p {
            out.write_all(&(p as u32).to_le_bytes())?;
        }
        for (h, c) in &self.pairs {
            out.write_all(&h.to_bytes())?;
            out.write_all(&c.to_bytes())?;
        }
        Ok(())
    }

    pub fn read_from<R: Read>(input: &mut R) -> Result<SampleSet> {
        let io = |e: std::io::Error| Error::Format(e.to_string());
        let mut magic = [0u8; 8];
        input.read_exact(&mut magic).map_err(io)?;
        if &magic != SAMPLE_FILE_MAGIC {
            return Err(Error::Format("bad magic".into()));
        }
        let mut b4 = [0u8; 4];
        input.read_exact(&mut b4).map_err(io)?;
        let version = u32::from_le_bytes(b4);
        if version != SAMPLE_FORMAT_VERSION {
            return Err(Error::Format(format!("unsupported format_version {version}")));
        }
        let mut hdr = [0usize; 7];
        for v in hdr.iter_mut() {
            let mut b8 = [0u8; 8];
            input.read_exact(&mut b8).map_err(io)?;
            *v = u64::from_le_bytes(b8) as usize;
        }
        let [n, k, s, w, t_aux, count, total] = hdr;
        if s > n || k > n {
            return Err(Error::Format("inconsistent header".into()));
        }
        let mut flag = [0u8; 1];
        input.read_exact(&mut flag).map_err(io)?;
        let mut p = Vec::with_capacity(s);
        for _ in 0..s {
            input.read_exact(&mut b4).map_err(io)?;
            p.push(u32::from_le_bytes(b4) as usize);
        }
        let partition = Partition::new(n, p).map_err(|e| Error::Format(e.to_string()))?;
        if partition.s() != s {
            return Err(Error::Format("repeated partition index".into()));
        }
        let mut pairs = Vec::with_capacity(count.min(1 << 24));
        let (hb, cb) = (n.div_ceil(8), s.div_ceil(8));
        let mut buf = vec![0u8; hb + cb];
        for _ in 0..count {
            input.read_exact(&mut buf).map_err(io)?;
            let h = BitVec::from_bytes(n, &buf[..hb]).ok_or_else(|| Error::Format("padding bits set".into()))?;
            let c = BitVec::from_bytes(s, &buf[hb..]).ok_or_else(|| Error::Format("padding bits set".into()))?;
            pairs.push((h, c));
        }
        Ok(SampleSet {
            n,
            k,
            partition,
            w,
            t_aux,
            pairs,
            complete: flag[0] != 0,
            total,
        })
    }
}

/// `H̃ = ∪_h {h} × Dec(h_P)`, sorted; product aux codes also filter `h_N` block-wise.
pub fn build_sample_set(code: &LinearCode, part: &Partition, w: usize, aux: &AuxCode) -> Result<SampleSet> {
    build_sample_set_with(code, part, w, aux, DualStrategy::Auto)
}

pub fn build_sample_set_with(
    code: &LinearCode,
    part: &Partition,
    w: usize,
    aux: &AuxCode,
    strategy: DualStrategy,
) -> Result<SampleSet> {
    if aux.s != part.s() {
        return Err(invalid(format!("aux length {} differs from |P| = {}", aux.s, part.s())));
    }
    let filter = match aux.structure {
        AuxStructure::Single => None,
        AuxStructure::Product { blocks } => Some(NBlocks::balanced(part.n.len(), blocks, w)?),
    };
    let duals = enumerate_dual_low_weight_with(code, part, w, strategy, filter.as_ref())?;
    let mut pairs = Vec::new();
    let packed = aux.s <= 64 && aux.blocks.len() == 1;
    let mut buf = Vec::new();
    for h in duals {
        let hp = h.restrict(&part.p);
        if packed {
            aux.decode_packed(hp.to_u64(), &mut buf);
            buf.sort_unstable_by_key(|&c| BitVec::from_u64(aux.s, c));
            for &c in &buf {
                pairs.push((h.clone(), BitVec::from_u64(aux.s, c)));
            }
        } else {
            for c in aux.decode(&hp) {
                pairs.push((h.clone(), c));
            }
        }
    }
    let total = pairs.len();
    Ok(SampleSet {
        n: code.n(),
        k: code.k(),
        partition: part.clone(),
        w,
        t_aux: aux.t_aux,
        pairs,
        complete: true,
        total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::random_code;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn brute_decode(aux: &AuxCode, z: &BitVec) -> Vec<BitVec> {
        let mut v: Vec<BitVec> = aux
            .code
            .codewords()
            .unwrap()
            .into_iter()
            .filter(|c| c.distance(z) == aux.t_aux)
            .collect();
        v.sort();
        v
    }

    #[test]
    fn aux_decode_zero_radius() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let aux = AuxCode::random(10, 4, 0, AuxStructure::Single, &mut rng).unwrap();
        let z = aux.code.encode(&BitVec::random(4, &mut rng));
        assert_eq!(aux.decode(&z), vec![z]);
    }

    #[test]
    fn aux_decode_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let aux = AuxCode::random(16, 8, 2, AuxStructure::Single, &mut rng).unwrap();
            for _ in 0..20 {
                let z = BitVec::random(16, &mut rng);
                assert_eq!(aux.decode(&z), brute_decode(&aux, &z));
            }
        }
    }

    #[test]
    fn empty_decoding_when_cosets_are_far() {
        // Repetition-like code with minimum distance 6: weight-2 words never decode to 0's coset.
        let g = BitMatrix::from_rows(6, vec![BitVec::ones(6)]);
        let aux = AuxCode::from_code(LinearCode::from_generator(g).unwrap(), 2).unwrap();
        assert!(aux.decode(&BitVec::zeros(6)).is_empty());
    }

    #[test]
    fn product_decoding_is_blockwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let aux = AuxCode::random(12, 6, 2, AuxStructure::Product { blocks: 2 }, &mut rng).unwrap();
        assert_eq!(aux.k_aux, 6);
        for _ in 0..20 {
            let z = BitVec::random(12, &mut rng);
            for c in aux.decode(&z) {
                assert!(aux.code.contains(&c));
                for (off, len, t) in aux.block_layout() {
                    let d = (off..off + len).filter(|&i| c.get(i) != z.get(i)).count();
                    assert_eq!(d, t);
                }
            }
        }
    }

    #[test]
    fn strategies_agree_with_full_dual_filter() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for seed in 0..10 {
            let code = random_code(12, 6, seed).unwrap();
            let part = Partition::random(12, 4, &mut rng).unwrap();
            if systematic_form(&code, &part).is_err() {
                continue;
            }
            let all = code.dual().codewords().unwrap();
            for w in 0..=8 {
                let mut want: Vec<BitVec> = all
                    .iter()
                    .filter(|h| h.restrict(&part.n).weight() == w)
                    .cloned()
                    .collect();
                want.sort();
                for st in [DualStrategy::Support, DualStrategy::GrayCode, DualStrategy::Auto] {
                    assert_eq!(enumerate_dual_low_weight_with(&code, &part, w, st, None).unwrap(), want);
                }
            }
        }
    }

    #[test]
    fn sample_set_matches_double_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let code = random_code(14, 7, 9).unwrap();
        let part = loop {
            let p = Partition::random(14, 6, &mut rng).unwrap();
            if systematic_form(&code, &p).is_ok() {
                break p;
            }
        };
        let aux = AuxCode::random(6, 3, 1, AuxStructure::Single, &mut rng).unwrap();
        let set = build_sample_set(&code, &part, 3, &aux).unwrap();
        let mut brute = Vec::new();
        for h in code.dual().codewords().unwrap() {
            if h.restrict(&part.n).weight() != 3 {
                continue;
            }
            for c in aux.code.codewords().unwrap() {
                if h.restrict(&part.p).distance(&c) == 1 {
                    brute.push((h.clone(), c));
                }
            }
        }
        brute.sort();
        assert_eq!(set.pairs, brute);
        assert!(set.complete);
    }

    #[test]
    fn serialization_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let code = random_code(20, 10, 1).unwrap();
        let part = loop {
            let p = Partition::random(20, 6, &mut rng).unwrap();
            if systematic_form(&code, &p).is_ok() {
                break p;
            }
        };
        let aux = AuxCode::random(6, 3, 1, AuxStructure::Single, &mut rng).unwrap();
        let set = build_sample_set(&code, &part, 4, &aux).unwrap();
        let mut buf = Vec::new();
        set.write_to(&mut buf).unwrap();
        let back = SampleSet::read_from(&mut buf.as_slice()).unwrap();
        assert_eq!(back, set);
        buf[0] ^= 1;
        assert!(SampleSet::read_from(&mut buf.as_slice()).is_err());
    }

    #[test]
    fn subsample_keeps_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let code = random_code(24, 12, 2).unwrap();
        let part = loop {
            let p = Partition::random(24, 8, &mut rng).unwrap();
            if systematic_form(&code, &p).is_ok() {
                break p;
            }
        };
        let aux = AuxCode::random(8, 4, 2, AuxStructure::Single, &mut rng).unwrap();
        let set = build_sample_set(&code, &part, 4, &aux).unwrap();
        let sub = set.subsample(set.len() / 2, &mut rng);
        assert_eq!(sub.len(), set.len() / 2);
        assert!(!sub.complete);
        assert_eq!(sub.total, set.len());
        assert!(sub.pairs.iter().all(|p| set.pairs.binary_search(p).is_ok()));
    }
}

//! Dense vectors and matrices over GF(2), packed 64 bits per word.
//!
//! Bit `i` of a vector lives in word `i / 64` at position `i % 64`. Padding
//! bits past `len` are always zero, so word-level equality and hashing are
//! exact.

use std::cmp::Ordering;
use std::fmt;

use rand::Rng;

const WORD: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BitVec {
            len,
            words: vec![!0; words_for(len)],
        };
        v.clear_padding();
        v
    }

    /// Builds a vector from `bits[i] != 0`.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_indices(len: usize, ones: &[usize]) -> Self {
        let mut v = BitVec::zeros(len);
        for &i in ones {
            v.set(i, true);
        }
        v
    }

    /// Low `len` bits of `value`, bit `i` of the vector being bit `i` of the integer.
    pub fn from_u64(len: usize, value: u64) -> Self {
        assert!(len <= WORD, "from_u64 needs len <= 64");
        let mut v = BitVec::zeros(len);
        if len > 0 {
            v.words[0] = value;
            v.clear_padding();
        }
        v
    }

    pub fn from_words(len: usize, words: Vec<u64>) -> Self {
        assert_eq!(words.len(), words_for(len));
        let mut v = BitVec { len, words };
        v.clear_padding();
        v
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let words = (0..words_for(len)).map(|_| rng.random::<u64>()).collect();
        BitVec::from_words(len, words)
    }

    /// Uniform vector of exactly weight `w`.
    pub fn random_weight<R: Rng + ?Sized>(len: usize, w: usize, rng: &mut R) -> Self {
        assert!(w <= len);
        let idx = rand::seq::index::sample(rng, len, w);
        let mut v = BitVec::zeros(len);
        for i in idx.iter() {
            v.set(i, true);
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let m = 1u64 << (i % WORD);
        if b {
            self.words[i / WORD] |= m;
        } else {
            self.words[i / WORD] &= !m;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut v = self.clone();
        v.xor_assign(other);
        v
    }

    /// Inner product over GF(2).
    #[inline]
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch");
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() & 1 == 1
    }

    /// Weight of `self + other` without allocating.
    pub fn distance(&self, other: &BitVec) -> usize {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD + t)
                }
            })
        })
    }

    /// Coordinates at `idx`, in that order.
    pub fn restrict(&self, idx: &[usize]) -> BitVec {
        let mut v = BitVec::zeros(idx.len());
        for (j, &i) in idx.iter().enumerate() {
            if self.get(i) {
                v.set(j, true);
            }
        }
        v
    }

    /// Inverse of `restrict`: writes `self[j]` to position `idx[j]` of a zero vector of length `len`.
    pub fn scatter(&self, idx: &[usize], len: usize) -> BitVec {
        assert_eq!(idx.len(), self.len);
        let mut v = BitVec::zeros(len);
        for j in self.iter_ones() {
            v.set(idx[j], true);
        }
        v
    }

    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut v = BitVec::zeros(self.len + other.len);
        for i in self.iter_ones() {
            v.set(i, true);
        }
        for i in other.iter_ones() {
            v.set(self.len + i, true);
        }
        v
    }

    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= WORD, "to_u64 needs len <= 64");
        self.words.first().copied().unwrap_or(0)
    }

    /// Packs bits little-endian into `ceil(len/8)` bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        let nb = self.len.div_ceil(8);
        let mut out = Vec::with_capacity(nb);
        for i in 0..nb {
            out.push((self.words[i / 8] >> (8 * (i % 8))) as u8);
        }
        out
    }

    pub fn from_bytes(len: usize, bytes: &[u8]) -> Option<BitVec> {
        if bytes.len() != len.div_ceil(8) {
            return None;
        }
        let mut words = vec![0u64; words_for(len)];
        for (i, &b) in bytes.iter().enumerate() {
            words[i / 8] |= (b as u64) << (8 * (i % 8));
        }
        let v = BitVec { len, words };
        let mut c = v.clone();
        c.clear_padding();
        // Set padding bits mean a corrupt record.
        (c == v).then_some(v)
    }

    /// Lowercase hex of `to_bytes`.
    pub fn to_hex(&self) -> String {
        self.to_bytes().iter().map(|b| format!("{b:02x}")).collect()
    }

    fn clear_padding(&mut self) {
        let r = self.len % WORD;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec(")?;
        for i in 0..self.len {
            write!(f, "{}", self.get(i) as u8)?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", self.get(i) as u8)?;
        }
        Ok(())
    }
}

/// Lexicographic on coordinates 0, 1, ... with 0 < 1; shorter vectors first.
impl Ord for BitVec {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| {
            for (a, b) in self.words.iter().zip(&other.words) {
                let x = a ^ b;
                if x != 0 {
                    let t = x.trailing_zeros();
                    return if (a >> t) & 1 == 0 {
                        Ordering::Less
                    } else {
                        Ordering::Greater
                    };
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for BitVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows,
            cols,
            data: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i].set(i, true);
        }
        m
    }

    /// `cols` must be given explicitly so that zero-row matrices keep their width.
    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row length mismatch");
        }
        BitMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        BitMatrix {
            rows,
            cols,
            data: (0..rows).map(|_| BitVec::random(cols, rng)).collect(),
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &BitVec {
        &self.data[i]
    }

    pub fn row_vecs(&self) -> &[BitVec] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i].get(j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, b: bool) {
        self.data[i].set(j, b)
    }

    /// `M · vᵀ`, a vector with one bit per row.
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols);
        let mut out = BitVec::zeros(self.rows);
        for (i, r) in self.data.iter().enumerate() {
            if r.dot(v) {
                out.set(i, true);
            }
        }
        out
    }

    /// `v · M`, the XOR of the rows selected by `v`.
    pub fn vec_mul(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.rows);
        let mut out = BitVec::zeros(self.cols);
        for i in v.iter_ones() {
            out.xor_assign(&self.data[i]);
        }
        out
    }

    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows);
        BitMatrix {
            rows: self.rows,
            cols: other.cols,
            data: self.data.iter().map(|r| other.vec_mul(r)).collect(),
        }
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for (i, r) in self.data.iter().enumerate() {
            for j in r.iter_ones() {
                t.data[j].set(i, true);
            }
        }
        t
    }

    pub fn select_columns(&self, idx: &[usize]) -> BitMatrix {
        BitMatrix {
            rows: self.rows,
            cols: idx.len(),
            data: self.data.iter().map(|r| r.restrict(idx)).collect(),
        }
    }

    pub fn select_rows(&self, idx: &[usize]) -> BitMatrix {
        BitMatrix {
            rows: idx.len(),
            cols: self.cols,
            data: idx.iter().map(|&i| self.data[i].clone()).collect(),
        }
    }

    pub fn vstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        BitMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BitVec::is_zero)
    }

    /// Reduced row echelon form, searching pivots in the column order `order`.
    /// Returns the reduced matrix (zero rows last) and the pivot column of each
    /// leading row.
    pub fn rref_in_order(&self, order: &[usize]) -> (BitMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for &c in order {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.data[i].get(c)) else {
                continue;
            };
            m.data.swap(r, p);
            let pivot_row = m.data[r].clone();
            for i in 0..m.rows {
                if i != r && m.data[i].get(c) {
                    m.data[i].xor_assign(&pivot_row);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let order: Vec<usize> = (0..self.cols).collect();
        self.rref_in_order(&order)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis (as rows) of `{x : M·xᵀ = 0}`.
    pub fn kernel(&self) -> BitMatrix {
        let (m, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut x = BitVec::zeros(self.cols);
            x.set(f, true);
            for (r, &p) in pivots.iter().enumerate() {
                if m.data[r].get(f) {
                    x.set(p, true);
                }
            }
            basis.push(x);
        }
        BitMatrix::from_rows(self.cols, basis)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for r in &self.data {
            writeln!(f, "  {r}")?;
        }
        write!(f, "]")
    }
}

/// Solves `m · G = c` for a full-row-rank `G`, precomputing an information set.
#[derive(Clone, Debug)]
pub struct RowSpaceSolver {
    reduced: BitMatrix,
    pivots: Vec<usize>,
    // reduced = transform · G
    transform: BitMatrix,
}

impl RowSpaceSolver {
    /// `None` when `g` does not have full row rank.
    pub fn new(g: &BitMatrix) -> Option<Self> {
        let k = g.rows();
        // Augment with the identity to track the row operations.
        let aug_rows: Vec<BitVec> = (0..k)
            .map(|i| {
                let mut e = BitVec::zeros(k);
                e.set(i, true);
                g.row(i).concat(&e)
            })
            .collect();
        let aug = BitMatrix::from_rows(g.cols() + k, aug_rows);
        let order: Vec<usize> = (0..g.cols()).collect();
        let (red, pivots) = aug.rref_in_order(&order);
        if pivots.len() != k {
            return None;
        }
        let left: Vec<usize> = (0..g.cols()).collect();
        let right: Vec<usize> = (g.cols()..g.cols() + k).collect();
        Some(RowSpaceSolver {
            reduced: red.select_columns(&left),
            pivots,
            transform: red.select_columns(&right),
        })
    }

    /// The message `m` with `m · G = c`, or `None` if `c` is outside the row space.
    pub fn solve(&self, c: &BitVec) -> Option<BitVec> {
        let k = self.pivots.len();
        let mut mp = BitVec::zeros(k);
        for (i, &p) in self.pivots.iter().enumerate() {
            if c.get(p) {
                mp.set(i, true);
            }
        }
        if self.reduced.vec_mul(&mp) != *c {
            return None;
        }
        Some(self.transform.vec_mul(&mp))
    }
}

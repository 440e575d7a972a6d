#![allow(clippy::needless_range_loop)]

use dualrlpn::bits::{BitMatrix, BitVec};
use dualrlpn::codes::*;
use dualrlpn::krawtchouk::{character_sum_oracle, krawtchouk_exact, KrawtchoukTable};
use dualrlpn::math::binomial;
use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn code_strategy(max_n: usize) -> impl Strategy<Value = LinearCode> {
    (4..=max_n)
        .prop_flat_map(|n| (Just(n), 1..n, any::<u64>()))
        .prop_map(|(n, k, seed)| random_code(n, k, seed).unwrap())
}

fn bits(len: usize) -> impl Strategy<Value = BitVec> {
    proptest::collection::vec(0u8..2, len).prop_map(|b| BitVec::from_bits(&b))
}

/// Largest `d` with `2^k·|B_d| < 2^n`, from a running sum of binomials.
fn gv_oracle(n: usize, k: usize) -> usize {
    let mut ball = BigUint::from(0u32);
    let mut d = 0;
    for i in 0..=n {
        ball += binomial(n as u64, i as u64);
        if (ball.clone() << k) < (BigUint::from(1u32) << n) {
            d = i;
        } else {
            break;
        }
    }
    d
}

#[test]
fn gv_distance_matches_cumulative_binomials() {
    for n in 1..=80 {
        for k in 0..=n {
            assert_eq!(gv_distance(n, k), gv_oracle(n, k), "n = {n}, k = {k}");
        }
    }
    assert_eq!(gv_distance(40, 20), 5);
}

#[test]
fn puncture_and_shorten_are_dual() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..40 {
        let n = 8 + (rand::Rng::random_range(&mut rng, 0..7));
        let k = rand::Rng::random_range(&mut rng, 2..n - 1);
        let code = random_code_with(n, k, &mut rng).unwrap();
        let keep: Vec<usize> = (0..n).filter(|_| rand::Rng::random_bool(&mut rng, 0.6)).collect();
        if keep.len() < 2 {
            continue;
        }
        let mut lhs = code.puncture(&keep).dual().codewords().unwrap();
        let mut rhs = code.dual().shorten(&keep).codewords().unwrap();
        lhs.sort();
        rhs.sort();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn krawtchouk_identity_suite_small() {
    for n in 0..=20usize {
        let tables: Vec<Vec<BigInt>> = (0..=n)
            .map(|w| {
                let t = KrawtchoukTable::new(n, w).unwrap();
                (0..=n).map(|i| t.get(i).clone()).collect()
            })
            .collect();
        for w in 0..=n {
            assert_eq!(tables[w][0], BigInt::from(binomial(n as u64, w as u64)));
            let centered: BigInt = (0..=n).map(|i| BigInt::from(binomial(n as u64, i as u64)) * &tables[w][i]).sum();
            if w > 0 {
                assert_eq!(centered, BigInt::from(0));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generator_and_parity_check_are_orthogonal(code in code_strategy(40)) {
        let g = code.generator();
        let h = code.parity_check();
        prop_assert!(g.mul(&h.transpose()).is_zero());
        prop_assert_eq!(g.rank(), code.k());
        prop_assert_eq!(h.rank(), code.n() - code.k());
    }

    #[test]
    fn coset_enumerator_sums_to_code_size(code in code_strategy(14), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = BitVec::random(code.n(), &mut rng);
        let total: u64 = coset_weight_enumerator(&code, &x).unwrap().iter().sum();
        prop_assert_eq!(total, 1u64 << code.k());
    }

    #[test]
    fn systematic_form_relation_on_whole_dual(code in code_strategy(16), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = rand::Rng::random_range(&mut rng, 1..=code.k());
        let part = Partition::random(code.n(), s, &mut rng).unwrap();
        if let Ok(sys) = systematic_form(&code, &part) {
            for h in code.dual().codewords().unwrap() {
                let hp = h.restrict(&part.p);
                let hn = h.restrict(&part.n);
                prop_assert_eq!(sys.r.mul_vec(&hn), hp);
            }
        }
    }

    #[test]
    fn encode_then_syndrome_vanishes(code in code_strategy(40), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = BitVec::random(code.k(), &mut rng);
        let c = code.encode(&m);
        prop_assert!(code.contains(&c));
        prop_assert!(code.syndrome(&c).is_zero());
    }

    #[test]
    fn planted_instances_verify(code in code_strategy(40), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = rand::Rng::random_range(&mut rng, 0..=code.n() / 4);
        let inst = DecodingInstance::planted(code, t, &mut rng);
        let e = inst.e.clone().unwrap();
        prop_assert_eq!(e.weight(), t);
        prop_assert!(inst.is_solution(&e));
    }

    #[test]
    fn bitvec_xor_and_distance(a in bits(130), b in bits(130)) {
        prop_assert_eq!(a.xor(&b).weight(), a.distance(&b));
        prop_assert_eq!(a.xor(&b).xor(&b), a.clone());
        let back = BitVec::from_bytes(130, &a.to_bytes()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn kernel_spans_the_null_space(rows in 1usize..12, cols in 2usize..20, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = BitMatrix::random(rows, cols, &mut rng);
        let ker = m.kernel();
        prop_assert_eq!(ker.rows() + m.rank(), cols);
        prop_assert!(m.mul(&ker.transpose()).is_zero());
    }

    #[test]
    fn krawtchouk_reciprocity(n in 0usize..=64, a in 0usize..=64, b in 0usize..=64) {
        let (t, w) = (a % (n + 1), b % (n + 1));
        let lhs = BigInt::from(binomial(n as u64, t as u64)) * krawtchouk_exact(n, w, t).unwrap();
        let rhs = BigInt::from(binomial(n as u64, w as u64)) * krawtchouk_exact(n, t, w).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn krawtchouk_symmetries(n in 1usize..=48, a in 0usize..=48, b in 0usize..=48) {
        let (t, w) = (a % (n + 1), b % (n + 1));
        let k = krawtchouk_exact(n, w, t).unwrap();
        let sign = if w % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(krawtchouk_exact(n, w, n - t).unwrap(), k.clone() * sign);
        let sign_t = if t % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(krawtchouk_exact(n, n - w, t).unwrap(), k * sign_t);
    }

    #[test]
    fn character_sum_matches_krawtchouk(n in 1usize..=12, w in 0usize..=12, seed in any::<u64>()) {
        let w = w % (n + 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = BitVec::random(n, &mut rng);
        prop_assert_eq!(character_sum_oracle(&x, w).unwrap(), krawtchouk_exact(n, w, x.weight()).unwrap());
    }
}

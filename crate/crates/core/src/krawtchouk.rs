//! Exact Krawtchouk polynomials and their asymptotic exponent.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::bits::BitVec;
use crate::error::{budget, Error, Result};
use crate::math::{binomial, h2, Combinations};

pub const MAX_ORDER: usize = 4096;
/// Longest vector `character_sum_oracle` enumerates spheres in.
pub const ORACLE_MAX_LEN: usize = 18;

/// `K_w^{(n)}(t) = Σ_j (-1)^j C(t, j) C(n - t, w - j)`.
pub fn krawtchouk_exact(n: usize, w: usize, t: usize) -> Result<BigInt> {
    if n > MAX_ORDER || w > n || t > n {
        return Err(Error::Domain(format!(
            "krawtchouk needs w, t <= n <= {MAX_ORDER}, got n = {n}, w = {w}, t = {t}"
        )));
    }
    let mut acc = BigInt::zero();
    for j in 0..=w.min(t) {
        if w - j > n - t {
            continue;
        }
        let term = BigInt::from(binomial(t as u64, j as u64) * binomial((n - t) as u64, (w - j) as u64));
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// All values `K_w^{(n)}(t)` for `t = 0..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KrawtchoukTable {
    pub n: usize,
    pub w: usize,
    pub values: Vec<BigInt>,
}

impl KrawtchoukTable {
    /// Uses the three-term recurrence in `t`, whose divisions are exact.
    pub fn new(n: usize, w: usize) -> Result<Self> {
        let k0 = krawtchouk_exact(n, w, 0)?;
        let mut values = Vec::with_capacity(n + 1);
        values.push(k0);
        if n >= 1 {
            values.push(krawtchouk_exact(n, w, 1)?);
        }
        let nn = BigInt::from(n as i64 - 2 * w as i64);
        for t in 1..n {
            let next = (&nn * &values[t] - BigInt::from(t) * &values[t - 1]) / BigInt::from(n - t);
            values.push(next);
        }
        Ok(KrawtchoukTable { n, w, values })
    }

    pub fn get(&self, t: usize) -> &BigInt {
        &self.values[t]
    }

    /// Values converted to floating point, for Monte-Carlo statistics.
    pub fn to_f64(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.values.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

/// `Σ_{|y| = w} (-1)^{⟨x, y⟩}` by enumerating the sphere.
pub fn character_sum_oracle(x: &BitVec, w: usize) -> Result<BigInt> {
    let n = x.len();
    if n > ORACLE_MAX_LEN {
        return Err(budget("character sum length", n, ORACLE_MAX_LEN));
    }
    if w > n {
        return Ok(BigInt::zero());
    }
    let xm = x.to_u64();
    let mut acc: i64 = 0;
    let mut comb = Combinations::new(n, w);
    while let Some(idx) = comb.next_ref() {
        let y: u64 = idx.iter().fold(0, |a, &i| a | (1 << i));
        if (xm & y).count_ones().is_multiple_of(2) {
            acc += 1;
        } else {
            acc -= 1;
        }
    }
    Ok(BigInt::from(acc))
}

/// Asymptotic exponent of `|K_{ωn}^{(n)}(τn)|` per coordinate, base 2.
///
/// `tau` is the evaluation point and `omega` the degree. Both are first folded
/// onto `[0, 1/2]` using `|K_w(t)| = |K_w(n - t)| = |K_{n-w}(t)|`.
pub fn kappa_tilde(tau: f64, omega: f64) -> f64 {
    let tau = tau.clamp(0.0, 1.0);
    let omega = omega.clamp(0.0, 1.0);
    let tau = tau.min(1.0 - tau);
    let omega = omega.min(1.0 - omega);
    if omega == 0.0 {
        return 0.0;
    }
    if tau == 0.0 {
        return h2(omega);
    }
    if tau <= omega_perp(omega) {
        root_free_branch(tau, omega)
    } else {
        oscillating_branch(tau, omega)
    }
}

/// `1/2 - sqrt(ω(1 - ω))`, the edge of the root region.
pub fn omega_perp(omega: f64) -> f64 {
    0.5 - (omega * (1.0 - omega)).sqrt()
}

pub(crate) fn root_free_branch(tau: f64, omega: f64) -> f64 {
    let d = ((1.0 - 2.0 * tau).powi(2) - 4.0 * omega * (1.0 - omega)).max(0.0);
    let z = (1.0 - 2.0 * tau - d.sqrt()) / (2.0 * (1.0 - omega));
    tau * (1.0 - z).log2() + (1.0 - tau) * (1.0 + z).log2() - omega * z.log2()
}

pub(crate) fn oscillating_branch(tau: f64, omega: f64) -> f64 {
    (1.0 - h2(tau) + h2(omega)) / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::log2_abs;

    #[test]
    fn known_values() {
        assert_eq!(krawtchouk_exact(32, 5, 8).unwrap(), BigInt::from(336));
        for n in 1..20 {
            for t in 0..=n {
                assert_eq!(krawtchouk_exact(n, 1, t).unwrap(), BigInt::from(n as i64 - 2 * t as i64));
            }
        }
        assert!(krawtchouk_exact(4097, 1, 1).is_err());
        assert!(krawtchouk_exact(10, 11, 1).is_err());
    }

    #[test]
    fn table_matches_direct_sum() {
        for n in 0..=40 {
            for w in 0..=n {
                let t = KrawtchoukTable::new(n, w).unwrap();
                for x in 0..=n {
                    assert_eq!(t.values[x], krawtchouk_exact(n, w, x).unwrap(), "n={n} w={w} t={x}");
                }
            }
        }
    }

    #[test]
    fn small_character_sum() {
        let x = BitVec::from_bits(&[1, 0, 0, 0]);
        assert_eq!(character_sum_oracle(&x, 2).unwrap(), BigInt::zero());
        assert!(character_sum_oracle(&BitVec::zeros(19), 2).is_err());
    }

    #[test]
    fn kappa_at_zero_is_entropy() {
        for i in 0..=20 {
            let w = i as f64 / 20.0;
            assert!((kappa_tilde(0.0, w) - h2(w)).abs() < 1e-12);
        }
    }

    #[test]
    fn kappa_branches_meet() {
        for i in 1..50 {
            let w = 0.5 * i as f64 / 50.0;
            let b = omega_perp(w);
            assert!((root_free_branch(b, w) - oscillating_branch(b, w)).abs() < 1e-9);
        }
    }

    #[test]
    fn kappa_tracks_finite_n() {
        let n = 512;
        for &(t, w) in &[(20, 40), (60, 100), (100, 30), (200, 80), (256, 100), (30, 250)] {
            let exact = log2_abs(&krawtchouk_exact(n, w, t).unwrap()) / n as f64;
            let asym = kappa_tilde(t as f64 / n as f64, w as f64 / n as f64);
            // Inside the root region only an envelope is claimed.
            if (t as f64 / n as f64) <= omega_perp(w as f64 / n as f64) {
                assert!((exact - asym).abs() < 0.02, "t={t} w={w}: {exact} vs {asym}");
            } else {
                assert!(exact <= asym + 0.02, "t={t} w={w}: {exact} vs {asym}");
            }
        }
    }
}

//! Elementary congruence sieve for `u_n = y^p`.
//!
//! For a prime `q = 1 (mod p)` the pair `(u_n, u_{n+1}) mod q` is periodic
//! with period `K(q)`, and `u_n` can only be a `p`-th power when
//! `n mod K(q)` lies in the set of residues `r` with `u_r` a `p`-th power
//! in `F_q`. Intersecting these conditions over many primes by CRT pins
//! `n` to a few classes modulo `lcm K(q)`; once that modulus exceeds the
//! index bound `B` each class has at most one candidate `n <= B`.

mod cache;
mod run;
mod scan;

pub use cache::SieveCache;
pub use run::{sieve_run, smooth_schedule, Resolved, SieveConfig, SieveReport, Verdict};
pub use scan::{scan_powers, PowerHit, ScanReport};

use std::collections::HashMap;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intarith::{factor, is_prime, primes_up_to, pth_power_table, Factorization};
use crate::lucas::{term_pair_mod, SequenceParams};
use crate::scalar::{mul_mod, pow_mod};

/// Default cap on the size of a residue set.
pub const DEFAULT_EXPLOSION_CAP: usize = 1_000_000;

/// Default largest auxiliary prime `q`.
pub const DEFAULT_Q_MAX: u64 = 1 << 20;

/// A regular prime with its period, before residue classes are known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeSkeleton {
    pub q: u64,
    pub period: u64,
}

/// Residues `r mod K(q)` at which `u_r` is a `p`-th power modulo `q`.
///
/// `residues` is sorted and always contains 0 and 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SievePrime {
    pub q: u64,
    pub period: u64,
    pub residues: Vec<u64>,
    pub rejection_ratio: f64,
}

impl SievePrime {
    fn from_residues(q: u64, period: u64, residues: Vec<u64>) -> Self {
        let rejection_ratio = residues.len() as f64 / period as f64;
        Self {
            q,
            period,
            residues,
            rejection_ratio,
        }
    }

    pub fn skeleton(&self) -> PrimeSkeleton {
        PrimeSkeleton {
            q: self.q,
            period: self.period,
        }
    }
}

/// Classes `n mod K(S)` surviving every consumed prime.
#[derive(Debug, Clone, PartialEq)]
pub struct SieveState {
    modulus: BigUint,
    residues: Vec<BigUint>,
    primes_used: Vec<PrimeSkeleton>,
}

impl Default for SieveState {
    fn default() -> Self {
        Self::new()
    }
}

impl SieveState {
    /// Modulus 1 with the single class 0.
    pub fn new() -> Self {
        Self {
            modulus: BigUint::one(),
            residues: vec![BigUint::from(0u32)],
            primes_used: Vec::new(),
        }
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    /// Sorted least representatives.
    pub fn residues(&self) -> &[BigUint] {
        &self.residues
    }

    /// Consumed primes with their periods.
    pub fn primes_used(&self) -> &[PrimeSkeleton] {
        &self.primes_used
    }
}

fn reduce_i64(x: i64, q: u64) -> u64 {
    x.rem_euclid(q as i64) as u64
}

fn is_regular(params: &SequenceParams, q: u64) -> bool {
    q != 2 && reduce_i64(params.c(), q) != 0 && reduce_i64(params.disc(), q) != 0
}

/// Whether `b^2 + 4c` is a nonzero square modulo the odd prime `q`.
fn disc_splits(params: &SequenceParams, q: u64) -> bool {
    let d = reduce_i64(params.disc(), q);
    d != 0 && pow_mod(d, (q - 1) / 2, q) == 1
}

/// Least divisor `K` of `bound` returning the pair to `(0, 1)`; `fac` must
/// factor `bound`, and the pair must return at `bound` itself.
fn period_from(params: &SequenceParams, q: u64, bound: u64, fac: &Factorization) -> u64 {
    let returns = |k: u64| {
        if q < 1 << 62 {
            lucas_pair_mod(params, k, q) == (0, 1)
        } else {
            term_pair_mod(params, &BigUint::from(k), q) == (0, 2 % q)
        }
    };
    debug_assert!(returns(bound));
    let mut k = bound;
    for &(ell, e) in fac.pairs() {
        for _ in 0..e {
            if returns(k / ell) {
                k /= ell;
            } else {
                break;
            }
        }
    }
    k
}

/// Period of `(u_n, u_{n+1}) mod q`.
///
/// Divides `q - 1` when `b^2 + 4c` is a square mod `q`, and `q^2 - 1`
/// otherwise. Panics if `q >= 2^32` and the discriminant is a non-square.
pub fn period_mod(params: &SequenceParams, q: u64) -> Result<u64> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if !is_regular(params, q) {
        return Err(Error::IrregularPrime { q });
    }
    if disc_splits(params, q) {
        return Ok(period_from(params, q, q - 1, &factor(q - 1)));
    }
    assert!(q < 1 << 32, "non-split prime too large for a 64-bit period");
    let fac = factor(q - 1).merge(&factor(q + 1));
    Ok(period_from(params, q, q * q - 1, &fac))
}

/// Prime factorization of the part of `m` supported on primes `<= limit`.
pub(crate) fn smooth_part(m: &BigUint, limit: u64) -> Factorization {
    let mut rest = m.clone();
    let mut pairs = Vec::new();
    for ell in primes_up_to(limit) {
        if rest.is_one() {
            break;
        }
        let mut e = 0;
        while (&rest % ell).to_u64() == Some(0) {
            rest /= ell;
            e += 1;
        }
        if e > 0 {
            pairs.push((ell, e));
        }
    }
    Factorization::from_pairs(pairs)
}

/// Divisors of the factored number that are `<= limit`. With `pinned =
/// Some(ell)`, only divisors carrying the full power of `ell` are listed.
pub(crate) fn divisors_up_to(fac: &[(u64, u32)], limit: u64, pinned: Option<u64>) -> Vec<u64> {
    fn walk(fac: &[(u64, u32)], acc: u64, limit: u64, out: &mut Vec<u64>) {
        let Some((&(ell, e), rest)) = fac.split_first() else {
            out.push(acc);
            return;
        };
        let mut x = acc;
        for i in 0..=e {
            walk(rest, x, limit, out);
            if i == e {
                break;
            }
            match x.checked_mul(ell) {
                Some(y) if y <= limit => x = y,
                _ => break,
            }
        }
    }
    let mut out = Vec::new();
    match pinned.and_then(|ell| fac.iter().position(|f| f.0 == ell)) {
        None if pinned.is_some() => {}
        None => walk(fac, 1, limit, &mut out),
        Some(at) => {
            let (ell, e) = fac[at];
            if let Some(start) = ell.checked_pow(e).filter(|&x| x <= limit) {
                let rest: Vec<(u64, u32)> = fac.iter().copied().filter(|f| f.0 != ell).collect();
                walk(&rest, start, limit, &mut out);
            }
        }
    }
    out
}

/// Primality with a table lookup for `q <= DEFAULT_Q_MAX`.
fn is_small_prime(q: u64) -> bool {
    static TABLE: OnceLock<Vec<bool>> = OnceLock::new();
    if q > DEFAULT_Q_MAX {
        return is_prime(q);
    }
    let table = TABLE.get_or_init(|| {
        let mut t = vec![false; DEFAULT_Q_MAX as usize + 1];
        for r in primes_up_to(DEFAULT_Q_MAX) {
            t[r as usize] = true;
        }
        t
    });
    table[q as usize]
}

pub(crate) fn skeletons_for(
    params: &SequenceParams,
    m_fac: &[(u64, u32)],
    q_max: u64,
    pinned: Option<u64>,
    mut keep: impl FnMut(u64) -> bool,
) -> Vec<PrimeSkeleton> {
    divisors_up_to(m_fac, q_max.saturating_sub(1), pinned)
        .into_iter()
        .map(|d| d + 1)
        .filter(|&q| keep(q) && is_small_prime(q) && is_regular(params, q) && disc_splits(params, q))
        .map(|q| PrimeSkeleton {
            q,
            period: period_from(params, q, q - 1, &factor_over(q - 1, m_fac)),
        })
        .collect()
}

/// Factorization of a divisor `d` of the number factored as `m_fac`.
pub(crate) fn factor_over(mut d: u64, m_fac: &[(u64, u32)]) -> Factorization {
    let mut pairs = Vec::new();
    for &(ell, _) in m_fac {
        let mut e = 0;
        while d.is_multiple_of(ell) {
            d /= ell;
            e += 1;
        }
        if e > 0 {
            pairs.push((ell, e));
        }
    }
    debug_assert_eq!(d, 1);
    Factorization::from_pairs(pairs)
}

/// Sieve primes `q <= DEFAULT_Q_MAX` with `q - 1 | M`, at most `cap` of
/// them, by descending period.
pub fn find_sieve_primes(params: &SequenceParams, m: &BigUint, cap: usize) -> Vec<PrimeSkeleton> {
    let fac = smooth_part(m, DEFAULT_Q_MAX);
    let mut out = skeletons_for(params, fac.pairs(), DEFAULT_Q_MAX, None, |_| true);
    out.sort_by(|a, b| b.period.cmp(&a.period).then(a.q.cmp(&b.q)));
    out.truncate(cap);
    out
}

/// Residues `r < K(q)` with `u_r` a `p`-th power modulo `q`.
pub fn residue_classes(params: &SequenceParams, p: u64, sk: PrimeSkeleton) -> Result<SievePrime> {
    let q = sk.q;
    if q < 2 || !(q - 1).is_multiple_of(p) {
        return Err(Error::UselessPrime { p, q });
    }
    let table = pth_power_table(p, q);
    let (bq, cq) = (reduce_i64(params.b(), q), reduce_i64(params.c(), q));
    let (mut cur, mut next) = (0u64, 1u64);
    let mut residues = Vec::new();
    // below 2^31 both products and their sum fit in a u64
    let small = q < 1 << 31;
    for r in 0..sk.period {
        if table[cur as usize] {
            residues.push(r);
        }
        let following = if small {
            (bq * next + cq * cur) % q
        } else {
            ((bq as u128 * next as u128 + cq as u128 * cur as u128) % q as u128) as u64
        };
        cur = std::mem::replace(&mut next, following);
    }
    Ok(SievePrime::from_residues(q, sk.period, residues))
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let e = (a as i128).extended_gcd(&(m as i128));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m as i128) as u64
}

/// Intersects the state with the classes of one more prime, whose
/// `residues` must be sorted.
pub fn sieve_step(state: &SieveState, sp: &SievePrime, cap: usize) -> Result<SieveState> {
    let m = &state.modulus;
    let k = sp.period;
    let m_mod_k = (m % k).to_u64().expect("reduced below k");
    let d = m_mod_k.gcd(&k);
    let kd = k / d;
    let md = m / d;
    let inv = mod_inverse((&md % kd).to_u64().expect("reduced below k"), kd);

    let reduced: Vec<u64> = state
        .residues
        .iter()
        .map(|r| (r % k).to_u64().expect("reduced below k"))
        .collect();
    let too_big = |size: usize| Error::ResidueExplosion { size, cap };

    // pairs (index into state, compatible class s of sp)
    let mut matches: Vec<(usize, u64)> = Vec::new();
    if (reduced.len() as u128) * (kd as u128) <= sp.residues.len() as u128 {
        for (i, &rk) in reduced.iter().enumerate() {
            let base = rk % d;
            for j in 0..kd {
                let s = base + j * d;
                if sp.residues.binary_search(&s).is_ok() {
                    matches.push((i, s));
                }
            }
            if matches.len() > cap {
                return Err(too_big(matches.len()));
            }
        }
    } else {
        let mut groups: HashMap<u64, Vec<u64>> = HashMap::new();
        for &s in &sp.residues {
            groups.entry(s % d).or_default().push(s);
        }
        let size: usize = reduced.iter().map(|rk| groups.get(&(rk % d)).map_or(0, Vec::len)).sum();
        if size > cap {
            return Err(too_big(size));
        }
        for (i, &rk) in reduced.iter().enumerate() {
            matches.extend(groups.get(&(rk % d)).into_iter().flatten().map(|&s| (i, s)));
        }
    }

    let mut residues: Vec<BigUint> = matches
        .into_iter()
        .map(|(i, s)| {
            let rk = reduced[i];
            let diff = (s + k - rk) % k / d;
            let t = (diff as u128 * inv as u128 % kd as u128) as u64;
            &state.residues[i] + m * t
        })
        .collect();
    residues.sort_unstable();

    let mut primes_used = state.primes_used.clone();
    primes_used.push(sp.skeleton());
    Ok(SieveState {
        modulus: m * kd,
        residues,
        primes_used,
    })
}

/// `(u_n, u_{n+1}) mod q` by doubling, for `q < 2^63`.
pub(crate) fn lucas_pair_mod(params: &SequenceParams, n: u64, q: u64) -> (u64, u64) {
    let (b, c) = (reduce_i64(params.b(), q), reduce_i64(params.c(), q));
    let add = |x: u64, y: u64| (x + y) % q;
    let (mut u, mut w) = (0u64, 1 % q);
    for bit in (0..64 - n.leading_zeros()).rev() {
        // u_{2k} = u_k (2 u_{k+1} - b u_k), u_{2k+1} = u_{k+1}^2 + c u_k^2
        let bu = mul_mod(b, u, q);
        let u2 = mul_mod(u, add(add(w, w), q - bu), q);
        let w2 = add(mul_mod(w, w, q), mul_mod(c, mul_mod(u, u, q), q));
        (u, w) = (u2, w2);
        if n >> bit & 1 == 1 {
            (u, w) = (w, add(mul_mod(b, w, q), mul_mod(c, u, q)));
        }
    }
    (u, w)
}

/// Same result as [`sieve_step`] with the classes of `sk`, found by testing
/// every compatible lift directly instead of tabulating a whole period.
pub fn sieve_step_direct(
    state: &SieveState,
    params: &SequenceParams,
    p: u64,
    sk: PrimeSkeleton,
    cap: usize,
) -> Result<SieveState> {
    let (q, k) = (sk.q, sk.period);
    if q < 2 || (q - 1) % p != 0 {
        return Err(Error::UselessPrime { p, q });
    }
    let e = (q - 1) / p;
    let is_power = |x: u64| {
        let (u, _) = lucas_pair_mod(params, x, q);
        u == 0 || pow_mod(u, e, q) == 1
    };
    let m = &state.modulus;
    let m_mod_k = (m % k).to_u64().expect("reduced below k");
    let kd = k / m_mod_k.gcd(&k);
    let mut residues = Vec::new();
    for r in &state.residues {
        let rk = (r % k).to_u64().expect("reduced below k");
        for t in 0..kd {
            let xk = ((rk as u128 + m_mod_k as u128 * t as u128) % k as u128) as u64;
            if is_power(xk) {
                residues.push(r + m * t);
            }
        }
        if residues.len() > cap {
            return Err(Error::ResidueExplosion {
                size: residues.len(),
                cap,
            });
        }
    }
    residues.sort_unstable();
    let mut primes_used = state.primes_used.clone();
    primes_used.push(sk);
    Ok(SieveState {
        modulus: m * kd,
        residues,
        primes_used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(b: i64, c: i64) -> SequenceParams {
        SequenceParams::new(b, c).unwrap()
    }

    fn brute_period(params: &SequenceParams, q: u64) -> u64 {
        let (bq, cq) = (reduce_i64(params.b(), q), reduce_i64(params.c(), q));
        let (mut cur, mut next) = (0u64, 1u64);
        for k in 1.. {
            let following = (bq * next + cq * cur) % q;
            cur = std::mem::replace(&mut next, following);
            if (cur, next) == (0, 1) {
                return k;
            }
        }
        unreachable!()
    }

    fn brute_residues(params: &SequenceParams, p: u64, q: u64, period: u64) -> Vec<u64> {
        let powers: std::collections::HashSet<u64> = (0..q).map(|x| pow_mod(x, p, q)).collect();
        let (bq, cq) = (reduce_i64(params.b(), q), reduce_i64(params.c(), q));
        let (mut cur, mut next) = (0u64, 1u64);
        let mut out = Vec::new();
        for r in 0..period {
            if powers.contains(&cur) {
                out.push(r);
            }
            let following = (bq * next + cq * cur) % q;
            cur = std::mem::replace(&mut next, following);
        }
        out
    }

    fn prime(params: &SequenceParams, p: u64, q: u64) -> SievePrime {
        let period = period_mod(params, q).unwrap();
        residue_classes(params, p, PrimeSkeleton { q, period }).unwrap()
    }

    fn big_all(xs: &[u64]) -> Vec<BigUint> {
        xs.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn period_examples() {
        assert_eq!(period_mod(&params(1, 1), 11), Ok(10));
        assert_eq!(period_mod(&params(3, -2), 7), Ok(3));
        assert_eq!(period_mod(&params(1, 1), 2), Err(Error::IrregularPrime { q: 2 }));
        assert_eq!(period_mod(&params(1, 1), 5), Err(Error::IrregularPrime { q: 5 }));
        assert_eq!(period_mod(&params(1, 1), 9), Err(Error::NotPrime(9)));
        // Fibonacci mod 7 has period 16, which divides 7^2 - 1
        assert_eq!(period_mod(&params(1, 1), 7), Ok(16));
    }

    #[test]
    fn period_matches_cycle_detection() {
        for (b, c) in [(1, 1), (2, 1), (3, 1), (3, -2), (5, -6), (-4, 7), (9, -20)] {
            let ps = params(b, c);
            for q in primes_up_to(1000) {
                match period_mod(&ps, q) {
                    Ok(k) => assert_eq!(k, brute_period(&ps, q), "({b},{c}) q={q}"),
                    Err(e) => assert_eq!(e, Error::IrregularPrime { q }),
                }
            }
        }
    }

    #[test]
    fn find_primes_examples() {
        let fib = params(1, 1);
        let found = find_sieve_primes(&fib, &BigUint::from(120u32), 100);
        assert!(found.contains(&PrimeSkeleton { q: 11, period: 10 }));
        assert!(found.iter().all(|s| s.q != 7));
        assert!(found.windows(2).all(|w| w[0].period >= w[1].period));
        for s in &found {
            assert_eq!(120 % (s.q - 1), 0);
            assert_eq!((s.q - 1) % s.period, 0);
        }
        let tiny = find_sieve_primes(&fib, &BigUint::from(2u32), 100);
        assert!(tiny.iter().all(|s| s.q == 3));
        assert_eq!(find_sieve_primes(&fib, &BigUint::from(120u32), 2).len(), 2);
    }

    #[test]
    fn residue_examples() {
        let fib = params(1, 1);
        let sp = residue_classes(&fib, 5, PrimeSkeleton { q: 11, period: 10 }).unwrap();
        assert_eq!(sp.residues, vec![0, 1, 2, 8, 9]);
        assert!((sp.rejection_ratio - 0.5).abs() < 1e-12);
        let sp = residue_classes(&params(3, -2), 3, PrimeSkeleton { q: 7, period: 3 }).unwrap();
        assert_eq!(sp.residues, vec![0, 1]);
        assert_eq!(
            residue_classes(&fib, 7, PrimeSkeleton { q: 11, period: 10 }),
            Err(Error::UselessPrime { p: 7, q: 11 })
        );
    }

    #[test]
    fn residues_match_brute_force() {
        for (b, c) in [(1, 1), (2, 1), (3, 1), (3, -2), (-5, 3)] {
            let ps = params(b, c);
            for p in [2u64, 3, 5, 7] {
                for q in primes_up_to(500) {
                    if (q - 1) % p != 0 {
                        continue;
                    }
                    let Ok(period) = period_mod(&ps, q) else { continue };
                    let sp = residue_classes(&ps, p, PrimeSkeleton { q, period }).unwrap();
                    assert_eq!(sp.residues, brute_residues(&ps, p, q, period), "({b},{c}) p={p} q={q}");
                    assert!(sp.residues.starts_with(&[0, 1]));
                }
            }
        }
    }

    #[test]
    fn step_examples() {
        let first = SievePrime::from_residues(11, 10, vec![0, 1, 2, 8, 9]);
        let s = sieve_step(&SieveState::new(), &first, 100).unwrap();
        assert_eq!(*s.modulus(), BigUint::from(10u32));
        assert_eq!(s.residues(), big_all(&[0, 1, 2, 8, 9]).as_slice());

        let other = SievePrime::from_residues(31, 10, vec![0, 1, 5]);
        let s2 = sieve_step(&s, &other, 100).unwrap();
        assert_eq!(*s2.modulus(), BigUint::from(10u32));
        assert_eq!(s2.residues(), big_all(&[0, 1]).as_slice());

        let coprime = SievePrime::from_residues(7, 3, vec![0, 1]);
        let s3 = sieve_step(&s, &coprime, 100).unwrap();
        assert_eq!(*s3.modulus(), BigUint::from(30u32));
        assert_eq!(s3.residues().len(), 10);
        assert_eq!(s3.primes_used().len(), 2);
    }

    #[test]
    fn step_respects_cap() {
        let a = SievePrime::from_residues(11, 10, (0..10).collect());
        let s = sieve_step(&SieveState::new(), &a, 100).unwrap();
        let b = SievePrime::from_residues(31, 3, vec![0, 1, 2]);
        assert_eq!(
            sieve_step(&s, &b, 20),
            Err(Error::ResidueExplosion { size: 30, cap: 20 })
        );
    }

    fn sieve_for(ps: &SequenceParams, p: u64, qs: &[u64]) -> SieveState {
        qs.iter().fold(SieveState::new(), |st, &q| {
            sieve_step(&st, &prime(ps, p, q), DEFAULT_EXPLOSION_CAP).unwrap()
        })
    }

    fn permutations(xs: &[u64]) -> Vec<Vec<u64>> {
        if xs.len() <= 1 {
            return vec![xs.to_vec()];
        }
        let mut out = Vec::new();
        for i in 0..xs.len() {
            let mut rest = xs.to_vec();
            let head = rest.remove(i);
            for mut tail in permutations(&rest) {
                tail.insert(0, head);
                out.push(tail);
            }
        }
        out
    }

    #[test]
    fn step_is_order_independent() {
        let ps = params(1, 1);
        let qs = [11u64, 31, 41, 61];
        let reference = sieve_for(&ps, 5, &qs);
        let perms = permutations(&qs);
        assert_eq!(perms.len(), 24);
        for perm in perms {
            let s = sieve_for(&ps, 5, &perm);
            assert_eq!(s.modulus(), reference.modulus());
            assert_eq!(s.residues(), reference.residues());
        }
    }

    #[test]
    fn sieve_is_sound() {
        for (b, c) in [(1i64, 1i64), (2, 1), (3, 1)] {
            let ps = params(b, c);
            let terms: Vec<num_bigint::BigInt> = crate::lucas::exact_terms(&ps).take(10_001).collect();
            for p in [2u64, 3, 5, 7] {
                let qs: Vec<u64> = crate::intarith::primes_up_to(400)
                    .into_iter()
                    .filter(|&q| (q - 1) % p == 0 && period_mod(&ps, q).is_ok())
                    .take(5)
                    .collect();
                let st = sieve_for(&ps, p, &qs);
                let screens = crate::intarith::primes_up_to(5000)
                    .into_iter()
                    .filter(|&q| q > 1000 && (q - 1) % p == 0)
                    .take(3)
                    .collect::<Vec<_>>();
                for (n, u) in terms.iter().enumerate() {
                    if u.sign() == num_bigint::Sign::Minus && p == 2 {
                        continue;
                    }
                    let plausible = screens.iter().all(|&q| {
                        let r = (u % q as i64 + q as i64) % q as i64;
                        crate::intarith::is_pth_power_residue(r.to_u64().unwrap(), p, q)
                    });
                    if !plausible {
                        continue;
                    }
                    let (_, exact) = crate::intarith::integer_root(u.magnitude(), p as u32);
                    if exact {
                        let r = BigUint::from(n) % st.modulus();
                        assert!(st.residues().binary_search(&r).is_ok(), "({b},{c}) p={p} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn pair_mod_matches_iteration() {
        for (b, c) in [(1i64, 1i64), (3, -2), (-5, 7)] {
            let ps = params(b, c);
            for q in [11u64, 101, 65_537] {
                let mut it = crate::lucas::terms_mod(&ps, q);
                let terms: Vec<u64> = (0..300).map(|_| it.next().unwrap().value()).collect();
                for n in 0..299 {
                    assert_eq!(lucas_pair_mod(&ps, n as u64, q), (terms[n], terms[n + 1]));
                }
            }
        }
    }

    #[test]
    fn direct_step_matches_table_step() {
        for (b, c) in [(1i64, 1i64), (3, 1), (2, 1)] {
            let ps = params(b, c);
            for p in [2u64, 3, 5] {
                let qs: Vec<u64> = primes_up_to(800)
                    .into_iter()
                    .filter(|&q| (q - 1) % p == 0 && period_mod(&ps, q).is_ok())
                    .take(4)
                    .collect();
                let (mut table, mut direct) = (SieveState::new(), SieveState::new());
                for &q in &qs {
                    let sp = prime(&ps, p, q);
                    table = sieve_step(&table, &sp, DEFAULT_EXPLOSION_CAP).unwrap();
                    direct = sieve_step_direct(&direct, &ps, p, sp.skeleton(), DEFAULT_EXPLOSION_CAP).unwrap();
                    assert_eq!(table, direct, "({b},{c}) p={p} q={q}");
                }
            }
        }
    }

    #[test]
    fn divisor_enumeration() {
        let sorted = |mut d: Vec<u64>| {
            d.sort_unstable();
            d
        };
        assert_eq!(
            sorted(divisors_up_to(&[(2, 3), (3, 1)], 100, None)),
            vec![1, 2, 3, 4, 6, 8, 12, 24]
        );
        assert_eq!(sorted(divisors_up_to(&[(2, 3), (3, 1)], 7, None)), vec![1, 2, 3, 4, 6]);
        assert_eq!(sorted(divisors_up_to(&[(2, 3), (3, 1)], 100, Some(2))), vec![8, 24]);
        assert_eq!(sorted(divisors_up_to(&[(2, 3), (3, 1)], 10, Some(2))), vec![8]);
        assert_eq!(sorted(divisors_up_to(&[(2, 3), (3, 2)], 50, Some(3))), vec![9, 18, 36]);
        assert!(divisors_up_to(&[(2, 3)], 100, Some(5)).is_empty());
    }

    #[test]
    fn smooth_part_drops_large_primes() {
        let m = BigUint::from(720u32) * BigUint::from(1_000_003u64);
        assert_eq!(smooth_part(&m, 1000).pairs(), &[(2, 4), (3, 2), (5, 1)]);
    }

    proptest! {
        #[test]
        fn pinned_divisors_carry_the_full_power(
            exps in prop::collection::vec(0u32..5, 4),
            at in 0usize..4,
            limit in 1u64..5_000,
        ) {
            let fac: Vec<(u64, u32)> = [2u64, 3, 5, 7].into_iter().zip(exps).filter(|f| f.1 > 0).collect();
            prop_assume!(!fac.is_empty());
            let (ell, e) = fac[at % fac.len()];
            let mut got = divisors_up_to(&fac, limit, Some(ell));
            got.sort_unstable();
            let full = ell.pow(e);
            let mut want: Vec<u64> = divisors_up_to(&fac, limit, None)
                .into_iter()
                .filter(|d| d % full == 0 && d / full % ell != 0)
                .collect();
            want.sort_unstable();
            prop_assert_eq!(got, want);
        }

        #[test]
        fn zero_and_one_survive(b in 1i64..20, c in 1i64..20, p in prop::sample::select(vec![2u64, 3, 5, 7, 11])) {
            let ps = params(b, c);
            for q in crate::intarith::primes_up_to(300).into_iter().filter(|&q| (q - 1) % p == 0) {
                let Ok(period) = period_mod(&ps, q) else { continue };
                let sp = residue_classes(&ps, p, PrimeSkeleton { q, period }).unwrap();
                prop_assert!(sp.residues.starts_with(&[0, 1]));
                prop_assert!(sp.residues.iter().all(|&r| r < period));
            }
        }

        #[test]
        fn step_preserves_zero_and_one(qs in prop::sample::subsequence(vec![11u64, 31, 41, 61, 71, 101], 1..5)) {
            let st = sieve_for(&params(1, 1), 5, &qs);
            let trivial = big_all(&[0, 1]);
            prop_assert_eq!(&st.residues()[..2], trivial.as_slice());
            for r in st.residues() {
                prop_assert!(r < st.modulus());
            }
        }
    }
}

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::factor::{factor, is_prime, primes_up_to};
use crate::scalar::pow_mod;

/// `(floor(x^(1/k)), exact)`.
///
/// The estimate comes from `BigUint::nth_root` (Newton's method) and is
/// then corrected so that `root^k <= x < (root + 1)^k` holds exactly.
pub fn integer_root(x: &BigUint, k: u32) -> (BigUint, bool) {
    assert!(k >= 1, "root degree must be positive");
    if x.is_zero() || k == 1 {
        return (x.clone(), true);
    }
    let mut root = x.nth_root(k);
    while root.pow(k) > *x {
        root -= 1u32;
    }
    loop {
        let next = &root + 1u32;
        if next.pow(k) <= *x {
            root = next;
        } else {
            break;
        }
    }
    let exact = root.pow(k) == *x;
    (root, exact)
}

/// Smallest primitive root of the prime `q`.
pub fn primitive_root(q: u64) -> u64 {
    if q == 2 {
        return 1;
    }
    let phi = q - 1;
    let cofactors: Vec<u64> = factor(phi).primes().map(|r| phi / r).collect();
    (2..q)
        .find(|&g| cofactors.iter().all(|&e| pow_mod(g, e, q) != 1))
        .expect("every prime has a primitive root")
}

/// Membership table of the `p`-th powers in `F_q` (including 0).
pub fn pth_power_table(p: u64, q: u64) -> Vec<bool> {
    let mut table = vec![false; q as usize];
    table[0] = true;
    let order = q - 1;
    if !order.is_multiple_of(p) {
        table.iter_mut().for_each(|t| *t = true);
        return table;
    }
    let h = pow_mod(primitive_root(q), p, q);
    let mut x = 1u64;
    for _ in 0..order / p {
        table[x as usize] = true;
        x = crate::scalar::mul_mod(x, h, q);
    }
    table
}

/// Whether `x mod q` is a `p`-th power in `F_q` (Euler's criterion).
pub fn is_pth_power_residue(x: u64, p: u64, q: u64) -> bool {
    let x = x % q;
    if x == 0 || !(q - 1).is_multiple_of(p) {
        return true;
    }
    pow_mod(x, (q - 1) / p, q) == 1
}

/// The first `count` primes `q = 1 (mod p)` (odd primes when `p = 2`).
pub(crate) fn auxiliary_primes(p: u64, count: usize) -> Vec<u64> {
    let step = if p == 2 { 2 } else { 2 * p };
    let mut out = Vec::with_capacity(count);
    let mut q = if p == 2 { 3 } else { step + 1 };
    while out.len() < count {
        if is_prime(q) {
            out.push(q);
        }
        q += step;
    }
    out
}

fn log2_floor(x: &BigUint) -> u64 {
    x.bits() - 1
}

/// If `x >= 2` is a perfect `p`-th power for some prime `p`, returns
/// `(y, p)` with the largest such `p`.
///
/// Candidates are primes `p <= log2(x)`; each is screened by power-residue
/// tests modulo a few primes `q = 1 (mod p)` before an exact root.
pub fn perfect_power_split(x: &BigUint) -> Option<(BigUint, u32)> {
    if *x < BigUint::from(2u32) {
        return None;
    }
    let max_p = log2_floor(x);
    for &p in primes_up_to(max_p).iter().rev() {
        let screened = auxiliary_primes(p, 4).into_iter().all(|q| {
            let r = (x % q).to_u64().expect("residue fits");
            is_pth_power_residue(r, p, q)
        });
        if !screened {
            continue;
        }
        let (y, exact) = integer_root(x, p as u32);
        if exact {
            return Some((y, p as u32));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn root_examples() {
        assert_eq!(integer_root(&big(169), 2), (big(13), true));
        assert_eq!(integer_root(&big(0), 5), (big(0), true));
        assert_eq!(integer_root(&big(145), 2), (big(12), false));
        assert_eq!(integer_root(&big(1), 7), (big(1), true));
    }

    #[test]
    fn split_examples() {
        assert_eq!(perfect_power_split(&big(144)), Some((big(12), 2)));
        assert_eq!(perfect_power_split(&big(8)), Some((big(2), 3)));
        assert_eq!(perfect_power_split(&big(6)), None);
        assert_eq!(perfect_power_split(&big(1)), None);
        // 2^15: largest prime exponent is 5
        assert_eq!(perfect_power_split(&big(1 << 15)), Some((big(8), 5)));
        assert_eq!(perfect_power_split(&big(64)), Some((big(4), 3)));
    }

    #[test]
    fn split_agrees_with_brute_force_small() {
        for x in 2..5000u64 {
            let brute = (2..=13u32)
                .filter(|&p| is_prime(p as u64))
                .rev()
                .find(|&p| integer_root(&big(x), p).1);
            let got = perfect_power_split(&big(x)).map(|(_, p)| p);
            assert_eq!(got, brute, "x = {x}");
        }
    }

    #[test]
    fn power_table_matches_euler() {
        for q in [7u64, 11, 31, 101, 421] {
            for p in [2u64, 3, 5, 7] {
                let t = pth_power_table(p, q);
                let brute: Vec<bool> = (0..q).map(|x| (0..q).any(|y| pow_mod(y, p, q) == x)).collect();
                assert_eq!(t, brute, "p={p} q={q}");
                for x in 0..q {
                    assert_eq!(is_pth_power_residue(x, p, q), brute[x as usize]);
                }
            }
        }
    }

    #[test]
    fn aux_primes_are_one_mod_p() {
        assert_eq!(auxiliary_primes(5, 3), vec![11, 31, 41]);
        assert_eq!(auxiliary_primes(2, 3), vec![3, 5, 7]);
    }

    proptest! {
        #[test]
        fn root_brackets(x in any::<u128>(), k in 1u32..12) {
            let x = BigUint::from(x);
            let (r, exact) = integer_root(&x, k);
            prop_assert!(r.pow(k) <= x);
            prop_assert!((&r + 1u32).pow(k) > x);
            prop_assert_eq!(exact, r.pow(k) == x);
        }

        #[test]
        fn split_recovers_power(y in 2u64..1_000_000, pi in 0usize..6) {
            let p = [2u32, 3, 5, 7, 11, 13][pi];
            let x = BigUint::from(y).pow(p);
            let (y2, p2) = perfect_power_split(&x).expect("is a power");
            prop_assert!(p2 >= p);
            prop_assert_eq!(y2.pow(p2), x);
        }
    }
}

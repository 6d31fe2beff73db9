//! Direct search for perfect powers among the first terms.
//!
//! For each prime exponent `p` a handful of primes `q = 1 (mod p)` track
//! `u_n mod q` incrementally; only terms passing every power-residue screen
//! reach an exact integer root.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::intarith::{auxiliary_primes, integer_root, is_prime, pth_power_table};
use crate::lucas::SequenceParams;

const SCREENS: usize = 6;

/// `u_n = y^p` with `|y| >= 2` and `p` prime.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PowerHit {
    pub n: u64,
    #[serde(with = "crate::decimal")]
    pub y: BigInt,
    pub p: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanReport {
    pub b: i64,
    pub c: i64,
    pub n_max: u64,
    /// Indices `0` and `1`, where `u_n` is `0` or `1`.
    pub trivial: Vec<u64>,
    pub powers: Vec<PowerHit>,
}

impl ScanReport {
    pub fn triples(&self) -> Vec<(u64, BigInt, u64)> {
        self.powers.iter().map(|h| (h.n, h.y.clone(), h.p)).collect()
    }
}

/// Tracks `(u_{n-1}, u_n) mod q`.
struct Screen {
    q: u64,
    table: Vec<bool>,
    prev: u64,
    cur: u64,
}

struct Exponent {
    p: u64,
    screens: Vec<Screen>,
}

fn reduce(x: &BigInt, q: u64) -> u64 {
    x.mod_floor(&BigInt::from(q)).to_u64().expect("reduced below q")
}

/// All `(n, y, p)` with `2 <= n <= n_max`, `p` prime and `u_n = y^p`,
/// `|y| >= 2`.
pub fn scan_powers(params: &SequenceParams, n_max: u64) -> ScanReport {
    let (b, c) = (BigInt::from(params.b()), BigInt::from(params.c()));
    let mut exponents: Vec<Exponent> = Vec::new();
    let mut next_p = 2u64;
    let mut powers = Vec::new();
    let (mut prev, mut cur) = (BigInt::from(0), BigInt::from(1));
    for n in 1..=n_max {
        if n >= 2 && cur.magnitude().bits() >= 3 {
            let max_p = cur.magnitude().bits() - 1;
            while next_p <= max_p {
                let screens = auxiliary_primes(next_p, SCREENS)
                    .into_iter()
                    .map(|q| Screen {
                        q,
                        table: pth_power_table(next_p, q),
                        prev: reduce(&prev, q),
                        cur: reduce(&cur, q),
                    })
                    .collect();
                exponents.push(Exponent { p: next_p, screens });
                next_p += 1;
                while !is_prime(next_p) {
                    next_p += 1;
                }
            }
            let negative = cur.is_negative();
            for e in &exponents {
                if negative && e.p == 2 {
                    continue;
                }
                if !e.screens.iter().all(|s| s.table[s.cur as usize]) {
                    continue;
                }
                let (root, exact) = integer_root(cur.magnitude(), e.p as u32);
                if exact {
                    let sign = if negative { Sign::Minus } else { Sign::Plus };
                    powers.push(PowerHit {
                        n,
                        y: BigInt::from_biguint(sign, root),
                        p: e.p,
                    });
                }
            }
        }
        let following = &b * &cur + &c * &prev;
        prev = std::mem::replace(&mut cur, following);
        for e in &mut exponents {
            for s in &mut e.screens {
                let q = s.q as u128;
                let bq = params.b().rem_euclid(s.q as i64) as u128;
                let cq = params.c().rem_euclid(s.q as i64) as u128;
                let next = ((bq * s.cur as u128 + cq * s.prev as u128) % q) as u64;
                s.prev = std::mem::replace(&mut s.cur, next);
            }
        }
    }
    ScanReport {
        b: params.b(),
        c: params.c(),
        n_max,
        trivial: (0..=n_max.min(1)).collect(),
        powers,
    }
}

//! Lucas sequences `u_n = b u_{n-1} + c u_{n-2}` with `u_0 = 0, u_1 = 1`
//! and their companions `v_n` with `v_0 = 2, v_1 = b`.
//!
//! Exact terms come from powers of the companion matrix of
//! `z^2 - b z - c`; the Binet closed forms are never evaluated.

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intarith::ord2;
use crate::scalar::{ModQ, RingElem};

const COEFF_LIMIT: i64 = 1 << 31;

/// Validated recurrence coefficients `(b, c)` and their derived data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SequenceParams {
    b: i64,
    c: i64,
    disc: i64,
    alpha_abs_log: f64,
    k2: u32,
    odd_part: i64,
}

impl SequenceParams {
    /// Validates `(b, c)`; rejects `b = 0`, `c = 0` and `b^2 + 4c <= 0`.
    ///
    /// Coefficients are limited to `|b|, |c| < 2^31` so that the
    /// discriminant and every product of two of these quantities fit in
    /// machine words.
    pub fn new(b: i64, c: i64) -> Result<Self> {
        if b.abs() >= COEFF_LIMIT || c.abs() >= COEFF_LIMIT {
            return Err(Error::CoefficientOutOfRange { b, c });
        }
        let disc = b * b + 4 * c;
        if b == 0 || c == 0 || disc <= 0 {
            return Err(Error::DegenerateSequence { b, c });
        }
        let k2 = ord2(disc).expect("disc is nonzero");
        let odd_part = disc >> k2;
        let alpha = (b.abs() as f64 + (disc as f64).sqrt()) / 2.0;
        Ok(Self {
            b,
            c,
            disc,
            alpha_abs_log: alpha.ln(),
            k2,
            odd_part,
        })
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    /// `b^2 + 4c`.
    pub fn disc(&self) -> i64 {
        self.disc
    }

    /// Natural log of the dominant root's absolute value.
    pub fn alpha_abs_log(&self) -> f64 {
        self.alpha_abs_log
    }

    /// 2-adic valuation of the discriminant.
    pub fn k2(&self) -> u32 {
        self.k2
    }

    /// Odd part `D` of the discriminant, `disc = 2^k2 * D`.
    pub fn odd_part(&self) -> i64 {
        self.odd_part
    }

    /// `(-c)^n`, the sign taken from the parity of `n`.
    pub fn neg_c_pow(&self, n: u64) -> BigInt {
        let magnitude = num_traits::pow(BigInt::from(self.c.abs()), n as usize);
        let negative = self.c > 0 && n % 2 == 1;
        if negative {
            -magnitude
        } else {
            magnitude
        }
    }
}

/// The pair `(u_n, v_n)` at index `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermPair<T = BigInt> {
    pub n: u64,
    pub u: T,
    pub v: T,
}

#[derive(Clone)]
struct Mat2<T> {
    a: T,
    b: T,
    c: T,
    d: T,
}

impl<T: RingElem> Mat2<T> {
    fn mul(&self, o: &Self) -> Self {
        Mat2 {
            a: self.a.clone() * o.a.clone() + self.b.clone() * o.c.clone(),
            b: self.a.clone() * o.b.clone() + self.b.clone() * o.d.clone(),
            c: self.c.clone() * o.a.clone() + self.d.clone() * o.c.clone(),
            d: self.c.clone() * o.b.clone() + self.d.clone() * o.d.clone(),
        }
    }
}

/// `(u_n, v_n)` over any commutative ring, for the recurrence with
/// coefficients `b`, `c` given as ring elements.
///
/// `M = [[b, c], [1, 0]]` satisfies `M^n = [[u_{n+1}, c u_n], [u_n, c u_{n-1}]]`,
/// so `u_n` is read off directly and `v_n = 2 u_{n+1} - b u_n`.
pub fn companion_power<T: RingElem>(b: &T, c: &T, n: &BigUint) -> (T, T) {
    let zero = b.zero_like();
    let one = b.one_like();
    let step = Mat2 {
        a: b.clone(),
        b: c.clone(),
        c: one.clone(),
        d: zero.clone(),
    };
    let mut acc = Mat2 {
        a: one.clone(),
        b: zero.clone(),
        c: zero,
        d: one.clone(),
    };
    for i in (0..n.bits()).rev() {
        acc = acc.mul(&acc);
        if n.bit(i) {
            acc = acc.mul(&step);
        }
    }
    let u = acc.c.clone();
    let two = one.clone() + one;
    let v = two * acc.a - b.clone() * acc.c;
    (u, v)
}

/// Exact `(u_n, v_n)`.
pub fn term_pair(params: &SequenceParams, n: u64) -> TermPair {
    let (u, v) = companion_power(&BigInt::from(params.b), &BigInt::from(params.c), &BigUint::from(n));
    TermPair { n, u, v }
}

/// `(u_n mod q, v_n mod q)` for a possibly huge index `n`.
///
/// Panics if `q < 2`.
pub fn term_pair_mod(params: &SequenceParams, n: &BigUint, q: u64) -> (u64, u64) {
    assert!(q >= 2, "modulus must be at least 2");
    let b = ModQ::from_i64(params.b, q);
    let c = ModQ::from_i64(params.c, q);
    let (u, v) = companion_power(&b, &c, n);
    (u.value(), v.value())
}

/// Checks `u_{2n} = u_n v_n` and `disc * u_n^2 = v_n^2 - 4(-c)^n` exactly.
pub fn verify_identities(params: &SequenceParams, n: u64) -> bool {
    let t = term_pair(params, n);
    let doubled = term_pair(params, 2 * n);
    let doubling = doubled.u == &t.u * &t.v;
    let lhs = BigInt::from(params.disc) * &t.u * &t.u;
    let rhs = &t.v * &t.v - BigInt::from(4) * params.neg_c_pow(n);
    doubling && lhs == rhs
}

/// Iterator over `u_0, u_1, u_2, ...` in any ring.
#[derive(Clone)]
pub struct Terms<T> {
    b: T,
    c: T,
    cur: T,
    next: T,
}

impl<T: RingElem> Terms<T> {
    pub fn new(b: T, c: T) -> Self {
        let cur = b.zero_like();
        let next = b.one_like();
        Self { b, c, cur, next }
    }
}

impl<T: RingElem> Iterator for Terms<T> {
    type Item = T;

    fn next(&mut self) -> Option<T> {
        let following = self.b.clone() * self.next.clone() + self.c.clone() * self.cur.clone();
        let out = std::mem::replace(&mut self.cur, std::mem::replace(&mut self.next, following));
        Some(out)
    }
}

/// Exact terms `u_0, u_1, ...`.
pub fn exact_terms(params: &SequenceParams) -> Terms<BigInt> {
    Terms::new(BigInt::from(params.b), BigInt::from(params.c))
}

/// Terms reduced mod `q`.
pub fn terms_mod(params: &SequenceParams, q: u64) -> Terms<ModQ> {
    Terms::new(ModQ::from_i64(params.b, q), ModQ::from_i64(params.c, q))
}

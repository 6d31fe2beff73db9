//! Scalar types the recurrence machinery is generic over.
//!
//! Term computation only needs a commutative ring, so the companion-matrix
//! power works unchanged over exact integers (`BigInt`, `i128`, ...), over
//! floating point (`f64`, for size estimates) and over residues mod `q`
//! ([`ModQ`]).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Num;

/// A commutative ring element that can produce its own additive and
/// multiplicative identities.
///
/// `zero_like`/`one_like` take `&self` so that elements carrying context
/// (the modulus of a [`ModQ`]) can build identities in the same ring.
pub trait RingElem: Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
}

impl<T> RingElem for T
where
    T: Num + Clone,
{
    fn zero_like(&self) -> Self {
        T::zero()
    }

    fn one_like(&self) -> Self {
        T::one()
    }
}

/// A residue modulo a word-sized modulus `q >= 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModQ {
    value: u64,
    modulus: u64,
}

impl ModQ {
    pub fn new(value: u64, modulus: u64) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        Self {
            value: value % modulus,
            modulus,
        }
    }

    pub fn from_i64(value: i64, modulus: u64) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        let r = (value as i128).rem_euclid(modulus as i128) as u64;
        Self { value: r, modulus }
    }

    #[inline]
    pub fn value(&self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn pow(self, mut exp: u64) -> Self {
        let mut base = self;
        let mut acc = self.one_like();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }
}

impl fmt::Debug for ModQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl Add for ModQ {
    type Output = Self;

    #[inline]
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let s = self.value as u128 + rhs.value as u128;
        Self {
            value: (s % self.modulus as u128) as u64,
            modulus: self.modulus,
        }
    }
}

impl Sub for ModQ {
    type Output = Self;

    #[inline]
    fn sub(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let value = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.modulus - (rhs.value - self.value)
        };
        Self {
            value,
            modulus: self.modulus,
        }
    }
}

impl Mul for ModQ {
    type Output = Self;

    #[inline]
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Self {
            value: mul_mod(self.value, rhs.value, self.modulus),
            modulus: self.modulus,
        }
    }
}

impl Neg for ModQ {
    type Output = Self;

    fn neg(self) -> Self {
        self.zero_like() - self
    }
}

impl RingElem for ModQ {
    fn zero_like(&self) -> Self {
        Self {
            value: 0,
            modulus: self.modulus,
        }
    }

    fn one_like(&self) -> Self {
        Self {
            value: 1 % self.modulus,
            modulus: self.modulus,
        }
    }
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    if (a | b) >> 32 == 0 {
        a * b % m
    } else {
        ((a as u128 * b as u128) % m as u128) as u64
    }
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

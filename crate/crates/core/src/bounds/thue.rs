//! The degree-`p` Thue form attached to odd-index solutions, and the index
//! bound it yields once a bound `B` on `max(|X|, |Y|)` is known.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{FromPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::ceil_conservative;
use crate::lucas::SequenceParams;

/// `F(X, Y) = b sum_k (-4)^((p-2k-1)/2) C(p, 2k) X^{2k} Y^{p-2k}
///          +   sum_k (-4)^((p-2k-1)/2) C(p, 2k+1) X^{2k+1} Y^{p-2k-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThueForm {
    pub p: u32,
    pub b: i64,
    /// `(i, j) -> coefficient of X^i Y^j`, `i + j = p`.
    pub coefficients: BTreeMap<(u32, u32), BigInt>,
}

#[derive(Serialize, Deserialize)]
struct Monomial {
    x: u32,
    y: u32,
    #[serde(with = "crate::decimal")]
    coefficient: BigInt,
}

#[derive(Serialize, Deserialize)]
struct ThueFormRepr {
    p: u32,
    b: i64,
    terms: Vec<Monomial>,
}

impl Serialize for ThueForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ThueFormRepr {
            p: self.p,
            b: self.b,
            terms: self
                .coefficients
                .iter()
                .map(|(&(x, y), c)| Monomial {
                    x,
                    y,
                    coefficient: c.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ThueForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = ThueFormRepr::deserialize(d)?;
        Ok(Self {
            p: r.p,
            b: r.b,
            coefficients: r.terms.into_iter().map(|m| ((m.x, m.y), m.coefficient)).collect(),
        })
    }
}

impl ThueForm {
    pub fn coefficient(&self, x_exp: u32, y_exp: u32) -> BigInt {
        self.coefficients.get(&(x_exp, y_exp)).cloned().unwrap_or_default()
    }

    pub fn evaluate(&self, x: &BigInt, y: &BigInt) -> BigInt {
        self.coefficients
            .iter()
            .map(|(&(i, j), c)| c * num_traits::pow(x.clone(), i as usize) * num_traits::pow(y.clone(), j as usize))
            .sum()
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
}

/// Expands both sums term by term. `p` must be an odd prime.
pub fn thue_form(params: &SequenceParams, p: u32) -> ThueForm {
    assert!(p % 2 == 1, "p must be odd");
    let b = BigInt::from(params.b());
    let mut coefficients = BTreeMap::new();
    for k in 0..=p / 2 {
        let sign_pow = num_traits::pow(BigInt::from(-4), ((p - 2 * k - 1) / 2) as usize);
        let even = &b * &sign_pow * binomial(p, 2 * k);
        let odd = &sign_pow * binomial(p, 2 * k + 1);
        for ((i, j), c) in [((2 * k, p - 2 * k), even), ((2 * k + 1, p - 2 * k - 1), odd)] {
            if !c.is_zero() {
                *coefficients.entry((i, j)).or_insert_with(BigInt::zero) += c;
            }
        }
    }
    ThueForm {
        p,
        b: params.b(),
        coefficients,
    }
}

/// `ln x` for a positive big integer.
pub(crate) fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x
            .to_string()
            .parse::<f64>()
            .map(f64::ln)
            .unwrap_or(f64::INFINITY)
            .max(0.0);
    }
    let shift = bits - 64;
    let top: BigUint = x >> shift;
    f64::from_u64(top.iter_u64_digits().next().unwrap_or(1)).unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// `n < log(sqrt(5^p d) B^p + sqrt(d)) / log|alpha|` with `d = b^2 + 4c`,
/// rounded up.
pub fn thue_index_bound(params: &SequenceParams, p: u32, big_b: &BigUint) -> BigUint {
    assert!(!big_b.is_zero(), "B must be at least 1");
    thue_index_bound_from_ln(params, p, ln_big(big_b))
}

/// As [`thue_index_bound`], for callers that only know `ln B`.
pub fn thue_index_bound_from_ln(params: &SequenceParams, p: u32, ln_b: f64) -> BigUint {
    let d = params.disc() as f64;
    let p = p as f64;
    // log(sqrt(5^p d) B^p) + log(1 + sqrt(d) / (sqrt(5^p d) B^p))
    let main = 0.5 * (p * 5f64.ln() + d.ln()) + p * ln_b;
    let tail = (-(0.5 * p * 5f64.ln()) - p * ln_b).exp().ln_1p();
    let bound = (main + tail) / params.alpha_abs_log();
    BigUint::from_f64(ceil_conservative(bound)).expect("finite bound")
}

//! Bounds on the exponent `p` of a solution `u_n = y^p`, conditional on the
//! Frey–Mazur conjecture.
//!
//! The final bound is `max{17, AV, Ell}` where `AV = psi(N)^(psi(N)/12 + 1)`
//! covers newforms with irrational coefficients and
//! `Ell = max{17, 4 log|alpha| max{30, N + 1}}` covers rational ones.
//!
//! Every floating-point quantity is rounded up with a small relative
//! margin before the ceiling is taken, so a bound can only err upwards.

mod dims;
mod thue;

pub use dims::{dim_s2_new, genus_x0, irrational_coeff_prime_bound, sturm_bound};
pub use thue::{thue_form, thue_index_bound, thue_index_bound_from_ln, ThueForm};

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{FromPrimitive, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frey::conductor_bound;
use crate::intarith::dedekind_psi;
use crate::lucas::SequenceParams;

/// Largest number of decimal digits a [`PowerBound`] is expanded to.
pub const MAX_EXPANDED_DIGITS: f64 = 200_000.0;

pub(crate) fn ceil_conservative(x: f64) -> f64 {
    (x * (1.0 + 8.0 * f64::EPSILON)).next_up().ceil()
}

/// `base^exponent`, expanded to an exact decimal when it has at most
/// [`MAX_EXPANDED_DIGITS`] digits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PowerBound {
    #[serde(with = "crate::decimal")]
    pub base: BigUint,
    pub exponent: u64,
    #[serde(with = "crate::decimal::option")]
    pub value: Option<BigUint>,
}

impl PowerBound {
    pub fn new(base: BigUint, exponent: u64) -> Self {
        let digits = exponent as f64 * thue::ln_big(&base.clone().max(BigUint::from(1u32))) / std::f64::consts::LN_10;
        let value = (digits <= MAX_EXPANDED_DIGITS).then(|| num_traits::pow(base.clone(), exponent as usize));
        Self { base, exponent, value }
    }

    pub fn exact(value: BigUint) -> Self {
        Self::new(value, 1)
    }

    /// Natural log of the bound.
    pub fn ln(&self) -> f64 {
        if self.base.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.exponent as f64 * thue::ln_big(&self.base)
    }

    fn cmp_bound(&self, other: &Self) -> Ordering {
        match (&self.value, &other.value) {
            (Some(a), Some(b)) => a.cmp(b),
            _ => self.ln().partial_cmp(&other.ln()).unwrap_or(Ordering::Equal),
        }
    }
}

impl std::fmt::Display for PowerBound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (&self.value, self.exponent) {
            (Some(v), _) => write!(f, "{v}"),
            (None, e) => write!(f, "{}^{}", self.base, e),
        }
    }
}

/// `psi(N)^(ceil(psi(N) / 12) + 1)`.
pub fn av_bound(n: u64) -> PowerBound {
    av_from_psi(dedekind_psi(n))
}

fn av_from_psi(psi: BigUint) -> PowerBound {
    let (q, r) = psi.div_rem(&BigUint::from(12u32));
    let ceil = q + if r.is_zero() { 0u32 } else { 1u32 };
    let exponent = ceil.to_u64().expect("exponent fits in 64 bits") + 1;
    PowerBound::new(psi, exponent)
}

/// `ceil(4 n log|alpha|)`.
pub fn p_from_n_bound(params: &SequenceParams, n: u64) -> u64 {
    ceil_conservative(4.0 * n as f64 * params.alpha_abs_log()) as u64
}

/// `max{30, p_m + 1}` for the largest prime `p_m` of the list.
pub fn smooth_index_bound(primes: &[u64]) -> Result<u64> {
    let largest = primes.iter().max().ok_or(Error::EmptyList)?;
    Ok((largest + 1).max(30))
}

fn ell_from(params: &SequenceParams, level: &BigUint) -> BigUint {
    let m = (level + 1u32).max(BigUint::from(30u32));
    let x = 4.0 * params.alpha_abs_log() * m.to_f64().unwrap_or(f64::INFINITY);
    let bound = BigUint::from_f64(ceil_conservative(x)).expect("finite bound");
    bound.max(BigUint::from(17u32))
}

/// `max{17, ceil(4 log|alpha| max{30, N + 1})}` with `N` the conductor bound.
pub fn ell_bound(params: &SequenceParams) -> BigUint {
    ell_from(params, &conductor_bound(params).value)
}

/// The same bound with `N` replaced by its largest prime factor.
pub fn ell_bound_sharp(params: &SequenceParams) -> BigUint {
    let q = conductor_bound(params).largest_prime();
    ell_from(params, &BigUint::from(q))
}

/// The contribution `B(l) C(l) = l N(c_l^2 - (l+1)^2) prod_r N(c_l - r)`
/// of one auxiliary prime `l`, from caller-supplied norms.
///
/// A zero result means this `l` carries no information.
pub fn congruence_contribution(ell: u64, norm_b: &BigInt, norms_c: &[BigInt]) -> Result<BigInt> {
    if norms_c.is_empty() {
        return Err(Error::EmptyNorms);
    }
    Ok(norms_c.iter().fold(BigInt::from(ell) * norm_b, |acc, c| acc * c))
}

/// gcd over the nonzero contributions; zero when none is informative.
pub fn gcd_of_contributions(contributions: &[BigInt]) -> BigInt {
    contributions
        .iter()
        .filter(|c| !c.is_zero())
        .fold(BigInt::zero(), |acc, c| acc.gcd(c))
}

/// Per-sequence bounds for `1 <= b, c <= 10` with `gcd(b, c) = 1`: every
/// solution has `p <= 19`, and `p <= 17` when `c = 1`. Recorded results,
/// not recomputed (they need newform coefficients).
pub fn documented_sharp_bound(b: i64, c: i64) -> Option<u32> {
    let in_range = (1..=10).contains(&b) && (1..=10).contains(&c) && b.gcd(&c) == 1;
    in_range.then_some(if c == 1 { 17 } else { 19 })
}

/// Where the final bound comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundSource {
    Floor,
    Av,
    Ell,
}

/// Every intermediate quantity of the assembled exponent bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundReport {
    pub b: i64,
    pub c: i64,
    #[serde(rename = "N", with = "crate::decimal")]
    pub n: BigUint,
    #[serde(rename = "psiN", with = "crate::decimal")]
    pub psi_n: BigUint,
    pub av_bound: PowerBound,
    #[serde(with = "crate::decimal")]
    pub ell_bound: BigUint,
    #[serde(with = "crate::decimal")]
    pub ell_bound_sharp: BigUint,
    pub final_p: PowerBound,
    pub final_source: BoundSource,
    pub largest_prime_of_n: u64,
    pub alpha_abs_log: f64,
}

/// Assembles `N`, `psi(N)`, the AV and Ell terms and their maximum.
pub fn combined_bound(params: &SequenceParams) -> BoundReport {
    let conductor = conductor_bound(params);
    let psi_n = conductor.factorization.psi();
    let av = av_from_psi(psi_n.clone());
    let ell = ell_bound(params);
    let ell_pb = PowerBound::exact(ell.clone());
    let floor = PowerBound::exact(BigUint::from(17u32));
    let (final_p, final_source) = [
        (floor, BoundSource::Floor),
        (av.clone(), BoundSource::Av),
        (ell_pb, BoundSource::Ell),
    ]
    .into_iter()
    .max_by(|a, b| a.0.cmp_bound(&b.0))
    .unwrap();
    BoundReport {
        b: params.b(),
        c: params.c(),
        n: conductor.value.clone(),
        psi_n,
        av_bound: av,
        ell_bound: ell,
        ell_bound_sharp: ell_bound_sharp(params),
        final_p,
        final_source,
        largest_prime_of_n: conductor.largest_prime(),
        alpha_abs_log: params.alpha_abs_log(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(b: i64, c: i64) -> SequenceParams {
        SequenceParams::new(b, c).unwrap()
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn av_examples() {
        let a = av_bound(256);
        assert_eq!((a.base.clone(), a.exponent), (big(384), 33));
        assert_eq!(a.value, Some(num_traits::pow(big(384), 33)));
        assert_eq!(av_bound(1).value, Some(big(1)));
        let a = av_bound(1280);
        assert_eq!((a.base, a.exponent), (big(2304), 193));
    }

    #[test]
    fn av_exponent_rounds_up() {
        // psi(2) = 3: 3 / 12 + 1 = 1.25 -> exponent 2
        assert_eq!(av_bound(2).exponent, 2);
        assert_eq!(av_bound(11).exponent, 2);
    }

    #[test]
    fn p_from_n_examples() {
        assert_eq!(p_from_n_bound(&params(1, 1), 12), 24);
        assert_eq!(p_from_n_bound(&params(3, -2), 1), 3);
        assert_eq!(p_from_n_bound(&params(1, 1), 1), 2);
    }

    #[test]
    fn smooth_index_examples() {
        assert_eq!(smooth_index_bound(&[2, 3, 5]), Ok(30));
        assert_eq!(smooth_index_bound(&[2, 257]), Ok(258));
        assert_eq!(smooth_index_bound(&[29]), Ok(30));
        assert_eq!(smooth_index_bound(&[]), Err(Error::EmptyList));
    }

    #[test]
    fn ell_examples() {
        assert_eq!(ell_bound(&params(3, -2)), big(713));
        assert_eq!(ell_bound(&params(1, 1)), big(2466));
        // largest prime of 256 is 2: max{30, 3} = 30, 4 ln 2 * 30 = 83.18
        assert_eq!(ell_bound_sharp(&params(3, -2)), big(84));
    }

    #[test]
    fn ell_floor_is_seventeen() {
        let p = params(3, -2);
        assert_eq!(ell_from(&p, &big(1)), big(84));
        assert!(ell_from(&params(1, 1), &big(0)) >= big(17));
    }

    #[test]
    fn congruence_contribution_examples() {
        let ones = vec![BigInt::from(1); 5];
        assert_eq!(congruence_contribution(2, &BigInt::from(1), &ones), Ok(BigInt::from(2)));
        let mut c = vec![BigInt::from(1); 7];
        c[0] = BigInt::from(2);
        assert_eq!(congruence_contribution(3, &BigInt::from(5), &c), Ok(BigInt::from(30)));
        c[3] = BigInt::zero();
        assert_eq!(congruence_contribution(3, &BigInt::from(5), &c), Ok(BigInt::zero()));
        assert_eq!(
            congruence_contribution(3, &BigInt::from(5), &[]),
            Err(Error::EmptyNorms)
        );
    }

    #[test]
    fn contributions_gcd_skips_zero() {
        let g = gcd_of_contributions(&[BigInt::from(30), BigInt::zero(), BigInt::from(-42)]);
        assert_eq!(g, BigInt::from(6));
        assert!(gcd_of_contributions(&[BigInt::zero()]).is_zero());
    }

    #[test]
    fn combined_examples() {
        let r = combined_bound(&params(3, -2));
        assert_eq!(r.n, big(256));
        assert_eq!(r.psi_n, big(384));
        assert_eq!(r.ell_bound, big(713));
        assert_eq!(r.final_source, BoundSource::Av);
        assert_eq!(r.final_p.value, Some(num_traits::pow(big(384), 33)));
        assert_eq!(r.largest_prime_of_n, 2);
        let r = combined_bound(&params(1, 1));
        assert_eq!(r.final_p.value, Some(num_traits::pow(big(2304), 193)));
        for (b, c) in [(1, 1), (2, 1), (5, -6), (7, 3), (-9, 11)] {
            let r = combined_bound(&params(b, c));
            assert!(r.final_p.cmp_bound(&PowerBound::exact(big(17))) != Ordering::Less);
        }
    }

    #[test]
    fn huge_power_stays_symbolic() {
        let p = PowerBound::new(big(10), 1_000_000);
        assert!(p.value.is_none());
        assert_eq!(p.to_string(), "10^1000000");
        assert!((p.ln() - 1e6 * 10f64.ln()).abs() < 1e-3);
    }

    #[test]
    fn conductor_shape() {
        for b in -6i64..=6 {
            for c in -6i64..=6 {
                let Ok(p) = SequenceParams::new(b, c) else { continue };
                if b.gcd(&c) != 1 {
                    continue;
                }
                let n = combined_bound(&p).n;
                let (m, r) = n.div_rem(&big(256));
                assert!(r.is_zero() && m.is_odd(), "({b},{c})");
                let cd = BigInt::from(c) * BigInt::from(p.disc());
                assert!((cd % BigInt::from(m.clone())).is_zero(), "({b},{c})");
            }
        }
    }

    #[test]
    fn documented_table() {
        assert_eq!(documented_sharp_bound(3, 1), Some(17));
        assert_eq!(documented_sharp_bound(3, 2), Some(19));
        assert_eq!(documented_sharp_bound(2, 4), None);
        assert_eq!(documented_sharp_bound(11, 1), None);
    }

    #[test]
    fn report_json_round_trip() {
        let r = combined_bound(&params(3, -2));
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"N\":\"256\""));
        assert!(json.contains("\"psiN\":\"384\""));
        let back: BoundReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}

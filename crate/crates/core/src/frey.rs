//! Frey curves attached to a hypothetical solution `u_n = y^p`.
//!
//! A solution gives a primitive solution of the twisted generalized Fermat
//! equation `(b^2 + 4c) X^p + 4(-c)^n Y^p = Z^2` (with `X = y^2`,
//! `Z = v_n`), and the Bennett–Skinner recipes for `A x^p + B y^p = C z^2`
//! attach one of nine Weierstrass models depending on 2-adic data of
//! `b`, `c`, `y` and `w_n = ±v_n`.
//!
//! Everything here is checkable without a genuine solution: `y^{2p}` and
//! `y^{4p}` are replaced by `u_n^2` and `u_n^4` when discriminant formulas
//! are evaluated.
//!
//! # Errata in the printed case table
//!
//! Four of the printed models carry `u_n X` where the Bennett–Skinner
//! parameters (`b = y^2`, so `B b^p = B u_n^2`) give `u_n^2 X`: cases 2, 7,
//! 8 and 9. Case 4 prints its discriminant with `y^{2p}` where the model
//! and the parameter row both give `y^{4p}`. [`Template::Corrected`] uses
//! the consistent versions; [`Template::Printed`] keeps the table verbatim
//! so that the discrepancies stay testable.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intarith::{factor, radical, Factorization};
use crate::lucas::{term_pair, SequenceParams};

/// Index of a row in the Frey-curve case table.
pub type CaseId = u8;

/// A hypothetical solution `u_n = y^p`, carried by the exact terms.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionHypothesis {
    pub params: SequenceParams,
    pub n: u64,
    pub u: BigInt,
    pub v: BigInt,
    pub y_parity_even: bool,
}

impl SolutionHypothesis {
    /// The hypothesis at index `n >= 7`.
    pub fn new(params: SequenceParams, n: u64) -> Result<Self> {
        if n < 7 {
            return Err(Error::IndexTooSmall(n));
        }
        Ok(Self::at_any_index(params, n))
    }

    /// Same as [`SolutionHypothesis::new`] without the `n >= 7` guard.
    pub fn at_any_index(params: SequenceParams, n: u64) -> Self {
        let t = term_pair(&params, n);
        let y_parity_even = t.u.is_even();
        Self {
            params,
            n,
            u: t.u,
            v: t.v,
            y_parity_even,
        }
    }

    /// `(-c)^n`.
    pub fn neg_c_pow(&self) -> BigInt {
        self.params.neg_c_pow(self.n)
    }
}

/// A selected row of the case table together with the sign choice
/// `w_n = sign * v_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FreyCase {
    pub id: CaseId,
    pub description: String,
    /// 2-exponent in front of the conductor radical, as printed (case 9
    /// can be -1).
    pub alpha_exponent: i32,
    pub w_sign: i8,
}

/// Which version of the table to instantiate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Template {
    Printed,
    Corrected,
}

/// Arguments that may appear inside a conductor radical.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum RadicalArg {
    Two,
    C,
    Disc,
    OddPart,
    Y,
}

/// `N = 2^two_exponent * rad(prod of args)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConductorFormula {
    pub two_exponent: i32,
    pub radical_of: Vec<RadicalArg>,
}

impl ConductorFormula {
    /// Evaluates the formula. With `y = None` the `y` factor is dropped,
    /// which is the level after level lowering.
    pub fn evaluate(&self, params: &SequenceParams, y: Option<u64>) -> BigUint {
        let mut f = Factorization::default();
        for arg in &self.radical_of {
            let part = match arg {
                RadicalArg::Two => factor(2),
                RadicalArg::C => factor(params.c().unsigned_abs()),
                RadicalArg::Disc => factor(params.disc().unsigned_abs()),
                RadicalArg::OddPart => factor(params.odd_part().unsigned_abs()),
                RadicalArg::Y => match y {
                    Some(y) if y > 0 => factor(y),
                    _ => Factorization::default(),
                },
            };
            f = f.merge(&part);
        }
        let rad: BigUint = f.primes().map(BigUint::from).product();
        if self.two_exponent >= 0 {
            rad << self.two_exponent as usize
        } else {
            // rad contains the factor 2 whenever the exponent is negative
            rad >> (-self.two_exponent) as usize
        }
    }
}

/// The long Weierstrass model of the Frey curve for one hypothesis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FreyModel {
    #[serde(with = "crate::decimal")]
    pub a1: BigInt,
    #[serde(with = "crate::decimal")]
    pub a2: BigInt,
    #[serde(with = "crate::decimal")]
    pub a3: BigInt,
    #[serde(with = "crate::decimal")]
    pub a4: BigInt,
    #[serde(with = "crate::decimal")]
    pub a6: BigInt,
    pub case_id: CaseId,
    pub w_sign: i8,
    pub template: Template,
    /// The case's discriminant formula evaluated at the hypothesis.
    #[serde(with = "crate::decimal")]
    pub formula_delta: BigInt,
    pub conductor_formula: ConductorFormula,
}

impl FreyModel {
    pub fn discriminant(&self) -> BigInt {
        model_discriminant(self)
    }
}

/// Exponents of `Δ = 2^two * disc^disc * D^odd * ((-c)^n)^negc * u^u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct DeltaShape {
    two: i64,
    disc: u32,
    odd: u32,
    neg_c: u32,
    u: u32,
}

/// 2-adic and parity data shared by the case conditions.
struct Local {
    disc_mod4: i64,
    k: u32,
    d_mod4: i64,
    c_even: bool,
    y_even: bool,
    neg_c_mod4: i64,
}

impl Local {
    fn of(h: &SolutionHypothesis) -> Self {
        let p = &h.params;
        Self {
            disc_mod4: p.disc().mod_floor(&4),
            k: p.k2(),
            d_mod4: p.odd_part().mod_floor(&4),
            c_even: p.c() % 2 == 0,
            y_even: h.y_parity_even,
            neg_c_mod4: h.neg_c_pow().mod_floor(&BigInt::from(4)).to_i64().unwrap(),
        }
    }
}

fn mod4(x: &BigInt) -> i64 {
    x.mod_floor(&BigInt::from(4)).to_i64().unwrap()
}

/// `ŵ = w / 2` when `w` is even.
fn half(w: &BigInt) -> Option<BigInt> {
    w.is_even().then(|| w / 2)
}

fn description(id: CaseId) -> &'static str {
    match id {
        1 => "b^2+4c = 1 mod 4; y, w_n, c odd; w_n = -(-c)^n mod 4",
        2 => "b^2+4c = 0 or 1 mod 4; y, w_n even; c odd; w_n = 2 w^_n with w^_n = 1 mod 4",
        3 => "b^2+4c = 1 mod 4; c even; y, w_n odd; w_n = 1 mod 4",
        4 => "k = 2; y odd; D = -1 mod 4",
        5 => "k = 2; y odd; D = 1 mod 4",
        6 => "k = 3; y odd; w_n = 2 w^_n",
        7 => "k = 4; y odd; w_n = 2 w^_n with w^_n = -D mod 4",
        8 => "k = 5, 6, 7; y odd; w_n = 2 w^_n with w^_n = 1 mod 4",
        9 => "k >= 8; y odd; w_n = 2 w^_n with w^_n = 1 mod 4",
        _ => unreachable!("case ids run from 1 to 9"),
    }
}

fn conditions_hold(id: CaseId, l: &Local, w: &BigInt) -> bool {
    let w_odd = w.is_odd();
    let hat_mod4 = half(w).map(|h| mod4(&h));
    match id {
        1 => l.disc_mod4 == 1 && !l.y_even && w_odd && !l.c_even && mod4(w) == (-l.neg_c_mod4).rem_euclid(4),
        2 => matches!(l.disc_mod4, 0 | 1) && l.y_even && !l.c_even && hat_mod4 == Some(1),
        3 => l.disc_mod4 == 1 && l.c_even && !l.y_even && w_odd && mod4(w) == 1,
        4 => l.k == 2 && !l.y_even && l.d_mod4 == 3,
        5 => l.k == 2 && !l.y_even && l.d_mod4 == 1,
        6 => l.k == 3 && !l.y_even && !w_odd,
        7 => l.k == 4 && !l.y_even && hat_mod4 == Some((-l.d_mod4).rem_euclid(4)),
        8 => (5..=7).contains(&l.k) && !l.y_even && hat_mod4 == Some(1),
        9 => l.k >= 8 && !l.y_even && hat_mod4 == Some(1),
        _ => false,
    }
}

/// Cases whose printed conditions constrain `w_n` modulo 4, so that the
/// sign of `w_n = ±v_n` is free.
fn sign_is_free(id: CaseId) -> bool {
    matches!(id, 1 | 2 | 3 | 7 | 8 | 9)
}

fn alpha_exponent(id: CaseId, l: &Local) -> i32 {
    match id {
        1 => {
            if l.neg_c_mod4 == 3 {
                1
            } else {
                2
            }
        }
        2 | 3 => 0,
        4 | 5 => 5,
        6 => 6,
        7 => {
            if l.d_mod4 == 3 {
                1
            } else {
                2
            }
        }
        8 => {
            if l.k == 5 {
                4
            } else {
                2
            }
        }
        9 => {
            if l.k == 8 {
                -1
            } else {
                0
            }
        }
        _ => unreachable!(),
    }
}

/// Picks the first row (in printed order) whose conditions can be met for
/// some sign `w_n = ±v_n`.
///
/// Requires `gcd(b, c) = 1`; otherwise use [`conductor_bound_noncoprime`].
pub fn select_case(h: &SolutionHypothesis) -> Result<FreyCase> {
    let p = &h.params;
    if p.b().gcd(&p.c()) != 1 {
        return Err(Error::NoApplicableCase(format!(
            "gcd(b, c) = {} is not 1",
            p.b().gcd(&p.c())
        )));
    }
    let l = Local::of(h);
    for id in 1..=9u8 {
        let signs: &[i8] = if sign_is_free(id) { &[1, -1] } else { &[1] };
        for &s in signs {
            let w = &h.v * BigInt::from(s);
            if conditions_hold(id, &l, &w) {
                return Ok(FreyCase {
                    id,
                    description: description(id).to_string(),
                    alpha_exponent: alpha_exponent(id, &l),
                    w_sign: s,
                });
            }
        }
    }
    Err(Error::NoApplicableCase(format!(
        "k = {}, c {}, y {}, v_n = {} mod 8",
        l.k,
        if l.c_even { "even" } else { "odd" },
        if l.y_even { "even" } else { "odd" },
        h.v.mod_floor(&BigInt::from(8)),
    )))
}

fn exact_div(num: BigInt, den: &BigInt, case: CaseId, what: &'static str) -> Result<BigInt> {
    let (q, r) = num.div_rem(den);
    if r.is_zero() {
        Ok(q)
    } else {
        Err(Error::NonIntegralCoefficient { case, what })
    }
}

fn pow2(e: u32) -> BigInt {
    BigInt::one() << e as usize
}

struct RawModel {
    a1: BigRational,
    a2: BigRational,
    a4: BigRational,
}

fn raw_coefficients(h: &SolutionHypothesis, case: &FreyCase, template: Template) -> RawModel {
    let p = &h.params;
    let rat = |x: BigInt| BigRational::from_integer(x);
    let w = &h.v * BigInt::from(case.w_sign);
    let w_hat = BigRational::new(w.clone(), BigInt::from(2));
    let cn = h.neg_c_pow();
    let disc = BigInt::from(p.disc());
    let d = BigInt::from(p.odd_part());
    let k = p.k2();
    let u = &h.u;
    // Cases 2, 7, 8, 9 print `u_n X`; the consistent coefficient is `u_n^2 X`.
    let u_lin = match template {
        Template::Printed => u.clone(),
        Template::Corrected => u * u,
    };
    let quarter = |x: BigRational| (x - BigRational::one()) / rat(BigInt::from(4));
    let (a1, a2, a4) = match case.id {
        1 => (0, rat(w), rat(cn)),
        2 => (1, quarter(w_hat), BigRational::new(&disc * u_lin, pow2(8))),
        3 => (1, quarter(rat(w)), BigRational::new(cn, pow2(4))),
        4 => (0, rat(w), rat(&d * u * u)),
        5 => (0, rat(w), rat(cn)),
        6 => (0, rat(w), rat(BigInt::from(2) * &d * u * u)),
        7 => (0, w_hat, rat(&d * u_lin)),
        8 => (0, w_hat, rat(pow2(k - 4) * &d * u_lin)),
        9 => (1, quarter(w_hat), BigRational::new(&d * u_lin * pow2(k), pow2(8))),
        _ => unreachable!(),
    };
    RawModel {
        a1: rat(BigInt::from(a1)),
        a2,
        a4,
    }
}

fn delta_shape(id: CaseId, k: u32, template: Template) -> DeltaShape {
    let k = k as i64;
    let s = |two, disc, odd, neg_c, u| DeltaShape {
        two,
        disc,
        odd,
        neg_c,
        u,
    };
    match id {
        1 => s(4, 1, 0, 2, 2),
        2 => s(-16, 2, 0, 1, 4),
        3 => s(-8, 1, 0, 2, 2),
        4 => match template {
            Template::Printed => s(6, 0, 2, 1, 2),
            Template::Corrected => s(6, 0, 2, 1, 4),
        },
        5 => s(6, 0, 1, 2, 2),
        6 => s(8, 0, 2, 1, 4),
        7 => s(4, 0, 2, 1, 4),
        8 => s(2 * k - 4, 0, 2, 1, 4),
        9 => s(2 * k - 16, 0, 2, 1, 4),
        _ => unreachable!(),
    }
}

fn delta_formula(h: &SolutionHypothesis, id: CaseId, template: Template) -> BigRational {
    let p = &h.params;
    let shape = delta_shape(id, p.k2(), template);
    let body = num_traits::pow(BigInt::from(p.disc()), shape.disc as usize)
        * num_traits::pow(BigInt::from(p.odd_part()), shape.odd as usize)
        * num_traits::pow(h.neg_c_pow(), shape.neg_c as usize)
        * num_traits::pow(h.u.clone(), shape.u as usize);
    if shape.two >= 0 {
        BigRational::from_integer(body << shape.two as usize)
    } else {
        BigRational::new(body, pow2((-shape.two) as u32))
    }
}

fn conductor_formula(id: CaseId, alpha: i32) -> ConductorFormula {
    use RadicalArg::*;
    let radical_of = match id {
        1 => vec![Two, C, Disc, Y],
        2 | 3 => vec![C, Disc, Y],
        4 | 5 => vec![C, OddPart, Y],
        _ => vec![C, Two, OddPart, Y],
    };
    ConductorFormula {
        two_exponent: alpha,
        radical_of,
    }
}

fn discriminant_of(
    a1: &BigRational,
    a2: &BigRational,
    a3: &BigRational,
    a4: &BigRational,
    a6: &BigRational,
) -> BigRational {
    let c = |n: i64| BigRational::from_integer(BigInt::from(n));
    let b2 = a1 * a1 + c(4) * a2;
    let b4 = c(2) * a4 + a1 * a3;
    let b6 = a3 * a3 + c(4) * a6;
    let b8 = a1 * a1 * a6 + c(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    -(&b2 * &b2 * &b8) - c(8) * &b4 * &b4 * &b4 - c(27) * &b6 * &b6 + c(9) * &b2 * &b4 * &b6
}

/// Discriminant of a long Weierstrass equation via `b2, b4, b6, b8`.
pub fn model_discriminant(m: &FreyModel) -> BigInt {
    let r = |x: &BigInt| BigRational::from_integer(x.clone());
    discriminant_of(&r(&m.a1), &r(&m.a2), &r(&m.a3), &r(&m.a4), &r(&m.a6)).to_integer()
}

/// Builds the consistent model for `case`; see [`build_model_with`].
pub fn build_model(h: &SolutionHypothesis, case: &FreyCase) -> Result<FreyModel> {
    build_model_with(h, case, Template::Corrected)
}

/// Instantiates the Weierstrass model of `case` at `h`.
///
/// Every division by 4, 2^4 or 2^8 must be exact; a remainder is reported
/// as [`Error::NonIntegralCoefficient`] and never rounded.
pub fn build_model_with(h: &SolutionHypothesis, case: &FreyCase, template: Template) -> Result<FreyModel> {
    let raw = raw_coefficients(h, case, template);
    let integral = |x: BigRational, what| {
        if x.is_integer() {
            Ok(x.to_integer())
        } else {
            Err(Error::NonIntegralCoefficient { case: case.id, what })
        }
    };
    let a1 = integral(raw.a1, "a1")?;
    let a2 = integral(raw.a2, "a2")?;
    let a4 = integral(raw.a4, "a4")?;
    let delta = delta_formula(h, case.id, template);
    let formula_delta = exact_div(delta.numer().clone(), delta.denom(), case.id, "discriminant formula")?;
    Ok(FreyModel {
        a1,
        a2,
        a3: BigInt::zero(),
        a4,
        a6: BigInt::zero(),
        case_id: case.id,
        w_sign: case.w_sign,
        template,
        formula_delta,
        conductor_formula: conductor_formula(case.id, case.alpha_exponent),
    })
}

/// Whether the model's discriminant equals the case's discriminant formula
/// (consistent table).
pub fn check_delta_identity(h: &SolutionHypothesis, case: &FreyCase) -> Result<bool> {
    let m = build_model(h, case)?;
    Ok(model_discriminant(&m) == m.formula_delta)
}

/// The same comparison for the table exactly as printed, done in rational
/// arithmetic so that non-integral printed coefficients still compare.
pub fn check_printed_delta_identity(h: &SolutionHypothesis, case: &FreyCase) -> bool {
    let raw = raw_coefficients(h, case, Template::Printed);
    let zero = BigRational::zero();
    let model = discriminant_of(&raw.a1, &raw.a2, &zero, &raw.a4, &zero);
    model == delta_formula(h, case.id, Template::Printed)
}

/// `N = 2^8 rad'(c) rad'(b^2 + 4c)` with its factorization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConductorBound {
    #[serde(with = "crate::decimal")]
    pub value: BigUint,
    pub factorization: Factorization,
}

impl ConductorBound {
    fn from_factorization(factorization: Factorization) -> Self {
        Self {
            value: factorization.value(),
            factorization,
        }
    }

    pub fn largest_prime(&self) -> u64 {
        self.factorization.largest_prime().unwrap_or(1)
    }

    /// The value as a machine word, when it fits.
    pub fn to_u64(&self) -> Option<u64> {
        self.value.to_u64()
    }
}

fn odd_primes_of(m: i64) -> Vec<(u64, u32)> {
    factor(m.unsigned_abs())
        .primes()
        .filter(|&p| p != 2)
        .map(|p| (p, 1))
        .collect()
}

/// `N = 2^8 rad'(c) rad'(b^2 + 4c)`.
pub fn conductor_bound(params: &SequenceParams) -> ConductorBound {
    let mut pairs = vec![(2, 8)];
    pairs.extend(odd_primes_of(params.c()));
    pairs.extend(odd_primes_of(params.disc()));
    ConductorBound::from_factorization(Factorization::from_pairs(pairs))
}

/// For `A = gcd(b, c) > 1`: `2^8 rad'(A')^2 rad'(c (b^2 + 4c) / A^2)` with
/// `A'` the squarefree part of `A`. Returns `None` when `gcd(b, c) = 1`.
pub fn conductor_bound_noncoprime(params: &SequenceParams) -> Option<ConductorBound> {
    let a = params.b().gcd(&params.c());
    if a == 1 {
        return None;
    }
    let a_fact = factor(a.unsigned_abs());
    let mut rest: std::collections::BTreeMap<u64, i64> = std::collections::BTreeMap::new();
    for part in [factor(params.c().unsigned_abs()), factor(params.disc().unsigned_abs())] {
        for &(p, e) in part.pairs() {
            *rest.entry(p).or_default() += e as i64;
        }
    }
    for &(p, e) in a_fact.pairs() {
        *rest.entry(p).or_default() -= 2 * e as i64;
    }
    let mut pairs = vec![(2, 8)];
    for &(p, e) in a_fact.pairs() {
        if p != 2 && e % 2 == 1 {
            pairs.push((p, 2));
        }
    }
    for (p, e) in rest {
        debug_assert!(e >= 0, "A^2 divides c (b^2 + 4c)");
        if p != 2 && e > 0 {
            pairs.push((p, 1));
        }
    }
    Some(ConductorBound::from_factorization(Factorization::from_pairs(pairs)))
}

/// Levels `rad(c)` whose weight-2 newform space is trivial, for
/// sequences with `b^2 + 4c = 1`.
pub const TRIVIAL_NEWFORM_LEVELS: [u64; 4] = [2, 6, 10, 22];

/// All `(b, c)` with odd `3 <= b <= bound`, `c = (1 - b^2) / 4` and
/// `rad(c)` in [`TRIVIAL_NEWFORM_LEVELS`], by increasing `b`.
pub fn search_unit_discriminant_sequences(bound: u64) -> Vec<(i64, i64)> {
    (3..=bound as i64)
        .step_by(2)
        .filter_map(|b| {
            let c = (1 - b * b) / 4;
            let r = radical(c).ok()?;
            TRIVIAL_NEWFORM_LEVELS.contains(&r).then_some((b, c))
        })
        .collect()
}

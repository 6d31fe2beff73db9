//! Reports assembled by the front end from several core calls.

use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

use lps_core::bounds::{
    dim_s2_new, genus_x0, irrational_coeff_prime_bound, sturm_bound, thue_form, thue_index_bound, ThueForm,
};
use lps_core::frey::{
    build_model, check_delta_identity, check_printed_delta_identity, conductor_bound, conductor_bound_noncoprime,
    model_discriminant, search_unit_discriminant_sequences, select_case, ConductorBound, FreyCase, FreyModel,
    SolutionHypothesis,
};
use lps_core::intarith::{dedekind_psi, radical};
use lps_core::sieve::{scan_powers, sieve_run, ScanReport, SieveConfig, Verdict};
use lps_core::SequenceParams;

/// Frey curve of the hypothesis at index `n`, or why none was built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FreyReport {
    pub b: i64,
    pub c: i64,
    pub n: u64,
    pub case: Option<FreyCase>,
    pub model: Option<FreyModel>,
    #[serde(with = "decimal_opt")]
    pub model_discriminant: Option<BigInt>,
    pub delta_identity: Option<bool>,
    pub printed_delta_identity: Option<bool>,
    pub case_error: Option<String>,
    pub conductor_bound: ConductorBound,
    pub noncoprime_conductor_bound: Option<ConductorBound>,
}

pub fn frey(params: SequenceParams, n: u64) -> lps_core::Result<FreyReport> {
    let h = SolutionHypothesis::new(params, n)?;
    let mut report = FreyReport {
        b: params.b(),
        c: params.c(),
        n,
        case: None,
        model: None,
        model_discriminant: None,
        delta_identity: None,
        printed_delta_identity: None,
        case_error: None,
        conductor_bound: conductor_bound(&params),
        noncoprime_conductor_bound: conductor_bound_noncoprime(&params),
    };
    let built = select_case(&h).and_then(|case| {
        let model = build_model(&h, &case)?;
        let identity = check_delta_identity(&h, &case)?;
        Ok((case, model, identity))
    });
    match built {
        Ok((case, model, identity)) => {
            report.printed_delta_identity = Some(check_printed_delta_identity(&h, &case));
            report.model_discriminant = Some(model_discriminant(&model));
            report.delta_identity = Some(identity);
            report.case = Some(case);
            report.model = Some(model);
        }
        Err(e) => report.case_error = Some(e.to_string()),
    }
    Ok(report)
}

/// Weight-2 dimension data at one level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DimsReport {
    pub level: u64,
    #[serde(with = "decimal")]
    pub psi: BigUint,
    pub genus: u64,
    pub dim_new: u64,
    /// `1 + psi / 12`, rounded down.
    pub dim_bound: u64,
    pub weight: u64,
    pub sturm_bound: u64,
    pub irrational_coeff_prime_bound: u64,
}

pub fn dims(level: u64, weight: u64) -> DimsReport {
    let psi = dedekind_psi(level);
    let psi_small = u64::try_from(&psi).expect("psi of a u64 level below 2^64 for supported levels");
    DimsReport {
        level,
        psi,
        genus: genus_x0(level),
        dim_new: dim_s2_new(level),
        dim_bound: 1 + psi_small / 12,
        weight,
        sturm_bound: sturm_bound(level, weight),
        irrational_coeff_prime_bound: irrational_coeff_prime_bound(level),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct UnitDiscriminantPair {
    pub b: i64,
    pub c: i64,
    pub rad_c: u64,
}

/// Sequences with `b^2 + 4c = 1` and a trivial newform space at `rad(c)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchReport {
    pub bound: u64,
    pub pairs: Vec<UnitDiscriminantPair>,
}

pub fn search(bound: u64) -> SearchReport {
    let pairs = search_unit_discriminant_sequences(bound)
        .into_iter()
        .map(|(b, c)| UnitDiscriminantPair {
            b,
            c,
            rad_c: radical(c).expect("c is nonzero for b >= 3"),
        })
        .collect();
    SearchReport { bound, pairs }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ThueReport {
    pub b: i64,
    pub c: i64,
    pub p: u32,
    pub form: ThueForm,
    /// Bound on `max(|X|, |Y|)` the index bound was derived from.
    #[serde(rename = "B", with = "decimal_opt")]
    pub solution_bound: Option<BigUint>,
    #[serde(with = "decimal_opt")]
    pub index_bound: Option<BigUint>,
}

pub fn thue(params: &SequenceParams, p: u32, solution_bound: Option<BigUint>) -> ThueReport {
    ThueReport {
        b: params.b(),
        c: params.c(),
        p,
        form: thue_form(params, p),
        index_bound: solution_bound.as_ref().map(|big_b| thue_index_bound(params, p, big_b)),
        solution_bound,
    }
}

/// One scan compared with its expected power list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanCheck {
    pub report: ScanReport,
    /// Expected `(n, y, p)` triples, `y` as a decimal string.
    pub expected: Vec<(u64, String, u64)>,
    pub matches: bool,
}

/// One sieve run compared with the expected survivors `{0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SieveCheck {
    pub b: i64,
    pub c: i64,
    pub p: u64,
    pub verdict: Verdict,
    pub powers: Vec<u64>,
    pub primes_consumed: usize,
    pub largest_q: u64,
    pub elapsed_ms: u64,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReproReport {
    pub scans: Vec<ScanCheck>,
    pub search: SearchReport,
    pub search_matches: bool,
    #[serde(rename = "B", with = "decimal")]
    pub sieve_bound: BigUint,
    pub sieves: Vec<SieveCheck>,
    pub all_match: bool,
}

/// `(b, c, n_max, [(n, y, p)])`: a scan and its expected powers.
pub type ScanCase = (i64, i64, u64, &'static [(u64, i64, u64)]);

/// Scan set with known answers.
pub const SCAN_SET: [ScanCase; 7] = [
    (1, 1, 5000, &[(6, 2, 3), (12, 12, 2)]),
    (2, 1, 2000, &[(7, 13, 2)]),
    (3, -2, 1000, &[]),
    (5, -6, 1000, &[]),
    (7, -12, 1000, &[]),
    (17, -72, 1000, &[]),
    (9, -20, 1000, &[(2, 3, 2)]),
];

/// Pairs expected from the unit-discriminant search.
pub const UNIT_DISCRIMINANT_PAIRS: [(i64, i64); 5] = [(3, -2), (5, -6), (7, -12), (9, -20), (17, -72)];

/// Sequences and exponents of the desk-scale sieve check.
pub const SIEVE_SET: ([i64; 3], [u64; 5]) = ([3, 5, 7], [5, 7, 11, 13, 17]);

pub fn scan_check(b: i64, c: i64, n_max: u64, expected: &[(u64, i64, u64)]) -> ScanCheck {
    let params = SequenceParams::new(b, c).expect("scan set sequences are valid");
    let report = scan_powers(&params, n_max);
    let want: Vec<(u64, BigInt, u64)> = expected.iter().map(|&(n, y, p)| (n, y.into(), p)).collect();
    ScanCheck {
        matches: report.triples() == want,
        expected: expected.iter().map(|&(n, y, p)| (n, y.to_string(), p)).collect(),
        report,
    }
}

pub fn sieve_check(b: i64, p: u64, bound: &BigUint, cfg: &SieveConfig) -> SieveCheck {
    let params = SequenceParams::new(b, 1).expect("sieve set sequences are valid");
    let start = Instant::now();
    let r = sieve_run(&params, p, bound, cfg);
    let powers = r.powers();
    SieveCheck {
        b,
        c: 1,
        p,
        matches: r.verdict == Verdict::Complete && powers.iter().all(|&n| n <= 1),
        verdict: r.verdict,
        powers,
        primes_consumed: r.primes_consumed,
        largest_q: r.largest_q,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

pub fn repro(bound: &BigUint, cfg: &SieveConfig) -> ReproReport {
    let scans: Vec<ScanCheck> = SCAN_SET
        .iter()
        .map(|&(b, c, n_max, expected)| scan_check(b, c, n_max, expected))
        .collect();
    let search = search(10_000);
    let found: Vec<(i64, i64)> = search.pairs.iter().map(|x| (x.b, x.c)).collect();
    let search_matches = found == UNIT_DISCRIMINANT_PAIRS;
    let (bs, ps) = SIEVE_SET;
    let sieves: Vec<SieveCheck> = bs
        .iter()
        .flat_map(|&b| ps.iter().map(move |&p| (b, p)))
        .map(|(b, p)| sieve_check(b, p, bound, cfg))
        .collect();
    let all_match = search_matches && scans.iter().all(|s| s.matches) && sieves.iter().all(|s| s.matches);
    ReproReport {
        scans,
        search,
        search_matches,
        sieve_bound: bound.clone(),
        sieves,
        all_match,
    }
}

mod decimal {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Display, S: Serializer>(value: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(value)
    }

    pub fn deserialize<'de, T: FromStr, D: Deserializer<'de>>(d: D) -> Result<T, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(|_| serde::de::Error::custom("expected a decimal integer string"))
    }
}

mod decimal_opt {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Display, S: Serializer>(value: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(v) => s.collect_str(v),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, T: FromStr, D: Deserializer<'de>>(d: D) -> Result<Option<T>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| {
                s.parse()
                    .map_err(|_| serde::de::Error::custom("expected a decimal integer string"))
            })
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(b: i64, c: i64) -> SequenceParams {
        SequenceParams::new(b, c).unwrap()
    }

    #[test]
    fn frey_report_for_coprime_and_shared_factor() {
        let r = frey(params(1, 1), 10).unwrap();
        assert_eq!(r.delta_identity, Some(true));
        assert!(r.case_error.is_none());
        assert_eq!(
            r.model_discriminant.as_ref(),
            r.model.as_ref().map(|m| &m.formula_delta)
        );

        // v_9 = 76 = 4 mod 8 with u_9 even lies outside the table
        let outside = frey(params(1, 1), 9).unwrap();
        assert!(outside.case_error.unwrap().contains("no Frey case"));
        assert!(outside.model.is_none());

        let shared = frey(params(2, 4), 9).unwrap();
        assert!(shared.case.is_none());
        assert!(shared.case_error.unwrap().contains("gcd"));
        assert!(shared.noncoprime_conductor_bound.is_some());

        assert!(frey(params(1, 1), 6).is_err());
    }

    #[test]
    fn dims_report_values() {
        let r = dims(11, 2);
        assert_eq!((r.genus, r.dim_new, r.dim_bound), (1, 1, 2));
        assert_eq!(r.sturm_bound, 2);
        assert_eq!(dims(22, 2).dim_new, 0);
    }

    #[test]
    fn search_lists_radicals() {
        let r = search(100);
        let pairs: Vec<(i64, i64, u64)> = r.pairs.iter().map(|x| (x.b, x.c, x.rad_c)).collect();
        assert_eq!(
            pairs,
            vec![(3, -2, 2), (5, -6, 6), (7, -12, 6), (9, -20, 10), (17, -72, 6)]
        );
    }

    #[test]
    fn thue_without_and_with_bound() {
        let r = thue(&params(1, 1), 5, None);
        assert!(r.index_bound.is_none());
        let r = thue(&params(1, 1), 5, Some(BigUint::from(1000u32)));
        assert!(r.index_bound.unwrap() > BigUint::from(0u32));
    }

    #[test]
    fn scan_checks_compare_triples() {
        assert!(scan_check(2, 1, 100, &[(7, 13, 2)]).matches);
        assert!(!scan_check(2, 1, 100, &[]).matches);
    }

    #[test]
    fn reports_round_trip() {
        let r = frey(params(3, -2), 11).unwrap();
        let back: FreyReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
        let t = thue(&params(2, 1), 7, Some(BigUint::from(10u32).pow(40)));
        let back: ThueReport = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        assert_eq!(back, t);
    }
}

//! Driver growing the sieve modulus past the index bound `B`.

use std::collections::{BTreeMap, HashSet};
use std::path::PathBuf;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    factor_over, residue_classes, sieve_step, sieve_step_direct, skeletons_for, PrimeSkeleton, SieveCache, SievePrime,
    SieveState,
};
use crate::intarith::{integer_root, primes_up_to};
use crate::lucas::{term_pair, SequenceParams};

/// Most representatives checked exactly when the modulus stays below `B`.
const MAX_EXACT_CHECKS: u64 = 100_000;

/// Tuning knobs of [`sieve_run`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct SieveConfig {
    /// Largest residue set a step may produce.
    pub explosion_cap: usize,
    /// Largest index `n` for which `u_n` is computed exactly.
    pub exact_check_limit: u64,
    /// Most primes consumed.
    pub prime_cap: usize,
    /// Expected residue-set size up to which an expansion is taken even
    /// when it grows the set.
    pub working_set: usize,
    /// Largest auxiliary prime `q`.
    pub q_max: u64,
    /// Most rounds of the smooth schedule.
    pub max_rounds: usize,
    /// Starting smooth modulus as prime-exponent pairs.
    pub initial_m: Vec<(u64, u32)>,
    /// Replaces [`smooth_schedule`] when set.
    pub schedule: Option<Vec<u64>>,
    /// Residue-class cache file, read before and written after the run.
    pub cache_path: Option<PathBuf>,
}

impl Default for SieveConfig {
    fn default() -> Self {
        Self {
            explosion_cap: super::DEFAULT_EXPLOSION_CAP,
            exact_check_limit: 20_000,
            prime_cap: 5_000,
            working_set: 30,
            q_max: super::DEFAULT_Q_MAX,
            max_rounds: 400,
            initial_m: vec![(2, 4), (3, 2), (5, 1)],
            schedule: None,
            cache_path: None,
        }
    }
}

/// Multipliers of the smooth modulus: the blocks `2 3 5 7`, `2 3 5 7 11`,
/// `2 3 5 7 11 13`, ... in turn, so every round raises one exponent and
/// each block brings in one new prime.
pub fn smooth_schedule() -> impl Iterator<Item = u64> {
    let primes = primes_up_to(10_000);
    (4..primes.len()).flat_map(move |k| primes[..k].to_vec())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Complete,
    Partial,
}

/// An index checked exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Resolved {
    pub n: u64,
    pub is_power: bool,
    #[serde(with = "crate::decimal::option")]
    pub witness: Option<BigInt>,
}

/// Outcome of a sieve run.
///
/// `verdict` is `Complete` iff `unresolved` is empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SieveReport {
    pub b: i64,
    pub c: i64,
    pub p: u64,
    #[serde(with = "crate::decimal")]
    pub index_bound: BigUint,
    pub resolved: Vec<Resolved>,
    #[serde(with = "crate::decimal::vec")]
    pub unresolved: Vec<BigUint>,
    #[serde(with = "crate::decimal")]
    pub final_modulus: BigUint,
    pub residue_count: usize,
    pub primes_consumed: usize,
    pub largest_q: u64,
    pub verdict: Verdict,
    pub diagnostics: Vec<String>,
}

impl SieveReport {
    /// Indices `n <= B` with `u_n` an exact `p`-th power.
    pub fn powers(&self) -> Vec<u64> {
        self.resolved.iter().filter(|r| r.is_power).map(|r| r.n).collect()
    }
}

struct Candidate {
    skeleton: PrimeSkeleton,
    period_fac: Vec<(u64, u32)>,
}

type ModFac = BTreeMap<u64, u32>;

fn excess(m: &ModFac, k: &[(u64, u32)]) -> Vec<(u64, u32)> {
    k.iter()
        .filter_map(|&(ell, e)| {
            let have = m.get(&ell).copied().unwrap_or(0);
            (e > have).then(|| (ell, e - have))
        })
        .collect()
}

fn ln_growth(m: &ModFac, k: &[(u64, u32)]) -> f64 {
    k.iter()
        .map(|&(ell, e)| {
            let have = m.get(&ell).copied().unwrap_or(0);
            e.saturating_sub(have) as f64 * (ell as f64).ln()
        })
        .sum()
}

fn divides_lcm(k: &[(u64, u32)], m: &ModFac, ext: &[(u64, u32)]) -> bool {
    k.iter().all(|&(ell, e)| {
        let have = m.get(&ell).copied().unwrap_or(0);
        let extra = ext.iter().find(|x| x.0 == ell).map_or(0, |x| x.1);
        e <= have + extra
    })
}

/// Index of the expansion with the best expected shrinkage, and its score
/// `ln g - (enabled primes) ln p`; negative scores shrink the residue set.
fn best_expansion(pool: &[Candidate], m: &ModFac, p: u64) -> Option<(usize, f64)> {
    let ln_p = (p as f64).ln();
    pool.par_iter()
        .enumerate()
        .map(|(i, cand)| {
            let ext = excess(m, &cand.period_fac);
            let enabled = pool.iter().filter(|o| divides_lcm(&o.period_fac, m, &ext)).count();
            let score = ln_growth(m, &cand.period_fac) - enabled as f64 * ln_p;
            (i, score, cand.skeleton.q)
        })
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.2.cmp(&b.2)))
        .map(|(i, s, _)| (i, s))
}

fn is_power(params: &SequenceParams, p: u64, n: u64) -> Resolved {
    let u = term_pair(params, n).u;
    let witness = if u.sign() == Sign::Minus && p.is_multiple_of(2) {
        None
    } else {
        let (root, exact) = integer_root(u.magnitude(), p as u32);
        exact.then(|| {
            BigInt::from_biguint(
                if u.sign() == Sign::Minus {
                    Sign::Minus
                } else {
                    Sign::Plus
                },
                root,
            )
        })
    };
    Resolved {
        n,
        is_power: witness.is_some(),
        witness,
    }
}

/// Surviving classes whose least representative lies in `(limit, B]`.
fn pending(state: &SieveState, bound: &BigUint, limit: u64) -> usize {
    let limit = BigUint::from(limit);
    let res = state.residues();
    res.partition_point(|r| *r <= *bound)
        .saturating_sub(res.partition_point(|r| *r <= limit))
}

struct Runner<'a> {
    params: &'a SequenceParams,
    p: u64,
    cfg: &'a SieveConfig,
    cache: SieveCache,
    diagnostics: Vec<String>,
}

impl Runner<'_> {
    fn cached(&self, q: u64) -> Option<&SievePrime> {
        self.cache.get(self.params.b(), self.params.c(), self.p, q)
    }

    /// Whether lifting `classes` states through `growth` and testing each
    /// lift directly is cheaper than tabulating the period of `sk`.
    fn prefers_direct(&self, classes: usize, growth: u64, sk: PrimeSkeleton) -> bool {
        let per_test = 8 * (64 - sk.q.leading_zeros()) as u128;
        (classes as u128) * (growth as u128) * per_test < (sk.q + sk.period) as u128
    }

    /// Tabulates and caches the classes of the given primes in parallel.
    fn tabulate(&mut self, skeletons: &[PrimeSkeleton]) {
        let missing: Vec<PrimeSkeleton> = skeletons
            .iter()
            .filter(|s| self.cached(s.q).is_none())
            .copied()
            .collect();
        let fresh: Vec<SievePrime> = missing
            .par_iter()
            .map(|&s| residue_classes(self.params, self.p, s).expect("candidates satisfy p | q - 1"))
            .collect();
        for sp in fresh {
            self.cache.insert(self.params.b(), self.params.c(), self.p, sp);
        }
    }

    fn apply(&mut self, state: &SieveState, sk: PrimeSkeleton, growth: u64) -> crate::Result<SieveState> {
        let cap = self.cfg.explosion_cap;
        if self.cached(sk.q).is_none() && self.prefers_direct(state.residues().len(), growth, sk) {
            return sieve_step_direct(state, self.params, self.p, sk, cap);
        }
        self.tabulate(&[sk]);
        sieve_step(state, self.cached(sk.q).expect("tabulated"), cap)
    }
}

fn growth(m: &ModFac, k: &[(u64, u32)]) -> u64 {
    excess(m, k).iter().map(|&(ell, e)| ell.pow(e)).product()
}

/// Sieves `u_n = y^p` for `n <= B`.
pub fn sieve_run(params: &SequenceParams, p: u64, bound: &BigUint, cfg: &SieveConfig) -> SieveReport {
    let mut run = Runner {
        params,
        p,
        cfg,
        cache: SieveCache::default(),
        diagnostics: Vec::new(),
    };
    if let Some(path) = &cfg.cache_path {
        match SieveCache::load_or_empty(path) {
            Ok(cache) => run.cache = cache,
            Err(e) => run.diagnostics.push(format!("cache ignored: {e}")),
        }
    }

    let mut state = SieveState::new();
    let mut m_state = ModFac::new();
    let mut m_sched: ModFac = cfg.initial_m.iter().copied().collect();
    let mut multipliers: Box<dyn Iterator<Item = u64>> = match &cfg.schedule {
        Some(list) => Box::new(list.clone().into_iter()),
        None => Box::new(smooth_schedule()),
    };
    let mut seen = HashSet::new();
    let mut pool: Vec<Candidate> = Vec::new();
    let mut largest_q = 0;

    'rounds: for round in 0..cfg.max_rounds {
        let mut last_round = round + 1 == cfg.max_rounds;
        let mut pinned = None;
        if round > 0 {
            match multipliers.next() {
                Some(ell) => {
                    *m_sched.entry(ell).or_default() += 1;
                    pinned = Some(ell);
                }
                None => break,
            }
        }
        if cfg.schedule.as_ref().is_some_and(|s| round >= s.len()) {
            last_round = true;
        }
        let pairs: Vec<(u64, u32)> = m_sched.iter().map(|(&a, &b)| (a, b)).collect();
        let fresh = skeletons_for(params, &pairs, cfg.q_max, pinned, |q| {
            (q - 1) % p == 0 && seen.insert(q)
        });
        pool.extend(fresh.into_iter().map(|sk| Candidate {
            skeleton: sk,
            period_fac: factor_over(sk.period, &pairs).pairs().to_vec(),
        }));

        loop {
            // primes whose period divides the modulus only ever shrink the set
            let (filters, rest): (Vec<Candidate>, Vec<Candidate>) = std::mem::take(&mut pool)
                .into_iter()
                .partition(|cand| excess(&m_state, &cand.period_fac).is_empty());
            pool = rest;
            let size = state.residues().len();
            let tabulated: Vec<PrimeSkeleton> = filters
                .iter()
                .map(|f| f.skeleton)
                .filter(|&sk| !run.prefers_direct(size, 1, sk))
                .collect();
            run.tabulate(&tabulated);
            for f in &filters {
                state = run.apply(&state, f.skeleton, 1).expect("a filter never grows the set");
                largest_q = largest_q.max(f.skeleton.q);
                if state.primes_used().len() >= cfg.prime_cap {
                    run.diagnostics.push(format!("prime cap {} reached", cfg.prime_cap));
                    break 'rounds;
                }
            }
            if state.modulus() > bound && pending(&state, bound, cfg.exact_check_limit) == 0 {
                break 'rounds;
            }

            let Some((i, score)) = best_expansion(&pool, &m_state, p) else {
                break;
            };
            let projected = state.residues().len() as f64 * score.exp();
            if score > 0.0 && projected > cfg.working_set as f64 && !last_round {
                break;
            }
            let cand = pool.swap_remove(i);
            let g = growth(&m_state, &cand.period_fac);
            match run.apply(&state, cand.skeleton, g) {
                Ok(next) => {
                    state = next;
                    largest_q = largest_q.max(cand.skeleton.q);
                    for (ell, e) in excess(&m_state, &cand.period_fac) {
                        *m_state.entry(ell).or_default() += e;
                    }
                }
                Err(e) => run.diagnostics.push(format!("q = {} skipped: {e}", cand.skeleton.q)),
            }
        }
    }

    if let Some(path) = &cfg.cache_path {
        if let Err(e) = run.cache.save(path) {
            run.diagnostics.push(format!("cache not written: {e}"));
        }
    }

    let (resolved, unresolved) = resolve(&mut run, &state, bound);
    let verdict = if unresolved.is_empty() {
        Verdict::Complete
    } else {
        Verdict::Partial
    };
    SieveReport {
        b: params.b(),
        c: params.c(),
        p,
        index_bound: bound.clone(),
        resolved,
        unresolved,
        final_modulus: state.modulus().clone(),
        residue_count: state.residues().len(),
        primes_consumed: state.primes_used().len(),
        largest_q,
        verdict,
        diagnostics: run.diagnostics,
    }
}

/// Exact checks for every surviving index `n <= B` within reach.
fn resolve(run: &mut Runner, state: &SieveState, bound: &BigUint) -> (Vec<Resolved>, Vec<BigUint>) {
    let limit = run.cfg.exact_check_limit;
    let modulus = state.modulus();
    let mut indices = Vec::new();
    let mut unresolved = Vec::new();
    if modulus > bound {
        for r in state.residues().iter().take_while(|r| *r <= bound) {
            match r.to_u64().filter(|&n| n <= limit) {
                Some(n) => indices.push(n),
                None => unresolved.push(r.clone()),
            }
        }
    } else {
        let step = modulus.to_u64().filter(|m| !m.is_zero());
        let reps = step.map(|m| {
            (state.residues().len() as u64).saturating_mul((bound.to_u64().unwrap_or(u64::MAX) / m).saturating_add(1))
        });
        match (bound.to_u64().filter(|&b| b <= limit), step, reps) {
            (Some(b), Some(m), Some(count)) if count <= MAX_EXACT_CHECKS => {
                for r in state.residues() {
                    let r = r.to_u64().expect("below a 64-bit modulus");
                    indices.extend((r..=b).step_by(m as usize));
                }
                indices.sort_unstable();
            }
            _ => {
                run.diagnostics
                    .push(format!("modulus {modulus} did not exceed the index bound"));
                unresolved = state.residues().to_vec();
            }
        }
    }
    let resolved = indices.par_iter().map(|&n| is_power(run.params, run.p, n)).collect();
    (resolved, unresolved)
}

//! Exhaustive grid enumeration and seeded random probing of Rota-Baxter
//! matrices, cross-checked against the catalog.

mod compiled;

use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

pub use compiled::{scale_to_integers, CompiledSystem, LAMBDA_SLOT};

use crate::catalog::{sample_assignment, Catalog, FamilyMatch};
use crate::exactmath::{format_rational, Rational, Ring};
use crate::operator::{cached_system, MatrixJson, OperatorMatrix, PolySystem, WeightMode};
use crate::sampling;

pub const DEFAULT_BUDGET: u64 = 100_000_000;
pub const BUDGET_ENV: &str = "RBQ_BUDGET";

/// Support mask bit `4r + c` frees entry (r, c).
pub const SUPPORT_FULL: u16 = 0xFFFF;
/// Rows 3-4, columns 1-2.
pub const SUPPORT_ROWS34_COLS12: u16 = 0x3300;
/// Columns 2-4 of rows 1-3.
pub const SUPPORT_ROWS123_COLS234: u16 = 0x0EEE;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("{candidates} candidates exceed the budget of {budget}")]
    BudgetExceeded { candidates: u128, budget: u64 },
    #[error("grid values must be nonempty")]
    EmptyValues,
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("invalid {BUDGET_ENV} value {0:?}")]
    BadBudget(String),
}

/// Budget from the environment, or the default.
pub fn configured_budget() -> Result<u64, SearchError> {
    match std::env::var(BUDGET_ENV) {
        Ok(s) => s.trim().parse().map_err(|_| SearchError::BadBudget(s)),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub values: Vec<Rational>,
    pub support: u16,
    pub lambda: Rational,
}

impl GridSpec {
    pub fn new(values: Vec<Rational>, support: u16, lambda: Rational) -> Self {
        GridSpec { values, support, lambda }
    }

    /// Free positions in row-major order; the first is the most significant digit.
    pub fn positions(&self) -> Vec<usize> {
        (0..16).filter(|b| self.support & (1 << b) != 0).collect()
    }

    pub fn candidate_count(&self) -> u128 {
        (self.values.len() as u128).pow(self.support.count_ones())
    }

    /// The candidate with the given index.
    pub fn candidate(&self, mut index: u64) -> OperatorMatrix<Rational> {
        let mut m = OperatorMatrix::zero(self.lambda.clone());
        let base = self.values.len() as u64;
        for &pos in self.positions().iter().rev() {
            m.set_entry(pos / 4, pos % 4, self.values[(index % base) as usize].clone());
            index /= base;
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hit {
    pub index: u64,
    pub matrix: MatrixJson,
    pub matches: Vec<FamilyMatch>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstantiationStats {
    pub trials: usize,
    pub verified: usize,
    pub matched: usize,
    /// Family ids of instances that failed verification or were not recovered.
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchReport {
    pub lambda: String,
    pub candidates_tested: u64,
    pub hits: Vec<Hit>,
    pub unmatched_hits: Vec<MatrixJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instantiation: Option<InstantiationStats>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SearchReport {
    pub fn passed(&self) -> bool {
        self.unmatched_hits.is_empty()
            && self
                .instantiation
                .as_ref()
                .is_none_or(|s| s.failures.is_empty())
    }
}

fn mode_for(lambda: &Rational) -> WeightMode {
    if lambda.is_zero() {
        WeightMode::Zero
    } else {
        WeightMode::SymbolicLambda
    }
}

fn collect_hits(catalog: &Catalog, matrices: impl IntoIterator<Item = (u64, OperatorMatrix<Rational>)>) -> (Vec<Hit>, Vec<MatrixJson>) {
    let mut hits = Vec::new();
    let mut unmatched = Vec::new();
    for (index, m) in matrices {
        let matches = catalog.match_membership(&m);
        if matches.is_empty() {
            unmatched.push(m.to_json());
        }
        hits.push(Hit {
            index,
            matrix: m.to_json(),
            matches,
        });
    }
    (hits, unmatched)
}

pub fn grid_search(spec: &GridSpec) -> Result<SearchReport, SearchError> {
    grid_search_with_budget(spec, configured_budget()?)
}

const CHUNK: u64 = 1 << 16;

pub fn grid_search_with_budget(spec: &GridSpec, budget: u64) -> Result<SearchReport, SearchError> {
    if spec.values.is_empty() {
        return Err(SearchError::EmptyValues);
    }
    let count = spec.candidate_count();
    if count > budget as u128 {
        return Err(SearchError::BudgetExceeded { candidates: count, budget });
    }
    let start = Instant::now();
    let total = count as u64;
    let system = cached_system(mode_for(&spec.lambda));
    let indices = hit_indices(spec, system, total, true);
    let (hits, unmatched_hits) = collect_hits(
        Catalog::shipped(),
        indices.into_iter().map(|i| (i, spec.candidate(i))),
    );
    Ok(SearchReport {
        lambda: format_rational(&spec.lambda),
        candidates_tested: total,
        hits,
        unmatched_hits,
        instantiation: None,
        elapsed: start.elapsed(),
    })
}

/// Candidate indices in `0..total` at which every polynomial vanishes, ascending.
/// `early_exit = false` evaluates every polynomial (used to test the shortcut).
pub fn hit_indices(spec: &GridSpec, system: &PolySystem, total: u64, early_exit: bool) -> Vec<u64> {
    let positions = spec.positions();
    let compiled = CompiledSystem::compile(system);
    let scaled = scale_to_integers(&spec.values, &spec.lambda);
    let fast = match (compiled, scaled) {
        (Some(c), Some((nums, lam))) => {
            let max_abs = nums.iter().map(|n| n.abs()).chain(std::iter::once(lam.abs())).max().unwrap_or(0);
            c.fits(max_abs).then_some((c, nums, lam))
        }
        _ => None,
    };
    let chunks: Vec<(u64, u64)> = (0..total.div_ceil(CHUNK))
        .map(|k| (k * CHUNK, ((k + 1) * CHUNK).min(total)))
        .collect();
    let per_chunk: Vec<Vec<u64>> = match fast {
        Some((compiled, nums, lam)) => chunks
            .par_iter()
            .map(|&(lo, hi)| scan_integer(&compiled, &nums, lam, &positions, lo, hi, early_exit))
            .collect(),
        None => chunks
            .par_iter()
            .map(|&(lo, hi)| {
                (lo..hi)
                    .filter(|&i| system.vanishes_at(&spec.candidate(i)))
                    .collect()
            })
            .collect(),
    };
    per_chunk.into_iter().flatten().collect()
}

fn scan_integer(
    compiled: &CompiledSystem,
    nums: &[i64],
    lam: i64,
    positions: &[usize],
    lo: u64,
    hi: u64,
    early_exit: bool,
) -> Vec<u64> {
    let base = nums.len() as u64;
    let k = positions.len();
    let mut digits = vec![0usize; k];
    let mut rest = lo;
    for d in digits.iter_mut().rev() {
        *d = (rest % base) as usize;
        rest /= base;
    }
    let mut v = [0i64; 17];
    v[LAMBDA_SLOT] = lam;
    for (d, &pos) in digits.iter().zip(positions) {
        v[pos] = nums[*d];
    }
    let mut out = Vec::new();
    for index in lo..hi {
        let hit = if early_exit {
            compiled.first_nonvanishing(&v).is_none()
        } else {
            compiled.all_vanish_full(&v)
        };
        if hit {
            out.push(index);
        }
        // advance the odometer, least significant digit last
        for slot in (0..k).rev() {
            digits[slot] += 1;
            if digits[slot] < nums.len() {
                v[positions[slot]] = nums[digits[slot]];
                break;
            }
            digits[slot] = 0;
            v[positions[slot]] = nums[0];
        }
    }
    out
}

/// Height bound of unrestricted random entries.
const PROBE_HEIGHT: i64 = 2;

/// Seeded probe at weight `lambda`: `trials` sparse random matrices whose hits must
/// lie in the catalog, and `trials` random catalog instances that must verify and
/// be recovered by membership matching.
pub fn random_probe(lambda: &Rational, trials: usize, seed: u64) -> Result<SearchReport, SearchError> {
    if trials == 0 {
        return Err(SearchError::NoTrials);
    }
    let start = Instant::now();
    let mut rng = sampling::rng(seed);
    let catalog = Catalog::shipped();
    let system = cached_system(mode_for(lambda));

    let mut found = Vec::new();
    for t in 0..trials {
        let mut m = OperatorMatrix::zero(lambda.clone());
        for r in 0..4 {
            for c in 0..4 {
                if rng.gen_bool(0.25) {
                    m.set_entry(r, c, sampling::rational(&mut rng, PROBE_HEIGHT));
                }
            }
        }
        if system.vanishes_at(&m) {
            found.push((t as u64, m));
        }
    }
    let (hits, unmatched_hits) = collect_hits(catalog, found);

    let families = catalog.list(mode_for(lambda));
    let mut stats = InstantiationStats {
        trials,
        verified: 0,
        matched: 0,
        failures: Vec::new(),
    };
    for _ in 0..trials {
        let f = families[rng.gen_range(0..families.len())];
        let Ok(a) = sample_assignment(f, &mut rng, lambda) else {
            stats.failures.push(f.id.clone());
            continue;
        };
        let p = f.instantiate(&a, lambda).expect("sampled point is admissible");
        let verified = p.is_rota_baxter().holds();
        let matched = f.match_in(&p).as_ref() == Some(&a);
        stats.verified += verified as usize;
        stats.matched += matched as usize;
        if !(verified && matched) {
            stats.failures.push(f.id.clone());
        }
    }
    Ok(SearchReport {
        lambda: format_rational(lambda),
        candidates_tested: trials as u64,
        hits,
        unmatched_hits,
        instantiation: Some(stats),
        elapsed: start.elapsed(),
    })
}

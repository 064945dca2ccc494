//! Symbolic and randomized checks of catalog families.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use serde::Serialize;

use crate::exactmath::{RatFunc, Rational, Ring};
use crate::operator::{cached_system, OperatorMatrix, WeightMode};
use crate::sampling;

use super::{Family, InstantiateError};

/// Height bound for random parameter values and weights.
const HEIGHT: i64 = 7;
const MAX_RESAMPLES: usize = 1000;
/// Parameter points tried per mutant before declaring it accepted.
const MUTANT_POINTS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FailingNumerator {
    pub pair: (usize, usize),
    pub coord: usize,
    pub numerator: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyVerification {
    pub family: String,
    pub passed: bool,
    pub failing: Vec<FailingNumerator>,
}

/// Cleared-denominator numerators of all basis-pair defects that are not identically zero.
pub fn symbolic_failures(p: &OperatorMatrix<RatFunc>) -> Vec<FailingNumerator> {
    let mut out = Vec::new();
    for (pair, defect) in p.basis_defects() {
        for (coord, value) in defect.coords().iter().enumerate() {
            let (numerator, _) = value.clear();
            if !numerator.is_zero() {
                out.push(FailingNumerator {
                    pair,
                    coord,
                    numerator: numerator.to_string(),
                });
            }
        }
    }
    out
}

pub fn verify_family_symbolic(f: &Family) -> FamilyVerification {
    let failing = symbolic_failures(&f.symbolic());
    FamilyVerification {
        family: f.id.clone(),
        passed: failing.is_empty(),
        failing,
    }
}

fn random_lambda(f: &Family, rng: &mut impl Rng) -> Rational {
    match f.weight {
        WeightMode::Zero => Rational::zero(),
        WeightMode::SymbolicLambda => sampling::nonzero_rational(rng, HEIGHT),
    }
}

/// Random parameter values satisfying every constraint of `f` at `lambda`.
pub fn sample_assignment(
    f: &Family,
    rng: &mut impl Rng,
    lambda: &Rational,
) -> Result<BTreeMap<String, Rational>, InstantiateError> {
    let mut last = None;
    for _ in 0..MAX_RESAMPLES {
        let a: BTreeMap<String, Rational> = f
            .params
            .iter()
            .map(|p| (p.clone(), sampling::rational(rng, HEIGHT)))
            .collect();
        match f.instantiate(&a, lambda) {
            Ok(_) => return Ok(a),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SoundnessReport {
    pub family: String,
    pub samples: usize,
    /// `(assignment, lambda)` of every sample whose instance is not Rota-Baxter.
    pub failures: Vec<(BTreeMap<String, String>, String)>,
}

impl SoundnessReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the defect oracle at random admissible points (random nonzero weight for
/// weight-lambda families).
pub fn soundness_sweep(f: &Family, samples: usize, seed: u64) -> SoundnessReport {
    let mut rng = sampling::rng(seed);
    let mut failures = Vec::new();
    for _ in 0..samples {
        let lambda = random_lambda(f, &mut rng);
        let a = sample_assignment(f, &mut rng, &lambda).expect("family has admissible points");
        let p = f.instantiate(&a, &lambda).expect("sampled point is admissible");
        if !p.is_rota_baxter().holds() {
            failures.push((a.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(), lambda.to_string()));
        }
    }
    SoundnessReport {
        family: f.id.clone(),
        samples,
        failures,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MutationReport {
    pub family: String,
    pub trials: usize,
    /// Mutants the defect oracle rejected at a sampled point.
    pub rejected: usize,
    /// Mutants that are Rota-Baxter for all parameters, judged by the generated
    /// polynomial system; accepting them is correct.
    pub equivalent: usize,
    /// Non-equivalent mutants the defect oracle never rejected.
    pub false_acceptances: usize,
    /// Equivalent mutants the defect oracle rejected.
    pub false_rejections: usize,
    /// Positions `(row, col)` whose sign flip gives an equivalent mutant.
    pub equivalent_positions: Vec<(usize, usize)>,
    /// The family has no nonzero entry, so no mutant exists.
    pub no_mutable_entry: bool,
}

impl MutationReport {
    pub fn passed(&self) -> bool {
        self.false_acceptances == 0 && self.false_rejections == 0
    }

    /// True when at least one trial produced a mutant the oracle caught.
    pub fn sensitive(&self) -> bool {
        self.rejected > 0
    }
}

/// Flips the sign of one randomly chosen nonzero entry per trial and asks the
/// defect oracle to reject the result at some admissible parameter point.
pub fn mutation_sweep(f: &Family, trials: usize, seed: u64) -> MutationReport {
    let mut rng = sampling::rng(seed);
    let positions: Vec<(usize, usize)> = (0..16)
        .map(|n| (n / 4, n % 4))
        .filter(|&(r, c)| !f.entries[r][c].is_zero())
        .collect();
    let mut report = MutationReport {
        family: f.id.clone(),
        trials,
        rejected: 0,
        equivalent: 0,
        false_acceptances: 0,
        false_rejections: 0,
        equivalent_positions: Vec::new(),
        no_mutable_entry: positions.is_empty(),
    };
    if positions.is_empty() {
        return report;
    }
    let system = cached_system(f.weight);
    let mut equivalence: HashMap<(usize, usize), bool> = HashMap::new();
    for _ in 0..trials {
        let (r, c) = positions[rng.gen_range(0..positions.len())];
        let equivalent = *equivalence.entry((r, c)).or_insert_with(|| {
            let mut m = f.symbolic();
            let flipped = m.entry(r, c).neg();
            m.set_entry(r, c, flipped);
            system.vanishes_at(&m)
        });
        let mut caught = false;
        let mut tried = 0;
        while tried < MUTANT_POINTS {
            let lambda = random_lambda(f, &mut rng);
            let a = sample_assignment(f, &mut rng, &lambda).expect("family has admissible points");
            let mut p = f.instantiate(&a, &lambda).expect("sampled point is admissible");
            if p.entry(r, c).is_zero() {
                continue;
            }
            tried += 1;
            let flipped = p.entry(r, c).neg_ref();
            p.set_entry(r, c, flipped);
            if !p.is_rota_baxter().holds() {
                caught = true;
                break;
            }
            if equivalent {
                break;
            }
        }
        match (equivalent, caught) {
            (false, true) => report.rejected += 1,
            (false, false) => report.false_acceptances += 1,
            (true, false) => report.equivalent += 1,
            (true, true) => report.false_rejections += 1,
        }
    }
    report.equivalent_positions = {
        let mut v: Vec<_> = equivalence.into_iter().filter(|(_, e)| *e).map(|(p, _)| p).collect();
        v.sort();
        v
    };
    report
}

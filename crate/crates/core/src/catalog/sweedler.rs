//! Rota-Baxter operators on the Sweedler algebra, read in the basis
//! 1, g, nu, g*nu = e0, e1, e2, e3, and their place in the weight-lambda catalog.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::algebra::SsqElement;
use crate::exactmath::{parse_poly, parse_ratfunc, rat, MultiPoly, RatFunc, Rational, Var};
use crate::operator::{OperatorMatrix, WeightMode};

use super::verify::{symbolic_failures, FailingNumerator};
use super::Catalog;

/// Operators expected to be plain specializations of a catalog family.
const EXPECTED_DIRECT: [u32; 6] = [1, 2, 3, 4, 7, 9];

#[derive(Debug, Clone, PartialEq)]
pub struct SweedlerOperator {
    pub number: u32,
    pub entries: [[RatFunc; 4]; 4],
    pub constraints: Vec<MultiPoly>,
}

impl SweedlerOperator {
    pub fn matrix(&self) -> OperatorMatrix<RatFunc> {
        OperatorMatrix::new(self.entries.clone(), RatFunc::var(Var::lambda()))
    }
}

/// A sign correction applied before matching; positions are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Correction {
    pub operator: u32,
    pub row: usize,
    pub col: usize,
    pub displayed: String,
    pub corrected: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweedlerSet {
    pub operators: Vec<SweedlerOperator>,
    pub corrections: Vec<Correction>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSet {
    operator: Vec<RawOperator>,
    #[serde(default)]
    correction: Vec<Correction>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOperator {
    number: u32,
    entries: [[String; 4]; 4],
    constraints: Vec<String>,
}

impl SweedlerSet {
    pub fn parse(text: &str) -> Result<SweedlerSet, String> {
        let raw: RawSet = toml::from_str(text).map_err(|e| e.to_string())?;
        let mut operators = Vec::new();
        for op in raw.operator {
            let mut cells = Vec::with_capacity(16);
            for row in &op.entries {
                for t in row {
                    cells.push(parse_ratfunc(t).map_err(|e| format!("operator {}: {e}", op.number))?);
                }
            }
            let mut cells = cells.into_iter();
            let constraints = op
                .constraints
                .iter()
                .map(|c| parse_poly(c).map_err(|e| format!("operator {}: {e}", op.number)))
                .collect::<Result<_, _>>()?;
            operators.push(SweedlerOperator {
                number: op.number,
                entries: std::array::from_fn(|_| std::array::from_fn(|_| cells.next().expect("16 cells"))),
                constraints,
            });
        }
        for c in &raw.correction {
            let op = operators
                .iter()
                .find(|o| o.number == c.operator)
                .ok_or_else(|| format!("correction names unknown operator {}", c.operator))?;
            let shown = parse_ratfunc(&c.displayed).map_err(|e| e.to_string())?;
            if op.entries[c.row - 1][c.col - 1] != shown {
                return Err(format!("correction for operator {} does not match the displayed entry", c.operator));
            }
        }
        Ok(SweedlerSet {
            operators,
            corrections: raw.correction,
        })
    }

    pub fn shipped() -> &'static SweedlerSet {
        static CELL: OnceLock<SweedlerSet> = OnceLock::new();
        CELL.get_or_init(|| SweedlerSet::parse(include_str!("../../data/sweedler.txt")).expect("shipped Sweedler data"))
    }

    pub fn correction(&self, number: u32) -> Option<&Correction> {
        self.corrections.iter().find(|c| c.operator == number)
    }

    /// The operator with any recorded correction applied.
    pub fn corrected(&self, op: &SweedlerOperator) -> OperatorMatrix<RatFunc> {
        let mut m = op.matrix();
        if let Some(c) = self.correction(op.number) {
            let v = parse_ratfunc(&c.corrected).expect("validated at load");
            m.set_entry(c.row - 1, c.col - 1, v);
        }
        m
    }
}

/// The nine operators exactly as displayed, weight lambda symbolic.
pub fn sweedler_operators() -> Vec<OperatorMatrix<RatFunc>> {
    SweedlerSet::shipped().operators.iter().map(SweedlerOperator::matrix).collect()
}

/// g^2 = 1, nu^2 = 0, g nu + nu g = 0, with g = e1, nu = e2 and g nu = e3.
pub fn sweedler_relations_hold() -> bool {
    let g = SsqElement::<Rational>::basis(1);
    let nu = SsqElement::<Rational>::basis(2);
    let gnu = g.multiply(&nu);
    g.multiply(&g) == SsqElement::unit()
        && nu.multiply(&nu).is_zero()
        && gnu.add(&nu.multiply(&g)).is_zero()
        && gnu == SsqElement::basis(3)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchKind {
    /// Every parameter is sent to a constant or to plus/minus a single symbol.
    Direct,
    /// Some parameter is sent to a compound expression.
    Substitution,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweedlerEntry {
    pub number: u32,
    pub displayed_holds: bool,
    pub displayed_failures: Vec<FailingNumerator>,
    pub correction: Option<Correction>,
    /// Defect check after any correction.
    pub holds: bool,
    pub family: Option<String>,
    pub kind: Option<MatchKind>,
    /// Family parameter -> expression in the operator's own symbols.
    pub substitution: BTreeMap<String, String>,
    pub all_matches: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweedlerReport {
    pub relations_hold: bool,
    pub entries: Vec<SweedlerEntry>,
}

impl SweedlerReport {
    pub fn passed(&self) -> bool {
        self.relations_hold
            && self.entries.len() == 9
            && self.entries.iter().all(|e| {
                e.holds
                    && e.family.is_some()
                    && (!EXPECTED_DIRECT.contains(&e.number) || e.kind == Some(MatchKind::Direct))
            })
    }
}

fn is_direct_image(v: &RatFunc) -> bool {
    let Some(p) = v.as_poly() else { return false };
    if p.as_constant().is_some() {
        return true;
    }
    match p.leading_term() {
        Some((m, c)) => {
            p.term_count() == 1 && m.degree() == 1 && (c == &rat(1) || c == &rat(-1))
        }
        None => true,
    }
}

fn classify(assignment: &BTreeMap<String, RatFunc>) -> MatchKind {
    if assignment.values().all(is_direct_image) {
        MatchKind::Direct
    } else {
        MatchKind::Substitution
    }
}

/// Checks every operator symbolically, then finds the weight-lambda families
/// containing it, recording the parameter substitution that realizes each match.
pub fn sweedler_correspondence_check() -> SweedlerReport {
    let set = SweedlerSet::shipped();
    let families = Catalog::shipped().list(WeightMode::SymbolicLambda);
    let entries = set
        .operators
        .iter()
        .map(|op| {
            let displayed_failures = symbolic_failures(&op.matrix());
            let target = set.corrected(op);
            let holds = symbolic_failures(&target).is_empty();
            let matches: Vec<(String, BTreeMap<String, RatFunc>)> = families
                .iter()
                .filter_map(|f| f.match_in(&target).map(|a| (f.id.clone(), a)))
                .collect();
            let chosen = matches
                .iter()
                .find(|(_, a)| classify(a) == MatchKind::Direct)
                .or_else(|| matches.first());
            SweedlerEntry {
                number: op.number,
                displayed_holds: displayed_failures.is_empty(),
                displayed_failures,
                correction: set.correction(op.number).cloned(),
                holds,
                family: chosen.map(|(id, _)| id.clone()),
                kind: chosen.map(|(_, a)| classify(a)),
                substitution: chosen
                    .map(|(_, a)| a.iter().map(|(k, v)| (k.clone(), v.to_string())).collect())
                    .unwrap_or_default(),
                all_matches: matches.into_iter().map(|(id, _)| id).collect(),
            }
        })
        .collect();
    SweedlerReport {
        relations_hold: sweedler_relations_hold(),
        entries,
    }
}

//! Parametric families of Rota-Baxter operators, their instantiation and
//! membership matching, and the Sweedler algebra operators.

mod sweedler;
mod verify;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::{parse_poly, parse_ratfunc, ExactError, Field, MultiPoly, RatFunc, Rational, Ring, Var};
use crate::operator::{OperatorMatrix, WeightMode};

pub use sweedler::{
    sweedler_correspondence_check, sweedler_operators, sweedler_relations_hold, Correction, MatchKind,
    SweedlerEntry, SweedlerOperator, SweedlerReport, SweedlerSet,
};
pub use verify::{
    mutation_sweep, sample_assignment, soundness_sweep, symbolic_failures, verify_family_symbolic, FailingNumerator,
    FamilyVerification, MutationReport, SoundnessReport,
};

/// Reading rule for one parameter: `param = expr(x)` where `x` is the entry at
/// (`row`, `col`); `expr` may also use lambda and earlier parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Extraction {
    pub row: usize,
    pub col: usize,
    pub param: String,
    pub expr: RatFunc,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Family {
    pub id: String,
    pub weight: WeightMode,
    /// Positions of the family among the displayed matrices (several when repeated).
    pub display: Vec<u32>,
    pub params: Vec<String>,
    pub entries: [[RatFunc; 4]; 4],
    /// Polynomials that must not vanish.
    pub constraints: Vec<MultiPoly>,
    pub extraction: Vec<Extraction>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyMatch {
    pub family: String,
    pub assignment: BTreeMap<String, String>,
}

#[derive(Debug, Error, PartialEq)]
pub enum InstantiateError {
    #[error("family {family}: missing value for parameter {param}")]
    MissingParam { family: String, param: String },
    #[error("family {family}: constraint {factor} vanishes")]
    ConstraintViolated { family: String, factor: String },
    #[error("family {family} has weight zero, got lambda = {lambda}")]
    WeightMismatch { family: String, lambda: String },
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("catalog syntax: {0}")]
    Syntax(String),
    #[error("family {family}: {field}: {source}")]
    Expr {
        family: String,
        field: String,
        source: ExactError,
    },
    #[error("family {family}: {message}")]
    Invalid { family: String, message: String },
    #[error("cannot read catalog {path}: {source}")]
    Io {
        path: std::path::PathBuf,
        source: std::io::Error,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCatalog {
    family: Vec<RawFamily>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFamily {
    id: String,
    weight: String,
    display: Vec<u32>,
    params: Vec<String>,
    entries: Vec<Vec<String>>,
    constraints: Vec<String>,
    extract: Vec<RawExtraction>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExtraction {
    row: usize,
    col: usize,
    param: String,
    expr: String,
}

fn weight_from_str(id: &str, s: &str) -> Result<WeightMode, CatalogError> {
    match s {
        "zero" => Ok(WeightMode::Zero),
        "lambda" => Ok(WeightMode::SymbolicLambda),
        other => Err(CatalogError::Invalid {
            family: id.to_string(),
            message: format!("unknown weight class {other:?}"),
        }),
    }
}

impl RawFamily {
    fn build(self) -> Result<Family, CatalogError> {
        let id = self.id;
        let invalid = |message: String| CatalogError::Invalid {
            family: id.clone(),
            message,
        };
        let expr = |field: String, text: &str| {
            parse_ratfunc(text).map_err(|e| CatalogError::Expr {
                family: id.clone(),
                field,
                source: ExactError::Parse(e),
            })
        };
        let weight = weight_from_str(&id, &self.weight)?;
        if self.entries.len() != 4 || self.entries.iter().any(|r| r.len() != 4) {
            return Err(invalid("entries must be 4x4".into()));
        }
        let mut cells = Vec::with_capacity(16);
        for (r, row) in self.entries.iter().enumerate() {
            for (c, text) in row.iter().enumerate() {
                cells.push(expr(format!("entry ({}, {})", r + 1, c + 1), text)?);
            }
        }
        let mut cells = cells.into_iter();
        let entries: [[RatFunc; 4]; 4] =
            std::array::from_fn(|_| std::array::from_fn(|_| cells.next().expect("16 cells")));

        let mut allowed: Vec<Var> = self.params.iter().map(|p| Var::new(p)).collect();
        allowed.push(Var::lambda());
        for row in &entries {
            for e in row {
                if let Some(v) = e.variables().into_iter().find(|v| !allowed.contains(v)) {
                    return Err(invalid(format!("entry uses undeclared symbol {v}")));
                }
            }
        }
        if weight == WeightMode::Zero && entries.iter().flatten().any(|e| e.variables().contains(&Var::lambda())) {
            return Err(invalid("weight-zero family mentions lambda".into()));
        }

        let constraints = self
            .constraints
            .iter()
            .map(|t| {
                parse_poly(t).map_err(|source| CatalogError::Expr {
                    family: id.clone(),
                    field: "constraint".into(),
                    source,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;

        let mut extraction = Vec::with_capacity(self.extract.len());
        for x in self.extract {
            if !(1..=4).contains(&x.row) || !(1..=4).contains(&x.col) {
                return Err(invalid(format!("extraction position ({}, {}) out of range", x.row, x.col)));
            }
            if !self.params.contains(&x.param) {
                return Err(invalid(format!("extraction names unknown parameter {}", x.param)));
            }
            extraction.push(Extraction {
                row: x.row - 1,
                col: x.col - 1,
                expr: expr(format!("extraction of {}", x.param), &x.expr)?,
                param: x.param,
            });
        }
        for p in &self.params {
            if !extraction.iter().any(|x| &x.param == p) {
                return Err(invalid(format!("no extraction for parameter {p}")));
            }
        }
        Ok(Family {
            id,
            weight,
            display: self.display,
            params: self.params,
            entries,
            constraints,
            extraction,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Catalog {
    families: Vec<Family>,
}

impl Catalog {
    pub fn parse(text: &str) -> Result<Catalog, CatalogError> {
        let raw: RawCatalog = toml::from_str(text).map_err(|e| CatalogError::Syntax(e.to_string()))?;
        let families = raw.family.into_iter().map(RawFamily::build).collect::<Result<Vec<_>, _>>()?;
        Ok(Catalog { families })
    }

    pub fn load(path: &std::path::Path) -> Result<Catalog, CatalogError> {
        let text = std::fs::read_to_string(path).map_err(|source| CatalogError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Catalog::parse(&text)
    }

    /// Both shipped catalogs, weight zero first.
    pub fn shipped() -> &'static Catalog {
        static CELL: OnceLock<Catalog> = OnceLock::new();
        CELL.get_or_init(|| {
            let mut w0 = Catalog::parse(include_str!("../../data/catalog_w0.txt")).expect("shipped weight-zero catalog");
            let wl = Catalog::parse(include_str!("../../data/catalog_wl.txt")).expect("shipped weight-lambda catalog");
            w0.families.extend(wl.families);
            w0
        })
    }

    pub fn families(&self) -> &[Family] {
        &self.families
    }

    pub fn get(&self, id: &str) -> Option<&Family> {
        self.families.iter().find(|f| f.id == id)
    }

    pub fn list(&self, weight: WeightMode) -> Vec<&Family> {
        self.families.iter().filter(|f| f.weight == weight).collect()
    }

    /// All families of the weight class of `p` (zero weight or not) that contain `p`.
    pub fn match_membership(&self, p: &OperatorMatrix<Rational>) -> Vec<FamilyMatch> {
        let class = if p.weight().is_zero() {
            WeightMode::Zero
        } else {
            WeightMode::SymbolicLambda
        };
        self.families
            .iter()
            .filter(|f| f.weight == class)
            .filter_map(|f| {
                f.match_in(p).map(|a| FamilyMatch {
                    family: f.id.clone(),
                    assignment: a.into_iter().map(|(k, v)| (k, v.to_string())).collect(),
                })
            })
            .collect()
    }
}

pub fn list_families(weight: WeightMode) -> Vec<&'static Family> {
    Catalog::shipped().list(weight)
}

pub fn match_membership(p: &OperatorMatrix<Rational>) -> Vec<FamilyMatch> {
    Catalog::shipped().match_membership(p)
}

impl Family {
    pub fn param_vars(&self) -> Vec<Var> {
        self.params.iter().map(|p| Var::new(p)).collect()
    }

    /// Entries with parameters and lambda symbolic (lambda = 0 for weight zero).
    pub fn symbolic(&self) -> OperatorMatrix<RatFunc> {
        let weight = match self.weight {
            WeightMode::Zero => RatFunc::zero(),
            WeightMode::SymbolicLambda => RatFunc::var(Var::lambda()),
        };
        OperatorMatrix::new(self.entries.clone(), weight)
    }

    /// Instantiation over any field; weight-zero families require `lambda = 0`.
    pub fn instantiate_in<F: Field>(
        &self,
        assignment: &BTreeMap<String, F>,
        lambda: &F,
    ) -> Result<OperatorMatrix<F>, InstantiateError> {
        if self.weight == WeightMode::Zero && !lambda.is_zero() {
            return Err(InstantiateError::WeightMismatch {
                family: self.id.clone(),
                lambda: lambda.to_string(),
            });
        }
        for p in &self.params {
            if !assignment.contains_key(p) {
                return Err(InstantiateError::MissingParam {
                    family: self.id.clone(),
                    param: p.clone(),
                });
            }
        }
        let value_of = |v: &Var| -> Option<F> {
            if *v == Var::lambda() {
                Some(lambda.clone())
            } else {
                assignment.get(v.name()).cloned()
            }
        };
        let violated = |factor: String| InstantiateError::ConstraintViolated {
            family: self.id.clone(),
            factor,
        };
        for c in &self.constraints {
            let v = c.eval_with(value_of).expect("constraint symbols are declared");
            if v.is_zero() {
                return Err(violated(c.to_string()));
            }
        }
        let mut out = OperatorMatrix::zero(lambda.clone());
        for (r, row) in self.entries.iter().enumerate() {
            for (c, e) in row.iter().enumerate() {
                let v = e.eval_with(value_of).map_err(|_| violated(e.denominator().to_string()))?;
                out.set_entry(r, c, v);
            }
        }
        Ok(out)
    }

    pub fn instantiate(
        &self,
        assignment: &BTreeMap<String, Rational>,
        lambda: &Rational,
    ) -> Result<OperatorMatrix<Rational>, InstantiateError> {
        self.instantiate_in(assignment, lambda)
    }

    /// Reads parameters off `p` with the extraction recipe and returns them when
    /// instantiating at them reproduces `p` exactly.
    pub fn match_in<F: Field>(&self, p: &OperatorMatrix<F>) -> Option<BTreeMap<String, F>> {
        let x_var = Var::new("x");
        let mut assignment: BTreeMap<String, F> = BTreeMap::new();
        for ex in &self.extraction {
            let x = p.entry(ex.row, ex.col);
            let value = ex
                .expr
                .eval_with(|v: &Var| {
                    if *v == x_var {
                        Some(x.clone())
                    } else if *v == Var::lambda() {
                        Some(p.weight().clone())
                    } else {
                        assignment.get(v.name()).cloned()
                    }
                })
                .ok()?;
            assignment.insert(ex.param.clone(), value);
        }
        let candidate = self.instantiate_in(&assignment, p.weight()).ok()?;
        (candidate.entries() == p.entries()).then_some(assignment)
    }

    /// Every denominator factor of every entry, as primitive polynomials.
    pub fn denominator_factors(&self) -> Vec<MultiPoly> {
        let mut out: Vec<MultiPoly> = Vec::new();
        for e in self.entries.iter().flatten() {
            for (f, _) in e.denominator_factors() {
                let prim = f.primitive_part().1;
                if !out.contains(&prim) {
                    out.push(prim);
                }
            }
        }
        out
    }
}

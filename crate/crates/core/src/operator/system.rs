//! Polynomial systems in the unknown entries a11..a44 (and lambda), generated
//! from the matrix residuals, and their comparison with a transcribed corpus.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::exactmath::{parse_poly, ExactError, MultiPoly, Ring, Var};

use super::{theorem31_residuals, OperatorMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightMode {
    /// lambda = 0
    Zero,
    /// lambda kept as an indeterminate
    #[serde(rename = "lambda")]
    SymbolicLambda,
}

/// Residual entry `[j][k][i]`: the defect at `(e_i, e_j)`, coordinate k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ResidualEntry {
    pub j: usize,
    pub k: usize,
    pub i: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemPoly {
    /// Primitive representative: coprime integer coefficients, positive leading coefficient.
    pub poly: MultiPoly,
    /// Every residual entry equal to a nonzero multiple of `poly`, in generation order.
    pub sources: Vec<ResidualEntry>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolySystem {
    mode: WeightMode,
    polys: Vec<SystemPoly>,
    raw_nonzero: usize,
}

/// Builds the system from the 64 residual entries of the fully symbolic operator.
///
/// Zero entries are dropped, the rest are identified up to a nonzero rational
/// factor, and the result is ordered by term count (then first occurrence).
pub fn generate_system(mode: WeightMode) -> PolySystem {
    let weight = match mode {
        WeightMode::Zero => MultiPoly::zero(),
        WeightMode::SymbolicLambda => MultiPoly::var(Var::lambda()),
    };
    let residuals = theorem31_residuals(&OperatorMatrix::symbolic(weight));
    let mut polys: Vec<SystemPoly> = Vec::new();
    let mut index: HashMap<MultiPoly, usize> = HashMap::new();
    let mut raw_nonzero = 0;
    for (j, block) in residuals.iter().enumerate() {
        for (k, row) in block.iter().enumerate() {
            for (i, entry) in row.iter().enumerate() {
                if entry.is_zero() {
                    continue;
                }
                raw_nonzero += 1;
                let (_, prim) = entry.primitive_part();
                let source = ResidualEntry { j, k, i };
                match index.get(&prim) {
                    Some(&n) => polys[n].sources.push(source),
                    None => {
                        index.insert(prim.clone(), polys.len());
                        polys.push(SystemPoly {
                            poly: prim,
                            sources: vec![source],
                        });
                    }
                }
            }
        }
    }
    polys.sort_by_key(|p| p.poly.term_count());
    PolySystem {
        mode,
        polys,
        raw_nonzero,
    }
}

/// Generated once per mode and shared.
pub fn cached_system(mode: WeightMode) -> &'static PolySystem {
    static ZERO: OnceLock<PolySystem> = OnceLock::new();
    static LAMBDA: OnceLock<PolySystem> = OnceLock::new();
    match mode {
        WeightMode::Zero => ZERO.get_or_init(|| generate_system(mode)),
        WeightMode::SymbolicLambda => LAMBDA.get_or_init(|| generate_system(mode)),
    }
}

impl PolySystem {
    pub fn mode(&self) -> WeightMode {
        self.mode
    }

    pub fn polys(&self) -> &[SystemPoly] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// Number of residual entries that were not identically zero.
    pub fn raw_nonzero(&self) -> usize {
        self.raw_nonzero
    }

    pub fn contains_up_to_scalar(&self, p: &MultiPoly) -> bool {
        let (_, prim) = p.primitive_part();
        self.polys.iter().any(|q| q.poly == prim)
    }

    /// Index of the first polynomial not vanishing at the given entries and weight.
    /// In zero mode the weight is ignored.
    pub fn first_nonvanishing<R: Ring>(&self, entries: &[[R; 4]; 4], lambda: &R) -> Option<usize> {
        let value_of = |v: &Var| -> Option<R> {
            match v.matrix_position() {
                Some((r, c)) => Some(entries[r][c].clone()),
                None if *v == Var::lambda() => Some(lambda.clone()),
                None => None,
            }
        };
        self.polys.iter().position(|p| {
            !p.poly
                .eval_with(value_of)
                .expect("system polynomials only use matrix entries and lambda")
                .is_zero()
        })
    }

    pub fn vanishes_at<R: Ring>(&self, p: &OperatorMatrix<R>) -> bool {
        self.first_nonvanishing(p.entries(), p.weight()).is_none()
    }
}

impl fmt::Display for PolySystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.polys {
            writeln!(f, "{} = 0", p.poly)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CorpusKind {
    /// Weight-zero list, labels (a1), (a2), ...
    A,
    /// Symbolic-weight list, labels (b1), (b2), ...
    B,
}

impl CorpusKind {
    pub fn prefix(self) -> char {
        match self {
            CorpusKind::A => 'a',
            CorpusKind::B => 'b',
        }
    }

    pub fn matching_mode(self) -> WeightMode {
        match self {
            CorpusKind::A => WeightMode::Zero,
            CorpusKind::B => WeightMode::SymbolicLambda,
        }
    }

    fn shipped_text(self) -> &'static str {
        match self {
            CorpusKind::A => include_str!("../../data/system_a.txt"),
            CorpusKind::B => include_str!("../../data/system_b.txt"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEquation {
    /// e.g. "(b35)"
    pub label: String,
    /// 1-based line in the source file.
    pub line: usize,
    pub text: String,
    pub poly: MultiPoly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    pub kind: CorpusKind,
    pub equations: Vec<CorpusEquation>,
}

#[derive(Debug, Error)]
pub enum CorpusLoadError {
    #[error("cannot read corpus {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("corpus line {line}: {source}")]
    Parse { line: usize, source: ExactError },
    #[error("corpus line {line}: equation is identically zero")]
    ZeroEquation { line: usize },
    #[error("corpus contains no equations")]
    Empty,
}

impl Corpus {
    /// One polynomial per line (each meaning `poly = 0`); `#` starts a comment.
    pub fn parse(kind: CorpusKind, text: &str) -> Result<Corpus, CorpusLoadError> {
        let mut equations = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let body = body.strip_suffix("=0").or_else(|| body.strip_suffix("= 0")).unwrap_or(body);
            let poly = parse_poly(body).map_err(|source| CorpusLoadError::Parse { line, source })?;
            if poly.is_zero() {
                return Err(CorpusLoadError::ZeroEquation { line });
            }
            equations.push(CorpusEquation {
                label: format!("({}{})", kind.prefix(), equations.len() + 1),
                line,
                text: body.to_string(),
                poly,
            });
        }
        if equations.is_empty() {
            return Err(CorpusLoadError::Empty);
        }
        Ok(Corpus { kind, equations })
    }

    pub fn load(kind: CorpusKind, path: &Path) -> Result<Corpus, CorpusLoadError> {
        let text = std::fs::read_to_string(path).map_err(|source| CorpusLoadError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Corpus::parse(kind, &text)
    }

    /// The transcription compiled into the library.
    pub fn shipped(kind: CorpusKind) -> Corpus {
        Corpus::parse(kind, kind.shipped_text()).expect("shipped corpus parses")
    }
}

/// A variable renaming applied to one corpus equation before matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KnownTypo {
    pub kind: CorpusKind,
    /// 1-based equation number within the corpus.
    pub equation: usize,
    pub from: &'static str,
    pub to: &'static str,
}

/// `a35` is not an entry of a 4x4 matrix; the regenerated system shows `a23` is meant.
pub const KNOWN_CORPUS_TYPOS: &[KnownTypo] = &[KnownTypo {
    kind: CorpusKind::B,
    equation: 35,
    from: "a35",
    to: "a23",
}];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AppliedTypo {
    pub label: String,
    pub from: String,
    pub to: String,
    pub before: String,
    pub after: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnmatchedCorpusEquation {
    pub label: String,
    pub line: usize,
    pub poly: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranscriptionDiff {
    pub corpus_equations: usize,
    pub generated_polys: usize,
    pub corpus_unmatched: Vec<UnmatchedCorpusEquation>,
    pub generated_unmatched: Vec<String>,
    pub substitutions: Vec<AppliedTypo>,
}

impl TranscriptionDiff {
    pub fn is_empty(&self) -> bool {
        self.corpus_unmatched.is_empty() && self.generated_unmatched.is_empty()
    }

    pub fn corpus_matched(&self) -> usize {
        self.corpus_equations - self.corpus_unmatched.len()
    }
}

fn rename(p: &MultiPoly, from: &str, to: &str) -> MultiPoly {
    let from = Var::new(from);
    p.eval_with(|v| {
        Some(if *v == from {
            MultiPoly::var(Var::new(to))
        } else {
            MultiPoly::var(v.clone())
        })
    })
    .expect("every variable is mapped")
}

/// Two-sided matching up to a nonzero rational factor, after applying the
/// entries of [`KNOWN_CORPUS_TYPOS`] for this corpus.
pub fn compare_with_transcription(generated: &PolySystem, corpus: &Corpus) -> TranscriptionDiff {
    let mut substitutions = Vec::new();
    let mut corpus_prims = Vec::with_capacity(corpus.equations.len());
    for (n, eq) in corpus.equations.iter().enumerate() {
        let mut poly = eq.poly.clone();
        for typo in KNOWN_CORPUS_TYPOS {
            if typo.kind == corpus.kind && typo.equation == n + 1 && poly.variables().contains(&Var::new(typo.from)) {
                let fixed = rename(&poly, typo.from, typo.to);
                substitutions.push(AppliedTypo {
                    label: eq.label.clone(),
                    from: typo.from.to_string(),
                    to: typo.to.to_string(),
                    before: poly.to_string(),
                    after: fixed.to_string(),
                });
                poly = fixed;
            }
        }
        corpus_prims.push(poly.primitive_part().1);
    }
    let corpus_unmatched = corpus
        .equations
        .iter()
        .zip(&corpus_prims)
        .filter(|(_, prim)| !generated.polys.iter().any(|g| &g.poly == *prim))
        .map(|(eq, prim)| UnmatchedCorpusEquation {
            label: eq.label.clone(),
            line: eq.line,
            poly: prim.to_string(),
        })
        .collect();
    let generated_unmatched = generated
        .polys
        .iter()
        .filter(|g| !corpus_prims.contains(&g.poly))
        .map(|g| g.poly.to_string())
        .collect();
    TranscriptionDiff {
        corpus_equations: corpus.equations.len(),
        generated_polys: generated.len(),
        corpus_unmatched,
        generated_unmatched,
        substitutions,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(s: &str) -> MultiPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn zero_mode_contains_quoted_equation() {
        let sys = generate_system(WeightMode::Zero);
        assert!(sys.contains_up_to_scalar(&poly("-2*a21*a22")));
        assert!(sys.polys().iter().all(|p| !p.poly.variables().contains(&Var::lambda())));
    }

    #[test]
    fn lambda_mode_contains_quoted_equations() {
        let sys = generate_system(WeightMode::SymbolicLambda);
        assert!(sys.contains_up_to_scalar(&poly("-2*a21*a22-lambda*a21")));
        assert!(sys.contains_up_to_scalar(&poly("a23^2-a13^2")));
        assert!(!sys.contains_up_to_scalar(&poly("a35^2-a13^2")));
    }

    #[test]
    fn ordering_and_dedup() {
        let sys = generate_system(WeightMode::SymbolicLambda);
        let counts: Vec<usize> = sys.polys().iter().map(|p| p.poly.term_count()).collect();
        assert!(counts.windows(2).all(|w| w[0] <= w[1]));
        let total: usize = sys.polys().iter().map(|p| p.sources.len()).sum();
        assert_eq!(total, sys.raw_nonzero());
        for (n, p) in sys.polys().iter().enumerate() {
            for q in &sys.polys()[n + 1..] {
                assert_ne!(p.poly, q.poly);
            }
        }
    }

    #[test]
    fn a_list_matches_zero_mode() {
        let diff = compare_with_transcription(&generate_system(WeightMode::Zero), &Corpus::shipped(CorpusKind::A));
        assert!(diff.is_empty(), "{diff:?}");
        assert!(diff.substitutions.is_empty());
        assert_eq!(diff.corpus_equations, 58);
    }

    #[test]
    fn b_list_matches_lambda_mode_after_typo() {
        let diff = compare_with_transcription(
            &generate_system(WeightMode::SymbolicLambda),
            &Corpus::shipped(CorpusKind::B),
        );
        assert!(diff.is_empty(), "{diff:?}");
        assert_eq!(diff.substitutions.len(), 1);
        assert_eq!(diff.substitutions[0].label, "(b35)");
        assert_eq!(diff.corpus_equations, 58);
    }

    #[test]
    fn mismatched_pairing_is_reported() {
        let diff = compare_with_transcription(
            &generate_system(WeightMode::SymbolicLambda),
            &Corpus::shipped(CorpusKind::A),
        );
        assert!(!diff.is_empty());
        assert!(!diff.generated_unmatched.is_empty());
    }

    #[test]
    fn corpus_errors_carry_line_numbers() {
        let err = Corpus::parse(CorpusKind::A, "# header\na11^2\na11*(\n").unwrap_err();
        assert!(matches!(err, CorpusLoadError::Parse { line: 3, .. }));
        assert!(matches!(Corpus::parse(CorpusKind::A, "# only\n"), Err(CorpusLoadError::Empty)));
        assert!(matches!(
            Corpus::parse(CorpusKind::A, "a11-a11\n"),
            Err(CorpusLoadError::ZeroEquation { line: 1 })
        ));
    }

    #[test]
    fn vanishing_examples() {
        let sys = generate_system(WeightMode::SymbolicLambda);
        let lam = crate::exactmath::rat(2);
        let neg = OperatorMatrix::scalar(&-lam.clone(), lam.clone());
        assert!(sys.vanishes_at(&neg));
        assert!(!sys.vanishes_at(&OperatorMatrix::identity(lam)));
    }
}

//! Linear operators on the split semi-quaternion algebra and the Rota-Baxter
//! identity
//!
//! ```text
//! P(x) P(y) = P(P(x) y) + P(x P(y)) + lambda P(x y)
//! ```

mod structure;
mod system;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::SsqElement;
use crate::exactmath::{parse_ratfunc, ExactError, ParseError, RatFunc, Rational, Ring, Var};

pub use structure::{theorem31_residuals, ResidualMatrices, StructureMatrices};
pub use system::{
    cached_system, compare_with_transcription, generate_system, AppliedTypo, Corpus, CorpusEquation, CorpusKind,
    CorpusLoadError, KnownTypo, PolySystem, ResidualEntry, SystemPoly, TranscriptionDiff,
    UnmatchedCorpusEquation, WeightMode,
    KNOWN_CORPUS_TYPOS,
};

/// Matrix of a linear operator in the basis e0..e3 together with its weight.
///
/// Column `j` holds the coordinates of P(e_j); `entries[r][c]` is a_{(r+1)(c+1)}.
#[derive(Clone, PartialEq)]
pub struct OperatorMatrix<R> {
    entries: [[R; 4]; 4],
    weight: R,
}

impl<R: Ring> OperatorMatrix<R> {
    pub fn new(entries: [[R; 4]; 4], weight: R) -> Self {
        OperatorMatrix { entries, weight }
    }

    pub fn zero(weight: R) -> Self {
        OperatorMatrix::new(std::array::from_fn(|_| std::array::from_fn(|_| R::zero())), weight)
    }

    pub fn scalar(s: &R, weight: R) -> Self {
        let mut m = OperatorMatrix::zero(weight);
        for i in 0..4 {
            m.entries[i][i] = s.clone();
        }
        m
    }

    pub fn identity(weight: R) -> Self {
        OperatorMatrix::scalar(&R::one(), weight)
    }

    pub fn entries(&self) -> &[[R; 4]; 4] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> &R {
        &self.entries[row][col]
    }

    pub fn set_entry(&mut self, row: usize, col: usize, value: R) {
        self.entries[row][col] = value;
    }

    pub fn weight(&self) -> &R {
        &self.weight
    }

    pub fn with_weight(mut self, weight: R) -> Self {
        self.weight = weight;
        self
    }

    /// Coordinates of P(e_j).
    pub fn column(&self, j: usize) -> SsqElement<R> {
        SsqElement::new(std::array::from_fn(|i| self.entries[i][j].clone()))
    }

    pub fn apply(&self, x: &SsqElement<R>) -> SsqElement<R> {
        SsqElement::new(std::array::from_fn(|i| {
            (0..4).fold(R::zero(), |acc, j| {
                if x.coord(j).is_zero() {
                    acc
                } else {
                    acc.add_ref(&self.entries[i][j].mul_ref(x.coord(j)))
                }
            })
        }))
    }

    pub fn scale(&self, s: &R) -> Self {
        OperatorMatrix::new(
            std::array::from_fn(|i| std::array::from_fn(|j| s.mul_ref(&self.entries[i][j]))),
            self.weight.clone(),
        )
    }

    /// `-lambda * identity - P`, Rota-Baxter of the same weight whenever P is.
    pub fn companion(&self) -> Self {
        let minus_lambda = self.weight.neg_ref();
        OperatorMatrix::new(
            std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    let diag = if i == j { minus_lambda.clone() } else { R::zero() };
                    diag.sub_ref(&self.entries[i][j])
                })
            }),
            self.weight.clone(),
        )
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> OperatorMatrix<S> {
        OperatorMatrix::new(
            std::array::from_fn(|i| std::array::from_fn(|j| f(&self.entries[i][j]))),
            f(&self.weight),
        )
    }

    /// `P(x)P(y) - P(P(x)y) - P(xP(y)) - lambda P(xy)`; zero iff the identity holds at (x, y).
    pub fn rb_defect(&self, x: &SsqElement<R>, y: &SsqElement<R>) -> SsqElement<R> {
        let px = self.apply(x);
        let py = self.apply(y);
        let lhs = px.multiply(&py);
        let t1 = self.apply(&px.multiply(y));
        let t2 = self.apply(&x.multiply(&py));
        let t3 = self.apply(&x.multiply(y)).scale(&self.weight);
        lhs.sub(&t1).sub(&t2).sub(&t3)
    }

    /// Defects on all 16 basis pairs, in pair order (0,0), (0,1), ..., (3,3).
    pub fn basis_defects(&self) -> Vec<((usize, usize), SsqElement<R>)> {
        (0..16)
            .map(|n| {
                let (i, j) = (n / 4, n % 4);
                ((i, j), self.rb_defect(&SsqElement::basis(i), &SsqElement::basis(j)))
            })
            .collect()
    }

    /// Checks the identity on the 16 basis pairs, which suffices by bilinearity.
    pub fn is_rota_baxter(&self) -> RbVerdict<R> {
        for n in 0..16 {
            let (i, j) = (n / 4, n % 4);
            let defect = self.rb_defect(&SsqElement::basis(i), &SsqElement::basis(j));
            if !defect.is_zero() {
                return RbVerdict::Fails {
                    pair: (i, j),
                    defect,
                };
            }
        }
        RbVerdict::Holds
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            lambda: self.weight.to_string(),
            entries: std::array::from_fn(|i| std::array::from_fn(|j| self.entries[i][j].to_string())),
        }
    }
}

impl OperatorMatrix<crate::exactmath::MultiPoly> {
    /// The fully symbolic operator with entries a11..a44.
    pub fn symbolic(weight: crate::exactmath::MultiPoly) -> Self {
        OperatorMatrix::new(
            std::array::from_fn(|i| {
                std::array::from_fn(|j| crate::exactmath::MultiPoly::var(Var::matrix_entry(i, j)))
            }),
            weight,
        )
    }
}

impl OperatorMatrix<RatFunc> {
    /// Rational matrix when every entry and the weight are constants.
    pub fn to_rational(&self) -> Option<OperatorMatrix<Rational>> {
        let constant = |r: &RatFunc| r.as_poly().and_then(|p| p.as_constant());
        let mut out = OperatorMatrix::<Rational>::zero(constant(&self.weight)?);
        for i in 0..4 {
            for j in 0..4 {
                out.entries[i][j] = constant(&self.entries[i][j])?;
            }
        }
        Some(out)
    }
}

impl<R: Ring> fmt::Display for OperatorMatrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = self
            .entries
            .iter()
            .map(|row| row.iter().map(|c| c.to_string()).collect())
            .collect();
        let widths: Vec<usize> = (0..4)
            .map(|j| cells.iter().map(|r| r[j].len()).max().unwrap_or(1))
            .collect();
        for row in &cells {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect();
            writeln!(f, "[ {} ]", line.join("  "))?;
        }
        write!(f, "weight {}", self.weight)
    }
}

impl<R: Ring> fmt::Debug for OperatorMatrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OperatorMatrix(lambda={}, {:?})", self.weight, self.entries)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RbVerdict<R: Ring> {
    Holds,
    /// First failing basis pair (e_i, e_j) in pair order and its defect.
    Fails {
        pair: (usize, usize),
        defect: SsqElement<R>,
    },
}

impl<R: Ring> RbVerdict<R> {
    pub fn holds(&self) -> bool {
        matches!(self, RbVerdict::Holds)
    }
}

/// Matrix file format: `{"lambda": "<coeff>", "entries": [[<coeff> x4] x4]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub lambda: String,
    pub entries: [[String; 4]; 4],
}

#[derive(Debug, Error)]
pub enum MatrixLoadError {
    #[error("invalid matrix JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("entry ({row}, {col}): {source}")]
    Entry {
        row: usize,
        col: usize,
        source: ParseError,
    },
    #[error("lambda: {0}")]
    Lambda(ParseError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

impl MatrixJson {
    pub fn from_json_str(text: &str) -> Result<Self, MatrixLoadError> {
        serde_json::from_str(text).map_err(|e| MatrixLoadError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn to_matrix(&self) -> Result<OperatorMatrix<RatFunc>, MatrixLoadError> {
        let weight = parse_ratfunc(&self.lambda).map_err(MatrixLoadError::Lambda)?;
        let mut m = OperatorMatrix::<RatFunc>::zero(weight);
        for (i, row) in self.entries.iter().enumerate() {
            for (j, text) in row.iter().enumerate() {
                let v = parse_ratfunc(text).map_err(|source| MatrixLoadError::Entry {
                    row: i + 1,
                    col: j + 1,
                    source,
                })?;
                m.set_entry(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn to_rational_matrix(&self) -> Result<OperatorMatrix<Rational>, MatrixLoadError> {
        self.to_matrix()?.to_rational().ok_or_else(|| {
            MatrixLoadError::Exact(ExactError::NotPolynomial(
                "matrix entries and lambda must be rational constants".into(),
            ))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{rat, MultiPoly};

    fn e(i: usize) -> SsqElement<Rational> {
        SsqElement::basis(i)
    }

    #[test]
    fn apply_examples() {
        let zero = OperatorMatrix::zero(rat(0));
        assert!(zero.apply(&e(1)).is_zero());
        let id = OperatorMatrix::identity(rat(0));
        let x = SsqElement::new([rat(1), rat(-2), rat(3), rat(5)]);
        assert_eq!(id.apply(&x), x);
        let mut p = OperatorMatrix::zero(rat(0));
        p.set_entry(2, 0, rat(1));
        assert_eq!(p.apply(&e(0)), e(2));
    }

    #[test]
    fn defect_examples() {
        let zero = OperatorMatrix::zero(rat(5));
        assert!(zero.rb_defect(&e(1), &e(3)).is_zero());
        let id = OperatorMatrix::identity(rat(0));
        assert_eq!(id.rb_defect(&e(0), &e(0)), e(0).neg());
        let lam = MultiPoly::named("lambda");
        let p = OperatorMatrix::scalar(&lam.neg(), lam);
        let x = SsqElement::new([1, 2, 3, 4].map(|n| MultiPoly::constant(rat(n))));
        let y = SsqElement::new(["a", "b", "c", "d"].map(MultiPoly::named));
        assert!(p.rb_defect(&x, &y).is_zero());
    }

    #[test]
    fn verdict_examples() {
        assert!(OperatorMatrix::zero(rat(5)).is_rota_baxter().holds());
        match OperatorMatrix::identity(rat(0)).is_rota_baxter() {
            RbVerdict::Fails { pair, defect } => {
                assert_eq!(pair, (0, 0));
                assert_eq!(defect, e(0).neg());
            }
            RbVerdict::Holds => panic!("identity is not Rota-Baxter of weight 0"),
        }
        let mut p = OperatorMatrix::zero(rat(0));
        p.set_entry(2, 0, rat(1));
        p.set_entry(2, 1, rat(2));
        p.set_entry(3, 0, rat(3));
        p.set_entry(3, 1, rat(4));
        assert!(p.is_rota_baxter().holds());
    }

    #[test]
    fn matrix_json_round_trip() {
        let text = r#"{"lambda": "1/2", "entries": [["0","0","0","0"],["0","-1","0","0"],["1/3","0","0","0"],["0","0","0","2"]]}"#;
        let m = MatrixJson::from_json_str(text).unwrap().to_rational_matrix().unwrap();
        assert_eq!(m.entry(2, 0), &crate::exactmath::ratio(1, 3));
        let again = m.to_json().to_rational_matrix().unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn matrix_json_errors() {
        assert!(matches!(
            MatrixJson::from_json_str("{\"lambda\": 0}"),
            Err(MatrixLoadError::Json { line: 1, .. })
        ));
        let bad = r#"{"lambda": "0", "entries": [["0","0","0","0"],["0","0","0","0"],["0","0","1+","0"],["0","0","0","0"]]}"#;
        assert!(matches!(
            MatrixJson::from_json_str(bad).unwrap().to_matrix(),
            Err(MatrixLoadError::Entry { row: 3, col: 3, .. })
        ));
    }
}

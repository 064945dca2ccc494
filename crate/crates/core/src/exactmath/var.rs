use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

/// Names with a fixed position in the monomial order, highest priority first.
const FIXED_ORDER: [&str; 21] = [
    "a11", "a12", "a13", "a14", "a21", "a22", "a23", "a24", "a31", "a32", "a33", "a34", "a41",
    "a42", "a43", "a44", "a", "b", "c", "d", "lambda",
];

/// A named polynomial variable.
///
/// Variables order as a11 > a12 > ... > a44 > a > b > c > d > lambda, followed by
/// any other name in lexicographic order. `λ` is accepted as a spelling of `lambda`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Var {
    rank: u16,
    name: Arc<str>,
}

impl Var {
    pub fn new(name: &str) -> Self {
        let name = if name == "λ" { "lambda" } else { name };
        let rank = FIXED_ORDER
            .iter()
            .position(|n| *n == name)
            .map_or(u16::MAX, |p| p as u16);
        Var {
            rank,
            name: Arc::from(name),
        }
    }

    pub fn lambda() -> Self {
        Var::new("lambda")
    }

    /// The operator-matrix unknown a_{row+1, col+1} for 0-based `row`, `col`.
    pub fn matrix_entry(row: usize, col: usize) -> Self {
        assert!(row < 4 && col < 4, "matrix entry index out of range");
        Var::new(FIXED_ORDER[4 * row + col])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// 0-based (row, col) when this is one of a11..a44.
    pub fn matrix_position(&self) -> Option<(usize, usize)> {
        (self.rank < 16).then_some((self.rank as usize / 4, self.rank as usize % 4))
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank
            .cmp(&other.rank)
            .then_with(|| self.name.cmp(&other.name))
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

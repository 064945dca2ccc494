//! Fixed rational matrices encoding products of operator images, and the
//! matrix form of the Rota-Baxter identity built from them.

use std::sync::OnceLock;

use crate::algebra::SsqElement;
use crate::exactmath::{rat, Rational, Ring};

use super::OperatorMatrix;

/// One 4x4 residual per basis column index j; all zero iff P is Rota-Baxter.
pub type ResidualMatrices<R> = [[[R; 4]; 4]; 4];

/// `c` is 4x16: coordinate k of `P(e_i)P(e_j)` is
/// `sum_{r,s} gamma_i[r] * c[r][4k+s] * gamma_j[s]`.
/// `e[k]` is left multiplication by e_k, `r[k]` right multiplication by e_k
/// (row s of `r[k]` holds the coordinates of e_s e_k). `r[0]` is the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureMatrices {
    pub c: [[Rational; 16]; 4],
    pub e: [[[Rational; 4]; 4]; 4],
    pub r: [[[Rational; 4]; 4]; 4],
}

const PRODUCT: [[i64; 16]; 4] = [
    [1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1],
    [0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0, 0, 0],
];

const IDENTITY: [[i64; 4]; 4] = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];

const LEFT: [[[i64; 4]; 4]; 4] = [
    IDENTITY,
    [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
    [[0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 0], [0, -1, 0, 0]],
    [[0, 0, 0, 0], [0, 0, 0, 0], [0, -1, 0, 0], [1, 0, 0, 0]],
];

const RIGHT: [[[i64; 4]; 4]; 4] = [
    IDENTITY,
    [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, -1, 0]],
    [[0, 0, 1, 0], [0, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0]],
    [[0, 0, 0, 1], [0, 0, 1, 0], [0, 0, 0, 0], [0, 0, 0, 0]],
];

fn lift<const N: usize>(rows: &[[i64; N]; 4]) -> [[Rational; N]; 4] {
    std::array::from_fn(|i| std::array::from_fn(|j| rat(rows[i][j])))
}

impl StructureMatrices {
    pub fn build() -> Self {
        StructureMatrices {
            c: lift(&PRODUCT),
            e: std::array::from_fn(|k| lift(&LEFT[k])),
            r: std::array::from_fn(|k| lift(&RIGHT[k])),
        }
    }

    pub fn get() -> &'static StructureMatrices {
        static CELL: OnceLock<StructureMatrices> = OnceLock::new();
        CELL.get_or_init(StructureMatrices::build)
    }

    /// `P(e_i) P(e_j)` computed through `c` alone.
    pub fn image_product<R: Ring>(&self, p: &OperatorMatrix<R>, i: usize, j: usize) -> SsqElement<R> {
        let gi = p.column(i);
        let gj = p.column(j);
        SsqElement::new(std::array::from_fn(|k| {
            let mut acc = R::zero();
            for (r, row) in PRODUCT.iter().enumerate() {
                for s in 0..4 {
                    let c = &row[4 * k + s];
                    if *c != 0 {
                        let t = gi.coord(r).mul_ref(gj.coord(s));
                        acc = if *c > 0 { acc.add_ref(&t) } else { acc.sub_ref(&t) };
                    }
                }
            }
            acc
        }))
    }
}

fn signed_sum<R: Ring>(terms: impl IntoIterator<Item = (i64, R)>) -> R {
    terms.into_iter().fold(R::zero(), |acc, (s, t)| match s {
        0 => acc,
        1 => acc.add_ref(&t),
        -1 => acc.sub_ref(&t),
        _ => acc.add_ref(&R::from_int(s).mul_ref(&t)),
    })
}

/// Residuals `M_j^T P - P N_j - P R_j^T P - lambda P R_j^T` for j = 0..3, where
/// `M_j[r][k] = sum_s C[r][4k+s] gamma_j[s]` and column k of `N_j` is `E_k gamma_j`.
///
/// Entry `[j][k][i]` equals coordinate k of the defect at `(e_i, e_j)`.
pub fn theorem31_residuals<R: Ring>(p: &OperatorMatrix<R>) -> ResidualMatrices<R> {
    let a = p.entries();
    let lambda = p.weight();
    std::array::from_fn(|j| {
        let m: [[R; 4]; 4] = std::array::from_fn(|r| {
            std::array::from_fn(|k| signed_sum((0..4).map(|s| (PRODUCT[r][4 * k + s], a[s][j].clone()))))
        });
        let n: [[R; 4]; 4] = std::array::from_fn(|r| {
            std::array::from_fn(|k| signed_sum((0..4).map(|s| (LEFT[k][r][s], a[s][j].clone()))))
        });
        // (R_j^T P)[r][i] = sum_s R_j[s][r] a[s][i]
        let rp: [[R; 4]; 4] = std::array::from_fn(|r| {
            std::array::from_fn(|i| signed_sum((0..4).map(|s| (RIGHT[j][s][r], a[s][i].clone()))))
        });
        std::array::from_fn(|k| {
            std::array::from_fn(|i| {
                let mut acc = R::zero();
                for r in 0..4 {
                    acc = acc.add_ref(&m[r][k].mul_ref(&a[r][i]));
                    acc = acc.sub_ref(&a[k][r].mul_ref(&n[r][i]));
                    acc = acc.sub_ref(&a[k][r].mul_ref(&rp[r][i]));
                    if RIGHT[j][i][r] != 0 {
                        let t = lambda.mul_ref(&a[k][r]);
                        acc = if RIGHT[j][i][r] > 0 { acc.sub_ref(&t) } else { acc.add_ref(&t) };
                    }
                }
                acc
            })
        })
    })
}

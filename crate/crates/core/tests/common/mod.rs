#![allow(dead_code)]

use latdiag::diagram::{build_chain_diagram, kernel_chain, InclusionDiagram};
use latdiag::{AmbientFunctional, IntMatrix, Lattice};
use num_bigint::BigInt;
use proptest::prelude::*;

pub fn lat(n: usize, rows: &[&[i64]]) -> Lattice {
    Lattice::from_generators(n, &IntMatrix::from_i64(rows)).unwrap()
}

pub fn a_chain() -> InclusionDiagram {
    build_chain_diagram(
        3,
        vec![
            lat(3, &[&[1, 3, 0], &[3, 1, 0]]),
            lat(3, &[&[1, 0, -24], &[0, 1, 8], &[0, 0, 64]]),
            Lattice::full(3),
        ],
    )
    .unwrap()
}

pub fn f() -> AmbientFunctional {
    AmbientFunctional::coordinate(3, 0)
}

pub fn g() -> AmbientFunctional {
    AmbientFunctional::coordinate(3, 1)
}

pub fn b_chain() -> InclusionDiagram {
    kernel_chain(&a_chain(), &f()).unwrap()
}

pub fn c_chain() -> InclusionDiagram {
    kernel_chain(&a_chain(), &g()).unwrap()
}

pub fn matrix_from(rows: usize, cols: usize, entries: &[i64]) -> IntMatrix {
    IntMatrix::new(rows, cols, entries.iter().map(|&e| BigInt::from(e)).collect()).unwrap()
}

/// `(rows, cols, entries)` with entries in `[-bound, bound]`.
pub fn small_matrix(max_rows: usize, max_cols: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-bound..=bound, r * c).prop_map(move |e| matrix_from(r, c, &e))
    })
}

/// Elementary row operations `(i, j, k)`: add `k` times row `j` to row `i`,
/// or negate row `i` when `i == j`.
pub fn elementary_ops(n: usize, len: usize) -> impl Strategy<Value = Vec<(usize, usize, i64)>> {
    prop::collection::vec((0..n, 0..n, -2i64..=2), 0..=len)
}

/// Product of elementary operations applied to the identity; indices are
/// taken modulo `n`.
pub fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    for &(i, j, k) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            u.negate_row(i);
        } else {
            u.add_row_multiple(i, j, &BigInt::from(k));
        }
    }
    u
}

/// Laplace expansion; independent of the library's elimination.
pub fn det_laplace(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut total = BigInt::from(0);
    for j in 0..n {
        if m[0][j] == BigInt::from(0) {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, e)| e.clone()).collect())
            .collect();
        let term = &m[0][j] * det_laplace(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

pub fn rows_of(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    m.row_iter().map(|r| r.to_vec()).collect()
}

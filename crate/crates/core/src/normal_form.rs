//! Hermite and Smith normal forms with their unimodular transforms, plus the
//! integer solving and kernel routines built on them.
//!
//! The Hermite form is row-style: every pivot is positive, entries below a
//! pivot are zero, entries above a pivot lie in `[0, pivot)`, and zero rows sit
//! at the bottom. It is unique for a given row lattice, so lattices compare by
//! comparing their Hermite bases.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// `u · m = h` with `u` unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HnfResult {
    pub h: IntMatrix,
    pub u: IntMatrix,
}

impl HnfResult {
    /// Number of nonzero rows of `h`.
    pub fn rank(&self) -> usize {
        (0..self.h.rows())
            .take_while(|&i| !self.h.row_is_zero(i))
            .count()
    }

    /// Column index of each nonzero row's pivot.
    pub fn pivot_columns(&self) -> Vec<usize> {
        pivot_columns(&self.h)
    }
}

/// `l · m · r = d` with `l`, `r` unimodular and `d` diagonal with a divisor chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub d: IntMatrix,
    pub l: IntMatrix,
    pub r: IntMatrix,
}

impl SnfResult {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    /// The nonzero diagonal entries: the elementary divisors.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|d| !d.is_zero()).collect()
    }
}

fn pivot_columns(h: &IntMatrix) -> Vec<usize> {
    h.row_iter()
        .map_while(|row| row.iter().position(|e| !e.is_zero()))
        .collect()
}

/// Index in `from..rows` of the row with the smallest nonzero |entry| in `col`.
fn smallest_in_column(m: &IntMatrix, col: usize, from: usize) -> Option<usize> {
    (from..m.rows())
        .filter(|&i| !m.get(i, col).is_zero())
        .min_by(|&a, &b| m.get(a, col).abs().cmp(&m.get(b, col).abs()))
}

pub fn hnf(m: &IntMatrix) -> HnfResult {
    let rows = m.rows();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut pivot_row = 0;
    for col in 0..m.cols() {
        if pivot_row == rows {
            break;
        }
        let mut found = false;
        while let Some(p) = smallest_in_column(&h, col, pivot_row) {
            found = true;
            h.swap_rows(pivot_row, p);
            u.swap_rows(pivot_row, p);
            let pivot = h.get(pivot_row, col).clone();
            let mut clean = true;
            for i in pivot_row + 1..rows {
                if h.get(i, col).is_zero() {
                    continue;
                }
                let q = -h.get(i, col).div_floor(&pivot);
                h.add_row_multiple(i, pivot_row, &q);
                u.add_row_multiple(i, pivot_row, &q);
                clean &= h.get(i, col).is_zero();
            }
            if clean {
                break;
            }
        }
        if !found {
            continue;
        }
        if h.get(pivot_row, col).is_negative() {
            h.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        let pivot = h.get(pivot_row, col).clone();
        for i in 0..pivot_row {
            let q = -h.get(i, col).div_floor(&pivot);
            h.add_row_multiple(i, pivot_row, &q);
            u.add_row_multiple(i, pivot_row, &q);
        }
        pivot_row += 1;
    }
    HnfResult { h, u }
}

/// Whether `h` is already in canonical row Hermite form.
pub fn is_canonical_hnf(h: &IntMatrix) -> bool {
    let pivots = pivot_columns(h);
    let rank = pivots.len();
    if (rank..h.rows()).any(|i| !h.row_is_zero(i)) {
        return false;
    }
    for (i, &c) in pivots.iter().enumerate() {
        if i > 0 && c <= pivots[i - 1] {
            return false;
        }
        let p = h.get(i, c);
        if !p.is_positive() {
            return false;
        }
        for k in 0..h.rows() {
            let e = h.get(k, c);
            let ok = match k.cmp(&i) {
                std::cmp::Ordering::Less => !e.is_negative() && e < p,
                std::cmp::Ordering::Equal => true,
                std::cmp::Ordering::Greater => e.is_zero(),
            };
            if !ok {
                return false;
            }
        }
    }
    true
}

/// Row lattice rank.
pub fn rank(m: &IntMatrix) -> usize {
    hnf(m).rank()
}

pub fn snf(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut l = IntMatrix::identity(rows);
    let mut r = IntMatrix::identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let e = d.get(i, j);
                    if e.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| e.abs() < d.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return SnfResult { d, l, r };
            };
            d.swap_rows(t, pi);
            l.swap_rows(t, pi);
            d.swap_cols(t, pj);
            r.swap_cols(t, pj);

            let pivot = d.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = -d.get(i, t).div_floor(&pivot);
                d.add_row_multiple(i, t, &q);
                l.add_row_multiple(i, t, &q);
                clean &= d.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = -d.get(t, j).div_floor(&pivot);
                d.add_col_multiple(j, t, &q);
                r.add_col_multiple(j, t, &q);
                clean &= d.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !d.get(i, j).is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    l.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            l.negate_row(t);
        }
    }
    SnfResult { d, l, r }
}

/// Finds `x` with `x · m = v`, if `v` lies in the integer row span of `m`.
pub fn solve_in_row_lattice(m: &IntMatrix, v: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if v.len() != m.cols() {
        return Err(Error::Dimension {
            expected: m.cols(),
            found: v.len(),
        });
    }
    let res = hnf(m);
    let pivots = res.pivot_columns();
    let mut rest = v.to_vec();
    let mut y = vec![BigInt::zero(); m.rows()];
    for (i, &c) in pivots.iter().enumerate() {
        let (q, rem) = rest[c].div_rem(res.h.get(i, c));
        if !rem.is_zero() {
            return Ok(None);
        }
        for (j, e) in rest.iter_mut().enumerate().skip(c) {
            *e -= &q * res.h.get(i, j);
        }
        y[i] = q;
    }
    if rest.iter().any(|e| !e.is_zero()) {
        return Ok(None);
    }
    // y · h = v and h = u · m
    Ok(Some(res.u.apply_left(&y)?))
}

/// Basis (in canonical Hermite form) of `{x : x · m = 0}`.
pub fn left_kernel_basis(m: &IntMatrix) -> IntMatrix {
    let res = hnf(m);
    let rank = res.rank();
    let kernel = res.u.select_rows(rank..m.rows());
    hnf(&kernel).h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::vector;

    #[test]
    fn hnf_examples() {
        let m = IntMatrix::from_i64(&[&[1, 3, 0], &[3, 1, 0]]);
        let res = hnf(&m);
        assert_eq!(res.h, IntMatrix::from_i64(&[&[1, 3, 0], &[0, 8, 0]]));
        assert_eq!(&res.u * &m, res.h);
        assert_eq!(res.u.det().unwrap().abs(), BigInt::one());

        let id = IntMatrix::identity(3);
        let res = hnf(&id);
        assert_eq!(res.h, id);
        assert_eq!(res.u, id);

        let m = IntMatrix::from_i64(&[&[0, 8, 0]]);
        let res = hnf(&m);
        assert_eq!(res.h, m);
        assert_eq!(res.u, IntMatrix::identity(1));
    }

    #[test]
    fn hnf_zero_and_negative_pivots() {
        let z = IntMatrix::zeros(2, 3);
        let res = hnf(&z);
        assert!(res.h.is_zero());
        assert_eq!(res.rank(), 0);

        let m = IntMatrix::from_i64(&[&[0, 0], &[-4, 6], &[0, -3]]);
        let res = hnf(&m);
        assert!(is_canonical_hnf(&res.h));
        assert_eq!(res.h, IntMatrix::from_i64(&[&[4, 0], &[0, 3], &[0, 0]]));
    }

    #[test]
    fn snf_examples() {
        let m = IntMatrix::from_i64(&[&[1, 3, 0], &[3, 1, 0]]);
        assert_eq!(snf(&m).diagonal(), vector(&[1, 8]));
        let m = IntMatrix::from_i64(&[&[1, 0, -24], &[0, 1, 8], &[0, 0, 64]]);
        assert_eq!(snf(&m).diagonal(), vector(&[1, 1, 64]));
        assert_eq!(snf(&IntMatrix::zeros(2, 2)).diagonal(), vector(&[0, 0]));
        // needs the divisibility fix-up: diag(2, 3) ~ diag(1, 6)
        let m = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        let res = snf(&m);
        assert_eq!(res.diagonal(), vector(&[1, 6]));
        assert_eq!(&(&res.l * &m) * &res.r, res.d);
    }

    #[test]
    fn solve_examples() {
        let m = IntMatrix::from_i64(&[&[1, 3, 0], &[3, 1, 0]]);
        assert_eq!(
            solve_in_row_lattice(&m, &vector(&[0, 8, 0])).unwrap(),
            Some(vector(&[3, -1]))
        );
        assert_eq!(solve_in_row_lattice(&m, &vector(&[1, 0, 0])).unwrap(), None);
        assert_eq!(
            solve_in_row_lattice(&IntMatrix::identity(2), &vector(&[5, -2])).unwrap(),
            Some(vector(&[5, -2]))
        );
        assert!(solve_in_row_lattice(&m, &vector(&[1, 0])).is_err());
        // rank deficient: (2,2) needs the dependent rows to cancel
        let m = IntMatrix::from_i64(&[&[1, 1], &[2, 2]]);
        let x = solve_in_row_lattice(&m, &vector(&[3, 3])).unwrap().unwrap();
        assert_eq!(m.apply_left(&x).unwrap(), vector(&[3, 3]));
        assert_eq!(solve_in_row_lattice(&m, &vector(&[1, 2])).unwrap(), None);
    }

    #[test]
    fn kernel_examples() {
        let k = left_kernel_basis(&IntMatrix::from_i64(&[&[2], &[1]]));
        assert_eq!(k, IntMatrix::from_i64(&[&[1, -2]]));
        assert_eq!(left_kernel_basis(&IntMatrix::identity(3)).rows(), 0);
        // the basis (-2, 1) up to sign; canonical form has a positive pivot
        let k = left_kernel_basis(&IntMatrix::from_i64(&[&[1, 0], &[2, 0]]));
        assert_eq!(k, IntMatrix::from_i64(&[&[2, -1]]));
    }
}

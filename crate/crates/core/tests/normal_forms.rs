mod common;

use common::*;
use latdiag::normal_form::{hnf, is_canonical_hnf, left_kernel_basis, snf, solve_in_row_lattice};
use latdiag::IntMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

/// Row-style canonical form, checked from scratch.
fn canonical_by_inspection(h: &IntMatrix) -> bool {
    let mut last_pivot: Option<usize> = None;
    let mut seen_zero = false;
    for i in 0..h.rows() {
        let row = h.row(i);
        let Some(p) = row.iter().position(|e| !e.is_zero()) else {
            seen_zero = true;
            continue;
        };
        if seen_zero || last_pivot.is_some_and(|q| p <= q) || !row[p].is_positive() {
            return false;
        }
        for above in 0..i {
            let e = h.get(above, p);
            if e.is_negative() || e >= &row[p] {
                return false;
            }
        }
        last_pivot = Some(p);
    }
    true
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// `d_i = g_i / g_{i-1}`, `g_i` the gcd of all `i × i` minors.
fn diagonal_by_minors(m: &IntMatrix) -> Vec<BigInt> {
    let rows = rows_of(m);
    let k_max = m.rows().min(m.cols());
    let mut g_prev = BigInt::one();
    let mut out = Vec::new();
    for k in 1..=k_max {
        let mut g = BigInt::zero();
        for rs in subsets(m.rows(), k) {
            for cs in subsets(m.cols(), k) {
                let sub: Vec<Vec<BigInt>> =
                    rs.iter().map(|&r| cs.iter().map(|&c| rows[r][c].clone()).collect()).collect();
                g = g.gcd(&det_laplace(&sub));
            }
        }
        if g.is_zero() {
            out.extend(std::iter::repeat_n(BigInt::zero(), k_max - k + 1));
            break;
        }
        out.push(&g / &g_prev);
        g_prev = g;
    }
    out
}

fn nonzero_rows(h: &IntMatrix) -> IntMatrix {
    h.select_rows((0..h.rows()).filter(|&i| !h.row_is_zero(i)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn hermite_and_smith_forms(m in small_matrix(6, 6, 100)) {
        let res = hnf(&m);
        prop_assert_eq!(&(&res.u * &m), &res.h);
        prop_assert!(res.u.det().unwrap().abs().is_one());
        prop_assert!(canonical_by_inspection(&res.h));
        prop_assert!(is_canonical_hnf(&res.h));
        prop_assert_eq!(&hnf(&res.h).h, &res.h);

        let s = snf(&m);
        prop_assert_eq!(&(&(&s.l * &m) * &s.r), &s.d);
        prop_assert!(s.l.det().unwrap().abs().is_one());
        prop_assert!(s.r.det().unwrap().abs().is_one());
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    prop_assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        let diag = s.diagonal();
        for w in diag.windows(2) {
            prop_assert!(!w[0].is_negative());
            // d_i | d_{i+1}, with 0 only at the end
            if w[0].is_zero() {
                prop_assert!(w[1].is_zero());
            } else {
                prop_assert!(w[1].is_multiple_of(&w[0]));
            }
        }
    }

    #[test]
    fn smith_diagonal_matches_minor_gcds(m in small_matrix(4, 4, 12)) {
        prop_assert_eq!(snf(&m).diagonal(), diagonal_by_minors(&m));
    }

    #[test]
    fn solvability_matches_hermite_growth(
        m in small_matrix(4, 4, 9),
        picks in prop::collection::vec(-3i64..=3, 4),
        noise in prop::collection::vec(-2i64..=2, 4),
        perturb in any::<bool>(),
    ) {
        let coeffs: Vec<BigInt> = picks[..m.rows()].iter().map(|&c| BigInt::from(c)).collect();
        let mut v = m.apply_left(&coeffs).unwrap();
        if perturb {
            for (x, n) in v.iter_mut().zip(&noise) {
                *x += *n;
            }
        }
        let solved = solve_in_row_lattice(&m, &v).unwrap();
        let grown = nonzero_rows(&hnf(&m.stack(&IntMatrix::row_vector(&v)).unwrap()).h);
        let same = grown == nonzero_rows(&hnf(&m).h);
        prop_assert_eq!(solved.is_some(), same);
        if let Some(x) = solved {
            prop_assert_eq!(m.apply_left(&x).unwrap(), v);
        }
        if !perturb {
            prop_assert!(same);
        }
    }

    #[test]
    fn left_kernel_is_exact(m in small_matrix(5, 3, 6)) {
        let k = left_kernel_basis(&m);
        prop_assert!((&k * &m).is_zero());
        prop_assert_eq!(k.rows() + hnf(&m).rank(), m.rows());
        // saturated: the kernel basis extends to a unimodular matrix iff its
        // Smith diagonal is all ones
        prop_assert!(snf(&k).diagonal().iter().all(|d| d.is_one()));
    }
}

#[test]
fn spec_examples() {
    let m = IntMatrix::from_i64(&[&[1, 3, 0], &[3, 1, 0]]);
    assert_eq!(hnf(&m).h, IntMatrix::from_i64(&[&[1, 3, 0], &[0, 8, 0]]));
    assert_eq!(diagonal_by_minors(&m), vec![BigInt::from(1), BigInt::from(8)]);
    let a1 = IntMatrix::from_i64(&[&[1, 0, -24], &[0, 1, 8], &[0, 0, 64]]);
    assert_eq!(snf(&a1).diagonal(), diagonal_by_minors(&a1));
    assert_eq!(diagonal_by_minors(&a1)[2], BigInt::from(64));
    let x = solve_in_row_lattice(&m, &latdiag::matrix::vector(&[0, 8, 0])).unwrap();
    assert_eq!(x, Some(latdiag::matrix::vector(&[3, -1])));
    assert_eq!(solve_in_row_lattice(&m, &latdiag::matrix::vector(&[1, 0, 0])).unwrap(), None);
    // x(1,3,0) + y(3,1,0) = (1,0,0) forces y = -3x and -8x = 1
    assert!(!(-20i64..=20).any(|x| (-60i64..=60).any(|y| x + 3 * y == 1 && 3 * x + y == 0)));
}

//! The scan order shared by every search: integer vectors by ascending
//! max-norm, then lexicographically with each coordinate ordered
//! `0, 1, -1, 2, -2, ...`.

use std::cmp::Ordering;
use std::ops::ControlFlow;

/// Position of `x` in the sequence `0, 1, -1, 2, -2, ...`.
pub fn coordinate_rank(x: i64) -> u64 {
    let a = x.unsigned_abs();
    if x > 0 {
        2 * a - 1
    } else {
        2 * a
    }
}

pub fn max_norm(v: &[i64]) -> u64 {
    v.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
}

pub fn scan_cmp(a: &[i64], b: &[i64]) -> Ordering {
    max_norm(a).cmp(&max_norm(b)).then_with(|| {
        a.iter()
            .map(|&x| coordinate_rank(x))
            .cmp(b.iter().map(|&x| coordinate_rank(x)))
    })
}

/// Calls `visit` on every vector of length `dim` with max-norm exactly `norm`,
/// in scan order, until it breaks.
pub fn for_each_in_shell<B>(
    dim: usize,
    norm: u64,
    mut visit: impl FnMut(&[i64]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    if dim == 0 {
        return if norm == 0 {
            visit(&[])
        } else {
            ControlFlow::Continue(())
        };
    }
    let digits: Vec<i64> = (0..=2 * norm)
        .map(|r| {
            let r = r as i64;
            if r % 2 == 1 {
                (r + 1) / 2
            } else {
                -r / 2
            }
        })
        .collect();
    let top = norm as i64;
    let mut idx = vec![0usize; dim];
    let mut v = vec![0i64; dim];
    loop {
        if v.iter().any(|x| x.abs() == top) {
            visit(&v)?;
        }
        // odometer, last coordinate fastest
        let mut k = dim;
        loop {
            if k == 0 {
                return ControlFlow::Continue(());
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < digits.len() {
                v[k] = digits[idx[k]];
                break;
            }
            idx[k] = 0;
            v[k] = 0;
        }
    }
}

/// Every vector with max-norm at most `bound`, in scan order.
pub fn for_each_up_to<B>(
    dim: usize,
    bound: u64,
    mut visit: impl FnMut(&[i64]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    for norm in 0..=bound {
        for_each_in_shell(dim, norm, &mut visit)?;
    }
    ControlFlow::Continue(())
}

/// Number of vectors of length `dim` with max-norm exactly `norm`.
pub fn shell_size(dim: usize, norm: u64) -> u128 {
    let outer = (2 * norm as u128 + 1).pow(dim as u32);
    if norm == 0 {
        return outer;
    }
    outer - (2 * norm as u128 - 1).pow(dim as u32)
}

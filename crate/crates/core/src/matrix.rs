//! Dense matrices over the integers with arbitrary-precision entries.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Row-major integer matrix. Vectors act on the left: `v · M`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape {
                rows,
                cols,
                found: entries.len(),
            });
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of anything convertible to `BigInt`.
    /// All rows must share the length `cols`.
    pub fn from_rows<T, R>(cols: usize, rows: impl IntoIterator<Item = R>) -> Result<Self>
    where
        T: Into<BigInt>,
        R: IntoIterator<Item = T>,
    {
        let mut entries = Vec::new();
        let mut count = 0;
        for row in rows {
            let before = entries.len();
            entries.extend(row.into_iter().map(Into::into));
            let len = entries.len() - before;
            if len != cols {
                return Err(Error::Dimension {
                    expected: cols,
                    found: len,
                });
            }
            count += 1;
        }
        Ok(IntMatrix {
            rows: count,
            cols,
            entries,
        })
    }

    /// Shorthand for small literal matrices; panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(cols, rows.iter().map(|r| r.iter().copied()))
            .expect("ragged literal matrix")
    }

    pub fn row_vector(v: &[BigInt]) -> Self {
        IntMatrix {
            rows: 1,
            cols: v.len(),
            entries: v.to_vec(),
        }
    }

    pub fn column_vector(v: &[BigInt]) -> Self {
        IntMatrix {
            rows: v.len(),
            cols: 1,
            entries: v.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[BigInt]> + '_ {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn row_is_zero(&self, i: usize) -> bool {
        self.row(i).iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn checked_mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `v · self`
    pub fn apply_left(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.rows {
            return Err(Error::Dimension {
                expected: self.rows,
                found: v.len(),
            });
        }
        let mut out = vec![BigInt::zero(); self.cols];
        for (k, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += a * self.get(k, j);
            }
        }
        Ok(out)
    }

    /// Vertical concatenation.
    pub fn stack(&self, below: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != below.cols {
            return Err(Error::Dimension {
                expected: self.cols,
                found: below.cols,
            });
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&below.entries);
        Ok(IntMatrix {
            rows: self.rows + below.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn push_row(&mut self, row: &[BigInt]) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::Dimension {
                expected: self.cols,
                found: row.len(),
            });
        }
        self.entries.extend_from_slice(row);
        self.rows += 1;
        Ok(())
    }

    pub fn select_rows(&self, which: impl IntoIterator<Item = usize>) -> IntMatrix {
        let mut entries = Vec::new();
        let mut rows = 0;
        for i in which {
            entries.extend_from_slice(self.row(i));
            rows += 1;
        }
        IntMatrix {
            rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn select_cols(&self, range: std::ops::Range<usize>) -> IntMatrix {
        let cols = range.len();
        let mut entries = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            entries.extend_from_slice(&self.row(i)[range.clone()]);
        }
        IntMatrix {
            rows: self.rows,
            cols,
            entries,
        }
    }

    pub fn scaled(&self, k: &BigInt) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * k).collect(),
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let e = &mut self.entries[i * self.cols + j];
            *e = -std::mem::take(e);
        }
    }

    /// row[dst] += k * row[src]
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = &self.entries[src * self.cols + j];
            if !s.is_zero() {
                let add = k * s;
                self.entries[dst * self.cols + j] += add;
            }
        }
    }

    /// col[dst] += k * col[src]
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = &self.entries[i * self.cols + src];
            if !s.is_zero() {
                let add = k * s;
                self.entries[i * self.cols + dst] += add;
            }
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::Dimension {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        Ok(sign * a.get(n - 1, n - 1))
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.entries
            .iter()
            .map(|e| e.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Parses the text format: a `rows cols` header, then one line of
    /// space-separated integers per row. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<IntMatrix> {
        let mut lines = content_lines(text);
        let (line_no, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            message: "missing `rows cols` header".into(),
        })?;
        let dims = parse_ints(line_no, header)?;
        if dims.len() != 2 {
            return Err(Error::Parse {
                line: line_no,
                message: "header must be `rows cols`".into(),
            });
        }
        let to_count = |b: &BigInt| {
            usize::try_from(b).map_err(|_| Error::Parse {
                line: line_no,
                message: format!("bad dimension {b}"),
            })
        };
        let rows = to_count(&dims[0])?;
        let cols = to_count(&dims[1])?;
        let mut entries = Vec::with_capacity(rows * cols);
        for _ in 0..rows {
            let (line_no, line) = lines.next().ok_or(Error::Parse {
                line: line_no,
                message: format!("expected {rows} rows"),
            })?;
            let row = parse_ints(line_no, line)?;
            if row.len() != cols {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected {cols} entries, found {}", row.len()),
                });
            }
            entries.extend(row);
        }
        if let Some((line_no, _)) = lines.next() {
            return Err(Error::Parse {
                line: line_no,
                message: "trailing content after matrix".into(),
            });
        }
        IntMatrix::new(rows, cols, entries)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for row in self.row_iter() {
            s.push_str(&join_ints(row));
            s.push('\n');
        }
        s
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_mul(rhs).expect("matrix dimensions do not agree")
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}[", self.rows, self.cols)?;
        for (i, row) in self.row_iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{}", join_ints(row))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.row_iter() {
            writeln!(f, "[{}]", join_ints(row))?;
        }
        Ok(())
    }
}

pub fn join_ints(v: &[BigInt]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

/// Formats a vector as `(a,b,c)`.
pub fn fmt_vector(v: &[BigInt]) -> String {
    format!(
        "({})",
        v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
    )
}

pub fn vector(v: &[i64]) -> Vec<BigInt> {
    v.iter().copied().map(BigInt::from).collect()
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

pub(crate) fn parse_ints(line_no: usize, line: &str) -> Result<Vec<BigInt>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<BigInt>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("not an integer: {tok:?}"),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let m = IntMatrix::from_i64(&[&[2, -3, 1], &[2, 0, -1], &[1, 4, 5]]);
        // 2(0+4) + 3(10+1) + 1(8-0)
        assert_eq!(m.det().unwrap(), BigInt::from(49));
        let singular = IntMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert!(singular.det().unwrap().is_zero());
        let needs_swap = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(needs_swap.det().unwrap(), BigInt::from(-1));
        assert_eq!(IntMatrix::zeros(0, 0).det().unwrap(), BigInt::one());
    }

    #[test]
    fn text_format() {
        let m = IntMatrix::parse("2 3\n1 3 0\n3 1 0\n").unwrap();
        assert_eq!(m, IntMatrix::from_i64(&[&[1, 3, 0], &[3, 1, 0]]));
        assert_eq!(IntMatrix::parse(&m.to_text()).unwrap(), m);
        assert!(IntMatrix::parse("2 2\n1 2\n").is_err());
        assert!(IntMatrix::parse("1 2\n1 2 3\n").is_err());
        assert!(IntMatrix::parse("1 1\nx\n").is_err());
    }

    #[test]
    fn products_and_vectors() {
        let a = IntMatrix::from_i64(&[&[1, 2], &[3, 4]]);
        let b = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(&a * &b, IntMatrix::from_i64(&[&[2, 1], &[4, 3]]));
        assert_eq!(a.apply_left(&vector(&[1, 1])).unwrap(), vector(&[4, 6]));
        assert!(a.checked_mul(&IntMatrix::zeros(3, 1)).is_err());
        assert_eq!(a.transpose().row(0), &vector(&[1, 3])[..]);
    }
}

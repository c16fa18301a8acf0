//! Subgroups of `Z^n` held in canonical Hermite form, and the group-level
//! operations on them: membership, containment, kernels of functionals and the
//! invariants of quotients.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{self, IntMatrix};
use crate::normal_form::{hnf, left_kernel_basis, snf, solve_in_row_lattice};

/// A subgroup of `Z^n`. The basis is the nonzero part of the canonical Hermite
/// form, so two lattices are equal exactly when they are the same subgroup.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    ambient_dim: usize,
    basis: IntMatrix,
}

impl Lattice {
    pub fn from_generators(ambient_dim: usize, gens: &IntMatrix) -> Result<Self> {
        if gens.cols() != ambient_dim {
            return Err(Error::Dimension {
                expected: ambient_dim,
                found: gens.cols(),
            });
        }
        let res = hnf(gens);
        let basis = res.h.select_rows(0..res.rank());
        Ok(Lattice { ambient_dim, basis })
    }

    pub fn from_vectors(ambient_dim: usize, gens: &[Vec<BigInt>]) -> Result<Self> {
        let m = IntMatrix::from_rows(ambient_dim, gens.iter().cloned())?;
        Self::from_generators(ambient_dim, &m)
    }

    /// `Z^n`
    pub fn full(n: usize) -> Self {
        Lattice {
            ambient_dim: n,
            basis: IntMatrix::identity(n),
        }
    }

    pub fn zero(n: usize) -> Self {
        Lattice {
            ambient_dim: n,
            basis: IntMatrix::zeros(0, n),
        }
    }

    /// `gZ` inside `Z^1`.
    pub fn cyclic_in_z(g: &BigInt) -> Self {
        Self::from_vectors(1, &[vec![g.clone()]]).expect("dimension 1")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.ambient_dim {
            return Err(Error::Dimension {
                expected: self.ambient_dim,
                found: len,
            });
        }
        Ok(())
    }

    /// Coordinates of `v` in the basis, when `v` is a member.
    pub fn coords(&self, v: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        self.check_dim(v.len())?;
        solve_in_row_lattice(&self.basis, v)
    }

    pub fn member(&self, v: &[BigInt]) -> Result<bool> {
        Ok(self.coords(v)?.is_some())
    }

    /// First basis vector of `other` that does not lie in `self`.
    pub fn first_missing(&self, other: &Lattice) -> Result<Option<Vec<BigInt>>> {
        self.check_dim(other.ambient_dim)?;
        for row in other.basis.row_iter() {
            if !self.member(row)? {
                return Ok(Some(row.to_vec()));
            }
        }
        Ok(None)
    }

    /// `other ⊆ self`
    pub fn contains(&self, other: &Lattice) -> Result<bool> {
        Ok(self.first_missing(other)?.is_none())
    }

    pub fn require_contains(&self, other: &Lattice) -> Result<()> {
        match self.first_missing(other)? {
            Some(generator) => Err(Error::NotContained { generator }),
            None => Ok(()),
        }
    }

    /// Matrix whose rows are the coordinates of `inner`'s basis in this basis.
    pub fn coordinate_matrix(&self, inner: &Lattice) -> Result<IntMatrix> {
        self.check_dim(inner.ambient_dim)?;
        let mut out = IntMatrix::zeros(0, self.rank());
        for row in inner.basis.row_iter() {
            let c = self.coords(row)?.ok_or_else(|| Error::NotContained {
                generator: row.to_vec(),
            })?;
            out.push_row(&c)?;
        }
        Ok(out)
    }

    pub fn sum(&self, other: &Lattice) -> Result<Lattice> {
        self.check_dim(other.ambient_dim)?;
        Lattice::from_generators(self.ambient_dim, &self.basis.stack(&other.basis)?)
    }

    pub fn add_vector(&self, v: &[BigInt]) -> Result<Lattice> {
        self.check_dim(v.len())?;
        let mut gens = self.basis.clone();
        gens.push_row(v)?;
        Lattice::from_generators(self.ambient_dim, &gens)
    }

    /// `self ∩ other`, from the left kernel of the stacked bases.
    pub fn intersect(&self, other: &Lattice) -> Result<Lattice> {
        self.check_dim(other.ambient_dim)?;
        let stacked = self.basis.stack(&other.basis)?;
        let kernel = left_kernel_basis(&stacked);
        let left = kernel.select_cols(0..self.rank());
        Lattice::from_generators(self.ambient_dim, &(&left * &self.basis))
    }

    /// Image under `x ↦ x · m`.
    pub fn image(&self, m: &IntMatrix) -> Result<Lattice> {
        self.check_dim(m.rows())?;
        Lattice::from_generators(m.cols(), &(&self.basis * m))
    }

    /// `{ k·x : x ∈ self }`
    pub fn scaled(&self, k: &BigInt) -> Lattice {
        Lattice::from_generators(self.ambient_dim, &self.basis.scaled(k)).expect("same dimension")
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice(Z^{}; {:?})", self.ambient_dim, self.basis)
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "<0>");
        }
        let gens: Vec<_> = self.basis.row_iter().map(matrix::fmt_vector).collect();
        write!(f, "<{}>", gens.join(", "))
    }
}

/// Free rank plus torsion coefficients `t1 | t2 | ...`, every `ti > 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl GroupInvariants {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Largest torsion coefficient, 1 when there is none.
    pub fn exponent(&self) -> BigInt {
        self.torsion.last().cloned().unwrap_or_else(BigInt::one)
    }
}

impl fmt::Display for GroupInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.free_rank)
            });
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

/// A homomorphism `Z^n → Z`, `x ↦ coeffs · x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AmbientFunctional {
    pub coeffs: Vec<BigInt>,
}

impl AmbientFunctional {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        AmbientFunctional { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(matrix::vector(coeffs))
    }

    /// The `i`-th coordinate projection on `Z^n`.
    pub fn coordinate(n: usize, i: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); n];
        coeffs[i] = BigInt::one();
        Self::new(coeffs)
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn eval(&self, v: &[BigInt]) -> Result<BigInt> {
        if v.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: v.len(),
            });
        }
        Ok(matrix::dot(&self.coeffs, v))
    }

    /// The functional as an `n × 1` matrix.
    pub fn as_column(&self) -> IntMatrix {
        IntMatrix::column_vector(&self.coeffs)
    }

    /// Nonnegative generator of the image `f(l) ⊆ Z`.
    pub fn image_generator(&self, l: &Lattice) -> Result<BigInt> {
        let mut g = BigInt::zero();
        for row in l.basis().row_iter() {
            g = g.gcd(&self.eval(row)?);
        }
        Ok(g)
    }

    pub fn image(&self, l: &Lattice) -> Result<Lattice> {
        Ok(Lattice::cyclic_in_z(&self.image_generator(l)?))
    }

    pub fn is_surjective_on(&self, l: &Lattice) -> Result<bool> {
        Ok(self.image_generator(l)?.is_one())
    }

    pub fn require_surjective_on(&self, l: &Lattice) -> Result<()> {
        let image = self.image_generator(l)?;
        if image.is_one() {
            Ok(())
        } else {
            Err(Error::NotSurjective { image })
        }
    }
}

/// Parses the lattice text format: an `ambient n` line followed by generator rows.
pub fn parse_lattice(text: &str) -> Result<Lattice> {
    let mut lines = matrix::content_lines(text);
    let (line_no, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        message: "missing `ambient n` line".into(),
    })?;
    let n = parse_ambient(line_no, header)?;
    let mut gens = IntMatrix::zeros(0, n);
    for (line_no, line) in lines {
        let row = matrix::parse_ints(line_no, line)?;
        gens.push_row(&row).map_err(|_| Error::Parse {
            line: line_no,
            message: format!("expected {n} entries, found {}", row.len()),
        })?;
    }
    Lattice::from_generators(n, &gens)
}

pub fn lattice_to_text(l: &Lattice) -> String {
    let mut s = format!("ambient {}\n", l.ambient_dim());
    for row in l.basis().row_iter() {
        s.push_str(&matrix::join_ints(row));
        s.push('\n');
    }
    s
}

/// Parses a functional: one row of integers.
pub fn parse_functional(text: &str) -> Result<AmbientFunctional> {
    let mut lines = matrix::content_lines(text);
    let (line_no, line) = lines.next().ok_or(Error::Parse {
        line: 0,
        message: "empty functional".into(),
    })?;
    if let Some((extra, _)) = lines.next() {
        return Err(Error::Parse {
            line: extra,
            message: "a functional is a single row".into(),
        });
    }
    Ok(AmbientFunctional::new(matrix::parse_ints(line_no, line)?))
}

pub(crate) fn parse_ambient(line_no: usize, line: &str) -> Result<usize> {
    let mut toks = line.split_whitespace();
    match (toks.next(), toks.next(), toks.next()) {
        (Some("ambient"), Some(n), None) => n.parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("bad ambient dimension {n:?}"),
        }),
        _ => Err(Error::Parse {
            line: line_no,
            message: "expected `ambient n`".into(),
        }),
    }
}

/// Invariants of `big / small`.
pub fn quotient_invariants(big: &Lattice, small: &Lattice) -> Result<GroupInvariants> {
    let coords = big.coordinate_matrix(small)?;
    let factors = snf(&coords).invariant_factors();
    Ok(GroupInvariants {
        free_rank: big.rank() - small.rank(),
        torsion: factors.into_iter().filter(|d| !d.is_one()).collect(),
    })
}

/// Complete isomorphism test for two-node inclusion diagrams `a0 ⊆ a1`, `b0 ⊆ b1`.
pub fn pair_iso_decide(a0: &Lattice, a1: &Lattice, b0: &Lattice, b1: &Lattice) -> Result<bool> {
    let qa = quotient_invariants(a1, a0)?;
    let qb = quotient_invariants(b1, b0)?;
    Ok(a1.rank() == b1.rank() && qa == qb)
}

/// `{x ∈ l : f(x) = 0}`
pub fn kernel_of_functional(l: &Lattice, f: &AmbientFunctional) -> Result<Lattice> {
    if f.dim() != l.ambient_dim() {
        return Err(Error::Dimension {
            expected: l.ambient_dim(),
            found: f.dim(),
        });
    }
    let values = l.basis().checked_mul(&f.as_column())?;
    let kernel = left_kernel_basis(&values);
    Lattice::from_generators(l.ambient_dim(), &(&kernel * l.basis()))
}

//! Isomorphism decisions for inclusion diagrams, with certificates.
//!
//! An isomorphism `B → C` of diagrams over the same poset is one unimodular
//! map per node, compatible with the inclusions. Writing the node-`i` map in
//! the canonical bases `S_i` of `B_i` and `G_i` of `C_i` as a square matrix
//! `X_i` (column `j` holds the coordinates of the image of the `j`-th basis
//! vector of `B_i`), compatibility with an inclusion `B_i ⊆ B_j` is the linear
//! condition `P · X_jᵀ · G_j = X_iᵀ · G_i`, where `P` expresses `S_i` in `S_j`.
//! The integer solutions form the constraint lattice; every `X_i` is then
//! determined by the maps at the maximal nodes, so those are the unknowns.
//!
//! A lattice point with every `det X_i = ±1` is an isomorphism. A modulus `m`
//! for which no residue point has every determinant `≡ ±1 (mod m)` proves that
//! none exists.

use std::fmt;
use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::diagram::{InclusionDiagram, Poset};
use crate::error::{Error, Result};
use crate::lattice::{quotient_invariants, GroupInvariants, Lattice};
use crate::matrix::IntMatrix;
use crate::normal_form::{hnf, left_kernel_basis, snf};
use crate::order;

/// First disagreement found by [`invariant_screen`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InvariantMismatch {
    Rank {
        node: usize,
        left: usize,
        right: usize,
    },
    Quotient {
        lower: usize,
        upper: usize,
        left: GroupInvariants,
        right: GroupInvariants,
    },
}

impl fmt::Display for InvariantMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvariantMismatch::Rank { node, left, right } => {
                write!(f, "rank@{node}:{left}!={right}")
            }
            InvariantMismatch::Quotient {
                lower,
                upper,
                left,
                right,
            } => write!(f, "quotient@({lower},{upper}):{left}!={right}"),
        }
    }
}

fn require_same_poset(b: &InclusionDiagram, c: &InclusionDiagram) -> Result<()> {
    if b.poset() != c.poset() {
        return Err(Error::PosetMismatch);
    }
    Ok(())
}

/// Strict pairs with the upper node descending, then the lower node ascending,
/// so the widest quotients are compared first.
fn screen_pairs(poset: &Poset) -> Vec<(usize, usize)> {
    let mut pairs = poset.strict_pairs();
    pairs.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    pairs
}

/// Compares node ranks and the quotient invariants of every pair `i < j`.
pub fn invariant_screen(b: &InclusionDiagram, c: &InclusionDiagram) -> Result<Option<InvariantMismatch>> {
    require_same_poset(b, c)?;
    for node in 0..b.len() {
        let (left, right) = (b.node(node).rank(), c.node(node).rank());
        if left != right {
            return Ok(Some(InvariantMismatch::Rank { node, left, right }));
        }
    }
    for (lower, upper) in screen_pairs(b.poset()) {
        let left = quotient_invariants(b.node(upper), b.node(lower))?;
        let right = quotient_invariants(c.node(upper), c.node(lower))?;
        if left != right {
            return Ok(Some(InvariantMismatch::Quotient {
                lower,
                upper,
                left,
                right,
            }));
        }
    }
    Ok(None)
}

/// Least common multiple of every torsion coefficient across the pair quotients of `d`.
pub fn torsion_lcm(d: &InclusionDiagram) -> Result<BigInt> {
    let mut l = BigInt::one();
    for (lower, upper) in d.poset().strict_pairs() {
        for t in quotient_invariants(d.node(upper), d.node(lower))?.torsion {
            l = l.lcm(&t);
        }
    }
    Ok(l)
}

/// Integer solutions of the compatibility conditions for a would-be
/// isomorphism `B → C`.
///
/// The unknowns are the matrices `X_t` at the maximal nodes, flattened
/// row-major and concatenated in ascending node order; that flattening is the
/// coordinate system of [`ConstraintLattice::basis`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintLattice {
    ranks: Vec<usize>,
    unknown_nodes: Vec<usize>,
    offsets: Vec<usize>,
    basis: IntMatrix,
    full_basis: IntMatrix,
}

impl ConstraintLattice {
    /// Canonical basis in the unknown coordinates.
    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// Same points, with every node's matrix included (all nodes, ascending,
    /// each flattened row-major).
    pub fn full_basis(&self) -> &IntMatrix {
        &self.full_basis
    }

    /// `(node, r)` for each unknown `r × r` matrix.
    pub fn shape(&self) -> Vec<(usize, usize)> {
        self.unknown_nodes
            .iter()
            .map(|&t| (t, self.ranks[t]))
            .collect()
    }

    pub fn node_ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Number of basis vectors.
    pub fn dim(&self) -> usize {
        self.full_basis.rows()
    }

    fn width(&self) -> usize {
        self.full_basis.cols()
    }

    /// Node matrices of the point with the given coefficients on the basis.
    pub fn node_maps(&self, coeffs: &[BigInt]) -> Result<Vec<IntMatrix>> {
        let z = self.full_basis.apply_left(coeffs)?;
        Ok(self.split_point(&z))
    }

    fn split_point(&self, z: &[BigInt]) -> Vec<IntMatrix> {
        self.ranks
            .iter()
            .zip(&self.offsets)
            .map(|(&r, &off)| IntMatrix::new(r, r, z[off..off + r * r].to_vec()).expect("r*r"))
            .collect()
    }

    /// Node order used when testing determinants: unknown nodes first.
    fn check_order(&self) -> Vec<usize> {
        let mut order = self.unknown_nodes.clone();
        order.extend((0..self.ranks.len()).filter(|i| !self.unknown_nodes.contains(i)));
        order
    }
}

/// Builds the constraint lattice. Requires a passing [`invariant_screen`].
pub fn constraint_lattice(b: &InclusionDiagram, c: &InclusionDiagram) -> Result<ConstraintLattice> {
    if let Some(mismatch) = invariant_screen(b, c)? {
        return Err(Error::Screen(mismatch.to_string()));
    }
    let poset = b.poset();
    let n_out = c.ambient_dim();
    let ranks: Vec<usize> = b.nodes().iter().map(Lattice::rank).collect();
    let mut offsets = Vec::with_capacity(ranks.len());
    let mut width = 0;
    for &r in &ranks {
        offsets.push(width);
        width += r * r;
    }
    let unknown_nodes = poset.maximal();

    // one column per scalar equation
    let mut columns: Vec<Vec<BigInt>> = Vec::new();
    for (i, j) in poset.strict_pairs() {
        let p = b.node(j).coordinate_matrix(b.node(i))?;
        let (gi, gj) = (c.node(i).basis(), c.node(j).basis());
        let (ri, rj) = (ranks[i], ranks[j]);
        for a in 0..ri {
            for col in 0..n_out {
                let mut eq = vec![BigInt::zero(); width];
                // (P X_jᵀ G_j)[a][col] = Σ_k Σ_l P[a][k] X_j[l][k] G_j[l][col]
                for k in 0..rj {
                    let pk = p.get(a, k);
                    if pk.is_zero() {
                        continue;
                    }
                    for l in 0..rj {
                        eq[offsets[j] + l * rj + k] += pk * gj.get(l, col);
                    }
                }
                // (X_iᵀ G_i)[a][col] = Σ_l X_i[l][a] G_i[l][col]
                for l in 0..ri {
                    eq[offsets[i] + l * ri + a] -= gi.get(l, col);
                }
                if eq.iter().any(|e| !e.is_zero()) {
                    columns.push(eq);
                }
            }
        }
    }
    let mut system = IntMatrix::zeros(width, columns.len());
    for (e, column) in columns.into_iter().enumerate() {
        for (v, coeff) in column.into_iter().enumerate() {
            system.set(v, e, coeff);
        }
    }
    let kernel = left_kernel_basis(&system);

    let unknown_cols: Vec<usize> = unknown_nodes
        .iter()
        .flat_map(|&t| offsets[t]..offsets[t] + ranks[t] * ranks[t])
        .collect();
    let projected = IntMatrix::from_rows(
        unknown_cols.len(),
        kernel
            .row_iter()
            .map(|row| unknown_cols.iter().map(|&k| row[k].clone()).collect::<Vec<_>>()),
    )?;
    let res = hnf(&projected);
    let rank = res.rank();
    debug_assert_eq!(rank, kernel.rows(), "unknowns determine every node map");
    let full_basis = (&res.u * &kernel).select_rows(0..rank);
    let basis = res.h.select_rows(0..rank);
    Ok(ConstraintLattice {
        ranks,
        unknown_nodes,
        offsets,
        basis,
        full_basis,
    })
}

/// One unimodular matrix per node, in the canonical bases of source and
/// target nodes (column convention as in [`ConstraintLattice`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoWitness {
    pub node_maps: Vec<IntMatrix>,
}

impl IsoWitness {
    /// Reads node maps off an ambient matrix `M` (`x ↦ x · M`). `None` when
    /// some basis vector of `B_i` is not sent into `C_i`.
    pub fn from_ambient(b: &InclusionDiagram, c: &InclusionDiagram, m: &IntMatrix) -> Result<Option<Self>> {
        require_same_poset(b, c)?;
        let mut node_maps = Vec::with_capacity(b.len());
        for i in 0..b.len() {
            let images = b.node(i).basis().checked_mul(m)?;
            let mut coords = IntMatrix::zeros(0, c.node(i).rank());
            for img in images.row_iter() {
                match c.node(i).coords(img)? {
                    Some(x) => coords.push_row(&x)?,
                    None => return Ok(None),
                }
            }
            if !coords.is_square() {
                return Ok(None);
            }
            node_maps.push(coords.transpose());
        }
        Ok(Some(IsoWitness { node_maps }))
    }

    /// Images of the node-`i` source basis, as ambient vectors of the target.
    pub fn images(&self, c: &InclusionDiagram, i: usize) -> Result<IntMatrix> {
        self.node_maps[i].transpose().checked_mul(c.node(i).basis())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessCheck {
    pub ok: bool,
    pub detail: Option<String>,
}

impl WitnessCheck {
    fn fail(detail: String) -> Self {
        WitnessCheck {
            ok: false,
            detail: Some(detail),
        }
    }
}

/// Re-verifies a witness directly against the two diagrams: determinants
/// `±1`, images generating exactly `C_i`, and every inclusion square commuting
/// on ambient vectors.
pub fn verify_witness(b: &InclusionDiagram, c: &InclusionDiagram, w: &IsoWitness) -> Result<WitnessCheck> {
    require_same_poset(b, c)?;
    if w.node_maps.len() != b.len() {
        return Ok(WitnessCheck::fail(format!(
            "{} node maps for {} nodes",
            w.node_maps.len(),
            b.len()
        )));
    }
    let mut images = Vec::with_capacity(b.len());
    for i in 0..b.len() {
        let x = &w.node_maps[i];
        let (rs, rt) = (b.node(i).rank(), c.node(i).rank());
        if x.rows() != rt || x.cols() != rs || rs != rt {
            return Ok(WitnessCheck::fail(format!("node {i} map has the wrong shape")));
        }
        let det = x.det()?;
        if !det.abs().is_one() {
            return Ok(WitnessCheck::fail(format!("node {i} determinant is {det}")));
        }
        let img = w.images(c, i)?;
        let spanned = Lattice::from_generators(c.ambient_dim(), &img)?;
        if &spanned != c.node(i) {
            return Ok(WitnessCheck::fail(format!(
                "node {i} image {spanned} differs from {}",
                c.node(i)
            )));
        }
        images.push(img);
    }
    for (i, j) in b.poset().strict_pairs() {
        let p = b.node(j).coordinate_matrix(b.node(i))?;
        if p.checked_mul(&images[j])? != images[i] {
            return Ok(WitnessCheck::fail(format!(
                "maps at nodes {i} and {j} disagree on node {i}"
            )));
        }
    }
    Ok(WitnessCheck {
        ok: true,
        detail: None,
    })
}

/// `Σ c_k · row_k` kept up to date as the coefficients move, so that
/// consecutive scan-order points cost one row update each.
///
/// Only built when basis entries fit in `i64` and coefficients stay below
/// `2^20`; with at most `2^10` rows every entry then stays below `2^93`.
struct RunningPoint {
    rows: Vec<Vec<i128>>,
    coeffs: Vec<i64>,
    z: Vec<i128>,
}

const FAST_COEFF_LIMIT: u64 = 1 << 20;

impl RunningPoint {
    fn new(m: &IntMatrix, norm: u64) -> Option<Self> {
        if norm >= FAST_COEFF_LIMIT || m.rows() > 1 << 10 {
            return None;
        }
        let rows = m
            .row_iter()
            .map(|r| r.iter().map(|e| e.to_i64().map(i128::from)).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        Some(RunningPoint {
            coeffs: vec![0; rows.len()],
            z: vec![0; m.cols()],
            rows,
        })
    }

    fn move_to(&mut self, coeffs: &[i64]) -> &[i128] {
        for (k, (&new, old)) in coeffs.iter().zip(self.coeffs.iter_mut()).enumerate() {
            if new != *old {
                let delta = i128::from(new - *old);
                for (zi, r) in self.z.iter_mut().zip(&self.rows[k]) {
                    *zi += delta * r;
                }
                *old = new;
            }
        }
        &self.z
    }
}

/// Fraction-free determinant; `None` only on overflow.
fn det_small(a: &mut [i128], n: usize) -> Option<i128> {
    if n == 0 {
        return Some(1);
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k * n + k] == 0 {
            let Some(swap) = (k + 1..n).find(|&i| a[i * n + k] != 0) else {
                return Some(0);
            };
            for j in 0..n {
                a.swap(k * n + j, swap * n + j);
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i * n + j]
                    .checked_mul(a[k * n + k])?
                    .checked_sub(a[i * n + k].checked_mul(a[k * n + j])?)?;
                a[i * n + j] = v / prev;
            }
        }
        prev = a[k * n + k];
    }
    Some(sign * a[n * n - 1])
}

/// Determinant of the `r × r` block at `off`, falling back to big integers.
fn block_det(z: &[i128], off: usize, r: usize) -> BigInt {
    let mut block = [0i128; 64];
    if r * r <= block.len() {
        block[..r * r].copy_from_slice(&z[off..off + r * r]);
        if let Some(d) = det_small(&mut block[..r * r], r) {
            return BigInt::from(d);
        }
    }
    let big = IntMatrix::new(r, r, z[off..off + r * r].iter().map(|&e| BigInt::from(e)).collect()).expect("r*r");
    big.det().expect("square")
}

/// `|det| = 1` for the block, without allocating in the common case.
fn block_is_unit(z: &[i128], off: usize, r: usize) -> bool {
    let mut block = [0i128; 64];
    if r * r <= block.len() {
        block[..r * r].copy_from_slice(&z[off..off + r * r]);
        if let Some(d) = det_small(&mut block[..r * r], r) {
            return d == 1 || d == -1;
        }
    }
    block_det(z, off, r).abs().is_one()
}

fn unimodular_point(cl: &ConstraintLattice, order: &[usize], z: &[BigInt]) -> bool {
    order.iter().all(|&i| {
        let r = cl.ranks[i];
        let off = cl.offsets[i];
        let m = IntMatrix::new(r, r, z[off..off + r * r].to_vec()).expect("r*r");
        m.det().map(|d| d.abs().is_one()).unwrap_or(false)
    })
}

/// Searches one max-norm shell of coefficient vectors for a unimodular point.
pub fn witness_search_shell(cl: &ConstraintLattice, norm: u64) -> Option<IsoWitness> {
    let order = cl.check_order();
    let mut fast = RunningPoint::new(&cl.full_basis, norm);
    let found = order::for_each_in_shell(cl.dim(), norm, |coeffs| {
        let hit = match fast.as_mut() {
            Some(p) => {
                let z = p.move_to(coeffs);
                order.iter().all(|&i| block_is_unit(z, cl.offsets[i], cl.ranks[i]))
            }
            None => {
                let big: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
                let z = cl.full_basis.apply_left(&big).expect("dimension");
                unimodular_point(cl, &order, &z)
            }
        };
        if hit {
            let big: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
            let node_maps = cl.node_maps(&big).expect("dimension");
            ControlFlow::Break(IsoWitness { node_maps })
        } else {
            ControlFlow::Continue(())
        }
    });
    match found {
        ControlFlow::Break(w) => Some(w),
        ControlFlow::Continue(()) => None,
    }
}

/// First point (ascending max-norm, then scan order) with every node
/// determinant `±1`, over coefficients in `[-coeff_bound, coeff_bound]`.
pub fn witness_search(cl: &ConstraintLattice, coeff_bound: u64) -> Option<IsoWitness> {
    (0..=coeff_bound).find_map(|norm| witness_search_shell(cl, norm))
}

/// No residue point of the constraint lattice modulo `modulus` has every
/// node determinant `≡ ±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ObstructionCert {
    pub modulus: u64,
    pub checked_count: u128,
}

/// Residue points enumerated by default before a modulus is skipped.
pub const DEFAULT_RESIDUE_BUDGET: u128 = 1 << 22;

fn unit_mod(d: &BigInt, m: u64) -> bool {
    let r = d.mod_floor(&BigInt::from(m));
    r.is_one() || r == BigInt::from(m - 1)
}

fn residue_rows(m: &IntMatrix, modulus: u64) -> Vec<Vec<u64>> {
    let md = BigInt::from(modulus);
    m.row_iter()
        .map(|r| {
            r.iter()
                .map(|e| e.mod_floor(&md).to_u64().expect("residue fits"))
                .collect()
        })
        .collect()
}

/// Walks every combination `Σ c_k row_k (mod m)` with `c_k ∈ [0, limit_k)`,
/// stopping when `visit` breaks. Each odometer step adds one row.
fn for_each_residue(
    rows: &[Vec<u64>],
    limits: &[u64],
    modulus: u64,
    width: usize,
    mut visit: impl FnMut(&[u64]) -> bool,
) -> bool {
    let mut z = vec![0u64; width];
    let mut digits = vec![0u64; rows.len()];
    loop {
        if visit(&z) {
            return true;
        }
        let mut k = rows.len();
        loop {
            if k == 0 {
                return false;
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < limits[k] {
                for (zi, r) in z.iter_mut().zip(&rows[k]) {
                    *zi = (*zi + r) % modulus;
                }
                break;
            }
            // wrap: subtract (limit - 1) copies, i.e. add one copy when limit = m
            let back = (limits[k] - 1) % modulus;
            for (zi, r) in z.iter_mut().zip(&rows[k]) {
                let sub = (r * back) % modulus;
                *zi = (*zi + modulus - sub) % modulus;
            }
            digits[k] = 0;
        }
    }
}

fn residue_point_is_unit(ranks: &[usize], offsets: &[usize], order: &[usize], z: &[u64], m: u64) -> bool {
    order.iter().all(|&i| {
        let (r, off) = (ranks[i], offsets[i]);
        let mut block = [0i128; 64];
        if r * r <= block.len() {
            for (b, &e) in block.iter_mut().zip(&z[off..off + r * r]) {
                *b = i128::from(e);
            }
            if let Some(d) = det_small(&mut block[..r * r], r) {
                let d = d.rem_euclid(i128::from(m));
                return d == 1 || d == i128::from(m) - 1;
            }
        }
        let big: Vec<i128> = z[off..off + r * r].iter().map(|&e| i128::from(e)).collect();
        unit_mod(&block_det(&big, 0, r), m)
    })
}

/// Tests a single modulus.
pub fn obstruction_at(cl: &ConstraintLattice, modulus: u64, budget: u128) -> Result<Option<ObstructionCert>> {
    if modulus < 2 {
        return Err(Error::Invalid(format!("modulus {modulus} is below 2")));
    }
    let count = (modulus as u128)
        .checked_pow(cl.dim() as u32)
        .unwrap_or(u128::MAX);
    if count > budget {
        return Err(Error::BudgetExceeded {
            modulus,
            required: count,
            budget,
        });
    }
    let rows = residue_rows(&cl.full_basis, modulus);
    let limits = vec![modulus; rows.len()];
    let order = cl.check_order();
    let hit = for_each_residue(&rows, &limits, modulus, cl.width(), |z| {
        residue_point_is_unit(&cl.ranks, &cl.offsets, &order, z, modulus)
    });
    Ok((!hit).then_some(ObstructionCert {
        modulus,
        checked_count: count,
    }))
}

/// First modulus in `moduli` that certifies non-isomorphism.
pub fn obstruction_search(cl: &ConstraintLattice, moduli: &[u64], budget: u128) -> Result<Option<ObstructionCert>> {
    for &m in moduli {
        if let Some(cert) = obstruction_at(cl, m, budget)? {
            return Ok(Some(cert));
        }
    }
    Ok(None)
}

/// Independent check of an obstruction certificate: rebuilds the constraint
/// lattice and enumerates each residue class of it modulo `m` exactly once,
/// through the Hermite form of `L + mZ^N`. Returns the number of classes
/// checked when the certificate holds.
pub fn verify_obstruction(
    b: &InclusionDiagram,
    c: &InclusionDiagram,
    cert: &ObstructionCert,
    budget: u128,
) -> Result<Option<u128>> {
    let m = cert.modulus;
    if m < 2 {
        return Ok(None);
    }
    let cl = constraint_lattice(b, c)?;
    let width = cl.width();
    let gens = cl
        .full_basis
        .stack(&IntMatrix::identity(width).scaled(&BigInt::from(m)))?;
    let h = hnf(&gens).h.select_rows(0..width);
    let md = BigInt::from(m);
    let mut limits = Vec::with_capacity(width);
    let mut classes: u128 = 1;
    for k in 0..width {
        let pivot = h.get(k, k);
        let limit = (&md / pivot).to_u64().expect("pivot divides m");
        classes = classes.saturating_mul(limit as u128);
        limits.push(limit);
    }
    if classes > budget {
        return Err(Error::BudgetExceeded {
            modulus: m,
            required: classes,
            budget,
        });
    }
    let rows = residue_rows(&h, m);
    let order: Vec<usize> = (0..cl.ranks.len()).collect();
    let hit = for_each_residue(&rows, &limits, m, width, |z| {
        residue_point_is_unit(&cl.ranks, &cl.offsets, &order, z, m)
    });
    Ok((!hit).then_some(classes))
}

/// Canonical isomorphism for one- and two-node chains through Smith forms:
/// both inclusions become `diag(d) ⊆ Z^r` in adapted bases, and equal
/// invariants match the adapted bases one to one.
pub fn two_node_witness(b: &InclusionDiagram, c: &InclusionDiagram) -> Result<Option<IsoWitness>> {
    require_same_poset(b, c)?;
    if !b.poset().is_chain() || b.len() > 2 || invariant_screen(b, c)?.is_some() {
        return Ok(None);
    }
    let top = b.len() - 1;
    let adapted = |d: &InclusionDiagram| -> Result<IntMatrix> {
        // rows of R⁻¹ · S_top form a basis with d_i · row_i spanning the bottom node
        let p = d.node(top).coordinate_matrix(d.node(0))?;
        let res = snf(&p);
        let r_inv = inverse_unimodular(&res.r)?;
        r_inv.checked_mul(d.node(top).basis())
    };
    let (sb, sc) = (adapted(b)?, adapted(c)?);
    let coords_b = rows_in_basis(b.node(top), &sb)?;
    let coords_c = rows_in_basis(c.node(top), &sc)?;
    // coords_b · S_top = sb, coords_c · G_top = sc; the map S_top → G_top
    // sending sb_i ↦ sc_i has row form coords_b⁻¹ · coords_c
    let row_form = inverse_unimodular(&coords_b)?.checked_mul(&coords_c)?;
    let top_map = row_form.transpose();
    let mut node_maps = Vec::with_capacity(b.len());
    if top == 1 {
        let p = b.node(1).coordinate_matrix(b.node(0))?;
        let imgs = p.checked_mul(&row_form)?.checked_mul(c.node(1).basis())?;
        let mut coords = IntMatrix::zeros(0, c.node(0).rank());
        for img in imgs.row_iter() {
            match c.node(0).coords(img)? {
                Some(x) => coords.push_row(&x)?,
                None => return Ok(None),
            }
        }
        node_maps.push(coords.transpose());
    }
    node_maps.push(top_map);
    let w = IsoWitness { node_maps };
    Ok(verify_witness(b, c, &w)?.ok.then_some(w))
}

fn rows_in_basis(l: &Lattice, rows: &IntMatrix) -> Result<IntMatrix> {
    let mut out = IntMatrix::zeros(0, l.rank());
    for row in rows.row_iter() {
        let c = l.coords(row)?.ok_or_else(|| Error::NotContained {
            generator: row.to_vec(),
        })?;
        out.push_row(&c)?;
    }
    Ok(out)
}

/// Inverse of a unimodular matrix, by solving against its Hermite form.
fn inverse_unimodular(m: &IntMatrix) -> Result<IntMatrix> {
    // u · m = h = I when m is unimodular
    let res = hnf(m);
    if res.h != IntMatrix::identity(m.rows()) {
        return Err(Error::Invalid("matrix is not unimodular".into()));
    }
    Ok(res.u)
}

/// Budgets for [`decide_iso`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoConfig {
    pub coeff_bound: u64,
    pub max_modulus: u64,
    pub residue_budget: u128,
    /// Ambient matrices tried as witnesses before any enumeration.
    pub seeds: Vec<IntMatrix>,
}

impl Default for IsoConfig {
    fn default() -> Self {
        IsoConfig {
            coeff_bound: 5,
            max_modulus: 64,
            residue_budget: DEFAULT_RESIDUE_BUDGET,
            seeds: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NonIsoCert {
    Modulus(ObstructionCert),
    Invariants(InvariantMismatch),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchBounds {
    pub coeff_bound: u64,
    pub max_modulus: u64,
    /// Moduli whose residue enumeration exceeded the budget.
    pub skipped_moduli: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoVerdict {
    Isomorphic(IsoWitness),
    NotIsomorphic(NonIsoCert),
    Inconclusive(SearchBounds),
}

impl IsoVerdict {
    pub fn kind(&self) -> VerdictKind {
        match self {
            IsoVerdict::Isomorphic(_) => VerdictKind::Isomorphic,
            IsoVerdict::NotIsomorphic(_) => VerdictKind::NotIsomorphic,
            IsoVerdict::Inconclusive(_) => VerdictKind::Inconclusive,
        }
    }

    /// Single-line machine-readable record.
    pub fn record(&self) -> String {
        match self {
            IsoVerdict::Isomorphic(_) => "ISO".into(),
            IsoVerdict::NotIsomorphic(NonIsoCert::Modulus(c)) => {
                format!("NOT-ISO modulus={}", c.modulus)
            }
            IsoVerdict::NotIsomorphic(NonIsoCert::Invariants(m)) => {
                format!("NOT-ISO invariant-mismatch={m}")
            }
            IsoVerdict::Inconclusive(b) => {
                format!("INCONCLUSIVE coeff={} modulus={}", b.coeff_bound, b.max_modulus)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerdictKind {
    Isomorphic,
    NotIsomorphic,
    Inconclusive,
}

/// Divisors `> 1` of `torsion_lcm` up to `max_modulus`, ascending, then every
/// other integer in `2..=max_modulus`.
pub fn modulus_schedule(torsion_lcm: &BigInt, max_modulus: u64) -> Vec<u64> {
    let mut first: Vec<u64> = (2..=max_modulus)
        .filter(|&m| torsion_lcm.is_multiple_of(&BigInt::from(m)))
        .collect();
    if torsion_lcm.is_one() {
        first.clear();
    }
    let rest: Vec<u64> = (2..=max_modulus).filter(|m| !first.contains(m)).collect();
    first.extend(rest);
    first
}

/// Screens invariants, then interleaves the witness search (one norm shell per
/// round) with the obstruction search (one modulus per round).
pub fn decide_iso(b: &InclusionDiagram, c: &InclusionDiagram, config: &IsoConfig) -> Result<IsoVerdict> {
    require_same_poset(b, c)?;
    if let Some(mismatch) = invariant_screen(b, c)? {
        return Ok(IsoVerdict::NotIsomorphic(NonIsoCert::Invariants(mismatch)));
    }
    for seed in &config.seeds {
        if seed.rows() != b.ambient_dim() || seed.cols() != c.ambient_dim() {
            continue;
        }
        if let Some(w) = IsoWitness::from_ambient(b, c, seed)? {
            if verify_witness(b, c, &w)?.ok {
                return Ok(IsoVerdict::Isomorphic(w));
            }
        }
    }
    if let Some(w) = two_node_witness(b, c)? {
        return Ok(IsoVerdict::Isomorphic(w));
    }
    let cl = constraint_lattice(b, c)?;
    let moduli = modulus_schedule(&torsion_lcm(b)?, config.max_modulus);
    let mut skipped = Vec::new();
    let rounds = (config.coeff_bound as usize + 1).max(moduli.len());
    for round in 0..rounds {
        if round as u64 <= config.coeff_bound {
            if let Some(w) = witness_search_shell(&cl, round as u64) {
                if verify_witness(b, c, &w)?.ok {
                    return Ok(IsoVerdict::Isomorphic(w));
                }
            }
        }
        if let Some(&m) = moduli.get(round) {
            match obstruction_at(&cl, m, config.residue_budget) {
                Ok(Some(cert)) => return Ok(IsoVerdict::NotIsomorphic(NonIsoCert::Modulus(cert))),
                Ok(None) => {}
                Err(Error::BudgetExceeded { .. }) => skipped.push(m),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(IsoVerdict::Inconclusive(SearchBounds {
        coeff_bound: config.coeff_bound,
        max_modulus: config.max_modulus,
        skipped_moduli: skipped,
    }))
}

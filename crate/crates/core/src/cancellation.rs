//! Cancellation-theoretic operations on lattices: the image identity for two
//! epimorphisms onto `Z`, internal direct sums with a copy of `Z`, common
//! complements in `Z^2`, stable range one in `Z`, and cancellation of `Z`
//! against a rank-one group `dZ`.

use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{kernel_of_functional, AmbientFunctional, Lattice};
use crate::matrix::{self, IntMatrix};
use crate::order;

/// The two images `f(ker g)`, `g(ker f)` inside `Z`, and the image `I` of the
/// group in `Z ⊕ Z` under `(f, g)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImagePair {
    pub f_of_ker_g: Lattice,
    pub g_of_ker_f: Lattice,
    pub subdirect_image: Lattice,
}

impl ImagePair {
    pub fn images_agree(&self) -> bool {
        self.f_of_ker_g == self.g_of_ker_f
    }

    /// `f(ker g)` read off from `I` as `I ∩ (Z ⊕ 0)`, and `g(ker f)` as
    /// `I ∩ (0 ⊕ Z)`.
    pub fn axis_sections(&self) -> Result<(Lattice, Lattice)> {
        let first = self
            .subdirect_image
            .intersect(&Lattice::from_vectors(2, &[matrix::vector(&[1, 0])])?)?;
        let second = self
            .subdirect_image
            .intersect(&Lattice::from_vectors(2, &[matrix::vector(&[0, 1])])?)?;
        let project = |l: &Lattice, i: usize| -> Result<Lattice> {
            l.image(&IntMatrix::column_vector(&AmbientFunctional::coordinate(2, i).coeffs))
        };
        Ok((project(&first, 0)?, project(&second, 1)?))
    }
}

/// For epimorphisms `f, g : a → Z`, computes `f(ker g)` and `g(ker f)`.
/// They always coincide.
pub fn theorem1_images(a: &Lattice, f: &AmbientFunctional, g: &AmbientFunctional) -> Result<ImagePair> {
    f.require_surjective_on(a)?;
    g.require_surjective_on(a)?;
    let f_of_ker_g = f.image(&kernel_of_functional(a, g)?)?;
    let g_of_ker_f = g.image(&kernel_of_functional(a, f)?)?;
    let pair_map = IntMatrix::from_rows(
        2,
        f.coeffs.iter().zip(&g.coeffs).map(|(x, y)| [x.clone(), y.clone()]),
    )?;
    let subdirect_image = a.image(&pair_map)?;
    let pair = ImagePair {
        f_of_ker_g,
        g_of_ker_f,
        subdirect_image,
    };
    debug_assert!(pair.images_agree());
    Ok(pair)
}

/// Whether `a = k ⊕ Z·z` as an internal direct sum. With `f`, also checks that
/// `k` is exactly `ker f` on `a` and `f(z) = 1`.
pub fn split_check(
    a: &Lattice,
    k: &Lattice,
    z: &[BigInt],
    f: Option<&AmbientFunctional>,
) -> Result<bool> {
    a.require_contains(k)?;
    if !a.member(z)? {
        return Err(Error::NotMember { vector: z.to_vec() });
    }
    Ok(split_failure(a, k, z, f)?.is_none())
}

/// Why `a = k ⊕ Z·z` fails, or `None` when it holds.
pub(crate) fn split_failure(
    a: &Lattice,
    k: &Lattice,
    z: &[BigInt],
    f: Option<&AmbientFunctional>,
) -> Result<Option<String>> {
    let sum = k.add_vector(z)?;
    if &sum != a {
        let missing = sum.first_missing(a)?.unwrap_or_default();
        return Ok(Some(format!(
            "k + Z{} misses {}",
            matrix::fmt_vector(z),
            matrix::fmt_vector(&missing)
        )));
    }
    let z_is_zero = z.iter().all(Zero::is_zero);
    if !z_is_zero && sum.rank() != k.rank() + 1 {
        return Ok(Some(format!(
            "k meets Z{} nontrivially",
            matrix::fmt_vector(z)
        )));
    }
    if let Some(f) = f {
        let fz = f.eval(z)?;
        if !fz.is_one() {
            return Ok(Some(format!("f{} = {fz}, not 1", matrix::fmt_vector(z))));
        }
        if &kernel_of_functional(a, f)? != k {
            return Ok(Some("k is not the kernel of f".into()));
        }
    }
    Ok(None)
}

/// Whether `s1 ⊕ s2 = a`.
pub fn complementary_summands(a: &Lattice, s1: &Lattice, s2: &Lattice) -> Result<bool> {
    let sum = s1.sum(s2)?;
    Ok(&sum == a && sum.rank() == s1.rank() + s2.rank())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplementSearch {
    /// First common complement generator in scan order, if any within the bound.
    pub vector: Option<Vec<BigInt>>,
    /// True when the answer holds without any bound: a found vector, or a
    /// proof that no common complement exists at all.
    pub complete: bool,
}

fn det2(a: &[BigInt], b: &[BigInt]) -> BigInt {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// Searches for `v` with `Z·v` a complement of both rank-one summands `s1`,
/// `s2` of `Z^2`, i.e. `|det(v, w1)| = |det(v, w2)| = 1`.
///
/// When the generators are independent the two determinant conditions pin `v`
/// down to at most four rational points, which are solved exactly, so a
/// negative answer is complete regardless of `bound`.
pub fn common_complement_search(s1: &Lattice, s2: &Lattice, bound: u64) -> Result<ComplementSearch> {
    for s in [s1, s2] {
        if s.ambient_dim() != 2 {
            return Err(Error::Dimension {
                expected: 2,
                found: s.ambient_dim(),
            });
        }
        if s.rank() != 1 {
            return Err(Error::Invalid(format!(
                "common complement search needs rank-one summands, got rank {}",
                s.rank()
            )));
        }
    }
    let w1 = s1.basis().row(0).to_vec();
    let w2 = s2.basis().row(0).to_vec();
    let found = order::for_each_up_to(2, bound, |v| {
        let v = matrix::vector(v);
        if det2(&v, &w1).abs().is_one() && det2(&v, &w2).abs().is_one() {
            ControlFlow::Break(v)
        } else {
            ControlFlow::Continue(())
        }
    });
    if let ControlFlow::Break(v) = found {
        return Ok(ComplementSearch {
            vector: Some(v),
            complete: true,
        });
    }
    let independent = !det2(&w1, &w2).is_zero();
    let complete = independent && exact_complements(&w1, &w2).is_empty();
    Ok(ComplementSearch {
        vector: None,
        complete,
    })
}

/// All integer `v` with `det(v, w1) = ±1` and `det(v, w2) = ±1`, for
/// independent `w1`, `w2` (Cramer's rule over the four sign choices).
fn exact_complements(w1: &[BigInt], w2: &[BigInt]) -> Vec<Vec<BigInt>> {
    // det(v, w) = v0*w1 - v1*w0, a linear system in (v0, v1)
    let d = det2(w1, w2);
    let mut out = Vec::new();
    for e1 in [1i64, -1] {
        for e2 in [1i64, -1] {
            let (e1, e2) = (BigInt::from(e1), BigInt::from(e2));
            // [w1_1 -w1_0; w2_1 -w2_0] (v0 v1)^T = (e1 e2)^T
            let num0 = -(&e1 * &w2[0]) + &e2 * &w1[0];
            let num1 = &w1[1] * &e2 - &w2[1] * &e1;
            let det = d.clone();
            if num0.is_multiple_of(&det) && num1.is_multiple_of(&det) {
                out.push(vec![&num0 / &det, &num1 / &det]);
            }
        }
    }
    out
}

/// Finds `k` with `a + b·k = ±1` in the integers, preferring the first `k` in
/// the order `0, 1, -1, 2, ...`. Requires `gcd(a, b) = 1`.
pub fn stable_range_witness(a: &BigInt, b: &BigInt) -> Result<Option<BigInt>> {
    let gcd = a.gcd(b);
    if !gcd.is_one() {
        return Err(Error::NotCoprime {
            a: a.clone(),
            b: b.clone(),
            gcd,
        });
    }
    if b.is_zero() {
        return Ok(Some(BigInt::zero()));
    }
    let candidates = [BigInt::one(), -BigInt::one()]
        .into_iter()
        .filter_map(|u| {
            let (k, r) = (u - a).div_rem(b);
            r.is_zero().then_some(k)
        });
    Ok(candidates.min_by(|x, y| {
        let rank = |k: &BigInt| (k.abs(), k.is_negative());
        rank(x).cmp(&rank(y))
    }))
}

/// `B = dZ` with a surjection `f : B ⊕ Z → Z`, `f(d, 0) = k`, `f(0, 1) = s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankOneCancelInstance {
    pub d: BigInt,
    pub k: BigInt,
    pub s: BigInt,
}

impl RankOneCancelInstance {
    pub fn new(d: i64, k: i64, s: i64) -> Self {
        RankOneCancelInstance {
            d: d.into(),
            k: k.into(),
            s: s.into(),
        }
    }

    /// `B ⊕ Z` inside `Z^2`.
    pub fn domain(&self) -> Lattice {
        Lattice::from_vectors(
            2,
            &[
                vec![self.d.clone(), BigInt::zero()],
                matrix::vector(&[0, 1]),
            ],
        )
        .expect("dimension 2")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankOneReport {
    /// `ker f ⊂ Z^2`, pairs `(b, n)` with `b ∈ dZ`.
    pub kernel: Lattice,
    /// `f₁⁻¹(sZ) ⊆ B`, inside `Z^1`.
    pub preimage: Lattice,
    /// The multiplier with `ker f ≅ mB`.
    pub m: BigInt,
    /// `mB` inside `Z^1`.
    pub m_b: Lattice,
    /// Projection `(b, n) ↦ b` maps `ker f` isomorphically onto `preimage`
    /// (or, when `s = 0`, the kernel is `0 ⊕ Z`).
    pub verified: bool,
}

pub fn rank_one_cancellation(inst: &RankOneCancelInstance) -> Result<RankOneReport> {
    if !inst.d.is_positive() {
        return Err(Error::Invalid(format!("d must be positive, got {}", inst.d)));
    }
    let g = inst.k.gcd(&inst.s);
    if !g.is_one() {
        return Err(Error::NotSurjective { image: g });
    }
    let domain = inst.domain();
    // f on Z^2 in ambient coordinates is (b, n) ↦ (k/d)·b + s·n; scale by d to
    // stay integral, the kernel is unchanged.
    let scaled = AmbientFunctional::new(vec![inst.k.clone(), &inst.d * &inst.s]);
    let kernel = kernel_of_functional(&domain, &scaled)?;

    let first = IntMatrix::column_vector(&matrix::vector(&[1, 0]));
    if inst.s.is_zero() {
        let expected = Lattice::from_vectors(2, &[matrix::vector(&[0, 1])])?;
        let b = Lattice::cyclic_in_z(&inst.d);
        return Ok(RankOneReport {
            verified: kernel == expected,
            preimage: b.clone(),
            m: BigInt::one(),
            m_b: b,
            kernel,
        });
    }
    // f₁⁻¹(sZ): the t with k·t ∈ sZ, then b = d·t
    let t_lattice = kernel_of_functional(
        &Lattice::full(2),
        &AmbientFunctional::new(vec![inst.k.clone(), inst.s.clone()]),
    )?;
    let preimage = t_lattice.image(&first)?.scaled(&inst.d);
    let m = inst.s.abs();
    let m_b = Lattice::cyclic_in_z(&(&m * &inst.d));
    let projected = kernel.image(&first)?;
    let verified = kernel.rank() == 1 && projected == preimage && preimage == m_b;
    Ok(RankOneReport {
        kernel,
        preimage,
        m,
        m_b,
        verified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::vector;

    fn lat(n: usize, rows: &[&[i64]]) -> Lattice {
        Lattice::from_generators(n, &IntMatrix::from_i64(rows)).unwrap()
    }

    fn a1() -> Lattice {
        lat(3, &[&[1, 0, -24], &[0, 1, 8], &[0, 0, 64]])
    }

    #[test]
    fn images_examples() {
        let (f, g) = (
            AmbientFunctional::from_i64(&[1, 0]),
            AmbientFunctional::from_i64(&[0, 1]),
        );
        let p = theorem1_images(&Lattice::full(2), &f, &g).unwrap();
        assert!(p.images_agree());
        assert_eq!(p.f_of_ker_g, Lattice::full(1));

        let a = lat(2, &[&[1, 1], &[2, 0]]);
        let p = theorem1_images(&a, &f, &g).unwrap();
        assert_eq!(p.f_of_ker_g, Lattice::cyclic_in_z(&BigInt::from(2)));
        assert_eq!(p.g_of_ker_f, Lattice::cyclic_in_z(&BigInt::from(2)));
        assert_eq!(p.axis_sections().unwrap(), (p.f_of_ker_g.clone(), p.g_of_ker_f.clone()));

        let p = theorem1_images(
            &a1(),
            &AmbientFunctional::coordinate(3, 0),
            &AmbientFunctional::coordinate(3, 1),
        )
        .unwrap();
        assert_eq!(p.f_of_ker_g, Lattice::full(1));
        assert_eq!(p.g_of_ker_f, Lattice::full(1));

        let not_onto = AmbientFunctional::from_i64(&[2, 0]);
        assert!(matches!(
            theorem1_images(&Lattice::full(2), &not_onto, &g),
            Err(Error::NotSurjective { .. })
        ));
    }

    #[test]
    fn split_examples() {
        let a0 = lat(3, &[&[1, 3, 0], &[3, 1, 0]]);
        let k = lat(3, &[&[0, 8, 0]]);
        let f = AmbientFunctional::coordinate(3, 0);
        assert!(split_check(&a0, &k, &vector(&[1, 3, 0]), Some(&f)).unwrap());

        let a2 = Lattice::full(3);
        let g = AmbientFunctional::coordinate(3, 1);
        let ker2g = kernel_of_functional(&a2, &g).unwrap();
        assert!(split_check(&a2, &ker2g, &vector(&[3, 1, 0]), Some(&g)).unwrap());

        let k = lat(2, &[&[0, 2]]);
        assert!(!split_check(&Lattice::full(2), &k, &vector(&[1, 0]), None).unwrap());
        // z outside a
        assert!(split_check(&a0, &lat(3, &[&[0, 8, 0]]), &vector(&[1, 0, 0]), None).is_err());
        // f(z) != 1 even though the sum is direct
        let f2 = AmbientFunctional::coordinate(2, 0);
        let k = lat(2, &[&[0, 1]]);
        assert!(!split_check(&Lattice::full(2), &k, &vector(&[-1, 0]), Some(&f2)).unwrap());
        assert!(split_check(&Lattice::full(2), &k, &vector(&[-1, 0]), None).unwrap());
    }

    #[test]
    fn complement_examples() {
        let s01 = lat(2, &[&[0, 1]]);
        let r = common_complement_search(&s01, &lat(2, &[&[5, 2]]), 100).unwrap();
        assert_eq!(r, ComplementSearch { vector: None, complete: true });

        let r = common_complement_search(&s01, &s01, 100).unwrap();
        assert_eq!(r.vector, Some(vector(&[1, 0])));

        let r = common_complement_search(&lat(2, &[&[1, 0]]), &lat(2, &[&[7, 3]]), 100).unwrap();
        assert_eq!(r.vector, Some(vector(&[2, 1])));
        assert!(r.complete);

        // a solution exists but lies outside the bound
        let r = common_complement_search(&lat(2, &[&[1, 0]]), &lat(2, &[&[7, 3]]), 1).unwrap();
        assert_eq!(r, ComplementSearch { vector: None, complete: false });

        assert!(common_complement_search(&Lattice::full(2), &s01, 3).is_err());
    }

    #[test]
    fn summand_fixtures() {
        let z2 = Lattice::full(2);
        assert!(complementary_summands(&z2, &lat(2, &[&[1, 0]]), &lat(2, &[&[0, 1]])).unwrap());
        assert!(complementary_summands(&z2, &lat(2, &[&[7, 3]]), &lat(2, &[&[5, 2]])).unwrap());
        assert!(!complementary_summands(&z2, &lat(2, &[&[2, 0]]), &lat(2, &[&[0, 1]])).unwrap());
    }

    #[test]
    fn stable_range_examples() {
        let b = |x: i64| BigInt::from(x);
        assert_eq!(stable_range_witness(&b(3), &b(2)).unwrap(), Some(b(-1)));
        assert_eq!(stable_range_witness(&b(1), &b(0)).unwrap(), Some(b(0)));
        assert_eq!(stable_range_witness(&b(2), &b(5)).unwrap(), None);
        assert!(matches!(
            stable_range_witness(&b(4), &b(6)),
            Err(Error::NotCoprime { .. })
        ));
    }

    #[test]
    fn rank_one_examples() {
        let r = rank_one_cancellation(&RankOneCancelInstance::new(3, 2, 5)).unwrap();
        assert_eq!(r.kernel, lat(2, &[&[15, -2]]));
        assert_eq!(r.preimage, Lattice::cyclic_in_z(&BigInt::from(15)));
        assert_eq!(r.m, BigInt::from(5));
        assert!(r.verified);

        let r = rank_one_cancellation(&RankOneCancelInstance::new(3, 1, 0)).unwrap();
        assert_eq!(r.kernel, lat(2, &[&[0, 1]]));
        assert_eq!(r.m, BigInt::one());
        assert!(r.verified);

        let r = rank_one_cancellation(&RankOneCancelInstance::new(1, 1, 1)).unwrap();
        assert_eq!(r.kernel, lat(2, &[&[1, -1]]));
        assert!(r.verified);

        assert!(rank_one_cancellation(&RankOneCancelInstance::new(3, 2, 4)).is_err());
        assert!(rank_one_cancellation(&RankOneCancelInstance::new(3, 2, 0)).is_err());
    }
}

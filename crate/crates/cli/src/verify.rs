//! The reproduction harness: every worked example, re-derived and checked.

use latdiag::cancellation::{
    common_complement_search, complementary_summands, rank_one_cancellation, split_check, stable_range_witness,
    theorem1_images, RankOneCancelInstance,
};
use latdiag::diagram::{direct_sum_with_constant, kernel_chain, parse_chain, InclusionDiagram, SplitSection};
use latdiag::iso::{decide_iso, verify_obstruction, verify_witness, IsoConfig, IsoVerdict, NonIsoCert, DEFAULT_RESIDUE_BUDGET};
use latdiag::lattice::pair_iso_decide;
use latdiag::logic::{classical_tautology, countermodel_search, parse_formula};
use latdiag::matrix::{fmt_vector, vector};
use latdiag::{AmbientFunctional, IntMatrix, Lattice};
use num_bigint::BigInt;

use crate::fixtures::Fixtures;
use crate::report::VerificationReport;

type Outcome = Result<String, String>;

fn err(e: latdiag::Error) -> String {
    e.to_string()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lat(rows: &[&[i64]]) -> Lattice {
    Lattice::from_generators(rows[0].len(), &IntMatrix::from_i64(rows)).expect("well-formed literal")
}

fn f() -> AmbientFunctional {
    AmbientFunctional::coordinate(3, 0)
}

fn g() -> AmbientFunctional {
    AmbientFunctional::coordinate(3, 1)
}

struct Loaded {
    a: Result<InclusionDiagram, String>,
    b: Result<InclusionDiagram, String>,
    c: Result<InclusionDiagram, String>,
    bz: Result<InclusionDiagram, String>,
    cz: Result<InclusionDiagram, String>,
}

fn load(fx: &Fixtures) -> Loaded {
    let parse = |name: &str, text: &str| parse_chain(text).map_err(|e| format!("{name}: {e}"));
    Loaded {
        a: parse("a_chain", &fx.a),
        b: parse("b_chain", &fx.b),
        c: parse("c_chain", &fx.c),
        bz: parse("bz_chain", &fx.bz),
        cz: parse("cz_chain", &fx.cz),
    }
}

fn a_chain(l: &Loaded) -> Outcome {
    let a = l.a.as_ref().map_err(Clone::clone)?;
    ensure(a.len() == 3 && a.ambient_dim() == 3, || "expected a 3-node chain in Z^3".into())?;
    ensure(a.node(2) == &Lattice::full(3), || "top node is not Z^3".into())?;
    for v in [vector(&[0, 8, 0]), vector(&[8, 0, 0])] {
        ensure(a.node(0).member(&v).map_err(err)?, || format!("{} not in A0", fmt_vector(&v)))?;
    }
    Ok("A0 ⊂ A1 ⊂ Z^3 valid; (0,8,0), (8,0,0) in A0".into())
}

/// Kernels of the A-chain against the tabulated generators.
fn kernel_table(l: &Loaded, func: &AmbientFunctional, table: &Result<InclusionDiagram, String>, label: &str) -> Outcome {
    let a = l.a.as_ref().map_err(Clone::clone)?;
    let t = table.as_ref().map_err(Clone::clone)?;
    let k = kernel_chain(a, func).map_err(err)?;
    ensure(k.len() == t.len(), || format!("{} nodes, table has {}", k.len(), t.len()))?;
    for i in 0..k.len() {
        ensure(k.node(i) == t.node(i), || {
            format!("ker_{i}{label} = {} but table gives {}", k.node(i), t.node(i))
        })?;
    }
    Ok(format!("ker{label} = {k}"))
}

fn split(l: &Loaded, func: AmbientFunctional, kernels: &Result<InclusionDiagram, String>, z: &[i64]) -> Outcome {
    let a = l.a.as_ref().map_err(Clone::clone)?;
    let k = kernels.as_ref().map_err(Clone::clone)?;
    let z = vector(z);
    for i in 0..a.len() {
        let ok = split_check(a.node(i), k.node(i), &z, Some(&func)).map_err(err)?;
        ensure(ok, || format!("node {i} is not ker ⊕ Z{}", fmt_vector(&z)))?;
    }
    let s = SplitSection::new(z.clone(), func).map_err(err)?;
    let rebuilt = direct_sum_with_constant(k, &s).map_err(err)?;
    ensure(&rebuilt == a, || "kernel ⊕ Z·z does not rebuild the A-chain".into())?;
    Ok(format!("A = ker ⊕ Z{} at all 3 nodes", fmt_vector(&z)))
}

fn images(l: &Loaded) -> Outcome {
    let a = l.a.as_ref().map_err(Clone::clone)?;
    let pair = theorem1_images(a.node(1), &f(), &g()).map_err(err)?;
    ensure(pair.images_agree(), || {
        format!("f(ker g) = {} but g(ker f) = {}", pair.f_of_ker_g, pair.g_of_ker_f)
    })?;
    let (first, second) = pair.axis_sections().map_err(err)?;
    ensure(first == pair.f_of_ker_g && second == pair.g_of_ker_f, || {
        "sections of the subdirect image disagree".into()
    })?;
    Ok(format!("on A1: f(ker g) = g(ker f) = {}", pair.f_of_ker_g))
}

fn no_iso(l: &Loaded) -> Outcome {
    let b = l.b.as_ref().map_err(Clone::clone)?;
    let c = l.c.as_ref().map_err(Clone::clone)?;
    match decide_iso(b, c, &IsoConfig::default()).map_err(err)? {
        IsoVerdict::NotIsomorphic(NonIsoCert::Modulus(cert)) => {
            ensure(64 % cert.modulus == 0, || format!("modulus {} does not divide 64", cert.modulus))?;
            let classes = verify_obstruction(b, c, &cert, DEFAULT_RESIDUE_BUDGET)
                .map_err(err)?
                .ok_or_else(|| format!("modulus {} failed re-enumeration", cert.modulus))?;
            Ok(format!("NOT-ISO modulus={}; {classes} residue classes re-checked", cert.modulus))
        }
        other => Err(format!("expected a modulus certificate, got {}", other.record())),
    }
}

fn stable_iso(l: &Loaded) -> Outcome {
    let b = l.b.as_ref().map_err(Clone::clone)?;
    let c = l.c.as_ref().map_err(Clone::clone)?;
    let bz = l.bz.as_ref().map_err(Clone::clone)?;
    let cz = l.cz.as_ref().map_err(Clone::clone)?;
    ensure(&b.with_constant_summand() == bz, || "bz_chain is not B ⊕ Z".into())?;
    ensure(&c.with_constant_summand() == cz, || "cz_chain is not C ⊕ Z".into())?;
    match decide_iso(bz, cz, &IsoConfig::default()).map_err(err)? {
        IsoVerdict::Isomorphic(w) => {
            let check = verify_witness(bz, cz, &w).map_err(err)?;
            ensure(check.ok, || check.detail.unwrap_or_default())?;
            Ok("ISO; witness re-verified at all 3 nodes".into())
        }
        other => Err(format!("expected ISO, got {}", other.record())),
    }
}

fn truncations(l: &Loaded) -> Outcome {
    let b = l.b.as_ref().map_err(Clone::clone)?;
    let c = l.c.as_ref().map_err(Clone::clone)?;
    for lower in [0, 1] {
        let same = pair_iso_decide(b.node(lower), b.node(2), c.node(lower), c.node(2)).map_err(err)?;
        ensure(same, || format!("nodes {{{lower},2}} differ"))?;
    }
    Ok("{0,2} and {1,2} truncations of B and C are isomorphic".into())
}

fn complements() -> Outcome {
    let full = Lattice::full(2);
    for (s1, s2) in [(lat(&[&[1, 0]]), lat(&[&[0, 1]])), (lat(&[&[7, 3]]), lat(&[&[5, 2]]))] {
        ensure(complementary_summands(&full, &s1, &s2).map_err(err)?, || {
            format!("{s1} and {s2} are not complementary")
        })?;
    }
    let search = common_complement_search(&lat(&[&[0, 1]]), &lat(&[&[5, 2]]), 100).map_err(err)?;
    ensure(search.vector.is_none(), || "found a common complement".into())?;
    ensure(search.complete, || "search did not prove absence".into())?;
    Ok("<(0,1)> and <(5,2)> have no common complement (complete)".into())
}

fn stable_range() -> Outcome {
    let w = stable_range_witness(&BigInt::from(2), &BigInt::from(5)).map_err(err)?;
    ensure(w.is_none(), || "unexpected witness for (2,5)".into())?;
    let w = stable_range_witness(&BigInt::from(3), &BigInt::from(2)).map_err(err)?;
    ensure(w == Some(BigInt::from(-1)), || format!("(3,2) gave {w:?}"))?;
    Ok("(2,5): none; (3,2): k = -1".into())
}

fn rank_one() -> Outcome {
    let rep = rank_one_cancellation(&RankOneCancelInstance::new(3, 2, 5)).map_err(err)?;
    ensure(rep.verified && rep.kernel == lat(&[&[15, -2]]), || format!("kernel {}", rep.kernel))?;
    ensure(rep.m == BigInt::from(5), || format!("m = {}", rep.m))?;
    let rep = rank_one_cancellation(&RankOneCancelInstance::new(3, 1, 0)).map_err(err)?;
    ensure(rep.verified && rep.m == BigInt::from(1), || "s = 0 case".into())?;
    Ok("d=3,k=2,s=5: ker = <(15,-2)> ≅ 5B; s=0: m=1".into())
}

fn kripke(formula: &str, worlds: usize) -> Outcome {
    let phi = parse_formula(formula).map_err(err)?;
    ensure(classical_tautology(&phi), || "not a classical tautology".into())?;
    ensure(countermodel_search(&phi, worlds - 1).is_none(), || {
        format!("refuted with fewer than {worlds} worlds")
    })?;
    let m = countermodel_search(&phi, worlds).ok_or_else(|| format!("no countermodel with {worlds} worlds"))?;
    ensure(!m.forces(m.root(), &phi).map_err(err)?, || "root forces the formula".into())?;
    ensure(m.worlds().is_chain(), || "countermodel is not a chain".into())?;
    Ok(format!("{worlds}-chain countermodel, classically valid"))
}

/// Runs every check in a fixed order.
pub fn verify_paper(fx: &Fixtures) -> VerificationReport {
    let l = load(fx);
    let mut r = VerificationReport::default();
    r.push("a-chain", a_chain(&l));
    r.push("kernel-table-f", kernel_table(&l, &f(), &l.b, "f"));
    r.push("kernel-table-g", kernel_table(&l, &g(), &l.c, "g"));
    r.push("split-f", split(&l, f(), &l.b, &[1, 3, 0]));
    r.push("split-g", split(&l, g(), &l.c, &[3, 1, 0]));
    r.push("kernel-images", images(&l));
    r.push("no-iso-b-c", no_iso(&l));
    r.push("iso-bz-cz", stable_iso(&l));
    r.push("two-node-truncations", truncations(&l));
    r.push("common-complement", complements());
    r.push("stable-range", stable_range());
    r.push("rank-one-cancellation", rank_one());
    r.push("kripke-excluded-middle", kripke("Q | ~Q", 2));
    r.push("kripke-disjunction", kripke("P | (P -> (Q | ~Q))", 3));
    r
}

//! Experimental, bounded survey of V-shaped diagrams (a least node below two
//! incomparable ones) for pairs `ker f`, `ker g` that fail to be isomorphic.
//! Nothing here claims completeness.

use latdiag::diagram::{kernel_chain, InclusionDiagram, Poset};
use latdiag::iso::{decide_iso, IsoConfig, IsoVerdict};
use latdiag::{AmbientFunctional, IntMatrix, Lattice};
use num_bigint::BigInt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExploreConfig {
    /// Kernel rank bound; ambient dimension is one more.
    pub rank_bound: usize,
    /// Bound on Hermite-form entries of every node.
    pub entry_bound: u64,
    pub coeff_bound: u64,
    pub max_modulus: u64,
    pub max_candidates: usize,
}

impl Default for ExploreConfig {
    fn default() -> Self {
        ExploreConfig {
            rank_bound: 2,
            entry_bound: 2,
            coeff_bound: 3,
            max_modulus: 16,
            max_candidates: 300,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExploreReport {
    pub candidates: usize,
    pub truncated: bool,
    pub iso: usize,
    pub inconclusive: usize,
    /// Candidates where some modulus exceeded the residue budget.
    pub over_budget: usize,
    pub finds: Vec<String>,
}

impl ExploreReport {
    pub fn to_text(&self, cfg: &ExploreConfig) -> String {
        let mut s = String::from("explore-v: experimental bounded survey of V-poset kernel pairs; no completeness claim\n");
        s.push_str(&format!(
            "bounds: rank<={} entries<={} coeff<={} modulus<={} candidates<={}\n",
            cfg.rank_bound, cfg.entry_bound, cfg.coeff_bound, cfg.max_modulus, cfg.max_candidates
        ));
        s.push_str(&format!(
            "candidates: {}{}\n",
            self.candidates,
            if self.truncated { " (truncated)" } else { "" }
        ));
        s.push_str(&format!("ISO: {}\n", self.iso));
        s.push_str(&format!("NOT-ISO: {}\n", self.finds.len()));
        s.push_str(&format!("INCONCLUSIVE: {}\n", self.inconclusive));
        s.push_str(&format!("over-budget: {}\n", self.over_budget));
        for find in &self.finds {
            s.push_str(&format!("find: {find}\n"));
        }
        s
    }
}

/// Full-rank lattices of `Z^n` in Hermite form with diagonal and
/// off-diagonal entries in `[1, e]` and `[0, d)`.
fn hermite_lattices(n: usize, e: u64) -> Vec<Lattice> {
    let mut out = Vec::new();
    let mut diag = vec![1u64; n];
    loop {
        // upper entries, column j has j of them, each below diag[j]
        let slots: Vec<(usize, usize)> = (0..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
        let mut vals = vec![0u64; slots.len()];
        loop {
            let mut m = IntMatrix::zeros(n, n);
            for (k, &d) in diag.iter().enumerate() {
                m.set(k, k, BigInt::from(d));
            }
            for (&(i, j), &v) in slots.iter().zip(&vals) {
                m.set(i, j, BigInt::from(v));
            }
            out.push(Lattice::from_generators(n, &m).expect("square"));
            let mut k = slots.len();
            let mut done = true;
            while k > 0 {
                k -= 1;
                vals[k] += 1;
                if vals[k] < diag[slots[k].1] {
                    done = false;
                    break;
                }
                vals[k] = 0;
            }
            if done {
                break;
            }
        }
        let mut k = n;
        let mut done = true;
        while k > 0 {
            k -= 1;
            diag[k] += 1;
            if diag[k] <= e {
                done = false;
                break;
            }
            diag[k] = 1;
        }
        if done {
            break;
        }
    }
    out
}

pub fn explore_v(cfg: &ExploreConfig) -> ExploreReport {
    let mut report = ExploreReport::default();
    let iso_cfg = IsoConfig {
        coeff_bound: cfg.coeff_bound,
        max_modulus: cfg.max_modulus,
        ..IsoConfig::default()
    };
    'outer: for rank in 1..=cfg.rank_bound {
        let n = rank + 1;
        let f = AmbientFunctional::coordinate(n, 0);
        let g = AmbientFunctional::coordinate(n, 1);
        let lattices = hermite_lattices(n, cfg.entry_bound.max(1));
        let bottoms: Vec<&Lattice> = lattices
            .iter()
            .filter(|l| f.is_surjective_on(l).expect("dimension") && g.is_surjective_on(l).expect("dimension"))
            .collect();
        for (i, a1) in lattices.iter().enumerate() {
            for a2 in &lattices[i..] {
                for &a0 in &bottoms {
                    if !a1.contains(a0).expect("same ambient") || !a2.contains(a0).expect("same ambient") {
                        continue;
                    }
                    if report.candidates == cfg.max_candidates {
                        report.truncated = true;
                        break 'outer;
                    }
                    report.candidates += 1;
                    let a = InclusionDiagram::new(Poset::vee(), n, vec![a0.clone(), a1.clone(), a2.clone()])
                        .expect("a0 lies in both");
                    let b = kernel_chain(&a, &f).expect("dimension");
                    let c = kernel_chain(&a, &g).expect("dimension");
                    match decide_iso(&b, &c, &iso_cfg) {
                        Ok(IsoVerdict::Isomorphic(_)) => report.iso += 1,
                        Ok(v @ IsoVerdict::NotIsomorphic(_)) => {
                            report.finds.push(format!("A0={a0} A1={a1} A2={a2} {}", v.record()))
                        }
                        Ok(IsoVerdict::Inconclusive(bounds)) => {
                            report.inconclusive += 1;
                            if !bounds.skipped_moduli.is_empty() {
                                report.over_budget += 1;
                            }
                        }
                        Err(e) => report.finds.push(format!("A0={a0} A1={a1} A2={a2} error: {e}")),
                    }
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_family_sizes() {
        // n = 2, e = 2: diagonals (1,1),(1,2),(2,1),(2,2) with 1,2,1,2 choices above
        assert_eq!(hermite_lattices(2, 2).len(), 6);
        assert_eq!(hermite_lattices(1, 3).len(), 3);
        let all = hermite_lattices(3, 2);
        assert_eq!(all.len(), 30);
        for (i, x) in all.iter().enumerate() {
            assert!(all[i + 1..].iter().all(|y| y != x));
        }
    }

    #[test]
    fn rank_one_kernels_are_always_isomorphic() {
        let cfg = ExploreConfig {
            rank_bound: 1,
            entry_bound: 3,
            ..ExploreConfig::default()
        };
        let r = explore_v(&cfg);
        assert!(r.candidates > 0);
        assert_eq!(r.iso, r.candidates);
    }
}

use std::fmt;

use crate::diagram::Poset;
use crate::error::{Error, Result};
use crate::logic::Formula;

/// Finite rooted Kripke model: worlds ordered by a poset with a least element
/// (the root), and a valuation that is monotone along the order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    worlds: Poset,
    atoms: Vec<String>,
    /// `valuation[w][k]`: atom `k` holds at world `w`
    valuation: Vec<Vec<bool>>,
}

impl KripkeModel {
    pub fn new(worlds: Poset, atoms: Vec<String>, valuation: Vec<Vec<bool>>) -> Result<Self> {
        if valuation.len() != worlds.len() || valuation.iter().any(|row| row.len() != atoms.len()) {
            return Err(Error::Invalid("valuation does not match worlds and atoms".into()));
        }
        for (a, b) in worlds.strict_pairs() {
            if let Some(k) = (0..atoms.len()).find(|&k| valuation[a][k] && !valuation[b][k]) {
                return Err(Error::Invalid(format!(
                    "valuation not monotone: {} holds at {a} but not at {b}",
                    atoms[k]
                )));
            }
        }
        Ok(KripkeModel {
            worlds,
            atoms,
            valuation,
        })
    }

    /// Builds the valuation from the set of worlds where each atom holds.
    pub fn from_true_sets(worlds: Poset, sets: &[(&str, &[usize])]) -> Result<Self> {
        let n = worlds.len();
        let mut atoms: Vec<String> = sets.iter().map(|(a, _)| a.to_string()).collect();
        atoms.sort();
        atoms.dedup();
        let mut valuation = vec![vec![false; atoms.len()]; n];
        for (a, ws) in sets {
            let k = atoms.binary_search(&a.to_string()).expect("collected above");
            for &w in *ws {
                if w >= n {
                    return Err(Error::UnknownWorld(w));
                }
                valuation[w][k] = true;
            }
        }
        KripkeModel::new(worlds, atoms, valuation)
    }

    pub fn worlds(&self) -> &Poset {
        &self.worlds
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn root(&self) -> usize {
        self.worlds.least().expect("poset has a least element")
    }

    pub fn holds(&self, w: usize, atom: &str) -> Result<bool> {
        if w >= self.worlds.len() {
            return Err(Error::UnknownWorld(w));
        }
        let k = self
            .atoms
            .iter()
            .position(|a| a == atom)
            .ok_or_else(|| Error::UnknownAtom(atom.to_string()))?;
        Ok(self.valuation[w][k])
    }

    /// Worlds forcing `phi`, indexed by world.
    pub fn truth_set(&self, phi: &Formula) -> Result<Vec<bool>> {
        let n = self.worlds.len();
        Ok(match phi {
            Formula::Atom(a) => {
                let k = self
                    .atoms
                    .iter()
                    .position(|x| x == a)
                    .ok_or_else(|| Error::UnknownAtom(a.clone()))?;
                (0..n).map(|w| self.valuation[w][k]).collect()
            }
            Formula::Bot => vec![false; n],
            Formula::And(a, b) => {
                let (x, y) = (self.truth_set(a)?, self.truth_set(b)?);
                x.iter().zip(&y).map(|(p, q)| *p && *q).collect()
            }
            Formula::Or(a, b) => {
                let (x, y) = (self.truth_set(a)?, self.truth_set(b)?);
                x.iter().zip(&y).map(|(p, q)| *p || *q).collect()
            }
            Formula::Imp(a, b) => {
                let (x, y) = (self.truth_set(a)?, self.truth_set(b)?);
                (0..n)
                    .map(|w| (0..n).all(|v| !self.worlds.leq(w, v) || !x[v] || y[v]))
                    .collect()
            }
        })
    }

    pub fn forces(&self, w: usize, phi: &Formula) -> Result<bool> {
        if w >= self.worlds.len() {
            return Err(Error::UnknownWorld(w));
        }
        Ok(self.truth_set(phi)?[w])
    }
}

/// World list, strict order pairs, then one valuation line per world.
impl fmt::Display for KripkeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.worlds.len();
        let worlds: Vec<String> = (0..n).map(|w| w.to_string()).collect();
        writeln!(f, "worlds: {}", worlds.join(" "))?;
        let pairs: Vec<String> = self
            .worlds
            .strict_pairs()
            .iter()
            .map(|(a, b)| format!("{a}<{b}"))
            .collect();
        writeln!(f, "order: {}", pairs.join(" "))?;
        writeln!(f, "valuation:")?;
        for w in 0..n {
            let true_atoms: Vec<&str> = self
                .atoms
                .iter()
                .zip(&self.valuation[w])
                .filter(|(_, v)| **v)
                .map(|(a, _)| a.as_str())
                .collect();
            writeln!(f, "  {w}: {}", true_atoms.join(" "))?;
        }
        Ok(())
    }
}

/// Upper-triangle code of a naturally labelled order: `'0'` where `i ≤ j`.
fn code(leq: &dyn Fn(usize, usize) -> bool, n: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push(if leq(i, j) { b'0' } else { b'1' });
        }
    }
    out
}

/// Least code over every natural relabelling (linear extension) of `p`.
fn canonical_code(p: &Poset) -> Vec<u8> {
    fn extend(p: &Poset, ext: &mut Vec<usize>, used: &mut Vec<bool>, best: &mut Option<Vec<u8>>) {
        let n = p.len();
        if ext.len() == n {
            let c = code(&|a, b| p.leq(ext[a], ext[b]), n);
            if best.as_ref().is_none_or(|b| c < *b) {
                *best = Some(c);
            }
            return;
        }
        for x in 0..n {
            let ready = !used[x] && (0..n).all(|y| y == x || !p.leq(y, x) || used[y]);
            if ready {
                used[x] = true;
                ext.push(x);
                extend(p, ext, used, best);
                ext.pop();
                used[x] = false;
            }
        }
    }
    let mut best = None;
    extend(p, &mut Vec::new(), &mut vec![false; p.len()], &mut best);
    best.expect("every finite poset has a linear extension")
}

/// Every poset on `n` worlds with a least element, once per isomorphism
/// class, labelled so that its code is minimal; sorted by that code.
pub fn rooted_posets(n: usize) -> Vec<Poset> {
    if n == 0 {
        return Vec::new();
    }
    let free: Vec<(usize, usize)> = (1..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut found: Vec<(Vec<u8>, Poset)> = Vec::new();
    for mask in 0u64..(1u64 << free.len()) {
        let mut pairs: Vec<(usize, usize)> = (1..n).map(|j| (0, j)).collect();
        pairs.extend(
            free.iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &p)| p),
        );
        let Ok(p) = Poset::from_pairs(n, &pairs) else {
            continue; // not transitive
        };
        let own = code(&|a, b| p.leq(a, b), n);
        if own == canonical_code(&p) {
            found.push((own, p));
        }
    }
    found.sort_by(|a, b| a.0.cmp(&b.0));
    found.into_iter().map(|(_, p)| p).collect()
}

/// Up-sets of `p` as world bitmasks, ascending.
fn up_sets(p: &Poset) -> Vec<u64> {
    let n = p.len();
    (0u64..1 << n)
        .filter(|&s| {
            p.strict_pairs()
                .iter()
                .all(|&(a, b)| s >> a & 1 == 0 || s >> b & 1 == 1)
        })
        .collect()
}

/// First model, by number of worlds, then poset code, then valuation (atoms
/// sorted, each atom's up-set ascending as a bitmask, first atom slowest),
/// whose root does not force `phi`.
pub fn countermodel_search(phi: &Formula, max_worlds: usize) -> Option<KripkeModel> {
    let atoms = phi.atoms();
    for n in 1..=max_worlds {
        for p in rooted_posets(n) {
            let ups = up_sets(&p);
            let mut digits = vec![0usize; atoms.len()];
            loop {
                let valuation: Vec<Vec<bool>> = (0..n)
                    .map(|w| digits.iter().map(|&d| ups[d] >> w & 1 == 1).collect())
                    .collect();
                let m = KripkeModel::new(p.clone(), atoms.clone(), valuation).expect("up-sets are monotone");
                if !m.forces(m.root(), phi).expect("atoms come from phi") {
                    return Some(m);
                }
                let mut k = atoms.len();
                loop {
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                    digits[k] += 1;
                    if digits[k] < ups.len() {
                        break;
                    }
                    digits[k] = 0;
                }
                if digits.iter().all(|&d| d == 0) {
                    break;
                }
            }
        }
    }
    None
}

fn eval(phi: &Formula, atoms: &[String], bits: u64) -> bool {
    match phi {
        Formula::Atom(a) => {
            let k = atoms.iter().position(|x| x == a).expect("atom listed");
            bits >> k & 1 == 1
        }
        Formula::Bot => false,
        Formula::And(a, b) => eval(a, atoms, bits) && eval(b, atoms, bits),
        Formula::Or(a, b) => eval(a, atoms, bits) || eval(b, atoms, bits),
        Formula::Imp(a, b) => !eval(a, atoms, bits) || eval(b, atoms, bits),
    }
}

/// Truth-table check over every assignment to the atoms of `phi`.
pub fn classical_tautology(phi: &Formula) -> bool {
    let atoms = phi.atoms();
    (0u64..1 << atoms.len()).all(|bits| eval(phi, &atoms, bits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn two_chain_refutes_excluded_middle() {
        let m = KripkeModel::from_true_sets(Poset::chain(2), &[("Q", &[1])]).unwrap();
        assert!(!m.forces(0, &f("Q | ~Q")).unwrap());
        assert!(m.forces(1, &f("Q")).unwrap());
        assert!(matches!(m.forces(2, &f("Q")), Err(Error::UnknownWorld(2))));
        assert!(matches!(m.forces(0, &f("R")), Err(Error::UnknownAtom(_))));
    }

    #[test]
    fn three_chain_refutes_the_disjunction() {
        let m = KripkeModel::from_true_sets(Poset::chain(3), &[("P", &[1, 2]), ("Q", &[2])]).unwrap();
        assert!(!m.forces(0, &f("P | (P -> (Q | ~Q))")).unwrap());
        assert!(!m.forces(1, &f("Q | ~Q")).unwrap());
    }

    #[test]
    fn non_monotone_valuation_rejected() {
        assert!(KripkeModel::from_true_sets(Poset::chain(2), &[("Q", &[0])]).is_err());
    }

    #[test]
    fn poset_counts() {
        // rooted posets on n points = posets on n-1 points: 1, 1, 2, 5, 16
        let counts: Vec<usize> = (1..=5).map(|n| rooted_posets(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 16]);
        let three = rooted_posets(3);
        assert!(three[0].is_chain());
        assert_eq!(three[1], Poset::vee());
    }

    #[test]
    fn searches() {
        let em = countermodel_search(&f("Q | ~Q"), 2).unwrap();
        assert_eq!(em, KripkeModel::from_true_sets(Poset::chain(2), &[("Q", &[1])]).unwrap());
        let phi = f("P | (P -> (Q | ~Q))");
        assert_eq!(countermodel_search(&phi, 2), None);
        let m = countermodel_search(&phi, 3).unwrap();
        assert_eq!(
            m,
            KripkeModel::from_true_sets(Poset::chain(3), &[("P", &[1, 2]), ("Q", &[2])]).unwrap()
        );
        assert_eq!(countermodel_search(&f("P -> P"), 3), None);
        assert_eq!(
            m.to_string(),
            "worlds: 0 1 2\norder: 0<1 0<2 1<2\nvaluation:\n  0: \n  1: P\n  2: P Q\n"
        );
    }

    #[test]
    fn truth_tables() {
        assert!(classical_tautology(&f("P | (P -> (Q | ~Q))")));
        assert!(classical_tautology(&f("Q | ~Q")));
        assert!(!classical_tautology(&f("P & ~P")));
        assert!(classical_tautology(&f("((P -> Q) -> P) -> P")));
    }
}

//! Diagrams of lattices over a finite poset with a least element, where every
//! structure map is an inclusion inside one ambient `Z^n`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::cancellation;
use crate::error::{Error, Result};
use crate::lattice::{kernel_of_functional, parse_ambient, AmbientFunctional, Lattice};
use crate::matrix::{self, IntMatrix};

/// Finite poset on `0..n` with a least element.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    leq: Vec<Vec<bool>>,
}

impl Poset {
    /// Builds the reflexive closure of `pairs` (each `(a, b)` meaning `a ≤ b`)
    /// and validates antisymmetry, transitivity and a least element.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::Poset(format!("pair ({a}, {b}) out of range 0..{n}")));
            }
            leq[a][b] = true;
        }
        let p = Poset { leq };
        p.validate()?;
        Ok(p)
    }

    /// `0 < 1 < ... < n-1`
    pub fn chain(n: usize) -> Self {
        Poset {
            leq: (0..n).map(|i| (0..n).map(|j| i <= j).collect()).collect(),
        }
    }

    /// Least node `0` below two incomparable nodes `1` and `2`.
    pub fn vee() -> Self {
        Poset::from_pairs(3, &[(0, 1), (0, 2)]).expect("valid poset")
    }

    fn validate(&self) -> Result<()> {
        let n = self.len();
        if n == 0 {
            return Err(Error::Poset("empty poset".into()));
        }
        for a in 0..n {
            for b in 0..n {
                if a != b && self.leq[a][b] && self.leq[b][a] {
                    return Err(Error::Poset(format!("{a} and {b} are mutually below each other")));
                }
                for c in 0..n {
                    if self.leq[a][b] && self.leq[b][c] && !self.leq[a][c] {
                        return Err(Error::Poset(format!("{a} ≤ {b} ≤ {c} but not {a} ≤ {c}")));
                    }
                }
            }
        }
        if self.least().is_none() {
            return Err(Error::Poset("no least element".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.leq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leq.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn least(&self) -> Option<usize> {
        (0..self.len()).find(|&a| (0..self.len()).all(|b| self.leq[a][b]))
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&a| (0..self.len()).all(|b| b == a || !self.leq[a][b]))
            .collect()
    }

    pub fn is_chain(&self) -> bool {
        (0..self.len()).all(|a| (0..self.len()).all(|b| self.leq[a][b] || self.leq[b][a]))
    }

    /// Strict pairs `a < b`, in row-major order.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| a != b && self.leq[a][b])
            .collect()
    }

    /// Pairs `a ≤ b` including `a = b`, in row-major order.
    pub fn order_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| self.leq[a][b])
            .collect()
    }
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poset{{{}; {:?}}}", self.len(), self.strict_pairs())
    }
}

/// One lattice per poset node, with `i ≤ j ⇒ node i ⊆ node j`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct InclusionDiagram {
    poset: Poset,
    ambient_dim: usize,
    nodes: Vec<Lattice>,
}

impl InclusionDiagram {
    /// Validates every inclusion; a failure names the first generator of the
    /// lower node (in basis order) missing from the upper node.
    pub fn new(poset: Poset, ambient_dim: usize, nodes: Vec<Lattice>) -> Result<Self> {
        if nodes.len() != poset.len() {
            return Err(Error::Dimension {
                expected: poset.len(),
                found: nodes.len(),
            });
        }
        for node in &nodes {
            if node.ambient_dim() != ambient_dim {
                return Err(Error::Dimension {
                    expected: ambient_dim,
                    found: node.ambient_dim(),
                });
            }
        }
        for (lower, upper) in poset.strict_pairs() {
            if let Some(generator) = nodes[upper].first_missing(&nodes[lower])? {
                return Err(Error::Inclusion {
                    lower,
                    upper,
                    generator,
                });
            }
        }
        Ok(InclusionDiagram {
            poset,
            ambient_dim,
            nodes,
        })
    }

    /// The constant diagram `Z` on `poset`: every node is `Z^1`.
    pub fn constant_z(poset: Poset) -> Self {
        let nodes = vec![Lattice::full(1); poset.len()];
        InclusionDiagram {
            poset,
            ambient_dim: 1,
            nodes,
        }
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn nodes(&self) -> &[Lattice] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &Lattice {
        &self.nodes[i]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Applies `x ↦ x · g` to every node.
    pub fn transformed(&self, g: &IntMatrix) -> Result<Self> {
        let nodes = self
            .nodes
            .iter()
            .map(|l| l.image(g))
            .collect::<Result<Vec<_>>>()?;
        InclusionDiagram::new(self.poset.clone(), g.cols(), nodes)
    }

    /// `D ⊕ Z` realized in `Z^{n+1}`: each node becomes `node ⊕ Z·e_{n+1}`.
    pub fn with_constant_summand(&self) -> Self {
        let n = self.ambient_dim;
        let mut last = vec![BigInt::from(0); n + 1];
        last[n] = BigInt::one();
        let nodes = self
            .nodes
            .iter()
            .map(|l| {
                let mut gens = IntMatrix::zeros(0, n + 1);
                for row in l.basis().row_iter() {
                    let mut r = row.to_vec();
                    r.push(BigInt::from(0));
                    gens.push_row(&r).expect("width n+1");
                }
                gens.push_row(&last).expect("width n+1");
                Lattice::from_generators(n + 1, &gens).expect("width n+1")
            })
            .collect();
        InclusionDiagram {
            poset: self.poset.clone(),
            ambient_dim: n + 1,
            nodes,
        }
    }

    /// Chain file text.
    pub fn to_chain_text(&self) -> String {
        let mut s = format!("ambient {}\nnodes {}\n", self.ambient_dim, self.len());
        for (i, node) in self.nodes.iter().enumerate() {
            s.push_str(&format!("node {i}\n"));
            for row in node.basis().row_iter() {
                s.push_str(&matrix::join_ints(row));
                s.push('\n');
            }
        }
        s
    }
}

impl fmt::Debug for InclusionDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InclusionDiagram")
            .field("poset", &self.poset)
            .field("ambient_dim", &self.ambient_dim)
            .field("nodes", &self.nodes)
            .finish()
    }
}

impl fmt::Display for InclusionDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, node) in self.nodes.iter().enumerate() {
            if i > 0 {
                write!(f, " ; ")?;
            }
            write!(f, "{i}: {node}")?;
        }
        Ok(())
    }
}

/// Parses a chain file: `ambient n`, `nodes k`, then `node i` blocks of
/// generator rows in ascending node order.
pub fn parse_chain(text: &str) -> Result<InclusionDiagram> {
    let mut lines = matrix::content_lines(text).peekable();
    let (line_no, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        message: "missing `ambient n` line".into(),
    })?;
    let n = parse_ambient(line_no, header)?;
    let (line_no, count) = lines.next().ok_or(Error::Parse {
        line: line_no,
        message: "missing `nodes k` line".into(),
    })?;
    let k = keyword_count(line_no, count, "nodes")?;
    if k == 0 {
        return Err(Error::Parse {
            line: line_no,
            message: "a chain needs at least one node".into(),
        });
    }
    let mut raw: Vec<IntMatrix> = Vec::with_capacity(k);
    let mut lattices = Vec::with_capacity(k);
    for expected in 0..k {
        let (line_no, head) = lines.next().ok_or(Error::Parse {
            line: line_no,
            message: format!("missing `node {expected}`"),
        })?;
        let idx = keyword_count(line_no, head, "node")?;
        if idx != expected {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected `node {expected}`, found `node {idx}`"),
            });
        }
        let mut gens = IntMatrix::zeros(0, n);
        while let Some(&(line_no, line)) = lines.peek() {
            if line.starts_with("node") {
                break;
            }
            lines.next();
            let row = matrix::parse_ints(line_no, line)?;
            gens.push_row(&row).map_err(|_| Error::Parse {
                line: line_no,
                message: format!("expected {n} entries, found {}", row.len()),
            })?;
        }
        lattices.push(Lattice::from_generators(n, &gens)?);
        raw.push(gens);
    }
    // report offenders as written in the file, not in canonical form
    for i in 1..k {
        for row in raw[i - 1].row_iter() {
            if !lattices[i].member(row)? {
                return Err(Error::Inclusion {
                    lower: i - 1,
                    upper: i,
                    generator: row.to_vec(),
                });
            }
        }
    }
    build_chain_diagram(n, lattices)
}

fn keyword_count(line_no: usize, line: &str, keyword: &str) -> Result<usize> {
    let mut toks = line.split_whitespace();
    match (toks.next(), toks.next(), toks.next()) {
        (Some(kw), Some(v), None) if kw == keyword => v.parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("bad count {v:?}"),
        }),
        _ => Err(Error::Parse {
            line: line_no,
            message: format!("expected `{keyword} <number>`"),
        }),
    }
}

/// Chain `0 < 1 < ... < k` with the given node lattices.
pub fn build_chain_diagram(ambient_dim: usize, lattices: Vec<Lattice>) -> Result<InclusionDiagram> {
    if lattices.is_empty() {
        return Err(Error::Invalid("a chain needs at least one lattice".into()));
    }
    InclusionDiagram::new(Poset::chain(lattices.len()), ambient_dim, lattices)
}

/// Node-wise map between two diagrams over the same poset. Each node map is an
/// ambient matrix acting on row vectors, `x ↦ x · M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramHom {
    pub source: InclusionDiagram,
    pub target: InclusionDiagram,
    pub node_maps: Vec<IntMatrix>,
}

impl DiagramHom {
    /// Every node uses the same ambient matrix.
    pub fn from_ambient(source: InclusionDiagram, target: InclusionDiagram, m: IntMatrix) -> Self {
        let node_maps = vec![m; source.len()];
        DiagramHom {
            source,
            target,
            node_maps,
        }
    }
}

/// `d → Z` (constant diagram) with `f` at every node.
pub fn induced_hom_to_constant(d: &InclusionDiagram, f: &AmbientFunctional) -> Result<DiagramHom> {
    if f.dim() != d.ambient_dim() {
        return Err(Error::Dimension {
            expected: d.ambient_dim(),
            found: f.dim(),
        });
    }
    Ok(DiagramHom::from_ambient(
        d.clone(),
        InclusionDiagram::constant_z(d.poset().clone()),
        f.as_column(),
    ))
}

/// Node-wise kernels of `f`.
pub fn kernel_chain(d: &InclusionDiagram, f: &AmbientFunctional) -> Result<InclusionDiagram> {
    let nodes = d
        .nodes()
        .iter()
        .map(|l| kernel_of_functional(l, f))
        .collect::<Result<Vec<_>>>()?;
    InclusionDiagram::new(d.poset().clone(), d.ambient_dim(), nodes)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeCheck {
    pub node: usize,
    pub maps_into_target: bool,
    pub commutes: bool,
    /// Only filled in when an isomorphism was requested.
    pub bijective: Option<bool>,
    /// First violation at this node, naming the offending generator.
    pub detail: Option<String>,
}

impl NodeCheck {
    pub fn ok(&self) -> bool {
        self.maps_into_target && self.commutes && self.bijective.unwrap_or(true)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomReport {
    pub nodes: Vec<NodeCheck>,
}

impl HomReport {
    pub fn ok(&self) -> bool {
        self.nodes.iter().all(NodeCheck::ok)
    }

    pub fn first_failure(&self) -> Option<&NodeCheck> {
        self.nodes.iter().find(|n| !n.ok())
    }
}

fn shape_problem(h: &DiagramHom) -> Option<String> {
    if h.source.poset() != h.target.poset() {
        return Some("source and target posets differ".into());
    }
    if h.node_maps.len() != h.source.len() {
        return Some(format!(
            "{} node maps for {} nodes",
            h.node_maps.len(),
            h.source.len()
        ));
    }
    h.node_maps.iter().enumerate().find_map(|(i, m)| {
        (m.rows() != h.source.ambient_dim() || m.cols() != h.target.ambient_dim()).then(|| {
            format!(
                "node {i} map is {}x{}, expected {}x{}",
                m.rows(),
                m.cols(),
                h.source.ambient_dim(),
                h.target.ambient_dim()
            )
        })
    })
}

/// Checks containment and commuting squares at every node and, when
/// `require_iso`, that each node map is a bijection onto the target node.
/// Violations are reported, never raised.
pub fn verify_chain_hom(h: &DiagramHom, require_iso: bool) -> HomReport {
    if let Some(problem) = shape_problem(h) {
        return HomReport {
            nodes: vec![NodeCheck {
                node: 0,
                maps_into_target: false,
                commutes: false,
                bijective: require_iso.then_some(false),
                detail: Some(problem),
            }],
        };
    }
    let poset = h.source.poset();
    let nodes = (0..h.source.len())
        .map(|i| check_node(h, poset, i, require_iso))
        .collect();
    HomReport { nodes }
}

fn check_node(h: &DiagramHom, poset: &Poset, i: usize, require_iso: bool) -> NodeCheck {
    let src = h.source.node(i);
    let tgt = h.target.node(i);
    let map = &h.node_maps[i];
    let mut check = NodeCheck {
        node: i,
        maps_into_target: true,
        commutes: true,
        bijective: None,
        detail: None,
    };
    let images: Vec<Vec<BigInt>> = src
        .basis()
        .row_iter()
        .map(|b| map.apply_left(b).expect("shape checked"))
        .collect();
    for (b, img) in src.basis().row_iter().zip(&images) {
        if !tgt.member(img).expect("shape checked") {
            check.maps_into_target = false;
            check.detail = Some(format!(
                "{} maps to {} outside the target node",
                matrix::fmt_vector(b),
                matrix::fmt_vector(img)
            ));
            break;
        }
    }
    'outer: for j in 0..h.source.len() {
        if j == i || !poset.leq(i, j) {
            continue;
        }
        for (b, img) in src.basis().row_iter().zip(&images) {
            let upper = h.node_maps[j].apply_left(b).expect("shape checked");
            if &upper != img {
                check.commutes = false;
                check.detail.get_or_insert_with(|| {
                    format!(
                        "{} goes to {} at node {i} but {} at node {j}",
                        matrix::fmt_vector(b),
                        matrix::fmt_vector(img),
                        matrix::fmt_vector(&upper)
                    )
                });
                break 'outer;
            }
        }
    }
    if require_iso {
        let bijective = check.maps_into_target && node_map_is_bijective(src, tgt, &images);
        if !bijective && check.detail.is_none() {
            check.detail = Some(format!("node {i} map is not onto {tgt}"));
        }
        check.bijective = Some(bijective);
    }
    check
}

/// The images of `src`'s basis, written in `tgt`'s basis, form a unimodular matrix.
fn node_map_is_bijective(src: &Lattice, tgt: &Lattice, images: &[Vec<BigInt>]) -> bool {
    if src.rank() != tgt.rank() {
        return false;
    }
    let mut coords = IntMatrix::zeros(0, tgt.rank());
    for img in images {
        match tgt.coords(img) {
            Ok(Some(c)) => coords.push_row(&c).expect("rank width"),
            _ => return false,
        }
    }
    coords.det().map(|d| d.abs().is_one()).unwrap_or(false)
}

/// `z` spans the copy of `Z` and `functional(z) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitSection {
    pub z: Vec<BigInt>,
    pub functional: AmbientFunctional,
}

impl SplitSection {
    pub fn new(z: Vec<BigInt>, functional: AmbientFunctional) -> Result<Self> {
        let value = functional.eval(&z)?;
        if !value.is_one() {
            return Err(Error::Invalid(format!(
                "section {} has functional value {value}, expected 1",
                matrix::fmt_vector(&z)
            )));
        }
        Ok(SplitSection { z, functional })
    }
}

/// Rebuilds the ambient diagram `d ⊕ Z·z` node by node, and checks that each
/// node sum is direct with `d` recovered as the kernel of the section's
/// functional.
pub fn direct_sum_with_constant(d: &InclusionDiagram, s: &SplitSection) -> Result<InclusionDiagram> {
    if s.z.len() != d.ambient_dim() {
        return Err(Error::Dimension {
            expected: d.ambient_dim(),
            found: s.z.len(),
        });
    }
    let mut nodes = Vec::with_capacity(d.len());
    for (i, k) in d.nodes().iter().enumerate() {
        let sum = k.add_vector(&s.z)?;
        if let Some(reason) = cancellation::split_failure(&sum, k, &s.z, Some(&s.functional))? {
            return Err(Error::NotDirect { node: i, reason });
        }
        nodes.push(sum);
    }
    InclusionDiagram::new(d.poset().clone(), d.ambient_dim(), nodes)
}

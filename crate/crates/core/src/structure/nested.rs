use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cuts::{crosses, is_tight, Cut};
use crate::error::{Error, Result};
use crate::graphcore::{EdgeId, Graph, UnionFind, VertexId, Window};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    /// Empty or full side: axiom (3) fails for it.
    Improper,
    NotTight,
    /// Axiom (1): the two cuts cross.
    Crossing,
    ForeignHost,
}

/// First reason a cut family is not a valid nested system. Indices refer
/// to the input list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub first: usize,
    pub second: Option<usize>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.kind, self.second) {
            (ViolationKind::Crossing, Some(j)) => write!(f, "cuts {} and {j} cross", self.first),
            (ViolationKind::Improper, _) => write!(f, "cut {} has an empty side", self.first),
            (ViolationKind::NotTight, _) => write!(f, "cut {} is not tight", self.first),
            _ => write!(f, "cut {} belongs to another window", self.first),
        }
    }
}

/// Packed vertex set for fast inclusion tests.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Bits(Vec<u64>);

impl Bits {
    pub(crate) fn from_mask(mask: &[bool]) -> Self {
        let mut words = vec![0u64; mask.len().div_ceil(64)];
        for (i, &m) in mask.iter().enumerate() {
            if m {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        Bits(words)
    }

    pub(crate) fn subset_of(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

/// Nested family of tight cuts closed under complement. Cuts are stored in
/// canonical order (sorted side names) with their partner index.
#[derive(Clone, Debug)]
pub struct NestedSystem {
    cuts: Vec<Cut>,
    partner: Vec<usize>,
    bits: Vec<Bits>,
}

/// Check and close a cut family: sides must be proper, tight and pairwise
/// nested. Missing complements are added and duplicates dropped.
pub fn validate_nested(w: &Window, cuts: &[Cut]) -> std::result::Result<NestedSystem, Violation> {
    let g = w.graph();
    let host = g.fingerprint();
    for (i, c) in cuts.iter().enumerate() {
        let v = |kind| Violation {
            kind,
            first: i,
            second: None,
        };
        if c.host() != host || c.mask().len() != g.vertex_count() {
            return Err(v(ViolationKind::ForeignHost));
        }
        if c.is_empty() || c.is_full() {
            return Err(v(ViolationKind::Improper));
        }
        if !is_tight(w, c) {
            return Err(v(ViolationKind::NotTight));
        }
    }
    for i in 0..cuts.len() {
        for j in i + 1..cuts.len() {
            if crosses(&cuts[i], &cuts[j]).unwrap_or(true) {
                return Err(Violation {
                    kind: ViolationKind::Crossing,
                    first: i,
                    second: Some(j),
                });
            }
        }
    }
    let mut by_side: BTreeMap<Vec<String>, Cut> = BTreeMap::new();
    for c in cuts {
        for x in [c.clone(), c.complement(w)] {
            by_side.entry(x.names(g)).or_insert(x);
        }
    }
    let cuts: Vec<Cut> = by_side.into_values().collect();
    Ok(NestedSystem::assemble(cuts))
}

impl NestedSystem {
    fn assemble(cuts: Vec<Cut>) -> Self {
        let bits: Vec<Bits> = cuts.iter().map(|c| Bits::from_mask(c.mask())).collect();
        let partner = (0..cuts.len())
            .map(|i| {
                (0..cuts.len())
                    .find(|&j| cuts[j].mask().iter().zip(cuts[i].mask()).all(|(a, b)| a != b))
                    .expect("closed under complement")
            })
            .collect();
        NestedSystem { cuts, partner, bits }
    }

    pub fn empty() -> Self {
        NestedSystem {
            cuts: Vec::new(),
            partner: Vec::new(),
            bits: Vec::new(),
        }
    }

    pub fn cuts(&self) -> &[Cut] {
        &self.cuts
    }

    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }

    /// Index of the complement of cut `i`.
    pub fn partner(&self, i: usize) -> usize {
        self.partner[i]
    }

    /// A ≤ B: side inclusion.
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.bits[a].subset_of(&self.bits[b])
    }

    /// A ≪ B: A < B with nothing strictly between.
    pub fn covered_by(&self, a: usize, b: usize) -> bool {
        a != b
            && self.le(a, b)
            && !(0..self.len()).any(|c| c != a && c != b && self.le(a, c) && self.le(c, b))
    }

    fn check_host(&self, w: &Window) -> Result<()> {
        let host = w.graph().fingerprint();
        if self.cuts.iter().any(|c| c.host() != host) {
            return Err(Error::Argument("system belongs to another window".into()));
        }
        Ok(())
    }
}

/// Dunwoody's tree of a nested system: vertices are ∼-classes and cut `A`
/// is the directed edge from the class of A* to the class of A.
#[derive(Clone, Debug)]
pub struct StructureTree {
    system: NestedSystem,
    tree: Graph,
    head: Vec<VertexId>,
    edge: Vec<EdgeId>,
    into: Vec<Vec<usize>>,
}

pub fn structure_tree(sys: &NestedSystem) -> StructureTree {
    let n = sys.len();
    let mut uf = UnionFind::new(n);
    for a in 0..n {
        for b in 0..n {
            if sys.covered_by(a, sys.partner(b)) {
                uf.union(a, b);
            }
        }
    }
    // Classes numbered by their smallest member.
    let mut class_index: BTreeMap<usize, usize> = BTreeMap::new();
    let mut head = Vec::with_capacity(n);
    for a in 0..n {
        let root = uf.find(a);
        let next = class_index.len();
        head.push(VertexId(*class_index.entry(root).or_insert(next) as u32));
    }
    let classes = class_index.len().max(1);
    let mut tree = Graph::new();
    for i in 0..classes {
        tree.add_vertex(&format!("t{i}")).expect("fresh name");
    }
    let mut into = vec![Vec::new(); classes];
    let mut edge = vec![EdgeId(0); n];
    for a in 0..n {
        into[head[a].idx()].push(a);
        let b = sys.partner(a);
        if a < b {
            let e = tree
                .add_named_edge(&format!("c{a}"), head[b], head[a])
                .expect("distinct classes");
            edge[a] = e;
            edge[b] = e;
        }
    }
    StructureTree {
        system: sys.clone(),
        tree,
        head,
        edge,
        into,
    }
}

impl StructureTree {
    pub fn system(&self) -> &NestedSystem {
        &self.system
    }

    pub fn tree(&self) -> &Graph {
        &self.tree
    }

    pub fn head(&self, cut: usize) -> VertexId {
        self.head[cut]
    }

    pub fn tail(&self, cut: usize) -> VertexId {
        self.head[self.system.partner(cut)]
    }

    pub fn tree_edge(&self, cut: usize) -> EdgeId {
        self.edge[cut]
    }

    /// Cuts pointing into tree vertex `v`.
    pub fn into(&self, v: VertexId) -> &[usize] {
        &self.into[v.idx()]
    }

    /// The directed cut crossing tree edge `e` towards `v`.
    pub fn cut_towards(&self, e: EdgeId, v: VertexId) -> usize {
        let a = self.tree.edge_name(e)[1..].parse::<usize>().expect("edge name c<index>");
        if self.head[a] == v {
            a
        } else {
            self.system.partner(a)
        }
    }

    /// First pair (A, B) whose side order disagrees with the edge-path
    /// order of the tree, if any.
    pub fn order_mismatch(&self) -> Option<(usize, usize)> {
        let t = &self.tree;
        let n = self.system.len();
        // first[x][y] / last[x][y]: directed cuts starting and ending the
        // tree path from x to y.
        let k = t.vertex_count();
        let mut first = vec![vec![usize::MAX; k]; k];
        let mut last = vec![vec![usize::MAX; k]; k];
        for x in t.vertices() {
            let mut seen = vec![false; k];
            seen[x.idx()] = true;
            let mut queue = VecDeque::from([x]);
            while let Some(u) = queue.pop_front() {
                for &e in t.incident(u) {
                    let y = t.other(e, u);
                    if seen[y.idx()] {
                        continue;
                    }
                    seen[y.idx()] = true;
                    let c = self.cut_towards(e, y);
                    last[x.idx()][y.idx()] = c;
                    first[x.idx()][y.idx()] = if u == x { c } else { first[x.idx()][u.idx()] };
                    queue.push_back(y);
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let (s, h) = (self.tail(a).idx(), self.head(b).idx());
                let tree_le = a == b || (first[s][h] == a && last[s][h] == b);
                if tree_le != self.system.le(a, b) {
                    return Some((a, b));
                }
            }
        }
        None
    }
}

/// A system cut with one marker inside its side and the other outside.
pub fn separated_by_generated(w: &Window, sys: &NestedSystem, m1: usize, m2: usize) -> Result<Option<usize>> {
    sys.check_host(w)?;
    let a = w.terminal_vertices(crate::graphcore::Terminal::Marker(m1))?;
    let b = w.terminal_vertices(crate::graphcore::Terminal::Marker(m2))?;
    Ok((0..sys.len()).find(|&i| {
        let c = &sys.cuts()[i];
        a.iter().all(|&v| c.contains(v)) && b.iter().all(|&v| !c.contains(v))
    }))
}

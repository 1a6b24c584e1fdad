use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::connectivity::{end_cut_size_in, Mode};
use crate::cuts::{crosses, enumerate_all_tight_cuts, induces_connected, Budget, Cut};
use crate::error::{Error, Result};
use crate::graphcore::{
    bfs_from, component_labels, induced_subgraph, Graph, UnionFind, VertexId, Window, INF,
};
use crate::par::Exec;

use super::nested::{structure_tree, validate_nested, NestedSystem, StructureTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DecompKind {
    /// Parts padded by `m` layers so they are connected.
    Connected { m: u32 },
    /// Parts made of the separating edges only.
    Tight,
    /// Hand-made or corrupted decompositions.
    Given,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub tree: Graph,
    /// Bags indexed by tree vertex, sorted by vertex index.
    pub bags: Vec<Vec<VertexId>>,
    /// Region of each tree vertex before padding: the intersection of the
    /// b* sides. Equal to the bag for given decompositions.
    pub cores: Vec<Vec<VertexId>>,
    pub adhesion_bound: usize,
    pub kind: DecompKind,
}

impl TreeDecomposition {
    /// Assemble from parts; the adhesion bound is the largest adhesion set.
    pub fn new(tree: Graph, mut bags: Vec<Vec<VertexId>>, kind: DecompKind) -> Result<Self> {
        if bags.len() != tree.vertex_count() {
            return Err(Error::Argument("one bag per tree vertex required".into()));
        }
        for b in bags.iter_mut() {
            b.sort();
            b.dedup();
        }
        let adhesion_bound = tree
            .edges()
            .map(|e| {
                let [u, v] = tree.endpoints(e);
                intersect(&bags[u.idx()], &bags[v.idx()]).len()
            })
            .max()
            .unwrap_or(0);
        Ok(TreeDecomposition {
            tree,
            cores: bags.clone(),
            bags,
            adhesion_bound,
            kind,
        })
    }

    /// The single-bag decomposition.
    pub fn trivial(w: &Window) -> Self {
        let mut tree = Graph::new();
        tree.add_vertex("t0").expect("fresh");
        let all: Vec<VertexId> = w.graph().vertices().collect();
        TreeDecomposition {
            tree,
            bags: vec![all.clone()],
            cores: vec![all],
            adhesion_bound: 0,
            kind: DecompKind::Given,
        }
    }

    pub fn adhesion(&self, u: VertexId, v: VertexId) -> Vec<VertexId> {
        intersect(&self.bags[u.idx()], &self.bags[v.idx()])
    }
}

fn intersect(a: &[VertexId], b: &[VertexId]) -> Vec<VertexId> {
    let bs: BTreeSet<_> = b.iter().collect();
    a.iter().copied().filter(|v| bs.contains(v)).collect()
}

fn bags(w: &Window, st: &StructureTree, m: Option<u32>) -> (Vec<Vec<VertexId>>, Vec<Vec<VertexId>>) {
    let g = w.graph();
    let sys = st.system();
    st.tree()
        .vertices()
        .map(|t| {
            let into = st.into(t);
            let mut keep: Vec<bool> = vec![true; g.vertex_count()];
            for &b in into {
                let c = &sys.cuts()[b];
                for v in g.vertices() {
                    if c.contains(v) {
                        keep[v.idx()] = false;
                    }
                }
            }
            let core: Vec<VertexId> = g.vertices().filter(|v| keep[v.idx()]).collect();
            for &b in into {
                let c = &sys.cuts()[b];
                for v in c.coboundary_vertices(g) {
                    keep[v.idx()] = true;
                }
                if let Some(m) = m {
                    // R(m, b): vertices of b within m of b*.
                    let far: Vec<VertexId> = g.vertices().filter(|&v| !c.contains(v)).collect();
                    let d = bfs_from(g, &far, None);
                    for v in g.vertices() {
                        if c.contains(v) && d[v.idx()] <= m {
                            keep[v.idx()] = true;
                        }
                    }
                }
            }
            (g.vertices().filter(|v| keep[v.idx()]).collect(), core)
        })
        .unzip()
}

/// Decomposition along the structure tree with parts padded by `m`
/// layers. Fails naming the first disconnected part.
pub fn tree_decomp_connected(w: &Window, sys: &NestedSystem, m: u32) -> Result<TreeDecomposition> {
    if m == 0 {
        return Err(Error::Argument("m must be at least 1".into()));
    }
    if sys.is_empty() {
        let mut td = TreeDecomposition::trivial(w);
        td.kind = DecompKind::Connected { m };
        return Ok(td);
    }
    let st = structure_tree(sys);
    let (bags, cores) = bags(w, &st, Some(m));
    let g = w.graph();
    for (i, b) in bags.iter().enumerate() {
        if !induces_connected(g, &g.vertex_mask(b.iter().copied())) {
            return Err(Error::Precondition(format!(
                "part t{i} is disconnected at m = {m}; raise m"
            )));
        }
    }
    let mut td = TreeDecomposition::new(st.tree().clone(), bags, DecompKind::Connected { m })?;
    td.cores = cores;
    Ok(td)
}

/// Smallest `m` in `1..=max_m` giving connected parts.
pub fn tree_decomp_connected_auto(w: &Window, sys: &NestedSystem, max_m: u32) -> Result<TreeDecomposition> {
    for m in 1..=max_m {
        match tree_decomp_connected(w, sys, m) {
            Err(Error::Precondition(_)) => continue,
            other => return other,
        }
    }
    Err(Error::Infeasible(format!("no m <= {max_m} connects every part")))
}

/// Decomposition whose parts are the regions between cuts plus the ends
/// of their coboundary edges.
pub fn tree_decomp_tight(w: &Window, sys: &NestedSystem) -> Result<TreeDecomposition> {
    if sys.is_empty() {
        let mut td = TreeDecomposition::trivial(w);
        td.kind = DecompKind::Tight;
        return Ok(td);
    }
    let st = structure_tree(sys);
    let (bags, cores) = bags(w, &st, None);
    let mut td = TreeDecomposition::new(st.tree().clone(), bags, DecompKind::Tight)?;
    td.cores = cores;
    Ok(td)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Informational checks do not affect [`VerifyReport::passed`].
    pub required: bool,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub radius: u32,
    pub adhesion: usize,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || !c.required)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.required && !c.passed).collect()
    }
}

struct Checker {
    checks: Vec<Check>,
}

impl Checker {
    fn push(&mut self, name: &str, required: bool, failure: Option<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            passed: failure.is_none(),
            required,
            detail: failure,
        });
    }
}

/// Tree vertices on the `u` side of tree edge (u, v).
fn side_of(tree: &Graph, u: VertexId, v: VertexId) -> Vec<bool> {
    let mut block = vec![false; tree.vertex_count()];
    block[v.idx()] = true;
    let d = bfs_from(tree, &[u], Some(&block));
    d.iter().map(|&x| x != INF).collect()
}

pub fn verify_tree_decomposition(w: &Window, td: &TreeDecomposition) -> Result<VerifyReport> {
    let g = w.graph();
    let t = &td.tree;
    let n = g.vertex_count();
    if td.bags.iter().flatten().any(|v| v.idx() >= n) {
        return Err(Error::Argument("bag vertex outside the window".into()));
    }
    let mut ck = Checker { checks: Vec::new() };
    let tree_ok = t.vertex_count() > 0
        && t.edge_count() + 1 == t.vertex_count()
        && crate::graphcore::is_connected(t);
    ck.push("tree", true, (!tree_ok).then(|| "decomposition graph is not a tree".to_string()));
    if !tree_ok {
        return Ok(VerifyReport {
            radius: w.radius(),
            adhesion: td.adhesion_bound,
            checks: ck.checks,
        });
    }

    let mut holders: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    for tv in t.vertices() {
        for &v in &td.bags[tv.idx()] {
            holders[v.idx()].push(tv);
        }
    }
    let masks: Vec<Vec<bool>> = td.bags.iter().map(|b| g.vertex_mask(b.iter().copied())).collect();

    let uncovered_v = g.vertices().find(|v| holders[v.idx()].is_empty());
    let uncovered_e = g.edges().find(|&e| {
        let [a, b] = g.endpoints(e);
        !masks.iter().any(|m| m[a.idx()] && m[b.idx()])
    });
    ck.push(
        "cover",
        true,
        match (uncovered_v, uncovered_e) {
            (Some(v), _) => Some(format!("vertex `{}` is in no bag", g.name(v))),
            (None, Some(e)) => Some(format!("edge `{}` is in no bag", g.edge_name(e))),
            _ => None,
        },
    );

    let broken = g.vertices().find(|v| {
        let hs = &holders[v.idx()];
        if hs.len() <= 1 {
            return false;
        }
        let mut outside = vec![true; t.vertex_count()];
        for h in hs {
            outside[h.idx()] = false;
        }
        let d = bfs_from(t, &[hs[0]], Some(&outside));
        hs.iter().any(|h| d[h.idx()] == INF)
    });
    ck.push(
        "path-condition",
        true,
        broken.map(|v| format!("bags holding `{}` do not form a subtree", g.name(v))),
    );

    let worst = t
        .edges()
        .map(|e| {
            let [u, v] = t.endpoints(e);
            td.adhesion(u, v).len()
        })
        .max()
        .unwrap_or(0);
    ck.push(
        "adhesion",
        true,
        (worst > td.adhesion_bound).then(|| format!("adhesion {worst} exceeds bound {}", td.adhesion_bound)),
    );

    // Separation, tightness in edge form and in the strict vertex form.
    let mut sep_fail = None;
    let mut tight_fail = None;
    let mut strict_fail = None;
    let mut degenerate = None;
    for e in t.edges() {
        let [u, v] = t.endpoints(e);
        let tside = side_of(t, u, v);
        let mut in_y = vec![false; n];
        let mut in_z = vec![false; n];
        for tv in t.vertices() {
            for &x in &td.bags[tv.idx()] {
                if tside[tv.idx()] {
                    in_y[x.idx()] = true;
                } else {
                    in_z[x.idx()] = true;
                }
            }
        }
        let s: Vec<VertexId> = g.vertices().filter(|x| in_y[x.idx()] && in_z[x.idx()]).collect();
        let crossing = g.edges().find(|&f| {
            let [a, b] = g.endpoints(f);
            let only_y = |x: VertexId| in_y[x.idx()] && !in_z[x.idx()];
            let only_z = |x: VertexId| in_z[x.idx()] && !in_y[x.idx()];
            (only_y(a) && only_z(b)) || (only_y(b) && only_z(a))
        });
        if sep_fail.is_none() {
            if let Some(f) = crossing {
                sep_fail = Some(format!("edge `{}` jumps across tree edge `{}`", g.edge_name(f), t.edge_name(e)));
            }
        }
        if s.is_empty() {
            continue;
        }
        let removed = g.vertex_mask(s.iter().copied());
        let labels = component_labels(g, &removed, &vec![false; g.edge_count()]);
        // Components of X - S, split by the side they live on.
        let mut touch: BTreeMap<usize, BTreeSet<VertexId>> = BTreeMap::new();
        let mut comp_side: BTreeMap<usize, bool> = BTreeMap::new();
        for x in g.vertices() {
            if let Some(l) = labels[x.idx()] {
                comp_side.insert(l, in_y[x.idx()]);
            }
        }
        for &x in &s {
            for y in g.neighbors(x) {
                if let Some(l) = labels[y.idx()] {
                    touch.entry(l).or_default().insert(x);
                }
            }
        }
        let ys: Vec<usize> = touch.keys().copied().filter(|l| comp_side[l]).collect();
        let zs: Vec<usize> = touch.keys().copied().filter(|l| !comp_side[l]).collect();
        // A side lying wholly inside S (a part made only of cut ends) has
        // no component to be tight against.
        let empty_side = [true, false].into_iter().any(|side| {
            !g.vertices().any(|x| labels[x.idx()].is_some() && comp_side[&labels[x.idx()].unwrap()] == side)
        });
        if empty_side {
            degenerate.get_or_insert_with(|| format!("tree edge `{}` has an empty side", t.edge_name(e)));
            continue;
        }
        let edge_form = ys.iter().any(|cy| {
            zs.iter().any(|cz| {
                s.iter().all(|x| touch[cy].contains(x) || touch[cz].contains(x))
            })
        });
        let strict = ys.iter().any(|cy| {
            zs.iter().any(|cz| s.iter().all(|x| touch[cy].contains(x) && touch[cz].contains(x)))
        });
        if !edge_form && tight_fail.is_none() {
            tight_fail = Some(format!("separator at tree edge `{}` is not tight", t.edge_name(e)));
        }
        if !strict && strict_fail.is_none() {
            strict_fail = Some(format!(
                "some separator vertex at tree edge `{}` misses one side",
                t.edge_name(e)
            ));
        }
    }
    ck.push("separation", true, sep_fail);
    ck.push("tight-separators", matches!(td.kind, DecompKind::Tight), tight_fail);
    ck.push("tight-separators-strict", false, strict_fail);
    ck.push("degenerate-separations", false, degenerate);

    let disconnected = (0..td.bags.len()).find(|&i| !induces_connected(g, &masks[i]));
    ck.push(
        "connected-parts",
        matches!(td.kind, DecompKind::Connected { .. }),
        disconnected.map(|i| format!("part `{}` is disconnected", t.name(VertexId(i as u32)))),
    );

    // Each end marker is claimed by one part or by the parts along a path.
    let mut claim_fail = None;
    for (mi, marker) in w.markers().iter().enumerate() {
        let claim: BTreeSet<VertexId> = marker.iter().flat_map(|v| holders[v.idx()].iter().copied()).collect();
        if !is_path(t, &claim) {
            claim_fail = Some(format!("marker {mi} is claimed by scattered parts"));
            break;
        }
    }
    ck.push("end-partition", true, claim_fail);

    Ok(VerifyReport {
        radius: w.radius(),
        adhesion: worst,
        checks: ck.checks,
    })
}

/// True when `set` induces a path (or a single vertex) in the tree.
fn is_path(t: &Graph, set: &BTreeSet<VertexId>) -> bool {
    if set.len() <= 1 {
        return true;
    }
    let inside = |v: &VertexId| set.contains(v);
    let mut ends = 0;
    for v in set {
        let deg = t.neighbors(*v).filter(inside).count();
        match deg {
            0 => return false,
            1 => ends += 1,
            2 => {}
            _ => return false,
        }
    }
    let mut outside = vec![true; t.vertex_count()];
    for v in set {
        outside[v.idx()] = false;
    }
    let first = *set.iter().next().expect("nonempty");
    let d = bfs_from(t, &[first], Some(&outside));
    ends == 2 && set.iter().all(|v| d[v.idx()] != INF)
}

/// Induced part plus a virtual edge for every non-adjacent pair inside a
/// common adhesion set.
pub fn torso(w: &Window, td: &TreeDecomposition, u: VertexId) -> Result<Graph> {
    if u.idx() >= td.tree.vertex_count() {
        return Err(Error::UnknownVertex(u.to_string()));
    }
    let g = w.graph();
    let (mut part, back) = induced_subgraph(g, &td.bags[u.idx()]);
    let local: BTreeMap<VertexId, VertexId> = back
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, VertexId(i as u32)))
        .collect();
    let mut pairs = BTreeSet::new();
    for v in td.tree.neighbors(u) {
        let a = td.adhesion(u, v);
        for (i, &x) in a.iter().enumerate() {
            for &y in &a[i + 1..] {
                let (lx, ly) = (local[&x], local[&y]);
                if part.edges_between(lx, ly).is_empty() {
                    pairs.insert((lx, ly));
                }
            }
        }
    }
    for (x, y) in pairs {
        let name = format!("virtual:{}|{}", part.name(x), part.name(y));
        part.add_named_edge(&name, x, y)?;
    }
    Ok(part)
}

/// Window markers meeting the core region of `u`, restricted to it.
/// Markers reached only through cut ends or padding belong to other parts.
pub fn part_markers(w: &Window, td: &TreeDecomposition, u: VertexId) -> Vec<Vec<VertexId>> {
    let bag: BTreeSet<VertexId> = td.cores[u.idx()].iter().copied().collect();
    let mut classes: Vec<Vec<VertexId>> = w
        .markers()
        .iter()
        .map(|m| m.iter().copied().filter(|v| bag.contains(v)).collect::<Vec<_>>())
        .filter(|c| !c.is_empty())
        .collect();
    let mut uf = UnionFind::new(classes.len());
    for i in 0..classes.len() {
        for j in i + 1..classes.len() {
            if classes[i].iter().any(|v| classes[j].contains(v)) {
                uf.union(i, j);
            }
        }
    }
    let mut merged: BTreeMap<usize, BTreeSet<VertexId>> = BTreeMap::new();
    for (i, c) in classes.drain(..).enumerate() {
        merged.entry(uf.find(i)).or_default().extend(c);
    }
    merged.into_values().map(|s| s.into_iter().collect()).collect()
}

/// Edge end-cut size of the part at `u` between its own markers; `None`
/// for fewer than two markers.
pub fn part_end_cut(w: &Window, td: &TreeDecomposition, u: VertexId, exec: Exec) -> Result<Option<usize>> {
    let g = w.graph();
    // Edges at the boundary sphere are never cut, so each marker swallows
    // its core neighbours; classes that then meet are one end.
    let core: BTreeSet<VertexId> = td.cores[u.idx()].iter().copied().collect();
    let grown: Vec<BTreeSet<VertexId>> = part_markers(w, td, u)
        .into_iter()
        .map(|c| {
            let mut s: BTreeSet<VertexId> = c.iter().copied().collect();
            for &v in &c {
                s.extend(g.neighbors(v).filter(|x| core.contains(x)));
            }
            s
        })
        .collect();
    let mut uf = UnionFind::new(grown.len());
    for i in 0..grown.len() {
        for j in i + 1..grown.len() {
            if !grown[i].is_disjoint(&grown[j]) {
                uf.union(i, j);
            }
        }
    }
    let mut merged: BTreeMap<usize, BTreeSet<VertexId>> = BTreeMap::new();
    for (i, c) in grown.into_iter().enumerate() {
        merged.entry(uf.find(i)).or_default().extend(c);
    }
    let classes: Vec<Vec<VertexId>> = merged.into_values().map(|s| s.into_iter().collect()).collect();
    if classes.len() < 2 {
        return Ok(None);
    }
    let (part, back) = induced_subgraph(g, &td.bags[u.idx()]);
    let local: BTreeMap<VertexId, VertexId> = back
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, VertexId(i as u32)))
        .collect();
    let markers: Vec<Vec<VertexId>> = classes
        .iter()
        .map(|c| c.iter().map(|v| local[v]).collect())
        .collect();
    let boundary: Vec<VertexId> = markers.iter().flatten().copied().collect();
    let pw = Window::from_parts(part, VertexId(0), w.radius(), boundary, markers)?;
    Ok(end_cut_size_in(&pw, Mode::Edge, exec)?.value)
}

/// A nested system of tight cuts of size at most `k`, chosen greedily from
/// all such cuts in order of size then side names. The flag reports a
/// truncated enumeration.
pub fn complete_system(w: &Window, k: usize, budget: &Budget, exec: Exec) -> Result<(NestedSystem, bool)> {
    let all = enumerate_all_tight_cuts(w, k, budget, exec)?;
    let g = w.graph();
    let mut order: Vec<(usize, Vec<String>, Cut)> =
        all.cuts.into_iter().map(|c| (c.size(), c.names(g), c)).collect();
    order.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    let mut chosen: Vec<Cut> = Vec::new();
    for (_, _, c) in order {
        if chosen.iter().all(|d| !crosses(&c, d).unwrap_or(true)) {
            chosen.push(c);
        }
    }
    let sys = validate_nested(w, &chosen).map_err(|v| Error::Contract(v.to_string()))?;
    Ok((sys, all.truncated))
}

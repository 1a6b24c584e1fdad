use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::par::{self, Exec};

use super::graph::{EdgeId, Graph, VertexId};

/// Marker for unreachable entries in distance arrays.
pub const INF: u32 = u32::MAX;

/// Multi-source BFS. Vertices in `blocked` are never entered (sources are
/// entered regardless).
pub fn bfs_from(g: &Graph, sources: &[VertexId], blocked: Option<&[bool]>) -> Vec<u32> {
    let mut dist = vec![INF; g.vertex_count()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if dist[s.idx()] == INF {
            dist[s.idx()] = 0;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        let du = dist[u.idx()];
        for w in g.neighbors(u) {
            if dist[w.idx()] != INF {
                continue;
            }
            if blocked.is_some_and(|b| b[w.idx()]) {
                continue;
            }
            dist[w.idx()] = du + 1;
            queue.push_back(w);
        }
    }
    dist
}

/// BFS distance, `None` when disconnected.
pub fn distance(g: &Graph, u: VertexId, v: VertexId) -> Result<Option<u32>> {
    check(g, u)?;
    check(g, v)?;
    let d = bfs_from(g, &[u], None)[v.idx()];
    Ok((d != INF).then_some(d))
}

fn check(g: &Graph, v: VertexId) -> Result<()> {
    if v.idx() < g.vertex_count() {
        Ok(())
    } else {
        Err(Error::UnknownVertex(v.to_string()))
    }
}

/// Connected components after deleting `removed_v` (with incident edges)
/// and `removed_e`. Components are sorted internally and listed by their
/// smallest vertex index.
pub fn components(g: &Graph, removed_v: &[VertexId], removed_e: &[EdgeId]) -> Vec<Vec<VertexId>> {
    let vmask = g.vertex_mask(removed_v.iter().copied());
    let mut emask = vec![false; g.edge_count()];
    for e in removed_e {
        emask[e.idx()] = true;
    }
    components_masked(g, &vmask, &emask)
}

pub fn components_masked(g: &Graph, removed_v: &[bool], removed_e: &[bool]) -> Vec<Vec<VertexId>> {
    let labels = component_labels(g, removed_v, removed_e);
    let count = labels.iter().filter_map(|l| *l).max().map_or(0, |m| m + 1);
    let mut out = vec![Vec::new(); count];
    for v in g.vertices() {
        if let Some(l) = labels[v.idx()] {
            out[l].push(v);
        }
    }
    out
}

/// Component label per vertex (`None` for removed vertices), numbered in
/// order of first appearance.
pub fn component_labels(g: &Graph, removed_v: &[bool], removed_e: &[bool]) -> Vec<Option<usize>> {
    let n = g.vertex_count();
    let mut label = vec![None; n];
    let mut next = 0;
    let mut stack = Vec::new();
    for s in g.vertices() {
        if removed_v[s.idx()] || label[s.idx()].is_some() {
            continue;
        }
        label[s.idx()] = Some(next);
        stack.push(s);
        while let Some(u) = stack.pop() {
            for &e in g.incident(u) {
                if removed_e[e.idx()] {
                    continue;
                }
                let w = g.other(e, u);
                if removed_v[w.idx()] || label[w.idx()].is_some() {
                    continue;
                }
                label[w.idx()] = Some(next);
                stack.push(w);
            }
        }
        next += 1;
    }
    label
}

pub fn is_connected(g: &Graph) -> bool {
    g.vertex_count() == 0 || components(g, &[], &[]).len() == 1
}

/// Hausdorff distance between two nonempty vertex sets; `None` = infinite.
pub fn hausdorff(g: &Graph, a: &[VertexId], b: &[VertexId]) -> Result<Option<u32>> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Argument("hausdorff distance of an empty set".into()));
    }
    let da = bfs_from(g, a, None);
    let db = bfs_from(g, b, None);
    let ab = b.iter().map(|v| da[v.idx()]).max().unwrap_or(0);
    let ba = a.iter().map(|v| db[v.idx()]).max().unwrap_or(0);
    let h = ab.max(ba);
    Ok((h != INF).then_some(h))
}

/// Induced subgraph on `u`; returns the subgraph and the map from new to
/// old vertex indices. Names of vertices and edges are preserved.
pub fn induced_subgraph(g: &Graph, u: &[VertexId]) -> (Graph, Vec<VertexId>) {
    let mut keep = vec![None; g.vertex_count()];
    let mut sub = Graph::new();
    let mut back = Vec::with_capacity(u.len());
    for &v in u {
        if keep[v.idx()].is_some() {
            continue;
        }
        let nv = sub.add_vertex(g.name(v)).expect("distinct names");
        keep[v.idx()] = Some(nv);
        back.push(v);
    }
    for e in g.edges() {
        let [a, b] = g.endpoints(e);
        if let (Some(x), Some(y)) = (keep[a.idx()], keep[b.idx()]) {
            sub.add_named_edge(g.edge_name(e), x, y).expect("valid edge");
        }
    }
    (sub, back)
}

/// Subgraph with the given vertices and edges (edges must have both
/// endpoints in the vertex set).
pub fn edge_subgraph(g: &Graph, vs: &[VertexId], es: &[EdgeId]) -> Result<(Graph, Vec<VertexId>)> {
    let mut keep = vec![None; g.vertex_count()];
    let mut sub = Graph::new();
    let mut back = Vec::new();
    for &v in vs {
        if keep[v.idx()].is_none() {
            keep[v.idx()] = Some(sub.add_vertex(g.name(v))?);
            back.push(v);
        }
    }
    let mut seen = vec![false; g.edge_count()];
    for &e in es {
        if std::mem::replace(&mut seen[e.idx()], true) {
            continue;
        }
        let [a, b] = g.endpoints(e);
        match (keep[a.idx()], keep[b.idx()]) {
            (Some(x), Some(y)) => {
                sub.add_named_edge(g.edge_name(e), x, y)?;
            }
            _ => {
                return Err(Error::Argument(format!(
                    "edge `{}` leaves the vertex set",
                    g.edge_name(e)
                )))
            }
        }
    }
    Ok((sub, back))
}

/// All-pairs distance table, one BFS per source.
#[derive(Clone, Debug)]
pub struct DistanceTable {
    n: usize,
    data: Vec<u32>,
}

impl DistanceTable {
    pub fn new(g: &Graph, exec: Exec) -> Self {
        let n = g.vertex_count();
        let rows = par::map_range(exec, n, |s| bfs_from(g, &[VertexId(s as u32)], None));
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            data.extend(row);
        }
        DistanceTable { n, data }
    }

    #[inline]
    pub fn get(&self, u: VertexId, v: VertexId) -> u32 {
        self.data[u.idx() * self.n + v.idx()]
    }

    pub fn row(&self, u: VertexId) -> &[u32] {
        &self.data[u.idx() * self.n..(u.idx() + 1) * self.n]
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
}

/// Max pairwise distance among `set`, measured in `g`; `None` if some pair
/// is disconnected. Zero for sets of size at most one.
pub fn set_diameter(g: &Graph, set: &[VertexId]) -> Option<u32> {
    let mut best = 0;
    for (i, &u) in set.iter().enumerate() {
        let d = bfs_from(g, &[u], None);
        for &v in &set[i + 1..] {
            let x = d[v.idx()];
            if x == INF {
                return None;
            }
            best = best.max(x);
        }
    }
    Some(best)
}

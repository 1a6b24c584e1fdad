use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphcore::{bfs_from, components_masked, is_connected, set_diameter, EdgeId, Graph, VertexId, INF};

/// A biconnected component given by its edges; bridges are one-edge
/// blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl Block {
    /// At least two edges: a cycle, possibly a digon.
    pub fn is_two_connected(&self) -> bool {
        self.edges.len() >= 2
    }
}

/// Blocks and cut vertices (Hopcroft–Tarjan, iterative).
pub fn blocks(g: &Graph) -> (Vec<Block>, Vec<VertexId>) {
    let n = g.vertex_count();
    let mut disc = vec![u32::MAX; n];
    let mut low = vec![0u32; n];
    let mut is_cut = vec![false; n];
    let mut estack: Vec<EdgeId> = Vec::new();
    let mut out = Vec::new();
    let mut time = 0u32;
    for root in g.vertices() {
        if disc[root.idx()] != u32::MAX {
            continue;
        }
        disc[root.idx()] = time;
        low[root.idx()] = time;
        time += 1;
        let mut root_children = 0;
        // (vertex, edge from parent, next incident index)
        let mut stack: Vec<(VertexId, Option<EdgeId>, usize)> = vec![(root, None, 0)];
        while let Some(top) = stack.last_mut() {
            let (v, pe, i) = *top;
            if i < g.incident(v).len() {
                top.2 += 1;
                let e = g.incident(v)[i];
                if Some(e) == pe {
                    continue;
                }
                let w = g.other(e, v);
                if disc[w.idx()] == u32::MAX {
                    estack.push(e);
                    disc[w.idx()] = time;
                    low[w.idx()] = time;
                    time += 1;
                    if v == root {
                        root_children += 1;
                    }
                    stack.push((w, Some(e), 0));
                } else if disc[w.idx()] < disc[v.idx()] {
                    estack.push(e);
                    low[v.idx()] = low[v.idx()].min(disc[w.idx()]);
                }
                continue;
            }
            stack.pop();
            let Some(&(u, _, _)) = stack.last() else { break };
            low[u.idx()] = low[u.idx()].min(low[v.idx()]);
            if low[v.idx()] >= disc[u.idx()] {
                if u != root {
                    is_cut[u.idx()] = true;
                }
                let pe = pe.expect("non-root has a parent edge");
                let mut edges = Vec::new();
                while let Some(e) = estack.pop() {
                    edges.push(e);
                    if e == pe {
                        break;
                    }
                }
                let mut vertices: Vec<VertexId> = edges.iter().flat_map(|&e| g.endpoints(e)).collect();
                vertices.sort();
                vertices.dedup();
                edges.sort();
                out.push(Block { vertices, edges });
            }
        }
        if root_children > 1 {
            is_cut[root.idx()] = true;
        }
    }
    let cuts = g.vertices().filter(|v| is_cut[v.idx()]).collect();
    (out, cuts)
}

/// Connected, at least two vertices, no cut vertex.
pub fn is_two_connected(g: &Graph) -> bool {
    g.vertex_count() >= 2 && g.edge_count() >= 2 && is_connected(g) && blocks(g).1.is_empty()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoreReport {
    pub core_vertices: Vec<VertexId>,
    pub core_edges: Vec<EdgeId>,
    /// Pieces hanging off the core are small and the core is `bound`-dense.
    pub almost_two_connected: bool,
    /// Largest diameter of a component of the graph minus the core, with
    /// its attachment vertices.
    pub max_pendant_diameter: u32,
    pub bound: u32,
}

/// Largest 2-connected block as a window stand-in for the 2-connected
/// core. A tree has no core: the flag is false and the pendant diameter
/// is the diameter of the whole graph.
pub fn two_connected_core(g: &Graph, bound: u32) -> Result<CoreReport> {
    if !is_connected(g) {
        return Err(Error::Precondition("graph is not connected".into()));
    }
    let (bl, _) = blocks(g);
    let core = bl
        .iter()
        .filter(|b| b.is_two_connected())
        .max_by_key(|b| (b.vertices.len(), b.edges.len(), std::cmp::Reverse(b.vertices[0])));
    let Some(core) = core else {
        let all: Vec<VertexId> = g.vertices().collect();
        return Ok(CoreReport {
            core_vertices: Vec::new(),
            core_edges: Vec::new(),
            almost_two_connected: false,
            max_pendant_diameter: set_diameter(g, &all).unwrap_or(0),
            bound,
        });
    };
    let in_core = g.vertex_mask(core.vertices.iter().copied());
    let pieces = components_masked(g, &in_core, &vec![false; g.edge_count()]);
    let mut max_pendant_diameter = 0;
    for p in &pieces {
        let mut set = p.clone();
        for &v in p {
            set.extend(g.neighbors(v).filter(|u| in_core[u.idx()]));
        }
        set.sort();
        set.dedup();
        max_pendant_diameter = max_pendant_diameter.max(set_diameter(g, &set).unwrap_or(u32::MAX));
    }
    let reach = bfs_from(g, &core.vertices, None);
    let dense = reach.iter().all(|&d| d != INF && d <= bound);
    Ok(CoreReport {
        core_vertices: core.vertices.clone(),
        core_edges: core.edges.clone(),
        almost_two_connected: dense && max_pendant_diameter <= bound,
        max_pendant_diameter,
        bound,
    })
}

use crate::error::{Error, Result};
use crate::graphcore::{is_connected, EdgeId, Graph, VertexId};

use super::blocks::blocks;
use super::embedding::PlanarEmbedding;

/// Output of [`good_drawing_augment`].
#[derive(Clone, Debug)]
pub struct Augmentation {
    pub embedding: PlanarEmbedding,
    /// Image of each original vertex.
    pub inclusion: Vec<VertexId>,
    /// Every edge was doubled first because the input had a bridge.
    pub doubled: bool,
    /// Cut vertices that received a surrounding cycle.
    pub cut_vertices: Vec<VertexId>,
}

/// 2-connected planar supergraph of a subdivision: double every edge if
/// some edge is a bridge, subdivide each edge into three, then join the
/// neighbours of each cut vertex, in rotation order, by paths of length 2.
pub fn good_drawing_augment(emb: &PlanarEmbedding) -> Result<Augmentation> {
    let g = emb.graph();
    if !is_connected(g) {
        return Err(Error::Precondition("graph is not connected".into()));
    }
    let (bl, _) = blocks(g);
    let doubled = bl.iter().any(|b| b.edges.len() == 1);
    let base = if doubled { double_edges(emb)? } else { emb.clone() };
    let (_, cut_vertices) = blocks(base.graph());
    let is_cut = base.graph().vertex_mask(cut_vertices.iter().copied());

    let h = base.graph();
    let mut out = Graph::new();
    for v in h.vertices() {
        out.add_vertex(h.name(v))?;
    }
    // Rotation slots in the output, filled per vertex.
    let mut rot: Vec<Vec<EdgeId>> = vec![Vec::new(); h.vertex_count()];
    // near[d] = subdivision vertex next to the tail of dart d; link[d] =
    // edge from the tail to it; far[d] = edge from near to the middle.
    let nd = 2 * h.edge_count();
    let mut near = vec![VertexId(0); nd];
    let mut link = vec![EdgeId(0); nd];
    let mut far = vec![EdgeId(0); nd];
    for e in h.edges() {
        let [a, b] = h.endpoints(e);
        let name = h.edge_name(e);
        let s1 = out.add_vertex(&format!("{name}/1"))?;
        let s2 = out.add_vertex(&format!("{name}/2"))?;
        let e1 = out.add_named_edge(&format!("{name}/a"), a, s1)?;
        let e2 = out.add_named_edge(&format!("{name}/m"), s1, s2)?;
        let e3 = out.add_named_edge(&format!("{name}/b"), s2, b)?;
        let (da, db) = (2 * e.idx(), 2 * e.idx() + 1);
        near[da] = s1;
        link[da] = e1;
        far[da] = e2;
        near[db] = s2;
        link[db] = e3;
        far[db] = e2;
    }
    rot.resize(out.vertex_count(), Vec::new());
    // Per subdivision vertex: (out, next, in, prev) with cycle edges
    // optional.
    let mut slots: Vec<[Option<EdgeId>; 4]> = vec![[None; 4]; out.vertex_count()];
    for v in h.vertices() {
        let darts: Vec<usize> = base.rotation(v).iter().map(|&e| base.dart_from(v, e).idx()).collect();
        rot[v.idx()] = darts.iter().map(|&d| link[d]).collect();
        for &d in &darts {
            slots[near[d].idx()][0] = Some(far[d]);
            slots[near[d].idx()][2] = Some(link[d]);
        }
        if !is_cut[v.idx()] {
            continue;
        }
        let n = darts.len();
        for i in 0..n {
            let (x, y) = (near[darts[i]], near[darts[(i + 1) % n]]);
            let m = out.add_vertex(&format!("{}~{i}", h.name(v)))?;
            let ex = out.add_named_edge(&format!("{}~{i}/a", h.name(v)), x, m)?;
            let ey = out.add_named_edge(&format!("{}~{i}/b", h.name(v)), m, y)?;
            rot.push(vec![ex, ey]);
            slots.push([None; 4]);
            slots[x.idx()][1] = Some(ex);
            slots[y.idx()][3] = Some(ey);
        }
    }
    for (v, s) in slots.iter().enumerate() {
        if v >= h.vertex_count() && s[0].is_some() {
            rot[v] = s.iter().flatten().copied().collect();
        }
    }
    let embedding = PlanarEmbedding::new(out, rot)?;
    Ok(Augmentation {
        embedding,
        inclusion: g.vertices().collect(),
        doubled,
        cut_vertices,
    })
}

/// Every edge e becomes e and e' side by side: e' follows e at the first
/// endpoint and precedes it at the second.
fn double_edges(emb: &PlanarEmbedding) -> Result<PlanarEmbedding> {
    let g = emb.graph();
    let mut out = Graph::new();
    for v in g.vertices() {
        out.add_vertex(g.name(v))?;
    }
    let mut twin = Vec::with_capacity(g.edge_count());
    for e in g.edges() {
        let [a, b] = g.endpoints(e);
        let x = out.add_named_edge(g.edge_name(e), a, b)?;
        let y = out.add_named_edge(&format!("{}'", g.edge_name(e)), a, b)?;
        twin.push((x, y));
    }
    let rotation = g
        .vertices()
        .map(|v| {
            emb.rotation(v)
                .iter()
                .flat_map(|&e| {
                    let (x, y) = twin[e.idx()];
                    if g.endpoints(e)[0] == v {
                        [x, y]
                    } else {
                        [y, x]
                    }
                })
                .collect()
        })
        .collect();
    PlanarEmbedding::new(out, rotation)
}

use serde::{Deserialize, Serialize};

use crate::cuts::{make_cut, Cut, SubgraphSystem};
use crate::error::{Error, Result};
use crate::graphcore::{component_labels, EdgeId, VertexId, Window};

use super::embedding::{faces, PlanarEmbedding};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LoopSide {
    Left,
    Right,
}

/// Side of every vertex and marker relative to an oriented simple loop.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopSides {
    /// `None` on the loop.
    pub vertex: Vec<Option<LoopSide>>,
    /// `None` when a marker lies on the loop or meets both sides.
    pub marker: Vec<Option<LoopSide>>,
    /// Loop edges in order, `edges[i]` joining `loop[i]` to `loop[i + 1]`.
    pub edges: Vec<EdgeId>,
}

impl LoopSides {
    /// First marker pair on opposite sides.
    pub fn separated_markers(&self) -> Option<(usize, usize)> {
        for i in 0..self.marker.len() {
            for j in i + 1..self.marker.len() {
                if let (Some(a), Some(b)) = (self.marker[i], self.marker[j]) {
                    if a != b {
                        return Some((i, j));
                    }
                }
            }
        }
        None
    }
}

fn check_host(w: &Window, emb: &PlanarEmbedding) -> Result<()> {
    if w.graph().fingerprint() != emb.graph().fingerprint() {
        return Err(Error::Argument("embedding belongs to another graph".into()));
    }
    Ok(())
}

/// Classify vertices off the loop. Each component of the window minus the
/// loop lies on one side; the side is read off the rotation at a loop
/// vertex where the component attaches: edges strictly between the
/// outgoing and incoming loop edges, counter-clockwise, are on the left.
pub fn loop_sides(w: &Window, emb: &PlanarEmbedding, cycle: &[VertexId]) -> Result<LoopSides> {
    check_host(w, emb)?;
    let g = w.graph();
    let k = cycle.len();
    if k < 3 {
        return Err(Error::Argument("a loop needs at least three vertices".into()));
    }
    let on_loop = g.vertex_mask(cycle.iter().copied());
    if on_loop.iter().filter(|&&b| b).count() != k {
        return Err(Error::Argument("loop repeats a vertex".into()));
    }
    let mut edges = Vec::with_capacity(k);
    for i in 0..k {
        let (a, b) = (cycle[i], cycle[(i + 1) % k]);
        let e = *g
            .edges_between(a, b)
            .first()
            .ok_or_else(|| Error::Argument(format!("`{}` and `{}` are not adjacent", g.name(a), g.name(b))))?;
        edges.push(e);
    }
    let labels = component_labels(g, &on_loop, &vec![false; g.edge_count()]);
    let ncomp = labels.iter().flatten().max().map_or(0, |m| m + 1);
    let mut comp_side: Vec<Option<LoopSide>> = vec![None; ncomp];
    for i in 0..k {
        let v = cycle[i];
        let out = emb.position(v, edges[i]);
        let inc = emb.position(v, edges[(i + k - 1) % k]);
        let deg = emb.rotation(v).len();
        for (p, &e) in emb.rotation(v).iter().enumerate() {
            let u = g.other(e, v);
            let Some(c) = labels[u.idx()] else { continue };
            // Steps counter-clockwise from the outgoing edge.
            let from_out = (p + deg - out) % deg;
            let to_in = (inc + deg - out) % deg;
            let side = if from_out < to_in { LoopSide::Left } else { LoopSide::Right };
            match comp_side[c] {
                None => comp_side[c] = Some(side),
                Some(s) if s != side => {
                    return Err(Error::Contract(
                        "rotation is not planar: a component meets both sides of the loop".into(),
                    ))
                }
                _ => {}
            }
        }
    }
    let vertex: Vec<Option<LoopSide>> = labels.iter().map(|l| l.and_then(|c| comp_side[c])).collect();
    let marker = w
        .markers()
        .iter()
        .map(|m| {
            let mut sides = m.iter().filter_map(|v| vertex[v.idx()]);
            let first = sides.next()?;
            sides.all(|s| s == first).then_some(first)
        })
        .collect();
    Ok(LoopSides { vertex, marker, edges })
}

/// Two end markers lie on opposite sides of the loop.
pub fn bad_loop_check(w: &Window, emb: &PlanarEmbedding, cycle: &[VertexId]) -> Result<bool> {
    Ok(loop_sides(w, emb, cycle)?.separated_markers().is_some())
}

#[derive(Clone, Debug)]
pub struct BadLoopCut {
    /// Vertices strictly on the side of the first marker.
    pub cut: Cut,
    pub markers: (usize, usize),
}

/// The side of a bad loop holding the first separated marker; its
/// coboundary consists of edges into loop vertices.
pub fn bad_loop_to_cut(w: &Window, emb: &PlanarEmbedding, cycle: &[VertexId]) -> Result<BadLoopCut> {
    let sides = loop_sides(w, emb, cycle)?;
    let (m1, m2) = sides
        .separated_markers()
        .ok_or_else(|| Error::Precondition("not a bad loop: no two markers are separated".into()))?;
    let side = sides.marker[m1];
    let members = w.graph().vertices().filter(|v| sides.vertex[v.idx()] == side);
    Ok(BadLoopCut {
        cut: make_cut(w, members)?,
        markers: (m1, m2),
    })
}

/// Facial subgraphs of boundary-touching faces, duplicates dropped.
pub fn boundary_face_system(w: &Window, emb: &PlanarEmbedding) -> Result<SubgraphSystem> {
    check_host(w, emb)?;
    let mut sets: Vec<Vec<VertexId>> = faces(emb)
        .into_iter()
        .filter(|f| f.boundary_touching)
        .map(|f| f.vertices)
        .collect();
    sets.sort();
    sets.dedup();
    SubgraphSystem::new(w, sets)
}

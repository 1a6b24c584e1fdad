use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphcore::{bfs_from, is_connected, EdgeId, Graph, UnionFind, VertexId, INF};

use super::embedding::{face_map, Dart, PlanarEmbedding};

/// Best host face found for one face of the subgraph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceMatch {
    /// Face index in the restricted drawing.
    pub sub_face: usize,
    /// Host face inside it minimizing `needed`.
    pub host_face: Option<usize>,
    /// Smallest r with f₁ ⊆ B(f₂; r) for that host face.
    pub needed: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FriendlyReport {
    pub r: u32,
    pub friendly: bool,
    /// Smallest radius at which the check passes, if any.
    pub radius: Option<u32>,
    pub matches: Vec<FaceMatch>,
    /// First subgraph face without a host face within `r`.
    pub counterexample: Option<usize>,
    /// How the restriction condition is approximated.
    pub convention: String,
}

/// Friendly-faced test for the subgraph with vertex set `vertices` and
/// edge set `edges` (default: induced). Host faces are assigned to the
/// subgraph face that contains them by merging host faces across edges
/// outside the subgraph.
pub fn friendly_faced_check(
    emb: &PlanarEmbedding,
    vertices: &[VertexId],
    edges: Option<&[EdgeId]>,
    r: u32,
) -> Result<FriendlyReport> {
    let g = emb.graph();
    let vmask = g.vertex_mask(vertices.iter().copied());
    let edges: Vec<EdgeId> = match edges {
        Some(es) => es.to_vec(),
        None => g
            .edges()
            .filter(|&e| g.endpoints(e).iter().all(|v| vmask[v.idx()]))
            .collect(),
    };
    let (sub, back_v, back_e) = emb.restrict(vertices, &edges)?;
    if sub.graph().vertex_count() == 0 || !is_connected(sub.graph()) {
        return Err(Error::Precondition("subgraph is not connected".into()));
    }
    if sub.graph().edge_count() == 0 {
        return Err(Error::Precondition("subgraph has no edges".into()));
    }
    let host = face_map(emb);
    let lower = face_map(&sub);

    let mut in_sub = vec![None; g.edge_count()];
    for (i, &e) in back_e.iter().enumerate() {
        in_sub[e.idx()] = Some(EdgeId(i as u32));
    }
    let mut uf = UnionFind::new(host.faces.len());
    for e in g.edges() {
        if in_sub[e.idx()].is_none() {
            let d = Dart::new(e, true);
            uf.union(host.of_dart[d.idx()], host.of_dart[d.rev().idx()]);
        }
    }
    // Class representative -> subgraph face, through any dart on a kept edge.
    let mut class_face = vec![None; host.faces.len()];
    for e in g.edges() {
        let Some(se) = in_sub[e.idx()] else { continue };
        for forward in [true, false] {
            let hd = Dart::new(e, forward);
            // Restriction keeps edge orientation.
            let sd = Dart::new(se, forward);
            let class = uf.find(host.of_dart[hd.idx()]);
            class_face[class].get_or_insert(lower.of_dart[sd.idx()]);
        }
    }
    let mut inside: Vec<Vec<usize>> = vec![Vec::new(); lower.faces.len()];
    for f in 0..host.faces.len() {
        if let Some(u1) = class_face[uf.find(f)] {
            inside[u1].push(f);
        }
    }

    let mut matches = Vec::with_capacity(lower.faces.len());
    for (u1, face) in lower.faces.iter().enumerate() {
        let f1: Vec<VertexId> = face.vertices.iter().map(|&v| back_v[v.idx()]).collect();
        let mut best: Option<(u32, usize)> = None;
        for &u2 in &inside[u1] {
            let d = bfs_from(g, &host.faces[u2].vertices, None);
            let need = f1.iter().map(|v| d[v.idx()]).max().unwrap_or(0);
            if need != INF && best.is_none_or(|(b, _)| need < b) {
                best = Some((need, u2));
            }
        }
        matches.push(FaceMatch {
            sub_face: u1,
            host_face: best.map(|b| b.1),
            needed: best.map(|b| b.0),
        });
    }
    let radius = matches
        .iter()
        .map(|m| m.needed)
        .try_fold(0u32, |acc, n| n.map(|n| acc.max(n)));
    let counterexample = matches
        .iter()
        .find(|m| m.needed.is_none_or(|n| n > r))
        .map(|m| m.sub_face);
    Ok(FriendlyReport {
        r,
        friendly: counterexample.is_none(),
        radius,
        matches,
        counterexample,
        convention: "subgraph drawing = host rotation restricted to the subgraph".into(),
    })
}

/// A grid with a rectangular hole and two ladders hanging into it from the
/// top and bottom rims, optionally with an edge across the hole between
/// the ladder tips.
#[derive(Clone, Debug)]
pub struct LadderHole {
    pub embedding: PlanarEmbedding,
    /// The subgraph under test.
    pub lambda_vertices: Vec<VertexId>,
    pub lambda_edges: Option<Vec<EdgeId>>,
    /// Rim-to-rim width of the hole.
    pub hole_size: u32,
    pub ladder_length: usize,
}

/// Hole with ladders of `len` rungs. Without the crossing edge the
/// subgraph is the grid alone; with it, the subgraph is everything except
/// the crossing edge.
pub fn ladder_hole(len: usize, crossing: bool) -> Result<LadderHole> {
    if len == 0 {
        return Err(Error::Argument("ladders need at least one rung".into()));
    }
    let top = 2 * len as i64 + 4;
    let mut g = Graph::new();
    let mut coords = Vec::new();
    let mut add = |g: &mut Graph, name: String, x: i64, y: i64| -> Result<VertexId> {
        coords.push((x as f64, y as f64));
        g.add_vertex(&name)
    };
    let in_hole = |x: i64, y: i64| (2..=3).contains(&x) && (2..=top - 2).contains(&y);
    let mut grid = std::collections::BTreeMap::new();
    for x in 0..=5 {
        for y in 0..=top {
            if !in_hole(x, y) {
                grid.insert((x, y), add(&mut g, format!("{x},{y}"), x, y)?);
            }
        }
    }
    let grid_vertices: Vec<VertexId> = grid.values().copied().collect();
    for (&(x, y), &v) in &grid {
        for (dx, dy) in [(1, 0), (0, 1)] {
            if let Some(&u) = grid.get(&(x + dx, y + dy)) {
                g.add_edge(v, u)?;
            }
        }
    }
    let mut ladder = |g: &mut Graph, tag: &str, rows: Vec<i64>, anchor: i64| -> Result<()> {
        let mut prev = [grid[&(2, anchor)], grid[&(3, anchor)]];
        for y in rows {
            let a = add(g, format!("{tag}:2,{y}"), 2, y)?;
            let b = add(g, format!("{tag}:3,{y}"), 3, y)?;
            g.add_edge(prev[0], a)?;
            g.add_edge(prev[1], b)?;
            g.add_edge(a, b)?;
            prev = [a, b];
        }
        Ok(())
    };
    let n = len as i64;
    ladder(&mut g, "B", (2..=n + 1).collect(), 1)?;
    ladder(&mut g, "T", (top - n - 1..=top - 2).rev().collect(), top - 1)?;
    let lambda_vertices: Vec<VertexId>;
    let lambda_edges;
    if crossing {
        let mid = n + 2;
        let e = g.add_named_edge("crossing", grid[&(1, mid)], grid[&(4, mid)])?;
        lambda_vertices = g.vertices().collect();
        lambda_edges = Some(g.edges().filter(|&x| x != e).collect());
    } else {
        lambda_vertices = grid_vertices;
        lambda_edges = None;
    }
    let embedding = PlanarEmbedding::from_coordinates(g, &coords)?;
    Ok(LadderHole {
        embedding,
        lambda_vertices,
        lambda_edges,
        hole_size: 3,
        ladder_length: len,
    })
}

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphcore::{component_labels, EdgeId, Graph, GraphSource, VertexId, Window};

/// Directed edge: `2e` runs from the first endpoint of `e`, `2e + 1` back.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart(pub u32);

impl Dart {
    pub fn new(e: EdgeId, forward: bool) -> Dart {
        Dart(e.0 * 2 + u32::from(!forward))
    }

    #[inline]
    pub fn edge(self) -> EdgeId {
        EdgeId(self.0 / 2)
    }

    #[inline]
    pub fn rev(self) -> Dart {
        Dart(self.0 ^ 1)
    }

    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_forward(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn tail_in(self, g: &Graph) -> VertexId {
        g.endpoints(self.edge())[self.0 as usize % 2]
    }

    pub fn head_in(self, g: &Graph) -> VertexId {
        g.endpoints(self.edge())[1 - self.0 as usize % 2]
    }
}

/// Rotation system: the counter-clockwise order of incident edges at every
/// vertex. Owns a copy of its graph; `boundary` marks window-boundary
/// vertices for face classification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarEmbedding {
    graph: Graph,
    rotation: Vec<Vec<EdgeId>>,
    pos: Vec<usize>,
    boundary: Vec<bool>,
}

impl PlanarEmbedding {
    /// `rotation[v]` must list every edge at `v` exactly once.
    pub fn new(graph: Graph, rotation: Vec<Vec<EdgeId>>) -> Result<Self> {
        if rotation.len() != graph.vertex_count() {
            return Err(Error::Contract("rotation does not cover every vertex".into()));
        }
        let mut pos = vec![usize::MAX; 2 * graph.edge_count()];
        for v in graph.vertices() {
            let list = &rotation[v.idx()];
            let mut want = graph.incident(v).to_vec();
            let mut have = list.clone();
            want.sort();
            have.sort();
            if want != have {
                return Err(Error::Contract(format!(
                    "rotation at `{}` is not a permutation of its edges",
                    graph.name(v)
                )));
            }
            for (i, &e) in list.iter().enumerate() {
                let d = Dart::new(e, graph.endpoints(e)[0] == v);
                pos[d.idx()] = i;
            }
        }
        let boundary = vec![false; graph.vertex_count()];
        Ok(PlanarEmbedding {
            graph,
            rotation,
            pos,
            boundary,
        })
    }

    /// Induced drawing of a window: the source's neighbour order restricted
    /// to window edges. Repeated neighbour names take parallel edges in
    /// index order.
    pub fn from_source(w: &Window, src: &dyn GraphSource) -> Result<Self> {
        let g = w.graph();
        let mut rotation = Vec::with_capacity(g.vertex_count());
        for v in g.vertices() {
            let order = src.rotation(g.name(v))?.ok_or_else(|| {
                Error::Argument("graph source has no planar drawing".into())
            })?;
            let mut pending: BTreeMap<VertexId, Vec<EdgeId>> = BTreeMap::new();
            for &e in g.incident(v) {
                pending.entry(g.other(e, v)).or_default().push(e);
            }
            let mut list = Vec::with_capacity(g.degree(v));
            for name in &order {
                let Some(u) = g.vertex(name) else { continue };
                if let Some(es) = pending.get_mut(&u) {
                    if !es.is_empty() {
                        list.push(es.remove(0));
                    }
                }
            }
            if list.len() != g.degree(v) {
                return Err(Error::Contract(format!(
                    "source rotation at `{}` misses window edges",
                    g.name(v)
                )));
            }
            rotation.push(list);
        }
        let mut emb = PlanarEmbedding::new(g.clone(), rotation)?;
        emb.boundary = g.vertex_mask(w.boundary().iter().copied());
        Ok(emb)
    }

    /// Straight-line drawing: rotation by angle around each vertex.
    pub fn from_coordinates(graph: Graph, coords: &[(f64, f64)]) -> Result<Self> {
        if coords.len() != graph.vertex_count() {
            return Err(Error::Argument("one coordinate per vertex required".into()));
        }
        let rotation = graph
            .vertices()
            .map(|v| {
                let (x0, y0) = coords[v.idx()];
                let mut list = graph.incident(v).to_vec();
                list.sort_by(|&a, &b| {
                    let ang = |e: EdgeId| {
                        let (x, y) = coords[graph.other(e, v).idx()];
                        (y - y0).atan2(x - x0)
                    };
                    ang(a).total_cmp(&ang(b)).then(a.cmp(&b))
                });
                list
            })
            .collect();
        PlanarEmbedding::new(graph, rotation)
    }

    pub fn with_boundary(mut self, boundary: &[VertexId]) -> Self {
        self.boundary = self.graph.vertex_mask(boundary.iter().copied());
        self
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn rotation(&self, v: VertexId) -> &[EdgeId] {
        &self.rotation[v.idx()]
    }

    pub fn is_boundary(&self, v: VertexId) -> bool {
        self.boundary[v.idx()]
    }

    pub fn boundary_mask(&self) -> &[bool] {
        &self.boundary
    }

    pub fn dart_count(&self) -> usize {
        2 * self.graph.edge_count()
    }

    pub fn tail(&self, d: Dart) -> VertexId {
        self.graph.endpoints(d.edge())[d.idx() & 1]
    }

    pub fn head(&self, d: Dart) -> VertexId {
        self.graph.endpoints(d.edge())[1 - (d.idx() & 1)]
    }

    /// Dart leaving `v` along `e`.
    pub fn dart_from(&self, v: VertexId, e: EdgeId) -> Dart {
        Dart::new(e, self.graph.endpoints(e)[0] == v)
    }

    /// Next dart counter-clockwise around the tail of `d`.
    pub fn succ(&self, d: Dart) -> Dart {
        let v = self.tail(d);
        let list = &self.rotation[v.idx()];
        let e = list[(self.pos[d.idx()] + 1) % list.len()];
        self.dart_from(v, e)
    }

    /// Face traversal step: the successor of the reverse dart. The face of
    /// a dart lies on its right.
    pub fn face_next(&self, d: Dart) -> Dart {
        self.succ(d.rev())
    }

    /// Position of `e` in the rotation at `v`.
    pub fn position(&self, v: VertexId, e: EdgeId) -> usize {
        self.pos[self.dart_from(v, e).idx()]
    }

    /// Same drawing restricted to `edges` on the vertex set `vertices`.
    /// Returns the sub-embedding and the maps back to host vertices and
    /// edges.
    pub fn restrict(&self, vertices: &[VertexId], edges: &[EdgeId]) -> Result<(PlanarEmbedding, Vec<VertexId>, Vec<EdgeId>)> {
        let g = &self.graph;
        let mut vmap = vec![None; g.vertex_count()];
        let mut sub = Graph::new();
        let mut back_v = Vec::new();
        for &v in vertices {
            if v.idx() >= g.vertex_count() {
                return Err(Error::UnknownVertex(v.to_string()));
            }
            if vmap[v.idx()].is_none() {
                vmap[v.idx()] = Some(sub.add_vertex(g.name(v))?);
                back_v.push(v);
            }
        }
        let mut emap = vec![None; g.edge_count()];
        let mut back_e = Vec::new();
        for &e in edges {
            if e.idx() >= g.edge_count() {
                return Err(Error::UnknownEdge(e.0.to_string()));
            }
            if emap[e.idx()].is_some() {
                continue;
            }
            let [a, b] = g.endpoints(e);
            let (Some(x), Some(y)) = (vmap[a.idx()], vmap[b.idx()]) else {
                return Err(Error::Argument(format!("edge `{}` leaves the vertex set", g.edge_name(e))));
            };
            emap[e.idx()] = Some(sub.add_named_edge(g.edge_name(e), x, y)?);
            back_e.push(e);
        }
        let rotation = back_v
            .iter()
            .map(|&v| {
                self.rotation[v.idx()]
                    .iter()
                    .filter_map(|e| emap[e.idx()])
                    .collect()
            })
            .collect();
        let mut emb = PlanarEmbedding::new(sub, rotation)?;
        emb.boundary = back_v.iter().map(|v| self.boundary[v.idx()]).collect();
        Ok((emb, back_v, back_e))
    }
}

/// One orbit of [`PlanarEmbedding::face_next`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub darts: Vec<Dart>,
    /// Facial subgraph, sorted.
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    pub boundary_touching: bool,
}

impl Face {
    /// Walk length.
    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    /// The walk visits no vertex twice.
    pub fn is_simple(&self) -> bool {
        self.vertices.len() == self.darts.len()
    }
}

/// Faces together with the face index of every dart.
#[derive(Clone, Debug)]
pub struct FaceMap {
    pub faces: Vec<Face>,
    pub of_dart: Vec<usize>,
}

pub fn face_map(emb: &PlanarEmbedding) -> FaceMap {
    let n = emb.dart_count();
    let mut of_dart = vec![usize::MAX; n];
    let mut faces = Vec::new();
    for start in 0..n {
        if of_dart[start] != usize::MAX {
            continue;
        }
        let id = faces.len();
        let mut darts = Vec::new();
        let mut d = Dart(start as u32);
        while of_dart[d.idx()] == usize::MAX {
            of_dart[d.idx()] = id;
            darts.push(d);
            d = emb.face_next(d);
        }
        let mut vertices: Vec<VertexId> = darts.iter().map(|&d| emb.tail(d)).collect();
        vertices.sort();
        vertices.dedup();
        let mut edges: Vec<EdgeId> = darts.iter().map(|d| d.edge()).collect();
        edges.sort();
        edges.dedup();
        let boundary_touching = vertices.iter().any(|&v| emb.is_boundary(v));
        faces.push(Face {
            darts,
            vertices,
            edges,
            boundary_touching,
        });
    }
    FaceMap { faces, of_dart }
}

/// Faces in order of their smallest dart.
pub fn faces(emb: &PlanarEmbedding) -> Vec<Face> {
    face_map(emb).faces
}

/// Longest walk among faces that avoid the boundary; 0 if none.
pub fn max_finite_face_length(emb: &PlanarEmbedding) -> usize {
    faces(emb)
        .iter()
        .filter(|f| !f.boundary_touching)
        .map(Face::len)
        .max()
        .unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerReport {
    pub vertices: usize,
    pub edges: usize,
    /// Faces of the whole drawing, isolated vertices and the shared outer
    /// region counted once.
    pub faces: usize,
    pub components: usize,
    pub characteristic: i64,
    pub expected: i64,
    /// Every dart lies in exactly one face walk.
    pub orbits_partition: bool,
    pub passed: bool,
}

/// Orbit totality plus V − E + F = 1 + C.
pub fn euler_check(emb: &PlanarEmbedding) -> EulerReport {
    let g = emb.graph();
    let fm = face_map(emb);
    let orbits_partition = fm.of_dart.iter().all(|&f| f != usize::MAX)
        && fm.faces.iter().map(Face::len).sum::<usize>() == emb.dart_count();
    let labels = component_labels(g, &vec![false; g.vertex_count()], &vec![false; g.edge_count()]);
    let components = labels.iter().flatten().max().map_or(0, |m| m + 1);
    let isolated = g.vertices().filter(|&v| g.degree(v) == 0).count();
    let faces = (fm.faces.len() + isolated + 1).saturating_sub(components);
    let characteristic = g.vertex_count() as i64 - g.edge_count() as i64 + faces as i64;
    let expected = 1 + components as i64;
    EulerReport {
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        faces,
        components,
        characteristic,
        expected,
        orbits_partition,
        passed: orbits_partition && characteristic == expected,
    }
}

/// Contract error unless [`euler_check`] passes.
pub fn verify_embedding(emb: &PlanarEmbedding) -> Result<EulerReport> {
    let r = euler_check(emb);
    if !r.passed {
        return Err(Error::Contract(format!(
            "rotation is not planar: V - E + F = {} but {} expected",
            r.characteristic, r.expected
        )));
    }
    Ok(r)
}

/// `{ "rotation": { vertex: [edge, ...] } }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingJson {
    pub rotation: BTreeMap<String, Vec<String>>,
}

impl EmbeddingJson {
    pub fn new(emb: &PlanarEmbedding) -> Self {
        let g = emb.graph();
        EmbeddingJson {
            rotation: g
                .vertices()
                .map(|v| {
                    let list = emb.rotation(v).iter().map(|&e| g.edge_name(e).to_string()).collect();
                    (g.name(v).to_string(), list)
                })
                .collect(),
        }
    }

    pub fn to_embedding(&self, graph: Graph) -> Result<PlanarEmbedding> {
        let mut rotation = vec![Vec::new(); graph.vertex_count()];
        for (name, list) in &self.rotation {
            let v = graph.require(name)?;
            rotation[v.idx()] = list
                .iter()
                .map(|e| graph.require_edge(e))
                .collect::<Result<_>>()?;
        }
        PlanarEmbedding::new(graph, rotation)
    }
}

/// A face as cyclic edge ids plus its facial vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceJson {
    pub walk: Vec<String>,
    pub vertices: Vec<String>,
    pub length: usize,
    pub boundary_touching: bool,
}

impl FaceJson {
    pub fn new(emb: &PlanarEmbedding, f: &Face) -> Self {
        let g = emb.graph();
        FaceJson {
            walk: f.darts.iter().map(|d| g.edge_name(d.edge()).to_string()).collect(),
            vertices: g.sorted_names(f.vertices.iter().copied()),
            length: f.len(),
            boundary_touching: f.boundary_touching,
        }
    }
}

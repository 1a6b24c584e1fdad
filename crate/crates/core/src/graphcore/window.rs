use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};

use super::graph::{EdgeId, Graph, VertexId};
use super::metric::{bfs_from, INF};
use super::source::GraphSource;

/// Terminal for separation queries: a vertex or a whole end marker.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Terminal {
    Vertex(VertexId),
    Marker(usize),
}

/// Ball of radius `radius` around the basepoint, with its boundary sphere
/// split into end markers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    graph: Graph,
    basepoint: VertexId,
    radius: u32,
    depth: Vec<u32>,
    boundary: Vec<VertexId>,
    markers: Vec<Vec<VertexId>>,
    marker_of: Vec<Option<usize>>,
}

impl Window {
    /// Build the `r`-ball of `src`. Markers group boundary vertices that are
    /// connected through the shell of vertices at distance `r` or `r + 1`.
    pub fn build(src: &dyn GraphSource, r: u32) -> Result<Window> {
        let base = src.basepoint();
        let outer = r + 1;
        let mut ids: Vec<String> = vec![base.clone()];
        let mut index: HashMap<String, usize> = HashMap::from([(base, 0)]);
        let mut depth: Vec<u32> = vec![0];
        let mut nbrs: Vec<Vec<String>> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        // BFS out to r + 1, querying every vertex in that ball once.
        while let Some(i) = queue.pop_front() {
            let list = src.neighbors(&ids[i])?;
            if depth[i] < outer {
                for w in &list {
                    if !index.contains_key(w) {
                        index.insert(w.clone(), ids.len());
                        ids.push(w.clone());
                        depth.push(depth[i] + 1);
                        queue.push_back(ids.len() - 1);
                    }
                }
            }
            debug_assert_eq!(nbrs.len(), i);
            nbrs.push(list);
        }
        check_symmetry(&ids, &index, &nbrs)?;

        let mut graph = Graph::new();
        let inner: Vec<usize> = (0..ids.len()).filter(|&i| depth[i] <= r).collect();
        for &i in &inner {
            graph.add_vertex(&ids[i])?;
        }
        // Inner vertices were discovered in BFS order, so graph index = i.
        for &i in &inner {
            for w in &nbrs[i] {
                let j = index[w];
                if j > i && depth[j] <= r {
                    graph.add_edge(VertexId(i as u32), VertexId(j as u32))?;
                }
            }
        }

        // Shell components over depth in {r, r+1}.
        let shell: Vec<usize> = (0..ids.len()).filter(|&i| depth[i] >= r).collect();
        let mut uf = UnionFind::new(ids.len());
        for &i in &shell {
            for w in &nbrs[i] {
                if let Some(&j) = index.get(w) {
                    if depth[j] >= r {
                        uf.union(i, j);
                    }
                }
            }
        }
        let boundary: Vec<VertexId> = inner
            .iter()
            .filter(|&&i| depth[i] == r)
            .map(|&i| VertexId(i as u32))
            .collect();
        let mut groups: HashMap<usize, Vec<VertexId>> = HashMap::new();
        for &v in &boundary {
            groups.entry(uf.find(v.idx())).or_default().push(v);
        }
        let markers: Vec<Vec<VertexId>> = groups.into_values().collect();
        let depth = depth[..graph.vertex_count()].to_vec();
        Ok(Window::assemble(graph, VertexId(0), r, depth, boundary, markers))
    }

    /// Window from explicit parts; `markers` must partition `boundary`.
    pub fn from_parts(
        graph: Graph,
        basepoint: VertexId,
        radius: u32,
        boundary: Vec<VertexId>,
        markers: Vec<Vec<VertexId>>,
    ) -> Result<Window> {
        if basepoint.idx() >= graph.vertex_count() {
            return Err(Error::UnknownVertex(basepoint.to_string()));
        }
        let mut count = vec![0usize; graph.vertex_count()];
        for m in &markers {
            if m.is_empty() {
                return Err(Error::Argument("empty end marker".into()));
            }
            for v in m {
                count[v.idx()] += 1;
            }
        }
        let bmask = graph.vertex_mask(boundary.iter().copied());
        for v in graph.vertices() {
            let expected = usize::from(bmask[v.idx()]);
            if count[v.idx()] != expected {
                return Err(Error::Argument(format!(
                    "markers do not partition the boundary at `{}`",
                    graph.name(v)
                )));
            }
        }
        let depth = bfs_from(&graph, &[basepoint], None);
        Ok(Window::assemble(graph, basepoint, radius, depth, boundary, markers))
    }

    /// Treat a finite connected graph as a window around `basepoint`: the
    /// radius is the eccentricity, markers are the components of the
    /// outermost sphere.
    pub fn from_graph(graph: Graph, basepoint: VertexId) -> Result<Window> {
        let depth = bfs_from(&graph, &[basepoint], None);
        if depth.iter().any(|&d| d == INF) {
            return Err(Error::Precondition("graph is not connected".into()));
        }
        let r = depth.iter().copied().max().unwrap_or(0);
        let boundary: Vec<VertexId> = graph.vertices().filter(|v| depth[v.idx()] == r).collect();
        let mut removed = vec![true; graph.vertex_count()];
        for v in &boundary {
            removed[v.idx()] = false;
        }
        let markers = super::metric::components_masked(&graph, &removed, &vec![false; graph.edge_count()]);
        Ok(Window::assemble(graph, basepoint, r, depth, boundary, markers))
    }

    fn assemble(
        graph: Graph,
        basepoint: VertexId,
        radius: u32,
        depth: Vec<u32>,
        mut boundary: Vec<VertexId>,
        mut markers: Vec<Vec<VertexId>>,
    ) -> Window {
        boundary.sort_by(|a, b| graph.name(*a).cmp(graph.name(*b)));
        for m in markers.iter_mut() {
            m.sort_by(|a, b| graph.name(*a).cmp(graph.name(*b)));
        }
        markers.sort_by(|a, b| graph.name(a[0]).cmp(graph.name(b[0])));
        let mut marker_of = vec![None; graph.vertex_count()];
        for (i, m) in markers.iter().enumerate() {
            for v in m {
                marker_of[v.idx()] = Some(i);
            }
        }
        Window {
            graph,
            basepoint,
            radius,
            depth,
            boundary,
            markers,
            marker_of,
        }
    }

    #[inline]
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    #[inline]
    pub fn basepoint(&self) -> VertexId {
        self.basepoint
    }

    #[inline]
    pub fn radius(&self) -> u32 {
        self.radius
    }

    /// Distance from the basepoint.
    #[inline]
    pub fn depth(&self, v: VertexId) -> u32 {
        self.depth[v.idx()]
    }

    pub fn boundary(&self) -> &[VertexId] {
        &self.boundary
    }

    pub fn markers(&self) -> &[Vec<VertexId>] {
        &self.markers
    }

    pub fn marker_of(&self, v: VertexId) -> Option<usize> {
        self.marker_of[v.idx()]
    }

    #[inline]
    pub fn is_boundary(&self, v: VertexId) -> bool {
        self.marker_of[v.idx()].is_some()
    }

    /// An edge is interior when neither endpoint is a boundary vertex.
    pub fn is_interior_edge(&self, e: EdgeId) -> bool {
        let [a, b] = self.graph.endpoints(e);
        !self.is_boundary(a) && !self.is_boundary(b)
    }

    /// Vertex set of a terminal.
    pub fn terminal_vertices(&self, t: Terminal) -> Result<Vec<VertexId>> {
        match t {
            Terminal::Vertex(v) if v.idx() < self.graph.vertex_count() => Ok(vec![v]),
            Terminal::Vertex(v) => Err(Error::UnknownVertex(v.to_string())),
            Terminal::Marker(m) => self
                .markers
                .get(m)
                .cloned()
                .ok_or_else(|| Error::Argument(format!("no end marker {m}"))),
        }
    }

    /// Parse `marker:N` or a vertex id.
    pub fn parse_terminal(&self, s: &str) -> Result<Terminal> {
        if let Some(rest) = s.strip_prefix("marker:") {
            let m: usize = rest
                .parse()
                .map_err(|_| Error::Argument(format!("bad marker `{s}`")))?;
            if m >= self.markers.len() {
                return Err(Error::Argument(format!("no end marker {m}")));
            }
            Ok(Terminal::Marker(m))
        } else {
            Ok(Terminal::Vertex(self.graph.require(s)?))
        }
    }
}

fn check_symmetry(ids: &[String], index: &HashMap<String, usize>, nbrs: &[Vec<String>]) -> Result<()> {
    let count = |i: usize, j: usize| nbrs[i].iter().filter(|w| index.get(*w) == Some(&j)).count();
    for (i, list) in nbrs.iter().enumerate() {
        for w in list {
            let Some(&j) = index.get(w) else { continue };
            if j >= nbrs.len() {
                continue;
            }
            if w == &ids[i] {
                return Err(Error::Contract(format!("loop at `{}`", ids[i])));
            }
            if count(i, j) != count(j, i) {
                return Err(Error::Contract(format!(
                    "`{}` lists `{}` but not symmetrically",
                    ids[i], ids[j]
                )));
            }
        }
    }
    Ok(())
}

/// Plain union-find with path halving.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Union by smaller root index, so roots are deterministic.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphcore::{EdgeId, Graph, VertexId};
use crate::planar::Dart;

/// Dart along `e` leaving `from`.
pub(crate) fn dart_leaving(g: &Graph, e: EdgeId, from: VertexId) -> Dart {
    Dart::new(e, g.endpoints(e)[0] == from)
}

/// A 2-complex: a graph with 2-cells glued along closed walks.
#[derive(Clone, Debug)]
pub struct Complex2 {
    skeleton: Graph,
    cells: Vec<Vec<Dart>>,
    incidence: Vec<u32>,
}

impl Complex2 {
    /// Every cell must be a non-empty closed walk in `skeleton`.
    pub fn new(skeleton: Graph, cells: Vec<Vec<Dart>>) -> Result<Self> {
        let mut incidence = vec![0u32; skeleton.edge_count()];
        for (i, c) in cells.iter().enumerate() {
            if c.is_empty() {
                return Err(Error::Argument(format!("cell {i} is empty")));
            }
            for (p, d) in c.iter().enumerate() {
                if d.edge().idx() >= skeleton.edge_count() {
                    return Err(Error::Argument(format!("cell {i} uses an unknown edge")));
                }
                let next = c[(p + 1) % c.len()];
                if next.edge().idx() >= skeleton.edge_count() || d.head_in(&skeleton) != next.tail_in(&skeleton) {
                    return Err(Error::Argument(format!("cell {i} is not a closed walk")));
                }
                incidence[d.edge().idx()] += 1;
            }
        }
        Ok(Complex2 {
            skeleton,
            cells,
            incidence,
        })
    }

    /// Complex on vertices `names` with one cell per vertex polygon; the
    /// skeleton gets one edge per adjacent pair, named `a-b`.
    pub fn from_polygons<S: AsRef<str>>(names: &[S], polygons: &[Vec<usize>]) -> Result<Self> {
        let mut g = Graph::new();
        for n in names {
            g.add_vertex(n.as_ref())?;
        }
        let mut edge_of: BTreeMap<(usize, usize), EdgeId> = BTreeMap::new();
        let mut cells = Vec::with_capacity(polygons.len());
        for poly in polygons {
            let mut walk = Vec::with_capacity(poly.len());
            for (p, &a) in poly.iter().enumerate() {
                let b = poly[(p + 1) % poly.len()];
                if a >= names.len() || b >= names.len() {
                    return Err(Error::Argument("polygon vertex out of range".into()));
                }
                let key = (a.min(b), a.max(b));
                let e = match edge_of.get(&key) {
                    Some(&e) => e,
                    None => {
                        let (u, v) = (VertexId(key.0 as u32), VertexId(key.1 as u32));
                        let e = g.add_named_edge(&format!("{}-{}", g.name(u), g.name(v)), u, v)?;
                        edge_of.insert(key, e);
                        e
                    }
                };
                walk.push(dart_leaving(&g, e, VertexId(a as u32)));
            }
            cells.push(walk);
        }
        Complex2::new(g, cells)
    }

    pub fn skeleton(&self) -> &Graph {
        &self.skeleton
    }

    pub fn cells(&self) -> &[Vec<Dart>] {
        &self.cells
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// Number of cell sides running along `e`, with multiplicity.
    pub fn incident_cells(&self, e: EdgeId) -> u32 {
        self.incidence[e.idx()]
    }

    /// Corners of cell `i` in walk order.
    pub fn cell_vertices(&self, i: usize) -> Vec<VertexId> {
        self.cells[i].iter().map(|d| d.tail_in(&self.skeleton)).collect()
    }

    /// Edges met an odd number of times by cell `i`.
    pub fn cell_boundary_mod2(&self, i: usize) -> Vec<EdgeId> {
        let mut odd = BTreeSet::new();
        for d in &self.cells[i] {
            if !odd.insert(d.edge()) {
                odd.remove(&d.edge());
            }
        }
        odd.into_iter().collect()
    }

    /// Triangles with three distinct corners, no parallel edges, no two
    /// cells on one vertex triple.
    pub fn is_simplicial(&self) -> bool {
        let g = &self.skeleton;
        let mut pairs = BTreeSet::new();
        for e in g.edges() {
            let [a, b] = g.endpoints(e);
            if !pairs.insert((a.min(b), a.max(b))) {
                return false;
            }
        }
        let mut triples = BTreeSet::new();
        for i in 0..self.cells.len() {
            let mut vs = self.cell_vertices(i);
            vs.sort();
            vs.dedup();
            if self.cells[i].len() != 3 || vs.len() != 3 || !triples.insert(vs) {
                return false;
            }
        }
        true
    }

    pub(crate) fn require_triangles(&self) -> Result<()> {
        for i in 0..self.cells.len() {
            let mut vs = self.cell_vertices(i);
            vs.sort();
            vs.dedup();
            if self.cells[i].len() != 3 || vs.len() != 3 {
                return Err(Error::Precondition(format!("cell {i} is not a triangle with distinct corners")));
            }
        }
        Ok(())
    }
}

/// Every edge lies on exactly two cell sides.
pub fn every_edge_two_cells(k: &Complex2) -> bool {
    k.skeleton.edges().all(|e| k.incident_cells(e) == 2)
}

/// One cell per simple cycle of length at most `eps` (length 2 only
/// through parallel edges). `max_nodes` caps the search.
pub fn epsilon_filling(g: &Graph, eps: usize, max_nodes: u64) -> Result<Complex2> {
    let n = g.vertex_count();
    let mut cells = Vec::new();
    let mut nodes = 0u64;
    let mut on_path = vec![false; n];
    for s in g.vertices() {
        // Cycles whose least vertex is `s`, found once per direction.
        let mut path: Vec<Dart> = Vec::new();
        let mut stack: Vec<(VertexId, usize)> = vec![(s, 0)];
        on_path[s.idx()] = true;
        while let Some(top) = stack.last_mut() {
            let (v, i) = *top;
            if i >= g.incident(v).len() || path.len() >= eps {
                stack.pop();
                on_path[v.idx()] = false;
                path.pop();
                continue;
            }
            top.1 += 1;
            nodes += 1;
            if nodes > max_nodes {
                return Err(Error::Budget(format!("cycle search exceeded {max_nodes} steps")));
            }
            let e = g.incident(v)[i];
            if path.last().is_some_and(|d| d.edge() == e) {
                continue;
            }
            let u = g.other(e, v);
            let d = dart_leaving(g, e, v);
            if u == s && !path.is_empty() {
                if path[0].edge() < e {
                    let mut walk = path.clone();
                    walk.push(d);
                    cells.push(walk);
                }
                continue;
            }
            if u < s || on_path[u.idx()] || path.len() + 1 >= eps {
                continue;
            }
            on_path[u.idx()] = true;
            path.push(d);
            stack.push((u, 0));
        }
        on_path[s.idx()] = false;
    }
    Complex2::new(g.clone(), cells)
}

/// Result of [`cone_off`]. Vertex and edge ids of the input are kept.
#[derive(Clone, Debug)]
pub struct Coned {
    pub complex: Complex2,
    pub cone_vertices: Vec<VertexId>,
}

/// Cone off each member: a new vertex joined to every member vertex and one
/// triangle over each skeleton edge inside the member.
pub fn cone_off(k: &Complex2, members: &[Vec<VertexId>]) -> Result<Coned> {
    let mut g = k.skeleton.clone();
    let old_edges: Vec<EdgeId> = g.edges().collect();
    let mut cells = k.cells.clone();
    let mut cone_vertices = Vec::with_capacity(members.len());
    for (i, m) in members.iter().enumerate() {
        let inside = k.skeleton.vertex_mask(m.iter().copied());
        let c = g.add_vertex(&format!("cone:{i}"))?;
        cone_vertices.push(c);
        let mut spoke = BTreeMap::new();
        for &y in m.iter().collect::<BTreeSet<_>>() {
            let name = format!("cone:{i}/{}", k.skeleton.name(y));
            spoke.insert(y, g.add_named_edge(&name, c, y)?);
        }
        for &e in &old_edges {
            let [a, b] = k.skeleton.endpoints(e);
            if inside[a.idx()] && inside[b.idx()] {
                cells.push(vec![
                    dart_leaving(&g, spoke[&a], c),
                    Dart::new(e, true),
                    dart_leaving(&g, spoke[&b], b),
                ]);
            }
        }
    }
    Ok(Coned {
        complex: Complex2::new(g, cells)?,
        cone_vertices,
    })
}

/// Barycentric subdivision, `times` rounds. Each cell of length n becomes 2n
/// triangles around a centre vertex.
pub fn barycentric_subdivide(k: &Complex2, times: u32) -> Result<Complex2> {
    let mut cur = k.clone();
    for round in 1..=times {
        cur = subdivide_once(&cur, round)?;
    }
    Ok(cur)
}

fn subdivide_once(k: &Complex2, round: u32) -> Result<Complex2> {
    let h = &k.skeleton;
    let mut g = Graph::new();
    for v in h.vertices() {
        g.add_vertex(h.name(v))?;
    }
    // halves[e] = (edge from endpoints[0] to midpoint, midpoint to endpoints[1])
    let mut mid = Vec::with_capacity(h.edge_count());
    let mut halves = Vec::with_capacity(h.edge_count());
    for e in h.edges() {
        let [a, b] = h.endpoints(e);
        let name = h.edge_name(e);
        let m = g.add_vertex(&format!("{name}/mid"))?;
        let ea = g.add_named_edge(&format!("{name}/a"), a, m)?;
        let eb = g.add_named_edge(&format!("{name}/b"), m, b)?;
        mid.push(m);
        halves.push((ea, eb));
    }
    let mut cells = Vec::new();
    for (i, walk) in k.cells.iter().enumerate() {
        let c = g.add_vertex(&format!("sd{round}.cell{i}/ctr"))?;
        let n = walk.len();
        let mut corner = Vec::with_capacity(n);
        let mut side = Vec::with_capacity(n);
        for (p, d) in walk.iter().enumerate() {
            corner.push(g.add_named_edge(&format!("sd{round}.cell{i}/c{p}"), c, d.tail_in(h))?);
            side.push(g.add_named_edge(&format!("sd{round}.cell{i}/s{p}"), c, mid[d.edge().idx()])?);
        }
        for (p, d) in walk.iter().enumerate() {
            let (u, w) = (d.tail_in(h), d.head_in(h));
            let m = mid[d.edge().idx()];
            let (ea, eb) = halves[d.edge().idx()];
            let (u_half, w_half) = if d.is_forward() { (ea, eb) } else { (eb, ea) };
            cells.push(vec![
                dart_leaving(&g, corner[p], c),
                dart_leaving(&g, u_half, u),
                dart_leaving(&g, side[p], m),
            ]);
            cells.push(vec![
                dart_leaving(&g, side[p], c),
                dart_leaving(&g, w_half, m),
                dart_leaving(&g, corner[(p + 1) % n], w),
            ]);
        }
    }
    Complex2::new(g, cells)
}

/// Boundary of the tetrahedron.
pub fn tetrahedron() -> Complex2 {
    Complex2::from_polygons(&["0", "1", "2", "3"], &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]])
        .expect("fixed complex")
}

/// Suspension of an n-gon: a sphere with n + 2 vertices.
pub fn bipyramid(n: usize) -> Result<Complex2> {
    if n < 3 {
        return Err(Error::Argument("bipyramid needs n >= 3".into()));
    }
    let mut names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    names.push("N".into());
    names.push("S".into());
    let mut polys = Vec::with_capacity(2 * n);
    for i in 0..n {
        polys.push(vec![i, (i + 1) % n, n]);
        polys.push(vec![(i + 1) % n, i, n + 1]);
    }
    Complex2::from_polygons(&names, &polys)
}

/// The seven-vertex torus.
pub fn torus7() -> Complex2 {
    let names: Vec<String> = (0..7).map(|i| i.to_string()).collect();
    let mut polys = Vec::new();
    for i in 0..7 {
        polys.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        polys.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    Complex2::from_polygons(&names, &polys).expect("fixed complex")
}

/// Triangulated `nx` by `ny` grid of squares, each split along its
/// diagonal from (x, y) to (x+1, y+1), with optional wrap-around in x and
/// y. Vertices are named `x,y`. Wrapped directions need at least 3 squares.
pub fn grid_complex(nx: usize, ny: usize, wrap_x: bool, wrap_y: bool) -> Result<Complex2> {
    if nx == 0 || ny == 0 || (wrap_x && nx < 3) || (wrap_y && ny < 3) {
        return Err(Error::Argument("grid too small".into()));
    }
    let (vx, vy) = (if wrap_x { nx } else { nx + 1 }, if wrap_y { ny } else { ny + 1 });
    let id = |x: usize, y: usize| (x % vx) * vy + (y % vy);
    let mut names = Vec::with_capacity(vx * vy);
    for x in 0..vx {
        for y in 0..vy {
            names.push(format!("{x},{y}"));
        }
    }
    let mut polys = Vec::with_capacity(2 * nx * ny);
    for x in 0..nx {
        for y in 0..ny {
            polys.push(vec![id(x, y), id(x + 1, y), id(x + 1, y + 1)]);
            polys.push(vec![id(x, y), id(x + 1, y + 1), id(x, y + 1)]);
        }
    }
    Complex2::from_polygons(&names, &polys)
}

/// Square `n` by `n` torus grid with one square cell per face.
pub fn torus_control(n: usize) -> Result<Complex2> {
    if n < 3 {
        return Err(Error::Argument("torus control needs n >= 3".into()));
    }
    let id = |x: usize, y: usize| (x % n) * n + (y % n);
    let names: Vec<String> = (0..n * n).map(|i| format!("{},{}", i / n, i % n)).collect();
    let polys: Vec<Vec<usize>> = (0..n * n)
        .map(|i| {
            let (x, y) = (i / n, i % n);
            vec![id(x, y), id(x + 1, y), id(x + 1, y + 1), id(x, y + 1)]
        })
        .collect();
    Complex2::from_polygons(&names, &polys)
}

/// On-disk complex: the skeleton as in window files and each cell as a
/// cycle of edge ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String, String)>,
    pub cells: Vec<Vec<String>>,
}

impl ComplexJson {
    pub fn new(k: &Complex2) -> Self {
        let g = &k.skeleton;
        ComplexJson {
            vertices: g.names().to_vec(),
            edges: g
                .edges()
                .map(|e| {
                    let [a, b] = g.endpoints(e);
                    (g.edge_name(e).to_string(), g.name(a).to_string(), g.name(b).to_string())
                })
                .collect(),
            cells: k
                .cells
                .iter()
                .map(|c| c.iter().map(|d| g.edge_name(d.edge()).to_string()).collect())
                .collect(),
        }
    }

    /// Cell orientation is recovered from consecutive edges; a walk whose
    /// first two edges share both endpoints starts forward.
    pub fn to_complex(&self) -> Result<Complex2> {
        let mut g = Graph::new();
        for v in &self.vertices {
            g.add_vertex(v)?;
        }
        for (id, a, b) in &self.edges {
            let (a, b) = (g.require(a)?, g.require(b)?);
            g.add_named_edge(id, a, b)?;
        }
        let mut cells = Vec::with_capacity(self.cells.len());
        for (i, c) in self.cells.iter().enumerate() {
            let es = c.iter().map(|x| g.require_edge(x)).collect::<Result<Vec<_>>>()?;
            let Some(&first) = es.first() else {
                return Err(Error::Argument(format!("cell {i} is empty")));
            };
            let [a, b] = g.endpoints(first);
            let next = g.endpoints(*es.get(1).unwrap_or(&first));
            let start = if next.contains(&b) { a } else { b };
            let mut at = start;
            let mut walk = Vec::with_capacity(es.len());
            for &e in &es {
                if !g.endpoints(e).contains(&at) {
                    return Err(Error::Argument(format!("cell {i} is not a closed walk")));
                }
                walk.push(dart_leaving(&g, e, at));
                at = g.other(e, at);
            }
            cells.push(walk);
        }
        Complex2::new(g, cells)
    }
}

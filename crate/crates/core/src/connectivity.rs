//! Menger separation numbers between vertices and end markers, with
//! disjoint-path and cut witnesses, and window-scale end-cut sizes.
//!
//! Markers used as terminals are contracted into one super vertex. In
//! vertex mode a contracted marker has unlimited capacity, so its vertices
//! may be shared by several paths; `disjoint_rays` charges them like any
//! other vertex.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphcore::{EdgeId, GraphSource, Terminal, VertexId, Window};
use crate::par::{self, Exec};

const BIG: u32 = u32::MAX / 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Edge,
    Vertex,
}

/// A minimum separator. In vertex mode `edges` holds direct edges between
/// the two terminal sets, which no vertex removal can break.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Separator {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl Separator {
    pub fn size(&self) -> usize {
        self.vertices.len() + self.edges.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationResult {
    pub value: usize,
    pub paths: Vec<Vec<VertexId>>,
    pub cut: Separator,
    /// Source-side vertices of the minimum cut (residual reachability).
    pub source_side: Vec<VertexId>,
}

struct Arc {
    to: usize,
    cap: u32,
    flow: i64,
}

/// Residual network with paired arcs (`i ^ 1` is the reverse of `i`).
struct Network {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
}

impl Network {
    fn new(n: usize) -> Self {
        Network {
            arcs: Vec::new(),
            out: vec![Vec::new(); n],
        }
    }

    fn add(&mut self, a: usize, b: usize, cap: u32) -> usize {
        let i = self.arcs.len();
        self.arcs.push(Arc { to: b, cap, flow: 0 });
        self.out[a].push(i);
        self.arcs.push(Arc { to: a, cap: 0, flow: 0 });
        self.out[b].push(i + 1);
        i
    }

    fn residual(&self, i: usize) -> i64 {
        i64::from(self.arcs[i].cap) - self.arcs[i].flow
    }

    /// Shortest augmenting paths, one unit at a time, scanning arcs in
    /// insertion order so results are deterministic.
    fn max_flow(&mut self, s: usize, t: usize, limit: usize) -> usize {
        let mut value = 0;
        while value < limit {
            let mut pred = vec![usize::MAX; self.out.len()];
            let mut seen = vec![false; self.out.len()];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                if x == t {
                    break;
                }
                for &i in &self.out[x] {
                    let y = self.arcs[i].to;
                    if !seen[y] && self.residual(i) > 0 {
                        seen[y] = true;
                        pred[y] = i;
                        queue.push_back(y);
                    }
                }
            }
            if !seen[t] {
                break;
            }
            let mut x = t;
            while x != s {
                let i = pred[x];
                self.arcs[i].flow += 1;
                self.arcs[i ^ 1].flow -= 1;
                x = self.arcs[i ^ 1].to;
            }
            value += 1;
        }
        value
    }

    fn reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.out.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &i in &self.out[x] {
                let y = self.arcs[i].to;
                if !seen[y] && self.residual(i) > 0 {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }

    /// Split the flow into unit s-t node paths, dropping any circulation.
    fn decompose(&mut self, s: usize, t: usize, value: usize) -> Vec<Vec<usize>> {
        let mut paths = Vec::with_capacity(value);
        for _ in 0..value {
            loop {
                let mut walk = vec![s];
                let mut used: Vec<usize> = Vec::new();
                let mut pos = vec![usize::MAX; self.out.len()];
                pos[s] = 0;
                let mut x = s;
                let mut cycle = None;
                while x != t {
                    let i = *self.out[x]
                        .iter()
                        .find(|&&i| i % 2 == 0 && self.arcs[i].flow > 0)
                        .expect("flow conservation");
                    let y = self.arcs[i].to;
                    used.push(i);
                    if pos[y] != usize::MAX {
                        cycle = Some(pos[y]);
                        break;
                    }
                    pos[y] = walk.len();
                    walk.push(y);
                    x = y;
                }
                match cycle {
                    Some(start) => {
                        for &i in &used[start..] {
                            self.arcs[i].flow -= 1;
                            self.arcs[i ^ 1].flow += 1;
                        }
                    }
                    None => {
                        for &i in &used {
                            self.arcs[i].flow -= 1;
                            self.arcs[i ^ 1].flow += 1;
                        }
                        paths.push(walk);
                        break;
                    }
                }
            }
        }
        paths
    }
}

struct Setup {
    net: Network,
    s: usize,
    t: usize,
    /// Graph vertex of each network node, if any.
    owner: Vec<Option<VertexId>>,
    /// Network arc and graph edge for each unit edge arc pair.
    edge_arcs: Vec<(usize, EdgeId)>,
    split: bool,
}

fn terminal_sets(w: &Window, x: Terminal, y: Terminal) -> Result<(Vec<VertexId>, Vec<VertexId>)> {
    if x == y {
        return Err(Error::Argument("terminals must differ".into()));
    }
    let a = w.terminal_vertices(x)?;
    let b = w.terminal_vertices(y)?;
    if a.iter().any(|v| b.contains(v)) {
        return Err(Error::Argument("terminals overlap".into()));
    }
    Ok((a, b))
}

fn setup(w: &Window, a: &[VertexId], b: &[VertexId], mode: Mode, charge_terminals: bool) -> Setup {
    let g = w.graph();
    let n = g.vertex_count();
    let in_a = g.vertex_mask(a.iter().copied());
    let in_b = g.vertex_mask(b.iter().copied());
    let split = mode == Mode::Vertex;
    let nodes = if split { 2 * n + 2 } else { n + 2 };
    let (s, t) = (nodes - 2, nodes - 1);
    let mut net = Network::new(nodes);
    let mut owner = vec![None; nodes];
    // Vertex v enters at `inn(v)` and leaves at `outn(v)`.
    let inn = |v: VertexId| if split { 2 * v.idx() } else { v.idx() };
    let outn = |v: VertexId| if split { 2 * v.idx() + 1 } else { v.idx() };
    for v in g.vertices() {
        owner[inn(v)] = Some(v);
        owner[outn(v)] = Some(v);
        if split {
            let terminal = in_a[v.idx()] || in_b[v.idx()];
            let cap = if terminal && !charge_terminals { BIG } else { 1 };
            net.add(inn(v), outn(v), cap);
        }
    }
    for &v in a {
        net.add(s, inn(v), BIG);
    }
    for &v in b {
        net.add(outn(v), t, BIG);
    }
    let mut edge_arcs = Vec::new();
    for e in g.edges() {
        let [u, v] = g.endpoints(e);
        let direct = (in_a[u.idx()] && in_b[v.idx()]) || (in_a[v.idx()] && in_b[u.idx()]);
        let cap = if !split || direct { 1 } else { BIG };
        edge_arcs.push((net.add(outn(u), inn(v), cap), e));
        edge_arcs.push((net.add(outn(v), inn(u), cap), e));
    }
    Setup {
        net,
        s,
        t,
        owner,
        edge_arcs,
        split,
    }
}

fn solve(w: &Window, a: &[VertexId], b: &[VertexId], mode: Mode, charge_terminals: bool) -> SeparationResult {
    let g = w.graph();
    let mut st = setup(w, a, b, mode, charge_terminals);
    let value = st.net.max_flow(st.s, st.t, usize::MAX);
    let reach = st.net.reachable(st.s);

    let mut cut = Separator::default();
    if st.split {
        for v in g.vertices() {
            if reach[2 * v.idx()] && !reach[2 * v.idx() + 1] {
                cut.vertices.push(v);
            }
        }
    }
    for &(i, e) in &st.edge_arcs {
        let from = st.net.arcs[i ^ 1].to;
        let to = st.net.arcs[i].to;
        if reach[from] && !reach[to] && st.net.arcs[i].cap == 1 {
            cut.edges.push(e);
        }
    }
    cut.edges.sort();
    cut.edges.dedup();
    let source_side: Vec<VertexId> = g
        .vertices()
        .filter(|v| reach[if st.split { 2 * v.idx() } else { v.idx() }])
        .collect();

    // Cancel flow running both ways along one edge.
    for pair in st.edge_arcs.chunks(2) {
        let (i, j) = (pair[0].0, pair[1].0);
        let both = st.net.arcs[i].flow.min(st.net.arcs[j].flow);
        if both > 0 {
            for k in [i, j] {
                st.net.arcs[k].flow -= both;
                st.net.arcs[k ^ 1].flow += both;
            }
        }
    }
    let in_a = g.vertex_mask(a.iter().copied());
    let in_b = g.vertex_mask(b.iter().copied());
    let paths = st
        .net
        .decompose(st.s, st.t, value)
        .into_iter()
        .map(|walk| {
            let mut p: Vec<VertexId> = Vec::new();
            for node in walk {
                if let Some(v) = st.owner[node] {
                    if p.last() != Some(&v) {
                        p.push(v);
                    }
                }
            }
            // Keep the stretch from the last source vertex to the first
            // sink vertex after it.
            let start = p.iter().rposition(|v| in_a[v.idx()]).unwrap_or(0);
            let p = &p[start..];
            let end = p.iter().position(|v| in_b[v.idx()]).unwrap_or(p.len() - 1);
            p[..=end].to_vec()
        })
        .collect();
    SeparationResult {
        value,
        paths,
        cut,
        source_side,
    }
}

/// Maximum number of edge-disjoint paths from `x` to `y`, with a minimum
/// edge cut of the same size.
pub fn edge_separation(w: &Window, x: Terminal, y: Terminal) -> Result<SeparationResult> {
    let (a, b) = terminal_sets(w, x, y)?;
    Ok(solve(w, &a, &b, Mode::Edge, false))
}

/// Maximum number of internally vertex-disjoint paths from `x` to `y`.
/// Each direct edge between the terminals counts as its own path.
pub fn vertex_separation(w: &Window, x: Terminal, y: Terminal) -> Result<SeparationResult> {
    let (a, b) = terminal_sets(w, x, y)?;
    Ok(solve(w, &a, &b, Mode::Vertex, false))
}

pub fn separation(w: &Window, x: Terminal, y: Terminal, mode: Mode) -> Result<SeparationResult> {
    match mode {
        Mode::Edge => edge_separation(w, x, y),
        Mode::Vertex => vertex_separation(w, x, y),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndCutReport {
    /// `None` when the window has fewer than two markers (value ∞).
    pub value: Option<usize>,
    pub radius: u32,
    pub mode: Mode,
    pub markers: usize,
    /// Marker pair attaining the minimum.
    pub pair: Option<(usize, usize)>,
    pub convention: String,
}

/// Minimum separation over all marker pairs of the `r`-window.
pub fn end_cut_size(src: &dyn GraphSource, r: u32, mode: Mode, exec: Exec) -> Result<EndCutReport> {
    let w = Window::build(src, r)?;
    end_cut_size_in(&w, mode, exec)
}

pub fn end_cut_size_in(w: &Window, mode: Mode, exec: Exec) -> Result<EndCutReport> {
    let k = w.markers().len();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    let values = par::map_slice(exec, &pairs, |&(i, j)| {
        separation(w, Terminal::Marker(i), Terminal::Marker(j), mode).map(|r| r.value)
    });
    let mut best: Option<(usize, (usize, usize))> = None;
    for (v, &p) in values.into_iter().zip(&pairs) {
        let v = v?;
        if best.map_or(true, |(b, _)| v < b) {
            best = Some((v, p));
        }
    }
    Ok(EndCutReport {
        value: best.map(|b| b.0),
        radius: w.radius(),
        mode,
        markers: k,
        pair: best.map(|b| b.1),
        convention: format!(
            "window radius {}; markers are boundary classes merged through the next shell and contracted as terminals; fewer than two markers reports infinity",
            w.radius()
        ),
    })
}

/// `n` pairwise vertex-disjoint paths between two markers, marker vertices
/// included.
pub fn disjoint_rays(w: &Window, m1: usize, m2: usize, n: usize) -> Result<Vec<Vec<VertexId>>> {
    let (a, b) = terminal_sets(w, Terminal::Marker(m1), Terminal::Marker(m2))?;
    let res = solve(w, &a, &b, Mode::Vertex, true);
    if res.value < n {
        return Err(Error::Infeasible(format!(
            "only {} disjoint paths exist between markers {m1} and {m2}",
            res.value
        )));
    }
    let mut paths = res.paths;
    paths.truncate(n);
    Ok(paths)
}

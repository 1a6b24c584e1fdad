mod common;

use std::collections::BTreeSet;

use common::{v, window};
use proptest::prelude::*;
use splittool_core::connectivity::{
    disjoint_rays, edge_separation, end_cut_size, end_cut_size_in, separation, vertex_separation,
    Mode, SeparationResult,
};
use splittool_core::generators::GeneratorSpec;
use splittool_core::graphcore::{components, Graph, Terminal, VertexId, Window};
use splittool_core::par::Exec;
use splittool_core::Error;

fn reachable_avoiding(g: &Graph, from: &[usize], dead_v: &[bool], dead_e: &[bool]) -> Vec<bool> {
    let mut seen = vec![false; g.vertex_count()];
    let mut stack: Vec<usize> = from.iter().copied().filter(|&x| !dead_v[x]).collect();
    for &x in &stack {
        seen[x] = true;
    }
    while let Some(x) = stack.pop() {
        for e in g.edges() {
            let [a, b] = g.endpoints(e);
            if dead_e[e.idx()] {
                continue;
            }
            let y = if a.idx() == x {
                b.idx()
            } else if b.idx() == x {
                a.idx()
            } else {
                continue;
            };
            if !dead_v[y] && !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen
}

/// Smallest edge set whose removal separates the two sets, by trying
/// every subset of edges in increasing size.
fn brute_edge_cut_by_edges(g: &Graph, a: &[usize], b: &[usize]) -> usize {
    let m = g.edge_count();
    assert!(m <= 16);
    let mut best = usize::MAX;
    for bits in 0u32..(1 << m) {
        let size = bits.count_ones() as usize;
        if size >= best {
            continue;
        }
        let dead_e: Vec<bool> = (0..m).map(|i| bits & (1 << i) != 0).collect();
        let seen = reachable_avoiding(g, a, &vec![false; g.vertex_count()], &dead_e);
        if b.iter().all(|&y| !seen[y]) {
            best = size;
        }
    }
    best
}

/// Minimum coboundary over vertex sets containing `a` and avoiding `b`.
fn brute_edge_cut_by_sides(g: &Graph, a: &[usize], b: &[usize]) -> usize {
    let n = g.vertex_count();
    assert!(n <= 20);
    let mut best = usize::MAX;
    for bits in 0u32..(1 << n) {
        if a.iter().any(|&x| bits & (1 << x) == 0) || b.iter().any(|&y| bits & (1 << y) != 0) {
            continue;
        }
        let side: Vec<bool> = (0..n).map(|i| bits & (1 << i) != 0).collect();
        best = best.min(common::coboundary_of(g, &side).iter().filter(|x| **x).count());
    }
    best
}

/// Smallest vertex set avoiding both terminal sets whose removal leaves no
/// path except direct edges; each direct edge adds one.
fn brute_vertex_cut(g: &Graph, a: &[usize], b: &[usize]) -> usize {
    let n = g.vertex_count();
    assert!(n <= 20);
    let term: Vec<bool> = (0..n).map(|i| a.contains(&i) || b.contains(&i)).collect();
    let direct: Vec<bool> = g
        .edges()
        .map(|e| {
            let [x, y] = g.endpoints(e);
            let (x, y) = (x.idx(), y.idx());
            (a.contains(&x) && b.contains(&y)) || (a.contains(&y) && b.contains(&x))
        })
        .collect();
    let base = direct.iter().filter(|d| **d).count();
    let mut best = usize::MAX;
    for bits in 0u32..(1 << n) {
        if (0..n).any(|i| term[i] && bits & (1 << i) != 0) {
            continue;
        }
        let size = bits.count_ones() as usize;
        if size >= best {
            continue;
        }
        let dead_v: Vec<bool> = (0..n).map(|i| bits & (1 << i) != 0).collect();
        let seen = reachable_avoiding(g, a, &dead_v, &direct);
        if b.iter().all(|&y| !seen[y]) {
            best = size;
        }
    }
    best + base
}

/// Independent edge-mode max-flow: DFS augmenting paths on a capacity
/// matrix with a super source and sink.
fn matrix_flow(g: &Graph, a: &[usize], b: &[usize]) -> usize {
    let n = g.vertex_count();
    let (s, t) = (n, n + 1);
    let mut cap = vec![vec![0i64; n + 2]; n + 2];
    for e in g.edges() {
        let [x, y] = g.endpoints(e);
        cap[x.idx()][y.idx()] += 1;
        cap[y.idx()][x.idx()] += 1;
    }
    for &x in a {
        cap[s][x] = 1 << 30;
    }
    for &y in b {
        cap[y][t] = 1 << 30;
    }
    fn dfs(x: usize, t: usize, cap: &mut [Vec<i64>], seen: &mut [bool]) -> bool {
        if x == t {
            return true;
        }
        seen[x] = true;
        for y in 0..cap.len() {
            if !seen[y] && cap[x][y] > 0 && dfs(y, t, cap, seen) {
                cap[x][y] -= 1;
                cap[y][x] += 1;
                return true;
            }
        }
        false
    }
    let mut flow = 0;
    while dfs(s, t, &mut cap, &mut vec![false; n + 2]) {
        flow += 1;
    }
    flow
}

fn idx(vs: &[VertexId]) -> Vec<usize> {
    vs.iter().map(|v| v.idx()).collect()
}

/// Witness checks shared by every example.
fn check_witness(w: &Window, x: Terminal, y: Terminal, mode: Mode, r: &SeparationResult) {
    let g = w.graph();
    let a = w.terminal_vertices(x).unwrap();
    let b = w.terminal_vertices(y).unwrap();
    assert_eq!(r.paths.len(), r.value);
    assert_eq!(r.cut.size(), r.value);
    let mut used_edges = BTreeSet::new();
    let mut used_inner = BTreeSet::new();
    for p in &r.paths {
        assert!(a.contains(&p[0]));
        assert!(b.contains(p.last().unwrap()));
        for pair in p.windows(2) {
            let es = g.edges_between(pair[0], pair[1]);
            assert!(!es.is_empty(), "path step is not an edge");
            if mode == Mode::Edge {
                // Some parallel copy must still be free.
                let free = es.iter().find(|e| !used_edges.contains(*e)).expect("edge reused");
                used_edges.insert(*free);
            }
        }
        if mode == Mode::Vertex {
            for inner in &p[1..p.len() - 1] {
                assert!(used_inner.insert(*inner), "inner vertex reused");
            }
        }
    }
    // Removing the witness cut separates the terminals.
    let comps = components(g, &r.cut.vertices, &r.cut.edges);
    let label = |v: VertexId| comps.iter().position(|c| c.contains(&v));
    for &p in &a {
        for &q in &b {
            if let (Some(lp), Some(lq)) = (label(p), label(q)) {
                assert_ne!(lp, lq, "cut leaves a path");
            }
        }
    }
}

fn complete(n: usize) -> Window {
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((names[i].clone(), names[j].clone()));
        }
    }
    Window::from_graph(Graph::from_edges(&names, &edges).unwrap(), VertexId(0)).unwrap()
}

#[test]
fn zline_markers() {
    let w = window("zline", 5);
    assert_eq!(w.markers().len(), 2);
    for mode in [Mode::Edge, Mode::Vertex] {
        let r = separation(&w, Terminal::Marker(0), Terminal::Marker(1), mode).unwrap();
        assert_eq!(r.value, 1);
        check_witness(&w, Terminal::Marker(0), Terminal::Marker(1), mode, &r);
    }
    let rays = disjoint_rays(&w, 0, 1, 1).unwrap();
    assert_eq!(rays[0].len(), 11);
}

#[test]
fn complete_graph_vertices() {
    let w = complete(4);
    let (x, y) = (Terminal::Vertex(VertexId(0)), Terminal::Vertex(VertexId(3)));
    let e = edge_separation(&w, x, y).unwrap();
    assert_eq!(e.value, 3);
    check_witness(&w, x, y, Mode::Edge, &e);
    let vr = vertex_separation(&w, x, y).unwrap();
    assert_eq!(vr.value, 3);
    assert_eq!(vr.cut.edges.len(), 1);
    check_witness(&w, x, y, Mode::Vertex, &vr);
}

#[test]
fn equal_terminals_rejected() {
    let w = complete(3);
    let x = Terminal::Vertex(VertexId(1));
    assert!(matches!(edge_separation(&w, x, x), Err(Error::Argument(_))));
    let z = window("zline", 3);
    assert!(matches!(
        edge_separation(&z, Terminal::Marker(0), Terminal::Vertex(v(&z, "-3"))),
        Err(Error::Argument(_))
    ));
}

#[test]
fn ladder_markers() {
    let w = window("ladder", 4);
    let (x, y) = (Terminal::Marker(0), Terminal::Marker(1));
    let vr = vertex_separation(&w, x, y).unwrap();
    assert_eq!(vr.value, 2);
    check_witness(&w, x, y, Mode::Vertex, &vr);
    let g = w.graph();
    let a = idx(&w.markers()[0]);
    let b = idx(&w.markers()[1]);
    assert_eq!(vr.value, brute_vertex_cut(g, &a, &b));
    let er = edge_separation(&w, x, y).unwrap();
    assert_eq!(er.value, brute_edge_cut_by_sides(g, &a, &b));
    match disjoint_rays(&w, 0, 1, 3) {
        Err(Error::Infeasible(msg)) => assert!(msg.contains("only 2")),
        other => panic!("expected infeasible, got {other:?}"),
    }
}

#[test]
fn cylinder_rails() {
    for r in 3..=5 {
        let src = "cylinder".parse::<GeneratorSpec>().unwrap().source().unwrap();
        for mode in [Mode::Edge, Mode::Vertex] {
            let rep = end_cut_size(src.as_ref(), r, mode, Exec::default()).unwrap();
            assert_eq!(rep.value, Some(4), "r={r} {mode:?}");
            assert_eq!(rep.radius, r);
        }
    }
    let w = window("cylinder", 4);
    let rays = disjoint_rays(&w, 0, 1, 4).unwrap();
    let g = w.graph();
    // Each ray stays on one rail k.
    let mut rails: Vec<String> = rays
        .iter()
        .map(|p| {
            let ks: BTreeSet<&str> = p.iter().map(|&x| g.name(x).split(',').nth(1).unwrap()).collect();
            assert_eq!(ks.len(), 1);
            ks.into_iter().next().unwrap().to_string()
        })
        .collect();
    rails.sort();
    assert_eq!(rails, ["0", "1", "2", "3"]);
    let mut seen = BTreeSet::new();
    for p in &rays {
        for x in p {
            assert!(seen.insert(*x), "rays share a vertex");
        }
    }
}

#[test]
fn end_cut_sizes() {
    for kind in ["free-group:2", "regular-tree:3"] {
        let src = kind.parse::<GeneratorSpec>().unwrap().source().unwrap();
        for r in 1..=3 {
            for mode in [Mode::Edge, Mode::Vertex] {
                assert_eq!(end_cut_size(src.as_ref(), r, mode, Exec::default()).unwrap().value, Some(1));
            }
        }
    }
    let grid = "grid2d".parse::<GeneratorSpec>().unwrap().source().unwrap();
    let rep = end_cut_size(grid.as_ref(), 4, Mode::Edge, Exec::default()).unwrap();
    assert_eq!(rep.value, None);
    assert_eq!(rep.markers, 1);
}

#[test]
fn grid_quadrant_arcs() {
    // Split the r=5 boundary diamond into four arcs, one per quadrant with
    // the positive axes leading, and separate opposite arcs.
    let base = window("grid2d", 5);
    let g = base.graph().clone();
    let coords = |v: VertexId| -> (i64, i64) {
        let mut it = g.name(v).split(',').map(|s| s.parse::<i64>().unwrap());
        (it.next().unwrap(), it.next().unwrap())
    };
    let mut arcs = vec![Vec::new(); 4];
    for &b in base.boundary() {
        let (x, y) = coords(b);
        let q = if x > 0 && y >= 0 {
            0
        } else if x <= 0 && y > 0 {
            1
        } else if x < 0 && y <= 0 {
            2
        } else {
            3
        };
        arcs[q].push(b);
    }
    let w = Window::from_parts(g.clone(), base.basepoint(), 5, base.boundary().to_vec(), arcs.clone()).unwrap();
    let i = |arc: &Vec<VertexId>| w.marker_of(arc[0]).unwrap();
    let (x, y) = (Terminal::Marker(i(&arcs[0])), Terminal::Marker(i(&arcs[2])));
    let r = edge_separation(&w, x, y).unwrap();
    check_witness(&w, x, y, Mode::Edge, &r);
    assert_eq!(r.value, matrix_flow(&g, &idx(&arcs[0]), &idx(&arcs[2])));
    assert_eq!(r.value, 9);
}

#[test]
fn pairwise_bounds_on_corpus() {
    // vs <= es <= d * vs for every marker pair.
    for kind in ["free-group:2", "ladder", "cylinder", "tree-of-flats", "regular-tree:4"] {
        let w = window(kind, 3);
        let d = w.graph().max_degree();
        let k = w.markers().len();
        for i in 0..k {
            for j in i + 1..k {
                let (x, y) = (Terminal::Marker(i), Terminal::Marker(j));
                let e = edge_separation(&w, x, y).unwrap();
                let vv = vertex_separation(&w, x, y).unwrap();
                assert!(vv.value <= e.value && e.value <= d * vv.value, "{kind}");
                check_witness(&w, x, y, Mode::Edge, &e);
                check_witness(&w, x, y, Mode::Vertex, &vv);
            }
        }
        let seq = end_cut_size_in(&w, Mode::Edge, Exec::Sequential).unwrap();
        let par = end_cut_size_in(&w, Mode::Edge, Exec::Parallel).unwrap();
        assert_eq!(seq, par);
    }
}

fn arb_graph() -> impl Strategy<Value = Graph> {
    (4usize..9, proptest::collection::vec((0usize..9, 0usize..9), 0..10)).prop_map(|(n, extra)| {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let mut edges: Vec<(String, String)> = (1..n).map(|i| (names[i - 1].clone(), names[i].clone())).collect();
        for (a, b) in extra {
            let (a, b) = (a % n, b % n);
            if a != b {
                edges.push((names[a].clone(), names[b].clone()));
            }
        }
        Graph::from_edges(&names, &edges).unwrap()
    })
}

proptest! {
    #[test]
    fn flow_matches_brute_force(g in arb_graph(), s in 0usize..9, t in 0usize..9) {
        let n = g.vertex_count();
        let (s, t) = (s % n, t % n);
        prop_assume!(s != t);
        let w = Window::from_graph(g.clone(), VertexId(0)).unwrap();
        let (x, y) = (Terminal::Vertex(VertexId(s as u32)), Terminal::Vertex(VertexId(t as u32)));
        let e = edge_separation(&w, x, y).unwrap();
        check_witness(&w, x, y, Mode::Edge, &e);
        prop_assert_eq!(e.value, brute_edge_cut_by_sides(&g, &[s], &[t]));
        if g.edge_count() <= 14 {
            prop_assert_eq!(e.value, brute_edge_cut_by_edges(&g, &[s], &[t]));
        }
        let vv = vertex_separation(&w, x, y).unwrap();
        check_witness(&w, x, y, Mode::Vertex, &vv);
        prop_assert_eq!(vv.value, brute_vertex_cut(&g, &[s], &[t]));
        prop_assert!(vv.value <= e.value);
    }
}

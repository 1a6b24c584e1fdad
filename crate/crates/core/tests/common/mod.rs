#![allow(dead_code)]

use splittool_core::generators::GeneratorSpec;
use splittool_core::graphcore::{Graph, VertexId, Window};

pub fn window(kind: &str, r: u32) -> Window {
    let spec: GeneratorSpec = kind.parse().unwrap();
    Window::build(spec.source().unwrap().as_ref(), r).unwrap()
}

pub fn v(w: &Window, name: &str) -> VertexId {
    w.graph().vertex(name).unwrap_or_else(|| panic!("no vertex {name}"))
}

pub fn vs(w: &Window, names: &[&str]) -> Vec<VertexId> {
    names.iter().map(|n| v(w, n)).collect()
}

/// Components after deleting the listed edges, by flood fill on an
/// adjacency matrix.
pub fn count_components(g: &Graph, deleted: &[bool]) -> usize {
    let n = g.vertex_count();
    let mut label = vec![usize::MAX; n];
    let mut count = 0;
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = count;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for e in g.edges() {
                if deleted[e.idx()] {
                    continue;
                }
                let [a, b] = g.endpoints(e);
                let (a, b) = (a.idx(), b.idx());
                let y = if a == x {
                    b
                } else if b == x {
                    a
                } else {
                    continue;
                };
                if label[y] == usize::MAX {
                    label[y] = count;
                    stack.push(y);
                }
            }
        }
        count += 1;
    }
    count
}

pub fn coboundary_of(g: &Graph, side: &[bool]) -> Vec<bool> {
    g.edges()
        .map(|e| {
            let [a, b] = g.endpoints(e);
            side[a.idx()] != side[b.idx()]
        })
        .collect()
}

/// Every vertex subset avoiding the basepoint whose coboundary has size
/// at most `k`, contains `seed` when given, avoids boundary vertices and
/// leaves exactly two components. Sides are returned as sorted names.
pub fn brute_tight_cuts(w: &Window, seed: Option<usize>, k: usize) -> Vec<Vec<String>> {
    let g = w.graph();
    let n = g.vertex_count();
    assert!(n <= 20, "brute force limited to 20 vertices");
    let base = w.basepoint().idx();
    let mut out = Vec::new();
    for bits in 0u32..(1 << n) {
        if bits & (1 << base) != 0 || bits == 0 {
            continue;
        }
        let side: Vec<bool> = (0..n).map(|i| bits & (1 << i) != 0).collect();
        let cob = coboundary_of(g, &side);
        let size = cob.iter().filter(|x| **x).count();
        if size > k || size == 0 {
            continue;
        }
        if let Some(e) = seed {
            if !cob[e] {
                continue;
            }
        }
        let touches = g.edges().any(|e| {
            cob[e.idx()] && g.endpoints(e).iter().any(|&x| w.is_boundary(x))
        });
        if touches || count_components(g, &cob) != 2 {
            continue;
        }
        let mut names: Vec<String> = (0..n)
            .filter(|&i| side[i])
            .map(|i| g.name(VertexId(i as u32)).to_string())
            .collect();
        names.sort();
        out.push(names);
    }
    out.sort();
    out
}

/// Components of K − t traced through the cells: nodes are vertices and
/// edge segments between consecutive points of `t`; inside a cell the
/// region after arc i continues after the partner of the point ending it.
/// Returns the number of components and each vertex's component.
pub fn complement_components(
    k: &splittool_core::complexes::Complex2,
    p: &splittool_core::complexes::Pattern,
    t: &splittool_core::complexes::Track,
) -> (usize, Vec<usize>) {
    use splittool_core::complexes::Slot;
    use splittool_core::graphcore::UnionFind;
    use std::collections::BTreeMap;
    let g = k.skeleton();
    let nv = g.vertex_count();
    // Rank of each point of t along its edge.
    let mut on_edge: Vec<Vec<u32>> = vec![Vec::new(); g.edge_count()];
    for s in &t.slots {
        on_edge[s.edge.idx()].push(s.index);
    }
    for l in &mut on_edge {
        l.sort();
    }
    let mut base = vec![0usize; g.edge_count() + 1];
    for e in 0..g.edge_count() {
        base[e + 1] = base[e] + on_edge[e].len() + 1;
    }
    let seg = |e: usize, i: usize| nv + base[e] + i;
    let mut uf = UnionFind::new(nv + base[g.edge_count()]);
    for e in g.edges() {
        let [a, b] = g.endpoints(e);
        uf.union(a.idx(), seg(e.idx(), 0));
        uf.union(b.idx(), seg(e.idx(), on_edge[e.idx()].len()));
    }
    let rank_of = |s: Slot| on_edge[s.edge.idx()].binary_search(&s.index).ok();
    let mut partner: BTreeMap<(usize, Slot), Slot> = BTreeMap::new();
    for &ci in &t.chords {
        let c = p.chords[ci];
        partner.insert((c.cell, c.ends[0]), c.ends[1]);
        partner.insert((c.cell, c.ends[1]), c.ends[0]);
    }
    for (cell, walk) in k.cells().iter().enumerate() {
        // Points of t around the cell boundary, each with the segment that
        // follows it in walk direction.
        let mut around: Vec<(Slot, usize)> = Vec::new();
        for d in walk {
            let e = d.edge().idx();
            let n = on_edge[e].len();
            let order: Vec<usize> = if d.is_forward() { (0..n).collect() } else { (0..n).rev().collect() };
            for r in order {
                let s = Slot { edge: d.edge(), index: on_edge[e][r] };
                let after = if d.is_forward() { r + 1 } else { r };
                around.push((s, seg(e, after)));
            }
        }
        let pos: BTreeMap<Slot, usize> = around.iter().enumerate().map(|(i, (s, _))| (*s, i)).collect();
        let n = around.len();
        for i in 0..n {
            let end = around[(i + 1) % n].0;
            let other = partner[&(cell, end)];
            assert!(rank_of(other).is_some(), "cell {cell}");
            let k2 = pos[&other];
            uf.union(around[i].1, around[k2].1);
        }
    }
    let total = nv + base[g.edge_count()];
    let mut roots: BTreeMap<usize, usize> = BTreeMap::new();
    for x in 0..total {
        let r = uf.find(x);
        let next = roots.len();
        roots.entry(r).or_insert(next);
    }
    let labels = (0..nv).map(|v| roots[&uf.find(v)]).collect();
    (roots.len(), labels)
}

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphcore::{EdgeId, UnionFind, VertexId};

use super::cohomology::{delta0, nontrivial_cocycle, solve_coboundary};
use super::complex::Complex2;

/// The `index`-th crossing point on `edge`, counted from its first
/// endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Slot {
    pub edge: EdgeId,
    pub index: u32,
}

/// A straight segment inside a triangle joining points on two sides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chord {
    pub cell: usize,
    pub ends: [Slot; 2],
}

/// A pattern, stored as its crossing numbers and a chord realization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    pub j: Vec<u32>,
    pub chords: Vec<Chord>,
}

/// A connected component of a pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Track {
    pub slots: Vec<Slot>,
    /// Indices into the pattern's chords.
    pub chords: Vec<usize>,
    /// Number of points on the 1-skeleton.
    pub norm: usize,
    /// Edges crossed an odd number of times.
    pub cocycle: Vec<bool>,
}

/// Realize `j` by nested chords around each corner: with sides a, b, c the
/// corner between a and b gets (a + b − c)/2 chords, nearest the corner
/// first.
pub fn pattern_from_j(k: &Complex2, j: &[u32]) -> Result<Pattern> {
    let g = k.skeleton();
    if j.len() != g.edge_count() {
        return Err(Error::Argument("j length differs from the edge count".into()));
    }
    k.require_triangles()?;
    let mut chords = Vec::new();
    for (i, cell) in k.cells().iter().enumerate() {
        let a: Vec<u32> = cell.iter().map(|d| j[d.edge().idx()]).collect();
        let sum: u32 = a.iter().sum();
        if sum % 2 == 1 {
            return Err(Error::Argument(format!("invalid j on cell {i}: side sum {sum} is odd")));
        }
        if let Some(&big) = a.iter().find(|&&x| x > sum / 2) {
            return Err(Error::Argument(format!(
                "invalid j on cell {i}: side value {big} exceeds half the sum {}",
                sum / 2
            )));
        }
        // Point `t` nearest vertex `v` on side `s`.
        let nearest = |s: usize, v: VertexId, t: u32| {
            let e = cell[s].edge();
            let index = if g.endpoints(e)[0] == v { t } else { a[s] - 1 - t };
            Slot { edge: e, index }
        };
        for s in 0..3 {
            let (next, opposite) = ((s + 1) % 3, (s + 2) % 3);
            let x = (a[s] + a[next] - a[opposite]) / 2;
            let v = cell[s].head_in(g);
            for t in 0..x {
                chords.push(Chord {
                    cell: i,
                    ends: [nearest(s, v, t), nearest(next, v, t)],
                });
            }
        }
    }
    Ok(Pattern { j: j.to_vec(), chords })
}

/// Crossing numbers read back from the chords and isolated points.
pub fn read_j(k: &Complex2, p: &Pattern) -> Vec<u32> {
    let mut seen: BTreeMap<Slot, ()> = BTreeMap::new();
    for c in &p.chords {
        for s in c.ends {
            seen.insert(s, ());
        }
    }
    let mut j = vec![0u32; k.skeleton().edge_count()];
    for e in k.skeleton().edges() {
        // Points on edges outside every cell carry no chord.
        let on_cell = k.incident_cells(e) > 0;
        j[e.idx()] = if on_cell {
            seen.keys().filter(|s| s.edge == e).count() as u32
        } else {
            p.j[e.idx()]
        };
    }
    j
}

/// The pattern with j = j_P + j_Q.
pub fn pattern_sum(k: &Complex2, p: &Pattern, q: &Pattern) -> Result<Pattern> {
    if p.j.len() != q.j.len() {
        return Err(Error::Argument("patterns live on different complexes".into()));
    }
    let j: Vec<u32> = p.j.iter().zip(&q.j).map(|(a, b)| a + b).collect();
    pattern_from_j(k, &j)
}

/// Components of the pattern under chord adjacency.
pub fn track_components(k: &Complex2, p: &Pattern) -> Vec<Track> {
    let ne = k.skeleton().edge_count();
    let mut offset = vec![0usize; ne + 1];
    for e in 0..ne {
        offset[e + 1] = offset[e] + p.j[e] as usize;
    }
    let id = |s: Slot| offset[s.edge.idx()] + s.index as usize;
    let mut uf = UnionFind::new(offset[ne]);
    for c in &p.chords {
        uf.union(id(c.ends[0]), id(c.ends[1]));
    }
    let mut by_root: BTreeMap<usize, usize> = BTreeMap::new();
    let mut tracks: Vec<Track> = Vec::new();
    for e in 0..ne {
        for index in 0..p.j[e] {
            let s = Slot {
                edge: EdgeId(e as u32),
                index,
            };
            let r = uf.find(id(s));
            let t = *by_root.entry(r).or_insert_with(|| {
                tracks.push(Track {
                    slots: Vec::new(),
                    chords: Vec::new(),
                    norm: 0,
                    cocycle: vec![false; ne],
                });
                tracks.len() - 1
            });
            let tr = &mut tracks[t];
            tr.slots.push(s);
            tr.norm += 1;
            tr.cocycle[e] = !tr.cocycle[e];
        }
    }
    for (ci, c) in p.chords.iter().enumerate() {
        let r = uf.find(id(c.ends[0]));
        tracks[by_root[&r]].chords.push(ci);
    }
    tracks
}

/// `Some(b_t)` when z_t is a coboundary; the basepoint is outside b_t.
pub fn track_separates(k: &Complex2, t: &Track) -> Option<Vec<bool>> {
    solve_coboundary(k, &t.cocycle)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Thinness {
    Thin,
    NotThin,
    Unknown,
}

/// Thinness of a separating track through its cut b_t.
pub fn is_thin(k: &Complex2, t: &Track, budget: u64) -> Result<Thinness> {
    let b = track_separates(k, t).ok_or_else(|| Error::Precondition("track does not separate".into()))?;
    is_thin_cut(k, &b, budget)
}

/// With m = |δb|: is b outside the Boolean algebra generated by all vertex
/// sets with fewer than m coboundary edges? Enumerates all 2^|V| sets;
/// `Unknown` when that exceeds `budget`.
pub fn is_thin_cut(k: &Complex2, b: &[bool], budget: u64) -> Result<Thinness> {
    let g = k.skeleton();
    let n = g.vertex_count();
    let m = delta0(k, b).iter().filter(|&&x| x).count();
    if m == 0 {
        return Err(Error::Precondition("cut has empty coboundary".into()));
    }
    if n >= 63 || (1u64 << n) > budget {
        return Ok(Thinness::Unknown);
    }
    let ends: Vec<(u32, u32)> = g
        .edges()
        .map(|e| {
            let [u, v] = g.endpoints(e);
            (u.0, v.0)
        })
        .collect();
    // Atoms of the algebra, refined one generator at a time.
    let mut atom = vec![0usize; n];
    let constant_on_atoms = |atom: &[usize]| {
        let mut side: BTreeMap<usize, bool> = BTreeMap::new();
        (0..n).all(|v| *side.entry(atom[v]).or_insert(b[v]) == b[v])
    };
    // Sets containing vertex 0 suffice: complements generate the same algebra.
    for mask in (0..1u64 << n).filter(|x| x & 1 == 1) {
        let cut = ends
            .iter()
            .filter(|&&(u, v)| (mask >> u ^ mask >> v) & 1 == 1)
            .take(m)
            .count();
        if cut >= m {
            continue;
        }
        let mut relabel: BTreeMap<(usize, bool), usize> = BTreeMap::new();
        for v in 0..n {
            let key = (atom[v], mask >> v & 1 == 1);
            let next = relabel.len();
            atom[v] = *relabel.entry(key).or_insert(next);
        }
        if constant_on_atoms(&atom) {
            return Ok(Thinness::NotThin);
        }
    }
    Ok(if constant_on_atoms(&atom) {
        Thinness::NotThin
    } else {
        Thinness::Thin
    })
}

/// A track whose complement is connected, built from a cocycle that is not
/// a coboundary with every edge crossed at most once. `None` when h¹ = 0.
pub fn non_separating_track_search(k: &Complex2) -> Result<Option<(Pattern, Track)>> {
    k.require_triangles()?;
    let Some(z) = nontrivial_cocycle(k) else {
        return Ok(None);
    };
    let j: Vec<u32> = z.iter().map(|&x| u32::from(x)).collect();
    let p = pattern_from_j(k, &j)?;
    let t = track_components(k, &p)
        .into_iter()
        .find(|t| track_separates(k, t).is_none())
        .ok_or_else(|| Error::Contract("cocycle splits into coboundaries".into()))?;
    Ok(Some((p, t)))
}

/// On-disk pattern: j by edge id, zeros omitted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternJson {
    pub j: BTreeMap<String, u32>,
}

impl PatternJson {
    pub fn new(k: &Complex2, j: &[u32]) -> Self {
        let g = k.skeleton();
        PatternJson {
            j: g.edges()
                .filter(|e| j[e.idx()] > 0)
                .map(|e| (g.edge_name(e).to_string(), j[e.idx()]))
                .collect(),
        }
    }

    pub fn to_j(&self, k: &Complex2) -> Result<Vec<u32>> {
        let g = k.skeleton();
        let mut j = vec![0; g.edge_count()];
        for (name, &x) in &self.j {
            j[g.require_edge(name)?.idx()] = x;
        }
        Ok(j)
    }
}

/// Summary of one track for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrackJson {
    pub norm: usize,
    pub crossed: Vec<String>,
    pub separates: bool,
    /// b_t when separating.
    pub side: Option<Vec<String>>,
}

impl TrackJson {
    pub fn new(k: &Complex2, t: &Track) -> Self {
        let g = k.skeleton();
        let mut crossed: Vec<EdgeId> = t.slots.iter().map(|s| s.edge).collect();
        crossed.dedup();
        let side = track_separates(k, t);
        TrackJson {
            norm: t.norm,
            crossed: g.sorted_edge_names(crossed),
            separates: side.is_some(),
            side: side.map(|b| g.sorted_names(g.vertices().filter(|v| b[v.idx()]))),
        }
    }
}

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::complex::Complex2;

/// Dense GF(2) row vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Bits(Vec<u64>);

impl Bits {
    pub(crate) fn zeros(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    pub(crate) fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub(crate) fn flip(&mut self, i: usize) {
        self.0[i / 64] ^= 1 << (i % 64);
    }

    pub(crate) fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn xor(&mut self, o: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a ^= b;
        }
    }

    fn lowest(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }
}

/// Rank by insertion into a pivot basis.
pub(crate) fn rank(rows: impl IntoIterator<Item = Bits>, cols: usize) -> usize {
    let mut basis: Vec<Option<Bits>> = vec![None; cols];
    let mut r = 0;
    for mut row in rows {
        while let Some(p) = row.lowest() {
            match &basis[p] {
                Some(b) => row.xor(b),
                None => {
                    basis[p] = Some(row);
                    r += 1;
                    break;
                }
            }
        }
    }
    r
}

/// Basis of {x : row·x = 0 for every row}, restricted to the columns in
/// `allowed` (others forced to zero).
pub(crate) fn kernel(rows: &[Bits], cols: usize, allowed: &[bool]) -> Vec<Bits> {
    // Reduced row echelon form over the allowed columns.
    let mut m: Vec<Bits> = rows
        .iter()
        .map(|r| {
            let mut x = Bits::zeros(cols);
            for c in 0..cols {
                if allowed[c] && r.get(c) {
                    x.set(c);
                }
            }
            x
        })
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut top = 0;
    for c in (0..cols).filter(|&c| allowed[c]) {
        let Some(p) = (top..m.len()).find(|&i| m[i].get(c)) else { continue };
        m.swap(top, p);
        let pivot = m[top].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != top && row.get(c) {
                row.xor(&pivot);
            }
        }
        pivots.push(c);
        top += 1;
    }
    let is_pivot = {
        let mut v = vec![false; cols];
        for &c in &pivots {
            v[c] = true;
        }
        v
    };
    let mut out = Vec::new();
    for f in (0..cols).filter(|&c| allowed[c] && !is_pivot[c]) {
        let mut x = Bits::zeros(cols);
        x.set(f);
        for (i, &c) in pivots.iter().enumerate() {
            if m[i].get(f) {
                x.set(c);
            }
        }
        out.push(x);
    }
    out
}

fn delta1_rows(k: &Complex2) -> Vec<Bits> {
    let ne = k.skeleton().edge_count();
    (0..k.cell_count())
        .map(|i| {
            let mut b = Bits::zeros(ne);
            for e in k.cell_boundary_mod2(i) {
                b.set(e.idx());
            }
            b
        })
        .collect()
}

fn delta0_rows(k: &Complex2) -> impl Iterator<Item = Bits> + '_ {
    let g = k.skeleton();
    g.edges().map(move |e| {
        let mut b = Bits::zeros(g.vertex_count());
        for v in g.endpoints(e) {
            b.flip(v.idx());
        }
        b
    })
}

/// Ranks entering the first cohomology over Z2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct H1Report {
    pub edges: usize,
    pub rank_delta0: usize,
    pub rank_delta1: usize,
    pub h1: usize,
}

/// dim ker δ¹ − dim im δ⁰, by elimination.
pub fn h1_report(k: &Complex2) -> H1Report {
    let g = k.skeleton();
    let rank_delta1 = rank(delta1_rows(k), g.edge_count());
    let rank_delta0 = rank(delta0_rows(k), g.vertex_count());
    H1Report {
        edges: g.edge_count(),
        rank_delta0,
        rank_delta1,
        h1: g.edge_count() - rank_delta1 - rank_delta0,
    }
}

pub fn h1_rank(k: &Complex2) -> usize {
    h1_report(k).h1
}

/// `z` vanishes on every cell boundary.
pub fn is_cocycle(k: &Complex2, z: &[bool]) -> bool {
    k.cells()
        .iter()
        .all(|c| c.iter().filter(|d| z[d.edge().idx()]).count() % 2 == 0)
}

/// A 0-cochain `b` with δb = `z`, or `None`. In each component of the
/// skeleton the least vertex is left out of `b`, so vertex 0 never lies in
/// it.
pub fn is_coboundary(k: &Complex2, z: &[bool]) -> Result<Option<Vec<bool>>> {
    let g = k.skeleton();
    if z.len() != g.edge_count() {
        return Err(Error::Argument("cochain length differs from the edge count".into()));
    }
    if !is_cocycle(k, z) {
        return Err(Error::Argument("not a cocycle".into()));
    }
    Ok(solve_coboundary(k, z))
}

pub(crate) fn solve_coboundary(k: &Complex2, z: &[bool]) -> Option<Vec<bool>> {
    let g = k.skeleton();
    let mut b: Vec<Option<bool>> = vec![None; g.vertex_count()];
    for root in g.vertices() {
        if b[root.idx()].is_some() {
            continue;
        }
        b[root.idx()] = Some(false);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let bu = b[u.idx()].unwrap_or(false);
            for &e in g.incident(u) {
                let v = g.other(e, u);
                let want = bu ^ z[e.idx()];
                match b[v.idx()] {
                    None => {
                        b[v.idx()] = Some(want);
                        queue.push_back(v);
                    }
                    Some(x) if x != want => return None,
                    _ => {}
                }
            }
        }
    }
    Some(b.into_iter().map(|x| x.unwrap_or(false)).collect())
}

/// Coboundary of a 0-cochain.
pub fn delta0(k: &Complex2, b: &[bool]) -> Vec<bool> {
    let g = k.skeleton();
    g.edges()
        .map(|e| {
            let [u, v] = g.endpoints(e);
            b[u.idx()] != b[v.idx()]
        })
        .collect()
}

/// For a finite complex every cocycle is compactly supported, so CHomP is
/// h¹ = 0.
pub fn chomp_check(k: &Complex2) -> bool {
    h1_rank(k) == 0
}

/// A basis of cocycles supported on edges with `allowed` set.
pub fn cocycle_basis(k: &Complex2, allowed: &[bool]) -> Vec<Vec<bool>> {
    let ne = k.skeleton().edge_count();
    kernel(&delta1_rows(k), ne, allowed)
        .into_iter()
        .map(|b| (0..ne).map(|i| b.get(i)).collect())
        .collect()
}

/// Relative variant for windows: every cocycle supported off the star of
/// the boundary (edges with a `boundary` endpoint) is a coboundary.
pub fn relative_chomp_check(k: &Complex2, boundary: &[bool]) -> bool {
    let g = k.skeleton();
    let allowed: Vec<bool> = g
        .edges()
        .map(|e| g.endpoints(e).iter().all(|v| !boundary.get(v.idx()).copied().unwrap_or(false)))
        .collect();
    cocycle_basis(k, &allowed)
        .iter()
        .all(|z| solve_coboundary(k, z).is_some())
}

/// A cocycle that is not a coboundary, if h¹ > 0.
pub fn nontrivial_cocycle(k: &Complex2) -> Option<Vec<bool>> {
    let all = vec![true; k.skeleton().edge_count()];
    cocycle_basis(k, &all)
        .into_iter()
        .find(|z| solve_coboundary(k, z).is_none())
}

/// On-disk cochain: degree and the names in its support.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CochainJson {
    pub degree: u8,
    pub support: Vec<String>,
}

impl CochainJson {
    pub fn vertices(k: &Complex2, b: &[bool]) -> Self {
        let g = k.skeleton();
        CochainJson {
            degree: 0,
            support: g.sorted_names(g.vertices().filter(|v| b[v.idx()])),
        }
    }

    pub fn edges(k: &Complex2, z: &[bool]) -> Self {
        let g = k.skeleton();
        CochainJson {
            degree: 1,
            support: g.sorted_edge_names(g.edges().filter(|e| z[e.idx()])),
        }
    }

    /// Mask over vertices (degree 0) or edges (degree 1).
    pub fn to_mask(&self, k: &Complex2) -> Result<Vec<bool>> {
        let g = k.skeleton();
        match self.degree {
            0 => {
                let mut m = vec![false; g.vertex_count()];
                for s in &self.support {
                    m[g.require(s)?.idx()] = true;
                }
                Ok(m)
            }
            1 => {
                let mut m = vec![false; g.edge_count()];
                for s in &self.support {
                    m[g.require_edge(s)?.idx()] = true;
                }
                Ok(m)
            }
            d => Err(Error::Argument(format!("cochain degree {d} is not 0 or 1"))),
        }
    }
}

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::connectivity::vertex_separation;
use crate::error::{Error, Result};
use crate::graphcore::{
    bfs_from, component_labels, components_masked, edge_subgraph, induced_subgraph, is_connected, EdgeId, Graph,
    Terminal, VertexId, Window,
};
use crate::par::Exec;

use super::map::{normalize_continuous, rational_str, QiMap};

/// A window value, flagged as a lower bound when one of the complement
/// components it ranges over reaches the window boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Measured {
    pub value: u32,
    pub lower_bound: bool,
    pub radius: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoboundaryDiameters {
    pub incut: Measured,
    pub outcut: Measured,
}

impl CoboundaryDiameters {
    /// The inclusion is a (max(1, incut/2), 0)-quasi-isometric embedding: a
    /// geodesic leaves Λ only through excursions of length ≥ 2 whose ends
    /// are at most incut apart in Λ.
    pub fn inclusion_lambda(&self) -> Rational64 {
        Rational64::new(i64::from(self.incut.value), 2).max(Rational64::from(1))
    }
}

/// incut: max over components U of g − `part` of the diameter, inside
/// `part`, of the endpoints of δU lying in `part`.
fn incut_in(g: &Graph, part: &[bool], touches: &dyn Fn(&[VertexId]) -> bool) -> (u32, bool) {
    let keep: Vec<VertexId> = g.vertices().filter(|v| part[v.idx()]).collect();
    let (sub, back) = induced_subgraph(g, &keep);
    let mut local = vec![None; g.vertex_count()];
    for (i, v) in back.iter().enumerate() {
        local[v.idx()] = Some(VertexId(i as u32));
    }
    let removed: Vec<bool> = part.to_vec();
    let mut best = 0;
    let mut lower = false;
    for u in components_masked(g, &removed, &vec![false; g.edge_count()]) {
        let mut ends: Vec<VertexId> = u
            .iter()
            .flat_map(|&x| g.neighbors(x))
            .filter_map(|y| local[y.idx()])
            .collect();
        ends.sort();
        ends.dedup();
        let mut d = 0;
        for (i, &a) in ends.iter().enumerate() {
            let row = bfs_from(&sub, &[a], None);
            for &b in &ends[i + 1..] {
                d = d.max(row[b.idx()]);
            }
        }
        lower |= touches(&u);
        best = best.max(d);
    }
    (best, lower)
}

/// Inner and outer coboundary diameters of the vertex set `lam`, measured
/// in the window. Λ = whole window gives (0, 0).
pub fn coboundary_diameters(w: &Window, lam: &[VertexId]) -> Result<CoboundaryDiameters> {
    let g = w.graph();
    let part = g.vertex_mask(lam.iter().copied());
    let (sub, _) = induced_subgraph(g, lam);
    if lam.is_empty() || !is_connected(&sub) {
        return Err(Error::Precondition("Λ must induce a nonempty connected subgraph".into()));
    }
    let touches = |u: &[VertexId]| u.iter().any(|&v| w.is_boundary(v));
    let (incut, in_lower) = incut_in(g, &part, &touches);
    let mut outcut = 0;
    let mut out_lower = false;
    let labels = component_labels(g, &part, &vec![false; g.edge_count()]);
    let count = labels.iter().flatten().max().map_or(0, |m| m + 1);
    for c in 0..count {
        let upart: Vec<bool> = labels.iter().map(|l| *l == Some(c)).collect();
        let u: Vec<VertexId> = g.vertices().filter(|v| upart[v.idx()]).collect();
        let (d, _) = incut_in(g, &upart, &touches);
        out_lower |= touches(&u);
        outcut = outcut.max(d);
    }
    let r = w.radius();
    Ok(CoboundaryDiameters {
        incut: Measured {
            value: incut,
            lower_bound: in_lower,
            radius: r,
        },
        outcut: Measured {
            value: outcut,
            lower_bound: out_lower,
            radius: r,
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutGrowthReport {
    pub applicable: bool,
    pub note: String,
    pub vs_domain: Option<usize>,
    pub vs_image: Option<usize>,
    pub ratio: Option<String>,
}

/// Least vertex separation over pairs of markers in the subgraph
/// (`vs`, `es`) of `g`.
fn subgraph_vs(g: &Graph, vs: &[VertexId], es: &[EdgeId], markers: &[Vec<VertexId>]) -> Result<usize> {
    let (sub, back) = edge_subgraph(g, vs, es)?;
    let mut local = vec![None; g.vertex_count()];
    for (i, v) in back.iter().enumerate() {
        local[v.idx()] = Some(VertexId(i as u32));
    }
    let ms: Vec<Vec<VertexId>> = markers
        .iter()
        .map(|m| m.iter().filter_map(|v| local[v.idx()]).collect())
        .collect();
    let boundary: Vec<VertexId> = ms.iter().flatten().copied().collect();
    let base = VertexId(0);
    let win = Window::from_parts(sub, base, 0, boundary, ms)?;
    let k = win.markers().len();
    let mut best = usize::MAX;
    for i in 0..k {
        for j in i + 1..k {
            best = best.min(vertex_separation(&win, Terminal::Marker(i), Terminal::Marker(j))?.value);
        }
    }
    Ok(best)
}

/// Vertex separation between the markers of the subgraph induced on `lam`,
/// and of its image subgraph under the continuous normalization of `f`.
/// Markers of Λ are the domain markers restricted to Λ.
pub fn qi_cut_growth_check(
    f: &QiMap,
    dom: &Window,
    cod: &Window,
    lam: &[VertexId],
    m_guess: usize,
    exec: Exec,
) -> Result<CutGrowthReport> {
    let (dg, cg) = (dom.graph(), cod.graph());
    let in_lam = dg.vertex_mask(lam.iter().copied());
    let markers: Vec<Vec<VertexId>> = dom
        .markers()
        .iter()
        .map(|m| m.iter().copied().filter(|v| in_lam[v.idx()]).collect::<Vec<_>>())
        .filter(|m| !m.is_empty())
        .collect();
    let not_applicable = |note: &str| CutGrowthReport {
        applicable: false,
        note: note.into(),
        vs_domain: None,
        vs_image: None,
        ratio: None,
    };
    if markers.len() < 2 {
        return Ok(not_applicable("fewer than 2 markers meet Λ"));
    }
    let lam_edges: Vec<EdgeId> = dg
        .edges()
        .filter(|&e| dg.endpoints(e).iter().all(|v| in_lam[v.idx()]))
        .collect();
    let vs1 = subgraph_vs(dg, lam, &lam_edges, &markers)?;
    if vs1 < m_guess {
        return Err(Error::Precondition(format!("vs(Λ) = {vs1} is below the guess {m_guess}")));
    }
    let norm = normalize_continuous(f, dom, cod, exec)?;
    let paths = norm.map.edge_paths.as_ref().expect("normalized");
    let mut in_v = vec![false; cg.vertex_count()];
    let mut in_e = vec![false; cg.edge_count()];
    for &v in lam {
        in_v[f.image(v).idx()] = true;
    }
    for &e in &lam_edges {
        for s in paths[e.idx()].windows(2) {
            in_v[s[1].idx()] = true;
            in_e[cg.edges_between(s[0], s[1]).into_iter().min().expect("path edge").idx()] = true;
        }
    }
    let mut images: Vec<Vec<VertexId>> = markers
        .iter()
        .map(|m| {
            let mut x: Vec<VertexId> = m.iter().map(|&v| f.image(v)).collect();
            x.sort();
            x.dedup();
            x
        })
        .collect();
    images.sort();
    let mut owner = vec![usize::MAX; cg.vertex_count()];
    for (i, m) in images.iter().enumerate() {
        for v in m {
            if owner[v.idx()] != usize::MAX && owner[v.idx()] != i {
                return Ok(not_applicable("marker images overlap"));
            }
            owner[v.idx()] = i;
        }
    }
    let vs: Vec<VertexId> = cg.vertices().filter(|v| in_v[v.idx()]).collect();
    let es: Vec<EdgeId> = cg.edges().filter(|e| in_e[e.idx()]).collect();
    let vs2 = subgraph_vs(cg, &vs, &es, &images)?;
    let ratio = Rational64::new(vs2 as i64, vs1.max(1) as i64);
    Ok(CutGrowthReport {
        applicable: true,
        note: "markers of Λ are the domain markers restricted to Λ; image markers are their images".into(),
        vs_domain: Some(vs1),
        vs_image: Some(vs2),
        ratio: Some(rational_str(ratio)),
    })
}

use std::collections::BTreeMap;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphcore::{bfs_from, edge_subgraph, EdgeId, Graph, VertexId, Window, INF};
use crate::par::{self, Exec};

/// Vertex pairs checked exhaustively below this count, sampled above it.
pub const EXHAUSTIVE_PAIRS: usize = 2000;
/// Number of sampled pairs above the exhaustive limit.
pub const SAMPLED_PAIRS: usize = 2000;
pub const SAMPLE_SEED: u64 = 0x5eed;

/// A vertex map between two windows with claimed constants (λ, ε).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QiMap {
    pub vertex_map: Vec<VertexId>,
    pub lambda: Rational64,
    pub eps: Rational64,
    /// One codomain path per domain edge, indexed by edge id.
    pub edge_paths: Option<Vec<Vec<VertexId>>>,
}

impl QiMap {
    pub fn new(vertex_map: Vec<VertexId>, lambda: Rational64, eps: Rational64) -> Self {
        QiMap {
            vertex_map,
            lambda,
            eps,
            edge_paths: None,
        }
    }

    #[inline]
    pub fn image(&self, v: VertexId) -> VertexId {
        self.vertex_map[v.idx()]
    }

    /// Totality, constant ranges and path endpoints.
    pub fn validate(&self, dom: &Graph, cod: &Graph) -> Result<()> {
        if self.lambda < Rational64::one() {
            return Err(Error::Argument(format!("lambda {} is below 1", self.lambda)));
        }
        if self.eps < Rational64::zero() {
            return Err(Error::Argument(format!("eps {} is negative", self.eps)));
        }
        if self.vertex_map.len() != dom.vertex_count() {
            return Err(Error::Precondition("map is not total on the domain".into()));
        }
        if let Some(v) = self.vertex_map.iter().find(|v| v.idx() >= cod.vertex_count()) {
            return Err(Error::UnknownVertex(v.to_string()));
        }
        if let Some(paths) = &self.edge_paths {
            if paths.len() != dom.edge_count() {
                return Err(Error::Argument("edge paths do not cover the domain edges".into()));
            }
            for e in dom.edges() {
                let [a, b] = dom.endpoints(e);
                let p = &paths[e.idx()];
                let ok = p.first() == Some(&self.image(a))
                    && p.last() == Some(&self.image(b))
                    && p.windows(2).all(|s| !cod.edges_between(s[0], s[1]).is_empty());
                if !ok {
                    return Err(Error::Argument(format!(
                        "edge path of `{}` does not join the endpoint images",
                        dom.edge_name(e)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn compose(&self, inner: &QiMap) -> QiMap {
        QiMap::new(
            inner.vertex_map.iter().map(|&v| self.image(v)).collect(),
            self.lambda * inner.lambda,
            self.lambda * inner.eps + self.eps,
        )
    }
}

pub(crate) fn rational_str(x: Rational64) -> String {
    x.to_string()
}

pub(crate) fn parse_rational(s: &str) -> Result<Rational64> {
    Rational64::from_str(s.trim()).map_err(|e| Error::Argument(format!("bad rational `{s}`: {e}")))
}

/// Which inequality a pair breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bound {
    Lower,
    Upper,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub x: String,
    pub y: String,
    pub d_domain: u32,
    /// `None` when the images are disconnected.
    pub d_codomain: Option<u32>,
    pub bound: Bound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QiReport {
    pub lambda: String,
    pub eps: String,
    pub pairs_checked: usize,
    pub exhaustive: bool,
    pub violations: Vec<Violation>,
    /// max over codomain vertices of the distance to the image.
    pub coarse_surjectivity: Option<u32>,
    pub surjective_ok: Option<bool>,
    pub passes: bool,
    pub convention: String,
}

/// All unordered pairs of `0..n` when there are fewer than
/// [`EXHAUSTIVE_PAIRS`], else a fixed-seed sample.
pub(crate) fn pair_sample(n: usize) -> (Vec<(usize, usize)>, bool) {
    let total = n * n.saturating_sub(1) / 2;
    if total < EXHAUSTIVE_PAIRS {
        let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        return (pairs, true);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let mut pairs: Vec<(usize, usize)> = (0..SAMPLED_PAIRS)
        .map(|_| loop {
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if i != j {
                break (i.min(j), i.max(j));
            }
        })
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    (pairs, false)
}

/// Pairs grouped by first element, so each group shares one BFS.
pub(crate) fn group_pairs(pairs: &[(usize, usize)]) -> Vec<(usize, Vec<usize>)> {
    let mut by: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(i, j) in pairs {
        by.entry(i).or_default().push(j);
    }
    by.into_iter().collect()
}

fn check_pair(lambda: Rational64, eps: Rational64, d: u32, fd: u32) -> Option<Bound> {
    if fd == INF {
        return Some(Bound::Upper);
    }
    let (d, fd) = (Rational64::from(i64::from(d)), Rational64::from(i64::from(fd)));
    if fd > lambda * d + eps {
        Some(Bound::Upper)
    } else if fd < d / lambda - eps {
        Some(Bound::Lower)
    } else {
        None
    }
}

/// Check (1/λ)d(x,y) − ε ≤ d(fx,fy) ≤ λd(x,y) + ε on all pairs (or a seeded
/// sample), and optionally that every codomain vertex is within ε of the
/// image. Distances are window distances.
pub fn verify_qi(f: &QiMap, dom: &Window, cod: &Window, coarse_surj: bool, exec: Exec) -> Result<QiReport> {
    let (dg, cg) = (dom.graph(), cod.graph());
    f.validate(dg, cg)?;
    let (pairs, exhaustive) = pair_sample(dg.vertex_count());
    let groups = group_pairs(&pairs);
    let found: Vec<Vec<Violation>> = par::map_slice(exec, &groups, |(i, js)| {
        let x = VertexId(*i as u32);
        let dd = bfs_from(dg, &[x], None);
        let cd = bfs_from(cg, &[f.image(x)], None);
        js.iter()
            .filter_map(|&j| {
                let y = VertexId(j as u32);
                let (d, fd) = (dd[j], cd[f.image(y).idx()]);
                check_pair(f.lambda, f.eps, d, fd).map(|bound| Violation {
                    x: dg.name(x).to_string(),
                    y: dg.name(y).to_string(),
                    d_domain: d,
                    d_codomain: (fd != INF).then_some(fd),
                    bound,
                })
            })
            .collect()
    });
    let violations: Vec<Violation> = found.into_iter().flatten().collect();
    let (coarse_surjectivity, surjective_ok) = if coarse_surj {
        let reach = coverage(f, cg);
        let ok = reach.map_or(false, |h| Rational64::from(i64::from(h)) <= f.eps);
        (reach, Some(ok))
    } else {
        (None, None)
    };
    Ok(QiReport {
        lambda: rational_str(f.lambda),
        eps: rational_str(f.eps),
        pairs_checked: pairs.len(),
        exhaustive,
        passes: violations.is_empty() && surjective_ok != Some(false),
        violations,
        coarse_surjectivity,
        surjective_ok,
        convention: format!(
            "window distances; exhaustive below {EXHAUSTIVE_PAIRS} pairs, else {SAMPLED_PAIRS} pairs seeded {SAMPLE_SEED}"
        ),
    })
}

/// Largest distance from a codomain vertex to the image; `None` if some
/// vertex cannot reach it.
fn coverage(f: &QiMap, cod: &Graph) -> Option<u32> {
    let d = bfs_from(cod, &f.vertex_map, None);
    let m = d.iter().copied().max().unwrap_or(0);
    (m != INF).then_some(m)
}

/// Geodesic from `a` to `b` stepping to the least-id vertex one closer to
/// `b` each time. `to_b` is the BFS distance from `b`.
pub(crate) fn canonical_geodesic(g: &Graph, a: VertexId, to_b: &[u32]) -> Vec<VertexId> {
    let mut p = vec![a];
    let mut x = a;
    while to_b[x.idx()] > 0 {
        x = g
            .neighbors(x)
            .filter(|y| to_b[y.idx()] + 1 == to_b[x.idx()])
            .min()
            .expect("BFS distances are consistent");
        p.push(x);
    }
    p
}

/// A map made continuous, with its image subgraph Λ.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub map: QiMap,
    /// Vertices and edges of Λ in the codomain.
    pub image_vertices: Vec<VertexId>,
    pub image_edges: Vec<EdgeId>,
    pub report: NormalizeReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizeReport {
    pub longest_edge_path: usize,
    pub image_vertices: usize,
    pub image_edges: usize,
    /// Largest degree in Λ.
    pub image_valence: usize,
    pub image_connected: bool,
    /// max d_Λ(x,y) / d(x,y) over the checked pairs of Λ; the inclusion is a
    /// (stretch, 0)-quasi-isometric embedding on the window.
    pub inclusion_stretch: Option<String>,
    pub pairs_checked: usize,
    pub exhaustive: bool,
}

/// Assign every domain edge a canonical codomain geodesic between the
/// endpoint images, and measure the image subgraph.
pub fn normalize_continuous(f: &QiMap, dom: &Window, cod: &Window, exec: Exec) -> Result<Normalized> {
    let (dg, cg) = (dom.graph(), cod.graph());
    f.validate(dg, cg)?;
    let edges: Vec<EdgeId> = dg.edges().collect();
    let paths: Vec<Vec<VertexId>> = par::map_slice(exec, &edges, |&e| {
        let [a, b] = dg.endpoints(e);
        let to_b = bfs_from(cg, &[f.image(b)], None);
        if to_b[f.image(a).idx()] == INF {
            return Vec::new();
        }
        canonical_geodesic(cg, f.image(a), &to_b)
    });
    if let Some(i) = paths.iter().position(Vec::is_empty) {
        return Err(Error::Precondition(format!(
            "images of edge `{}` are disconnected",
            dg.edge_name(EdgeId(i as u32))
        )));
    }
    let mut in_v = vec![false; cg.vertex_count()];
    let mut in_e = vec![false; cg.edge_count()];
    for &v in &f.vertex_map {
        in_v[v.idx()] = true;
    }
    for p in &paths {
        for s in p.windows(2) {
            in_v[s[1].idx()] = true;
            let e = *cg.edges_between(s[0], s[1]).iter().min().expect("path steps along edges");
            in_e[e.idx()] = true;
        }
    }
    let image_vertices: Vec<VertexId> = cg.vertices().filter(|v| in_v[v.idx()]).collect();
    let image_edges: Vec<EdgeId> = cg.edges().filter(|e| in_e[e.idx()]).collect();
    let (lam, back) = edge_subgraph(cg, &image_vertices, &image_edges)?;
    let (pairs, exhaustive) = pair_sample(lam.vertex_count());
    let groups = group_pairs(&pairs);
    let ratios: Vec<Option<Rational64>> = par::map_slice(exec, &groups, |(i, js)| {
        let dl = bfs_from(&lam, &[VertexId(*i as u32)], None);
        let dc = bfs_from(cg, &[back[*i]], None);
        let mut worst = Rational64::one();
        for &j in js {
            if dl[j] == INF {
                return None;
            }
            let r = Rational64::new(i64::from(dl[j]), i64::from(dc[back[j].idx()]));
            worst = worst.max(r);
        }
        Some(worst)
    });
    let stretch = ratios
        .into_iter()
        .try_fold(Rational64::one(), |acc, r| r.map(|r| acc.max(r)));
    let image_connected = crate::graphcore::is_connected(&lam);
    let report = NormalizeReport {
        longest_edge_path: paths.iter().map(|p| p.len() - 1).max().unwrap_or(0),
        image_vertices: image_vertices.len(),
        image_edges: image_edges.len(),
        image_valence: lam.max_degree(),
        image_connected,
        inclusion_stretch: stretch.filter(|_| image_connected).map(rational_str),
        pairs_checked: pairs.len(),
        exhaustive,
    };
    let mut map = f.clone();
    map.edge_paths = Some(paths);
    Ok(Normalized {
        map,
        image_vertices,
        image_edges,
        report,
    })
}

/// A quasi-inverse with its measured displacements.
#[derive(Clone, Debug)]
pub struct QuasiInverse {
    pub map: QiMap,
    /// max over domain x of d(g f x, x).
    pub eta_domain: u32,
    /// max over codomain y of d(f g y, y).
    pub eta_codomain: u32,
}

impl QuasiInverse {
    pub fn eta(&self) -> u32 {
        self.eta_domain.max(self.eta_codomain)
    }
}

/// g sends each codomain vertex to a preimage of a nearest image point,
/// least vertex id on ties. Fails if some codomain vertex is farther than ε
/// from the image.
pub fn quasi_inverse(f: &QiMap, dom: &Window, cod: &Window, exec: Exec) -> Result<QuasiInverse> {
    let (dg, cg) = (dom.graph(), cod.graph());
    f.validate(dg, cg)?;
    let n = cg.vertex_count();
    let mut label: Vec<Option<VertexId>> = vec![None; n];
    let mut dist = vec![INF; n];
    for x in dg.vertices() {
        let y = f.image(x);
        dist[y.idx()] = 0;
        if label[y.idx()].map_or(true, |l| x < l) {
            label[y.idx()] = Some(x);
        }
    }
    // Layered BFS: a vertex takes the least label among its parents.
    let mut layer: Vec<VertexId> = cg.vertices().filter(|v| dist[v.idx()] == 0).collect();
    let mut d = 0;
    while !layer.is_empty() {
        let mut next: Vec<VertexId> = Vec::new();
        for &u in &layer {
            for w in cg.neighbors(u) {
                if dist[w.idx()] == INF {
                    dist[w.idx()] = d + 1;
                    next.push(w);
                }
                if dist[w.idx()] == d + 1 && label[w.idx()].map_or(true, |l| label[u.idx()].unwrap() < l) {
                    label[w.idx()] = label[u.idx()];
                }
            }
        }
        next.sort();
        next.dedup();
        layer = next;
        d += 1;
    }
    for y in cg.vertices() {
        let far = dist[y.idx()] == INF || Rational64::from(i64::from(dist[y.idx()])) > f.eps;
        if far {
            return Err(Error::Precondition(format!(
                "not coarsely surjective: `{}` is farther than {} from the image",
                cg.name(y),
                f.eps
            )));
        }
    }
    let g: Vec<VertexId> = label.into_iter().map(|l| l.expect("every vertex labelled")).collect();
    let eta_codomain = dist.iter().copied().max().unwrap_or(0);
    let moved: Vec<VertexId> = dg.vertices().filter(|&x| g[f.image(x).idx()] != x).collect();
    let eta_domain = par::map_slice(exec, &moved, |&x| bfs_from(dg, &[x], None)[g[f.image(x).idx()].idx()])
        .into_iter()
        .max()
        .unwrap_or(0);
    if eta_domain == INF {
        return Err(Error::Precondition("domain is disconnected".into()));
    }
    // g is a (λ, λ(ε + 2η))-quasi-isometry by the triangle inequality through f.
    let eta = Rational64::from(i64::from(eta_codomain));
    let map = QiMap::new(g, f.lambda, f.lambda * (f.eps + eta * 2));
    Ok(QuasiInverse {
        map,
        eta_domain,
        eta_codomain,
    })
}

/// On-disk QI map: names to names, constants as "p/q" strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QiMapJson {
    pub map: BTreeMap<String, String>,
    pub lambda: String,
    pub eps: String,
    #[serde(rename = "edgePaths", default, skip_serializing_if = "Option::is_none")]
    pub edge_paths: Option<BTreeMap<String, Vec<String>>>,
}

impl QiMapJson {
    pub fn new(f: &QiMap, dom: &Graph, cod: &Graph) -> Self {
        QiMapJson {
            map: dom
                .vertices()
                .map(|v| (dom.name(v).to_string(), cod.name(f.image(v)).to_string()))
                .collect(),
            lambda: rational_str(f.lambda),
            eps: rational_str(f.eps),
            edge_paths: f.edge_paths.as_ref().map(|ps| {
                dom.edges()
                    .map(|e| {
                        let p = ps[e.idx()].iter().map(|&v| cod.name(v).to_string()).collect();
                        (dom.edge_name(e).to_string(), p)
                    })
                    .collect()
            }),
        }
    }

    pub fn to_map(&self, dom: &Graph, cod: &Graph) -> Result<QiMap> {
        let mut vm = vec![None; dom.vertex_count()];
        for (a, b) in &self.map {
            vm[dom.require(a)?.idx()] = Some(cod.require(b)?);
        }
        let vertex_map = vm
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| {
                    Error::Precondition(format!("map is not total: `{}` missing", dom.name(VertexId(i as u32))))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut f = QiMap::new(vertex_map, parse_rational(&self.lambda)?, parse_rational(&self.eps)?);
        if let Some(ps) = &self.edge_paths {
            let mut paths = vec![Vec::new(); dom.edge_count()];
            for (e, p) in ps {
                paths[dom.require_edge(e)?.idx()] = p.iter().map(|n| cod.require(n)).collect::<Result<_>>()?;
            }
            f.edge_paths = Some(paths);
        }
        f.validate(dom, cod)?;
        Ok(f)
    }
}

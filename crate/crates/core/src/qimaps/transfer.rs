use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::cuts::{make_cut, Cut};
use crate::error::{Error, Result};
use crate::graphcore::{bfs_from, component_labels, hausdorff, induced_subgraph, is_connected, VertexId, Window, INF};
use crate::par::{self, Exec};

use super::map::{quasi_inverse, rational_str, verify_qi, QiMap};

fn floor_u32(x: Rational64) -> u32 {
    x.floor().to_integer().clamp(0, i64::from(u32::MAX)) as u32
}

fn ceil_u32(x: Rational64) -> u32 {
    x.ceil().to_integer().clamp(0, i64::from(u32::MAX)) as u32
}

fn rat(x: u32) -> Rational64 {
    Rational64::from(i64::from(x))
}

/// 100λ⁵.
pub fn default_transfer_radius(lambda: Rational64) -> Rational64 {
    Rational64::from(100) * lambda * lambda * lambda * lambda * lambda
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferReport {
    pub radius: u32,
    pub eta: u32,
    /// Smallest radius the certificate covers.
    pub min_radius: u32,
    /// d_Haus(f(b), b′).
    pub hausdorff: Option<u32>,
    /// Largest distance from an endpoint of δb′ to f(endpoints of δb).
    pub coboundary_radius: Option<u32>,
    /// λ²(R + 1 + η + ε) + η + ε + 1.
    pub coboundary_bound: String,
    pub coboundary_size: usize,
    pub connected_in: bool,
    pub connected_out: Option<bool>,
    pub convention: String,
}

/// b′ = codomain ball of radius R around f(b), certified against the bound
/// from the proof: with g a quasi-inverse and d(f g y, y) ≤ η, every
/// endpoint of δb′ lies within λ²(R + 1 + η + ε) + η + ε + 1 of f(∂b) once
/// R ≥ η. Connectivity of b carries over once R ≥ ⌊⌊λ + ε⌋/2⌋.
pub fn transfer_cut(
    f: &QiMap,
    dom: &Window,
    cod: &Window,
    b: &Cut,
    radius: Option<Rational64>,
    exec: Exec,
) -> Result<(Cut, TransferReport)> {
    let (dg, cg) = (dom.graph(), cod.graph());
    if b.host() != dg.fingerprint() {
        return Err(Error::Argument("cut does not live on the domain window".into()));
    }
    let qi = verify_qi(f, dom, cod, false, exec)?;
    if !qi.passes {
        return Err(Error::Precondition(format!(
            "map violates its constants on {} checked pairs",
            qi.violations.len()
        )));
    }
    let eta = quasi_inverse(f, dom, cod, exec)?.eta_codomain;
    let r = floor_u32(radius.unwrap_or_else(|| default_transfer_radius(f.lambda)));
    let image: Vec<VertexId> = b.side().iter().map(|&v| f.image(v)).collect();
    let side: Vec<VertexId> = if image.is_empty() {
        Vec::new()
    } else {
        let d = bfs_from(cg, &image, None);
        cg.vertices().filter(|v| d[v.idx()] <= r).collect()
    };
    let out = make_cut(cod, side.iter().copied())?;

    let ends: Vec<VertexId> = b.coboundary_vertices(dg).iter().map(|&v| f.image(v)).collect();
    let out_ends = out.coboundary_vertices(cg);
    let coboundary_radius = if out_ends.is_empty() {
        Some(0)
    } else if ends.is_empty() {
        None
    } else {
        let d = bfs_from(cg, &ends, None);
        let m = out_ends.iter().map(|v| d[v.idx()]).max().unwrap_or(0);
        (m != INF).then_some(m)
    };
    let bound = f.lambda * f.lambda * (rat(r) + 1 + rat(eta) + f.eps) + rat(eta) + f.eps + 1;
    let min_radius = eta.max(floor_u32(f.lambda + f.eps) / 2);
    let hausdorff = if image.is_empty() {
        Some(0)
    } else {
        hausdorff(cg, &image, &side)?
    };
    let connected_in = b.side().is_empty() || is_connected(&induced_subgraph(dg, b.side()).0);
    let connected_out = connected_in.then(|| side.is_empty() || is_connected(&induced_subgraph(cg, &side).0));
    let report = TransferReport {
        radius: r,
        eta,
        min_radius,
        hausdorff,
        coboundary_radius,
        coboundary_bound: rational_str(bound),
        coboundary_size: out.size(),
        connected_in,
        connected_out,
        convention: "ball of radius floor(R) in the codomain window; distances are window distances".into(),
    };
    let within = coboundary_radius.map_or(false, |m| rat(m) <= bound);
    if r < min_radius || !within || connected_out == Some(false) {
        return Err(Error::Certification(format!(
            "R = {r} (certified from {min_radius}): coboundary radius {} against bound {}, hausdorff {}, connectivity {}",
            coboundary_radius.map_or("infinite".to_string(), |m| m.to_string()),
            report.coboundary_bound,
            hausdorff.map_or("infinite".to_string(), |m| m.to_string()),
            match connected_out {
                Some(false) => "lost",
                _ => "kept",
            }
        )));
    }
    Ok((out, report))
}

/// (r, R) for the finite form of the move-cuts lemma. A path joining f(x)
/// to f(y) off the r-ball of f(S) pulls back through g to a chain with
/// gaps L = λ(2η′ + 1 + ε), which must meet S; so r = η′ + ε + λ⌊⌊L⌋/2⌋
/// suffices, and R = max(η, ⌈λ(r + ε)⌉) keeps x, y and their images clear.
/// η and η′ are the domain and codomain displacements of g.
pub fn move_cuts_constants(lambda: Rational64, eps: Rational64, eta_dom: u32, eta_cod: u32) -> (u32, u32) {
    let gap = lambda * (rat(eta_cod) * 2 + 1 + eps);
    let r = ceil_u32(rat(eta_cod) + eps + lambda * rat(floor_u32(gap) / 2));
    let big = eta_dom.max(ceil_u32(lambda * (rat(r) + eps)));
    (r, big)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveCutsViolation {
    pub set: usize,
    pub x: String,
    pub y: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveCutsReport {
    pub r: u32,
    pub big_r: u32,
    pub sets: usize,
    /// Sets with at least one separated pair outside the R-ball.
    pub effective_sets: usize,
    /// Separated pairs (x, y) tested.
    pub tuples: u64,
    pub violations: Vec<MoveCutsViolation>,
}

/// For each S: every x, y outside the R-ball of S in distinct components of
/// dom − S must have images in distinct components of cod − B(f(S); r).
/// `constants` overrides the computed (r, R).
pub fn move_cuts_check(
    f: &QiMap,
    dom: &Window,
    cod: &Window,
    sets: &[Vec<VertexId>],
    constants: Option<(u32, u32)>,
    exec: Exec,
) -> Result<MoveCutsReport> {
    let (dg, cg) = (dom.graph(), cod.graph());
    let (r, big) = match constants {
        Some(c) => c,
        None => {
            let qi = quasi_inverse(f, dom, cod, exec)?;
            move_cuts_constants(f.lambda, f.eps, qi.eta_domain, qi.eta_codomain)
        }
    };
    let no_edges_d = vec![false; dg.edge_count()];
    let no_edges_c = vec![false; cg.edge_count()];
    let per_set = par::map_range(exec, sets.len(), |i| {
        let s = &sets[i];
        let in_s = dg.vertex_mask(s.iter().copied());
        let far = bfs_from(dg, s, None);
        let dom_label = component_labels(dg, &in_s, &no_edges_d);
        let img: Vec<VertexId> = s.iter().map(|&v| f.image(v)).collect();
        let blocked: Vec<bool> = if img.is_empty() {
            vec![false; cg.vertex_count()]
        } else {
            bfs_from(cg, &img, None).into_iter().map(|d| d <= r).collect()
        };
        let cod_label = component_labels(cg, &blocked, &no_edges_c);
        // Outside vertices bucketed by domain component.
        let mut buckets: std::collections::BTreeMap<usize, Vec<VertexId>> = Default::default();
        for v in dg.vertices() {
            if far[v.idx()] > big {
                if let Some(l) = dom_label[v.idx()] {
                    buckets.entry(l).or_default().push(v);
                }
            }
        }
        let sizes: Vec<u64> = buckets.values().map(|b| b.len() as u64).collect();
        let total: u64 = sizes.iter().sum();
        let tuples: u64 = sizes.iter().map(|&k| k * (total - k)).sum::<u64>() / 2;
        let mut seen: std::collections::BTreeMap<Option<usize>, (usize, VertexId)> = Default::default();
        let mut bad = Vec::new();
        for (&l, vs) in &buckets {
            for &v in vs {
                let c = cod_label[f.image(v).idx()];
                // An image inside the r-ball is itself a failure.
                if c.is_none() {
                    bad.push((v, v));
                    continue;
                }
                match seen.get(&c) {
                    Some(&(l2, w)) if l2 != l => bad.push((w, v)),
                    None => {
                        seen.insert(c, (l, v));
                    }
                    _ => {}
                }
            }
        }
        (tuples, bad)
    });
    let mut report = MoveCutsReport {
        r,
        big_r: big,
        sets: sets.len(),
        effective_sets: 0,
        tuples: 0,
        violations: Vec::new(),
    };
    for (i, (t, bad)) in per_set.into_iter().enumerate() {
        report.tuples += t;
        report.effective_sets += usize::from(t > 0);
        report.violations.extend(bad.into_iter().map(|(x, y)| MoveCutsViolation {
            set: i,
            x: dg.name(x).to_string(),
            y: dg.name(y).to_string(),
        }));
    }
    Ok(report)
}

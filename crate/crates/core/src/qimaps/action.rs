use std::collections::BTreeMap;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphcore::{DistanceTable, VertexId, Window, INF};
use crate::par::{self, Exec};
use crate::planar::{faces, is_two_connected, PlanarEmbedding};

use super::map::{group_pairs, pair_sample, rational_str, verify_qi, QiMap};

/// Finitely many maps of one window standing in for a quasi-action.
/// `products` lists triples (g, h, gh) whose composition defect is checked.
#[derive(Clone, Debug)]
pub struct QuasiActionSample {
    pub maps: BTreeMap<String, QiMap>,
    pub products: Vec<[String; 3]>,
    pub lambda: Rational64,
    pub cobound: Rational64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiActionReport {
    pub labels: Vec<String>,
    /// Labels failing the (λ, λ) quasi-isometry check.
    pub non_qi: Vec<String>,
    pub max_composition_defect: u32,
    pub composition_ok: bool,
    /// max over sampled (x, y) of min over labels g of d(x, φ_g y).
    pub cobounded_max: u32,
    pub cobounded_ok: bool,
    pub sample: String,
}

impl QuasiActionSample {
    fn get(&self, label: &str) -> Result<&QiMap> {
        self.maps
            .get(label)
            .ok_or_else(|| Error::Argument(format!("unknown group label `{label}`")))
    }

    /// Check the axioms on the sample. The result certifies nothing about
    /// labels outside it.
    pub fn check(&self, w: &Window, exec: Exec) -> Result<QuasiActionReport> {
        let g = w.graph();
        let table = DistanceTable::new(g, exec);
        let mut non_qi = Vec::new();
        for (label, f) in &self.maps {
            let mut probe = f.clone();
            probe.lambda = self.lambda;
            probe.eps = self.lambda;
            if !verify_qi(&probe, w, w, false, exec)?.passes {
                non_qi.push(label.clone());
            }
        }
        let mut defect = 0;
        for [a, b, ab] in &self.products {
            let (fa, fb, fab) = (self.get(a)?, self.get(b)?, self.get(ab)?);
            for x in g.vertices() {
                defect = defect.max(table.get(fab.image(x), fa.image(fb.image(x))));
            }
        }
        let (pairs, exhaustive) = pair_sample(g.vertex_count());
        let maps: Vec<&QiMap> = self.maps.values().collect();
        let worst = par::map_slice(exec, &group_pairs(&pairs), |(i, js)| {
            let x = VertexId(*i as u32);
            js.iter()
                .map(|&j| {
                    let y = VertexId(j as u32);
                    maps.iter().map(|f| table.get(x, f.image(y))).min().unwrap_or(INF)
                })
                .max()
                .unwrap_or(0)
        })
        .into_iter()
        .max()
        .unwrap_or(0);
        let lam = self.lambda;
        Ok(QuasiActionReport {
            labels: self.maps.keys().cloned().collect(),
            non_qi,
            max_composition_defect: defect,
            composition_ok: Rational64::from(i64::from(defect)) <= lam,
            cobounded_max: worst,
            cobounded_ok: worst != INF && Rational64::from(i64::from(worst)) <= self.cobound,
            sample: format!(
                "{} labels, {} product triples, {} point pairs ({}), lambda {}",
                self.maps.len(),
                self.products.len(),
                pairs.len(),
                if exhaustive { "all" } else { "seeded sample" },
                rational_str(lam)
            ),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodBehaviorReport {
    pub faces_checked: usize,
    /// max over labels g and checked faces f of min over faces f′ of
    /// d_Haus(f′, φ_g(f)).
    pub max_distance: u32,
    pub worst: Option<(String, Vec<String>)>,
    pub gb1: bool,
    /// The drawn graph is 2-connected.
    pub gb2: bool,
    pub convention: String,
}

/// Good-behaviour diagnostics on a drawn window: faces of diameter > n
/// must be moved by every sampled map to within Hausdorff distance < m of
/// some face. Faces touching the window boundary are skipped.
pub fn good_behavior_check(qa: &QuasiActionSample, emb: &PlanarEmbedding, n: u32, m: u32, exec: Exec) -> Result<GoodBehaviorReport> {
    let g = emb.graph();
    for f in qa.maps.values() {
        f.validate(g, g)?;
    }
    let table = DistanceTable::new(g, exec);
    let all = faces(emb);
    let set_diam = |vs: &[VertexId]| {
        vs.iter()
            .flat_map(|&a| vs.iter().map(move |&b| (a, b)))
            .map(|(a, b)| table.get(a, b))
            .max()
            .unwrap_or(0)
    };
    let haus = |a: &[VertexId], b: &[VertexId]| {
        let one = |p: &[VertexId], q: &[VertexId]| {
            p.iter()
                .map(|&x| q.iter().map(|&y| table.get(x, y)).min().unwrap_or(INF))
                .max()
                .unwrap_or(0)
        };
        one(a, b).max(one(b, a))
    };
    let checked: Vec<usize> = (0..all.len())
        .filter(|&i| !all[i].boundary_touching && set_diam(&all[i].vertices) > n)
        .collect();
    let jobs: Vec<(&String, usize)> = qa
        .maps
        .keys()
        .flat_map(|l| checked.iter().map(move |&i| (l, i)))
        .collect();
    let scores = par::map_slice(exec, &jobs, |&(label, i)| {
        let f = &qa.maps[label];
        let img: Vec<VertexId> = all[i].vertices.iter().map(|&v| f.image(v)).collect();
        all.iter().map(|f2| haus(&f2.vertices, &img)).min().unwrap_or(INF)
    });
    let best = scores.iter().enumerate().max_by_key(|&(k, &s)| (s, std::cmp::Reverse(k)));
    let max_distance = best.map_or(0, |(_, &s)| s);
    let worst = best.map(|(k, _)| {
        let (label, i) = jobs[k];
        (label.clone(), g.sorted_names(all[i].vertices.iter().copied()))
    });
    Ok(GoodBehaviorReport {
        faces_checked: checked.len(),
        max_distance,
        worst,
        gb1: max_distance < m,
        gb2: is_two_connected(g),
        convention: "faces touching the window boundary are skipped; distances are window distances".into(),
    })
}

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graphcore::{EdgeId, Graph, VertexId, Window};
use crate::par::{self, Exec};

use super::cut::{induces_connected, Cut};

/// Limits for the exponential searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Largest coboundary size `enumerate_tight_cuts` accepts.
    pub max_cut_size: usize,
    /// Search-node cap per seed edge; hitting it truncates the result.
    pub max_nodes: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_cut_size: 8,
            max_nodes: 20_000_000,
        }
    }
}

impl Budget {
    /// Default budget with `max_nodes` overridden by `SPLITTOOL_BUDGET`.
    pub fn from_env() -> Self {
        let mut b = Budget::default();
        if let Some(n) = std::env::var("SPLITTOOL_BUDGET")
            .ok()
            .and_then(|s| s.trim().parse().ok())
        {
            b.max_nodes = n;
        }
        b
    }
}

/// Enumeration result; `truncated` flags a partial list.
#[derive(Clone, Debug)]
pub struct TightCuts {
    pub cuts: Vec<Cut>,
    pub truncated: bool,
}

struct Search<'a> {
    g: &'a Graph,
    w: &'a Window,
    k: usize,
    in_s: Vec<bool>,
    out: Vec<bool>,
    frontier: BTreeSet<VertexId>,
    cut: usize,
    nodes: u64,
    max_nodes: u64,
    truncated: bool,
    found: Vec<Vec<bool>>,
}

impl Search<'_> {
    fn count_into(&self, f: VertexId, set: &[bool]) -> usize {
        self.g.neighbors(f).filter(|x| set[x.idx()]).count()
    }

    fn run(&mut self) {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            self.truncated = true;
            return;
        }
        let Some(&f) = self.frontier.iter().next() else {
            self.leaf();
            return;
        };
        self.frontier.remove(&f);

        // Put f on the growing side.
        let added = self.count_into(f, &self.out);
        if self.cut + added <= self.k && !(added > 0 && self.w.is_boundary(f)) {
            self.in_s[f.idx()] = true;
            self.cut += added;
            let fresh: Vec<VertexId> = self
                .g
                .neighbors(f)
                .filter(|x| !self.in_s[x.idx()] && !self.out[x.idx()] && !self.frontier.contains(x))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            self.frontier.extend(fresh.iter().copied());
            self.run();
            for x in &fresh {
                self.frontier.remove(x);
            }
            self.cut -= added;
            self.in_s[f.idx()] = false;
        }

        // Keep f out: every edge from f to the side is cut.
        let added = self.count_into(f, &self.in_s);
        let touches = self
            .g
            .neighbors(f)
            .any(|x| self.in_s[x.idx()] && self.w.is_boundary(x));
        if self.cut + added <= self.k && !self.w.is_boundary(f) && !touches {
            self.out[f.idx()] = true;
            self.cut += added;
            self.run();
            self.cut -= added;
            self.out[f.idx()] = false;
        }

        self.frontier.insert(f);
    }

    fn leaf(&mut self) {
        let rest: Vec<bool> = self.in_s.iter().map(|m| !m).collect();
        if induces_connected(self.g, &rest) {
            self.found.push(self.in_s.clone());
        }
    }
}

/// All tight cuts with `e ∈ δb`, `|δb| ≤ k` and δb avoiding the boundary
/// sphere. Each cut is reported by the side not containing the basepoint.
pub fn enumerate_tight_cuts(w: &Window, e: EdgeId, k: usize, budget: &Budget) -> Result<TightCuts> {
    let g = w.graph();
    if e.idx() >= g.edge_count() {
        return Err(Error::UnknownEdge(format!("{}", e.0)));
    }
    if k == 0 {
        return Err(Error::Argument("k must be at least 1".into()));
    }
    if k > budget.max_cut_size {
        return Err(Error::Budget(format!(
            "cut size {k} exceeds the configured maximum {}",
            budget.max_cut_size
        )));
    }
    if !w.is_interior_edge(e) {
        return Ok(TightCuts {
            cuts: Vec::new(),
            truncated: false,
        });
    }
    let [u, v] = g.endpoints(e);
    let n = g.vertex_count();
    let mut s = Search {
        g,
        w,
        k,
        in_s: vec![false; n],
        out: vec![false; n],
        frontier: BTreeSet::new(),
        cut: g.edges_between(u, v).len(),
        nodes: 0,
        max_nodes: budget.max_nodes,
        truncated: false,
        found: Vec::new(),
    };
    if s.cut <= k {
        s.in_s[u.idx()] = true;
        s.out[v.idx()] = true;
        s.frontier = g
            .neighbors(u)
            .filter(|&x| x != v)
            .collect();
        s.run();
    }
    let base = w.basepoint();
    let mut cuts: Vec<Cut> = s
        .found
        .into_iter()
        .map(|mut m| {
            if m[base.idx()] {
                m.iter_mut().for_each(|x| *x = !*x);
            }
            Cut::from_mask(g, m)
        })
        .collect();
    sort_canonical(g, &mut cuts);
    Ok(TightCuts {
        cuts,
        truncated: s.truncated,
    })
}

/// Union of [`enumerate_tight_cuts`] over every interior edge, one seed
/// edge per task.
pub fn enumerate_all_tight_cuts(w: &Window, k: usize, budget: &Budget, exec: Exec) -> Result<TightCuts> {
    let edges: Vec<EdgeId> = w.graph().edges().filter(|&e| w.is_interior_edge(e)).collect();
    let per_edge = par::map_slice(exec, &edges, |&e| enumerate_tight_cuts(w, e, k, budget));
    let mut seen: BTreeMap<Vec<String>, Cut> = BTreeMap::new();
    let mut truncated = false;
    for r in per_edge {
        let r = r?;
        truncated |= r.truncated;
        for c in r.cuts {
            seen.entry(c.names(w.graph())).or_insert(c);
        }
    }
    Ok(TightCuts {
        cuts: seen.into_values().collect(),
        truncated,
    })
}

/// Sort by sorted vertex-name lists.
pub fn sort_canonical(g: &Graph, cuts: &mut [Cut]) {
    cuts.sort_by_cached_key(|c| c.names(g));
}

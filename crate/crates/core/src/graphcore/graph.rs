use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexId(pub u32);

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeId(pub u32);

impl VertexId {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// Finite undirected multigraph without loops. Vertices and edges carry
/// string ids; internal indices are dense.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    lookup: HashMap<String, VertexId>,
    ends: Vec<[VertexId; 2]>,
    edge_names: Vec<String>,
    edge_lookup: HashMap<String, EdgeId>,
    incident: Vec<Vec<EdgeId>>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Convenience constructor from id strings and endpoint pairs; edges are
    /// named `e0, e1, ...`.
    pub fn from_edges<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Self> {
        let mut g = Graph::new();
        for v in vertices {
            g.add_vertex(v.as_ref())?;
        }
        for (u, v) in edges {
            let u = g.require(u.as_ref())?;
            let v = g.require(v.as_ref())?;
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, name: &str) -> Result<VertexId> {
        if self.lookup.contains_key(name) {
            return Err(Error::Argument(format!("duplicate vertex `{name}`")));
        }
        let id = VertexId(self.names.len() as u32);
        self.names.push(name.to_string());
        self.lookup.insert(name.to_string(), id);
        self.incident.push(Vec::new());
        Ok(id)
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId> {
        let name = format!("e{}", self.ends.len());
        self.add_named_edge(&name, u, v)
    }

    pub fn add_named_edge(&mut self, name: &str, u: VertexId, v: VertexId) -> Result<EdgeId> {
        if u.idx() >= self.names.len() || v.idx() >= self.names.len() {
            return Err(Error::Argument("edge endpoint out of range".into()));
        }
        if u == v {
            return Err(Error::Argument(format!(
                "loop at `{}` not supported",
                self.names[u.idx()]
            )));
        }
        if self.edge_lookup.contains_key(name) {
            return Err(Error::Argument(format!("duplicate edge `{name}`")));
        }
        let e = EdgeId(self.ends.len() as u32);
        self.ends.push([u, v]);
        self.edge_names.push(name.to_string());
        self.edge_lookup.insert(name.to_string(), e);
        self.incident[u.idx()].push(e);
        self.incident[v.idx()].push(e);
        Ok(e)
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.ends.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.names.len() as u32).map(VertexId)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.ends.len() as u32).map(EdgeId)
    }

    #[inline]
    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v.idx()]
    }

    #[inline]
    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edge_names[e.idx()]
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.lookup.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<VertexId> {
        self.vertex(name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn edge(&self, name: &str) -> Option<EdgeId> {
        self.edge_lookup.get(name).copied()
    }

    pub fn require_edge(&self, name: &str) -> Result<EdgeId> {
        self.edge(name)
            .ok_or_else(|| Error::UnknownEdge(name.to_string()))
    }

    #[inline]
    pub fn endpoints(&self, e: EdgeId) -> [VertexId; 2] {
        self.ends[e.idx()]
    }

    /// The endpoint of `e` that is not `v`.
    #[inline]
    pub fn other(&self, e: EdgeId, v: VertexId) -> VertexId {
        let [a, b] = self.ends[e.idx()];
        if a == v {
            b
        } else {
            a
        }
    }

    #[inline]
    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        &self.incident[v.idx()]
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.incident[v.idx()].iter().map(move |&e| self.other(e, v))
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        self.incident[v.idx()].len()
    }

    pub fn max_degree(&self) -> usize {
        self.incident.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Edges joining `u` and `v` (several for a multigraph).
    pub fn edges_between(&self, u: VertexId, v: VertexId) -> Vec<EdgeId> {
        self.incident[u.idx()]
            .iter()
            .copied()
            .filter(|&e| self.other(e, u) == v)
            .collect()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Vertex ids sorted by their string names.
    pub fn sorted_names(&self, vs: impl IntoIterator<Item = VertexId>) -> Vec<String> {
        let mut out: Vec<String> = vs.into_iter().map(|v| self.name(v).to_string()).collect();
        out.sort();
        out
    }

    pub fn sorted_edge_names(&self, es: impl IntoIterator<Item = EdgeId>) -> Vec<String> {
        let mut out: Vec<String> = es
            .into_iter()
            .map(|e| self.edge_name(e).to_string())
            .collect();
        out.sort();
        out
    }

    /// Content hash used to detect cuts from different hosts.
    pub fn fingerprint(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.names.hash(&mut h);
        self.ends.hash(&mut h);
        h.finish()
    }

    pub fn vertex_mask(&self, vs: impl IntoIterator<Item = VertexId>) -> Vec<bool> {
        let mut mask = vec![false; self.vertex_count()];
        for v in vs {
            mask[v.idx()] = true;
        }
        mask
    }
}

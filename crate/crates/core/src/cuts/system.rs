use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graphcore::{VertexId, Window};

use super::cut::Cut;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Member {
    pub vertices: Vec<VertexId>,
    /// Indices of the window markers this member meets.
    pub markers: Vec<usize>,
}

/// A finite family of vertex sets of one window, each tagged with the end
/// markers it meets.
#[derive(Clone, Debug, Default)]
pub struct SubgraphSystem {
    members: Vec<Member>,
}

impl SubgraphSystem {
    pub fn new(w: &Window, sets: Vec<Vec<VertexId>>) -> Result<Self> {
        let n = w.graph().vertex_count();
        let mut seen = BTreeSet::new();
        let mut members = Vec::with_capacity(sets.len());
        for mut vs in sets {
            vs.sort();
            vs.dedup();
            if vs.iter().any(|v| v.idx() >= n) {
                return Err(Error::Argument("member vertex outside the window".into()));
            }
            if !seen.insert(vs.clone()) {
                return Err(Error::Argument("duplicate member".into()));
            }
            let mut markers: Vec<usize> = vs.iter().filter_map(|&v| w.marker_of(v)).collect();
            markers.sort();
            markers.dedup();
            members.push(Member { vertices: vs, markers });
        }
        Ok(SubgraphSystem { members })
    }

    pub fn from_names<S: AsRef<str>>(w: &Window, sets: &[Vec<S>]) -> Result<Self> {
        let g = w.graph();
        let sets = sets
            .iter()
            .map(|s| s.iter().map(|x| g.require(x.as_ref())).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(w, sets)
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Largest number of members through a single vertex.
    pub fn max_multiplicity(&self, w: &Window) -> usize {
        let mut count = vec![0usize; w.graph().vertex_count()];
        for m in &self.members {
            for v in &m.vertices {
                count[v.idx()] += 1;
            }
        }
        count.into_iter().max().unwrap_or(0)
    }
}

/// For every member Y, b∩Y or b*∩Y avoids the boundary sphere.
pub fn is_h_finite(w: &Window, c: &Cut, h: &SubgraphSystem) -> bool {
    h.members.iter().all(|m| {
        let mut hits = [false; 2];
        for &v in &m.vertices {
            if w.is_boundary(v) {
                hits[usize::from(c.contains(v))] = true;
            }
        }
        !(hits[0] && hits[1])
    })
}

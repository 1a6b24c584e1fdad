use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphcore::{bfs_from, components_masked, EdgeId, Graph, VertexId, Window, INF};

/// A vertex set `b` of a window together with its coboundary δb.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cut {
    host: u64,
    member: Vec<bool>,
    side: Vec<VertexId>,
    coboundary: Vec<EdgeId>,
}

impl Cut {
    pub(crate) fn from_mask(g: &Graph, member: Vec<bool>) -> Cut {
        let side: Vec<VertexId> = g.vertices().filter(|v| member[v.idx()]).collect();
        let coboundary: Vec<EdgeId> = g
            .edges()
            .filter(|&e| {
                let [a, b] = g.endpoints(e);
                member[a.idx()] != member[b.idx()]
            })
            .collect();
        Cut {
            host: g.fingerprint(),
            member,
            side,
            coboundary,
        }
    }

    /// Sorted side (by vertex index).
    pub fn side(&self) -> &[VertexId] {
        &self.side
    }

    #[inline]
    pub fn contains(&self, v: VertexId) -> bool {
        self.member[v.idx()]
    }

    pub fn mask(&self) -> &[bool] {
        &self.member
    }

    pub fn coboundary(&self) -> &[EdgeId] {
        &self.coboundary
    }

    /// |δb|.
    pub fn size(&self) -> usize {
        self.coboundary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.side.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.side.len() == self.member.len()
    }

    pub fn host(&self) -> u64 {
        self.host
    }

    /// b* within the same host.
    pub fn complement(&self, w: &Window) -> Cut {
        Cut::from_mask(w.graph(), self.member.iter().map(|m| !m).collect())
    }

    /// Side as sorted vertex names, the serialized form.
    pub fn names(&self, g: &Graph) -> Vec<String> {
        g.sorted_names(self.side.iter().copied())
    }

    /// Endpoints of coboundary edges, sorted and deduplicated.
    pub fn coboundary_vertices(&self, g: &Graph) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = self
            .coboundary
            .iter()
            .flat_map(|&e| g.endpoints(e))
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

/// Serialized cut: sorted side names plus sorted coboundary edge ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutJson {
    pub side: Vec<String>,
    pub coboundary: Vec<String>,
}

impl CutJson {
    pub fn new(g: &Graph, c: &Cut) -> Self {
        CutJson {
            side: c.names(g),
            coboundary: g.sorted_edge_names(c.coboundary().iter().copied()),
        }
    }
}

pub fn make_cut(w: &Window, side: impl IntoIterator<Item = VertexId>) -> Result<Cut> {
    let g = w.graph();
    let mut member = vec![false; g.vertex_count()];
    for v in side {
        if v.idx() >= g.vertex_count() {
            return Err(Error::UnknownVertex(v.to_string()));
        }
        member[v.idx()] = true;
    }
    Ok(Cut::from_mask(g, member))
}

/// Cut from vertex names.
pub fn make_cut_named<S: AsRef<str>>(w: &Window, side: &[S]) -> Result<Cut> {
    let g = w.graph();
    let vs = side
        .iter()
        .map(|s| g.require(s.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    make_cut(w, vs)
}

fn same_host(w: &Window, c: &Cut) -> Result<()> {
    if c.host != w.graph().fingerprint() || c.member.len() != w.graph().vertex_count() {
        return Err(Error::Argument("cut belongs to a different window".into()));
    }
    Ok(())
}

fn same_hosts(a: &Cut, b: &Cut) -> Result<()> {
    if a.host != b.host || a.member.len() != b.member.len() {
        return Err(Error::Argument("cuts live in different windows".into()));
    }
    Ok(())
}

/// True iff removing δb leaves exactly two components.
pub fn is_tight(w: &Window, c: &Cut) -> bool {
    let g = w.graph();
    let mut removed = vec![false; g.edge_count()];
    for e in c.coboundary() {
        removed[e.idx()] = true;
    }
    components_masked(g, &vec![false; g.vertex_count()], &removed).len() == 2
}

/// All four corners nonempty.
pub fn crosses(a: &Cut, b: &Cut) -> Result<bool> {
    same_hosts(a, b)?;
    let mut corners = [false; 4];
    for (x, y) in a.member.iter().zip(&b.member) {
        corners[usize::from(*x) * 2 + usize::from(*y)] = true;
    }
    Ok(corners.iter().all(|&c| c))
}

/// Max window distance between endpoints of coboundary edges.
pub fn cut_diameter(w: &Window, c: &Cut) -> Result<u32> {
    same_host(w, c)?;
    if c.coboundary.is_empty() {
        return Err(Error::Argument("empty coboundary has no diameter".into()));
    }
    let g = w.graph();
    let ends = c.coboundary_vertices(g);
    let mut best = 0;
    for &u in &ends {
        let d = bfs_from(g, &[u], None);
        for &v in &ends {
            if d[v.idx()] == INF {
                return Err(Error::Precondition("window is disconnected".into()));
            }
            best = best.max(d[v.idx()]);
        }
    }
    Ok(best)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RingOp {
    Union,
    Intersection,
    SymmetricDifference,
    Complement,
}

/// Boolean ring operations on sides, coboundary recomputed in `w`.
/// `Complement` ignores `b`.
pub fn ring_op(w: &Window, op: RingOp, a: &Cut, b: Option<&Cut>) -> Result<Cut> {
    same_host(w, a)?;
    let pick = |f: fn(bool, bool) -> bool| -> Result<Vec<bool>> {
        let b = b.ok_or_else(|| Error::Argument(format!("{op:?} needs two cuts")))?;
        same_hosts(a, b)?;
        Ok(a.member.iter().zip(&b.member).map(|(x, y)| f(*x, *y)).collect())
    };
    let member = match op {
        RingOp::Complement => a.member.iter().map(|m| !m).collect(),
        RingOp::Union => pick(|x, y| x || y)?,
        RingOp::Intersection => pick(|x, y| x && y)?,
        RingOp::SymmetricDifference => pick(|x, y| x != y)?,
    };
    Ok(Cut::from_mask(w.graph(), member))
}

/// The tight component trick: `u` must be a component of the window minus
/// `b0`, and `b0` must induce a connected subgraph. Returns `u` as a cut.
pub fn tight_from_component(w: &Window, b0: &Cut, u: &[VertexId]) -> Result<Cut> {
    same_host(w, b0)?;
    let g = w.graph();
    if b0.is_empty() || !induces_connected(g, b0.mask()) {
        return Err(Error::Precondition("b0 does not induce a connected subgraph".into()));
    }
    let comps = components_masked(g, b0.mask(), &vec![false; g.edge_count()]);
    let mut want = u.to_vec();
    want.sort();
    want.dedup();
    if !comps.iter().any(|c| *c == want) {
        return Err(Error::Precondition("U is not a component of the complement of b0".into()));
    }
    make_cut(w, want)
}

/// The two-path tight trick: from `b` with e1, e2 ∈ δb joined by paths on
/// both sides, build a tight cut c with δc ⊆ δb and e1, e2 ∈ δc. The
/// returned side is the one containing the b-endpoint of e1.
pub fn tight_between_edges(w: &Window, b: &Cut, e1: EdgeId, e2: EdgeId) -> Result<Cut> {
    same_host(w, b)?;
    let g = w.graph();
    let cob = b.coboundary();
    if !cob.contains(&e1) || !cob.contains(&e2) {
        return Err(Error::Argument("e1 and e2 must lie in the coboundary".into()));
    }
    let split = |e: EdgeId| {
        let [x, y] = g.endpoints(e);
        if b.contains(x) {
            (x, y)
        } else {
            (y, x)
        }
    };
    let (x1, y1) = split(e1);
    let (x2, y2) = split(e2);
    let not_b: Vec<bool> = b.mask().iter().map(|m| !m).collect();
    // A = component of X[b] through x1; it must reach x2.
    let in_b = bfs_from(g, &[x1], Some(&not_b));
    if in_b[x2.idx()] == INF {
        return Err(Error::Precondition("no path inside b joins e1 and e2".into()));
    }
    let a_mask: Vec<bool> = g.vertices().map(|v| in_b[v.idx()] != INF).collect();
    let in_bstar = bfs_from(g, &[y1], Some(b.mask()));
    if in_bstar[y2.idx()] == INF {
        return Err(Error::Precondition("no path inside b* joins e1 and e2".into()));
    }
    // B = component of X − A through y1; the result is X − B.
    let beyond = bfs_from(g, &[y1], Some(&a_mask));
    let member: Vec<bool> = g.vertices().map(|v| beyond[v.idx()] == INF).collect();
    Ok(Cut::from_mask(g, member))
}

/// The four corners b1∩b2, b1∩b2*, b1*∩b2, b1*∩b2* of a crossing pair.
pub fn uncross_pair(w: &Window, a: &Cut, b: &Cut) -> Result<[Cut; 4]> {
    same_host(w, a)?;
    if !crosses(a, b)? {
        return Err(Error::Argument("cuts are nested".into()));
    }
    let g = w.graph();
    let corner = |x: bool, y: bool| {
        let member = a
            .member
            .iter()
            .zip(&b.member)
            .map(|(p, q)| *p == x && *q == y)
            .collect();
        Cut::from_mask(g, member)
    };
    Ok([corner(true, true), corner(true, false), corner(false, true), corner(false, false)])
}

pub(crate) fn induces_connected(g: &Graph, mask: &[bool]) -> bool {
    let Some(start) = g.vertices().find(|v| mask[v.idx()]) else {
        return true;
    };
    let outside: Vec<bool> = mask.iter().map(|m| !m).collect();
    let d = bfs_from(g, &[start], Some(&outside));
    g.vertices().all(|v| !mask[v.idx()] || d[v.idx()] != INF)
}

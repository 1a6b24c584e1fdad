use serde::{Deserialize, Serialize};

use crate::cuts::{is_h_finite, Cut, SubgraphSystem};
use crate::error::{Error, Result};
use crate::graphcore::{VertexId, Window};
use crate::planar::{boundary_face_system, faces, Face, PlanarEmbedding};

use super::cohomology::{h1_rank, relative_chomp_check};
use super::complex::{cone_off, Complex2, Coned};

/// The embedded graph with the selected faces attached as cells.
pub fn face_complex(emb: &PlanarEmbedding, fill: impl Fn(&Face) -> bool) -> Result<Complex2> {
    let cells = faces(emb).into_iter().filter(|f| fill(f)).map(|f| f.darts).collect();
    Complex2::new(emb.graph().clone(), cells)
}

/// Fill-then-cone outcome for one window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FillConeReport {
    pub radius: u32,
    pub filled_faces: usize,
    pub coned_members: usize,
    pub h1_filled: usize,
    pub h1_coned: usize,
    pub chomp: bool,
    /// Cocycles off the boundary star of the filled complex are coboundaries.
    pub relative_chomp: bool,
    pub convention: String,
}

/// Fill every face that avoids the window boundary, then cone off the
/// facial subgraphs of the boundary-touching faces.
pub fn fill_and_cone(w: &Window, emb: &PlanarEmbedding) -> Result<(Coned, FillConeReport)> {
    let filled = face_complex(emb, |f| !f.boundary_touching)?;
    let h = boundary_face_system(w, emb)?;
    let members: Vec<Vec<VertexId>> = h.members().iter().map(|m| m.vertices.clone()).collect();
    let coned = cone_off(&filled, &members)?;
    let boundary: Vec<bool> = w.graph().vertices().map(|v| w.is_boundary(v)).collect();
    let h1_coned = h1_rank(&coned.complex);
    let report = FillConeReport {
        radius: w.radius(),
        filled_faces: filled.cell_count(),
        coned_members: members.len(),
        h1_filled: h1_rank(&filled),
        h1_coned,
        chomp: h1_coned == 0,
        relative_chomp: relative_chomp_check(&filled, &boundary),
        convention: "members are induced on boundary-face vertex sets; relative CHomP uses cocycles off the boundary star"
            .into(),
    };
    Ok((coned, report))
}

fn check_host(w: &Window, k: &Complex2) -> Result<()> {
    if w.graph().fingerprint() != k.skeleton().fingerprint() {
        return Err(Error::Argument("complex skeleton is not the window graph".into()));
    }
    Ok(())
}

/// The map g: the cut extended to the coned complex, with the cone vertex of
/// a member included when the cut holds that member's boundary vertices.
pub fn cone_extension(w: &Window, coned: &Coned, h: &SubgraphSystem, b: &Cut) -> Result<Vec<bool>> {
    if !is_h_finite(w, b, h) {
        return Err(Error::Precondition("cut is not H-finite".into()));
    }
    if coned.cone_vertices.len() != h.len() {
        return Err(Error::Argument("coned complex does not match the system".into()));
    }
    let mut out = b.mask().to_vec();
    out.resize(coned.complex.skeleton().vertex_count(), false);
    for (m, &c) in h.members().iter().zip(&coned.cone_vertices) {
        out[c.idx()] = m.vertices.iter().any(|&v| w.is_boundary(v) && b.contains(v));
    }
    Ok(out)
}

/// The map f: restriction to the original vertices.
pub fn cone_restriction(w: &Window, b: &[bool]) -> Vec<bool> {
    b[..w.graph().vertex_count()].to_vec()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingIsoReport {
    /// f(g(b)) = b.
    pub round_trip: bool,
    /// No cone edge to a boundary vertex is cut by g(b).
    pub finite_coboundary: bool,
    /// Cone vertices placed in g(b).
    pub cone_vertices_in: usize,
}

/// Round trip through the coned complex. `k` must have the window graph as
/// its skeleton.
pub fn ring_iso_round_trip(w: &Window, k: &Complex2, h: &SubgraphSystem, b: &Cut) -> Result<RingIsoReport> {
    check_host(w, k)?;
    let coned = cone_off(k, &h.members().iter().map(|m| m.vertices.clone()).collect::<Vec<_>>())?;
    let gb = cone_extension(w, &coned, h, b)?;
    let cg = coned.complex.skeleton();
    let finite_coboundary = coned.cone_vertices.iter().all(|&c| {
        cg.incident(c).iter().all(|&e| {
            let y = cg.other(e, c);
            gb[c.idx()] == gb[y.idx()] || !w.is_boundary(y)
        })
    });
    Ok(RingIsoReport {
        round_trip: cone_restriction(w, &gb) == b.mask(),
        finite_coboundary,
        cone_vertices_in: coned.cone_vertices.iter().filter(|c| gb[c.idx()]).count(),
    })
}

/// g(a + b) = g(a) + g(b) and g(a·b) = g(a)·g(b), and the same for f.
pub fn ring_iso_homomorphism(w: &Window, k: &Complex2, h: &SubgraphSystem, a: &Cut, b: &Cut) -> Result<bool> {
    check_host(w, k)?;
    let coned = cone_off(k, &h.members().iter().map(|m| m.vertices.clone()).collect::<Vec<_>>())?;
    let g = w.graph();
    let sum = crate::cuts::make_cut(w, g.vertices().filter(|v| a.contains(*v) != b.contains(*v)))?;
    let prod = crate::cuts::make_cut(w, g.vertices().filter(|v| a.contains(*v) && b.contains(*v)))?;
    let (ga, gb) = (cone_extension(w, &coned, h, a)?, cone_extension(w, &coned, h, b)?);
    let (gs, gp) = (cone_extension(w, &coned, h, &sum)?, cone_extension(w, &coned, h, &prod)?);
    let xor: Vec<bool> = ga.iter().zip(&gb).map(|(x, y)| x != y).collect();
    let and: Vec<bool> = ga.iter().zip(&gb).map(|(x, y)| *x && *y).collect();
    let f_ok = cone_restriction(w, &xor) == sum.mask() && cone_restriction(w, &and) == prod.mask();
    Ok(gs == xor && gp == and && f_ok)
}

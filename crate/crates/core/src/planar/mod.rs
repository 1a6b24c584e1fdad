//! Rotation-system drawings: faces, Euler checks, blocks and the
//! 2-connected augmentation, friendly-faced subgraphs and bad loops.

mod augment;
mod blocks;
mod embedding;
mod friendly;
mod loops;

use serde::{Deserialize, Serialize};

use crate::graphcore::set_diameter;

pub use augment::{good_drawing_augment, Augmentation};
pub use blocks::{blocks, is_two_connected, two_connected_core, Block, CoreReport};
pub use embedding::{
    euler_check, face_map, faces, max_finite_face_length, verify_embedding, Dart, EmbeddingJson,
    EulerReport, Face, FaceJson, FaceMap, PlanarEmbedding,
};
pub use friendly::{friendly_faced_check, ladder_hole, FaceMatch, FriendlyReport, LadderHole};
pub use loops::{bad_loop_check, bad_loop_to_cut, boundary_face_system, loop_sides, BadLoopCut, LoopSide, LoopSides};

/// Face statistics of one window drawing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceDiagnostics {
    pub radius: u32,
    pub faces: usize,
    pub finite_faces: usize,
    pub boundary_faces: usize,
    pub max_finite_face_length: usize,
    /// Largest diameter of a finite facial subgraph, measured in the window.
    pub max_finite_face_diameter: u32,
    /// Finite faces whose walk repeats a vertex.
    pub non_simple_finite_faces: usize,
}

pub fn face_diagnostics(radius: u32, emb: &PlanarEmbedding) -> FaceDiagnostics {
    let all = faces(emb);
    let finite: Vec<&Face> = all.iter().filter(|f| !f.boundary_touching).collect();
    FaceDiagnostics {
        radius,
        faces: all.len(),
        finite_faces: finite.len(),
        boundary_faces: all.len() - finite.len(),
        max_finite_face_length: finite.iter().map(|f| f.len()).max().unwrap_or(0),
        max_finite_face_diameter: finite
            .iter()
            .filter_map(|f| set_diameter(emb.graph(), &f.vertices))
            .max()
            .unwrap_or(0),
        non_simple_finite_faces: finite.iter().filter(|f| !f.is_simple()).count(),
    }
}

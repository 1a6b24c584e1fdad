//! Finite 2-complexes over Z2: fillings, cones, subdivision, first
//! cohomology, and patterns and tracks on triangle complexes.

mod cohomology;
mod complex;
mod pipeline;
mod tracks;

pub use cohomology::{
    chomp_check, cocycle_basis, delta0, h1_rank, h1_report, is_coboundary, is_cocycle, nontrivial_cocycle,
    relative_chomp_check, CochainJson, H1Report,
};
pub use complex::{
    barycentric_subdivide, bipyramid, cone_off, epsilon_filling, every_edge_two_cells, grid_complex, tetrahedron,
    torus7, torus_control, Complex2, ComplexJson, Coned,
};
pub use pipeline::{
    cone_extension, cone_restriction, face_complex, fill_and_cone, ring_iso_homomorphism, ring_iso_round_trip,
    FillConeReport, RingIsoReport,
};
pub use tracks::{
    is_thin, is_thin_cut, non_separating_track_search, pattern_from_j, pattern_sum, read_j, track_components,
    track_separates, Chord, Pattern, PatternJson, Slot, Thinness, Track, TrackJson,
};

//! Quasi-isometries between windows: verification, continuous
//! normalization, quasi-inverses, cut transfer, coboundary diameters and
//! sampled quasi-actions.

mod action;
mod diameters;
mod map;
mod standard;
mod transfer;

pub use action::{good_behavior_check, GoodBehaviorReport, QuasiActionReport, QuasiActionSample};
pub use diameters::{coboundary_diameters, qi_cut_growth_check, CoboundaryDiameters, CutGrowthReport, Measured};
pub use map::{
    normalize_continuous, quasi_inverse, verify_qi, Bound, NormalizeReport, Normalized, QiMap, QiMapJson, QiReport,
    QuasiInverse, Violation, EXHAUSTIVE_PAIRS, SAMPLED_PAIRS, SAMPLE_SEED,
};
pub use standard::{
    cylinder_doubling, doubling_map, grid_rotation, grid_stretch, grid_translation, identity_map, perturbation,
    stretched_diamond,
};
pub use transfer::{
    default_transfer_radius, move_cuts_check, move_cuts_constants, transfer_cut, MoveCutsReport, MoveCutsViolation,
    TransferReport,
};

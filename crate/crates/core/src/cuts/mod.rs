//! Cuts of a window: coboundaries, tightness, crossing, small tight cut
//! enumeration and subgraph systems.

mod cut;
mod enumerate;
mod system;

pub use cut::{
    crosses, cut_diameter, is_tight, make_cut, make_cut_named, ring_op, tight_between_edges,
    tight_from_component, uncross_pair, Cut, CutJson, RingOp,
};
pub(crate) use cut::induces_connected;
pub use enumerate::{enumerate_all_tight_cuts, enumerate_tight_cuts, sort_canonical, Budget, TightCuts};
pub use system::{is_h_finite, Member, SubgraphSystem};

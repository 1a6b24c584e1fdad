//! Desk-scale toolkit for cuts, ends and splittings of locally finite graphs.
//!
//! Infinite graphs are accessed through [`graphcore::GraphSource`] and cut
//! down to finite, boundary-marked [`graphcore::Window`]s. Every result that
//! depends on ends is relative to the window radius.

pub mod complexes;
pub mod connectivity;
pub mod cuts;
pub mod error;
pub mod generators;
pub mod graphcore;
pub mod par;
pub mod planar;
pub mod qimaps;
pub mod structure;

pub use error::{Error, Result};

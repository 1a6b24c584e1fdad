//! Finite multigraphs, lazy sources, boundary-marked windows and metrics.

mod graph;
pub mod io;
mod metric;
mod source;
mod window;

pub use graph::{EdgeId, Graph, VertexId};
pub use metric::{
    bfs_from, component_labels, components, components_masked, distance, edge_subgraph, hausdorff,
    induced_subgraph, is_connected, set_diameter, DistanceTable, INF,
};
pub use source::{FnSource, GraphSource};
pub use window::{Terminal, UnionFind, Window};

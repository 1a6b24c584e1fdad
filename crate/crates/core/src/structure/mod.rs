//! Nested cut systems, Dunwoody structure trees and the two tree
//! decompositions built from them.

mod decomp;
mod nested;

use serde::{Deserialize, Serialize};

use crate::graphcore::{Graph, Window};

pub use decomp::{
    complete_system, part_end_cut, part_markers, torso, tree_decomp_connected,
    tree_decomp_connected_auto, tree_decomp_tight, verify_tree_decomposition, Check, DecompKind,
    TreeDecomposition, VerifyReport,
};
pub use nested::{
    separated_by_generated, structure_tree, validate_nested, NestedSystem, StructureTree,
    Violation, ViolationKind,
};

/// Serialized tree decomposition: tree edges by vertex name, bags as
/// sorted window ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecompJson {
    pub radius: u32,
    pub kind: DecompKind,
    pub adhesion_bound: usize,
    pub tree_vertices: Vec<String>,
    pub tree_edges: Vec<(String, String)>,
    pub bags: Vec<Vec<String>>,
}

impl TreeDecompJson {
    pub fn new(w: &Window, td: &TreeDecomposition) -> Self {
        let t = &td.tree;
        TreeDecompJson {
            radius: w.radius(),
            kind: td.kind,
            adhesion_bound: td.adhesion_bound,
            tree_vertices: t.names().to_vec(),
            tree_edges: t
                .edges()
                .map(|e| {
                    let [a, b] = t.endpoints(e);
                    (t.name(a).to_string(), t.name(b).to_string())
                })
                .collect(),
            bags: td.bags.iter().map(|b| w.graph().sorted_names(b.iter().copied())).collect(),
        }
    }
}

/// Serialized structure tree: each cut with its tail and head.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureTreeJson {
    pub radius: u32,
    pub vertices: Vec<String>,
    pub cuts: Vec<TreeCutJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeCutJson {
    pub side: Vec<String>,
    pub tail: String,
    pub head: String,
}

impl StructureTreeJson {
    pub fn new(w: &Window, st: &StructureTree) -> Self {
        let t = st.tree();
        StructureTreeJson {
            radius: w.radius(),
            vertices: t.names().to_vec(),
            cuts: st
                .system()
                .cuts()
                .iter()
                .enumerate()
                .map(|(i, c)| TreeCutJson {
                    side: c.names(w.graph()),
                    tail: t.name(st.tail(i)).to_string(),
                    head: t.name(st.head(i)).to_string(),
                })
                .collect(),
        }
    }
}

/// DOT for a tree whose vertices are labelled with bag sizes.
pub fn tree_dot(tree: &Graph, sizes: &[usize]) -> String {
    let mut out = String::from("graph tree {\n");
    for v in tree.vertices() {
        out.push_str(&format!("  \"{0}\" [label=\"{0} ({1})\"];\n", tree.name(v), sizes[v.idx()]));
    }
    for e in tree.edges() {
        let [a, b] = tree.endpoints(e);
        out.push_str(&format!("  \"{}\" -- \"{}\";\n", tree.name(a), tree.name(b)));
    }
    out.push_str("}\n");
    out
}

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::graph::{Graph, VertexId};
use super::window::Window;

/// On-disk window format. `basepoint` and `radius` are optional so plain
/// graphs load too.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowJson {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String, String)>,
    #[serde(default)]
    pub boundary: Vec<String>,
    #[serde(default)]
    pub markers: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basepoint: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<u32>,
}

impl WindowJson {
    pub fn from_window(w: &Window) -> Self {
        let g = w.graph();
        WindowJson {
            vertices: g.names().to_vec(),
            edges: g
                .edges()
                .map(|e| {
                    let [a, b] = g.endpoints(e);
                    (g.edge_name(e).to_string(), g.name(a).to_string(), g.name(b).to_string())
                })
                .collect(),
            boundary: w.boundary().iter().map(|&v| g.name(v).to_string()).collect(),
            markers: w
                .markers()
                .iter()
                .map(|m| m.iter().map(|&v| g.name(v).to_string()).collect())
                .collect(),
            basepoint: Some(g.name(w.basepoint()).to_string()),
            radius: Some(w.radius()),
        }
    }

    pub fn to_graph(&self) -> Result<Graph> {
        let mut g = Graph::new();
        for v in &self.vertices {
            g.add_vertex(v)?;
        }
        for (id, a, b) in &self.edges {
            let (a, b) = (g.require(a)?, g.require(b)?);
            g.add_named_edge(id, a, b)?;
        }
        Ok(g)
    }

    /// Rebuild the window. Without a basepoint the first vertex is used;
    /// without markers they are derived from the graph as in
    /// [`Window::from_graph`].
    pub fn to_window(&self) -> Result<Window> {
        let g = self.to_graph()?;
        let base = match &self.basepoint {
            Some(b) => g.require(b)?,
            None if g.vertex_count() > 0 => VertexId(0),
            None => return Err(Error::Argument("empty graph".into())),
        };
        if self.markers.is_empty() && self.boundary.is_empty() {
            return Window::from_graph(g, base);
        }
        let boundary = self
            .boundary
            .iter()
            .map(|v| g.require(v))
            .collect::<Result<Vec<_>>>()?;
        let markers = self
            .markers
            .iter()
            .map(|m| m.iter().map(|v| g.require(v)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let radius = self.radius.unwrap_or(0);
        Window::from_parts(g, base, radius, boundary, markers)
    }
}

/// Graphviz export. `highlight` vertices are drawn filled.
pub fn to_dot(g: &Graph, highlight: &[VertexId]) -> String {
    let mask = g.vertex_mask(highlight.iter().copied());
    let mut out = String::from("graph G {\n");
    for v in g.vertices() {
        let style = if mask[v.idx()] { " style=filled fillcolor=gold" } else { "" };
        let _ = writeln!(out, "  \"{}\" [label=\"{}\"{}];", v.0, g.name(v), style);
    }
    for e in g.edges() {
        let [a, b] = g.endpoints(e);
        let _ = writeln!(out, "  \"{}\" -- \"{}\" [label=\"{}\"];", a.0, b.0, g.edge_name(e));
    }
    out.push_str("}\n");
    out
}

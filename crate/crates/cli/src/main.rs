use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use serde::Serialize;
use serde_json::{json, Value};

use splittool_core::complexes::{
    bipyramid, epsilon_filling, every_edge_two_cells, fill_and_cone, grid_complex, h1_report, non_separating_track_search,
    pattern_from_j, read_j, tetrahedron, torus7, torus_control, track_components, Complex2, ComplexJson, PatternJson,
    TrackJson,
};
use splittool_core::connectivity::{separation, Mode};
use splittool_core::cuts::{enumerate_all_tight_cuts, enumerate_tight_cuts, make_cut_named, Budget, CutJson};
use splittool_core::generators::GeneratorSpec;
use splittool_core::graphcore::io::{to_dot, WindowJson};
use splittool_core::graphcore::{GraphSource, VertexId, Window};
use splittool_core::par::Exec;
use splittool_core::planar::{
    bad_loop_check, bad_loop_to_cut, euler_check, face_diagnostics, faces, friendly_faced_check, ladder_hole,
    EmbeddingJson, FaceJson, PlanarEmbedding,
};
use splittool_core::qimaps::{
    cylinder_doubling, doubling_map, grid_rotation, grid_stretch, grid_translation, identity_map, perturbation,
    stretched_diamond, transfer_cut, verify_qi, QiMap, QiMapJson,
};
use splittool_core::structure::{
    complete_system, structure_tree, tree_decomp_connected, tree_decomp_connected_auto, tree_decomp_tight, tree_dot,
    verify_tree_decomposition, StructureTreeJson, TreeDecompJson,
};
use splittool_core::{Error, Result};

const INTERIOR_RULE: &str = "cuts are enumerated only when no coboundary edge touches the window boundary";
const MARKER_RULE: &str =
    "boundary vertices joined through the shell at distance r or r + 1 form one marker; a marker terminal is contracted";

#[derive(Parser, Debug)]
#[command(name = "splittool", version, about = "Cuts, structure trees and faces on finite windows of infinite graphs")]
struct Cli {
    /// Run every data-parallel loop on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a window and write it as JSON.
    Generate {
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 6)]
        radius: u32,
        /// Also write the rotation system here.
        #[arg(long)]
        embedding: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Tight cuts of bounded size.
    Cuts {
        #[command(flatten)]
        src: Source,
        /// Only cuts whose coboundary contains this edge.
        #[arg(long)]
        edge: Option<String>,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Minimum separation between two terminals, with witnesses.
    Menger {
        #[command(flatten)]
        src: Source,
        /// `marker:N` or a vertex name.
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, value_enum, default_value = "edge")]
        mode: ModeArg,
        #[command(flatten)]
        out: Output,
    },
    /// Structure tree of a greedy nested system of tight cuts.
    StructureTree {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = 2)]
        max_size: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Tree decomposition along the structure tree, verified.
    TreeDecomp {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = 2)]
        max_size: usize,
        #[arg(long = "type", id = "decomp_type", value_enum, default_value = "tight")]
        decomp: DecompArg,
        /// Padding for connected parts; searched up to --max-m when absent.
        #[arg(long)]
        m: Option<u32>,
        #[arg(long, default_value_t = 8)]
        max_m: u32,
        #[command(flatten)]
        out: Output,
    },
    /// Faces of the drawn window.
    Faces {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Output,
    },
    /// Friendly-faced test for a subgraph.
    Friendly {
        #[command(flatten)]
        src: Source,
        /// Vertex names separated by `;`.
        #[arg(long)]
        subgraph: Option<String>,
        /// Use the ladder-in-a-hole example of this length instead.
        #[arg(long)]
        ladder: Option<usize>,
        #[arg(long, requires = "ladder")]
        crossing: bool,
        #[arg(long, default_value_t = 2)]
        r: u32,
        #[command(flatten)]
        out: Output,
    },
    /// Test whether a loop separates two markers and extract the cut.
    Badloop {
        #[command(flatten)]
        src: Source,
        /// Loop vertex names in order, separated by `;`.
        #[arg(long = "loop")]
        cycle: String,
        #[command(flatten)]
        out: Output,
    },
    /// Attach a cell to every short cycle of the window graph.
    Fill {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = 4)]
        eps: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Fill interior faces, cone off boundary faces, report H¹.
    Cone {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Output,
    },
    /// H¹ over Z/2 of a 2-complex.
    Chomp {
        #[command(flatten)]
        cx: ComplexSource,
        #[command(flatten)]
        out: Output,
    },
    /// Tracks of a pattern, or a search for a non-separating track.
    Tracks {
        #[command(flatten)]
        cx: ComplexSource,
        #[arg(long)]
        pattern: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Check the quasi-isometry inequalities of a map.
    QiVerify {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        cod: CodSource,
        #[command(flatten)]
        map: MapSource,
        #[arg(long)]
        surjective: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Push a cut through a quasi-isometry and certify the result.
    QiTransfer {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        cod: CodSource,
        #[command(flatten)]
        map: MapSource,
        /// Domain side names separated by `;`.
        #[arg(long, allow_hyphen_values = true)]
        side: String,
        /// Ball radius, `p/q` allowed; defaults to 100λ⁵.
        #[arg(long = "big-r")]
        big_r: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Face statistics over growing radii.
    DiagnoseFaces {
        #[arg(long)]
        kind: String,
        #[arg(long, value_delimiter = ',', required = true)]
        radii: Vec<u32>,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args, Debug)]
struct Source {
    /// Generator kind, e.g. grid2d, cylinder, free-group:2.
    #[arg(long, conflicts_with = "window")]
    kind: Option<String>,
    #[arg(long, default_value_t = 6)]
    radius: u32,
    /// Window JSON written by `generate`.
    #[arg(long)]
    window: Option<PathBuf>,
    /// Rotation system for a window loaded from file.
    #[arg(long, requires = "window")]
    embedding: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CodSource {
    #[arg(long, conflicts_with = "cod_window")]
    cod_kind: Option<String>,
    #[arg(long)]
    cod_radius: Option<u32>,
    #[arg(long)]
    cod_window: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MapSource {
    /// Map JSON.
    #[arg(long, conflicts_with = "preset")]
    map: Option<PathBuf>,
    /// identity, doubling, rotation, stretch, cylinder-doubling,
    /// translate:DX,DY or perturb:SEED.
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Args, Debug)]
struct ComplexSource {
    #[arg(long, conflicts_with = "example")]
    complex: Option<PathBuf>,
    /// tetrahedron, torus7, torus:N, bipyramid:N or grid:NxM.
    #[arg(long)]
    example: Option<String>,
}

#[derive(Args, Debug)]
struct Output {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Edge,
    Vertex,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DecompArg {
    Tight,
    Connected,
}

struct Loaded {
    w: Window,
    src: Option<Box<dyn GraphSource>>,
    embedding: Option<PathBuf>,
}

impl Loaded {
    fn embedding(&self) -> Result<PlanarEmbedding> {
        if let Some(src) = &self.src {
            return PlanarEmbedding::from_source(&self.w, src.as_ref());
        }
        let path = self
            .embedding
            .as_ref()
            .ok_or_else(|| Error::Argument("a window loaded from file needs --embedding".into()))?;
        let ej: EmbeddingJson = read_json(path)?;
        Ok(ej.to_embedding(self.w.graph().clone())?.with_boundary(self.w.boundary()))
    }
}

/// Artifact text plus whether an enumeration stopped at the budget.
struct Outcome {
    text: String,
    truncated: bool,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn pretty<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn check_size(w: &Window, budget: &Budget) -> Result<()> {
    let n = w.graph().vertex_count() as u64;
    if n > budget.max_nodes {
        return Err(Error::Budget(format!("window has {n} vertices, budget is {}", budget.max_nodes)));
    }
    Ok(())
}

fn build(kind: &str, radius: u32, budget: &Budget) -> Result<Loaded> {
    let spec: GeneratorSpec = kind.parse()?;
    let src = spec.source()?;
    let w = Window::build(src.as_ref(), radius)?;
    check_size(&w, budget)?;
    Ok(Loaded {
        w,
        src: Some(src),
        embedding: None,
    })
}

fn load(s: &Source, budget: &Budget) -> Result<Loaded> {
    match (&s.kind, &s.window) {
        (Some(kind), _) => build(kind, s.radius, budget),
        (None, Some(path)) => {
            let w = read_json::<WindowJson>(path)?.to_window()?;
            check_size(&w, budget)?;
            Ok(Loaded {
                w,
                src: None,
                embedding: s.embedding.clone(),
            })
        }
        (None, None) => Err(Error::Argument("give --kind or --window".into())),
    }
}

/// Uniform report shape: command, radius, conventions, result.
fn report(command: &str, radius: Option<u32>, result: Value) -> Value {
    json!({
        "command": command,
        "radius": radius,
        "conventions": {
            "interior_coboundary": INTERIOR_RULE,
            "marker_merge": MARKER_RULE,
        },
        "result": result,
    })
}

fn names(w: &Window, vs: &[VertexId]) -> Vec<String> {
    vs.iter().map(|&v| w.graph().name(v).to_string()).collect()
}

fn split_names(s: &str) -> Vec<&str> {
    s.split(';').map(str::trim).filter(|x| !x.is_empty()).collect()
}

fn require_names(w: &Window, s: &str) -> Result<Vec<VertexId>> {
    split_names(s).into_iter().map(|x| w.graph().require(x)).collect()
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn no_dot(out: &Output, command: &str) -> Result<()> {
    if out.format == Format::Dot {
        return Err(Error::Argument(format!("`{command}` has no DOT view")));
    }
    Ok(())
}

fn load_complex(cx: &ComplexSource) -> Result<(String, Complex2)> {
    if let Some(path) = &cx.complex {
        let cj: ComplexJson = read_json(path)?;
        return Ok((path.display().to_string(), cj.to_complex()?));
    }
    let ex = cx
        .example
        .as_deref()
        .ok_or_else(|| Error::Argument("give --complex or --example".into()))?;
    let (head, arg) = ex.split_once(':').unwrap_or((ex, ""));
    let num = |s: &str| -> Result<usize> {
        s.parse()
            .map_err(|_| Error::Argument(format!("`{ex}` needs a numeric parameter")))
    };
    let k = match head {
        "tetrahedron" => tetrahedron(),
        "torus7" => torus7(),
        "torus" => torus_control(num(arg)?)?,
        "bipyramid" => bipyramid(num(arg)?)?,
        "grid" => {
            let (a, b) = arg
                .split_once('x')
                .ok_or_else(|| Error::Argument(format!("`{ex}`: expected grid:NxM")))?;
            grid_complex(num(a)?, num(b)?, false, false)?
        }
        _ => return Err(Error::Argument(format!("unknown example complex `{ex}`"))),
    };
    Ok((ex.to_string(), k))
}

fn load_map(m: &MapSource, dom: &Window, cod: &Window) -> Result<QiMap> {
    if let Some(path) = &m.map {
        return read_json::<QiMapJson>(path)?.to_map(dom.graph(), cod.graph());
    }
    let preset = m
        .preset
        .as_deref()
        .ok_or_else(|| Error::Argument("give --map or --preset".into()))?;
    let (head, arg) = preset.split_once(':').unwrap_or((preset, ""));
    let bad = || Error::Argument(format!("bad preset `{preset}`"));
    let same = || {
        if dom.graph().fingerprint() == cod.graph().fingerprint() {
            Ok(())
        } else {
            Err(Error::Argument(format!("preset `{head}` maps a window to itself")))
        }
    };
    match head {
        "identity" => same().map(|_| identity_map(dom)),
        "rotation" => same().and_then(|_| grid_rotation(dom)),
        "doubling" => doubling_map(dom, cod),
        "stretch" => grid_stretch(dom, cod),
        "cylinder-doubling" => cylinder_doubling(dom, cod),
        "translate" => {
            same()?;
            let (a, b) = arg.split_once(',').ok_or_else(bad)?;
            grid_translation(dom, a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)
        }
        "perturb" => {
            same()?;
            Ok(perturbation(dom, arg.parse().map_err(|_| bad())?))
        }
        _ => Err(bad()),
    }
}

/// Codomain from flags, else the natural target of the preset.
fn load_cod(c: &CodSource, dom: &Loaded, src: &Source, m: &MapSource, budget: &Budget) -> Result<Window> {
    let r = c.cod_radius.unwrap_or(src.radius);
    if let Some(kind) = &c.cod_kind {
        return Ok(build(kind, r, budget)?.w);
    }
    if let Some(path) = &c.cod_window {
        let w = read_json::<WindowJson>(path)?.to_window()?;
        check_size(&w, budget)?;
        return Ok(w);
    }
    let r0 = dom.w.radius();
    let w = match m.preset.as_deref() {
        Some("doubling") => build("zline", c.cod_radius.unwrap_or(2 * r0), budget)?.w,
        Some("cylinder-doubling") => build("cylinder", c.cod_radius.unwrap_or(2 * r0), budget)?.w,
        Some("stretch") => stretched_diamond(c.cod_radius.unwrap_or(r0))?,
        _ => dom.w.clone(),
    };
    check_size(&w, budget)?;
    Ok(w)
}

fn run(cli: &Cli) -> Result<(Outcome, Option<PathBuf>)> {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    let budget = Budget::from_env();
    let plain = |text: String| Outcome { text, truncated: false };
    let (outcome, out) = match &cli.command {
        Command::Generate {
            kind,
            radius,
            embedding,
            out,
        } => {
            let l = build(kind, *radius, &budget)?;
            if let Some(path) = embedding {
                let text = pretty(&EmbeddingJson::new(&l.embedding()?))?;
                fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            }
            let text = match out.format {
                Format::Json => pretty(&WindowJson::from_window(&l.w))?,
                Format::Dot => to_dot(l.w.graph(), l.w.boundary()),
            };
            (plain(text), out)
        }
        Command::Cuts {
            src,
            edge,
            max_size,
            out,
        } => {
            let l = load(src, &budget)?;
            let w = &l.w;
            let found = match edge {
                Some(e) => enumerate_tight_cuts(w, w.graph().require_edge(e)?, *max_size, &budget)?,
                None => enumerate_all_tight_cuts(w, *max_size, &budget, exec)?,
            };
            let text = match out.format {
                Format::Json => pretty(&report(
                    "cuts",
                    Some(w.radius()),
                    json!({
                        "edge": edge,
                        "max_size": max_size,
                        "truncated": found.truncated,
                        "count": found.cuts.len(),
                        "cuts": found.cuts.iter().map(|c| CutJson::new(w.graph(), c)).collect::<Vec<_>>(),
                    }),
                ))?,
                Format::Dot => {
                    let side = found.cuts.first().map(|c| c.side().to_vec()).unwrap_or_default();
                    to_dot(w.graph(), &side)
                }
            };
            (
                Outcome {
                    text,
                    truncated: found.truncated,
                },
                out,
            )
        }
        Command::Menger {
            src,
            from,
            to,
            mode,
            out,
        } => {
            let l = load(src, &budget)?;
            let w = &l.w;
            let mode = match mode {
                ModeArg::Edge => Mode::Edge,
                ModeArg::Vertex => Mode::Vertex,
            };
            let res = separation(w, w.parse_terminal(from)?, w.parse_terminal(to)?, mode)?;
            let text = match out.format {
                Format::Json => pretty(&report(
                    "menger",
                    Some(w.radius()),
                    json!({
                        "mode": mode,
                        "from": from,
                        "to": to,
                        "value": res.value,
                        "paths": res.paths.iter().map(|p| names(w, p)).collect::<Vec<_>>(),
                        "cut": {
                            "vertices": w.graph().sorted_names(res.cut.vertices.iter().copied()),
                            "edges": w.graph().sorted_edge_names(res.cut.edges.iter().copied()),
                        },
                        "source_side": w.graph().sorted_names(res.source_side.iter().copied()),
                    }),
                ))?,
                Format::Dot => to_dot(w.graph(), &res.source_side),
            };
            (plain(text), out)
        }
        Command::StructureTree { src, max_size, out } => {
            let l = load(src, &budget)?;
            let w = &l.w;
            let (sys, truncated) = complete_system(w, *max_size, &budget, exec)?;
            let st = structure_tree(&sys);
            let text = match out.format {
                Format::Json => pretty(&report(
                    "structure-tree",
                    Some(w.radius()),
                    json!({
                        "max_size": max_size,
                        "truncated": truncated,
                        "tree": StructureTreeJson::new(w, &st),
                    }),
                ))?,
                Format::Dot => {
                    let t = st.tree();
                    let sizes: Vec<usize> = t.vertices().map(|v| t.degree(v)).collect();
                    tree_dot(t, &sizes)
                }
            };
            (Outcome { text, truncated }, out)
        }
        Command::TreeDecomp {
            src,
            max_size,
            decomp,
            m,
            max_m,
            out,
        } => {
            let l = load(src, &budget)?;
            let w = &l.w;
            let (sys, truncated) = complete_system(w, *max_size, &budget, exec)?;
            let td = match (decomp, m) {
                (DecompArg::Tight, _) => tree_decomp_tight(w, &sys)?,
                (DecompArg::Connected, Some(m)) => tree_decomp_connected(w, &sys, *m)?,
                (DecompArg::Connected, None) => tree_decomp_connected_auto(w, &sys, *max_m)?,
            };
            let text = match out.format {
                Format::Json => {
                    let verify = verify_tree_decomposition(w, &td)?;
                    pretty(&report(
                        "tree-decomp",
                        Some(w.radius()),
                        json!({
                            "max_size": max_size,
                            "truncated": truncated,
                            "passed": verify.passed(),
                            "decomposition": TreeDecompJson::new(w, &td),
                            "verify": verify,
                        }),
                    ))?
                }
                Format::Dot => {
                    let sizes: Vec<usize> = td.bags.iter().map(Vec::len).collect();
                    tree_dot(&td.tree, &sizes)
                }
            };
            (Outcome { text, truncated }, out)
        }
        Command::Faces { src, out } => {
            no_dot(out, "faces")?;
            let l = load(src, &budget)?;
            let emb = l.embedding()?;
            let all = faces(&emb);
            let text = pretty(&report(
                "faces",
                Some(l.w.radius()),
                json!({
                    "euler": euler_check(&emb),
                    "diagnostics": face_diagnostics(l.w.radius(), &emb),
                    "faces": all.iter().map(|f| FaceJson::new(&emb, f)).collect::<Vec<_>>(),
                }),
            ))?;
            (plain(text), out)
        }
        Command::Friendly {
            src,
            subgraph,
            ladder,
            crossing,
            r,
            out,
        } => {
            no_dot(out, "friendly")?;
            let (radius, rep) = match ladder {
                Some(len) => {
                    let lh = ladder_hole(*len, *crossing)?;
                    let rep = friendly_faced_check(&lh.embedding, &lh.lambda_vertices, lh.lambda_edges.as_deref(), *r)?;
                    (None, json!({"ladder_length": lh.ladder_length, "hole_size": lh.hole_size, "report": rep}))
                }
                None => {
                    let l = load(src, &budget)?;
                    let emb = l.embedding()?;
                    let sub = subgraph
                        .as_deref()
                        .ok_or_else(|| Error::Argument("give --subgraph or --ladder".into()))?;
                    let vs = require_names(&l.w, sub)?;
                    (Some(l.w.radius()), json!({"report": friendly_faced_check(&emb, &vs, None, *r)?}))
                }
            };
            (plain(pretty(&report("friendly", radius, rep))?), out)
        }
        Command::Badloop { src, cycle, out } => {
            no_dot(out, "badloop")?;
            let l = load(src, &budget)?;
            let w = &l.w;
            let emb = l.embedding()?;
            let cyc = require_names(w, cycle)?;
            let bad = bad_loop_check(w, &emb, &cyc)?;
            let cut = if bad { Some(bad_loop_to_cut(w, &emb, &cyc)?) } else { None };
            let text = pretty(&report(
                "badloop",
                Some(w.radius()),
                json!({
                    "loop": names(w, &cyc),
                    "bad": bad,
                    "markers": cut.as_ref().map(|c| c.markers),
                    "cut": cut.as_ref().map(|c| CutJson::new(w.graph(), &c.cut)),
                }),
            ))?;
            (plain(text), out)
        }
        Command::Fill { src, eps, out } => {
            no_dot(out, "fill")?;
            let l = load(src, &budget)?;
            let k = epsilon_filling(l.w.graph(), *eps, budget.max_nodes)?;
            let text = pretty(&report(
                "fill",
                Some(l.w.radius()),
                json!({
                    "eps": eps,
                    "cells": k.cell_count(),
                    "every_edge_two_cells": every_edge_two_cells(&k),
                    "h1": h1_report(&k),
                    "complex": ComplexJson::new(&k),
                }),
            ))?;
            (plain(text), out)
        }
        Command::Cone { src, out } => {
            no_dot(out, "cone")?;
            let l = load(src, &budget)?;
            let emb = l.embedding()?;
            let (coned, rep) = fill_and_cone(&l.w, &emb)?;
            let text = pretty(&report(
                "cone",
                Some(l.w.radius()),
                json!({
                    "report": rep,
                    "cone_vertices": coned.cone_vertices.len(),
                    "complex": ComplexJson::new(&coned.complex),
                }),
            ))?;
            (plain(text), out)
        }
        Command::Chomp { cx, out } => {
            no_dot(out, "chomp")?;
            let (name, k) = load_complex(cx)?;
            let h1 = h1_report(&k);
            let text = pretty(&report(
                "chomp",
                None,
                json!({"complex": name, "h1": h1, "chomp": h1.h1 == 0}),
            ))?;
            (plain(text), out)
        }
        Command::Tracks { cx, pattern, out } => {
            no_dot(out, "tracks")?;
            let (name, k) = load_complex(cx)?;
            let result = match pattern {
                Some(path) => {
                    let j = read_json::<PatternJson>(path)?.to_j(&k)?;
                    let p = pattern_from_j(&k, &j)?;
                    let tracks: Vec<TrackJson> = track_components(&k, &p).iter().map(|t| TrackJson::new(&k, t)).collect();
                    json!({"complex": name, "pattern": PatternJson::new(&k, &j), "tracks": tracks})
                }
                None => match non_separating_track_search(&k)? {
                    Some((p, t)) => json!({
                        "complex": name,
                        "found": true,
                        "pattern": PatternJson::new(&k, &read_j(&k, &p)),
                        "track": TrackJson::new(&k, &t),
                    }),
                    None => json!({"complex": name, "found": false}),
                },
            };
            (plain(pretty(&report("tracks", None, result))?), out)
        }
        Command::QiVerify {
            src,
            cod,
            map,
            surjective,
            out,
        } => {
            no_dot(out, "qi-verify")?;
            let l = load(src, &budget)?;
            let c = load_cod(cod, &l, src, map, &budget)?;
            let f = load_map(map, &l.w, &c)?;
            let rep = verify_qi(&f, &l.w, &c, *surjective, exec)?;
            let text = pretty(&report(
                "qi-verify",
                Some(l.w.radius()),
                json!({"codomain_radius": c.radius(), "report": to_value(&rep)?}),
            ))?;
            (plain(text), out)
        }
        Command::QiTransfer {
            src,
            cod,
            map,
            side,
            big_r,
            out,
        } => {
            no_dot(out, "qi-transfer")?;
            let l = load(src, &budget)?;
            let c = load_cod(cod, &l, src, map, &budget)?;
            let f = load_map(map, &l.w, &c)?;
            let b = make_cut_named(&l.w, &split_names(side))?;
            let r = big_r
                .as_deref()
                .map(|s| {
                    s.parse::<Rational64>()
                        .map_err(|_| Error::Argument(format!("bad radius `{s}`")))
                })
                .transpose()?;
            let (cut, rep) = transfer_cut(&f, &l.w, &c, &b, r, exec)?;
            let text = pretty(&report(
                "qi-transfer",
                Some(l.w.radius()),
                json!({
                    "codomain_radius": c.radius(),
                    "cut": CutJson::new(c.graph(), &cut),
                    "report": rep,
                }),
            ))?;
            (plain(text), out)
        }
        Command::DiagnoseFaces { kind, radii, out } => {
            no_dot(out, "diagnose-faces")?;
            let mut rows = Vec::with_capacity(radii.len());
            for &r in radii {
                let l = build(kind, r, &budget)?;
                rows.push(face_diagnostics(r, &l.embedding()?));
            }
            let lengths: Vec<usize> = rows.iter().map(|d| d.max_finite_face_length).collect();
            let increasing = lengths.windows(2).all(|p| p[0] < p[1]);
            let text = pretty(&report(
                "diagnose-faces",
                radii.iter().copied().max(),
                json!({
                    "kind": kind,
                    "radii": radii,
                    "rows": rows,
                    "max_face_lengths": lengths,
                    "strictly_increasing": increasing,
                }),
            ))?;
            (plain(text), out)
        }
    };
    Ok((outcome, out.out.clone()))
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Budget(_) => 2,
        Error::Io(_) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = run(&cli).and_then(|(o, path)| {
        match path {
            Some(p) => fs::write(&p, &o.text).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?,
            None => print!("{}", o.text),
        }
        Ok(o.truncated)
    });
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("error: {}", Error::Budget("enumeration truncated; the report lists a partial result".into()));
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

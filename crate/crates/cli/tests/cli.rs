use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_splittool"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env_remove("SPLITTOOL_BUDGET").output().expect("spawn")
}

fn ok_json(args: &[&str]) -> Value {
    let o = run(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("json")
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn strs(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect()
}

struct Multigraph {
    index: HashMap<String, usize>,
    /// (edge name, u, v)
    edges: Vec<(String, usize, usize)>,
}

fn multigraph(window: &Value) -> Multigraph {
    let names = strs(&window["vertices"]);
    let index: HashMap<String, usize> = names.iter().cloned().enumerate().map(|(i, n)| (n, i)).collect();
    let edges = window["edges"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            let e = strs(e);
            (e[0].clone(), index[&e[1]], index[&e[2]])
        })
        .collect();
    Multigraph { index, edges }
}

/// Unit-capacity max flow by shortest augmenting paths, markers contracted
/// to a super source and sink. Vertex mode splits every vertex.
fn max_flow(g: &Multigraph, from: &[usize], to: &[usize], vertex_mode: bool) -> usize {
    let n = g.index.len();
    let (s, t) = (2 * n, 2 * n + 1);
    let mut cap: HashMap<(usize, usize), i64> = HashMap::new();
    let mut adj: Vec<HashSet<usize>> = vec![HashSet::new(); 2 * n + 2];
    let mut add = |a: usize, b: usize, c: i64, cap: &mut HashMap<(usize, usize), i64>| {
        *cap.entry((a, b)).or_default() += c;
        cap.entry((b, a)).or_default();
        adj[a].insert(b);
        adj[b].insert(a);
    };
    let big = 1_000_000;
    let inner = |v: usize| v;
    let outer = |v: usize| if vertex_mode { n + v } else { v };
    let terminal: HashSet<usize> = from.iter().chain(to).copied().collect();
    for v in 0..n {
        if vertex_mode {
            add(inner(v), outer(v), if terminal.contains(&v) { big } else { 1 }, &mut cap);
        }
    }
    for (_, a, b) in &g.edges {
        let c = if vertex_mode { big } else { 1 };
        add(outer(*a), inner(*b), c, &mut cap);
        add(outer(*b), inner(*a), c, &mut cap);
    }
    for &v in from {
        add(s, inner(v), big, &mut cap);
    }
    for &v in to {
        add(outer(v), t, big, &mut cap);
    }
    let mut flow = 0;
    loop {
        let mut prev = vec![usize::MAX; 2 * n + 2];
        prev[s] = s;
        let mut q = VecDeque::from([s]);
        while let Some(x) = q.pop_front() {
            let mut next: Vec<usize> = adj[x].iter().copied().collect();
            next.sort();
            for y in next {
                if prev[y] == usize::MAX && cap[&(x, y)] > 0 {
                    prev[y] = x;
                    q.push_back(y);
                }
            }
        }
        if prev[t] == usize::MAX {
            return flow;
        }
        let mut y = t;
        while y != s {
            let x = prev[y];
            *cap.get_mut(&(x, y)).unwrap() -= 1;
            *cap.get_mut(&(y, x)).unwrap() += 1;
            y = x;
        }
        flow += 1;
    }
}

fn marker(g: &Multigraph, window: &Value, i: usize) -> Vec<usize> {
    strs(&window["markers"][i]).iter().map(|n| g.index[n]).collect()
}

/// Longest face avoiding the boundary, by tracing the rotation system.
fn max_interior_face(window: &Value, embedding: &Value) -> usize {
    let g = multigraph(window);
    let boundary: HashSet<usize> = strs(&window["boundary"]).iter().map(|n| g.index[n]).collect();
    let ends: HashMap<&str, (usize, usize)> = g.edges.iter().map(|(e, a, b)| (e.as_str(), (*a, *b))).collect();
    let mut rot: HashMap<usize, Vec<String>> = HashMap::new();
    for (name, list) in embedding["rotation"].as_object().unwrap() {
        rot.insert(g.index[name], strs(list));
    }
    // A dart is (edge, tail). Next dart: at the head, the edge after the
    // reverse dart in the rotation.
    let mut seen: HashSet<(String, usize)> = HashSet::new();
    let mut best = 0;
    let mut darts: Vec<(String, usize)> = Vec::new();
    for (e, a, b) in &g.edges {
        darts.push((e.clone(), *a));
        darts.push((e.clone(), *b));
    }
    for d in darts {
        if seen.contains(&d) {
            continue;
        }
        let mut len = 0;
        let mut touches = false;
        let mut cur = d.clone();
        while seen.insert(cur.clone()) {
            len += 1;
            let (a, b) = ends[cur.0.as_str()];
            // Loops never occur in the corpus windows.
            let head = if cur.1 == a { b } else { a };
            touches |= boundary.contains(&head) || boundary.contains(&cur.1);
            let list = &rot[&head];
            let k = list.len();
            let pos = (0..k).find(|&i| list[i] == cur.0).expect("edge in rotation");
            cur = (list[(pos + 1) % k].clone(), head);
        }
        if !touches {
            best = best.max(len);
        }
    }
    best
}

#[test]
fn generate_cylinder_has_two_markers() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.json");
    let o = run(&["generate", "--kind", "cylinder", "--radius", "6", "--out", w.to_str().unwrap()]);
    assert!(o.status.success());
    let v = read(&w);
    assert_eq!(v["markers"].as_array().unwrap().len(), 2);
    assert_eq!(v["radius"], 6);
}

#[test]
fn menger_on_cylinder_matches_flow_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.json");
    run(&["generate", "--kind", "cylinder", "--radius", "6", "--out", w.to_str().unwrap()]);
    let window = read(&w);
    let g = multigraph(&window);
    let (m0, m1) = (marker(&g, &window, 0), marker(&g, &window, 1));
    for (mode, vertex) in [("edge", false), ("vertex", true)] {
        let rep = ok_json(&[
            "menger", "--window", w.to_str().unwrap(), "--mode", mode, "--from", "marker:0", "--to", "marker:1",
        ]);
        let expected = max_flow(&g, &m0, &m1, vertex);
        assert_eq!(expected, 4);
        assert_eq!(rep["result"]["value"], expected, "{mode}");
        assert_eq!(rep["radius"], 6);
        assert_eq!(rep["result"]["paths"].as_array().unwrap().len(), expected);
    }
}

#[test]
fn menger_oracle_on_other_windows() {
    let dir = tempfile::tempdir().unwrap();
    for (kind, r) in [("ladder", 5), ("grid", 3), ("free-group:2", 2), ("tree-of-flats", 2)] {
        let w = dir.path().join(format!("{kind}.json"));
        run(&["generate", "--kind", kind, "--radius", &r.to_string(), "--out", w.to_str().unwrap()]);
        let window = read(&w);
        let g = multigraph(&window);
        let k = window["markers"].as_array().unwrap().len();
        for j in 1..k.min(3) {
            let (a, b) = (marker(&g, &window, 0), marker(&g, &window, j));
            for (mode, vertex) in [("edge", false), ("vertex", true)] {
                let to = format!("marker:{j}");
                let rep = ok_json(&["menger", "--window", w.to_str().unwrap(), "--mode", mode, "--from", "marker:0", "--to", &to]);
                assert_eq!(rep["result"]["value"], max_flow(&g, &a, &b, vertex), "{kind} {mode} 0-{j}");
            }
        }
    }
}

#[test]
fn diagnose_faces_grows_and_matches_face_trace() {
    let rep = ok_json(&["diagnose-faces", "--kind", "grid-with-holes", "--radii", "8,16,32"]);
    let lengths: Vec<u64> = rep["result"]["max_face_lengths"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    assert_eq!(lengths.len(), 3);
    assert!(lengths.windows(2).all(|p| p[0] < p[1]), "{lengths:?}");
    assert_eq!(rep["result"]["strictly_increasing"], true);

    let dir = tempfile::tempdir().unwrap();
    for (i, r) in [8, 16, 32].into_iter().enumerate() {
        let w = dir.path().join("w.json");
        let e = dir.path().join("e.json");
        let o = run(&[
            "generate", "--kind", "grid-with-holes", "--radius", &r.to_string(), "--out", w.to_str().unwrap(),
            "--embedding", e.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        assert_eq!(max_interior_face(&read(&w), &read(&e)) as u64, lengths[i], "r = {r}");
    }
}

#[test]
fn window_file_and_generator_agree() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.json");
    let e = dir.path().join("e.json");
    run(&[
        "generate", "--kind", "grid", "--radius", "3", "--out", w.to_str().unwrap(), "--embedding", e.to_str().unwrap(),
    ]);
    let a = run(&["faces", "--window", w.to_str().unwrap(), "--embedding", e.to_str().unwrap()]);
    let b = run(&["faces", "--kind", "grid", "--radius", "3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["cuts", "--window", w.to_str().unwrap(), "--max-size", "2"]);
    let d = run(&["cuts", "--kind", "grid", "--radius", "3", "--max-size", "2"]);
    assert_eq!(c.stdout, d.stdout);
}

const COMMANDS: &[&[&str]] = &[
    &["generate", "--kind", "tree-of-flats", "--radius", "3"],
    &["generate", "--kind", "grid", "--radius", "2", "--format", "dot"],
    &["cuts", "--kind", "ladder", "--radius", "5", "--max-size", "2"],
    &["menger", "--kind", "cylinder", "--radius", "4", "--from", "marker:0", "--to", "marker:1"],
    &["structure-tree", "--kind", "free-group:2", "--radius", "3"],
    &["structure-tree", "--kind", "ladder", "--radius", "4", "--format", "dot"],
    &["tree-decomp", "--kind", "ladder", "--radius", "5"],
    &["tree-decomp", "--kind", "tree-of-flats", "--radius", "3", "--type", "connected"],
    &["faces", "--kind", "grid-with-holes", "--radius", "10"],
    &["friendly", "--ladder", "3", "--crossing"],
    &["friendly", "--kind", "grid", "--radius", "3", "--subgraph", "0,0;1,0;1,1;0,1"],
    &["badloop", "--kind", "cylinder", "--radius", "4", "--loop", "0,0;0,1;0,2;0,3"],
    &["fill", "--kind", "grid", "--radius", "2"],
    &["cone", "--kind", "grid", "--radius", "3"],
    &["chomp", "--example", "torus7"],
    &["tracks", "--example", "torus7"],
    &["qi-verify", "--kind", "grid", "--radius", "4", "--preset", "perturb:7"],
    &["qi-verify", "--kind", "z", "--radius", "10", "--preset", "doubling", "--surjective"],
    &["qi-transfer", "--kind", "z", "--radius", "10", "--preset", "doubling", "--side", "-3;-2;-1;0", "--big-r", "5"],
    &["diagnose-faces", "--kind", "grid-with-holes", "--radii", "4,8"],
];

#[test]
fn outputs_are_byte_identical_across_runs_and_modes() {
    for args in COMMANDS {
        let a = run(args);
        assert!(a.status.success(), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        let b = run(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        let mut seq = vec!["--sequential"];
        seq.extend_from_slice(args);
        assert_eq!(a.stdout, run(&seq).stdout, "{args:?} sequential");
    }
}

#[test]
fn reports_carry_radius_and_conventions() {
    for args in COMMANDS.iter().filter(|a| a[0] != "generate" && !a.contains(&"dot")) {
        let v = ok_json(args);
        assert_eq!(v["command"], args[0]);
        assert!(v.get("radius").is_some(), "{args:?}");
        assert!(v["conventions"]["interior_coboundary"].is_string());
        assert!(v["conventions"]["marker_merge"].is_string());
    }
    let v = ok_json(&["menger", "--kind", "ladder", "--radius", "7", "--from", "marker:0", "--to", "marker:1"]);
    assert_eq!(v["radius"], 7);
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("r.json");
    let args = ["structure-tree", "--kind", "ladder", "--radius", "4"];
    let stdout = run(&args).stdout;
    let mut with_out = args.to_vec();
    with_out.extend(["--out", p.to_str().unwrap()]);
    let o = run(&with_out);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read(&p).unwrap(), stdout);
}

#[test]
fn exit_codes() {
    // Domain precondition and argument failures.
    let o = run(&["menger", "--kind", "grid", "--radius", "3", "--from", "marker:0", "--to", "marker:9"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["qi-transfer", "--kind", "z", "--radius", "10", "--preset", "doubling", "--side", "-3;-2", "--big-r", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("certification failed"));
    let o = run(&["bogus"]);
    assert_eq!(o.status.code(), Some(1));
    // I/O.
    let o = run(&["cuts", "--window", "/nonexistent/w.json"]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["generate", "--kind", "grid", "--radius", "2", "--out", "/nonexistent/dir/w.json"]);
    assert_eq!(o.status.code(), Some(3));
    // Budget: window size and truncated enumeration.
    let o = bin()
        .args(["cuts", "--kind", "grid", "--radius", "4"])
        .env("SPLITTOOL_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("cuts.json");
    let o = bin()
        .args(["cuts", "--kind", "grid", "--radius", "4", "--max-size", "4", "--out", p.to_str().unwrap()])
        .env("SPLITTOOL_BUDGET", "200")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(read(&p)["result"]["truncated"], true);
}

#[test]
fn qi_map_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    let w = dir.path().join("w.json");
    run(&["generate", "--kind", "z", "--radius", "5", "--out", w.to_str().unwrap()]);
    // x -> -x is an isometry of the Z window.
    let map: BTreeMap<String, String> = (-5..=5).map(|x: i64| (x.to_string(), (-x).to_string())).collect();
    let body = serde_json::json!({"map": map, "lambda": "1", "eps": "0"});
    std::fs::write(&m, body.to_string()).unwrap();
    let v = ok_json(&["qi-verify", "--window", w.to_str().unwrap(), "--map", m.to_str().unwrap(), "--surjective"]);
    assert_eq!(v["result"]["report"]["passes"], true);
    assert_eq!(v["result"]["report"]["pairs_checked"], 55);
    // Declaring λ = 1, ε = 0 for x -> 2x fails.
    let map: BTreeMap<String, String> = (-5..=5).map(|x: i64| (x.to_string(), (x / 2).to_string())).collect();
    std::fs::write(&m, serde_json::json!({"map": map, "lambda": "1", "eps": "0"}).to_string()).unwrap();
    let v = ok_json(&["qi-verify", "--window", w.to_str().unwrap(), "--map", m.to_str().unwrap()]);
    assert_eq!(v["result"]["report"]["passes"], false);
}

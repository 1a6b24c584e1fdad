mod common;

use std::collections::BTreeSet;

use common::{v, window};
use num_rational::Rational64;
use proptest::prelude::*;
use splittool_core::cuts::make_cut;
use splittool_core::graphcore::{Graph, VertexId, Window};
use splittool_core::par::Exec;
use splittool_core::planar::PlanarEmbedding;
use splittool_core::qimaps::*;
use splittool_core::Error;

const BIG: u32 = u32::MAX / 4;

fn floyd(g: &Graph) -> Vec<Vec<u32>> {
    let n = g.vertex_count();
    let mut d = vec![vec![BIG; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for e in g.edges() {
        let [a, b] = g.endpoints(e);
        d[a.idx()][b.idx()] = d[a.idx()][b.idx()].min(1);
        d[b.idx()][a.idx()] = d[b.idx()][a.idx()].min(1);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Violated pairs by integer cross-multiplication.
fn brute_violations(f: &QiMap, dd: &[Vec<u32>], cd: &[Vec<u32>]) -> BTreeSet<(usize, usize, Bound)> {
    let (lp, lq) = (*f.lambda.numer() as i128, *f.lambda.denom() as i128);
    let (ep, eq) = (*f.eps.numer() as i128, *f.eps.denom() as i128);
    let mut out = BTreeSet::new();
    let n = dd.len();
    for i in 0..n {
        for j in i + 1..n {
            let d = dd[i][j] as i128;
            let fd = cd[f.vertex_map[i].idx()][f.vertex_map[j].idx()] as i128;
            // fd > (lp/lq) d + ep/eq  <=>  fd lq eq > lp d eq + ep lq
            if fd * lq * eq > lp * d * eq + ep * lq {
                out.insert((i, j, Bound::Upper));
            } else if fd * lp * eq < d * lq * eq - ep * lp {
                // fd < d lq/lp − ep/eq
                out.insert((i, j, Bound::Lower));
            }
        }
    }
    out
}

fn reported(dom: &Graph, r: &QiReport) -> BTreeSet<(usize, usize, Bound)> {
    r.violations
        .iter()
        .map(|x| (dom.vertex(&x.x).unwrap().idx(), dom.vertex(&x.y).unwrap().idx(), x.bound))
        .collect()
}

fn ratio(p: i64, q: i64) -> Rational64 {
    Rational64::new(p, q)
}

fn zname(x: i64) -> String {
    x.to_string()
}

#[test]
fn verify_small_examples() {
    let z = window("zline", 6);
    let z2 = window("zline", 12);
    let id = identity_map(&z);
    let rep = verify_qi(&id, &z, &z, true, Exec::Sequential).unwrap();
    assert!(rep.passes && rep.exhaustive);
    assert_eq!(rep.pairs_checked, 13 * 12 / 2);
    assert_eq!(rep.coarse_surjectivity, Some(0));

    let mut dbl = doubling_map(&z, &z2).unwrap();
    dbl.lambda = ratio(1, 1);
    dbl.eps = ratio(0, 1);
    let rep = verify_qi(&dbl, &z, &z2, false, Exec::Sequential).unwrap();
    assert!(!rep.passes);
    // 2d > d on every pair; the lower inequality d ≤ 2d never fails.
    assert_eq!(rep.violations.len(), 78);
    assert!(rep.violations.iter().all(|x| x.bound == Bound::Upper));
    dbl.lambda = ratio(2, 1);
    assert!(verify_qi(&dbl, &z, &z2, false, Exec::Sequential).unwrap().passes);
    // Odd points sit at distance 1 from the image.
    let rep = verify_qi(&dbl, &z, &z2, true, Exec::Sequential).unwrap();
    assert_eq!((rep.coarse_surjectivity, rep.surjective_ok), (Some(1), Some(false)));
    dbl.eps = ratio(1, 1);
    assert!(verify_qi(&dbl, &z, &z2, true, Exec::Sequential).unwrap().passes);

    let g = window("grid2d", 4);
    let rot = grid_rotation(&g).unwrap();
    let rep = verify_qi(&rot, &g, &g, true, Exec::Parallel).unwrap();
    assert!(rep.passes);
    assert!(rep.exhaustive && rep.pairs_checked == 820);
}

#[test]
fn verify_matches_oracle_on_windows() {
    for (kind, r) in [("grid2d", 3), ("cylinder", 3), ("ladder", 4), ("zline", 20)] {
        let w = window(kind, r);
        let d = floyd(w.graph());
        for seed in 0..6 {
            let mut f = perturbation(&w, seed);
            let rep = verify_qi(&f, &w, &w, true, Exec::Parallel).unwrap();
            assert!(rep.exhaustive);
            assert_eq!(reported(w.graph(), &rep), brute_violations(&f, &d, &d));
            assert!(rep.passes, "{kind}: perturbation is a (1,2)-QI");
            f.eps = ratio(1, 2);
            let rep = verify_qi(&f, &w, &w, false, Exec::Sequential).unwrap();
            assert_eq!(reported(w.graph(), &rep), brute_violations(&f, &d, &d), "{kind} seed {seed}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn verify_random_maps(images in prop::collection::vec(0usize..25, 25), lp in 1i64..4, lq in 1i64..3, ep in 0i64..4, eq in 1i64..3) {
        prop_assume!(lp >= lq);
        let w = window("grid2d", 3);
        let n = w.graph().vertex_count();
        let f = QiMap::new(images.iter().map(|&i| VertexId((i % n) as u32)).collect(), ratio(lp, lq), ratio(ep, eq));
        let d = floyd(w.graph());
        let rep = verify_qi(&f, &w, &w, true, Exec::Parallel).unwrap();
        prop_assert!(rep.exhaustive);
        prop_assert_eq!(reported(w.graph(), &rep), brute_violations(&f, &d, &d));
        // Coarse surjectivity: farthest point from the image.
        let cov = (0..n).map(|y| f.vertex_map.iter().map(|x| d[y][x.idx()]).min().unwrap()).max().unwrap();
        prop_assert_eq!(rep.coarse_surjectivity, Some(cov));
    }
}

#[test]
fn sampling_is_seeded_and_bounded() {
    let w = window("grid2d", 8);
    let f = perturbation(&w, 3);
    let a = verify_qi(&f, &w, &w, false, Exec::Parallel).unwrap();
    let b = verify_qi(&f, &w, &w, false, Exec::Sequential).unwrap();
    assert!(!a.exhaustive);
    assert!(a.pairs_checked <= SAMPLED_PAIRS && a.pairs_checked > SAMPLED_PAIRS * 9 / 10);
    assert_eq!(a, b);
}

#[test]
fn normalization() {
    let g = window("grid2d", 3);
    let rot = grid_rotation(&g).unwrap();
    let nr = normalize_continuous(&rot, &g, &g, Exec::Sequential).unwrap();
    assert_eq!(nr.report.longest_edge_path, 1);
    assert_eq!(nr.report.inclusion_stretch.as_deref(), Some("1"));
    nr.map.validate(g.graph(), g.graph()).unwrap();

    let z = window("zline", 5);
    let z2 = window("zline", 10);
    let dbl = doubling_map(&z, &z2).unwrap();
    let nd = normalize_continuous(&dbl, &z, &z2, Exec::Parallel).unwrap();
    let paths = nd.map.edge_paths.as_ref().unwrap();
    assert!(paths.iter().all(|p| p.len() == 3));
    let names: BTreeSet<i64> = nd.image_vertices.iter().map(|&x| z2.graph().name(x).parse().unwrap()).collect();
    assert_eq!(names, (-10..=10).collect());
    assert_eq!(nd.report.image_valence, 2);

    for (kind, r) in [("grid2d", 4), ("cylinder", 4), ("ladder", 5)] {
        let w = window(kind, r);
        let d = floyd(w.graph());
        for seed in 0..4 {
            let f = perturbation(&w, seed);
            let nf = normalize_continuous(&f, &w, &w, Exec::Parallel).unwrap();
            nf.map.validate(w.graph(), w.graph()).unwrap();
            let paths = nf.map.edge_paths.as_ref().unwrap();
            for e in w.graph().edges() {
                let [a, b] = w.graph().endpoints(e);
                let p = &paths[e.idx()];
                // Geodesic: length equals the oracle distance of the images.
                assert_eq!(p.len() - 1, d[f.image(a).idx()][f.image(b).idx()] as usize);
                assert!(p.len() - 1 <= 3, "λ + ε bounds an edge image");
            }
            assert!(nf.report.image_connected);
            assert!(nf.report.image_valence <= w.graph().max_degree());
            // Stretch oracle: Λ distances against window distances.
            let (sub, back) =
                splittool_core::graphcore::edge_subgraph(w.graph(), &nf.image_vertices, &nf.image_edges).unwrap();
            let dl = floyd(&sub);
            let mut worst = ratio(1, 1);
            for i in 0..back.len() {
                for j in i + 1..back.len() {
                    worst = worst.max(ratio(dl[i][j] as i64, d[back[i].idx()][back[j].idx()] as i64));
                }
            }
            if nf.report.exhaustive {
                assert_eq!(nf.report.inclusion_stretch, Some(worst.to_string()));
            }
        }
    }
}

/// g by brute force: the least-id preimage of a nearest image point.
fn brute_inverse(f: &QiMap, cd: &[Vec<u32>]) -> Vec<VertexId> {
    (0..cd.len())
        .map(|y| {
            (0..f.vertex_map.len())
                .min_by_key(|&x| (cd[y][f.vertex_map[x].idx()], x))
                .map(|x| VertexId(x as u32))
                .unwrap()
        })
        .collect()
}

#[test]
fn quasi_inverse_examples() {
    let z = window("zline", 7);
    let id = quasi_inverse(&identity_map(&z), &z, &z, Exec::Sequential).unwrap();
    assert_eq!(id.eta(), 0);
    assert_eq!(id.map.vertex_map, identity_map(&z).vertex_map);

    let z2 = window("zline", 14);
    let dbl = doubling_map(&z, &z2).unwrap();
    let qi = quasi_inverse(&dbl, &z, &z2, Exec::Sequential).unwrap();
    for y in -14i64..=14 {
        let gy = z.graph().name(qi.map.image(v(&z2, &zname(y)))).parse::<i64>().unwrap();
        // Ties go to the earlier BFS id, which is the one nearer 0.
        assert_eq!(gy, y / 2, "g({y})");
    }
    assert_eq!((qi.eta_domain, qi.eta_codomain, qi.eta()), (0, 1, 1));
    assert_eq!(qi.map.vertex_map, brute_inverse(&dbl, &floyd(z2.graph())));

    let g = window("grid2d", 4);
    let rot = grid_rotation(&g).unwrap();
    let inv = quasi_inverse(&rot, &g, &g, Exec::Parallel).unwrap();
    assert_eq!(inv.eta(), 0);
    for x in g.graph().vertices() {
        let n = g.graph().name(inv.map.image(x));
        let [a, b]: [i64; 2] = g.graph().name(x).split(',').map(|s| s.parse().unwrap()).collect::<Vec<_>>().try_into().unwrap();
        assert_eq!(n, format!("{},{}", b, -a));
    }

    let mut bad = doubling_map(&z, &z2).unwrap();
    bad.eps = ratio(0, 1);
    match quasi_inverse(&bad, &z, &z2, Exec::Sequential) {
        Err(Error::Precondition(m)) => assert!(m.contains("not coarsely surjective"), "{m}"),
        other => panic!("expected a precondition error, got {other:?}"),
    }
}

#[test]
fn quasi_inverse_displacement_exhaustive() {
    let mut cases: Vec<(Window, Window, QiMap)> = Vec::new();
    for kind in ["grid2d", "cylinder", "ladder", "tree-of-flats"] {
        let w = window(kind, 3);
        for seed in 0..5 {
            let f = perturbation(&w, seed);
            cases.push((w.clone(), w.clone(), f));
        }
    }
    let g = window("grid2d", 4);
    let d4 = stretched_diamond(4).unwrap();
    cases.push((g.clone(), d4.clone(), grid_stretch(&g, &d4).unwrap()));
    let z = window("zline", 9);
    let z2 = window("zline", 18);
    cases.push((z.clone(), z2.clone(), doubling_map(&z, &z2).unwrap()));
    for (dom, cod, f) in &cases {
        let qi = quasi_inverse(f, dom, cod, Exec::Parallel).unwrap();
        let (dd, cd) = (floyd(dom.graph()), floyd(cod.graph()));
        assert_eq!(qi.map.vertex_map, brute_inverse(f, &cd));
        let eta_d = (0..dd.len()).map(|x| dd[x][qi.map.image(f.vertex_map[x]).idx()]).max().unwrap();
        let eta_c = (0..cd.len()).map(|y| cd[y][f.image(qi.map.vertex_map[y]).idx()]).max().unwrap();
        assert_eq!((qi.eta_domain, qi.eta_codomain), (eta_d, eta_c));
        // The claimed constants of g hold on every pair.
        assert!(brute_violations(&qi.map, &cd, &dd).is_empty());
    }
}

#[test]
fn stretch_is_a_quasi_isometry() {
    for r in 2..=5 {
        let g = window("grid2d", r);
        let d = stretched_diamond(r).unwrap();
        let f = grid_stretch(&g, &d).unwrap();
        let (dd, cd) = (floyd(g.graph()), floyd(d.graph()));
        assert!(brute_violations(&f, &dd, &cd).is_empty());
        assert!(verify_qi(&f, &g, &d, true, Exec::Parallel).unwrap().passes);
    }
}

#[test]
fn transfer_identity_is_identity() {
    let w = window("grid2d", 3);
    let id = identity_map(&w);
    let g = w.graph();
    for mask in [0b1u32, 0b1011, 0x1ff_0000, 0x0f0f_0f0] {
        let b = make_cut(&w, g.vertices().filter(|x| mask >> (x.idx() % 32) & 1 == 1)).unwrap();
        let (out, rep) = transfer_cut(&id, &w, &w, &b, Some(ratio(0, 1)), Exec::Sequential).unwrap();
        assert_eq!(out.mask(), b.mask());
        assert_eq!(rep.hausdorff, Some(0));
        assert_eq!(rep.coboundary_radius, Some(0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn transfer_identity_random(bits in prop::collection::vec(any::<bool>(), 25)) {
        let w = window("grid2d", 3);
        let id = identity_map(&w);
        let b = make_cut(&w, w.graph().vertices().filter(|x| bits[x.idx()])).unwrap();
        let (out, _) = transfer_cut(&id, &w, &w, &b, Some(ratio(0, 1)), Exec::Sequential).unwrap();
        prop_assert_eq!(out.mask(), b.mask());
    }
}

#[test]
fn transfer_doubling_default_radius() {
    let z = window("zline", 2000);
    let z2 = window("zline", 4000);
    let f = doubling_map(&z, &z2).unwrap();
    let b = make_cut(&z, z.graph().vertices().filter(|&x| z.graph().name(x).parse::<i64>().unwrap() <= 0)).unwrap();
    let (out, rep) = transfer_cut(&f, &z, &z2, &b, None, Exec::Parallel).unwrap();
    assert_eq!(rep.radius, 3200);
    assert_eq!(out.size(), 1);
    let side: Vec<i64> = out.side().iter().map(|&x| z2.graph().name(x).parse().unwrap()).collect();
    assert_eq!(side.iter().min(), Some(&-4000));
    assert_eq!(side.iter().max(), Some(&3200));
    assert_eq!(side.len(), 7201);
    // δb′ = {3200, 3201}; f(∂b) = {0, 2}.
    assert_eq!(rep.coboundary_radius, Some(3199));
    assert_eq!(rep.hausdorff, Some(3200));
    assert_eq!(rep.connected_out, Some(true));
}

#[test]
fn transfer_grid_stretch() {
    let r = 5;
    let g = window("grid2d", r);
    let d = stretched_diamond(r).unwrap();
    let f = grid_stretch(&g, &d).unwrap();
    let cd = floyd(d.graph());
    let half = make_cut(&g, g.graph().vertices().filter(|&x| g.graph().name(x).starts_with('-') || g.graph().name(x).starts_with("0,"))).unwrap();
    for radius in 1..=3u32 {
        let (out, rep) = transfer_cut(&f, &g, &d, &half, Some(ratio(radius as i64, 1)), Exec::Parallel).unwrap();
        let img: Vec<usize> = half.side().iter().map(|&x| f.image(x).idx()).collect();
        // b′ is the radius-ball of the image, by the oracle metric.
        let ball: Vec<bool> = (0..cd.len()).map(|y| img.iter().any(|&i| cd[y][i] <= radius)).collect();
        assert_eq!(out.mask(), &ball[..]);
        let ends: Vec<usize> = half.coboundary_vertices(g.graph()).iter().map(|&x| f.image(x).idx()).collect();
        let measured = out
            .coboundary_vertices(d.graph())
            .iter()
            .map(|y| ends.iter().map(|&e| cd[y.idx()][e]).min().unwrap())
            .max()
            .unwrap();
        assert_eq!(rep.coboundary_radius, Some(measured));
        // λ²(R + 1 + η + ε) + η + ε + 1 with λ = 2, η = ε = 1.
        assert_eq!(rep.coboundary_bound, (4 * (radius + 3) + 3).to_string());
        assert!(measured <= 4 * (radius + 3) + 3);
        assert_eq!(rep.connected_out, Some(true));
    }
    match transfer_cut(&f, &g, &d, &half, Some(ratio(0, 1)), Exec::Sequential) {
        Err(Error::Certification(m)) => assert!(m.contains("certified from 1"), "{m}"),
        other => panic!("R = 0 is below η = 1: {other:?}"),
    }
}

/// Move-cuts by flood fill: returns (tuples, violations).
fn brute_move_cuts(f: &QiMap, dd: &[Vec<u32>], cd: &[Vec<u32>], dg: &Graph, cg: &Graph, s: &[usize], r: u32, big: u32) -> (u64, u64) {
    let label = |g: &Graph, blocked: &[bool]| {
        let n = g.vertex_count();
        let mut l = vec![usize::MAX; n];
        for st in 0..n {
            if blocked[st] || l[st] != usize::MAX {
                continue;
            }
            l[st] = st;
            let mut stack = vec![st];
            while let Some(u) = stack.pop() {
                for w in g.neighbors(VertexId(u as u32)) {
                    if !blocked[w.idx()] && l[w.idx()] == usize::MAX {
                        l[w.idx()] = st;
                        stack.push(w.idx());
                    }
                }
            }
        }
        l
    };
    let in_s: Vec<bool> = (0..dd.len()).map(|i| s.contains(&i)).collect();
    let ld = label(dg, &in_s);
    let blocked: Vec<bool> = (0..cd.len()).map(|y| s.iter().any(|&x| cd[y][f.vertex_map[x].idx()] <= r)).collect();
    let lc = label(cg, &blocked);
    let outside: Vec<usize> = (0..dd.len()).filter(|&x| s.iter().all(|&t| dd[x][t] > big)).collect();
    let (mut tuples, mut bad) = (0, 0);
    for (i, &x) in outside.iter().enumerate() {
        for &y in &outside[i + 1..] {
            if ld[x] != ld[y] {
                tuples += 1;
                let (fx, fy) = (f.vertex_map[x].idx(), f.vertex_map[y].idx());
                if blocked[fx] || blocked[fy] || lc[fx] == lc[fy] {
                    bad += 1;
                }
            }
        }
    }
    (tuples, bad)
}

fn all_subsets(n: usize) -> Vec<Vec<VertexId>> {
    (1u32..1 << n)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).map(|i| VertexId(i as u32)).collect())
        .collect()
}

fn small_subsets(n: usize, k: usize) -> Vec<Vec<VertexId>> {
    let mut out: Vec<Vec<VertexId>> = vec![Vec::new()];
    let mut all = Vec::new();
    for _ in 0..k {
        let mut next = Vec::new();
        for s in &out {
            let start = s.last().map_or(0, |x: &VertexId| x.idx() + 1);
            for i in start..n {
                let mut t = s.clone();
                t.push(VertexId(i as u32));
                next.push(t);
            }
        }
        all.extend(next.iter().cloned());
        out = next;
    }
    all
}

#[test]
fn move_cuts_constants_values() {
    assert_eq!(move_cuts_constants(ratio(1, 1), ratio(0, 1), 0, 0), (0, 0));
    // λ = 2, ε = 1, η = 0, η′ = 1: L = 8, r = 1 + 1 + 2·4, R = ⌈2·11⌉.
    assert_eq!(move_cuts_constants(ratio(2, 1), ratio(1, 1), 0, 1), (10, 22));
}

#[test]
fn move_cuts_exhaustive_small_windows() {
    let mut effective = 0;
    for (kind, r) in [("grid2d", 2), ("zline", 6), ("ladder", 3), ("cylinder", 2)] {
        let w = window(kind, r);
        let n = w.graph().vertex_count();
        assert!(n <= 16, "{kind} has {n} vertices");
        let d = floyd(w.graph());
        let mut maps = vec![identity_map(&w)];
        if kind == "grid2d" {
            maps.push(grid_rotation(&w).unwrap());
        }
        let sets = all_subsets(n);
        for f in &maps {
            let rep = move_cuts_check(f, &w, &w, &sets, None, Exec::Parallel).unwrap();
            assert!(rep.violations.is_empty());
            let brute: u64 = sets
                .iter()
                .map(|s| {
                    let s: Vec<usize> = s.iter().map(|x| x.idx()).collect();
                    let (t, bad) = brute_move_cuts(f, &d, &d, w.graph(), w.graph(), &s, rep.r, rep.big_r);
                    assert_eq!(bad, 0);
                    t
                })
                .sum();
            assert_eq!(rep.tuples, brute);
            effective += rep.effective_sets;
        }
    }
    assert!(effective > 1000);
}

#[test]
fn move_cuts_up_to_thirty_vertices() {
    for (kind, r) in [("grid2d", 3), ("zline", 14), ("ladder", 6), ("cylinder", 3)] {
        let w = window(kind, r);
        let n = w.graph().vertex_count();
        assert!(n <= 30);
        let d = floyd(w.graph());
        let sets = small_subsets(n, 3);
        for f in [identity_map(&w), perturbation(&w, 1)] {
            let rep = move_cuts_check(&f, &w, &w, &sets, None, Exec::Parallel).unwrap();
            assert!(rep.violations.is_empty(), "{kind}: {:?}", &rep.violations[..1]);
            for s in sets.iter().step_by(97) {
                let s: Vec<usize> = s.iter().map(|x| x.idx()).collect();
                assert_eq!(brute_move_cuts(&f, &d, &d, w.graph(), w.graph(), &s, rep.r, rep.big_r).1, 0);
            }
        }
    }
}

#[test]
fn move_cuts_doubling_is_not_vacuous() {
    let z = window("zline", 60);
    let z2 = window("zline", 120);
    let f = doubling_map(&z, &z2).unwrap();
    let n = z.graph().vertex_count();
    let mut sets: Vec<Vec<VertexId>> = Vec::new();
    for a in 0..n {
        for b in a..n.min(a + 4) {
            sets.push((a..=b).map(|i| VertexId(i as u32)).collect());
        }
    }
    let rep = move_cuts_check(&f, &z, &z2, &sets, None, Exec::Parallel).unwrap();
    assert_eq!((rep.r, rep.big_r), (10, 22));
    assert!(rep.violations.is_empty());
    assert!(rep.effective_sets > 0 && rep.tuples > 0);
    let (dd, cd) = (floyd(z.graph()), floyd(z2.graph()));
    let mut brute = 0;
    for s in sets.iter() {
        let s: Vec<usize> = s.iter().map(|x| x.idx()).collect();
        let (t, bad) = brute_move_cuts(&f, &dd, &cd, z.graph(), z2.graph(), &s, 10, 22);
        assert_eq!(bad, 0);
        brute += t;
    }
    assert_eq!(rep.tuples, brute);
}

#[test]
fn move_cuts_detects_collapse() {
    let z = window("zline", 4);
    let c = QiMap::new(vec![VertexId(0); 9], ratio(1, 1), ratio(0, 1));
    let rep = move_cuts_check(&c, &z, &z, &[vec![v(&z, "0")]], Some((0, 0)), Exec::Sequential).unwrap();
    assert!(!rep.violations.is_empty());
}

/// incut and outcut by definition, with Floyd distances inside each part.
fn brute_diameters(g: &Graph, lam: &[bool]) -> (u32, u32) {
    let incut = |part: &[bool]| {
        let keep: Vec<usize> = (0..part.len()).filter(|&i| part[i]).collect();
        let (sub, _) = splittool_core::graphcore::induced_subgraph(g, &keep.iter().map(|&i| VertexId(i as u32)).collect::<Vec<_>>());
        let d = floyd(&sub);
        let pos = |x: usize| keep.iter().position(|&k| k == x).unwrap();
        let mut seen = vec![false; part.len()];
        let mut best = 0;
        for s in 0..part.len() {
            if part[s] || seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut i = 0;
            while i < comp.len() {
                for w in g.neighbors(VertexId(comp[i] as u32)) {
                    if !part[w.idx()] && !seen[w.idx()] {
                        seen[w.idx()] = true;
                        comp.push(w.idx());
                    }
                }
                i += 1;
            }
            let ends: BTreeSet<usize> = comp
                .iter()
                .flat_map(|&x| g.neighbors(VertexId(x as u32)))
                .filter(|w| part[w.idx()])
                .map(|w| pos(w.idx()))
                .collect();
            for &a in &ends {
                for &b in &ends {
                    best = best.max(d[a][b]);
                }
            }
        }
        best
    };
    let inn = incut(lam);
    let mut out = 0;
    let mut seen = vec![false; lam.len()];
    for s in 0..lam.len() {
        if lam[s] || seen[s] {
            continue;
        }
        let mut comp = vec![false; lam.len()];
        let mut stack = vec![s];
        seen[s] = true;
        comp[s] = true;
        while let Some(u) = stack.pop() {
            for w in g.neighbors(VertexId(u as u32)) {
                if !lam[w.idx()] && !seen[w.idx()] {
                    seen[w.idx()] = true;
                    comp[w.idx()] = true;
                    stack.push(w.idx());
                }
            }
        }
        out = out.max(incut(&comp));
    }
    (inn, out)
}

#[test]
fn coboundary_diameter_examples() {
    let w = window("grid2d", 5);
    let g = w.graph();
    let all: Vec<VertexId> = g.vertices().collect();
    let cd = coboundary_diameters(&w, &all).unwrap();
    assert_eq!((cd.incut.value, cd.outcut.value), (0, 0));

    let hole = v(&w, "1,1");
    let lam: Vec<VertexId> = all.iter().copied().filter(|&x| x != hole).collect();
    let cd = coboundary_diameters(&w, &lam).unwrap();
    // Opposite neighbours of the hole are 4 apart inside Λ (2 in the window).
    assert_eq!((cd.incut.value, cd.outcut.value), (4, 0));
    assert_eq!(brute_diameters(g, &g.vertex_mask(lam.iter().copied())), (4, 0));
    assert!(!cd.incut.lower_bound);

    let square = common::vs(&w, &["0,0", "1,0", "0,1", "1,1"]);
    let lam: Vec<VertexId> = all.iter().copied().filter(|x| !square.contains(x)).collect();
    let cd = coboundary_diameters(&w, &lam).unwrap();
    let mask = g.vertex_mask(lam.iter().copied());
    assert_eq!((cd.incut.value, cd.outcut.value), brute_diameters(g, &mask));
    // Rim of the 2×2 hole: opposite corners (−1,0) and (2,1) are 6 apart.
    assert_eq!(cd.incut.value, 6);
    assert_eq!(cd.outcut.value, 2);

    let disc = common::vs(&w, &["-3,0", "3,0"]);
    assert!(matches!(coboundary_diameters(&w, &disc), Err(Error::Precondition(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn diameters_and_inclusion(holes in prop::collection::vec(0usize..41, 1..6)) {
        let w = window("grid2d", 4);
        let g = w.graph();
        let lam: Vec<VertexId> = g.vertices().filter(|x| !holes.contains(&x.idx())).collect();
        let (sub, back) = splittool_core::graphcore::induced_subgraph(g, &lam);
        prop_assume!(splittool_core::graphcore::is_connected(&sub));
        let cd = coboundary_diameters(&w, &lam).unwrap();
        let mask = g.vertex_mask(lam.iter().copied());
        prop_assert_eq!((cd.incut.value, cd.outcut.value), brute_diameters(g, &mask));
        // The inclusion is a (max(1, incut/2), 0)-embedding on every pair.
        let (dl, dg) = (floyd(&sub), floyd(g));
        let l = cd.inclusion_lambda();
        for i in 0..back.len() {
            for j in i + 1..back.len() {
                let lhs = Rational64::from(dl[i][j] as i64);
                let rhs = l * Rational64::from(dg[back[i].idx()][back[j].idx()] as i64);
                prop_assert!(lhs <= rhs, "{} > {}", lhs, rhs);
            }
        }
    }
}

fn grid_emb(r: u32) -> (Window, PlanarEmbedding) {
    let spec: splittool_core::generators::GeneratorSpec = "grid2d".parse().unwrap();
    let src = spec.source().unwrap();
    let w = Window::build(src.as_ref(), r).unwrap();
    let emb = PlanarEmbedding::from_source(&w, src.as_ref()).unwrap();
    (w, emb)
}

/// Self-map of a Z² window by coordinates, clamped to the nearest window
/// vertex (L1, least id).
fn clamped(w: &Window, f: impl Fn(i64, i64) -> (i64, i64), lambda: i64, eps: i64) -> QiMap {
    let g = w.graph();
    let pts: Vec<(i64, i64)> = g
        .vertices()
        .map(|x| {
            let c: Vec<i64> = g.name(x).split(',').map(|s| s.parse().unwrap()).collect();
            (c[0], c[1])
        })
        .collect();
    let vm = pts
        .iter()
        .map(|&(x, y)| {
            let (a, b) = f(x, y);
            let k = (0..pts.len()).min_by_key(|&i| ((pts[i].0 - a).abs() + (pts[i].1 - b).abs(), i)).unwrap();
            VertexId(k as u32)
        })
        .collect();
    QiMap::new(vm, ratio(lambda, 1), ratio(eps, 1))
}

fn brute_good_behavior(emb: &PlanarEmbedding, maps: &[&QiMap], n: u32) -> u32 {
    let d = floyd(emb.graph());
    let fs = splittool_core::planar::faces(emb);
    let haus = |a: &[usize], b: &[usize]| {
        let one = |p: &[usize], q: &[usize]| p.iter().map(|&x| q.iter().map(|&y| d[x][y]).min().unwrap()).max().unwrap();
        one(a, b).max(one(b, a))
    };
    let mut worst = 0;
    for f in fs.iter().filter(|f| !f.boundary_touching) {
        let vs: Vec<usize> = f.vertices.iter().map(|x| x.idx()).collect();
        let diam = vs.iter().flat_map(|&a| vs.iter().map(move |&b| (a, b))).map(|(a, b)| d[a][b]).max().unwrap();
        if diam <= n {
            continue;
        }
        for m in maps {
            let img: Vec<usize> = vs.iter().map(|&x| m.vertex_map[x].idx()).collect();
            let best = fs
                .iter()
                .map(|f2| haus(&f2.vertices.iter().map(|x| x.idx()).collect::<Vec<_>>(), &img))
                .min()
                .unwrap();
            worst = worst.max(best);
        }
    }
    worst
}

fn sample(maps: Vec<(&str, QiMap)>, products: &[[&str; 3]], lambda: i64, cobound: i64) -> QuasiActionSample {
    QuasiActionSample {
        maps: maps.into_iter().map(|(l, m)| (l.to_string(), m)).collect(),
        products: products.iter().map(|t| t.map(String::from)).collect(),
        lambda: ratio(lambda, 1),
        cobound: ratio(cobound, 1),
    }
}

#[test]
fn good_behavior_examples() {
    let (w, emb) = grid_emb(5);
    let id = sample(vec![("e", identity_map(&w))], &[["e", "e", "e"]], 1, 20);
    let rep = good_behavior_check(&id, &emb, 1, 1, Exec::Sequential).unwrap();
    assert_eq!(rep.max_distance, 0);
    assert!(rep.gb1);
    assert!(rep.faces_checked > 0);
    // The diamond's four tips hang by single edges.
    assert!(!rep.gb2);

    let tr = sample(
        vec![
            ("e", identity_map(&w)),
            ("E", grid_translation(&w, 1, 0).unwrap()),
            ("N", grid_translation(&w, 0, 1).unwrap()),
            ("W", grid_translation(&w, -1, 0).unwrap()),
        ],
        &[["E", "W", "e"], ["W", "E", "e"], ["e", "N", "N"]],
        3,
        20,
    );
    let rep = good_behavior_check(&tr, &emb, 1, 1, Exec::Parallel).unwrap();
    assert_eq!(rep.max_distance, 0);
    let maps: Vec<&QiMap> = tr.maps.values().collect();
    assert_eq!(brute_good_behavior(&emb, &maps, 1), 0);

    let stretch = clamped(&w, |x, y| (2 * x, y), 2, 10);
    let st = sample(vec![("e", identity_map(&w)), ("s", stretch)], &[], 10, 20);
    let rep = good_behavior_check(&st, &emb, 1, 100, Exec::Parallel).unwrap();
    let maps: Vec<&QiMap> = st.maps.values().collect();
    assert_eq!(rep.max_distance, brute_good_behavior(&emb, &maps, 1));
    // Frozen: a unit square stretched to a 2×1 rectangle is 1 from a face.
    assert_eq!(rep.max_distance, 1);
    assert!(rep.gb1);
}

#[test]
fn quasi_action_sample_checks() {
    let w = window("grid2d", 4);
    let d = floyd(w.graph());
    let maps = vec![
        ("e", identity_map(&w)),
        ("E", grid_translation(&w, 1, 0).unwrap()),
        ("W", grid_translation(&w, -1, 0).unwrap()),
        ("r", grid_rotation(&w).unwrap()),
    ];
    let qa = sample(maps, &[["E", "W", "e"], ["W", "E", "e"], ["r", "e", "r"]], 2, 8);
    let rep = qa.check(&w, Exec::Parallel).unwrap();
    let (e, wm) = (&qa.maps["E"], &qa.maps["W"]);
    let defect = (0..d.len())
        .map(|x| d[x][e.image(wm.image(VertexId(x as u32))).idx()].max(d[x][wm.image(e.image(VertexId(x as u32))).idx()]))
        .max()
        .unwrap();
    assert_eq!(rep.max_composition_defect, defect);
    assert!(rep.non_qi.is_empty());
    let cob = (0..d.len())
        .flat_map(|x| (x + 1..d.len()).map(move |y| (x, y)))
        .map(|(x, y)| qa.maps.values().map(|f| d[x][f.vertex_map[y].idx()]).min().unwrap())
        .max()
        .unwrap();
    assert_eq!(rep.cobounded_max, cob);
    assert_eq!(rep.cobounded_ok, cob <= 8);
    assert!(rep.sample.contains("4 labels"));
}

#[test]
fn cut_growth() {
    let c = window("cylinder", 4);
    let all: Vec<VertexId> = c.graph().vertices().collect();
    let rep = qi_cut_growth_check(&identity_map(&c), &c, &c, &all, 4, Exec::Parallel).unwrap();
    assert!(rep.applicable);
    assert_eq!((rep.vs_domain, rep.vs_image, rep.ratio.as_deref()), (Some(4), Some(4), Some("1")));

    let c2 = window("cylinder", 8);
    let f = cylinder_doubling(&c, &c2).unwrap();
    assert!(verify_qi(&f, &c, &c2, false, Exec::Parallel).unwrap().passes);
    let rep = qi_cut_growth_check(&f, &c, &c2, &all, 4, Exec::Parallel).unwrap();
    let r: Rational64 = rep.ratio.as_deref().unwrap().parse().unwrap();
    assert!(r > ratio(0, 1));
    assert!(r >= ratio(1, 2 * c.graph().max_degree() as i64));

    assert!(matches!(
        qi_cut_growth_check(&identity_map(&c), &c, &c, &all, 5, Exec::Sequential),
        Err(Error::Precondition(_))
    ));
    let g = window("grid2d", 3);
    let gall: Vec<VertexId> = g.graph().vertices().collect();
    assert!(!qi_cut_growth_check(&identity_map(&g), &g, &g, &gall, 1, Exec::Sequential).unwrap().applicable);

    // A collapse is no quasi-isometry and is caught before any transfer.
    let collapse = QiMap::new(vec![VertexId(0); all.len()], ratio(2, 1), ratio(2, 1));
    assert!(!verify_qi(&collapse, &c, &c, false, Exec::Sequential).unwrap().passes);
}

#[test]
fn json_round_trip() {
    let z = window("zline", 3);
    let z2 = window("zline", 6);
    let mut f = doubling_map(&z, &z2).unwrap();
    f.lambda = ratio(5, 2);
    let j = QiMapJson::new(&f, z.graph(), z2.graph());
    assert_eq!(j.lambda, "5/2");
    let text = serde_json::to_string(&j).unwrap();
    assert!(!text.contains("edgePaths"));
    let back: QiMapJson = serde_json::from_str(&text).unwrap();
    assert_eq!(back.to_map(z.graph(), z2.graph()).unwrap(), f);

    let n = normalize_continuous(&f, &z, &z2, Exec::Sequential).unwrap();
    let j = QiMapJson::new(&n.map, z.graph(), z2.graph());
    let text = serde_json::to_string(&j).unwrap();
    assert!(text.contains("edgePaths"));
    let back: QiMapJson = serde_json::from_str(&text).unwrap();
    assert_eq!(back.to_map(z.graph(), z2.graph()).unwrap(), n.map);

    let mut partial = QiMapJson::new(&f, z.graph(), z2.graph());
    partial.map.remove("0");
    assert!(matches!(partial.to_map(z.graph(), z2.graph()), Err(Error::Precondition(_))));
}

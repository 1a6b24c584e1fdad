use std::collections::HashMap;

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graphcore::{Graph, VertexId, Window};

use super::map::QiMap;

fn coords<const N: usize>(name: &str) -> Result<[i64; N]> {
    let parts: Vec<i64> = name
        .split(',')
        .map(|s| s.parse::<i64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Argument(format!("`{name}` is not an integer coordinate")))?;
    parts
        .try_into()
        .map_err(|_| Error::Argument(format!("`{name}` does not have {N} coordinates")))
}

/// Map by coordinate arithmetic on vertex names.
fn by_name<const N: usize>(
    dom: &Window,
    cod: &Window,
    lambda: i64,
    eps: i64,
    f: impl Fn([i64; N]) -> [i64; N],
) -> Result<QiMap> {
    let (dg, cg) = (dom.graph(), cod.graph());
    let vm = dg
        .vertices()
        .map(|v| {
            let c = f(coords::<N>(dg.name(v))?);
            let name = c.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
            cg.vertex(&name)
                .ok_or_else(|| Error::Precondition(format!("image `{name}` of `{}` is outside the codomain", dg.name(v))))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QiMap::new(vm, Rational64::from(lambda), Rational64::from(eps)))
}

pub fn identity_map(w: &Window) -> QiMap {
    QiMap::new(w.graph().vertices().collect(), Rational64::from(1), Rational64::from(0))
}

/// x ↦ 2x on Z windows, a (2, 1)-quasi-isometry onto a window of twice the
/// radius.
pub fn doubling_map(dom: &Window, cod: &Window) -> Result<QiMap> {
    by_name::<1>(dom, cod, 2, 1, |[x]| [2 * x])
}

/// (x, y) ↦ (−y, x) on a Z² window.
pub fn grid_rotation(w: &Window) -> Result<QiMap> {
    by_name::<2>(w, w, 1, 0, |[x, y]| [-y, x])
}

/// (x, y) ↦ (2x, y), a (2, 1)-quasi-isometry.
pub fn grid_stretch(dom: &Window, cod: &Window) -> Result<QiMap> {
    by_name::<2>(dom, cod, 2, 1, |[x, y]| [2 * x, y])
}

/// (x, k) ↦ (2x, k) on Z × Z/4 windows.
pub fn cylinder_doubling(dom: &Window, cod: &Window) -> Result<QiMap> {
    by_name::<2>(dom, cod, 2, 1, |[x, k]| [2 * x, k])
}

/// Z² lattice points with |x|/2 + |y| ≤ r: the image window of
/// [`grid_stretch`] from the r-ball.
pub fn stretched_diamond(r: u32) -> Result<Window> {
    let r = i64::from(r);
    let mut names: Vec<String> = Vec::new();
    let mut pts: Vec<(i64, i64)> = Vec::new();
    for y in -r..=r {
        let span = 2 * (r - y.abs());
        for x in -span..=span {
            pts.push((x, y));
            names.push(format!("{x},{y}"));
        }
    }
    let index: HashMap<(i64, i64), usize> = pts.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut g = Graph::new();
    for n in &names {
        g.add_vertex(n)?;
    }
    for (i, &(x, y)) in pts.iter().enumerate() {
        for q in [(x + 1, y), (x, y + 1)] {
            if let Some(&j) = index.get(&q) {
                g.add_edge(VertexId(i as u32), VertexId(j as u32))?;
            }
        }
    }
    let base = VertexId(index[&(0, 0)] as u32);
    Window::from_graph(g, base)
}

/// Translation by (dx, dy) on a Z² window. Vertices whose image leaves the
/// window go to the nearest window vertex in the L1 metric, least id first.
pub fn grid_translation(w: &Window, dx: i64, dy: i64) -> Result<QiMap> {
    let g = w.graph();
    let pts: Vec<[i64; 2]> = g.vertices().map(|v| coords::<2>(g.name(v))).collect::<Result<_>>()?;
    let vm = pts
        .iter()
        .map(|&[x, y]| {
            let t = [x + dx, y + dy];
            let best = (0..pts.len())
                .min_by_key(|&i| ((pts[i][0] - t[0]).abs() + (pts[i][1] - t[1]).abs(), i))
                .expect("window is nonempty");
            VertexId(best as u32)
        })
        .collect();
    // Clamping moves a point by at most |dx| + |dy| beyond the translate.
    let shift = dx.abs() + dy.abs();
    Ok(QiMap::new(vm, Rational64::from(1), Rational64::from(2 * shift)))
}

/// Each vertex moved to itself or a uniformly chosen neighbour: a (1, 2)
/// quasi-isometry of the window to itself.
pub fn perturbation(w: &Window, seed: u64) -> QiMap {
    let g = w.graph();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vm = g
        .vertices()
        .map(|v| {
            let nb: Vec<VertexId> = g.neighbors(v).collect();
            let k = rng.gen_range(0..=nb.len());
            if k == nb.len() {
                v
            } else {
                nb[k]
            }
        })
        .collect();
    QiMap::new(vm, Rational64::from(1), Rational64::from(2))
}

//! Fundamental group of the closed genus-2 surface,
//! ⟨a, b, c, d | a b a⁻¹ b⁻¹ c d c⁻¹ d⁻¹⟩.
//!
//! Elements are identified by their shortlex-least word (letter order
//! a < A < b < B < c < C < d < D). Spheres are generated breadth first from
//! a cache; a Fuchsian representation (regular octagon, angles π/4) only
//! proposes candidate matches, and Dehn's algorithm decides equality.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Mutex;

use crate::error::{Error, Result};

use super::groups::GroupModel;

const RELATOR: [u8; 8] = [0, 2, 1, 3, 4, 6, 5, 7];

#[inline]
fn inv(l: u8) -> u8 {
    l ^ 1
}

fn free_reduce(w: &mut Vec<u8>) {
    let mut out: Vec<u8> = Vec::with_capacity(w.len());
    for &l in w.iter() {
        if out.last() == Some(&inv(l)) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    *w = out;
}

fn relator_family() -> Vec<[u8; 8]> {
    let mut inverse = [0u8; 8];
    for i in 0..8 {
        inverse[i] = inv(RELATOR[7 - i]);
    }
    let mut out = Vec::with_capacity(16);
    for base in [RELATOR, inverse] {
        for k in 0..8 {
            let mut r = [0u8; 8];
            for i in 0..8 {
                r[i] = base[(i + k) % 8];
            }
            out.push(r);
        }
    }
    out
}

/// Dehn's algorithm: shortens `w` until no subword is more than half of a
/// cyclic conjugate of the relator or its inverse. `w` represents the
/// identity iff the result is empty.
pub fn dehn_reduce(mut w: Vec<u8>) -> Vec<u8> {
    let family = relator_family();
    free_reduce(&mut w);
    'outer: loop {
        for start in 0..w.len() {
            for r in &family {
                let mut k = 0;
                while k < 8 && start + k < w.len() && w[start + k] == r[k] {
                    k += 1;
                }
                if k >= 5 {
                    // w[start..start+k] = r[..k]  ==  (r[k..])⁻¹
                    let repl: Vec<u8> = r[k..].iter().rev().map(|&l| inv(l)).collect();
                    w.splice(start..start + k, repl);
                    free_reduce(&mut w);
                    continue 'outer;
                }
            }
        }
        return w;
    }
}

pub fn is_identity(w: &[u8]) -> bool {
    dehn_reduce(w.to_vec()).is_empty()
}

/// SU(1,1) matrix [[α, β], [β̄, ᾱ]] stored as (α.re, α.im, β.re, β.im).
#[derive(Clone, Copy, Debug)]
struct Su11([f64; 4]);

impl Su11 {
    const ID: Su11 = Su11([1.0, 0.0, 0.0, 0.0]);

    fn rot(t: f64) -> Su11 {
        // diag(e^{it/2}, e^{-it/2})
        Su11([(t / 2.0).cos(), (t / 2.0).sin(), 0.0, 0.0])
    }

    fn trans(d: f64) -> Su11 {
        Su11([(d / 2.0).cosh(), 0.0, (d / 2.0).sinh(), 0.0])
    }

    fn mul(self, o: Su11) -> Su11 {
        let [ar, ai, br, bi] = self.0;
        let [cr, ci, dr, di] = o.0;
        // α = α1 α2 + β1 conj(β2); β = α1 β2 + β1 conj(α2)
        let alpha = (ar * cr - ai * ci + br * dr + bi * di, ar * ci + ai * cr + bi * dr - br * di);
        let beta = (ar * dr - ai * di + br * cr + bi * ci, ar * di + ai * dr + bi * cr - br * ci);
        Su11([alpha.0, alpha.1, beta.0, beta.1])
    }

    fn inverse(self) -> Su11 {
        let [ar, ai, br, bi] = self.0;
        Su11([ar, -ai, -br, -bi])
    }

    /// Spatial hyperboloid coordinates of the image of the disk origin.
    fn point(self) -> (f64, f64) {
        let [ar, ai, br, bi] = self.0;
        // 2 α β
        (2.0 * (ar * br - ai * bi), 2.0 * (ar * bi + ai * br))
    }
}

fn generator_matrices() -> [Su11; 8] {
    let rho = (1.0 / (PI / 8.0).tan()).acosh();
    let l = 2.0 * rho;
    let th = |k: usize| PI * k as f64 / 4.0;
    // Maps octagon side i onto side j, carrying the octagon across side j.
    let pair = |i: usize, j: usize| Su11::rot(th(j)).mul(Su11::trans(l)).mul(Su11::rot(PI - th(i)));
    let a = pair(2, 0);
    let b = pair(1, 3);
    let c = pair(6, 4);
    let d = pair(5, 7);
    [a, a.inverse(), b, b.inverse(), c, c.inverse(), d, d.inverse()]
}

struct Cache {
    words: Vec<Vec<u8>>,
    mats: Vec<Su11>,
    index: HashMap<Vec<u8>, usize>,
    buckets: HashMap<(i64, i64), Vec<usize>>,
    /// `sphere_start[n]` = first element index of the n-sphere.
    sphere_start: Vec<usize>,
}

impl Cache {
    fn new() -> Self {
        let mut c = Cache {
            words: Vec::new(),
            mats: Vec::new(),
            index: HashMap::new(),
            buckets: HashMap::new(),
            sphere_start: vec![0],
        };
        c.insert(Vec::new(), Su11::ID);
        c.sphere_start.push(1);
        c
    }

    fn key(p: (f64, f64)) -> (i64, i64) {
        (p.0.round() as i64, p.1.round() as i64)
    }

    fn insert(&mut self, w: Vec<u8>, m: Su11) -> usize {
        let id = self.words.len();
        self.buckets.entry(Self::key(m.point())).or_default().push(id);
        self.index.insert(w.clone(), id);
        self.words.push(w);
        self.mats.push(m);
        id
    }

    fn find(&self, w: &[u8], m: Su11) -> Option<usize> {
        let (x, y) = m.point();
        let (kx, ky) = Self::key((x, y));
        for dx in -1..=1 {
            for dy in -1..=1 {
                let Some(list) = self.buckets.get(&(kx + dx, ky + dy)) else { continue };
                for &id in list {
                    let (px, py) = self.mats[id].point();
                    if (px - x).abs() > 1.0 || (py - y).abs() > 1.0 {
                        continue;
                    }
                    let mut probe = w.to_vec();
                    probe.extend(self.words[id].iter().rev().map(|&l| inv(l)));
                    if is_identity(&probe) {
                        return Some(id);
                    }
                }
            }
        }
        None
    }

    fn complete_radius(&self) -> usize {
        self.sphere_start.len() - 2
    }

    fn grow(&mut self, gens: &[Su11; 8]) {
        let n = self.complete_radius();
        let (lo, hi) = (self.sphere_start[n], self.sphere_start[n + 1]);
        for p in lo..hi {
            for (s, g) in gens.iter().enumerate() {
                let mut w = self.words[p].clone();
                if w.last() == Some(&inv(s as u8)) {
                    continue;
                }
                w.push(s as u8);
                let m = self.mats[p].mul(*g);
                if self.find(&w, m).is_none() {
                    self.insert(w, m);
                }
            }
        }
        self.sphere_start.push(self.words.len());
    }
}

pub struct SurfaceGenus2 {
    gens: [Su11; 8],
    rotation: Vec<usize>,
    cache: Mutex<Cache>,
}

impl Default for SurfaceGenus2 {
    fn default() -> Self {
        Self::new()
    }
}

impl SurfaceGenus2 {
    pub fn new() -> Self {
        let gens = generator_matrices();
        let mut rotation: Vec<usize> = (0..8).collect();
        let angle = |s: usize| {
            let (x, y) = gens[s].point();
            y.atan2(x).rem_euclid(2.0 * PI)
        };
        rotation.sort_by(|&s, &t| angle(s).total_cmp(&angle(t)));
        SurfaceGenus2 {
            gens,
            rotation,
            cache: Mutex::new(Cache::new()),
        }
    }

    /// Number of elements of word length exactly `n`, for `n = 0..=r`.
    pub fn sphere_sizes(&self, r: usize) -> Vec<usize> {
        let mut c = self.cache.lock().expect("cache poisoned");
        while c.complete_radius() < r {
            c.grow(&self.gens);
        }
        (0..=r).map(|n| c.sphere_start[n + 1] - c.sphere_start[n]).collect()
    }

    fn canonical(&self, w: &[u8]) -> Result<Vec<u8>> {
        let mut c = self.cache.lock().expect("cache poisoned");
        while c.complete_radius() < w.len() {
            c.grow(&self.gens);
        }
        let mut m = Su11::ID;
        for &l in w {
            m = m.mul(self.gens[l as usize]);
        }
        let id = c
            .find(w, m)
            .ok_or_else(|| Error::Contract("element missing from its sphere".into()))?;
        Ok(c.words[id].clone())
    }
}

fn parse(x: &str) -> Result<Vec<u8>> {
    if x == "1" {
        return Ok(Vec::new());
    }
    x.bytes()
        .map(|c| match c {
            b'a'..=b'd' => Ok((c - b'a') * 2),
            b'A'..=b'D' => Ok((c - b'A') * 2 + 1),
            _ => Err(Error::UnknownVertex(x.to_string())),
        })
        .collect()
}

fn render(w: &[u8]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter()
        .map(|&l| (if l % 2 == 0 { b'a' } else { b'A' } + l / 2) as char)
        .collect()
}

impl GroupModel for SurfaceGenus2 {
    fn identity(&self) -> String {
        "1".into()
    }
    fn labels(&self) -> usize {
        8
    }
    fn step(&self, x: &str, s: usize) -> Result<String> {
        let mut w = parse(x)?;
        w.push(s as u8);
        free_reduce(&mut w);
        Ok(render(&self.canonical(&w)?))
    }
    fn rotation(&self, _x: &str) -> Result<Vec<usize>> {
        Ok(self.rotation.clone())
    }
}

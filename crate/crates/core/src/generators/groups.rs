use crate::error::{Error, Result};
use crate::graphcore::GraphSource;

/// A finitely generated group with a fixed generating multiset, given by
/// canonical element ids and right multiplication by generator labels.
///
/// The Cayley graph has an edge `x -- step(x, s)` for every label `s`;
/// an involution contributes one label, other generators two (s and s⁻¹).
pub trait GroupModel: Send + Sync {
    fn identity(&self) -> String;

    fn labels(&self) -> usize;

    fn step(&self, x: &str, s: usize) -> Result<String>;

    /// Counter-clockwise label order at `x` in the standard planar drawing.
    fn rotation(&self, x: &str) -> Result<Vec<usize>>;
}

/// Cayley graph of a [`GroupModel`] as a [`GraphSource`].
pub struct CayleySource<G> {
    pub group: G,
}

impl<G: GroupModel> GraphSource for CayleySource<G> {
    fn basepoint(&self) -> String {
        self.group.identity()
    }

    fn neighbors(&self, v: &str) -> Result<Vec<String>> {
        (0..self.group.labels()).map(|s| self.group.step(v, s)).collect()
    }

    fn rotation(&self, v: &str) -> Result<Option<Vec<String>>> {
        let order = self.group.rotation(v)?;
        let names = order
            .into_iter()
            .map(|s| self.group.step(v, s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Some(names))
    }
}

impl GroupModel for Box<dyn GroupModel> {
    fn identity(&self) -> String {
        (**self).identity()
    }
    fn labels(&self) -> usize {
        (**self).labels()
    }
    fn step(&self, x: &str, s: usize) -> Result<String> {
        (**self).step(x, s)
    }
    fn rotation(&self, x: &str) -> Result<Vec<usize>> {
        (**self).rotation(x)
    }
}

fn bad(x: &str) -> Error {
    Error::UnknownVertex(x.to_string())
}

pub(crate) fn parse_ints<const N: usize>(x: &str) -> Result<[i64; N]> {
    let mut out = [0i64; N];
    let mut parts = x.split(',');
    for slot in out.iter_mut() {
        *slot = parts
            .next()
            .and_then(|p| p.parse().ok())
            .ok_or_else(|| bad(x))?;
    }
    if parts.next().is_some() {
        return Err(bad(x));
    }
    Ok(out)
}

/// Z with generator 1; ids are decimal integers.
pub struct ZLine;

impl GroupModel for ZLine {
    fn identity(&self) -> String {
        "0".into()
    }
    fn labels(&self) -> usize {
        2
    }
    fn step(&self, x: &str, s: usize) -> Result<String> {
        let [n] = parse_ints::<1>(x)?;
        Ok(if s == 0 { n + 1 } else { n - 1 }.to_string())
    }
    fn rotation(&self, _x: &str) -> Result<Vec<usize>> {
        Ok(vec![0, 1])
    }
}

/// Z² with labels E, N, W, S; ids `x,y`.
pub struct Grid2D;

pub(crate) const GRID_STEPS: [(i64, i64); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];

impl GroupModel for Grid2D {
    fn identity(&self) -> String {
        "0,0".into()
    }
    fn labels(&self) -> usize {
        4
    }
    fn step(&self, x: &str, s: usize) -> Result<String> {
        let [a, b] = parse_ints::<2>(x)?;
        let (dx, dy) = GRID_STEPS[s];
        Ok(format!("{},{}", a + dx, b + dy))
    }
    fn rotation(&self, _x: &str) -> Result<Vec<usize>> {
        Ok(vec![0, 1, 2, 3])
    }
}

/// Z × Z/4 drawn as concentric 4-cycles (ring x at radius eˣ); labels
/// out, around, in, back. Ids `x,k`.
pub struct CylinderZxC4;

impl GroupModel for CylinderZxC4 {
    fn identity(&self) -> String {
        "0,0".into()
    }
    fn labels(&self) -> usize {
        4
    }
    fn step(&self, x: &str, s: usize) -> Result<String> {
        let [a, k] = parse_ints::<2>(x)?;
        if !(0..4).contains(&k) {
            return Err(bad(x));
        }
        let (a, k) = match s {
            0 => (a + 1, k),
            1 => (a, (k + 1) % 4),
            2 => (a - 1, k),
            _ => (a, (k + 3) % 4),
        };
        Ok(format!("{a},{k}"))
    }
    fn rotation(&self, _x: &str) -> Result<Vec<usize>> {
        Ok(vec![0, 1, 2, 3])
    }
}

/// Z × Z/2 (the ladder); labels right, left, rung. Ids `x,k`, k ∈ {0,1}.
/// The rung is an involution so the lower and upper rails are mirror
/// images and their rotations differ.
pub struct Ladder;

impl GroupModel for Ladder {
    fn identity(&self) -> String {
        "0,0".into()
    }
    fn labels(&self) -> usize {
        3
    }
    fn step(&self, x: &str, s: usize) -> Result<String> {
        let [a, k] = parse_ints::<2>(x)?;
        if !(0..2).contains(&k) {
            return Err(bad(x));
        }
        Ok(match s {
            0 => format!("{},{k}", a + 1),
            1 => format!("{},{k}", a - 1),
            _ => format!("{a},{}", 1 - k),
        })
    }
    fn rotation(&self, x: &str) -> Result<Vec<usize>> {
        let [_, k] = parse_ints::<2>(x)?;
        Ok(if k == 0 { vec![0, 2, 1] } else { vec![0, 1, 2] })
    }
}

fn word_letters(x: &str) -> Result<Vec<u8>> {
    if x == "1" {
        return Ok(Vec::new());
    }
    x.bytes()
        .map(|c| match c {
            b'a'..=b'z' => Ok((c - b'a') * 2),
            b'A'..=b'Z' => Ok((c - b'A') * 2 + 1),
            _ => Err(bad(x)),
        })
        .collect()
}

fn letters_word(w: &[u8]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter()
        .map(|&l| {
            let base = if l % 2 == 0 { b'a' } else { b'A' };
            (base + l / 2) as char
        })
        .collect()
}

/// Free group on `rank` generators; ids are reduced words over a, b, ...
/// with capitals for inverses, `1` for the identity.
pub struct FreeGroup {
    pub rank: usize,
}

impl GroupModel for FreeGroup {
    fn identity(&self) -> String {
        "1".into()
    }
    fn labels(&self) -> usize {
        2 * self.rank
    }
    fn step(&self, x: &str, s: usize) -> Result<String> {
        let mut w = word_letters(x)?;
        if w.iter().any(|&l| l as usize >= 2 * self.rank) {
            return Err(bad(x));
        }
        let s = s as u8;
        if w.last() == Some(&(s ^ 1)) {
            w.pop();
        } else {
            w.push(s);
        }
        Ok(letters_word(&w))
    }
    fn rotation(&self, _x: &str) -> Result<Vec<usize>> {
        Ok((0..2 * self.rank).collect())
    }
}

/// Free product of `degree` copies of Z/2: the `degree`-regular tree.
/// Ids are words over a, b, ... without repeated adjacent letters.
pub struct RegularTree {
    pub degree: usize,
}

impl GroupModel for RegularTree {
    fn identity(&self) -> String {
        "1".into()
    }
    fn labels(&self) -> usize {
        self.degree
    }
    fn step(&self, x: &str, s: usize) -> Result<String> {
        let mut w: Vec<u8> = if x == "1" { Vec::new() } else { x.bytes().collect() };
        if w.iter().any(|&c| c < b'a' || (c - b'a') as usize >= self.degree) {
            return Err(bad(x));
        }
        let c = b'a' + s as u8;
        if w.last() == Some(&c) {
            w.pop();
        } else {
            w.push(c);
        }
        Ok(if w.is_empty() {
            "1".into()
        } else {
            String::from_utf8(w).expect("ascii")
        })
    }
    fn rotation(&self, _x: &str) -> Result<Vec<usize>> {
        Ok((0..self.degree).collect())
    }
}

/// Z/2 with elements `1` and `t`.
pub struct CyclicTwo;

impl GroupModel for CyclicTwo {
    fn identity(&self) -> String {
        "1".into()
    }
    fn labels(&self) -> usize {
        1
    }
    fn step(&self, x: &str, _s: usize) -> Result<String> {
        match x {
            "1" => Ok("t".into()),
            "t" => Ok("1".into()),
            _ => Err(bad(x)),
        }
    }
    fn rotation(&self, _x: &str) -> Result<Vec<usize>> {
        Ok(vec![0])
    }
}

/// Free product of group models. Elements are alternating syllable
/// sequences `i:g|j:h|...` (factor index, nontrivial factor element), `1`
/// for the identity.
///
/// The rotation at a vertex lists each factor's local rotation as one
/// contiguous block, so planar factors give a planar product.
pub struct FreeProduct {
    pub factors: Vec<Box<dyn GroupModel>>,
}

impl FreeProduct {
    fn parse(&self, x: &str) -> Result<Vec<(usize, String)>> {
        if x == "1" {
            return Ok(Vec::new());
        }
        let mut out: Vec<(usize, String)> = Vec::new();
        for syl in x.split('|') {
            let (i, g) = syl.split_once(':').ok_or_else(|| bad(x))?;
            let i: usize = i.parse().map_err(|_| bad(x))?;
            if i >= self.factors.len() || out.last().is_some_and(|(j, _)| *j == i) {
                return Err(bad(x));
            }
            out.push((i, g.to_string()));
        }
        Ok(out)
    }

    fn render(syllables: &[(usize, String)]) -> String {
        if syllables.is_empty() {
            return "1".into();
        }
        syllables
            .iter()
            .map(|(i, g)| format!("{i}:{g}"))
            .collect::<Vec<_>>()
            .join("|")
    }

    fn split_label(&self, s: usize) -> (usize, usize) {
        let mut s = s;
        for (i, f) in self.factors.iter().enumerate() {
            if s < f.labels() {
                return (i, s);
            }
            s -= f.labels();
        }
        panic!("label out of range")
    }

    fn offset(&self, i: usize) -> usize {
        self.factors[..i].iter().map(|f| f.labels()).sum()
    }
}

impl GroupModel for FreeProduct {
    fn identity(&self) -> String {
        "1".into()
    }
    fn labels(&self) -> usize {
        self.factors.iter().map(|f| f.labels()).sum()
    }
    fn step(&self, x: &str, s: usize) -> Result<String> {
        let mut syl = self.parse(x)?;
        let (i, local) = self.split_label(s);
        let f = &self.factors[i];
        match syl.last_mut() {
            Some((j, g)) if *j == i => {
                let h = f.step(g, local)?;
                if h == f.identity() {
                    syl.pop();
                } else {
                    *g = h;
                }
            }
            _ => syl.push((i, f.step(&f.identity(), local)?)),
        }
        Ok(Self::render(&syl))
    }
    fn rotation(&self, x: &str) -> Result<Vec<usize>> {
        let syl = self.parse(x)?;
        let mut out = Vec::with_capacity(self.labels());
        for (i, f) in self.factors.iter().enumerate() {
            let local = match syl.last() {
                Some((j, g)) if *j == i => g.clone(),
                _ => f.identity(),
            };
            let off = self.offset(i);
            out.extend(f.rotation(&local)?.into_iter().map(|s| s + off));
        }
        Ok(out)
    }
}

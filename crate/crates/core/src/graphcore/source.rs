use crate::error::Result;

/// Lazy adjacency oracle for a connected, locally finite graph.
///
/// `neighbors` must be deterministic and symmetric; repeated entries encode
/// parallel edges. Window construction checks symmetry on every vertex it
/// visits.
pub trait GraphSource: Send + Sync {
    fn basepoint(&self) -> String;

    fn neighbors(&self, v: &str) -> Result<Vec<String>>;

    /// Counter-clockwise neighbour order of a planar drawing, when the
    /// source has one.
    fn rotation(&self, _v: &str) -> Result<Option<Vec<String>>> {
        Ok(None)
    }
}

/// Source backed by a closure; handy for tests and ad-hoc graphs.
pub struct FnSource<F> {
    base: String,
    f: F,
}

impl<F> FnSource<F>
where
    F: Fn(&str) -> Vec<String> + Send + Sync,
{
    pub fn new(base: impl Into<String>, f: F) -> Self {
        FnSource { base: base.into(), f }
    }
}

impl<F> GraphSource for FnSource<F>
where
    F: Fn(&str) -> Vec<String> + Send + Sync,
{
    fn basepoint(&self) -> String {
        self.base.clone()
    }

    fn neighbors(&self, v: &str) -> Result<Vec<String>> {
        Ok((self.f)(v))
    }
}

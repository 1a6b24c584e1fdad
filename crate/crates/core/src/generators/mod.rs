//! Built-in graph sources: Cayley graphs of the standard planar examples,
//! free products of them, and the half-grid with growing holes.

mod groups;
mod holes;
mod surface;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphcore::GraphSource;

pub use groups::{
    CayleySource, CyclicTwo, CylinderZxC4, FreeGroup, FreeProduct, Grid2D, GroupModel, Ladder,
    RegularTree, ZLine,
};
pub use holes::GridWithHoles;
pub use surface::{dehn_reduce, is_identity, SurfaceGenus2};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GeneratorSpec {
    ZLine,
    Grid2d,
    FreeGroup { rank: usize },
    SurfaceGenus2,
    FreeProduct { factors: Vec<GeneratorSpec> },
    Ladder,
    Cylinder,
    /// Z² ∗ Z/2: copies of the plane glued along a tree.
    TreeOfFlats,
    GridWithHoles,
    RegularTree { degree: usize },
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            GeneratorSpec::FreeGroup { rank } if *rank < 1 || *rank > 26 => {
                Err(Error::Argument(format!("free group rank {rank} outside 1..=26")))
            }
            GeneratorSpec::RegularTree { degree } if *degree < 3 || *degree > 26 => {
                Err(Error::Argument(format!("tree degree {degree} outside 3..=26")))
            }
            GeneratorSpec::FreeProduct { factors } => {
                if factors.len() < 2 {
                    return Err(Error::Argument("free product needs two factors".into()));
                }
                factors.iter().try_for_each(|f| {
                    if matches!(f, GeneratorSpec::GridWithHoles) {
                        Err(Error::Argument("grid-with-holes is not a group".into()))
                    } else {
                        f.validate()
                    }
                })
            }
            _ => Ok(()),
        }
    }

    /// Group model for the Cayley-graph kinds.
    pub fn group(&self) -> Result<Box<dyn GroupModel>> {
        self.validate()?;
        Ok(match self {
            GeneratorSpec::ZLine => Box::new(ZLine),
            GeneratorSpec::Grid2d => Box::new(Grid2D),
            GeneratorSpec::FreeGroup { rank } => Box::new(FreeGroup { rank: *rank }),
            GeneratorSpec::SurfaceGenus2 => Box::new(SurfaceGenus2::new()),
            GeneratorSpec::Ladder => Box::new(Ladder),
            GeneratorSpec::Cylinder => Box::new(CylinderZxC4),
            GeneratorSpec::RegularTree { degree } => Box::new(RegularTree { degree: *degree }),
            GeneratorSpec::TreeOfFlats => Box::new(FreeProduct {
                factors: vec![Box::new(Grid2D), Box::new(CyclicTwo)],
            }),
            GeneratorSpec::FreeProduct { factors } => Box::new(FreeProduct {
                factors: factors.iter().map(|f| f.group()).collect::<Result<_>>()?,
            }),
            GeneratorSpec::GridWithHoles => {
                return Err(Error::Argument("grid-with-holes is not a group".into()))
            }
        })
    }

    pub fn source(&self) -> Result<Box<dyn GraphSource>> {
        match self {
            GeneratorSpec::GridWithHoles => Ok(Box::new(GridWithHoles)),
            _ => Ok(Box::new(CayleySource { group: self.group()? })),
        }
    }

    /// Every built-in kind comes with a planar drawing.
    pub fn has_drawing(&self) -> bool {
        true
    }

    /// The kinds used by corpus-wide checks.
    pub fn corpus() -> Vec<GeneratorSpec> {
        vec![
            GeneratorSpec::ZLine,
            GeneratorSpec::Grid2d,
            GeneratorSpec::FreeGroup { rank: 2 },
            GeneratorSpec::Ladder,
            GeneratorSpec::Cylinder,
            GeneratorSpec::TreeOfFlats,
            GeneratorSpec::GridWithHoles,
            GeneratorSpec::RegularTree { degree: 3 },
            GeneratorSpec::RegularTree { degree: 4 },
        ]
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::ZLine => write!(f, "zline"),
            GeneratorSpec::Grid2d => write!(f, "grid2d"),
            GeneratorSpec::FreeGroup { rank } => write!(f, "free-group:{rank}"),
            GeneratorSpec::SurfaceGenus2 => write!(f, "surface-genus2"),
            GeneratorSpec::FreeProduct { factors } => {
                let parts: Vec<String> = factors.iter().map(|x| x.to_string()).collect();
                write!(f, "free-product:{}", parts.join("*"))
            }
            GeneratorSpec::Ladder => write!(f, "ladder"),
            GeneratorSpec::Cylinder => write!(f, "cylinder"),
            GeneratorSpec::TreeOfFlats => write!(f, "tree-of-flats"),
            GeneratorSpec::GridWithHoles => write!(f, "grid-with-holes"),
            GeneratorSpec::RegularTree { degree } => write!(f, "regular-tree:{degree}"),
        }
    }
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    /// `grid2d`, `free-group:2`, `regular-tree:3`,
    /// `free-product:grid2d*surface-genus2`, ...
    fn from_str(s: &str) -> Result<Self> {
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        let num = |a: Option<&str>| -> Result<usize> {
            a.and_then(|x| x.parse().ok())
                .ok_or_else(|| Error::Argument(format!("`{s}` needs a numeric parameter")))
        };
        let spec = match head {
            "zline" | "z" => GeneratorSpec::ZLine,
            "grid2d" | "grid" => GeneratorSpec::Grid2d,
            "free-group" => GeneratorSpec::FreeGroup { rank: num(arg)? },
            "surface-genus2" | "surface" => GeneratorSpec::SurfaceGenus2,
            "ladder" => GeneratorSpec::Ladder,
            "cylinder" => GeneratorSpec::Cylinder,
            "tree-of-flats" => GeneratorSpec::TreeOfFlats,
            "grid-with-holes" => GeneratorSpec::GridWithHoles,
            "regular-tree" => GeneratorSpec::RegularTree { degree: num(arg)? },
            "free-product" => {
                let arg = arg.ok_or_else(|| Error::Argument("free-product needs factors".into()))?;
                GeneratorSpec::FreeProduct {
                    factors: arg.split('*').map(str::parse).collect::<Result<_>>()?,
                }
            }
            _ => return Err(Error::Argument(format!("unknown generator kind `{s}`"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

use crate::error::{Error, Result};
use crate::graphcore::GraphSource;

use super::groups::{parse_ints, GRID_STEPS};

/// The half-grid x ≥ 0 with ever larger square holes: hole n ≥ 1 removes
/// the vertices strictly inside [4ⁿ, 4ⁿ + 2ⁿ] × [0, 2ⁿ], leaving a face of
/// length 4·2ⁿ. Basepoint `0,0`; ids `x,y`.
pub struct GridWithHoles;

impl GridWithHoles {
    pub fn is_present(x: i64, y: i64) -> bool {
        if x < 0 {
            return false;
        }
        let mut n = 1u32;
        while let Some(left) = 4i64.checked_pow(n) {
            if left > x {
                break;
            }
            let side = 1i64 << n;
            if x > left && x < left + side && y > 0 && y < side {
                return false;
            }
            n += 1;
        }
        true
    }

    fn present_neighbors(x: i64, y: i64) -> Vec<(i64, i64)> {
        GRID_STEPS
            .iter()
            .map(|(dx, dy)| (x + dx, y + dy))
            .filter(|&(a, b)| Self::is_present(a, b))
            .collect()
    }
}

impl GraphSource for GridWithHoles {
    fn basepoint(&self) -> String {
        "0,0".into()
    }

    fn neighbors(&self, v: &str) -> Result<Vec<String>> {
        let [x, y] = parse_ints::<2>(v)?;
        if !Self::is_present(x, y) {
            return Err(Error::UnknownVertex(v.to_string()));
        }
        Ok(Self::present_neighbors(x, y)
            .into_iter()
            .map(|(a, b)| format!("{a},{b}"))
            .collect())
    }

    fn rotation(&self, v: &str) -> Result<Option<Vec<String>>> {
        // Grid order E, N, W, S with missing directions dropped.
        self.neighbors(v).map(Some)
    }
}

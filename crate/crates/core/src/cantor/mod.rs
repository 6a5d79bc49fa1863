//! Finitely described points and clopen sets of product spaces `∏ A_n`.
//!
//! A point is a finite window plus a periodic rule for each tail. Distances
//! are `2^{-k}` with `k` the smallest offset where two points disagree; the
//! offset of coordinate `n` is `|n|` on two-sided schemes and `n - n₀` on
//! one-sided ones. Points on different sheets are at distance 1.

mod clopen;
mod point;

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use clopen::{depth_cylinder, ClopenSet, Cylinder, Pattern};
pub use point::Point;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IndexSet {
    TwoSided,
    OneSided { start: i64 },
}

/// Alphabet size as a function of the coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Alphabet {
    /// The same size everywhere.
    Constant { size: u32 },
    /// `sizes[(n - origin) mod len]`.
    Cycle { sizes: Vec<u32> },
    /// Coordinate `n` has alphabet `Z/nZ`.
    IndexModulus,
}

/// Index set, alphabets and number of sheets (disjoint copies) of a product space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordinateScheme {
    pub id: String,
    pub index: IndexSet,
    pub alphabet: Alphabet,
    #[serde(default = "one")]
    pub sheets: u32,
}

fn one() -> u32 {
    1
}

impl CoordinateScheme {
    pub fn new(id: &str, index: IndexSet, alphabet: Alphabet, sheets: u32) -> Result<Self> {
        let scheme = CoordinateScheme { id: id.to_string(), index, alphabet, sheets };
        scheme.validate()?;
        Ok(scheme)
    }

    /// `A^Z` for a constant alphabet of size `k`.
    pub fn full(k: u32) -> Self {
        Self::new(&format!("{{0..{}}}^Z", k.saturating_sub(1)), IndexSet::TwoSided, Alphabet::Constant { size: k }, 1)
            .expect("alphabet size must be positive")
    }

    pub fn validate(&self) -> Result<()> {
        if self.sheets == 0 {
            return Err(Error::Invalid("a scheme needs at least one sheet".into()));
        }
        match (&self.alphabet, self.index) {
            (Alphabet::Constant { size }, _) if *size >= 1 => Ok(()),
            (Alphabet::Cycle { sizes }, _) if !sizes.is_empty() && sizes.iter().all(|&s| s >= 1) => Ok(()),
            (Alphabet::IndexModulus, IndexSet::OneSided { start }) if start >= 1 => Ok(()),
            _ => Err(Error::Invalid(format!("alphabet sizes of scheme {} must be at least 1", self.id))),
        }
    }

    pub fn origin(&self) -> i64 {
        match self.index {
            IndexSet::TwoSided => 0,
            IndexSet::OneSided { start } => start,
        }
    }

    pub fn is_two_sided(&self) -> bool {
        self.index == IndexSet::TwoSided
    }

    pub fn in_domain(&self, n: i64) -> bool {
        match self.index {
            IndexSet::TwoSided => true,
            IndexSet::OneSided { start } => n >= start,
        }
    }

    /// Alphabet size at coordinate `n`.
    pub fn size(&self, n: i64) -> u32 {
        match &self.alphabet {
            Alphabet::Constant { size } => *size,
            Alphabet::Cycle { sizes } => sizes[(n - self.origin()).rem_euclid(sizes.len() as i64) as usize],
            Alphabet::IndexModulus => u32::try_from(n).expect("coordinate fits the alphabet rule"),
        }
    }

    /// Period of the alphabet rule, if it is periodic.
    pub fn alphabet_period(&self) -> Option<usize> {
        match &self.alphabet {
            Alphabet::Constant { .. } => Some(1),
            Alphabet::Cycle { sizes } => Some(sizes.len()),
            Alphabet::IndexModulus => None,
        }
    }

    /// Offset of coordinate `n` from the scheme origin.
    pub fn offset(&self, n: i64) -> u64 {
        match self.index {
            IndexSet::TwoSided => n.unsigned_abs(),
            IndexSet::OneSided { start } => (n - start) as u64,
        }
    }

    /// The coordinates with offset `< d`, as `(lo, len)`.
    pub fn depth_window(&self, d: usize) -> (i64, usize) {
        match self.index {
            IndexSet::TwoSided if d == 0 => (0, 0),
            IndexSet::TwoSided => (-(d as i64 - 1), 2 * d - 1),
            IndexSet::OneSided { start } => (start, d),
        }
    }
}

/// An exact dyadic distance: `0` or `2^{-k}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distance {
    Zero,
    /// `2^{-k}`.
    Pow(u64),
}

impl Distance {
    /// `self ≤ 2^{-d}`.
    pub fn within(self, d: u64) -> bool {
        match self {
            Distance::Zero => true,
            Distance::Pow(k) => k >= d,
        }
    }

    pub fn exponent(self) -> Option<u64> {
        match self {
            Distance::Zero => None,
            Distance::Pow(k) => Some(k),
        }
    }
}

impl Ord for Distance {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Distance::Zero, Distance::Zero) => Ordering::Equal,
            (Distance::Zero, _) => Ordering::Less,
            (_, Distance::Zero) => Ordering::Greater,
            (Distance::Pow(a), Distance::Pow(b)) => b.cmp(a),
        }
    }
}

impl PartialOrd for Distance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Zero => write!(f, "0"),
            Distance::Pow(0) => write!(f, "1"),
            Distance::Pow(k) => write!(f, "2^-{k}"),
        }
    }
}

/// Exact distance between two points of the same scheme.
pub fn distance(scheme: &CoordinateScheme, x: &Point, y: &Point) -> Distance {
    if x == y {
        return Distance::Zero;
    }
    if x.sheet() != y.sheet() {
        return Distance::Pow(0);
    }
    Distance::Pow(first_disagreement(scheme, x, y).expect("distinct canonical points disagree somewhere"))
}

/// Smallest offset where `x` and `y` differ as sequences, ignoring sheets.
pub(crate) fn first_disagreement(scheme: &CoordinateScheme, x: &Point, y: &Point) -> Option<u64> {
    let period = x.left().len().max(1).lcm(&x.right().len().max(1)).lcm(&y.left().len().max(1).lcm(&y.right().len().max(1)));
    let reach = [x.window_start(), x.window_end(), y.window_start(), y.window_end()]
        .iter()
        .map(|n| n.unsigned_abs())
        .max()
        .unwrap_or(0)
        + period as u64
        + 1;
    match scheme.index {
        IndexSet::TwoSided => (0..=reach as i64).find_map(|k| {
            (x.sym(k) != y.sym(k) || x.sym(-k) != y.sym(-k)).then_some(k as u64)
        }),
        IndexSet::OneSided { start } => {
            let reach = reach + start.unsigned_abs();
            (0..=reach).find(|&k| x.sym(start + k as i64) != y.sym(start + k as i64))
        }
    }
}

/// Whether `x` and `y` agree on every coordinate of offset `< d` and share a sheet,
/// i.e. `distance(x, y) ≤ 2^{-d}` for `d ≥ 1`.
pub fn agree_to_depth(scheme: &CoordinateScheme, x: &Point, y: &Point, d: usize) -> bool {
    if x.sheet() != y.sheet() {
        return d == 0;
    }
    let (lo, len) = scheme.depth_window(d);
    (lo..lo + len as i64).all(|n| x.sym(n) == y.sym(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_ordering() {
        assert!(Distance::Zero < Distance::Pow(5));
        assert!(Distance::Pow(5) < Distance::Pow(2));
        assert!(Distance::Pow(3).within(3));
        assert!(!Distance::Pow(2).within(3));
    }

    #[test]
    fn depth_windows() {
        let two = CoordinateScheme::full(2);
        assert_eq!(two.depth_window(2), (-1, 3));
        let one = CoordinateScheme::new("X", IndexSet::OneSided { start: 2 }, Alphabet::IndexModulus, 1).unwrap();
        assert_eq!(one.depth_window(3), (2, 3));
        assert_eq!(one.size(5), 5);
    }
}

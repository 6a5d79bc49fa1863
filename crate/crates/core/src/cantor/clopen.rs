use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{CoordinateScheme, Point};
use crate::caps::Caps;
use crate::error::{Error, Result};

/// A sheet together with symbols on a window.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pattern {
    pub sheet: u32,
    pub symbols: Vec<u32>,
}

/// The set of points with `symbols` on `[lo, lo + len)`, optionally on one sheet.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cylinder {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sheet: Option<u32>,
    pub lo: i64,
    pub symbols: Vec<u32>,
}

impl Cylinder {
    pub fn new(scheme: &CoordinateScheme, sheet: Option<u32>, lo: i64, symbols: Vec<u32>) -> Result<Self> {
        if sheet.is_some_and(|s| s >= scheme.sheets) {
            return Err(Error::Range("cylinder sheet outside the scheme".into()));
        }
        if !symbols.is_empty() && !scheme.in_domain(lo) {
            return Err(Error::Domain(format!("coordinate {lo} outside scheme {}", scheme.id)));
        }
        for (i, &s) in symbols.iter().enumerate() {
            let n = lo + i as i64;
            if s >= scheme.size(n) {
                return Err(Error::Range(format!("symbol {s} at coordinate {n} outside the alphabet")));
            }
        }
        Ok(Cylinder { sheet, lo, symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn contains(&self, x: &Point) -> bool {
        self.sheet.map_or(true, |s| s == x.sheet())
            && self.symbols.iter().enumerate().all(|(i, &s)| x.sym(self.lo + i as i64) == s)
    }
}

impl fmt::Display for Cylinder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.symbols.iter().enumerate().map(|(i, s)| format!("{s}_{}", self.lo + i as i64)).collect();
        write!(f, "[{}]", parts.join(","))?;
        if let Some(s) = self.sheet {
            write!(f, "/{s}")?;
        }
        Ok(())
    }
}

/// The cylinder fixing `x` on every coordinate of offset `< d` (and its sheet).
pub fn depth_cylinder(scheme: &CoordinateScheme, x: &Point, d: usize) -> Result<Cylinder> {
    if d == 0 {
        return Err(Error::Precondition("depth must be at least 1".into()));
    }
    let (lo, len) = scheme.depth_window(d);
    let sheet = (scheme.sheets > 1).then_some(x.sheet());
    Ok(Cylinder { sheet, lo, symbols: x.slice(lo, len) })
}

/// A clopen set: the union of the listed patterns on the window `[lo, lo + len)`.
///
/// Sets over different windows are compared after refining both to their hull.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClopenSet {
    pub lo: i64,
    pub len: usize,
    pub patterns: BTreeSet<Pattern>,
}

impl ClopenSet {
    pub fn empty(lo: i64, len: usize) -> Self {
        ClopenSet { lo, len, patterns: BTreeSet::new() }
    }

    /// The whole space, written on the given window.
    pub fn full(scheme: &CoordinateScheme, lo: i64, len: usize, caps: &Caps) -> Result<Self> {
        check_window(scheme, lo, len, caps)?;
        let seed: BTreeSet<Pattern> = (0..scheme.sheets).map(|sheet| Pattern { sheet, symbols: Vec::new() }).collect();
        let patterns = extend_right(scheme, seed, lo, len, caps)?;
        Ok(ClopenSet { lo, len, patterns })
    }

    pub fn from_cylinder(scheme: &CoordinateScheme, c: &Cylinder, caps: &Caps) -> Result<Self> {
        check_window(scheme, c.lo, c.len(), caps)?;
        let patterns = match c.sheet {
            Some(sheet) => BTreeSet::from([Pattern { sheet, symbols: c.symbols.clone() }]),
            None => (0..scheme.sheets).map(|sheet| Pattern { sheet, symbols: c.symbols.clone() }).collect(),
        };
        Ok(ClopenSet { lo: c.lo, len: c.len(), patterns })
    }

    /// Points agreeing with `x` on every coordinate of offset `< d`.
    pub fn depth(scheme: &CoordinateScheme, x: &Point, d: usize, caps: &Caps) -> Result<Self> {
        Self::from_cylinder(scheme, &depth_cylinder(scheme, x, d)?, caps)
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn contains(&self, x: &Point) -> bool {
        self.patterns.contains(&Pattern { sheet: x.sheet(), symbols: x.slice(self.lo, self.len) })
    }

    /// The member cylinders, one per pattern.
    pub fn cylinders(&self, scheme: &CoordinateScheme) -> Vec<Cylinder> {
        self.patterns
            .iter()
            .map(|p| Cylinder { sheet: (scheme.sheets > 1).then_some(p.sheet), lo: self.lo, symbols: p.symbols.clone() })
            .collect()
    }

    /// The same set written on a larger window `[lo, lo + len)`.
    pub fn refine(&self, scheme: &CoordinateScheme, lo: i64, len: usize, caps: &Caps) -> Result<Self> {
        let hi = lo + len as i64;
        if self.len > 0 && (lo > self.lo || hi < self.lo + self.len as i64) {
            return Err(Error::Invalid("refinement window must contain the current window".into()));
        }
        check_window(scheme, lo, len, caps)?;
        if self.len == 0 {
            let seed = self.patterns.clone();
            let patterns = extend_right(scheme, seed, lo, len, caps)?;
            return Ok(ClopenSet { lo, len, patterns });
        }
        let right = extend_right(scheme, self.patterns.clone(), self.lo + self.len as i64, (hi - self.lo) as usize - self.len, caps)?;
        let patterns = extend_left(scheme, right, lo, (self.lo - lo) as usize, caps)?;
        Ok(ClopenSet { lo, len, patterns })
    }

    fn hull(&self, other: &ClopenSet) -> (i64, usize) {
        match (self.len, other.len) {
            (0, 0) => (self.lo.min(other.lo), 0),
            (0, _) => (other.lo, other.len),
            (_, 0) => (self.lo, self.len),
            _ => {
                let lo = self.lo.min(other.lo);
                let hi = (self.lo + self.len as i64).max(other.lo + other.len as i64);
                (lo, (hi - lo) as usize)
            }
        }
    }

    fn aligned(&self, other: &ClopenSet, scheme: &CoordinateScheme, caps: &Caps) -> Result<(Self, Self)> {
        let (lo, len) = self.hull(other);
        Ok((self.refine(scheme, lo, len, caps)?, other.refine(scheme, lo, len, caps)?))
    }

    pub fn complement(&self, scheme: &CoordinateScheme, caps: &Caps) -> Result<Self> {
        let full = Self::full(scheme, self.lo, self.len, caps)?;
        Ok(ClopenSet { patterns: full.patterns.difference(&self.patterns).cloned().collect(), ..full })
    }

    pub fn union(&self, other: &ClopenSet, scheme: &CoordinateScheme, caps: &Caps) -> Result<Self> {
        let (a, b) = self.aligned(other, scheme, caps)?;
        let patterns: BTreeSet<Pattern> = a.patterns.union(&b.patterns).cloned().collect();
        check_count(patterns.len(), caps)?;
        Ok(ClopenSet { patterns, ..a })
    }

    pub fn intersection(&self, other: &ClopenSet, scheme: &CoordinateScheme, caps: &Caps) -> Result<Self> {
        let (a, b) = self.aligned(other, scheme, caps)?;
        Ok(ClopenSet { patterns: a.patterns.intersection(&b.patterns).cloned().collect(), ..a })
    }

    /// Set equality, deciding through a common refinement.
    pub fn set_eq(&self, other: &ClopenSet, scheme: &CoordinateScheme, caps: &Caps) -> Result<bool> {
        let (a, b) = self.aligned(other, scheme, caps)?;
        Ok(a.patterns == b.patterns)
    }

    pub fn is_full(&self, scheme: &CoordinateScheme, caps: &Caps) -> Result<bool> {
        Ok(self.complement(scheme, caps)?.is_empty())
    }
}

fn check_window(scheme: &CoordinateScheme, lo: i64, len: usize, caps: &Caps) -> Result<()> {
    if len > caps.window {
        return Err(Error::Resource(format!("window of {len} coordinates exceeds the cap {}", caps.window)));
    }
    if len > 0 && !scheme.in_domain(lo) {
        return Err(Error::Domain(format!("coordinate {lo} outside scheme {}", scheme.id)));
    }
    Ok(())
}

fn check_count(n: usize, caps: &Caps) -> Result<()> {
    if n > caps.patterns {
        return Err(Error::Resource(format!("{n} patterns exceed the cap {}", caps.patterns)));
    }
    Ok(())
}

/// Append every symbol combination on `[start, start + extra)`.
fn extend_right(
    scheme: &CoordinateScheme,
    mut set: BTreeSet<Pattern>,
    start: i64,
    extra: usize,
    caps: &Caps,
) -> Result<BTreeSet<Pattern>> {
    for n in start..start + extra as i64 {
        let k = scheme.size(n);
        check_count(set.len().saturating_mul(k as usize), caps)?;
        set = set
            .into_iter()
            .flat_map(|p| {
                (0..k).map(move |s| {
                    let mut symbols = p.symbols.clone();
                    symbols.push(s);
                    Pattern { sheet: p.sheet, symbols }
                })
            })
            .collect();
    }
    Ok(set)
}

/// Prepend every symbol combination on `[lo, lo + extra)`.
fn extend_left(
    scheme: &CoordinateScheme,
    mut set: BTreeSet<Pattern>,
    lo: i64,
    extra: usize,
    caps: &Caps,
) -> Result<BTreeSet<Pattern>> {
    for n in (lo..lo + extra as i64).rev() {
        let k = scheme.size(n);
        check_count(set.len().saturating_mul(k as usize), caps)?;
        set = set
            .into_iter()
            .flat_map(|p| {
                (0..k).map(move |s| {
                    let mut symbols = Vec::with_capacity(p.symbols.len() + 1);
                    symbols.push(s);
                    symbols.extend_from_slice(&p.symbols);
                    Pattern { sheet: p.sheet, symbols }
                })
            })
            .collect();
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> CoordinateScheme {
        CoordinateScheme::full(2)
    }

    fn at0(s: u32) -> ClopenSet {
        ClopenSet::from_cylinder(&z2(), &Cylinder::new(&z2(), None, 0, vec![s]).unwrap(), &Caps::default()).unwrap()
    }

    #[test]
    fn complement_and_union() {
        let caps = Caps::default();
        let s = z2();
        assert!(at0(0).complement(&s, &caps).unwrap().set_eq(&at0(1), &s, &caps).unwrap());
        assert!(at0(0).intersection(&at0(0).complement(&s, &caps).unwrap(), &s, &caps).unwrap().is_empty());
        assert!(at0(0).union(&at0(1), &s, &caps).unwrap().is_full(&s, &caps).unwrap());
    }

    #[test]
    fn refinement_preserves_sets() {
        let caps = Caps::default();
        let s = z2();
        let r = at0(1).refine(&s, -2, 5, &caps).unwrap();
        assert_eq!(r.patterns.len(), 16);
        assert!(r.set_eq(&at0(1), &s, &caps).unwrap());
        let x = Point::finite(&s, 0, vec![1], 0, 0).unwrap();
        assert!(r.contains(&x) && at0(1).contains(&x));
    }

    #[test]
    fn window_cap_is_enforced() {
        let caps = Caps { window: 4, ..Caps::default() };
        assert!(matches!(at0(0).refine(&z2(), 0, 5, &caps), Err(Error::Resource(_))));
    }

    #[test]
    fn depth_cylinder_of_zero_point() {
        let s = z2();
        let o = Point::constant(&s, 0, 0).unwrap();
        let c = depth_cylinder(&s, &o, 2).unwrap();
        assert_eq!(c.to_string(), "[0_-1,0_0,0_1]");
        assert!(c.contains(&o));
    }
}

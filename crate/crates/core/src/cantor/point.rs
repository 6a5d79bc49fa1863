use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use super::{CoordinateScheme, IndexSet};
use crate::error::{Error, Result};

/// A point given by a finite window and periodic tails, always in canonical form.
///
/// Tails use absolute phase: left tail `p` gives `x(n) = p[n mod |p|]` for
/// `n < window_start`, and the right tail likewise for `n ≥ window_end`.
/// Canonical form means primitive tails, the left tail covering as much as
/// possible, and the window as short as possible; two points are equal
/// exactly when their canonical forms are.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Point {
    #[serde(skip_serializing_if = "Option::is_none")]
    domain_start: Option<i64>,
    sheet: u32,
    window_start: i64,
    window: Vec<u32>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    left: Vec<u32>,
    right: Vec<u32>,
}

impl Point {
    /// Build and canonicalize. On one-sided schemes `left` only fills the
    /// coordinates between the scheme origin and `window_start`, defaulting to 0.
    pub fn new(
        scheme: &CoordinateScheme,
        window_start: i64,
        window: Vec<u32>,
        left: Vec<u32>,
        right: Vec<u32>,
        sheet: u32,
    ) -> Result<Point> {
        if sheet >= scheme.sheets {
            return Err(Error::Range(format!("sheet {sheet} outside scheme {}", scheme.id)));
        }
        if right.is_empty() || (scheme.is_two_sided() && left.is_empty()) {
            return Err(Error::Invalid("tail rules need at least one symbol".into()));
        }
        let domain_start = match scheme.index {
            IndexSet::TwoSided => None,
            IndexSet::OneSided { start } => {
                if window_start < start && !window.is_empty() {
                    return Err(Error::Domain(format!("window starts before coordinate {start}")));
                }
                Some(start)
            }
        };
        let raw = Point {
            domain_start,
            sheet,
            window_start,
            window,
            left: if left.is_empty() { vec![0] } else { left },
            right,
        };
        raw.check_alphabet(scheme)?;
        Ok(raw.canonical())
    }

    /// The point with every coordinate equal to `symbol`.
    pub fn constant(scheme: &CoordinateScheme, symbol: u32, sheet: u32) -> Result<Point> {
        Point::new(scheme, scheme.origin(), Vec::new(), vec![symbol], vec![symbol], sheet)
    }

    /// `symbols` on `[lo, lo + len)` and `fill` elsewhere.
    pub fn finite(scheme: &CoordinateScheme, lo: i64, symbols: Vec<u32>, fill: u32, sheet: u32) -> Result<Point> {
        Point::new(scheme, lo, symbols, vec![fill], vec![fill], sheet)
    }

    pub fn sheet(&self) -> u32 {
        self.sheet
    }

    pub fn window_start(&self) -> i64 {
        self.window_start
    }

    pub fn window_end(&self) -> i64 {
        self.window_start + self.window.len() as i64
    }

    pub fn window(&self) -> &[u32] {
        &self.window
    }

    pub fn left(&self) -> &[u32] {
        &self.left
    }

    pub fn right(&self) -> &[u32] {
        &self.right
    }

    /// `x(n)`, with a domain error outside a one-sided index set.
    pub fn eval(&self, n: i64) -> Result<u32> {
        match self.domain_start {
            Some(start) if n < start => Err(Error::Domain(format!("coordinate {n} is below {start}"))),
            _ => Ok(self.sym(n)),
        }
    }

    /// `x(n)` without the domain check.
    pub(crate) fn sym(&self, n: i64) -> u32 {
        if n < self.window_start {
            if self.left.is_empty() {
                return 0;
            }
            self.left[n.rem_euclid(self.left.len() as i64) as usize]
        } else if n < self.window_end() {
            self.window[(n - self.window_start) as usize]
        } else {
            self.right[n.rem_euclid(self.right.len() as i64) as usize]
        }
    }

    /// Symbols on `[lo, lo + len)`.
    pub fn slice(&self, lo: i64, len: usize) -> Vec<u32> {
        (lo..lo + len as i64).map(|n| self.sym(n)).collect()
    }

    pub fn with_sheet(&self, sheet: u32) -> Point {
        Point { sheet, ..self.clone() }
    }

    /// Replace the symbols on `[lo, lo + symbols.len())`.
    pub fn with_symbols(&self, scheme: &CoordinateScheme, lo: i64, symbols: &[u32]) -> Result<Point> {
        if symbols.is_empty() {
            return Ok(self.clone());
        }
        let hi = lo + symbols.len() as i64;
        let start = self.window_start.min(lo);
        let start = self.domain_start.map_or(start, |s| start.max(s));
        if lo < start {
            return Err(Error::Domain(format!("coordinate {lo} outside the scheme")));
        }
        let end = self.window_end().max(hi);
        let window: Vec<u32> = (start..end)
            .map(|n| if (lo..hi).contains(&n) { symbols[(n - lo) as usize] } else { self.sym(n) })
            .collect();
        Point::new(scheme, start, window, self.left.clone(), self.right.clone(), self.sheet)
    }

    /// `(σ^n x)(k) = x(k + n)` on a two-sided scheme.
    pub fn shifted(&self, n: i64) -> Point {
        assert!(self.domain_start.is_none(), "shifts act on two-sided sequences");
        let rotate = |p: &[u32]| -> Vec<u32> {
            let l = p.len() as i64;
            (0..l).map(|i| p[(i + n).rem_euclid(l) as usize]).collect()
        };
        Point {
            domain_start: None,
            sheet: self.sheet,
            window_start: self.window_start - n,
            window: self.window.clone(),
            left: rotate(&self.left),
            right: rotate(&self.right),
        }
        .canonical()
    }

    fn check_alphabet(&self, scheme: &CoordinateScheme) -> Result<()> {
        let bad = |n: i64, s: u32| Error::Range(format!("symbol {s} at coordinate {n} exceeds the alphabet of {}", scheme.id));
        for (i, &s) in self.window.iter().enumerate() {
            let n = self.window_start + i as i64;
            if s >= scheme.size(n) {
                return Err(bad(n, s));
            }
        }
        let reach = |tail: usize| tail.lcm(&scheme.alphabet_period().unwrap_or(1)) as i64;
        let end = self.window_end();
        for n in end..end + reach(self.right.len()) {
            if self.sym(n) >= scheme.size(n) {
                return Err(bad(n, self.sym(n)));
            }
        }
        let below = match self.domain_start {
            Some(start) => start..self.window_start,
            None => self.window_start - reach(self.left.len())..self.window_start,
        };
        for n in below {
            if self.sym(n) >= scheme.size(n) {
                return Err(bad(n, self.sym(n)));
            }
        }
        Ok(())
    }

    fn canonical(self) -> Point {
        let left = primitive(&self.left);
        let right = primitive(&self.right);
        let raw = Point { left: left.clone(), right: right.clone(), ..self };
        let period = left.len().lcm(&right.len()) as i64;
        let end0 = raw.window_end();
        let tail = |p: &[u32], n: i64| p[n.rem_euclid(p.len() as i64) as usize];

        if let Some(start) = raw.domain_start {
            let end = (start..end0).rev().find(|&n| raw.sym(n) != tail(&right, n)).map_or(start, |n| n + 1);
            return Point {
                domain_start: Some(start),
                sheet: raw.sheet,
                window_start: start,
                window: (start..end).map(|n| raw.sym(n)).collect(),
                left: Vec::new(),
                right,
            };
        }

        let Some(ws) = (raw.window_start..end0 + period).find(|&n| raw.sym(n) != tail(&left, n)) else {
            return Point { domain_start: None, sheet: raw.sheet, window_start: 0, window: Vec::new(), left: left.clone(), right: left };
        };
        let end = (raw.window_start - period..end0)
            .rev()
            .find(|&n| raw.sym(n) != tail(&right, n))
            .map_or(ws, |n| n + 1);
        Point {
            domain_start: None,
            sheet: raw.sheet,
            window_start: ws,
            window: (ws..end.max(ws)).map(|n| raw.sym(n)).collect(),
            left,
            right,
        }
    }
}

/// Shortest period `q | p.len()` with `p[i] = p[i mod q]`.
fn primitive(p: &[u32]) -> Vec<u32> {
    let n = p.len();
    for q in 1..=n {
        if n % q == 0 && (0..n).all(|i| p[i] == p[i % q]) {
            return p[..q].to_vec();
        }
    }
    p.to_vec()
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u32]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>().join("");
        if self.domain_start.is_none() {
            write!(f, "({})* ", join(&self.left))?;
        }
        write!(f, "[{}@{}] ({})*", join(&self.window), self.window_start, join(&self.right))?;
        if self.sheet != 0 {
            write!(f, " /{}", self.sheet)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cantor::{distance, Alphabet, Distance};

    fn z2() -> CoordinateScheme {
        CoordinateScheme::full(2)
    }

    #[test]
    fn canonical_forms_are_unique() {
        let s = z2();
        let a = Point::new(&s, -3, vec![0, 0, 1, 0, 0], vec![0], vec![0], 0).unwrap();
        let b = Point::finite(&s, -1, vec![1], 0, 0).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.window_start(), -1);
        assert_eq!(a.window(), &[1]);
        let p = Point::new(&s, 4, vec![0, 1, 0, 1], vec![0, 1, 0, 1], vec![0, 1], 0).unwrap();
        assert_eq!(p, Point::new(&s, 0, vec![], vec![0, 1], vec![0, 1], 0).unwrap());
        assert!(p.window().is_empty());
    }

    #[test]
    fn tails_split_at_the_last_left_agreement() {
        let s = z2();
        let x = Point::new(&s, 0, vec![], vec![0], vec![1], 0).unwrap();
        let y = Point::new(&s, -2, vec![0, 0], vec![0], vec![1], 0).unwrap();
        assert_eq!(x, y);
        assert_eq!(x.eval(-1).unwrap(), 0);
        assert_eq!(x.eval(0).unwrap(), 1);
    }

    #[test]
    fn shifts_move_the_window() {
        let s = z2();
        let x = Point::finite(&s, 0, vec![1], 0, 0).unwrap();
        let y = x.shifted(3);
        assert_eq!(y.eval(-3).unwrap(), 1);
        assert_eq!(y.shifted(-3), x);
        let alt = Point::new(&s, 0, vec![], vec![0, 1], vec![0, 1], 0).unwrap();
        assert_eq!(alt.shifted(1).eval(0).unwrap(), 1);
        assert_eq!(alt.shifted(2), alt);
    }

    #[test]
    fn alphabets_are_enforced() {
        let s = z2();
        assert!(Point::finite(&s, 0, vec![2], 0, 0).is_err());
        let succ = CoordinateScheme::new("succ", IndexSet::OneSided { start: 2 }, Alphabet::IndexModulus, 1).unwrap();
        assert!(Point::finite(&succ, 2, vec![1, 2], 0, 0).is_ok());
        assert!(Point::finite(&succ, 2, vec![2], 0, 0).is_err());
        assert!(Point::finite(&succ, 1, vec![0], 0, 0).is_err());
        let x = Point::finite(&succ, 2, vec![1], 0, 0).unwrap();
        assert!(matches!(x.eval(1), Err(Error::Domain(_))));
    }

    #[test]
    fn one_sided_distance() {
        let succ = CoordinateScheme::new("succ", IndexSet::OneSided { start: 2 }, Alphabet::IndexModulus, 1).unwrap();
        let zero = Point::constant(&succ, 0, 0).unwrap();
        let x = Point::finite(&succ, 4, vec![3], 0, 0).unwrap();
        assert_eq!(distance(&succ, &zero, &x), Distance::Pow(2));
    }
}

use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A circle index: a positive level or the limit circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Finite(u32),
    Limit,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Finite(n) => write!(f, "{n}"),
            Level::Limit => write!(f, "LIMIT"),
        }
    }
}

/// A point of the circle stack: a level and an angle in turns, `0 ≤ angle < 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CirclePoint {
    pub level: Level,
    pub angle: Rational64,
}

impl CirclePoint {
    pub fn new(level: Level, angle: Rational64) -> Result<Self> {
        if let Level::Finite(0) = level {
            return Err(Error::Range("circle levels start at 1".into()));
        }
        Ok(CirclePoint { level, angle: frac(angle) })
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.level, self.angle)
    }
}

/// The rule `r_n = numerator / (n + offset)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadiusRule {
    #[serde(default = "one")]
    pub numerator: i64,
    #[serde(default = "one")]
    pub offset: i64,
}

fn one() -> i64 {
    1
}

impl Default for RadiusRule {
    fn default() -> Self {
        RadiusRule { numerator: 1, offset: 1 }
    }
}

impl RadiusRule {
    /// `0 < r_1 < 1`; the rule is then strictly decreasing to 0.
    pub fn validate(&self) -> Result<()> {
        if self.numerator < 1 || self.offset < 0 || self.numerator >= 1 + self.offset {
            return Err(Error::Invalid(format!(
                "radius rule {}/(n+{}) must satisfy 0 < r_1 < 1",
                self.numerator, self.offset
            )));
        }
        Ok(())
    }

    /// `r_n`, with `r = 0` on the limit circle.
    pub fn r(&self, level: Level) -> Rational64 {
        match level {
            Level::Finite(n) => Rational64::new(self.numerator, n as i64 + self.offset),
            Level::Limit => Rational64::zero(),
        }
    }

    /// Radius `1 - r_n`.
    pub fn radius(&self, level: Level) -> Rational64 {
        Rational64::one() - self.r(level)
    }

    /// Period of the level map: the reduced denominator of `r_n`, or 1 on the limit circle.
    pub fn period(&self, level: Level) -> u64 {
        match level {
            Level::Finite(_) => *self.r(level).denom() as u64,
            Level::Limit => 1,
        }
    }

    /// Rotate by `k` steps: angle `+ k·r_n mod 1`; the limit circle is fixed.
    pub fn act(&self, k: i64, x: &CirclePoint) -> CirclePoint {
        let step = self.r(x.level) * Rational64::from_integer(k);
        CirclePoint { level: x.level, angle: frac(x.angle + step) }
    }

    /// `max(|Δradius|, arc)` with the arc measured in turns, so in `[0, 1/2]`.
    pub fn distance(&self, a: &CirclePoint, b: &CirclePoint) -> Rational64 {
        let dr = (self.radius(a.level) - self.radius(b.level)).abs();
        dr.max(arc(a.angle, b.angle))
    }

    /// Distance between two levels in the component factor: `|r_a - r_b|`.
    pub fn level_distance(&self, a: Level, b: Level) -> Rational64 {
        (self.r(a) - self.r(b)).abs()
    }
}

/// Fractional part in `[0, 1)`.
pub fn frac(q: Rational64) -> Rational64 {
    q - q.floor()
}

/// Shortest arc between two angles, in turns.
pub fn arc(a: Rational64, b: Rational64) -> Rational64 {
    let d = frac(a - b);
    d.min(Rational64::one() - d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_is_exact() {
        let rule = RadiusRule::default();
        let x = CirclePoint::new(Level::Finite(5), Rational64::new(1, 3)).unwrap();
        let y = rule.act(6, &x);
        assert_eq!(y, x);
        assert_eq!(rule.act(1, &x).angle, Rational64::new(1, 2));
        assert_eq!(rule.period(Level::Finite(5)), 6);
        let lim = CirclePoint::new(Level::Limit, Rational64::new(2, 7)).unwrap();
        assert_eq!(rule.act(123, &lim), lim);
    }

    #[test]
    fn distances() {
        let rule = RadiusRule::default();
        let a = CirclePoint::new(Level::Finite(1), Rational64::new(0, 1)).unwrap();
        let b = CirclePoint::new(Level::Finite(1), Rational64::new(3, 4)).unwrap();
        assert_eq!(rule.distance(&a, &b), Rational64::new(1, 4));
        let c = CirclePoint::new(Level::Limit, Rational64::new(0, 1)).unwrap();
        assert_eq!(rule.distance(&a, &c), Rational64::new(1, 2));
    }

    #[test]
    fn rules_are_checked() {
        assert!(RadiusRule { numerator: 2, offset: 1 }.validate().is_err());
        assert!(RadiusRule { numerator: 1, offset: 0 }.validate().is_err());
        assert!(RadiusRule { numerator: 2, offset: 2 }.validate().is_ok());
    }
}

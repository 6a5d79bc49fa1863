use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::{thue_morse_symbol, CirclePoint, FlowSystem, Level, State};
use crate::cantor::{CoordinateScheme, Point};
use crate::error::{Error, Result};

/// A named or explicit point, as written in configs and on the command line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PointSpec {
    /// Every coordinate equal to `symbol`.
    Constant {
        #[serde(default)]
        symbol: u32,
        #[serde(default)]
        sheet: u32,
    },
    /// A single 1 at coordinate `at` in a sea of zeros.
    SingleOne {
        #[serde(default)]
        at: i64,
    },
    /// Explicit symbols on `[lo, lo + len)` with a constant fill elsewhere.
    Finite {
        lo: i64,
        symbols: Vec<u32>,
        #[serde(default)]
        fill: u32,
        #[serde(default)]
        sheet: u32,
    },
    /// Full description with periodic tails.
    General {
        window_start: i64,
        window: Vec<u32>,
        left: Vec<u32>,
        right: Vec<u32>,
        #[serde(default)]
        sheet: u32,
    },
    /// The two-sided Thue–Morse fixed point on `[-half, half)`, `half` a power of 4.
    ThueMorse { half: u32 },
    /// `ξ_i`: 0 on `n ≤ i`, 1 on `n > i`, on the given sheet.
    Xi { i: u32, sheet: u32 },
    /// `η_i`: 1 on `n < -i`, 0 on `n ≥ -i`, on the given sheet.
    Eta { i: u32, sheet: u32 },
    /// `y_j`: 0 on `|n| ≤ j`, 1 elsewhere; `primed` flips coordinate `j`.
    Y {
        j: u32,
        #[serde(default)]
        primed: bool,
        #[serde(default)]
        delta: u32,
    },
    /// A circle-stack point; `level` 0 stands for the limit circle.
    Circle { level: u32, angle: (i64, i64) },
}

impl PointSpec {
    /// Parse a short form: `zero`, `ones`, `single-one`, `single-one(3)`,
    /// `thue-morse`, `xi(2,1)`, `eta(2,0)`, `y(3)`, `y'(3,1)`, `circle(5,1/3)`, `limit(1/3)`.
    pub fn parse(text: &str) -> Result<PointSpec> {
        let bad = || Error::Invalid(format!("cannot parse point '{text}'"));
        let t = text.trim();
        let (name, args): (&str, Vec<&str>) = match t.split_once('(') {
            Some((n, rest)) => (n, rest.strip_suffix(')').ok_or_else(bad)?.split(',').map(str::trim).collect()),
            None => (t, Vec::new()),
        };
        let int = |s: &str| s.trim_start_matches('+').parse::<i64>().map_err(|_| bad());
        let frac = |s: &str| -> Result<(i64, i64)> {
            match s.split_once('/') {
                Some((a, b)) => Ok((int(a)?, int(b)?)),
                None => Ok((int(s)?, 1)),
            }
        };
        let sheet = |s: Option<&&str>| -> Result<u32> {
            match s.copied() {
                None | Some("0") | Some("+1") | Some("+") => Ok(0),
                Some("1") | Some("-1") | Some("-") => Ok(1),
                _ => Err(bad()),
            }
        };
        let spec = match (name, args.len()) {
            ("zero" | "o", 0) => PointSpec::Constant { symbol: 0, sheet: 0 },
            ("o", 1) => PointSpec::Constant { symbol: 0, sheet: sheet(args.first())? },
            ("ones", 0) => PointSpec::Constant { symbol: 1, sheet: 0 },
            ("single-one", 0) => PointSpec::SingleOne { at: 0 },
            ("single-one", 1) => PointSpec::SingleOne { at: int(args[0])? },
            ("thue-morse", 0) => PointSpec::ThueMorse { half: 256 },
            ("thue-morse", 1) => PointSpec::ThueMorse { half: int(args[0])? as u32 },
            ("xi", 1 | 2) => PointSpec::Xi { i: int(args[0])? as u32, sheet: sheet(args.get(1))? },
            ("eta", 1 | 2) => PointSpec::Eta { i: int(args[0])? as u32, sheet: sheet(args.get(1))? },
            ("y", 1 | 2) => PointSpec::Y { j: int(args[0])? as u32, primed: false, delta: sheet(args.get(1))? },
            ("y'", 1 | 2) => PointSpec::Y { j: int(args[0])? as u32, primed: true, delta: sheet(args.get(1))? },
            ("circle", 2) => PointSpec::Circle { level: int(args[0])? as u32, angle: frac(args[1])? },
            ("limit", 1) => PointSpec::Circle { level: 0, angle: frac(args[0])? },
            _ => return Err(bad()),
        };
        Ok(spec)
    }

    /// The state this spec names in `system`.
    pub fn build(&self, system: &FlowSystem) -> Result<State> {
        if let PointSpec::Circle { level, angle } = self {
            if system.rule().is_none() {
                return Err(Error::Precondition(format!("{} has no circles", system.id())));
            }
            if angle.1 == 0 {
                return Err(Error::Invalid("angle denominator must be nonzero".into()));
            }
            let level = if *level == 0 { Level::Limit } else { Level::Finite(*level) };
            return Ok(State::Circle(CirclePoint::new(level, Rational64::new(angle.0, angle.1))?));
        }
        let scheme = system.scheme_or_err()?;
        let p = match self {
            PointSpec::Constant { symbol, sheet } => Point::constant(scheme, *symbol, *sheet)?,
            PointSpec::SingleOne { at } => Point::finite(scheme, *at, vec![1], 0, 0)?,
            PointSpec::Finite { lo, symbols, fill, sheet } => Point::finite(scheme, *lo, symbols.clone(), *fill, *sheet)?,
            PointSpec::General { window_start, window, left, right, sheet } => {
                Point::new(scheme, *window_start, window.clone(), left.clone(), right.clone(), *sheet)?
            }
            PointSpec::ThueMorse { half } => thue_morse_point(scheme, *half)?,
            PointSpec::Xi { i, sheet } => {
                Point::new(scheme, *i as i64 + 1, Vec::new(), vec![0], vec![1], *sheet)?
            }
            PointSpec::Eta { i, sheet } => {
                Point::new(scheme, -(*i as i64), Vec::new(), vec![1], vec![0], *sheet)?
            }
            PointSpec::Y { j, primed, delta } => {
                let j = *j as i64;
                let mut window = vec![0; 2 * j as usize + 1];
                if *primed {
                    window[2 * j as usize] = 1;
                }
                Point::new(scheme, -j, window, vec![1], vec![1], *delta)?
            }
            PointSpec::Circle { .. } => unreachable!("handled above"),
        };
        if system.window_limited() {
            if let Some(lang) = system.language() {
                let caps = crate::caps::Caps::default();
                if !p.window().is_empty() && !lang.contains(p.window(), &caps)? {
                    return Err(Error::Domain("point window is not an admissible word of the subshift".into()));
                }
            }
        }
        Ok(State::Seq(p))
    }
}

/// The two-sided Thue–Morse point `x(n) = t_n`, `x(-m) = t_{half - m}` on
/// `[-half, half)`, padded with zeros outside. Only the window is meaningful.
pub fn thue_morse_point(scheme: &CoordinateScheme, half: u32) -> Result<Point> {
    if half == 0 || !half.is_power_of_two() || half.trailing_zeros() % 2 != 0 {
        return Err(Error::Invalid(format!("Thue-Morse half length {half} must be a power of 4")));
    }
    let h = half as i64;
    let window: Vec<u32> = (-h..h)
        .map(|n| if n >= 0 { thue_morse_symbol(n as u64) } else { thue_morse_symbol((h + n) as u64) })
        .collect();
    Point::new(scheme, -h, window, vec![0], vec![0], 0)
}

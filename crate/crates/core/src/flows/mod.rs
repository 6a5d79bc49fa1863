//! Concrete flows with exact action evaluators.
//!
//! Every system acts on finitely described points: sequences with periodic
//! tails for the product-space systems, rational angles for the circle stack.
//! `Z`-systems evaluate `f^n` in closed form; the two word systems act by
//! applying letters right to left, so `act(st, x) = act(s, act(t, x))`.

mod circle;
mod language;
mod points;
mod words;

use std::collections::BTreeSet;

use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::cantor::{agree_to_depth, distance, Alphabet, CoordinateScheme, Cylinder, Distance, IndexSet, Point};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec};

pub use circle::{arc, frac, CirclePoint, Level, RadiusRule};
pub use language::{thue_morse_symbol, Language, LanguageSpec};
pub use points::{thue_morse_point, PointSpec};
pub use words::{b_letter, e_letter, theta_letter, word};

/// Variant and parameters of a system, as written in configs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SystemSpec {
    FullShift {
        #[serde(default = "two")]
        alphabet: u32,
    },
    ThueMorse,
    Substitution {
        rules: Vec<Vec<u32>>,
    },
    Forbidden {
        alphabet: u32,
        forbidden: Vec<Vec<u32>>,
    },
    Periodic {
        word: Vec<u32>,
    },
    Odometer {
        #[serde(default = "dyadic")]
        moduli: Vec<u32>,
    },
    SuccessorMap,
    TwoCopy {
        m: u32,
    },
    Mcmahon {
        m: u32,
    },
    CircleStack {
        #[serde(default)]
        rule: RadiusRule,
    },
    ComponentFactor {
        #[serde(default)]
        rule: RadiusRule,
    },
}

fn two() -> u32 {
    2
}

fn dyadic() -> Vec<u32> {
    vec![2]
}

/// A state of some system.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum State {
    Seq(Point),
    Circle(CirclePoint),
    Level { level: Level },
}

impl State {
    pub fn as_point(&self) -> Option<&Point> {
        match self {
            State::Seq(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_circle(&self) -> Option<&CirclePoint> {
        match self {
            State::Circle(c) => Some(c),
            _ => None,
        }
    }
}

impl std::fmt::Display for State {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            State::Seq(p) => write!(f, "{p}"),
            State::Circle(c) => write!(f, "{c}"),
            State::Level { level } => write!(f, "level {level}"),
        }
    }
}

/// The phase space of a system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Space {
    Product { scheme: CoordinateScheme },
    Circles { rule: RadiusRule },
    Levels { rule: RadiusRule },
}

/// Descriptive data and harness expectations.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub name: String,
    pub description: String,
    /// Properties the system is declared to have, e.g. `"ap"` or `"equicontinuous"`.
    #[serde(default)]
    pub expect: BTreeSet<String>,
    /// Hypotheses that are asserted rather than computed.
    #[serde(default)]
    pub assertions: Vec<String>,
}

/// `f^n` eventually repeats its depth-`d` cylinder itinerary: for `|n| ≥ threshold`
/// the itinerary is `period`-periodic in each direction. A zero threshold means
/// the itinerary is periodic on all of `Z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodCertificate {
    pub threshold: u64,
    pub period: u64,
}

#[derive(Clone, Debug)]
enum Dynamics {
    Shift,
    Odometer,
    Successor,
    TwoCopy { m: u32 },
    Mcmahon { m: u32 },
    Circles,
    Levels,
}

/// An immutable flow: group, phase space, exact action and metadata.
#[derive(Clone, Debug)]
pub struct FlowSystem {
    id: String,
    spec: SystemSpec,
    group: GroupSpec,
    space: Space,
    language: Option<Language>,
    dynamics: Dynamics,
    metadata: Metadata,
}

impl FlowSystem {
    pub fn new(id: &str, spec: SystemSpec) -> Result<Self> {
        let shift_space = |k: u32| -> Result<Space> {
            Ok(Space::Product { scheme: CoordinateScheme::new(&format!("{{0..{}}}^Z", k - 1), IndexSet::TwoSided, Alphabet::Constant { size: k }, 1)? })
        };
        let (space, language, dynamics, group, name, description) = match &spec {
            SystemSpec::FullShift { alphabet } => {
                if *alphabet < 2 {
                    return Err(Error::Invalid("the full shift needs at least two symbols".into()));
                }
                (shift_space(*alphabet)?, Some(Language::full(*alphabet)), Dynamics::Shift, GroupSpec::integers(), "full shift", format!("left shift on {{0..{}}}^Z", alphabet - 1))
            }
            SystemSpec::ThueMorse => (
                shift_space(2)?,
                Some(Language::thue_morse()),
                Dynamics::Shift,
                GroupSpec::integers(),
                "Thue-Morse subshift",
                "orbit closure of the fixed point of 0->01, 1->10".to_string(),
            ),
            SystemSpec::Substitution { rules } => {
                let lang = Language::new(LanguageSpec::Substitution { rules: rules.clone() })?;
                let k = lang.alphabet().max(2);
                (shift_space(k)?, Some(lang), Dynamics::Shift, GroupSpec::integers(), "substitution subshift", "subshift of a primitive substitution".to_string())
            }
            SystemSpec::Forbidden { alphabet, forbidden } => {
                let lang = Language::new(LanguageSpec::Forbidden { alphabet: *alphabet, forbidden: forbidden.clone() })?;
                (shift_space((*alphabet).max(2))?, Some(lang), Dynamics::Shift, GroupSpec::integers(), "subshift of finite type", "words avoiding a finite forbidden list".to_string())
            }
            SystemSpec::Periodic { word } => {
                let lang = Language::new(LanguageSpec::Periodic { word: word.clone() })?;
                let k = lang.alphabet().max(2);
                (shift_space(k)?, Some(lang), Dynamics::Shift, GroupSpec::integers(), "periodic subshift", "orbit of a periodic sequence".to_string())
            }
            SystemSpec::Odometer { moduli } => {
                if moduli.is_empty() || moduli.iter().any(|&m| m < 2) {
                    return Err(Error::Invalid("odometer moduli must be at least 2".into()));
                }
                let scheme = CoordinateScheme::new("odometer", IndexSet::OneSided { start: 0 }, Alphabet::Cycle { sizes: moduli.clone() }, 1)?;
                (Space::Product { scheme }, None, Dynamics::Odometer, GroupSpec::integers(), "odometer", format!("adding machine with moduli {moduli:?} repeated"))
            }
            SystemSpec::SuccessorMap => {
                let scheme = CoordinateScheme::new("prod Z/nZ", IndexSet::OneSided { start: 2 }, Alphabet::IndexModulus, 1)?;
                (
                    Space::Product { scheme },
                    None,
                    Dynamics::Successor,
                    GroupSpec::integers(),
                    "successor map",
                    "adds 1 to the coordinate after the first nonzero one".to_string(),
                )
            }
            SystemSpec::TwoCopy { m } => {
                check_truncation(*m)?;
                let scheme = CoordinateScheme::new("{0,1}^Z x {+1,-1}", IndexSet::TwoSided, Alphabet::Constant { size: 2 }, 2)?;
                (
                    Space::Product { scheme },
                    None,
                    Dynamics::TwoCopy { m: *m },
                    GroupSpec::free_group(words::two_copy_rank(*m)),
                    "two-copy flow",
                    format!("finite flips e_j (|j| <= {m}) and sheet swaps b_i (i <= {m}) on two copies of {{0,1}}^Z"),
                )
            }
            SystemSpec::Mcmahon { m } => {
                check_truncation(*m)?;
                let scheme = CoordinateScheme::new("{0,1}^Z x Z2", IndexSet::TwoSided, Alphabet::Constant { size: 2 }, 2)?;
                (
                    Space::Product { scheme },
                    None,
                    Dynamics::Mcmahon { m: *m },
                    GroupSpec::free_group(words::mcmahon_rank(*m)),
                    "McMahon flow",
                    format!("theta_i (|i| <= {m}) flipping coordinate i and adding y(i) to the Z2 part"),
                )
            }
            SystemSpec::CircleStack { rule } => {
                rule.validate()?;
                (
                    Space::Circles { rule: *rule },
                    None,
                    Dynamics::Circles,
                    GroupSpec::integers(),
                    "circle stack",
                    format!("rotation by {}/(n+{}) turns on the circle of radius 1 - r_n; identity on the unit circle", rule.numerator, rule.offset),
                )
            }
            SystemSpec::ComponentFactor { rule } => {
                rule.validate()?;
                (Space::Levels { rule: *rule }, None, Dynamics::Levels, GroupSpec::integers(), "component factor", "levels and LIMIT with the trivial action".to_string())
            }
        };
        let mut metadata = Metadata { name: name.to_string(), description, ..Metadata::default() };
        if matches!(dynamics, Dynamics::TwoCopy { .. } | Dynamics::Mcmahon { .. }) {
            metadata.assertions.push("acting group is a finitely generated truncation; compact generation of the full group is not checked".into());
        }
        Ok(FlowSystem { id: id.to_string(), spec, group, space, language, dynamics, metadata })
    }

    pub fn full_shift(alphabet: u32) -> Result<Self> {
        Self::new("full-shift", SystemSpec::FullShift { alphabet })
    }

    pub fn thue_morse() -> Self {
        Self::new("thue-morse", SystemSpec::ThueMorse).expect("fixed construction")
    }

    pub fn substitution_subshift(rules: Vec<Vec<u32>>) -> Result<Self> {
        Self::new("substitution", SystemSpec::Substitution { rules })
    }

    pub fn odometer(moduli: Vec<u32>) -> Result<Self> {
        Self::new("odometer", SystemSpec::Odometer { moduli })
    }

    pub fn dyadic_odometer() -> Self {
        Self::odometer(vec![2]).expect("fixed construction")
    }

    pub fn successor_map() -> Self {
        Self::new("successor-map", SystemSpec::SuccessorMap).expect("fixed construction")
    }

    pub fn two_copy_flow(m: u32) -> Result<Self> {
        Self::new(&format!("two-copy({m})"), SystemSpec::TwoCopy { m })
    }

    pub fn mcmahon_flow(m: u32) -> Result<Self> {
        Self::new(&format!("mcmahon({m})"), SystemSpec::Mcmahon { m })
    }

    pub fn circle_stack(rule: RadiusRule) -> Result<Self> {
        Self::new("circle-stack", SystemSpec::CircleStack { rule })
    }

    /// Build a registered system from its CLI name, e.g. `odometer` or `mcmahon(8)`.
    pub fn named(name: &str) -> Result<Self> {
        let (base, arg) = match name.split_once('(') {
            Some((b, rest)) => {
                let inner = rest.strip_suffix(')').ok_or_else(|| Error::Invalid(format!("malformed system name {name}")))?;
                let m: u32 = inner.trim().parse().map_err(|_| Error::Invalid(format!("bad parameter in {name}")))?;
                (b, Some(m))
            }
            None => (name, None),
        };
        let spec = match (base, arg) {
            ("full-shift", None) => SystemSpec::FullShift { alphabet: 2 },
            ("full-shift", Some(k)) => SystemSpec::FullShift { alphabet: k },
            ("thue-morse", None) => SystemSpec::ThueMorse,
            ("periodic-01", None) => SystemSpec::Periodic { word: vec![0, 1] },
            ("golden-mean", None) => SystemSpec::Forbidden { alphabet: 2, forbidden: vec![vec![1, 1]] },
            ("odometer", None) => SystemSpec::Odometer { moduli: vec![2] },
            ("odometer", Some(k)) => SystemSpec::Odometer { moduli: vec![k] },
            ("successor-map", None) => SystemSpec::SuccessorMap,
            ("two-copy", m) => SystemSpec::TwoCopy { m: m.unwrap_or(8) },
            ("mcmahon", m) => SystemSpec::Mcmahon { m: m.unwrap_or(8) },
            ("circle-stack", None) => SystemSpec::CircleStack { rule: RadiusRule::default() },
            _ => return Err(Error::Lookup(format!("unknown system {name}"))),
        };
        let id = match (base, arg) {
            ("two-copy" | "mcmahon", None) => format!("{base}(8)"),
            _ => name.to_string(),
        };
        Self::new(&id, spec)
    }

    /// Registered system names with one-line descriptions.
    pub fn registry() -> Vec<(&'static str, &'static str)> {
        vec![
            ("full-shift", "left shift on {0,1}^Z; full-shift(k) for k symbols"),
            ("thue-morse", "Thue-Morse substitution subshift"),
            ("periodic-01", "orbit of the sequence ...0101..."),
            ("golden-mean", "subshift of finite type forbidding 11"),
            ("odometer", "dyadic adding machine; odometer(k) for base k"),
            ("successor-map", "pointwise periodic map on prod_{n>=2} Z/nZ"),
            ("two-copy(m)", "flips and sheet swaps on two copies of {0,1}^Z"),
            ("mcmahon(m)", "theta_i maps on {0,1}^Z x Z2"),
            ("circle-stack", "rational rotations on circles accumulating at the unit circle"),
        ]
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn spec(&self) -> &SystemSpec {
        &self.spec
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn metadata(&self) -> &Metadata {
        &self.metadata
    }

    pub fn metadata_mut(&mut self) -> &mut Metadata {
        &mut self.metadata
    }

    pub fn with_id(mut self, id: &str) -> Self {
        self.id = id.to_string();
        self
    }

    pub fn language(&self) -> Option<&Language> {
        self.language.as_ref()
    }

    pub fn scheme(&self) -> Option<&CoordinateScheme> {
        match &self.space {
            Space::Product { scheme } => Some(scheme),
            _ => None,
        }
    }

    pub fn scheme_or_err(&self) -> Result<&CoordinateScheme> {
        self.scheme().ok_or_else(|| Error::Domain(format!("{} is not a product space", self.id)))
    }

    pub fn rule(&self) -> Option<RadiusRule> {
        match &self.space {
            Space::Circles { rule } | Space::Levels { rule } => Some(*rule),
            _ => None,
        }
    }

    pub fn is_z_flow(&self) -> bool {
        self.group.is_integers()
    }

    pub fn is_circle_stack(&self) -> bool {
        matches!(self.dynamics, Dynamics::Circles)
    }

    /// Whether points are only trusted on their window: true for proper
    /// subshifts, whose sample points carry artificial tails.
    pub fn window_limited(&self) -> bool {
        self.language.as_ref().is_some_and(|l| !l.is_full())
    }

    /// Truncation parameter of the word systems.
    pub fn truncation(&self) -> Option<u32> {
        match self.dynamics {
            Dynamics::TwoCopy { m } | Dynamics::Mcmahon { m } => Some(m),
            _ => None,
        }
    }

    /// `x` is a state of this system.
    pub fn check_state(&self, x: &State) -> Result<()> {
        match (&self.space, x) {
            (Space::Product { scheme }, State::Seq(p)) => {
                if p.sheet() >= scheme.sheets {
                    return Err(Error::Range("sheet outside the scheme".into()));
                }
                Point::new(scheme, p.window_start(), p.window().to_vec(), p.left().to_vec(), p.right().to_vec(), p.sheet())
                    .map(|_| ())
            }
            (Space::Circles { .. }, State::Circle(_)) | (Space::Levels { .. }, State::Level { .. }) => Ok(()),
            _ => Err(Error::Precondition(format!("state kind does not match system {}", self.id))),
        }
    }

    /// `gx`, exactly.
    pub fn act(&self, g: &Element, x: &State) -> Result<State> {
        match g {
            // Word systems accept unreduced words: the action factors through free reduction.
            Element::Word(w) => {
                let rank = self.truncation().map_or(0, |m| match self.dynamics {
                    Dynamics::TwoCopy { .. } => words::two_copy_rank(m),
                    _ => words::mcmahon_rank(m),
                });
                if w.iter().any(|&l| l == 0 || l.unsigned_abs() as usize > rank) {
                    return Err(Error::Range(format!("letter outside the generators of {}", self.id)));
                }
            }
            _ => self.group.validate(g)?,
        }
        match (&self.dynamics, g) {
            (Dynamics::TwoCopy { m }, Element::Word(w)) => {
                Ok(State::Seq(words::two_copy_act(self.scheme_or_err()?, *m, w, self.point(x)?)?))
            }
            (Dynamics::Mcmahon { m }, Element::Word(w)) => {
                Ok(State::Seq(words::mcmahon_act(self.scheme_or_err()?, *m, w, self.point(x)?)?))
            }
            (_, Element::Int(n)) => self.act_int(*n, x),
            _ => Err(Error::Precondition(format!("element {g:?} does not act on {}", self.id))),
        }
    }

    /// `f^n x` for a `Z`-system.
    pub fn act_int(&self, n: i64, x: &State) -> Result<State> {
        match (&self.dynamics, x) {
            (Dynamics::Shift, State::Seq(p)) => Ok(State::Seq(p.shifted(n))),
            (Dynamics::Odometer, State::Seq(p)) => Ok(State::Seq(odometer_add(self.scheme_or_err()?, p, n)?)),
            (Dynamics::Successor, State::Seq(p)) => Ok(State::Seq(successor_act(self.scheme_or_err()?, p, n)?)),
            (Dynamics::Circles, State::Circle(c)) => Ok(State::Circle(self.rule().expect("circles").act(n, c))),
            (Dynamics::Levels, State::Level { level }) => Ok(State::Level { level: *level }),
            (Dynamics::TwoCopy { .. } | Dynamics::Mcmahon { .. }, _) => {
                Err(Error::Precondition(format!("{} is not a Z-flow", self.id)))
            }
            _ => Err(Error::Precondition(format!("state kind does not match system {}", self.id))),
        }
    }

    fn point<'a>(&self, x: &'a State) -> Result<&'a Point> {
        x.as_point().ok_or_else(|| Error::Precondition(format!("{} acts on sequences", self.id)))
    }

    /// `(g, gx)` for every `g ∈ Γ^horizon`, identity first.
    pub fn orbit_segment(&self, x: &State, horizon: usize, caps: &Caps) -> Result<Vec<(Element, State)>> {
        let elements = if self.is_z_flow() {
            let h = horizon as i64;
            std::iter::once(0).chain((1..=h).flat_map(|k| [k, -k])).map(Element::Int).collect()
        } else {
            self.group.gamma_power(horizon, caps)?
        };
        elements
            .into_iter()
            .map(|g| {
                let y = self.act(&g, x)?;
                Ok((g, y))
            })
            .collect()
    }

    /// `d(x, y) ≤ 2^{-d}` in the system's metric.
    pub fn within(&self, x: &State, y: &State, d: usize) -> Result<bool> {
        match (&self.space, x, y) {
            (Space::Product { scheme }, State::Seq(a), State::Seq(b)) => Ok(agree_to_depth(scheme, a, b, d)),
            (Space::Circles { rule }, State::Circle(a), State::Circle(b)) => {
                Ok(rule.distance(a, b) <= Rational64::new(1, 1i64 << d.min(62)))
            }
            (Space::Levels { rule }, State::Level { level: a }, State::Level { level: b }) => {
                Ok(rule.level_distance(*a, *b) <= Rational64::new(1, 1i64 << d.min(62)))
            }
            _ => Err(Error::Precondition("states do not belong to the same system".into())),
        }
    }

    /// Exact dyadic distance on product spaces.
    pub fn distance(&self, x: &State, y: &State) -> Result<Distance> {
        let scheme = self.scheme_or_err()?;
        Ok(distance(scheme, self.point(x)?, self.point(y)?))
    }

    /// Depth of input needed to know `f^n x` to depth `d`, when the action declares it.
    pub fn input_depth(&self, n: i64, d: usize) -> Option<usize> {
        match self.dynamics {
            Dynamics::Shift => Some(d + n.unsigned_abs() as usize),
            Dynamics::Odometer | Dynamics::Successor => Some(d),
            _ => None,
        }
    }

    /// The exact image `f^n(C)` when it is again a cylinder on a known window.
    pub fn cylinder_image(&self, n: i64, c: &Cylinder) -> Result<Option<Cylinder>> {
        let scheme = self.scheme_or_err()?;
        match self.dynamics {
            Dynamics::Shift => Ok(Some(Cylinder { sheet: c.sheet, lo: c.lo - n, symbols: c.symbols.clone() })),
            Dynamics::Odometer | Dynamics::Successor if c.lo == scheme.origin() => {
                // The image of a prefix cylinder is the prefix cylinder of any representative's image.
                let rep = Point::finite(scheme, c.lo, c.symbols.clone(), 0, c.sheet.unwrap_or(0))?;
                let img = self.act_int(n, &State::Seq(rep))?;
                let img = img.as_point().expect("sequence");
                Ok(Some(Cylinder { sheet: c.sheet, lo: c.lo, symbols: img.slice(c.lo, c.len()) }))
            }
            _ => Ok(None),
        }
    }

    /// A certificate that the depth-`d` itinerary of `x` is eventually periodic.
    /// Proper subshifts give none, since their sample tails are artificial.
    pub fn period_certificate(&self, x: &State, d: usize) -> Option<PeriodCertificate> {
        match (&self.dynamics, x) {
            (Dynamics::Shift, State::Seq(p)) if !self.window_limited() => {
                let (lo, len) = self.scheme()?.depth_window(d);
                let hi = lo + len as i64;
                // σ^n x restricted to [lo, hi) reads x on [lo + n, hi + n).
                let right = (p.window_end() - lo).max(0) as u64;
                let left = (hi - p.window_start()).max(0) as u64;
                let period = p.left().len().lcm(&p.right().len()) as u64;
                Some(PeriodCertificate { threshold: right.max(left), period })
            }
            (Dynamics::Odometer, State::Seq(_)) => {
                let scheme = self.scheme()?;
                let period = (0..d as i64).map(|k| scheme.size(k) as u64).product();
                Some(PeriodCertificate { threshold: 0, period })
            }
            (Dynamics::Successor, State::Seq(p)) => {
                Some(PeriodCertificate { threshold: 0, period: successor_period(p) })
            }
            (Dynamics::Circles, State::Circle(c)) => {
                Some(PeriodCertificate { threshold: 0, period: self.rule()?.period(c.level) })
            }
            (Dynamics::Levels, _) => Some(PeriodCertificate { threshold: 0, period: 1 }),
            _ => None,
        }
    }

    /// For proper subshifts, reject questions about coordinates outside `x`'s window.
    pub fn check_reach(&self, x: &State, lo: i64, hi: i64) -> Result<()> {
        if !self.window_limited() {
            return Ok(());
        }
        let p = self.point(x)?;
        if lo < p.window_start() || hi > p.window_end() {
            return Err(Error::Precondition(format!(
                "coordinates [{lo}, {hi}) leave the trusted window [{}, {}) of a subshift point",
                p.window_start(),
                p.window_end()
            )));
        }
        Ok(())
    }

    /// The factor onto circle indices, with the induced trivial action.
    pub fn component_projection(&self) -> Result<FlowSystem> {
        match self.dynamics {
            Dynamics::Circles => {
                let rule = self.rule().expect("circles");
                FlowSystem::new(&format!("{}/components", self.id), SystemSpec::ComponentFactor { rule })
            }
            _ => Err(Error::Domain(format!("{} is not a circle stack", self.id))),
        }
    }

    /// Image of a circle-stack point in the component factor.
    pub fn project(&self, x: &State) -> Result<State> {
        match (&self.dynamics, x) {
            (Dynamics::Circles, State::Circle(c)) => Ok(State::Level { level: c.level }),
            _ => Err(Error::Domain("projection is defined on circle-stack points".into())),
        }
    }

    /// Human-readable rendering of a group element, using the system's generator names.
    pub fn render(&self, g: &Element) -> String {
        match (&self.dynamics, g) {
            (Dynamics::TwoCopy { m }, Element::Word(w)) => words::render(w, |l| words::two_copy_name(*m, l)),
            (Dynamics::Mcmahon { m }, Element::Word(w)) => words::render(w, |l| words::mcmahon_name(*m, l)),
            _ => self.group.render(g),
        }
    }
}

fn check_truncation(m: u32) -> Result<()> {
    if m == 0 {
        return Err(Error::Invalid("truncation parameter m must be at least 1".into()));
    }
    Ok(())
}

/// Mixed-radix addition of `n` to the digit sequence, carrying upward.
fn odometer_add(scheme: &CoordinateScheme, x: &Point, n: i64) -> Result<Point> {
    if n == 0 {
        return Ok(x.clone());
    }
    let start = scheme.origin();
    let end = x.window_end().max(start);
    let l = x.right().len().lcm(&scheme.alphabet_period().unwrap_or(1)) as i64;
    let mut digits = Vec::new();
    let mut carry = n as i128;
    let mut i = start;
    while carry != 0 {
        if i >= end && carry.abs() == 1 {
            let extreme = |k: i64| if carry == 1 { scheme.size(k) - 1 } else { 0 };
            if (i..i + l).all(|k| x.sym(k) == extreme(k)) {
                // The carry runs forever: an all-max tail becomes all zeros and vice versa.
                let tail: Vec<u32> = (0..l).map(|k| if carry == 1 { 0 } else { scheme.size(k) - 1 }).collect();
                return Point::new(scheme, start, digits, Vec::new(), tail, x.sheet());
            }
        }
        let m = scheme.size(i) as i128;
        let v = x.sym(i) as i128 + carry;
        digits.push(v.rem_euclid(m) as u32);
        carry = v.div_euclid(m);
        i += 1;
    }
    digits.extend((i..end).map(|k| x.sym(k)));
    Point::new(scheme, start, digits, Vec::new(), x.right().to_vec(), x.sheet())
}

/// First coordinate where `x` is nonzero, if any.
fn first_nonzero(x: &Point) -> Option<i64> {
    let start = x.window_start();
    let end = x.window_end();
    (start..end + x.right().len() as i64).find(|&n| x.sym(n) != 0)
}

fn successor_act(scheme: &CoordinateScheme, x: &Point, n: i64) -> Result<Point> {
    let Some(k) = first_nonzero(x) else {
        return Ok(x.clone());
    };
    let c = k + 1;
    let m = scheme.size(c) as i64;
    let v = (x.sym(c) as i64 + n).rem_euclid(m) as u32;
    x.with_symbols(scheme, c, &[v])
}

/// Least period of a successor-map point: the modulus after the first nonzero coordinate.
fn successor_period(x: &Point) -> u64 {
    first_nonzero(x).map_or(1, |k| (k + 1) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &State) -> &Point {
        s.as_point().unwrap()
    }

    #[test]
    fn odometer_carries() {
        let odo = FlowSystem::dyadic_odometer();
        let scheme = odo.scheme().unwrap().clone();
        let x = State::Seq(Point::finite(&scheme, 0, vec![1, 1], 0, 0).unwrap());
        let y = odo.act_int(1, &x).unwrap();
        assert_eq!(seq(&y), &Point::finite(&scheme, 0, vec![0, 0, 1], 0, 0).unwrap());
        assert_eq!(odo.act_int(-1, &y).unwrap(), x);
        let ones = State::Seq(Point::constant(&scheme, 1, 0).unwrap());
        let zero = State::Seq(Point::constant(&scheme, 0, 0).unwrap());
        assert_eq!(odo.act_int(1, &ones).unwrap(), zero);
        assert_eq!(odo.act_int(-1, &zero).unwrap(), ones);
        assert_eq!(odo.act_int(5, &zero).unwrap().as_point().unwrap().slice(0, 4), vec![1, 0, 1, 0]);
    }

    #[test]
    fn mixed_radix_odometer() {
        let odo = FlowSystem::odometer(vec![2, 3]).unwrap();
        let scheme = odo.scheme().unwrap().clone();
        let zero = State::Seq(Point::constant(&scheme, 0, 0).unwrap());
        let six = odo.act_int(6, &zero).unwrap();
        assert_eq!(seq(&six).slice(0, 3), vec![0, 0, 1]);
        let max = Point::new(&scheme, 0, vec![], vec![], vec![1, 2], 0).unwrap();
        assert_eq!(odo.act_int(1, &State::Seq(max)).unwrap(), zero);
    }

    #[test]
    fn successor_increments_after_first_nonzero() {
        let s = FlowSystem::successor_map();
        let scheme = s.scheme().unwrap().clone();
        let x = State::Seq(Point::finite(&scheme, 2, vec![1], 0, 0).unwrap());
        let y = s.act_int(1, &x).unwrap();
        assert_eq!(seq(&y).slice(2, 3), vec![1, 1, 0]);
        assert_eq!(s.act_int(3, &x).unwrap(), x);
        let zero = State::Seq(Point::constant(&scheme, 0, 0).unwrap());
        assert_eq!(s.act_int(7, &zero).unwrap(), zero);
    }

    #[test]
    fn shift_action_and_cylinders() {
        let fs = FlowSystem::full_shift(2).unwrap();
        let scheme = fs.scheme().unwrap().clone();
        let x = State::Seq(Point::finite(&scheme, 0, vec![1], 0, 0).unwrap());
        let y = fs.act_int(3, &x).unwrap();
        assert_eq!(seq(&y).eval(-3).unwrap(), 1);
        let c = Cylinder::new(&scheme, None, 2, vec![1]).unwrap();
        assert_eq!(fs.cylinder_image(2, &c).unwrap().unwrap().lo, 0);
        let cert = fs.period_certificate(&x, 1).unwrap();
        assert_eq!(cert, PeriodCertificate { threshold: 1, period: 1 });
    }

    #[test]
    fn orbit_segments() {
        let odo = FlowSystem::dyadic_odometer();
        let zero = State::Seq(Point::constant(odo.scheme().unwrap(), 0, 0).unwrap());
        let seg = odo.orbit_segment(&zero, 3, &Caps::default()).unwrap();
        let ns: BTreeSet<i64> = seg.iter().map(|(g, _)| g.as_int().unwrap()).collect();
        assert_eq!(ns, (-3..=3).collect());
    }

    #[test]
    fn component_projection_is_trivial() {
        let cs = FlowSystem::circle_stack(RadiusRule::default()).unwrap();
        let x = State::Circle(CirclePoint::new(Level::Finite(5), Rational64::new(1, 3)).unwrap());
        let f = cs.component_projection().unwrap();
        let l = cs.project(&x).unwrap();
        assert_eq!(l, State::Level { level: Level::Finite(5) });
        assert_eq!(f.act_int(17, &l).unwrap(), l);
        assert!(FlowSystem::dyadic_odometer().component_projection().is_err());
    }

    #[test]
    fn registry_names_resolve() {
        for (name, _) in FlowSystem::registry() {
            let name = name.replace("(m)", "(3)");
            assert!(FlowSystem::named(&name).is_ok(), "{name}");
        }
        assert!(matches!(FlowSystem::named("nope"), Err(Error::Lookup(_))));
    }
}

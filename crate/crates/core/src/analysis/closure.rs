use std::collections::{BTreeMap, BTreeSet};

use num_rational::Rational64;
use serde::Serialize;

use super::{point_of, require_depth, require_z, z_order};
use crate::cantor::{depth_cylinder, ClopenSet, CoordinateScheme, Cylinder, Point};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::flows::{FlowSystem, Level, State};
use crate::group::Element;
use crate::verdict::Verdict;

/// Depth-`d` cylinders met by `Γ^H·x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitClosureApprox {
    pub depth: usize,
    pub horizon: usize,
    pub cylinders: BTreeSet<Cylinder>,
}

pub fn orbit_cylinders(flow: &FlowSystem, x: &State, d: usize, h: usize, caps: &Caps) -> Result<OrbitClosureApprox> {
    require_depth(d)?;
    let scheme = flow.scheme_or_err()?;
    let (lo, len) = scheme.depth_window(d);
    flow.check_reach(x, lo - h as i64, lo + len as i64 + h as i64)?;
    let mut cylinders = BTreeSet::new();
    for (_, y) in flow.orbit_segment(x, h, caps)? {
        cylinders.insert(depth_cylinder(scheme, point_of(flow, &y)?, d)?);
        if cylinders.len() > caps.patterns {
            return Err(Error::Resource("orbit cylinders exceed the pattern cap".into()));
        }
    }
    Ok(OrbitClosureApprox { depth: d, horizon: h, cylinders })
}

/// Every depth-`d` cylinder of the scheme.
fn all_depth_cylinders(scheme: &CoordinateScheme, d: usize, caps: &Caps) -> Result<Vec<Cylinder>> {
    let (lo, len) = scheme.depth_window(d);
    let full = ClopenSet::full(scheme, lo, len, caps)?;
    Ok(full.cylinders(scheme))
}

/// Inner and outer approximations of the invariant core `U^∞ = ⋂_g gU`.
#[derive(Clone, Debug, Serialize)]
pub struct CoreApprox {
    pub depth: usize,
    pub horizon: usize,
    /// Cylinders whose whole orbit of images is a closed finite family inside `U`.
    pub inner: Vec<Cylinder>,
    /// Cylinders not excluded by a determined image disjoint from `U`.
    pub outer: Vec<Cylinder>,
    /// Cylinders whose images could not be computed at this depth.
    pub unknown: Vec<Cylinder>,
}

/// How a cylinder sits relative to a clopen set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Relation {
    Inside,
    Disjoint,
    Meets,
}

fn relation(scheme: &CoordinateScheme, c: &Cylinder, u: &ClopenSet, caps: &Caps) -> Result<Relation> {
    let fixed = |n: i64| -> Option<u32> {
        (n >= c.lo && n < c.lo + c.len() as i64).then(|| c.symbols[(n - c.lo) as usize])
    };
    let sheet_ok = |s: u32| c.sheet.map_or(true, |cs| cs == s);
    let compatible = |p: &crate::cantor::Pattern| {
        sheet_ok(p.sheet)
            && p.symbols.iter().enumerate().all(|(i, &s)| fixed(u.lo + i as i64).map_or(true, |f| f == s))
    };
    let meet = u.patterns.iter().filter(|p| compatible(p)).count();
    if meet == 0 {
        return Ok(Relation::Disjoint);
    }
    // Inside: every completion of the free coordinates of U's window lies in U.
    let free: Vec<i64> = (u.lo..u.lo + u.len as i64).filter(|&n| fixed(n).is_none()).collect();
    let sheets: Vec<u32> = match c.sheet {
        Some(s) => vec![s],
        None => (0..scheme.sheets).collect(),
    };
    let completions = free.iter().try_fold(sheets.len() as u64, |acc, &n| acc.checked_mul(scheme.size(n) as u64));
    match completions {
        Some(total) if total <= caps.patterns as u64 => {
            Ok(if meet as u64 == total { Relation::Inside } else { Relation::Meets })
        }
        _ => Ok(Relation::Meets),
    }
}

/// `u_star_inner` and `u_infty_outer` at depth `d` and horizon `H` for a `Z`-flow.
pub fn invariant_core(flow: &FlowSystem, u: &ClopenSet, d: usize, h: usize, caps: &Caps) -> Result<CoreApprox> {
    require_depth(d)?;
    require_z(flow, "invariant-core")?;
    let scheme = flow.scheme_or_err()?;
    let mut inner = Vec::new();
    let mut outer = Vec::new();
    let mut unknown = Vec::new();
    let mut image_cache: BTreeMap<(Cylinder, i64), Option<Cylinder>> = BTreeMap::new();
    let mut image = |c: &Cylinder, n: i64| -> Result<Option<Cylinder>> {
        if let Some(v) = image_cache.get(&(c.clone(), n)) {
            return Ok(v.clone());
        }
        let v = flow.cylinder_image(n, c)?;
        image_cache.insert((c.clone(), n), v.clone());
        Ok(v)
    };
    for c in all_depth_cylinders(scheme, d, caps)? {
        // Outer: excluded when some determined image misses U.
        let mut excluded = false;
        let mut undetermined = false;
        for n in z_order(h as i64) {
            match image(&c, n)? {
                Some(img) => {
                    if relation(scheme, &img, u, caps)? == Relation::Disjoint {
                        excluded = true;
                        break;
                    }
                }
                None => undetermined = true,
            }
        }
        if !excluded {
            outer.push(c.clone());
        }
        if undetermined && !excluded {
            unknown.push(c.clone());
        }
        // Inner: the family of images under f^{±1} closes up within H steps, all inside U.
        if excluded {
            continue;
        }
        let mut family: BTreeSet<Cylinder> = BTreeSet::from([c.clone()]);
        let mut frontier = vec![c.clone()];
        let mut certified = relation(scheme, &c, u, caps)? == Relation::Inside;
        let mut steps = 0;
        while certified && !frontier.is_empty() {
            if steps == h {
                certified = false;
                break;
            }
            steps += 1;
            let mut next = Vec::new();
            for f in &frontier {
                for n in [1, -1] {
                    match image(f, n)? {
                        Some(img) if img.lo == c.lo && img.len() == c.len() => {
                            if relation(scheme, &img, u, caps)? != Relation::Inside {
                                certified = false;
                            }
                            if family.insert(img.clone()) {
                                next.push(img);
                            }
                        }
                        _ => certified = false,
                    }
                }
            }
            frontier = next;
        }
        if certified {
            inner.push(c);
        }
    }
    Ok(CoreApprox { depth: d, horizon: h, inner, outer, unknown })
}

/// Representatives of a cylinder: its symbols with each canonical tail fill.
pub(crate) fn representatives(scheme: &CoordinateScheme, c: &Cylinder, sheet: u32) -> Result<Vec<Point>> {
    let min_size = match &scheme.alphabet {
        crate::cantor::Alphabet::Constant { size } => *size,
        crate::cantor::Alphabet::Cycle { sizes } => *sizes.iter().min().expect("nonempty"),
        crate::cantor::Alphabet::IndexModulus => 2,
    };
    let mut fills: Vec<Vec<u32>> = (0..min_size).map(|s| vec![s]).collect();
    if let crate::cantor::Alphabet::Cycle { sizes } = &scheme.alphabet {
        let l = sizes.len() as i64;
        fills.push((0..l).map(|k| scheme.size(k) - 1).collect());
    }
    let mut out = Vec::new();
    for fill in fills {
        let p = Point::new(scheme, c.lo, c.symbols.clone(), fill.clone(), fill, sheet)?;
        if !out.contains(&p) {
            out.push(p);
        }
    }
    Ok(out)
}

/// Upper semicontinuity of the orbit-closure map at `x`, at depth `d`.
pub fn orbit_map_usc_verdict(
    flow: &FlowSystem,
    x: &State,
    d: usize,
    h: usize,
    neighbor_depth_max: usize,
    caps: &Caps,
) -> Result<Verdict> {
    const NAME: &str = "orbit-map-usc";
    require_depth(d)?;
    let base = |v: Verdict| v.param("depth", d).param("horizon", h).param("neighbor_depth_max", neighbor_depth_max);
    if let Some(c) = x.as_circle() {
        return circle_usc(flow, *c, d, neighbor_depth_max).map(base);
    }
    let scheme = flow.scheme_or_err()?;
    let p = point_of(flow, x)?;
    let own = orbit_cylinders(flow, x, d, h, caps)?;
    // The orbit of x is complete when its itinerary is certified inside the horizon.
    let complete = flow.is_z_flow()
        && flow.period_certificate(x, d).is_some_and(|c| c.threshold + 2 * c.period <= h as u64);
    let mut last_escape = None;
    for dp in d..=neighbor_depth_max.max(d) {
        let cyl = depth_cylinder(scheme, p, dp)?;
        let mut escape = None;
        for y in representatives(scheme, &cyl, p.sheet())? {
            let ys = State::Seq(y.clone());
            let theirs = orbit_cylinders(flow, &ys, d, h, caps)?;
            if let Some(extra) = theirs.cylinders.difference(&own.cylinders).next() {
                escape = Some((y, extra.clone()));
                break;
            }
        }
        match escape {
            None => {
                return Ok(base(Verdict::holds(NAME))
                    .cert("neighbor_depth", dp)
                    .cert("quantification", "cylinder representatives with constant tail fills"));
            }
            Some(e) => last_escape = Some((dp, e)),
        }
    }
    let (dp, (y, extra)) = last_escape.expect("at least one depth tried");
    let v = if complete {
        Verdict::fails(NAME).cert("mode", "period-certificate")
    } else {
        Verdict::inconclusive(NAME, "escapes found but the orbit of x is not certified complete")
    };
    Ok(base(v).cert("neighbor_depth", dp).cert("escaping_point", y.to_string()).cert("escaped_to", extra.to_string()))
}

fn circle_usc(flow: &FlowSystem, x: crate::flows::CirclePoint, d: usize, max: usize) -> Result<Verdict> {
    const NAME: &str = "orbit-map-usc";
    let rule = flow.rule().ok_or_else(|| Error::Precondition("circle point on a non-circle system".into()))?;
    let eps = |k: usize| Rational64::new(1, 1i64 << k.min(62));
    match x.level {
        Level::Finite(n) => {
            // Levels are separated: the 2^{-d'} ball around a level-n point stays on level n,
            // where the action is an isometry.
            let gap_below = rule.r(Level::Finite(n)) - rule.r(Level::Finite(n + 1));
            let gap_above = if n > 1 { rule.r(Level::Finite(n - 1)) - rule.r(Level::Finite(n)) } else { gap_below };
            let gap = gap_below.min(gap_above);
            match (d..=max.max(d)).find(|&k| eps(k) < gap) {
                Some(k) => Ok(Verdict::holds(NAME).cert("neighbor_depth", k).cert("level_gap", gap.to_string())),
                None => Ok(Verdict::inconclusive(NAME, "level gap below 2^-neighbor_depth_max")),
            }
        }
        Level::Limit => {
            // Near the limit circle, each level's rotation moves a nearby point a quarter turn away.
            let mut level = 1u32;
            while rule.r(Level::Finite(level)) > eps(max) {
                level += 1;
            }
            let r = rule.r(Level::Finite(level));
            let denom = *r.denom();
            let k = (1..=denom).find(|&k| crate::flows::arc(r * Rational64::from_integer(k), Rational64::from_integer(0)) >= Rational64::new(1, 4));
            match k {
                Some(k) if d >= 2 => Ok(Verdict::fails(NAME)
                    .cert("neighbor_depth", max)
                    .cert("escaping_level", level)
                    .cert("iterate", k)
                    .cert("displacement", "at least 1/4 turn")),
                _ => Ok(Verdict::inconclusive(NAME, "depth too coarse to separate a quarter turn")),
            }
        }
    }
}

/// Symmetry of the orbit-closure relation on sampled pairs `(x, y)` with `y ∈ cl(Gx)`.
pub fn orbit_relation_symmetry_verdict(
    flow: &FlowSystem,
    samples: &[(State, State)],
    d: usize,
    h: usize,
    caps: &Caps,
) -> Result<Verdict> {
    const NAME: &str = "orbit-relation-symmetry";
    require_depth(d)?;
    let base = |v: Verdict| v.param("depth", d).param("horizon", h).param("pairs", samples.len());
    let reaches = |from: &State, to: &State| -> Result<Option<Element>> {
        for (g, y) in flow.orbit_segment(from, h, caps)? {
            if flow.within(&y, to, d)? {
                return Ok(Some(g));
            }
        }
        Ok(None)
    };
    let mut unresolved = 0usize;
    for (i, (x, y)) in samples.iter().enumerate() {
        if reaches(x, y)?.is_none() {
            unresolved += 1;
            continue;
        }
        if reaches(y, x)?.is_none() {
            let certified = flow.is_z_flow()
                && flow.period_certificate(y, d).is_some_and(|c| c.threshold + 2 * c.period <= h as u64);
            if certified {
                return Ok(base(Verdict::fails(NAME))
                    .cert("mode", "period-certificate")
                    .cert("pair", i)
                    .cert("x", x.to_string())
                    .cert("y", y.to_string())
                    .cert("reason", "y is in the orbit closure of x but the orbit of y never re-enters the cylinder of x"));
            }
            unresolved += 1;
        }
    }
    if unresolved == 0 {
        Ok(base(Verdict::holds(NAME)))
    } else {
        Ok(base(Verdict::inconclusive(NAME, "some pairs unresolved within the horizon")).cert("unresolved", unresolved))
    }
}

/// A minimal set `K` with `G·U = K·U`, found greedily by first hit.
#[derive(Clone, Debug, Serialize)]
pub struct TranslateCover {
    pub k: Vec<i64>,
    /// Cylinders making up `G·U`.
    pub translates: usize,
    /// Every translate of `U` is a single cylinder, so `|K|` cannot shrink.
    pub minimal: bool,
    /// The family of translates is closed under `f^{±1}`.
    pub closed: bool,
}

pub fn translate_cover(flow: &FlowSystem, u: &Cylinder, h: usize) -> Result<TranslateCover> {
    require_z(flow, "translate-cover")?;
    let mut seen: BTreeMap<Cylinder, i64> = BTreeMap::new();
    let order = (0..=h as i64).chain((1..=h as i64).map(|n| -n));
    let mut single = true;
    for n in order {
        match flow.cylinder_image(n, u)? {
            Some(img) => {
                single &= img.lo == u.lo && img.len() == u.len();
                seen.entry(img).or_insert(n);
            }
            None => return Err(Error::Precondition("translates of U are not computable at its depth".into())),
        }
    }
    let mut closed = true;
    for c in seen.keys() {
        for n in [1, -1] {
            if let Some(img) = flow.cylinder_image(n, c)? {
                closed &= seen.contains_key(&img);
            } else {
                closed = false;
            }
        }
    }
    let mut k: Vec<i64> = seen.values().copied().collect();
    k.sort_unstable();
    Ok(TranslateCover { translates: seen.len(), minimal: single, closed, k })
}

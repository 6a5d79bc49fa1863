use std::collections::BTreeSet;

use serde::Serialize;

use super::{depth_covering, in_set, point_of, require_depth, require_z, z_order, Exactness, ZScan};
use crate::cantor::ClopenSet;
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::flows::{FlowSystem, State};
use crate::group::{ConeApproximation, Element};
use crate::verdict::Verdict;

/// `N(x, U) ∩ (Γ^H)`: the elements of the horizon ball that bring `x` into `U`.
#[derive(Clone, Debug, Serialize)]
pub struct ReturnTimeSet {
    pub flow: String,
    pub point: State,
    pub horizon: usize,
    pub elements: Vec<Element>,
}

impl ReturnTimeSet {
    pub fn ints(&self) -> Vec<i64> {
        self.elements.iter().filter_map(Element::as_int).collect()
    }
}

fn check_u_reach(flow: &FlowSystem, x: &State, u: &ClopenSet, h: usize) -> Result<()> {
    let h = h as i64;
    flow.check_reach(x, u.lo - h, u.lo + u.len as i64 + h)
}

fn u_depth(flow: &FlowSystem, u: &ClopenSet) -> Result<usize> {
    Ok(depth_covering(flow.scheme_or_err()?, u.lo, u.len))
}

pub fn return_times(flow: &FlowSystem, x: &State, u: &ClopenSet, h: usize, caps: &Caps) -> Result<ReturnTimeSet> {
    point_of(flow, x)?;
    check_u_reach(flow, x, u, h)?;
    let mut elements = Vec::new();
    if flow.is_z_flow() {
        let mut ns: Vec<i64> = Vec::new();
        for n in -(h as i64)..=h as i64 {
            if in_set(flow, u, &flow.act_int(n, x)?)? {
                ns.push(n);
            }
        }
        elements = ns.into_iter().map(Element::Int).collect();
    } else {
        for g in flow.group().gamma_power(h, caps)? {
            if in_set(flow, u, &flow.act(&g, x)?)? {
                elements.push(g);
            }
        }
        elements.sort();
    }
    Ok(ReturnTimeSet { flow: flow.id().to_string(), point: x.clone(), horizon: h, elements })
}

fn require_member(flow: &FlowSystem, x: &State, u: &ClopenSet) -> Result<()> {
    if in_set(flow, u, x)? {
        Ok(())
    } else {
        Err(Error::Precondition("the point must lie in the neighbourhood".into()))
    }
}

/// Largest distance from a point of `[-(h-k), h-k]` to the nearest hit, minimized over `k`:
/// the least `k < h/2` with `[-(h-k), h-k] ⊆ [-k, k] + N`.
fn syndetic_radius(hits: &BTreeSet<i64>, h: i64) -> Option<i64> {
    let nearest = |n: i64| -> i64 {
        let up = hits.range(n..).next().map(|m| m - n);
        let down = hits.range(..=n).next_back().map(|m| n - m);
        up.into_iter().chain(down).min().unwrap_or(i64::MAX)
    };
    (0..).take_while(|k| 2 * k < h).find(|&k| (-(h - k)..=h - k).all(|n| nearest(n) <= k))
}

fn max_gap(hits: &BTreeSet<i64>) -> i64 {
    hits.iter().zip(hits.iter().skip(1)).map(|(a, b)| b - a).max().unwrap_or(0)
}

/// Almost periodicity at `x` relative to `U`: is `N(x, U)` syndetic?
pub fn ap_verdict(flow: &FlowSystem, x: &State, u: &ClopenSet, h: usize, caps: &Caps) -> Result<Verdict> {
    const NAME: &str = "ap";
    point_of(flow, x)?;
    require_member(flow, x, u)?;
    check_u_reach(flow, x, u, h)?;
    let base = |v: Verdict| v.param("horizon", h).param("neighbourhood", u);
    if !flow.is_z_flow() {
        return ap_general(flow, x, u, h, caps).map(base);
    }
    let hi = h as i64;
    let scan = ZScan::run(flow, x, u_depth(flow, u)?, hi, |y| in_set(flow, u, y))?;
    if let Some(cert) = scan.exact {
        let (right, left) = scan.recurs().expect("exact");
        let span = scan.span().expect("exact");
        let window: BTreeSet<i64> = scan.hits_in(-span, span).collect();
        if !(right && left) {
            return Ok(base(Verdict::fails(NAME))
                .cert("mode", "period-certificate")
                .cert("itinerary", Exactness::from(cert))
                .cert("returns", window.iter().collect::<Vec<_>>())
                .cert("reason", if right { "no returns in the negative direction" } else { "no returns in the positive direction" }));
        }
        let gap = max_gap(&window);
        return Ok(base(Verdict::holds(NAME))
            .cert("mode", "period-certificate")
            .cert("itinerary", Exactness::from(cert))
            .cert("gap", gap)
            .cert("k", gap / 2));
    }
    if flow.period_certificate(x, u_depth(flow, u)?).is_some() {
        return Ok(base(Verdict::inconclusive(NAME, "horizon shorter than the itinerary certificate span")));
    }
    match syndetic_radius(&scan.hits, hi) {
        Some(k) => Ok(base(Verdict::holds(NAME)).cert("mode", "horizon").cert("k", k).cert("gap", max_gap(&scan.hits))),
        None => Ok(base(Verdict::inconclusive(NAME, "no syndeticity radius below H/2"))),
    }
}

fn ap_general(flow: &FlowSystem, x: &State, u: &ClopenSet, h: usize, caps: &Caps) -> Result<Verdict> {
    let n: BTreeSet<Element> = return_times(flow, x, u, h, caps)?.elements.into_iter().collect();
    let group = flow.group();
    for k in 1..h.div_ceil(2) {
        let inner = group.gamma_power(h - k, caps)?;
        let kset = group.gamma_power(k, caps)?;
        if inner.iter().all(|g| kset.iter().any(|c| n.contains(&group.mul(c, g)))) {
            return Ok(Verdict::holds("ap").cert("mode", "horizon").cert("k", k));
        }
    }
    Ok(Verdict::inconclusive("ap", "no syndeticity radius below H/2"))
}

/// Regular almost periodicity: does `N(x, U)` contain a subgroup `κZ`?
pub fn regular_ap_verdict(flow: &FlowSystem, x: &State, u: &ClopenSet, h: usize) -> Result<Verdict> {
    const NAME: &str = "regular-ap";
    point_of(flow, x)?;
    require_z(flow, NAME)?;
    require_member(flow, x, u)?;
    check_u_reach(flow, x, u, h)?;
    let base = |v: Verdict| v.param("horizon", h).param("neighbourhood", u);
    let hi = h as i64;
    let scan = ZScan::run(flow, x, u_depth(flow, u)?, hi, |y| in_set(flow, u, y))?;
    let contains_multiples = |kappa: i64, reach: i64| (1..=reach / kappa).all(|j| scan.hits.contains(&(j * kappa)) && scan.hits.contains(&(-j * kappa)));
    if let Some(cert) = scan.exact {
        let (t, p) = (cert.threshold as i64, cert.period as i64);
        // Some κZ fits inside N iff residue 0 mod p recurs on both sides; then κ = p⌈(t+1)/p⌉ works.
        let bound = p * ((t + 1 + p - 1) / p).max(1);
        let holds_exactly = |kappa: i64| {
            (1..).map(|j| j * kappa).take_while(|&m| m <= t + kappa * p).all(|m| member_exact(&scan, m) && member_exact(&scan, -m))
        };
        return Ok(match (1..=bound).find(|&k| holds_exactly(k)) {
            Some(kappa) => base(Verdict::holds(NAME))
                .cert("mode", "period-certificate")
                .cert("itinerary", Exactness::from(cert))
                .cert("kappa", kappa)
                .cert("subgroup", format!("{kappa}Z")),
            None => base(Verdict::fails(NAME))
                .cert("mode", "period-certificate")
                .cert("itinerary", Exactness::from(cert))
                .cert("reason", "no multiple of the period stays in the return set"),
        });
    }
    if flow.period_certificate(x, u_depth(flow, u)?).is_some() {
        return Ok(base(Verdict::inconclusive(NAME, "horizon shorter than the itinerary certificate span")));
    }
    match (1..=hi / 2).find(|&k| contains_multiples(k, hi)) {
        Some(kappa) => Ok(base(Verdict::holds(NAME)).cert("mode", "horizon").cert("kappa", kappa).cert("subgroup", format!("{kappa}Z"))),
        None => Ok(base(Verdict::inconclusive(NAME, "no subgroup of index at most H/2 inside the horizon returns"))),
    }
}

/// Membership of any `n` in an exactly known hit set.
fn member_exact(scan: &ZScan, n: i64) -> bool {
    let c = scan.exact.expect("exact scan");
    let (t, p) = (c.threshold as i64, c.period as i64);
    let m = if n > t {
        t + (n - t) % p
    } else if n < -t {
        -t - (-t - n) % p
    } else {
        n
    };
    scan.hits.contains(&m)
}

/// Two-sided (Poisson) recurrence of `x` at depth `d` on a `Z`-flow.
pub fn recurrent_type1_verdict(flow: &FlowSystem, x: &State, d: usize, h: usize) -> Result<Verdict> {
    const NAME: &str = "recurrent-type1";
    require_depth(d)?;
    require_z(flow, NAME)?;
    let base = |v: Verdict| v.param("depth", d).param("horizon", h);
    reach_depth(flow, x, d, h)?;
    let hi = h as i64;
    let scan = ZScan::run(flow, x, d, hi, |y| flow.within(y, x, d))?;
    let plus = scan.hits_in(1, hi).next();
    let minus = scan.hits_in(-hi, -1).last();
    if let (Some(p), Some(m)) = (plus, minus) {
        return Ok(base(Verdict::holds(NAME)).cert("n_plus", p).cert("n_minus", m));
    }
    if let Some((right, left)) = scan.recurs() {
        if !right || !left {
            return Ok(base(Verdict::fails(NAME))
                .cert("mode", "period-certificate")
                .cert("itinerary", Exactness::from(scan.exact.expect("exact")))
                .cert("n_plus", plus)
                .cert("n_minus", minus));
        }
    }
    Ok(base(Verdict::inconclusive(NAME, "no return on one side within the horizon")))
}

/// Trusted-window check for returns to the depth-`d` cylinder of `x` along `|n| ≤ h`.
fn reach_depth(flow: &FlowSystem, x: &State, d: usize, h: usize) -> Result<()> {
    if let Some(scheme) = flow.scheme() {
        let (lo, len) = scheme.depth_window(d);
        flow.check_reach(x, lo - h as i64, lo + len as i64 + h as i64)?;
    }
    Ok(())
}

/// Recurrence along each supplied cone approximation.
pub fn recurrent_type1_general(flow: &FlowSystem, x: &State, d: usize, cones: &[ConeApproximation]) -> Result<Verdict> {
    const NAME: &str = "recurrent-type1-general";
    require_depth(d)?;
    if let Some(i) = cones.iter().position(|c| !c.is_stabilized()) {
        return Err(Error::Precondition(format!("cone approximation {i} has not stabilized")));
    }
    let mut witnesses = Vec::new();
    for (i, cone) in cones.iter().enumerate() {
        let mut found = None;
        for c in &cone.elements {
            if flow.within(&flow.act(c, x)?, x, d)? {
                found = Some(c.clone());
                break;
            }
        }
        match found {
            Some(c) => witnesses.push(flow.render(&c)),
            None => {
                return Ok(Verdict::fails(NAME)
                    .param("depth", d)
                    .param("cones", cones.len())
                    .cert("scope", "supplied cone family")
                    .cert("cone", i)
                    .cert("cone_radius", cone.radius)
                    .cert("cone_size", cone.elements.len()));
            }
        }
    }
    Ok(Verdict::holds(NAME)
        .param("depth", d)
        .param("cones", cones.len())
        .cert("scope", "supplied cone family")
        .cert("witnesses", witnesses))
}

/// Type II recurrence along a schedule of elements of growing length.
///
/// On `Z` the default schedule is `±j` for `j ∈ [⌈H/2⌉, H]`; for `g = j > 0`,
/// `K(g) = [1, 2j - 1]`.
pub fn recurrent_type2_verdict(
    flow: &FlowSystem,
    x: &State,
    d: usize,
    schedule: Option<&[Element]>,
    h: usize,
    caps: &Caps,
) -> Result<Verdict> {
    const NAME: &str = "recurrent-type2";
    require_depth(d)?;
    let base = |v: Verdict| v.param("depth", d).param("horizon", h);
    let group = flow.group();
    let default_schedule: Vec<Element>;
    let schedule = match schedule {
        Some(s) => s,
        None => {
            default_schedule = if flow.is_z_flow() {
                (h.div_ceil(2).max(1) as i64..=h as i64).flat_map(|j| [Element::Int(j), Element::Int(-j)]).collect()
            } else {
                let a = group.generators().iter().find(|g| **g != group.identity()).cloned().ok_or_else(|| Error::Domain("trivial group".into()))?;
                let mut out = Vec::new();
                let mut g = a.clone();
                for _ in 1..=h {
                    out.push(g.clone());
                    g = group.mul(&g, &a);
                }
                out
            };
            &default_schedule
        }
    };
    if flow.is_z_flow() {
        reach_depth(flow, x, d, 2 * h)?;
        let reach = 2 * h as i64;
        let scan = ZScan::run(flow, x, d, reach, |y| flow.within(y, x, d))?;
        let mut bound = 0i64;
        let mut missing = None;
        for g in schedule {
            let j = g.as_int().ok_or_else(|| Error::Precondition("schedule must contain integers".into()))?;
            if j == 0 {
                return Err(Error::Precondition("schedule elements must be nonzero".into()));
            }
            // K(j) = [1, 2j-1] for j > 0 and its negative for j < 0.
            let (lo, hi) = if j > 0 { (1, 2 * j - 1) } else { (2 * j + 1, -1) };
            if hi.abs().max(lo.abs()) > reach {
                return Err(Error::Precondition("schedule exceeds the horizon".into()));
            }
            let best = scan.hits_in(lo, hi).map(i64::abs).min();
            match best {
                Some(c) => bound = bound.max(c),
                None => {
                    missing = Some(j);
                    break;
                }
            }
        }
        if missing.is_none() && 2 * bound <= h as i64 {
            return Ok(base(Verdict::holds(NAME)).cert("bound", bound).cert("schedule_len", schedule.len()));
        }
        if let Some((right, left)) = scan.recurs() {
            if !right || !left {
                return Ok(base(Verdict::fails(NAME))
                    .cert("mode", "period-certificate")
                    .cert("itinerary", Exactness::from(scan.exact.expect("exact")))
                    .cert("reason", "returns stop in one direction, so cone witnesses cannot stay bounded"));
            }
        }
        return Ok(base(Verdict::inconclusive(NAME, "witness lengths exceed H/2 within the schedule")).cert("missing_at", missing));
    }
    let mut bound = 0usize;
    for g in schedule {
        let kset = group.k_set(g, caps)?;
        let mut best: Option<usize> = None;
        for c in &kset.elements {
            let len = group.word_length(c, caps)?;
            if best.is_some_and(|b| b <= len) {
                continue;
            }
            if flow.within(&flow.act(c, x)?, x, d)? {
                best = Some(len);
            }
        }
        match best {
            Some(b) => bound = bound.max(b),
            None => return Ok(base(Verdict::inconclusive(NAME, "no witness in K(g)")).cert("missing_at", flow.render(g))),
        }
    }
    if 2 * bound <= h {
        Ok(base(Verdict::holds(NAME)).cert("bound", bound).cert("schedule_len", schedule.len()))
    } else {
        Ok(base(Verdict::inconclusive(NAME, "witness lengths exceed H/2")))
    }
}

/// Least `|t|` with `tx ∉ U`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Escape {
    Finite { length: usize, element: Element },
    InfiniteWithin { horizon: usize },
}

pub fn escape_length(flow: &FlowSystem, x: &State, u: &ClopenSet, h: usize, caps: &Caps) -> Result<Escape> {
    require_member(flow, x, u)?;
    check_u_reach(flow, x, u, h)?;
    if flow.is_z_flow() {
        for n in z_order(h as i64).skip(1) {
            if !in_set(flow, u, &flow.act_int(n, x)?)? {
                return Ok(Escape::Finite { length: n.unsigned_abs() as usize, element: Element::Int(n) });
            }
        }
    } else {
        for (len, sphere) in flow.group().spheres(h, caps)?.into_iter().enumerate().skip(1) {
            for g in sphere {
                if !in_set(flow, u, &flow.act(&g, x)?)? {
                    return Ok(Escape::Finite { length: len, element: g });
                }
            }
        }
    }
    Ok(Escape::InfiniteWithin { horizon: h })
}

/// Least `p ∈ [1, p_max]` with `f^p x = x`.
pub fn pointwise_period(flow: &FlowSystem, x: &State, p_max: u64) -> Result<Option<u64>> {
    require_z(flow, "pointwise-period")?;
    for p in 1..=p_max {
        if flow.act_int(p as i64, x)? == *x {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

/// A single `n ≠ 0`, `|n| ≤ H`, returning every listed point to within `2^{-d}`.
pub fn weak_rigidity_verdict(flow: &FlowSystem, points: &[State], d: usize, h: usize) -> Result<Verdict> {
    const NAME: &str = "weak-rigidity";
    require_depth(d)?;
    require_z(flow, NAME)?;
    let base = |v: Verdict| v.param("depth", d).param("horizon", h).param("points", points.len());
    if points.is_empty() {
        return Ok(base(Verdict::holds(NAME)).cert("n", 1).cert("note", "vacuous"));
    }
    for x in points {
        reach_depth(flow, x, d, h)?;
    }
    let returns_all = |n: i64| -> Result<bool> {
        for x in points {
            if !flow.within(&flow.act_int(n, x)?, x, d)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    for n in z_order(h as i64).skip(1) {
        if returns_all(n)? {
            return Ok(base(Verdict::holds(NAME)).cert("n", n));
        }
    }
    // Exact refutation: all itineraries are certified and the joint pattern repeats within the horizon.
    let certs: Option<Vec<_>> = points.iter().map(|x| flow.period_certificate(x, d)).collect();
    if let Some(certs) = certs {
        let t = certs.iter().map(|c| c.threshold).max().unwrap_or(0);
        let p = certs.iter().fold(1u64, |acc, c| num_integer::lcm(acc, c.period));
        if t + p <= h as u64 {
            return Ok(base(Verdict::fails(NAME))
                .cert("mode", "period-certificate")
                .cert("itinerary", Exactness { threshold: t, period: p })
                .cert("reason", "no simultaneous return before the joint pattern repeats"));
        }
    }
    Ok(base(Verdict::inconclusive(NAME, "no simultaneous return within the horizon")))
}


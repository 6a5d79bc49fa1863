use serde::Serialize;

use super::{point_of, require_depth, z_order};
use crate::cantor::Distance;
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::flows::{b_letter, theta_letter, word, FlowSystem, PointSpec, State};
use crate::group::Element;
use crate::verdict::Verdict;

/// Proximality: some `g ∈ Γ^H` brings `x` and `y` within `2^{-d}`.
pub fn proximal_pair_verdict(flow: &FlowSystem, x: &State, y: &State, d: usize, h: usize, caps: &Caps) -> Result<Verdict> {
    const NAME: &str = "proximal-pair";
    require_depth(d)?;
    if x == y {
        return Err(Error::Precondition("proximality needs two distinct points".into()));
    }
    point_of(flow, x)?;
    point_of(flow, y)?;
    let base = |v: Verdict| v.param("depth", d).param("horizon", h);
    let mut best = flow.distance(x, y)?;
    let elements: Vec<Element> = if flow.is_z_flow() {
        z_order(h as i64).map(Element::Int).collect()
    } else {
        flow.group().gamma_power(h, caps)?
    };
    for g in &elements {
        let (gx, gy) = (flow.act(g, x)?, flow.act(g, y)?);
        let dist = flow.distance(&gx, &gy)?;
        if dist.within(d as u64) {
            return Ok(base(Verdict::holds(NAME)).cert("element", flow.render(g)).cert("distance", dist.to_string()));
        }
        best = best.min(dist);
    }
    // Exact refutation: the joint depth-d itinerary repeats within the horizon.
    if flow.is_z_flow() {
        if let (Some(cx), Some(cy)) = (flow.period_certificate(x, d), flow.period_certificate(y, d)) {
            let t = cx.threshold.max(cy.threshold);
            let p = num_integer::lcm(cx.period, cy.period);
            if t + p <= h as u64 {
                return Ok(base(Verdict::fails(NAME))
                    .cert("mode", "period-certificate")
                    .cert("min_distance", best.to_string())
                    .cert("threshold", t)
                    .cert("period", p));
            }
        }
    }
    Ok(base(Verdict::inconclusive(NAME, "no close approach within the horizon")).cert("min_distance", best.to_string()))
}

/// One step of a regional-proximality net: `x_j → x`, `y_j → y`, `g_j x_j` close to `g_j y_j`.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessEntry {
    pub j: u32,
    pub x_j: State,
    pub y_j: State,
    pub g_j: Element,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProximalityWitness {
    pub x: State,
    pub y: State,
    pub entries: Vec<WitnessEntry>,
}

#[derive(Serialize)]
struct EntryReport {
    j: u32,
    g: String,
    to_x: String,
    to_y: String,
    pair: String,
}

/// Verify a supplied regional-proximality witness at depth `d`: the three
/// distance sequences never increase and all end within `2^{-d}`.
pub fn regional_proximal_check(flow: &FlowSystem, w: &ProximalityWitness, d: usize) -> Result<Verdict> {
    const NAME: &str = "regional-proximal";
    require_depth(d)?;
    if w.entries.is_empty() {
        return Err(Error::Precondition("witness has no entries".into()));
    }
    let mut rows = Vec::new();
    let mut dists: Vec<[Distance; 3]> = Vec::new();
    for e in &w.entries {
        for s in [&e.x_j, &e.y_j] {
            flow.check_state(s).map_err(|err| Error::Precondition(format!("witness entry {}: {err}", e.j)))?;
        }
        let gx = flow.act(&e.g_j, &e.x_j)?;
        let gy = flow.act(&e.g_j, &e.y_j)?;
        let triple = [flow.distance(&e.x_j, &w.x)?, flow.distance(&e.y_j, &w.y)?, flow.distance(&gx, &gy)?];
        rows.push(EntryReport {
            j: e.j,
            g: flow.render(&e.g_j),
            to_x: triple[0].to_string(),
            to_y: triple[1].to_string(),
            pair: triple[2].to_string(),
        });
        dists.push(triple);
    }
    let base = |v: Verdict| v.param("depth", d).param("entries", w.entries.len());
    let monotone = (0..3).all(|k| dists.windows(2).all(|p| p[1][k] <= p[0][k]));
    let last = dists.last().expect("nonempty");
    let close = last.iter().all(|t| t.within(d as u64));
    let v = if monotone && close {
        Verdict::holds(NAME)
    } else {
        Verdict::fails(NAME).cert("reason", if monotone { "final distances exceed 2^-d" } else { "a distance sequence increases" })
    };
    Ok(base(v).cert("entries", rows))
}

impl ProximalityWitness {
    /// `x_j = ξ_{j,+1}`, `y_j = o_{-1}`, `g_j = b_j` for `j = 1..=m`, for the pair `(o_{+1}, o_{-1})`.
    pub fn two_copy(flow: &FlowSystem) -> Result<Self> {
        let m = flow.truncation().ok_or_else(|| Error::Domain("two-copy witness needs a two-copy flow".into()))?;
        let x = PointSpec::Constant { symbol: 0, sheet: 0 }.build(flow)?;
        let y = PointSpec::Constant { symbol: 0, sheet: 1 }.build(flow)?;
        let entries = (1..=m)
            .map(|j| {
                Ok(WitnessEntry {
                    j,
                    x_j: PointSpec::Xi { i: j, sheet: 0 }.build(flow)?,
                    y_j: y.clone(),
                    g_j: word(&[b_letter(m, j)?]),
                })
            })
            .collect::<Result<_>>()?;
        Ok(ProximalityWitness { x, y, entries })
    }

    /// `x_j = (y_j', 1)`, `y_j = (y_j, 0)`, `g_j = θ_j` for `j = 1..=m`, for the pair `((o,1), (o,0))`.
    pub fn mcmahon(flow: &FlowSystem) -> Result<Self> {
        let m = flow.truncation().ok_or_else(|| Error::Domain("McMahon witness needs a McMahon flow".into()))?;
        let x = PointSpec::Constant { symbol: 0, sheet: 1 }.build(flow)?;
        let y = PointSpec::Constant { symbol: 0, sheet: 0 }.build(flow)?;
        let entries = (1..=m)
            .map(|j| {
                Ok(WitnessEntry {
                    j,
                    x_j: PointSpec::Y { j, primed: true, delta: 1 }.build(flow)?,
                    y_j: PointSpec::Y { j, primed: false, delta: 0 }.build(flow)?,
                    g_j: word(&[theta_letter(m, j as i64)?]),
                })
            })
            .collect::<Result<_>>()?;
        Ok(ProximalityWitness { x, y, entries })
    }

    /// The constant net `(x, y, e)`, which can only pass when `x` and `y` are already close.
    pub fn constant(flow: &FlowSystem, x: State, y: State, len: u32) -> Self {
        let e = flow.group().identity();
        let entries = (1..=len).map(|j| WitnessEntry { j, x_j: x.clone(), y_j: y.clone(), g_j: e.clone() }).collect();
        ProximalityWitness { x, y, entries }
    }
}

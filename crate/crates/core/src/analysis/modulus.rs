use std::collections::BTreeMap;

use num_rational::Rational64;
use serde::Serialize;

use super::closure::representatives;
use super::{require_depth, require_z};
use crate::cantor::{agree_to_depth, ClopenSet, Point};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::flows::{arc, FlowSystem, Level, Space, State};
use crate::verdict::Verdict;

/// `d'(d, H')` for `H' = 0..=H`; `None` where no modulus up to the search bound exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModulusTable {
    pub depth: usize,
    pub method: String,
    pub moduli: Vec<Option<usize>>,
}

impl ModulusTable {
    pub fn strictly_increasing(&self) -> bool {
        self.moduli.windows(2).all(|w| matches!((w[0], w[1]), (Some(a), Some(b)) if b > a))
    }
}

/// Equicontinuity at depth `d`: a uniform modulus `d'` for all `|n| ≤ H'`.
pub fn equicontinuity_verdict(flow: &FlowSystem, d: usize, h: usize, input_depth_max: usize, caps: &Caps) -> Result<Verdict> {
    const NAME: &str = "equicontinuity";
    require_depth(d)?;
    require_z(flow, NAME)?;
    let table = modulus_table(flow, d, h, input_depth_max, caps)?;
    let base = |v: Verdict| v.param("depth", d).param("horizon", h).param("input_depth_max", input_depth_max);
    let exceeded = table.moduli.iter().position(|m| m.map_or(true, |m| m > input_depth_max));
    if let Some(at) = exceeded {
        return Ok(base(Verdict::fails(NAME))
            .cert("exceeded_at", at)
            .cert("method", &table.method)
            .cert("moduli", &table.moduli));
    }
    let top = &table.moduli[h / 2..];
    if top.windows(2).all(|w| w[0] == w[1]) {
        Ok(base(Verdict::holds(NAME))
            .cert("modulus", top[0])
            .cert("method", &table.method)
            .cert("moduli", &table.moduli))
    } else {
        Ok(base(Verdict::inconclusive(NAME, "modulus still growing in the top half of the horizon"))
            .cert("method", &table.method)
            .cert("moduli", &table.moduli))
    }
}

pub(crate) fn modulus_table(flow: &FlowSystem, d: usize, h: usize, input_depth_max: usize, caps: &Caps) -> Result<ModulusTable> {
    if flow.is_circle_stack() {
        return circle_table(flow, d, h, input_depth_max);
    }
    if matches!(flow.space(), Space::Levels { .. }) {
        // The component factor carries the trivial action.
        return Ok(ModulusTable { depth: d, method: "trivial-action".into(), moduli: vec![Some(d); h + 1] });
    }
    let scheme = flow.scheme_or_err()?;
    if let Some(lang) = flow.language() {
        if lang.is_full() {
            // Every coordinate varies independently, so the declared input depth is tight.
            let moduli = (0..=h).map(|k| flow.input_depth(k as i64, d)).collect();
            return Ok(ModulusTable { depth: d, method: "input-depth".into(), moduli });
        }
        return language_table(flow, d, h, caps);
    }
    if !scheme.is_two_sided() {
        return cylinder_table(flow, d, h, input_depth_max, caps);
    }
    Err(Error::Precondition(format!("no modulus computation for {}", flow.id())))
}

/// Least `D` such that every admissible word of radius `d-1+H'` is determined by its
/// central `2D-1` symbols.
fn language_table(flow: &FlowSystem, d: usize, h: usize, caps: &Caps) -> Result<ModulusTable> {
    let lang = flow.language().expect("subshift");
    let mut moduli = Vec::with_capacity(h + 1);
    let mut prev = d;
    for hp in 0..=h {
        let r = d - 1 + hp;
        let words = lang.words(2 * r + 1, caps)?;
        let mut found = None;
        for big_d in prev..=r + 1 {
            let cut = r + 1 - big_d;
            let mut seen: BTreeMap<&[u32], &[u32]> = BTreeMap::new();
            let injective = words.iter().all(|w| {
                let mid = &w[cut..w.len() - cut];
                match seen.get(mid) {
                    Some(prev) => *prev == w.as_slice(),
                    None => {
                        seen.insert(mid, w.as_slice());
                        true
                    }
                }
            });
            if injective {
                found = Some(big_d);
                break;
            }
        }
        prev = found.unwrap_or(prev);
        moduli.push(found);
    }
    Ok(ModulusTable { depth: d, method: "language".into(), moduli })
}

/// One-sided product systems: check depth-`D` cylinders with every tail fill.
fn cylinder_table(flow: &FlowSystem, d: usize, h: usize, input_depth_max: usize, caps: &Caps) -> Result<ModulusTable> {
    let scheme = flow.scheme_or_err()?;
    let mut moduli = Vec::with_capacity(h + 1);
    let mut cur = d;
    let mut reps_at: BTreeMap<usize, Vec<Vec<Point>>> = BTreeMap::new();
    let mut reps = |big_d: usize| -> Result<Vec<Vec<Point>>> {
        if let Some(r) = reps_at.get(&big_d) {
            return Ok(r.clone());
        }
        let (lo, len) = scheme.depth_window(big_d);
        let full = ClopenSet::full(scheme, lo, len, caps)?;
        let mut out = Vec::new();
        for c in full.cylinders(scheme) {
            out.push(representatives(scheme, &c, 0)?);
        }
        reps_at.insert(big_d, out.clone());
        Ok(out)
    };
    let agree_at = |n: i64, reps: &[Vec<Point>]| -> Result<bool> {
        for group in reps {
            let images: Vec<Point> = group
                .iter()
                .map(|p| flow.act_int(n, &State::Seq(p.clone())).map(|s| s.as_point().expect("sequence").clone()))
                .collect::<Result<_>>()?;
            if images.windows(2).any(|w| !agree_to_depth(scheme, &w[0], &w[1], d)) {
                return Ok(false);
            }
        }
        Ok(true)
    };
    for hp in 0..=h as i64 {
        loop {
            if cur > input_depth_max.max(d) {
                moduli.push(None);
                break;
            }
            let r = reps(cur)?;
            // Smaller |n| were verified at a coarser or equal depth already.
            let ok = if moduli.last().copied().flatten() == Some(cur) {
                agree_at(hp, &r)? && agree_at(-hp, &r)?
            } else {
                (-hp..=hp).try_fold(true, |acc, n| Ok::<bool, Error>(acc && agree_at(n, &r)?))?
            };
            if ok {
                moduli.push(Some(cur));
                break;
            }
            cur += 1;
        }
    }
    Ok(ModulusTable { depth: d, method: "cylinder-representatives".into(), moduli })
}

/// Circle stack: least `d'` such that each level within `2^{-d'}` of the unit
/// circle stays within `2^{-d}` of it, angle for angle, over `|k| ≤ H'`.
fn circle_table(flow: &FlowSystem, d: usize, h: usize, input_depth_max: usize) -> Result<ModulusTable> {
    let rule = flow.rule().expect("circles");
    let eps = |k: usize| Rational64::new(1, 1i64 << k.min(62));
    let target = eps(d);
    let zero = Rational64::from_integer(0);
    let level_ok = |n: u32, hp: i64| {
        let r = rule.r(Level::Finite(n));
        (1..=hp.min(*r.denom())).all(|k| arc(r * Rational64::from_integer(k), zero) <= target)
    };
    let search_max = input_depth_max.max(d) + 1;
    let mut moduli = Vec::with_capacity(h + 1);
    for hp in 0..=h as i64 {
        let mut found = None;
        for dp in d..=search_max {
            let mut n = 1u32;
            while rule.r(Level::Finite(n)) > eps(dp) {
                n += 1;
            }
            // Levels with H'·r_n ≤ 2^{-d} cannot drift far enough; check the rest exactly.
            let mut ok = true;
            while rule.r(Level::Finite(n)) * Rational64::from_integer(hp) > target {
                if !level_ok(n, hp) {
                    ok = false;
                    break;
                }
                n += 1;
            }
            if ok {
                found = Some(dp);
                break;
            }
        }
        moduli.push(found);
    }
    Ok(ModulusTable { depth: d, method: "circle-levels-against-limit".into(), moduli })
}

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Element, GroupSpec};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::verdict::{Status, Verdict};

/// Number of consecutive equal ball intersections that count as stabilization.
pub const STABILIZATION_REPEATS: usize = 3;

/// Closed-form description of a sequence `g_1, g_2, …`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SequenceDescriptor {
    /// `g_n = offset + n·step` coordinatewise (abelian groups only).
    Affine { offset: Vec<i64>, step: Vec<i64> },
    /// `g_n = elements[n - 1]`, in canonical text form.
    Explicit { elements: Vec<String> },
}

impl SequenceDescriptor {
    /// `g_n = n·v` for an integer vector `v` (one coordinate for `Z`).
    pub fn ray(v: &[i64]) -> Self {
        SequenceDescriptor::Affine { offset: vec![0; v.len()], step: v.to_vec() }
    }

    /// The `n`-th term, `n ≥ 1`; `None` past the end of an explicit list.
    pub fn term(&self, group: &GroupSpec, n: usize) -> Result<Option<Element>> {
        match self {
            SequenceDescriptor::Affine { offset, step } => {
                if offset.len() != step.len() {
                    return Err(Error::Invalid("affine offset and step differ in length".into()));
                }
                let coords: Vec<i64> = offset.iter().zip(step).map(|(o, s)| o + s * n as i64).collect();
                let g = match &group.identity() {
                    Element::Int(_) if coords.len() == 1 => Element::Int(coords[0]),
                    Element::Vector(v) if v.len() == coords.len() => Element::Vector(coords),
                    Element::Residues(m) if m.len() == coords.len() => {
                        let moduli = match group.descriptor() {
                            super::GroupDescriptor::DirectSumCyclic { moduli } => moduli.clone(),
                            _ => unreachable!(),
                        };
                        Element::Residues(
                            coords.iter().zip(&moduli).map(|(c, &md)| c.rem_euclid(md as i64) as u32).collect(),
                        )
                    }
                    _ => {
                        return Err(Error::Invalid(format!(
                            "affine descriptor does not fit {}",
                            group.name()
                        )))
                    }
                };
                Ok(Some(g))
            }
            SequenceDescriptor::Explicit { elements } => match elements.get(n.wrapping_sub(1)) {
                Some(text) if n >= 1 => Ok(Some(group.parse(text)?)),
                _ => Ok(None),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeStatus {
    Stabilized,
    Inconclusive,
}

/// `B_r ∩ C` for the cone `C` generated by a sequence, with the evidence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeApproximation {
    pub radius: usize,
    pub elements: BTreeSet<Element>,
    pub sequence: SequenceDescriptor,
    pub status: ConeStatus,
    /// First index `s` with `B_r∩K(g_s) = B_r∩K(g_{s+1}) = …` for the required repeats.
    pub stabilization_index: Option<usize>,
    pub repeats: usize,
    /// Last index examined.
    pub examined: usize,
}

impl ConeApproximation {
    pub fn is_stabilized(&self) -> bool {
        self.status == ConeStatus::Stabilized
    }
}

/// `B_r ∩ K(g)` computed as `{h ∈ B_r : |h·g⁻¹| ≤ |g| - 1}`.
pub(crate) fn ball_k_intersection(
    group: &GroupSpec,
    ball: &BTreeSet<Element>,
    g: &Element,
    len: usize,
    caps: &Caps,
) -> Result<BTreeSet<Element>> {
    let g_inv = group.inv(g);
    let mut out = BTreeSet::new();
    for h in ball {
        if group.length_at_most(&group.mul(h, &g_inv), len - 1, caps)? {
            out.insert(h.clone());
        }
    }
    Ok(out)
}

/// Approximate the cone of `sequence` inside `B_r`.
pub fn cone_approx(
    group: &GroupSpec,
    sequence: &SequenceDescriptor,
    r: usize,
    max_index: usize,
    caps: &Caps,
) -> Result<ConeApproximation> {
    let ball = group.ball(r, caps)?.elements;
    let mut prev_len: Option<usize> = None;
    let mut current: Option<BTreeSet<Element>> = None;
    let mut run_start = 0;
    let mut run = 0;
    let mut examined = 0;
    for n in 1..=max_index {
        let Some(g) = sequence.term(group, n)? else { break };
        let len = group.word_length(&g, caps)?;
        if len == 0 || prev_len.is_some_and(|p| len <= p) {
            return Err(Error::Precondition(format!(
                "sequence lengths must strictly increase; |g_{n}| = {len}"
            )));
        }
        prev_len = Some(len);
        examined = n;
        let inter = ball_k_intersection(group, &ball, &g, len, caps)?;
        if current.as_ref() == Some(&inter) {
            run += 1;
        } else {
            current = Some(inter);
            run_start = n;
            run = 1;
        }
        if run >= STABILIZATION_REPEATS {
            return Ok(ConeApproximation {
                radius: r,
                elements: current.expect("set above"),
                sequence: sequence.clone(),
                status: ConeStatus::Stabilized,
                stabilization_index: Some(run_start),
                repeats: STABILIZATION_REPEATS,
                examined,
            });
        }
    }
    Ok(ConeApproximation {
        radius: r,
        elements: current.unwrap_or_default(),
        sequence: sequence.clone(),
        status: ConeStatus::Inconclusive,
        stabilization_index: None,
        repeats: STABILIZATION_REPEATS,
        examined,
    })
}

/// Search for `t` with `K·t ⊆ set` for `K = B_p ∪ {e}`, trying `t ∈ Γ^{w-p}`.
///
/// Placing the full ball suffices for every finite `K ⊆ B_p`. The verdict is
/// relative to the window: `Fails` means no translate inside `Γ^w` exists.
pub fn is_thick_window(
    group: &GroupSpec,
    set: &dyn Fn(&Element) -> bool,
    probe_radius: usize,
    window: usize,
    caps: &Caps,
) -> Result<Verdict> {
    if probe_radius > window {
        return Err(Error::Precondition("probe radius exceeds the window".into()));
    }
    let base = Verdict::holds("thick")
        .param("probe_radius", probe_radius)
        .param("window", window);
    let k = match group.gamma_power(probe_radius, caps) {
        Ok(k) => k,
        Err(Error::Resource(msg)) => return Ok(inconclusive(base, msg)),
        Err(e) => return Err(e),
    };
    let candidates = match group.gamma_power(window - probe_radius, caps) {
        Ok(c) => c,
        Err(Error::Resource(msg)) => return Ok(inconclusive(base, msg)),
        Err(e) => return Err(e),
    };
    for t in &candidates {
        if k.iter().all(|h| set(&group.mul(h, t))) {
            return Ok(base.cert("t", group.render(t)).cert("t_length", group.word_length(t, caps)?));
        }
    }
    let k_text: Vec<String> = k.iter().map(|h| group.render(h)).collect();
    Ok(Verdict { status: Status::Fails, ..base }
        .cert("unplaceable_k", k_text)
        .cert("candidates_tried", candidates.len()))
}

/// Check `Γ^{w-k} ⊆ (Γ^k)⁻¹·set`, i.e. every `g` there has `k'` in `Γ^k` with `k'g ∈ set`.
pub fn is_syndetic_window(
    group: &GroupSpec,
    set: &dyn Fn(&Element) -> bool,
    k_radius: usize,
    window: usize,
    caps: &Caps,
) -> Result<Verdict> {
    if window < k_radius {
        return Err(Error::Precondition("window must be at least the K radius".into()));
    }
    let base = Verdict::holds("syndetic").param("k_radius", k_radius).param("window", window);
    let (targets, ks) = match (group.gamma_power(window - k_radius, caps), group.gamma_power(k_radius, caps)) {
        (Ok(t), Ok(k)) => (t, k),
        (Err(Error::Resource(msg)), _) | (_, Err(Error::Resource(msg))) => return Ok(inconclusive(base, msg)),
        (Err(e), _) | (_, Err(e)) => return Err(e),
    };
    for g in &targets {
        if !ks.iter().any(|k| set(&group.mul(k, g))) {
            return Ok(Verdict { status: Status::Fails, ..base }.cert("uncovered", group.render(g)));
        }
    }
    let mut v = base.cert("covered", targets.len());
    if group.is_integers() {
        if let Some(gap) = integer_gap(set, window as i64) {
            v = v.cert("gap", gap);
        }
    }
    Ok(v)
}

/// Largest distance between consecutive members of `set` inside `[-w, w]`.
pub(crate) fn integer_gap(set: &dyn Fn(&Element) -> bool, w: i64) -> Option<i64> {
    let members: Vec<i64> = (-w..=w).filter(|&n| set(&Element::Int(n))).collect();
    members.windows(2).map(|p| p[1] - p[0]).max()
}

/// For finite `F`, check that every `g` with `n ≤ |g| ≤ max_len` admits `t`
/// with `|t| = n` and `F·t ⊆ K(g)`; returns the first failing `g`.
pub fn k_set_translate_check(
    group: &GroupSpec,
    f: &BTreeSet<Element>,
    n: usize,
    max_len: usize,
    caps: &Caps,
) -> Result<Verdict> {
    let base = Verdict::holds("k_set_translate").param("n", n).param("max_len", max_len).param("f_size", f.len());
    let spheres = group.spheres(max_len, caps)?;
    let Some(t_sphere) = spheres.get(n) else {
        return Ok(Verdict { status: Status::Fails, ..base }.cert("empty_sphere", n));
    };
    let mut checked = 0usize;
    for (len, sphere) in spheres.iter().enumerate().skip(n.max(1)) {
        for g in sphere {
            let g_inv = group.inv(g);
            let mut found = None;
            for t in t_sphere {
                let mut ok = true;
                for h in f {
                    let x = group.mul(h, t);
                    if !group.length_at_most(&group.mul(&x, &g_inv), len - 1, caps)? {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    found = Some(t);
                    break;
                }
            }
            if found.is_none() {
                return Ok(Verdict { status: Status::Fails, ..base }.cert("g", group.render(g)));
            }
            checked += 1;
        }
    }
    Ok(base.cert("elements_checked", checked))
}

fn inconclusive(base: Verdict, msg: String) -> Verdict {
    Verdict { status: Status::Inconclusive, ..base }.cert("exhausted", msg)
}

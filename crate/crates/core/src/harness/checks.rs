use std::collections::BTreeSet;

use num_integer::Integer;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CheckContext, Fixture, Recorder, TheoremCheck};
use crate::analysis::{
    ap_verdict, equicontinuity_verdict, escape_length, invariant_core, orbit_cylinders, orbit_map_usc_verdict,
    orbit_relation_symmetry_verdict, pointwise_period, proximal_pair_verdict, recurrent_type1_general,
    recurrent_type1_verdict, recurrent_type2_verdict, regional_proximal_check, regular_ap_verdict, translate_cover,
    weak_rigidity_verdict, Escape, ProximalityWitness,
};
use crate::caps::Caps;
use crate::cantor::{depth_cylinder, ClopenSet, Cylinder, Point};
use crate::error::{Error, Result};
use crate::flows::{arc, b_letter, theta_letter, word, FlowSystem, Level, PointSpec, State, SystemSpec};
use crate::group::{
    all_subgroups, cone_approx, intersect_subgroups, is_normal, is_thick_window, k_set_translate_check, normal_core,
    psi_containment_check, psi_generates, subgroup_index, Element, GroupDescriptor, GroupSpec, SequenceDescriptor,
    Subgroup,
};
use crate::verdict::Verdict;

pub(super) static REGISTRY: &[TheoremCheck] = &[
    TheoremCheck {
        id: "THM-2.6a",
        statement: "For a flow of a compactly generated group on a zero-dimensional compact space, type I recurrence, \
                    type II recurrence, almost periodicity, symmetry of the orbit-closure relation and upper \
                    semicontinuity of the orbit-closure map are equivalent.",
        default_systems: &["odometer", "full-shift", "successor-map"],
        default_depths: &[1, 2, 3],
        default_horizons: &[64],
        run: thm_2_6a,
    },
    TheoremCheck {
        id: "THM-2.6b",
        statement: "For a compact open V whose invariant core V^inf is compact, V^inf is open exactly when no orbit \
                    closure of a point outside V^inf meets it.",
        default_systems: &["full-shift"],
        default_depths: &[1, 2, 3, 4],
        default_horizons: &[16],
        run: thm_2_6b,
    },
    TheoremCheck {
        id: "THM-B/3.1.1",
        statement: "On a zero-dimensional compact space with a compactly generated group, product type I recurrence, \
                    distality and equicontinuity coincide.",
        default_systems: &["odometer", "thue-morse"],
        default_depths: &[1, 2, 3],
        default_horizons: &[64],
        run: thm_b,
    },
    TheoremCheck {
        id: "THM-3.1.2",
        statement: "A distal flow on a compact space that is not connected has a non-trivial equicontinuous factor; \
                    the map to connected components is one.",
        default_systems: &["circle-stack"],
        default_depths: &[1, 2, 3],
        default_horizons: &[64],
        run: thm_3_1_2,
    },
    TheoremCheck {
        id: "THM-3.1.3",
        statement: "A distal flow whose orbit closures are zero-dimensional is pointwise regularly almost periodic.",
        default_systems: &["odometer", "successor-map", "full-shift"],
        default_depths: &[1, 2, 3],
        default_horizons: &[64],
        run: thm_3_1_3,
    },
    TheoremCheck {
        id: "THM-3.2.2",
        statement: "For a Z-action on a zero-dimensional compact space, weak rigidity, equicontinuity and regular \
                    almost periodicity are equivalent.",
        default_systems: &["odometer", "thue-morse", "full-shift"],
        default_depths: &[1, 2, 3],
        default_horizons: &[64],
        run: thm_3_2_2,
    },
    TheoremCheck {
        id: "THM-3.3.3",
        statement: "The successor map on the product of the Z/nZ is pointwise periodic with unbounded periods.",
        default_systems: &["successor-map", "circle-stack"],
        default_depths: &[2],
        default_horizons: &[64],
        run: thm_3_3_3,
    },
    TheoremCheck {
        id: "EX-3.1.5",
        statement: "In the two-copy flow every generator is an involution, b_i swaps xi_{i,+1} with xi_{i,-1} and fixes \
                    o_{-1}, and (o_{+1}, o_{-1}) is regionally proximal.",
        default_systems: &["two-copy(8)"],
        default_depths: &[8],
        default_horizons: &[8],
        run: ex_3_1_5,
    },
    TheoremCheck {
        id: "EX-3.1.6",
        statement: "In the McMahon flow the maps theta_i commute, square to the identity on the base, have order four, \
                    and ((o,1), (o,0)) is regionally proximal.",
        default_systems: &["mcmahon(8)"],
        default_depths: &[8],
        default_horizons: &[8],
        run: ex_3_1_6,
    },
    TheoremCheck {
        id: "LEM-1.5d",
        statement: "A finite intersection of finite-index subgroups has finite index bounded by the product of the \
                    indices, and the normal core of a finite-index subgroup is a finite-index normal subgroup.",
        default_systems: &[],
        default_depths: &[1],
        default_horizons: &[1],
        run: lem_1_5d,
    },
    TheoremCheck {
        id: "LEM-1.8a/COR-1.8b",
        statement: "If the group is Gamma S for a subgroup S, then Gamma^n intersected with S lies in Psi^n for \
                    Psi = Gamma^3 intersected with S; in particular Psi generates S.",
        default_systems: &[],
        default_depths: &[1],
        default_horizons: &[1],
        run: lem_1_8a,
    },
    TheoremCheck {
        id: "PROP-4.6",
        statement: "On Z, type I recurrence along the cones N and -N is two-sided Poisson stability, and a point that \
                    returns along N returns along every kN.",
        default_systems: &["odometer", "full-shift", "successor-map"],
        default_depths: &[1, 2, 3],
        default_horizons: &[200],
        run: prop_4_6,
    },
    TheoremCheck {
        id: "PROP-4.9",
        statement: "If a compact open U consists of almost periodic points, then GU = KU for a finite set K.",
        default_systems: &["odometer", "full-shift"],
        default_depths: &[1, 2, 3, 4, 5],
        default_horizons: &[64],
        run: prop_4_9,
    },
    TheoremCheck {
        id: "LEM-2.1c/2.1d",
        statement: "Cones are thick, and for finite F inside Gamma^r every long enough g admits t with |t| = r + 1 and \
                    F t inside K(g).",
        default_systems: &[],
        default_depths: &[1],
        default_horizons: &[1],
        run: lem_2_1cd,
    },
];

/// Equicontinuity is probed with inputs up to this depth on sequence spaces.
const INPUT_DEPTH_MAX: usize = 32;

fn depth_set(flow: &FlowSystem, x: &State, d: usize, caps: &Caps) -> Result<ClopenSet> {
    let p = x.as_point().ok_or_else(|| Error::Precondition("sequence point expected".into()))?;
    ClopenSet::depth(flow.scheme_or_err()?, p, d, caps)
}

/// Fixtures that are `Z`-flows on a sequence space; the others get a finding.
fn z_sequence_fixtures<'a>(cx: &'a CheckContext, rec: &mut Recorder) -> Vec<&'a Fixture> {
    let mut out = Vec::new();
    for fx in &cx.fixtures {
        if fx.flow.is_z_flow() && fx.flow.scheme().is_some() {
            out.push(fx);
        } else {
            rec.finding(format!("{}: skipped, this check needs a Z-flow on a sequence space", fx.id()));
        }
    }
    out
}

/// The depth-`d` itinerary of `x` is known exactly within the horizon.
fn exact(flow: &FlowSystem, x: &State, d: usize, h: usize) -> bool {
    flow.is_z_flow() && flow.period_certificate(x, d).is_some_and(|c| c.threshold + 2 * c.period <= h as u64)
}

fn certified(flow: &FlowSystem, x: &State, d: usize) -> bool {
    flow.is_z_flow() && flow.period_certificate(x, d).is_some()
}

fn reaches(flow: &FlowSystem, from: &State, to: &State, d: usize, h: usize, caps: &Caps) -> Result<bool> {
    for (_, y) in flow.orbit_segment(from, h, caps)? {
        if flow.within(&y, to, d)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn flag(analyzer: &str, ok: bool) -> Verdict {
    if ok {
        Verdict::holds(analyzer)
    } else {
        Verdict::fails(analyzer)
    }
}

/// Summarize which predicates of a fixture failed, from record `start` on.
fn summarize(rec: &mut Recorder, system: &str, start: usize) {
    let mut failed = BTreeSet::new();
    let mut inconclusive = 0;
    for i in start..rec.len() {
        let v = rec.verdict(i);
        if v.is_fails() {
            failed.insert(v.analyzer.clone());
        } else if v.is_inconclusive() {
            inconclusive += 1;
        }
    }
    let text = if failed.is_empty() && inconclusive == 0 {
        format!("{system}: every predicate holds on every sample")
    } else if failed.is_empty() {
        format!("{system}: no failures, {inconclusive} inconclusive")
    } else {
        let list: Vec<String> = failed.into_iter().collect();
        format!("{system}: certified failures of {}", list.join(", "))
    };
    rec.finding(text);
}

fn thm_2_6a(cx: &CheckContext, rec: &mut Recorder) -> Result<()> {
    rec.class(&["recurrent-type1", "recurrent-type2", "ap", "orbit-relation-symmetry", "orbit-map-usc"]);
    rec.assert_meta("the acting group is compactly generated and the phase space is zero-dimensional and compact");
    for fx in z_sequence_fixtures(cx, rec) {
        let flow = &fx.flow;
        let sys = flow.id();
        let start = rec.len();
        for &d in &cx.grid.depths {
            for &h in &cx.grid.horizons {
                let mut pairs = Vec::new();
                for (label, x) in &fx.points {
                    let subject = format!("{label} d={d} H={h}");
                    let u = depth_set(flow, x, d, &cx.caps)?;
                    let ap = rec.add("ap", sys, &subject, true, ap_verdict(flow, x, &u, h, &cx.caps)?);
                    let t2 = recurrent_type2_verdict(flow, x, d, None, h, &cx.caps)?;
                    let t2 = rec.add("recurrent-type2", sys, &subject, true, t2);
                    let t1 = rec.add("recurrent-type1", sys, &subject, true, recurrent_type1_verdict(flow, x, d, h)?);
                    let usc = orbit_map_usc_verdict(flow, x, d, h, d + 4, &cx.caps)?;
                    rec.add("orbit-map-usc", sys, &subject, true, usc);
                    rec.implies(ap, t2, "an almost periodic point is recurrent of type II");
                    rec.implies(t2, t1, "type II recurrence implies type I recurrence");
                    rec.implies(ap, t1, "an almost periodic point is recurrent of type I");
                    pairs.push((x.clone(), flow.act_int(3, x)?));
                    for (_, y) in &fx.points {
                        if y != x && reaches(flow, x, y, d, h, &cx.caps)? {
                            pairs.push((x.clone(), y.clone()));
                        }
                    }
                }
                let v = orbit_relation_symmetry_verdict(flow, &pairs, d, h, &cx.caps)?;
                rec.add("orbit-relation-symmetry", sys, format!("{} pairs d={d} H={h}", pairs.len()), true, v);
            }
        }
        summarize(rec, sys, start);
    }
    Ok(())
}

fn thm_2_6b(cx: &CheckContext, rec: &mut Recorder) -> Result<()> {
    for fx in z_sequence_fixtures(cx, rec) {
        let flow = &fx.flow;
        let sys = flow.id();
        if !matches!(flow.spec(), SystemSpec::FullShift { .. }) {
            rec.finding(format!("{sys}: skipped, the V = [0 at 0] instance is set up for full shifts"));
            continue;
        }
        let scheme = flow.scheme_or_err()?;
        let v = ClopenSet::from_cylinder(scheme, &Cylinder::new(scheme, None, 0, vec![0])?, &cx.caps)?;
        let zero = Point::constant(scheme, 0, 0)?;
        rec.assert_meta(format!("{sys}: V = [0 at 0] is compact open and V^inf = {{0^inf}} is compact"));
        for &d in &cx.grid.depths {
            for &h in &cx.grid.horizons {
                let subject = format!("V=[0 at 0] d={d} H={h}");
                let zc = depth_cylinder(scheme, &zero, d)?;
                let core = invariant_core(flow, &v, d, h, &cx.caps)?;
                let outer_ok = core.outer.len() == 1 && core.outer[0] == zc;
                let outer = if outer_ok {
                    Verdict::holds("core-outer-is-zero-cylinder")
                } else {
                    Verdict::inconclusive("core-outer-is-zero-cylinder", "outer approximation wider than the zero cylinder")
                }
                .cert("outer", core.outer.len())
                .cert("inner", core.inner.len());
                rec.add("core-outer-is-zero-cylinder", sys, &subject, true, outer);

                let witness = PointSpec::SingleOne { at: d as i64 }.build(flow)?;
                let open = match escape_length(flow, &witness, &v, h, &cx.caps)? {
                    Escape::Finite { length, element } => Verdict::fails("v-infinity-open")
                        .cert("witness", witness.to_string())
                        .cert("escape_length", length)
                        .cert("element", flow.render(&element))
                        .cert("scope", "the depth-d neighbourhood of 0^inf is not inside V^inf"),
                    Escape::InfiniteWithin { .. } => Verdict::inconclusive("v-infinity-open", "witness never escaped V"),
                };
                let open = rec.add("v-infinity-open", sys, &subject, true, open);

                let outside = PointSpec::SingleOne { at: 0 }.build(flow)?;
                let oc = orbit_cylinders(flow, &outside, d, h, &cx.caps)?;
                let meets = if oc.cylinders.contains(&zc) {
                    Verdict::holds("closure-meets-core").cert("point", outside.to_string()).cert("cylinder", zc.to_string())
                } else {
                    Verdict::inconclusive("closure-meets-core", "orbit segment missed the zero cylinder")
                };
                let meets = rec.add("closure-meets-core", sys, &subject, true, meets);
                rec.excludes(open, meets, "if V^inf is open, no orbit closure from outside V^inf meets it");
            }
        }
    }
    Ok(())
}

/// Sample pairs for distality probes: distinct sample points, plus each binary
/// window-limited point against its copy with the negative half complemented.
fn distal_pairs(fx: &Fixture) -> Result<Vec<(String, State, State)>> {
    let flow = &fx.flow;
    let mut out = Vec::new();
    for (i, (la, a)) in fx.points.iter().enumerate() {
        for (lb, b) in &fx.points[i + 1..] {
            out.push((format!("({la}, {lb})"), a.clone(), b.clone()));
        }
        let binary = flow.scheme().is_some_and(|s| s.size(0) == 2);
        if let (true, true, Some(p)) = (flow.window_limited(), binary, a.as_point()) {
            let start = p.window_start();
            let window: Vec<u32> =
                p.window().iter().enumerate().map(|(k, &s)| if start + (k as i64) < 0 { 1 - s } else { s }).collect();
            let left: Vec<u32> = p.left().iter().map(|s| 1 - s).collect();
            let spec = PointSpec::General { window_start: start, window, left, right: p.right().to_vec(), sheet: p.sheet() };
            if let Ok(b) = spec.build(flow) {
                out.push((format!("({la}, {la} with left half complemented)"), a.clone(), b));
            }
        }
    }
    Ok(out)
}

fn thm_b(cx: &CheckContext, rec: &mut Recorder) -> Result<()> {
    rec.assert_meta("product type I recurrence is not certified directly; distality is probed through proximal pairs");
    for fx in z_sequence_fixtures(cx, rec) {
        let flow = &fx.flow;
        let sys = flow.id();
        let start = rec.len();
        let pairs = distal_pairs(fx)?;
        for &d in &cx.grid.depths {
            for &h in &cx.grid.horizons {
                let eq = equicontinuity_verdict(flow, d, h, INPUT_DEPTH_MAX, &cx.caps)?;
                let probe = eq.cert_u64("modulus").map_or(d + 2, |m| (m as usize).max(d));
                let eqi = rec.add("equicontinuity", sys, format!("d={d} H={h}"), true, eq);
                for (label, x, y) in &pairs {
                    let v = proximal_pair_verdict(flow, x, y, probe, h, &cx.caps)?;
                    let pi = rec.add("proximal-pair", sys, format!("{label} depth={probe} H={h}"), true, v);
                    if !flow.within(x, y, d)? {
                        rec.excludes(eqi, pi, "an equicontinuous flow cannot bring a pair that is 2^-d apart within its modulus");
                    }
                }
            }
        }
        summarize(rec, sys, start);
    }
    Ok(())
}

fn thm_3_1_2(cx: &CheckContext, rec: &mut Recorder) -> Result<()> {
    for fx in &cx.fixtures {
        let flow = &fx.flow;
        let sys = flow.id();
        if !flow.is_circle_stack() {
            rec.finding(format!("{sys}: skipped, the component factor is built for circle stacks"));
            continue;
        }
        rec.assert_meta(format!(
            "{sys}: compact, not connected, and distal because each level map is an isometry of its circle"
        ));
        let factor = flow.component_projection()?;
        let h = cx.grid.max_horizon() as i64;
        let mut levels: Vec<State> = Vec::new();
        let mut equivariant = true;
        for (_, x) in &fx.points {
            let px = flow.project(x)?;
            if !levels.contains(&px) {
                levels.push(px.clone());
            }
            for n in -h..=h {
                equivariant &= factor.act_int(n, &px)? == flow.project(&flow.act_int(n, x)?)?;
            }
        }
        let nontrivial = if levels.len() >= 2 {
            Verdict::holds("factor-nontrivial").cert("levels_seen", levels.len())
        } else {
            Verdict::inconclusive("factor-nontrivial", "sample points share one level")
        };
        let p = rec.add("factor-nontrivial", sys, factor.id(), true, nontrivial);
        rec.claim(p, "the component factor is non-trivial");
        let e = rec.add("factor-equivariant", sys, format!("{} points, |n| <= {h}", fx.points.len()), true, flag("factor-equivariant", equivariant));
        rec.claim(e, "projection to components commutes with the action");
        for &d in &cx.grid.depths {
            for &hh in &cx.grid.horizons {
                let v = equicontinuity_verdict(&factor, d, hh, d + 1, &cx.caps)?;
                let q = rec.add("equicontinuity", factor.id(), format!("d={d} H={hh}"), true, v);
                rec.claim(q, "the component factor is equicontinuous");
            }
        }
        let own = equicontinuity_verdict(flow, 2, 64, 6, &cx.caps)?;
        rec.add("equicontinuity", sys, "the stack itself, d=2 H=64", false, own);
        rec.finding(format!("{sys}: the stack is not equicontinuous near the limit circle, its component factor is"));
    }
    Ok(())
}

fn thm_3_1_3(cx: &CheckContext, rec: &mut Recorder) -> Result<()> {
    rec.assert_meta("equicontinuity is used as the certificate of distality");
    for fx in z_sequence_fixtures(cx, rec) {
        let flow = &fx.flow;
        let sys = flow.id();
        let start = rec.len();
        for &d in &cx.grid.depths {
            for &h in &cx.grid.horizons {
                let eq = equicontinuity_verdict(flow, d, h, INPUT_DEPTH_MAX, &cx.caps)?;
                let eqi = rec.add("equicontinuity", sys, format!("d={d} H={h}"), true, eq);
                let hyp = rec.verdict(eqi).is_holds();
                for (label, x) in &fx.points {
                    let u = depth_set(flow, x, d, &cx.caps)?;
                    let required = hyp && certified(flow, x, d);
                    let r = rec.add("regular-ap", sys, format!("{label} d={d} H={h}"), required, regular_ap_verdict(flow, x, &u, h)?);
                    rec.implies(eqi, r, "distal flows with zero-dimensional orbit closures are pointwise regularly almost periodic");
                }
            }
        }
        summarize(rec, sys, start);
    }
    Ok(())
}

fn thm_3_2_2(cx: &CheckContext, rec: &mut Recorder) -> Result<()> {
    rec.class(&["equicontinuity", "weak-rigidity", "regular-ap"]);
    for fx in z_sequence_fixtures(cx, rec) {
        let flow = &fx.flow;
        let sys = flow.id();
        let start = rec.len();
        let points: Vec<State> = fx.points.iter().map(|(_, x)| x.clone()).collect();
        for &d in &cx.grid.depths {
            for &h in &cx.grid.horizons {
                let eq = equicontinuity_verdict(flow, d, h, INPUT_DEPTH_MAX, &cx.caps)?;
                let eqi = rec.add("equicontinuity", sys, format!("d={d} H={h}"), true, eq);
                let all_certified = points.iter().all(|x| certified(flow, x, d));
                let wr = weak_rigidity_verdict(flow, &points, d, h)?;
                let wri = rec.add("weak-rigidity", sys, format!("{} points d={d} H={h}", points.len()), all_certified, wr);
                rec.implies(eqi, wri, "equicontinuity implies weak rigidity");
                for (label, x) in &fx.points {
                    let u = depth_set(flow, x, d, &cx.caps)?;
                    let v = regular_ap_verdict(flow, x, &u, h)?;
                    let ri = rec.add("regular-ap", sys, format!("{label} d={d} H={h}"), certified(flow, x, d), v);
                    rec.implies(eqi, ri, "equicontinuity implies regular almost periodicity");
                }
            }
        }
        summarize(rec, sys, start);
    }
    Ok(())
}

/// Period of the successor map at a point whose first nonzero coordinate is `k`.
fn successor_period_oracle(k: i64) -> u64 {
    k as u64 + 1
}

fn thm_3_3_3(cx: &CheckContext, rec: &mut Recorder) -> Result<()> {
    for fx in &cx.fixtures {
        let flow = &fx.flow;
        let sys = flow.id();
        match flow.spec() {
            SystemSpec::SuccessorMap => successor_checks(cx, rec, fx)?,
            SystemSpec::CircleStack { .. } => circle_contrast(cx, rec, fx)?,
            _ => rec.finding(format!("{sys}: skipped, not a successor map or circle stack")),
        }
    }
    Ok(())
}

fn successor_checks(cx: &CheckContext, rec: &mut Recorder, fx: &Fixture) -> Result<()> {
    let flow = &fx.flow;
    let sys = flow.id();
    let mut rng = ChaCha8Rng::seed_from_u64(cx.seed);
    let mut rows = Vec::new();
    let mut all_match = true;
    let mut bands = [0u64; 4];
    for _ in 0..50 {
        let k: i64 = rng.gen_range(2..=17);
        let mut symbols = vec![rng.gen_range(1..k as u32)];
        for i in 1..=rng.gen_range(0..4i64) {
            symbols.push(rng.gen_range(0..(k + i) as u32));
        }
        let x = PointSpec::Finite { lo: k, symbols: symbols.clone(), fill: 0, sheet: 0 }.build(flow)?;
        let predicted = successor_period_oracle(k);
        let got = pointwise_period(flow, &x, 4 * predicted)?;
        all_match &= got == Some(predicted);
        let band = (((k - 2) / 4) as usize).min(3);
        bands[band] = bands[band].max(got.unwrap_or(0));
        rows.push(serde_json::json!({ "first_nonzero": k, "symbols": symbols, "predicted": predicted, "period": got }));
    }
    let zero = PointSpec::Constant { symbol: 0, sheet: 0 }.build(flow)?;
    let zero_period = pointwise_period(flow, &zero, 4)?;
    all_match &= zero_period == Some(1);
    let v = flag("pointwise-period", all_match).param("seed", cx.seed).cert("zero_period", zero_period).cert("samples", rows);
    let p = rec.add("pointwise-period", sys, "50 seeded points and the zero point", true, v);
    rec.claim(p, "every point of the successor map is periodic with the predicted period");

    let increasing = bands.windows(2).all(|w| w[0] < w[1]) && bands[3] >= 12;
    let growth = if increasing {
        Verdict::holds("period-growth")
    } else {
        Verdict::inconclusive("period-growth", "samples did not cover every band")
    }
    .cert("band_maxima", bands.to_vec());
    rec.add("period-growth", sys, "maximum period per band of first nonzero coordinate", true, growth);

    for &d in &cx.grid.depths {
        for &h in &cx.grid.horizons {
            let eq = equicontinuity_verdict(flow, d, h, INPUT_DEPTH_MAX, &cx.caps)?;
            rec.add("equicontinuity", sys, format!("d={d} H={h}"), true, eq);
        }
    }
    Ok(())
}

fn circle_contrast(cx: &CheckContext, rec: &mut Recorder, fx: &Fixture) -> Result<()> {
    let flow = &fx.flow;
    let sys = flow.id();
    let rule = flow.rule().expect("circle stack");
    let mut rows = Vec::new();
    let mut all_match = true;
    for n in 1..=20u32 {
        let q = n as i64 + rule.offset;
        let predicted = (q / num_integer::gcd(rule.numerator, q)) as u64;
        let x = PointSpec::Circle { level: n, angle: (0, 1) }.build(flow)?;
        let got = pointwise_period(flow, &x, 4 * predicted)?;
        all_match &= got == Some(predicted);
        rows.push(serde_json::json!({ "level": n, "predicted": predicted, "period": got }));
    }
    let p = rec.add("level-period", sys, "levels 1..=20", true, flag("level-period", all_match).cert("levels", rows));
    rec.claim(p, "each level is periodic with the reduced denominator of its rotation");

    // Points on level n approach the limit circle, which is fixed, yet some iterate moves them a quarter turn.
    let quarter = Rational64::new(1, 4);
    let mut defects = Vec::new();
    for n in 1..=20u32 {
        let r = rule.r(Level::Finite(n));
        let k = (1..=*r.denom()).find(|&k| arc(r * Rational64::from_integer(k), Rational64::from_integer(0)) >= quarter);
        defects.push(serde_json::json!({ "level": n, "iterate": k }));
    }
    let defect = defects.iter().all(|row| !row["iterate"].is_null());
    let v = flag("limit-defect", defect).cert("levels", defects);
    rec.add("limit-defect", sys, "a quarter-turn iterate on each level 1..=20", true, v);
    let eq = equicontinuity_verdict(flow, 2, cx.grid.max_horizon().max(64), 6, &cx.caps)?;
    rec.add("equicontinuity", sys, "d=2 H=64", true, eq);
    rec.finding(format!("{sys}: pointwise periodic with unbounded periods, yet not equicontinuous on a connected-component limit"));
    Ok(())
}

/// All finite points of a sheeted sequence space supported on `[-4, 3]`.
fn window_points(flow: &FlowSystem) -> Result<Vec<State>> {
    let scheme = flow.scheme_or_err()?;
    let sheets = scheme.sheets;
    let mut out = Vec::new();
    for sheet in 0..sheets {
        for bits in 0u32..256 {
            let symbols: Vec<u32> = (0..8).map(|k| (bits >> k) & 1).collect();
            out.push(State::Seq(Point::finite(scheme, -4, symbols, 0, sheet)?));
        }
    }
    Ok(out)
}

fn ex_3_1_5(cx: &CheckContext, rec: &mut Recorder) -> Result<()> {
    for fx in &cx.fixtures {
        let flow = &fx.flow;
        let sys = flow.id();
        let (SystemSpec::TwoCopy { m }, Some(_)) = (flow.spec(), flow.scheme()) else {
            rec.finding(format!("{sys}: skipped, not a two-copy flow"));
            continue;
        };
        let m = *m;
        rec.assert_meta(format!("{sys}: truncated to e_j with |j| <= {m} and b_i with i <= {m}, so the group is finitely generated"));
        let pts = window_points(flow)?;
        let rank = 3 * m as i32 + 1;
        let mut bad = None;
        'outer: for l in 1..=rank {
            let g = word(&[l, l]);
            for x in &pts {
                if flow.act(&g, x)? != *x {
                    bad = Some(format!("letter {l} at {x}"));
                    break 'outer;
                }
            }
        }
        let v = match &bad {
            None => Verdict::holds("involutions"),
            Some(b) => Verdict::fails("involutions").cert("counterexample", b),
        }
        .cert("points", pts.len())
        .cert("letters", rank);
        let p = rec.add("involutions", sys, "every generator squared on [-4,3] windows, both sheets", true, v);
        rec.claim(p, "every generator of the two-copy flow is an involution");

        let o_minus = PointSpec::Constant { symbol: 0, sheet: 1 }.build(flow)?;
        let mut swaps = true;
        let mut fixes = true;
        for i in 1..=m {
            let b = word(&[b_letter(m, i)?]);
            let xi_plus = PointSpec::Xi { i, sheet: 0 }.build(flow)?;
            let xi_minus = PointSpec::Xi { i, sheet: 1 }.build(flow)?;
            swaps &= flow.act(&b, &xi_plus)? == xi_minus;
            fixes &= flow.act(&b, &o_minus)? == o_minus;
        }
        let p = rec.add("b-swaps-xi", sys, format!("i = 1..={m}"), true, flag("b-swaps-xi", swaps));
        rec.claim(p, "b_i maps xi_{i,+1} to xi_{i,-1}");
        let p = rec.add("b-fixes-o", sys, format!("i = 1..={m}"), true, flag("b-fixes-o", fixes));
        rec.claim(p, "b_i fixes o_{-1}");

        let w = ProximalityWitness::two_copy(flow)?;
        let rates = w.entries.iter().try_fold(true, |acc, e| -> Result<bool> {
            let j = e.j as usize + 1;
            let gx = flow.act(&e.g_j, &e.x_j)?;
            let gy = flow.act(&e.g_j, &e.y_j)?;
            Ok(acc && flow.within(&e.x_j, &w.x, j)? && flow.within(&e.y_j, &w.y, j)? && flow.within(&gx, &gy, j)?)
        })?;
        let p = rec.add("witness-rates", sys, "every distance at most 2^-(j+1)", true, flag("witness-rates", rates));
        rec.claim(p, "the two-copy witness converges at rate 2^-(j+1)");
        for &d in &cx.grid.depths {
            let depth = d.min(m as usize);
            let v = regional_proximal_check(flow, &w, depth)?;
            let p = rec.add("regional-proximal", sys, format!("(o_+1, o_-1) depth={depth}"), true, v);
            rec.claim(p, "(o_{+1}, o_{-1}) is regionally proximal");
        }
    }
    Ok(())
}

fn ex_3_1_6(cx: &CheckContext, rec: &mut Recorder) -> Result<()> {
    for fx in &cx.fixtures {
        let flow = &fx.flow;
        let sys = flow.id();
        let (SystemSpec::Mcmahon { m }, Some(_)) = (flow.spec(), flow.scheme()) else {
            rec.finding(format!("{sys}: skipped, not a McMahon flow"));
            continue;
        };
        let m = *m as i64;
        rec.assert_meta(format!(
            "{sys}: the full group is not compactly generated; the truncation keeps theta_k for |k| <= {m}"
        ));
        let pts = window_points(flow)?;
        let letters: Vec<(i64, i32)> = (-m..=m).map(|k| Ok((k, theta_letter(m as u32, k)?))).collect::<Result<_>>()?;
        let mut commute = None;
        let mut square = None;
        let mut fourth = None;
        for x in &pts {
            for &(i, li) in &letters {
                let sq = flow.act(&word(&[li, li]), x)?;
                let base_ok = match (sq.as_point(), x.as_point()) {
                    (Some(a), Some(b)) => a.with_sheet(0) == b.with_sheet(0),
                    _ => false,
                };
                if !base_ok && square.is_none() {
                    square = Some(format!("theta_{i} at {x}"));
                }
                if flow.act(&word(&[li, li, li, li]), x)? != *x && fourth.is_none() {
                    fourth = Some(format!("theta_{i} at {x}"));
                }
                for &(j, lj) in &letters {
                    if j <= i || commute.is_some() {
                        continue;
                    }
                    if flow.act(&word(&[li, lj]), x)? != flow.act(&word(&[lj, li]), x)? {
                        commute = Some(format!("theta_{i}, theta_{j} at {x}"));
                    }
                }
            }
        }
        let scope = format!("|i|, |j| <= {m} on {} window points", pts.len());
        for (id, found, claim) in [
            ("theta-commute", commute, "the theta maps commute"),
            ("theta-square-on-base", square, "theta_i squared is the identity on the base"),
            ("theta-order-four", fourth, "theta_i has order dividing four"),
        ] {
            let v = match found {
                None => Verdict::holds(id),
                Some(c) => Verdict::fails(id).cert("counterexample", c),
            };
            let p = rec.add(id, sys, &scope, true, v);
            rec.claim(p, claim);
        }

        let w = ProximalityWitness::mcmahon(flow)?;
        let rates = w.entries.iter().try_fold(true, |acc, e| -> Result<bool> {
            let j = e.j as usize;
            let gx = flow.act(&e.g_j, &e.x_j)?;
            let gy = flow.act(&e.g_j, &e.y_j)?;
            Ok(acc && flow.within(&e.x_j, &w.x, j)? && flow.within(&e.y_j, &w.y, j + 1)? && flow.within(&gx, &gy, j)?)
        })?;
        let p = rec.add("witness-rates", sys, "distances at most 2^-j, 2^-(j+1), 2^-j", true, flag("witness-rates", rates));
        rec.claim(p, "the McMahon witness converges at the stated rates");
        for &d in &cx.grid.depths {
            let depth = d.min(m as usize);
            let v = regional_proximal_check(flow, &w, depth)?;
            let p = rec.add("regional-proximal", sys, format!("((o,1), (o,0)) depth={depth}"), true, v);
            rec.claim(p, "((o,1), (o,0)) is regionally proximal");
        }
    }
    Ok(())
}

/// Elements used to compare subgroups: the whole group when finite, else a ball.
fn probe_elements(group: &GroupSpec, caps: &Caps) -> Result<BTreeSet<Element>> {
    let r = match group.finite() {
        Some(fg) => fg.order(),
        None if group.is_integers() => 12,
        None => 8,
    };
    Ok(group.ball(r, caps)?.elements)
}

fn subset_on(probe: &BTreeSet<Element>, a: &Subgroup, b: &Subgroup) -> bool {
    probe.iter().all(|g| !a.contains(g) || b.contains(g))
}

fn lem_1_5d(cx: &CheckContext, rec: &mut Recorder) -> Result<()> {
    let mut groups: Vec<(GroupSpec, Vec<Subgroup>)> = Vec::new();
    for desc in [GroupDescriptor::Symmetric { degree: 3 }, GroupDescriptor::Symmetric { degree: 4 }, GroupDescriptor::Dihedral { n: 4 }] {
        let g = GroupSpec::new(desc)?;
        let subs = all_subgroups(&g)?;
        groups.push((g, subs));
    }
    groups.push((GroupSpec::integers(), (1..=8).map(|kappa| Subgroup::Multiples { kappa }).collect()));
    let lattices: Vec<Vec<Vec<i64>>> = vec![
        vec![vec![1, 0], vec![0, 1]],
        vec![vec![2, 0], vec![0, 1]],
        vec![vec![1, 0], vec![0, 3]],
        vec![vec![2, 1], vec![0, 2]],
        vec![vec![3, 0], vec![1, 2]],
        vec![vec![1, 1], vec![1, -1]],
    ];
    groups.push((GroupSpec::lattice(2), lattices.into_iter().map(|basis| Subgroup::Sublattice { basis }).collect()));

    for (group, subs) in &groups {
        let name = group.name();
        let probe = probe_elements(group, &cx.caps)?;
        let mut pairs = 0usize;
        let mut inter_bad = None;
        for (i, a) in subs.iter().enumerate() {
            for b in &subs[i..] {
                pairs += 1;
                let c = intersect_subgroups(group, &[a.clone(), b.clone()])?;
                let (ia, ib, ic) = (subgroup_index(group, a)?, subgroup_index(group, b)?, subgroup_index(group, &c)?);
                let both = probe.iter().all(|g| c.contains(g) == (a.contains(g) && b.contains(g)));
                if (ic > ia * ib || !both) && inter_bad.is_none() {
                    inter_bad = Some(format!("{} and {}", a.describe(group), b.describe(group)));
                }
            }
        }
        let v = match inter_bad {
            None => Verdict::holds("intersection-index"),
            Some(c) => Verdict::fails("intersection-index").cert("counterexample", c),
        }
        .cert("pairs", pairs);
        let p = rec.add("intersection-index", &name, format!("{} subgroups", subs.len()), true, v);
        rec.claim(p, "the intersection of two finite-index subgroups has index at most the product");

        let mut core_bad = None;
        for a in subs {
            let core = normal_core(group, a)?;
            let ok = is_normal(group, &core)? && subset_on(&probe, &core, a) && subgroup_index(group, &core).is_ok();
            if !ok && core_bad.is_none() {
                core_bad = Some(a.describe(group));
            }
        }
        let v = match core_bad {
            None => Verdict::holds("normal-core"),
            Some(c) => Verdict::fails("normal-core").cert("counterexample", c),
        };
        let p = rec.add("normal-core", &name, format!("{} subgroups", subs.len()), true, v);
        rec.claim(p, "the normal core is a finite-index normal subgroup inside A");
    }
    Ok(())
}

/// `Gamma S` covers the probe elements: each `g` has `gamma` in `Gamma` with `gamma^{-1} g` in `S`.
fn covers(group: &GroupSpec, s: &Subgroup, caps: &Caps) -> Result<Verdict> {
    let gamma = group.gamma_power(1, caps)?;
    let probe = probe_elements(group, caps)?;
    let s = s.canonical(group)?;
    for g in &probe {
        if !gamma.iter().any(|t| s.contains(&group.mul(&group.inv(t), g))) {
            return Ok(Verdict::fails("gamma-s-covers").cert("uncovered", group.render(g)));
        }
    }
    Ok(Verdict::holds("gamma-s-covers").cert("probe_elements", probe.len()))
}

fn lem_1_8a(cx: &CheckContext, rec: &mut Recorder) -> Result<()> {
    let mut cases: Vec<(GroupSpec, Subgroup, usize)> = vec![
        (GroupSpec::integers(), Subgroup::Multiples { kappa: 2 }, 50),
        (GroupSpec::integers(), Subgroup::Multiples { kappa: 3 }, 50),
        (GroupSpec::lattice(2), Subgroup::Sublattice { basis: vec![vec![2, 0], vec![0, 1]] }, 10),
    ];
    let s3 = GroupSpec::new(GroupDescriptor::Symmetric { degree: 3 })?;
    for s in all_subgroups(&s3)? {
        cases.push((s3.clone(), s, 6));
    }
    for (group, s, r) in &cases {
        let name = group.name();
        let subject = s.describe(group);
        let hyp = rec.add("gamma-s-covers", &name, &subject, true, covers(group, s, &cx.caps)?);
        let required = rec.verdict(hyp).is_holds();
        let n_max = if group.finite().is_some() { 6 } else { 12 };
        let c = rec.add("psi-containment", &name, &subject, required, psi_containment_check(group, s, n_max, &cx.caps)?);
        let g = rec.add("psi-generates", &name, &subject, required, psi_generates(group, s, *r, &cx.caps)?);
        rec.implies(hyp, c, "Gamma^n intersected with S lies in Psi^n");
        rec.implies(hyp, g, "Psi generates S");
    }
    Ok(())
}

fn prop_4_6(cx: &CheckContext, rec: &mut Recorder) -> Result<()> {
    let z = GroupSpec::integers();
    let mut classified = true;
    let mut rows = Vec::new();
    for step in [1i64, 2, 3, -1, -2, -3] {
        for r in [10usize, 25, 50] {
            let cone = cone_approx(&z, &SequenceDescriptor::ray(&[step]), r, 400, &cx.caps)?;
            let expected: BTreeSet<Element> = (1..=r as i64).map(|n| Element::Int(n * step.signum())).collect();
            let ok = cone.is_stabilized() && cone.elements == expected;
            classified &= ok;
            rows.push(serde_json::json!({ "step": step, "radius": r, "matches": ok }));
        }
    }
    let p = rec.add("cone-classification", "Z", "rays of step +-1, +-2, +-3", true, flag("cone-classification", classified).cert("rays", rows));
    rec.claim(p, "every cone of Z is N or -N");

    for fx in z_sequence_fixtures(cx, rec) {
        let flow = &fx.flow;
        let sys = flow.id();
        let start = rec.len();
        for &d in &cx.grid.depths {
            for &h in &cx.grid.horizons {
                let cones = [
                    cone_approx(&z, &SequenceDescriptor::ray(&[1]), h, 4 * h, &cx.caps)?,
                    cone_approx(&z, &SequenceDescriptor::ray(&[-1]), h, 4 * h, &cx.caps)?,
                ];
                for (label, x) in &fx.points {
                    let subject = format!("{label} d={d} H={h}");
                    let t1 = rec.add("recurrent-type1", sys, &subject, true, recurrent_type1_verdict(flow, x, d, h)?);
                    let g = rec.add("recurrent-type1-general", sys, &subject, true, recurrent_type1_general(flow, x, d, &cones)?);
                    rec.equivalent(t1, g, "type I recurrence on Z is returns along N and along -N");

                    let forward = (1..=h as i64).map(|n| Ok((n, flow.within(&flow.act_int(n, x)?, x, d)?))).collect::<Result<Vec<_>>>()?;
                    let hits: BTreeSet<i64> = forward.iter().filter(|(_, b)| *b).map(|(n, _)| *n).collect();
                    let ex = exact(flow, x, d, h);
                    let hyp = match hits.iter().next() {
                        Some(&n) => Verdict::holds("forward-return").cert("n", n),
                        None if ex => Verdict::fails("forward-return").cert("mode", "period-certificate"),
                        None => Verdict::inconclusive("forward-return", "no forward return within the horizon"),
                    };
                    let hyp = rec.add("forward-return", sys, &subject, true, hyp);
                    let mut missing = None;
                    for kappa in 1..=6i64 {
                        if !hits.iter().any(|n| n % kappa == 0) {
                            missing = Some(kappa);
                            break;
                        }
                    }
                    // Returns that are multiples of k repeat with period lcm(p, k) past the threshold.
                    let settled = |k: i64| {
                        flow.period_certificate(x, d).is_some_and(|c| c.threshold + c.period.lcm(&(k as u64)) <= h as u64)
                    };
                    let v = match missing {
                        None => Verdict::holds("kappa-returns").cert("kappa_max", 6),
                        Some(k) if settled(k) => {
                            Verdict::fails("kappa-returns").cert("kappa", k).cert("mode", "period-certificate")
                        }
                        Some(k) => Verdict::inconclusive("kappa-returns", "horizon").cert("kappa", k),
                    };
                    let required = rec.verdict(hyp).is_holds();
                    let k = rec.add("kappa-returns", sys, &subject, required, v);
                    rec.implies(hyp, k, "returns along N imply returns along every kN");
                }
            }
        }
        summarize(rec, sys, start);
    }
    Ok(())
}

fn prop_4_9(cx: &CheckContext, rec: &mut Recorder) -> Result<()> {
    rec.assert_meta("on the equicontinuous fixtures every point is almost periodic, which is the hypothesis on U");
    for fx in z_sequence_fixtures(cx, rec) {
        let flow = &fx.flow;
        let sys = flow.id();
        let Some((label, x)) = fx.points.iter().find(|(_, x)| x.as_point().is_some_and(|p| p.eval(0) == Ok(1))).or(fx.points.first()) else {
            continue;
        };
        let scheme = flow.scheme_or_err()?;
        for &d in &cx.grid.depths {
            for &h in &cx.grid.horizons {
                let eq = equicontinuity_verdict(flow, d, h, INPUT_DEPTH_MAX, &cx.caps)?;
                let eqi = rec.add("equicontinuity", sys, format!("d={d} H={h}"), true, eq);
                let u = depth_cylinder(scheme, x.as_point().expect("sequence point"), d)?;
                let tc = translate_cover(flow, &u, h)?;
                let v = if tc.closed {
                    Verdict::holds("finite-cover")
                } else {
                    Verdict::inconclusive("finite-cover", "translates of U not closed within the horizon")
                }
                .cert("k_size", tc.k.len())
                .cert("k", &tc.k)
                .cert("minimal", tc.minimal);
                let required = rec.verdict(eqi).is_holds();
                let c = rec.add("finite-cover", sys, format!("U = depth-{d} cylinder of {label}, H={h}"), required, v);
                rec.implies(eqi, c, "a compact open set of almost periodic points has GU = KU for finite K");
            }
        }
    }
    Ok(())
}

fn lem_2_1cd(cx: &CheckContext, rec: &mut Recorder) -> Result<()> {
    let cases: Vec<(GroupSpec, Vec<Vec<i64>>, usize)> = vec![
        (GroupSpec::integers(), vec![vec![1], vec![-1], vec![2]], 12),
        (GroupSpec::lattice(2), vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![-1, 2]], 14),
    ];
    for (group, rays, r) in &cases {
        let name = group.name();
        for ray in rays {
            let cone = cone_approx(group, &SequenceDescriptor::ray(ray), *r, 8 * r, &cx.caps)?;
            let subject = format!("cone of n*{} in B_{r}", Element::Vector(ray.clone()));
            let v = if cone.is_stabilized() {
                is_thick_window(group, &|g| cone.elements.contains(g), 2, *r, &cx.caps)?
            } else {
                Verdict::inconclusive("thick", "cone approximation did not stabilize")
            };
            let p = rec.add("cone-thick", &name, subject, true, v);
            rec.claim(p, "cones are thick");
        }
    }
    for (group, max_len) in [(GroupSpec::integers(), 12), (GroupSpec::lattice(2), 8), (GroupSpec::free_group(2), 5)] {
        let name = group.name();
        let f = group.ball(2, &cx.caps)?.elements;
        let v = k_set_translate_check(&group, &f, 3, max_len, &cx.caps)?;
        let p = rec.add("k-set-translate", &name, format!("F = B_2, n = 3, |g| <= {max_len}"), true, v);
        rec.claim(p, "a finite F inside Gamma^r fits as F t inside K(g) with |t| = r + 1");
    }
    Ok(())
}

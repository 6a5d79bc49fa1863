use std::fmt::Write;

use num_rational::Rational64;
use zerodim_core::analysis::{equicontinuity_verdict, pointwise_period, regional_proximal_check, ProximalityWitness};
use zerodim_core::cantor::Point;
use zerodim_core::flows::{arc, theta_letter, word, FlowSystem, Level, PointSpec, State};
use zerodim_core::harness::{run_default, CheckReport};
use zerodim_core::{Caps, Verdict};

use super::CliResult;

/// Markdown dossier for the worked examples.
pub fn render(caps: &Caps, seed: u64) -> CliResult<String> {
    let mut out = String::from("# Gallery\n");
    two_copy(&mut out, caps, seed)?;
    mcmahon(&mut out, caps, seed)?;
    successor(&mut out, caps, seed)?;
    circle_stack(&mut out, caps)?;
    Ok(out)
}

fn check_table(out: &mut String, r: &CheckReport) {
    let _ = writeln!(out, "\nCheck {}: {}\n", r.theorem, r.outcome);
    let _ = writeln!(out, "| predicate | subject | verdict |\n|---|---|---|");
    for p in &r.predicates {
        let _ = writeln!(out, "| {} | {} | {:?} |", p.id, p.subject, p.verdict.status);
    }
}

fn witness_table(out: &mut String, v: &Verdict) {
    let _ = writeln!(out, "\nRegional-proximality witness: {:?}\n", v.status);
    let _ = writeln!(out, "| j | g_j | d(x_j, x) | d(y_j, y) | d(g_j x_j, g_j y_j) |\n|---|---|---|---|---|");
    if let Some(rows) = v.certificate.get("entries").and_then(|e| e.as_array()) {
        for r in rows {
            let _ = writeln!(out, "| {} | {} | {} | {} | {} |", r["j"], s(&r["g"]), s(&r["to_x"]), s(&r["to_y"]), s(&r["pair"]));
        }
    }
}

fn s(v: &serde_json::Value) -> String {
    v.as_str().map_or_else(|| v.to_string(), str::to_string)
}

fn two_copy(out: &mut String, caps: &Caps, seed: u64) -> CliResult<()> {
    let flow = FlowSystem::named("two-copy(8)")?;
    let _ = writeln!(out, "\n## Two-copy flow, m = 8\n\nGenerators e_j flip coordinate j, b_i swap the sheet on a cylinder.");
    check_table(out, &run_default("EX-3.1.5", caps, seed)?);
    witness_table(out, &regional_proximal_check(&flow, &ProximalityWitness::two_copy(&flow)?, 8)?);
    Ok(())
}

fn mcmahon(out: &mut String, caps: &Caps, seed: u64) -> CliResult<()> {
    let m = 8u32;
    let flow = FlowSystem::named("mcmahon(8)")?;
    let scheme = flow.scheme_or_err()?;
    let mut pts = Vec::new();
    for sheet in 0..2 {
        for bits in 0u32..256 {
            let symbols: Vec<u32> = (0..8).map(|k| (bits >> k) & 1).collect();
            pts.push(State::Seq(Point::finite(scheme, -4, symbols, 0, sheet)?));
        }
    }
    let _ = writeln!(out, "\n## McMahon flow, m = 8\n\nIdentities checked on the {} points supported on [-4, 3].\n", pts.len());
    let _ = writeln!(out, "| i | theta_i^2 on Y | theta_i^4 | theta_i theta_j theta_i^-1 theta_j^-1 |\n|---|---|---|---|");
    let id = |ok: bool| if ok { "id" } else { "not id" };
    for i in -(m as i64)..=m as i64 {
        let li = theta_letter(m, i)?;
        let (mut sq, mut four, mut comm) = (true, true, true);
        for x in &pts {
            let y = flow.act(&word(&[li, li]), x)?;
            sq &= matches!((y.as_point(), x.as_point()), (Some(a), Some(b)) if a.with_sheet(0) == b.with_sheet(0));
            four &= flow.act(&word(&[li, li, li, li]), x)? == *x;
            for j in -(m as i64)..=m as i64 {
                let lj = theta_letter(m, j)?;
                comm &= flow.act(&word(&[li, lj]), x)? == flow.act(&word(&[lj, li]), x)?;
            }
        }
        let _ = writeln!(out, "| {i} | {} | {} | {} |", id(sq), id(four), id(comm));
    }
    check_table(out, &run_default("EX-3.1.6", caps, seed)?);
    witness_table(out, &regional_proximal_check(&flow, &ProximalityWitness::mcmahon(&flow)?, 8)?);
    Ok(())
}

fn successor(out: &mut String, caps: &Caps, seed: u64) -> CliResult<()> {
    let flow = FlowSystem::successor_map();
    let _ = writeln!(out, "\n## Successor map\n\nPeriod of the point whose only nonzero coordinate is a 1 at index k.\n");
    let _ = writeln!(out, "| k | period | largest period so far |\n|---|---|---|");
    let mut sup = 0u64;
    for k in 2..=17i64 {
        let x = PointSpec::Finite { lo: k, symbols: vec![1], fill: 0, sheet: 0 }.build(&flow)?;
        let p = pointwise_period(&flow, &x, 64)?;
        sup = sup.max(p.unwrap_or(0));
        let _ = writeln!(out, "| {k} | {} | {sup} |", p.map_or("none".to_string(), |p| p.to_string()));
    }
    let _ = writeln!(out, "| growth | period k + 1 | unbounded as k grows |");
    check_table(out, &run_default("THM-3.3.3", caps, seed)?);
    Ok(())
}

fn circle_stack(out: &mut String, caps: &Caps) -> CliResult<()> {
    let flow = FlowSystem::named("circle-stack")?;
    let rule = flow.rule().expect("circle stack");
    let _ = writeln!(out, "\n## Circle stack\n\nLevel n rotates by r_n = {}/(n + {}); the limit circle is fixed.\n", rule.numerator, rule.offset);
    let _ = writeln!(out, "| n | r_n | period | quarter-turn iterate k_n |\n|---|---|---|---|");
    let quarter = Rational64::new(1, 4);
    for n in 1..=20u32 {
        let r = rule.r(Level::Finite(n));
        let x = PointSpec::Circle { level: n, angle: (0, 1) }.build(&flow)?;
        let p = pointwise_period(&flow, &x, 1000)?;
        let k = (1..=*r.denom()).find(|&k| arc(r * Rational64::from_integer(k), Rational64::from_integer(0)) >= quarter);
        let show = |v: Option<i64>| v.map_or("none".to_string(), |v| v.to_string());
        let _ = writeln!(out, "| {n} | {r} | {} | {} |", show(p.map(|p| p as i64)), show(k));
    }
    let v = equicontinuity_verdict(&flow, 2, 64, 16, caps)?;
    let _ = writeln!(out, "\nModulus d'(2, H') at the limit circle, searched up to depth 16: {:?}\n", v.status);
    let _ = writeln!(out, "| H' | d' |\n|---|---|");
    if let Some(m) = v.certificate.get("moduli").and_then(|m| m.as_array()) {
        for (h, d) in m.iter().enumerate().step_by(4) {
            let _ = writeln!(out, "| {h} | {} |", if d.is_null() { "> 16".to_string() } else { d.to_string() });
        }
    }
    Ok(())
}

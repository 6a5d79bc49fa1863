use std::path::Path;

use clap::Args;
use serde::Serialize;
use serde_json::{json, Value};
use zerodim_core::analysis::{
    ap_verdict, complexity, equicontinuity_verdict, escape_length, invariant_core, minimality_verdict, orbit_cylinders,
    orbit_map_usc_verdict, pointwise_period, proximal_pair_verdict, recurrent_type1_verdict, recurrent_type2_verdict,
    regional_proximal_check, regular_ap_verdict, return_times, translate_cover, weak_rigidity_verdict, ProximalityWitness,
};
use zerodim_core::cantor::{depth_cylinder, ClopenSet, Cylinder};
use zerodim_core::flows::{PointSpec, State, SystemSpec};
use zerodim_core::harness::{Config, Fixture};
use zerodim_core::{Caps, Status, Verdict};

use super::{emit, CliResult, Exit, Failure};

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// System id, from the registry or the config.
    pub system: String,
    /// Analyzer id; see `zerodim list`.
    pub analyzer: String,
    /// Point in short form (`zero`, `single-one(3)`, `xi(2,1)`, ...); repeat for pair and set analyzers.
    #[arg(long)]
    pub point: Vec<String>,
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    #[arg(long, default_value_t = 64)]
    pub horizon: usize,
    /// U as `lo:symbols`, e.g. `0:1` for [1 at 0]; the depth cylinder of the point otherwise.
    #[arg(long)]
    pub cylinder: Option<String>,
    /// Input depths searched by `equicontinuity`.
    #[arg(long, default_value_t = 32)]
    pub input_depth_max: usize,
}

pub fn run(args: &AnalyzeArgs, config: &Config, out: Option<&Path>, json_flag: bool) -> CliResult<Exit> {
    if args.depth == 0 {
        return Err(Failure::usage("--depth must be at least 1"));
    }
    if args.horizon == 0 {
        return Err(Failure::usage("--horizon must be at least 1"));
    }
    let fx = config.fixture(&args.system)?;
    let points: Vec<(String, State)> = if args.point.is_empty() {
        fx.points.clone()
    } else {
        args.point.iter().map(|p| Ok((p.clone(), PointSpec::parse(p)?.build(&fx.flow)?))).collect::<CliResult<_>>()?
    };
    let (result, status) = dispatch(args, &fx, &points, &config.caps)?;
    let report = json!({
        "system": fx.id(),
        "analyzer": args.analyzer,
        "points": points.iter().map(|(l, _)| l.clone()).collect::<Vec<_>>(),
        "depth": args.depth,
        "horizon": args.horizon,
        "result": result,
    });
    let text = serde_json::to_string_pretty(&report).expect("json") + "\n";
    if out.is_some() {
        emit(out, &text)?;
    }
    if json_flag || out.is_none() {
        print!("{text}");
    }
    if !json_flag {
        if let Some(s) = status {
            eprintln!("{}: {}", args.analyzer, status_word(s));
        }
    }
    Ok(if status == Some(Status::Inconclusive) { Exit::Inconclusive } else { Exit::Ok })
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Holds => "HOLDS",
        Status::Fails => "FAILS",
        Status::Inconclusive => "INCONCLUSIVE",
    }
}

fn verdict(v: Verdict) -> (Value, Option<Status>) {
    let s = v.status;
    (value(&v), Some(s))
}

fn value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("json")
}

fn first(points: &[(String, State)]) -> CliResult<&State> {
    points.first().map(|(_, x)| x).ok_or_else(|| Failure::usage("this analyzer needs --point"))
}

/// U from `--cylinder lo:symbols`, else the depth cylinder of `x`.
fn neighbourhood(args: &AnalyzeArgs, fx: &Fixture, x: &State, caps: &Caps) -> CliResult<ClopenSet> {
    let scheme = fx.flow.scheme_or_err()?;
    let c = match &args.cylinder {
        Some(text) => parse_cylinder(fx, text)?,
        None => {
            let p = x.as_point().ok_or_else(|| Failure::usage("U needs a sequence point"))?;
            depth_cylinder(scheme, p, args.depth)?
        }
    };
    Ok(ClopenSet::from_cylinder(scheme, &c, caps)?)
}

fn parse_cylinder(fx: &Fixture, text: &str) -> CliResult<Cylinder> {
    let bad = || Failure::usage(format!("cannot parse cylinder '{text}', expected lo:symbols"));
    let (lo, syms) = text.split_once(':').ok_or_else(bad)?;
    let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
    let symbols: Vec<u32> = syms.trim().chars().map(|c| c.to_digit(36).ok_or_else(bad)).collect::<CliResult<_>>()?;
    Ok(Cylinder::new(fx.flow.scheme_or_err()?, None, lo, symbols)?)
}

fn dispatch(args: &AnalyzeArgs, fx: &Fixture, points: &[(String, State)], caps: &Caps) -> CliResult<(Value, Option<Status>)> {
    let flow = &fx.flow;
    let (d, h) = (args.depth, args.horizon);
    Ok(match args.analyzer.as_str() {
        "return-times" => {
            let x = first(points)?;
            let u = neighbourhood(args, fx, x, caps)?;
            let r = return_times(flow, x, &u, h, caps)?;
            let elems: Vec<String> = r.elements.iter().map(|g| flow.render(g)).collect();
            (json!({ "horizon": h, "neighbourhood": u, "elements": elems }), None)
        }
        "ap" => {
            let x = first(points)?;
            verdict(ap_verdict(flow, x, &neighbourhood(args, fx, x, caps)?, h, caps)?)
        }
        "regular-ap" => {
            let x = first(points)?;
            verdict(regular_ap_verdict(flow, x, &neighbourhood(args, fx, x, caps)?, h)?)
        }
        "recurrent-type1" => verdict(recurrent_type1_verdict(flow, first(points)?, d, h)?),
        "recurrent-type2" => verdict(recurrent_type2_verdict(flow, first(points)?, d, None, h, caps)?),
        "usc" => verdict(orbit_map_usc_verdict(flow, first(points)?, d, h, d + 4, caps)?),
        "orbit-cylinders" => (value(&orbit_cylinders(flow, first(points)?, d, h, caps)?), None),
        "invariant-core" => {
            let x = first(points)?;
            (value(&invariant_core(flow, &neighbourhood(args, fx, x, caps)?, d, h, caps)?), None)
        }
        "escape" => {
            let x = first(points)?;
            (value(&escape_length(flow, x, &neighbourhood(args, fx, x, caps)?, h, caps)?), None)
        }
        "equicontinuity" => verdict(equicontinuity_verdict(flow, d, h, args.input_depth_max, caps)?),
        "proximal" => {
            let [(_, x), (_, y), ..] = points else {
                return Err(Failure::usage("proximal needs two --point values"));
            };
            verdict(proximal_pair_verdict(flow, x, y, d, h, caps)?)
        }
        "regional-proximal" => {
            let w = match flow.spec() {
                SystemSpec::TwoCopy { .. } => ProximalityWitness::two_copy(flow)?,
                SystemSpec::Mcmahon { .. } => ProximalityWitness::mcmahon(flow)?,
                _ => return Err(Failure::usage("regional-proximal has witnesses for two-copy and mcmahon only")),
            };
            verdict(regional_proximal_check(flow, &w, d)?)
        }
        "weak-rigidity" => {
            let xs: Vec<State> = points.iter().map(|(_, x)| x.clone()).collect();
            verdict(weak_rigidity_verdict(flow, &xs, d, h)?)
        }
        "period" => {
            let p = pointwise_period(flow, first(points)?, h as u64)?;
            let status = if p.is_some() { Status::Holds } else { Status::Inconclusive };
            (json!({ "period": p, "searched_up_to": h }), Some(status))
        }
        "translate-cover" => {
            let x = first(points)?;
            let c = match &args.cylinder {
                Some(text) => parse_cylinder(fx, text)?,
                None => depth_cylinder(
                    flow.scheme_or_err()?,
                    x.as_point().ok_or_else(|| Failure::usage("U needs a sequence point"))?,
                    d,
                )?,
            };
            (value(&translate_cover(flow, &c, h)?), None)
        }
        "complexity" => {
            let lang = flow.language().ok_or_else(|| Failure::usage("complexity needs a subshift"))?;
            (json!({ "p": complexity(lang, d, caps)? }), None)
        }
        "minimality" => {
            let lang = flow.language().ok_or_else(|| Failure::usage("minimality needs a subshift"))?;
            let r = minimality_verdict(lang, d, h, caps)?;
            let s = r.verdict.status;
            (value(&r), Some(s))
        }
        other => return Err(Failure::usage(format!("unknown analyzer {other}"))),
    })
}

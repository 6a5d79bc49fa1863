//! Acceptance gate: one PASS/FAIL line per criterion.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_rational::Rational64;
use zerodim_core::analysis::{
    ap_verdict, equicontinuity_verdict, minimality_verdict, orbit_map_usc_verdict, pointwise_period, recurrent_type1_verdict,
    recurrent_type2_verdict, regional_proximal_check, regular_ap_verdict, return_times, translate_cover, weak_rigidity_verdict,
    ProximalityWitness,
};
use zerodim_core::cantor::{depth_cylinder, ClopenSet, Cylinder, Point};
use zerodim_core::flows::{arc, b_letter, theta_letter, word, FlowSystem, Language, Level, PointSpec, State};
use zerodim_core::group::{
    all_subgroups, cone_approx, intersect_subgroups, is_normal, is_thick_window, normal_core, psi_containment_check,
    psi_generates, subgroup_index, Element, GroupDescriptor, GroupSpec, SequenceDescriptor, Subgroup,
};
use zerodim_core::harness::run_default;
use zerodim_core::Caps;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn caps() -> Caps {
    Caps::default()
}

fn within_budget(start: Instant, limit: Duration, detail: String) -> Outcome {
    let t = start.elapsed();
    ensure!(t < limit, "took {t:?}, budget {limit:?}");
    Ok(format!("{detail}, {} ms", t.as_millis()))
}

fn word_metric() -> Outcome {
    let start = Instant::now();
    let z = GroupSpec::integers();
    for n in -20i64..=20 {
        let len = ok(z.word_length_bfs(&Element::Int(n), &caps()))?;
        ensure!(len == n.unsigned_abs() as usize, "|{n}| = {len} by BFS");
    }
    let l2 = GroupSpec::lattice(2);
    let mut count = 0;
    for a in -20i64..=20 {
        for b in -20i64..=20 {
            let l1 = (a.abs() + b.abs()) as usize;
            if l1 > 20 {
                continue;
            }
            let len = ok(l2.word_length_bfs(&Element::Vector(vec![a, b]), &caps()))?;
            ensure!(len == l1, "|({a},{b})| = {len} by BFS");
            count += 1;
        }
    }
    within_budget(start, Duration::from_secs(1), format!("41 integers and {count} lattice points"))
}

fn cone_classification() -> Outcome {
    let z = GroupSpec::integers();
    let mut seqs: Vec<SequenceDescriptor> = (1..=5).flat_map(|s| [SequenceDescriptor::ray(&[s]), SequenceDescriptor::ray(&[-s])]).collect();
    let explicit = |f: &dyn Fn(i64) -> i64| SequenceDescriptor::Explicit { elements: (1..=60).map(|n| f(n).to_string()).collect() };
    seqs.push(explicit(&|n| n * n));
    seqs.push(explicit(&|n| -(n * n) - 3));
    // Signs settle after finitely many terms.
    seqs.push(explicit(&|n| if n < 8 && n % 2 == 1 { -n } else { n }));
    seqs.push(explicit(&|n| if n < 5 { n } else { -n }));
    let mut stabilized = 0;
    for seq in &seqs {
        for r in 1..=50usize {
            let cone = ok(cone_approx(&z, seq, r, 400, &caps()))?;
            if !cone.is_stabilized() {
                continue;
            }
            stabilized += 1;
            let pos: BTreeSet<Element> = (1..=r as i64).map(Element::Int).collect();
            let neg: BTreeSet<Element> = (1..=r as i64).map(|n| Element::Int(-n)).collect();
            ensure!(cone.elements == pos || cone.elements == neg, "{seq:?} at r={r} gave {:?}", cone.elements);
        }
    }
    ensure!(stabilized == seqs.len() * 50, "only {stabilized} of {} approximations stabilized", seqs.len() * 50);
    Ok(format!("{stabilized} stabilized approximations, r = 1..=50"))
}

fn cone_thickness() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    let z = GroupSpec::integers();
    for v in [1i64, 2, 3, -1, -2, -3] {
        let cone = ok(cone_approx(&z, &SequenceDescriptor::ray(&[v]), 50, 400, &caps()))?;
        ensure!(cone.is_stabilized(), "Z cone of {v} not stabilized");
        let v = ok(is_thick_window(&z, &|g| cone.elements.contains(g), 5, 50, &caps()))?;
        ensure!(v.is_holds(), "Z cone not thick: {v:?}");
        cases += 1;
    }
    let l2 = GroupSpec::lattice(2);
    for v in [[1i64, 0], [0, 1], [-1, 0], [0, -1], [1, 1], [2, -1], [-1, 3], [3, 2]] {
        let cone = ok(cone_approx(&l2, &SequenceDescriptor::ray(&v), 20, 400, &caps()))?;
        ensure!(cone.is_stabilized(), "Z^2 cone of {v:?} not stabilized");
        let t = ok(is_thick_window(&l2, &|g| cone.elements.contains(g), 5, 20, &caps()))?;
        ensure!(t.is_holds(), "Z^2 cone of {v:?} not thick: {t:?}");
        cases += 1;
    }
    within_budget(start, Duration::from_secs(5), format!("{cases} cones hold a translate of the whole 5-ball"))
}

fn psi_generation() -> Outcome {
    let z = GroupSpec::integers();
    for kappa in [2u64, 3] {
        let s = Subgroup::Multiples { kappa };
        let c = ok(psi_containment_check(&z, &s, 12, &caps()))?;
        ensure!(c.is_holds(), "containment for {kappa}Z: {c:?}");
        let g = ok(psi_generates(&z, &s, 50, &caps()))?;
        ensure!(g.is_holds(), "generation for {kappa}Z: {g:?}");
    }
    Ok("2Z and 3Z, n <= 12, radius 50".into())
}

fn subgroup_lemmas() -> Outcome {
    let start = Instant::now();
    let mut pairs = 0;
    for desc in [GroupDescriptor::Symmetric { degree: 3 }, GroupDescriptor::Symmetric { degree: 4 }, GroupDescriptor::Dihedral { n: 4 }] {
        let g = ok(GroupSpec::new(desc))?;
        let fg = g.finite().expect("finite");
        let order = fg.order() as u64;
        let all: Vec<usize> = (0..fg.order()).collect();
        let members = |s: &Subgroup| -> BTreeSet<usize> { all.iter().copied().filter(|&i| s.contains(&Element::Index(i))).collect() };
        let subs = ok(all_subgroups(&g))?;
        for (i, a) in subs.iter().enumerate() {
            let ma = members(a);
            // Core as the intersection of all conjugates, straight from the table.
            let conj: BTreeSet<usize> = ma
                .iter()
                .copied()
                .filter(|&h| all.iter().all(|&x| ma.contains(&fg.mul(fg.mul(fg.inv(x), h), x))))
                .collect();
            let core = ok(normal_core(&g, a))?;
            ensure!(members(&core) == conj, "core of {} in {}", a.describe(&g), g.name());
            ensure!(ok(is_normal(&g, &core))?, "core of {} not normal", a.describe(&g));
            ensure!(order % ok(subgroup_index(&g, &core))? == 0, "core index does not divide |G|");
            for b in &subs[i..] {
                let mb = members(b);
                let c = ok(intersect_subgroups(&g, &[a.clone(), b.clone()]))?;
                let mc = members(&c);
                ensure!(mc == ma.intersection(&mb).copied().collect(), "intersection of {} and {}", a.describe(&g), b.describe(&g));
                ensure!(fg.is_subgroup(&mc), "intersection is not a subgroup");
                let (ia, ib, ic) = (ok(subgroup_index(&g, a))?, ok(subgroup_index(&g, b))?, ok(subgroup_index(&g, &c))?);
                ensure!(ic * (mc.len() as u64) == order && ic <= ia * ib, "index of the intersection");
                if ok(is_normal(&g, a))? && ok(is_normal(&g, b))? {
                    ensure!(ok(is_normal(&g, &c))?, "intersection of normal subgroups not normal");
                }
                pairs += 1;
            }
        }
    }
    within_budget(start, Duration::from_secs(10), format!("{pairs} subgroup pairs over S3, S4, D4"))
}

fn odometer_class() -> Outcome {
    let flow = FlowSystem::dyadic_odometer();
    let scheme = flow.scheme().expect("sequence space");
    let points: Vec<State> = ["zero", "ones"]
        .iter()
        .map(|s| PointSpec::parse(s).and_then(|p| p.build(&flow)))
        .chain([PointSpec::Finite { lo: 0, symbols: vec![1, 0, 1, 1, 0, 1], fill: 0, sheet: 0 }.build(&flow)])
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let mut runs = 0;
    for d in 1..=6usize {
        let period = 1i64 << d;
        for h in [2 * period as usize, 3 * period as usize, 200, 256].into_iter().filter(|&h| h >= 2 * period as usize && h <= 256) {
            for x in &points {
                let u = ok(ClopenSet::depth(scheme, x.as_point().unwrap(), d, &caps()))?;
                let ap = ok(ap_verdict(&flow, x, &u, h, &caps()))?;
                ensure!(ap.is_holds() && ap.cert_i64("gap") == Some(period), "ap d={d} H={h}: {ap:?}");
                let reg = ok(regular_ap_verdict(&flow, x, &u, h))?;
                ensure!(reg.is_holds() && reg.cert_i64("kappa") == Some(period), "regular-ap d={d} H={h}: {reg:?}");
                ensure!(ok(recurrent_type1_verdict(&flow, x, d, h))?.is_holds(), "type1 d={d} H={h}");
                let t2 = ok(recurrent_type2_verdict(&flow, x, d, None, h, &caps()))?;
                ensure!(t2.is_holds(), "type2 d={d} H={h}: {t2:?}");
                runs += 1;
            }
            let wr = ok(weak_rigidity_verdict(&flow, &points, d, h))?;
            ensure!(wr.is_holds() && wr.cert_i64("n").map(i64::abs) == Some(period), "weak rigidity d={d} H={h}: {wr:?}");
            let eq = ok(equicontinuity_verdict(&flow, d, h, 32, &caps()))?;
            let moduli: Vec<Option<usize>> = ok(serde_json::from_value(eq.certificate["moduli"].clone()))?;
            ensure!(eq.is_holds() && eq.cert_u64("modulus") == Some(d as u64), "equicontinuity d={d} H={h}: {eq:?}");
            ensure!(moduli.iter().all(|m| *m == Some(d)), "modulus not constant at d={d}");
        }
    }
    Ok(format!("{runs} (point, d, H) cases, d <= 6, 2^(d+1) <= H <= 256"))
}

fn single_one() -> Outcome {
    let flow = ok(FlowSystem::full_shift(2))?;
    let scheme = flow.scheme().expect("sequence space");
    let x = ok(PointSpec::parse("single-one").and_then(|p| p.build(&flow)))?;
    let u = ok(ClopenSet::from_cylinder(scheme, &ok(Cylinder::new(scheme, None, 0, vec![1]))?, &caps()))?;
    for h in [1usize, 10, 50, 100, 200] {
        let r = ok(return_times(&flow, &x, &u, h, &caps()))?;
        ensure!(r.ints() == vec![0], "return set at H={h} is {:?}", r.ints());
    }
    let certified = |v: &zerodim_core::Verdict| v.is_fails() && !v.certificate.is_empty();
    let ap = ok(ap_verdict(&flow, &x, &u, 200, &caps()))?;
    ensure!(certified(&ap), "ap: {ap:?}");
    for d in 1..=3 {
        let t1 = ok(recurrent_type1_verdict(&flow, &x, d, 200))?;
        ensure!(certified(&t1), "type1 d={d}: {t1:?}");
        let t2 = ok(recurrent_type2_verdict(&flow, &x, d, None, 200, &caps()))?;
        ensure!(certified(&t2), "type2 d={d}: {t2:?}");
    }
    let zero = ok(PointSpec::parse("zero").and_then(|p| p.build(&flow)))?;
    let usc = ok(orbit_map_usc_verdict(&flow, &zero, 2, 64, 6, &caps()))?;
    ensure!(certified(&usc), "usc at 0^inf: {usc:?}");
    Ok("returns {0} up to H = 200; ap, type1, type2, usc all certified Fails".into())
}

fn thue_morse() -> Outcome {
    let rep = ok(minimality_verdict(&Language::thue_morse(), 6, 64, &caps()))?;
    ensure!(rep.verdict.is_holds(), "minimality: {:?}", rep.verdict);
    ensure!(rep.recurrence.first() == Some(&Some(3)), "R(1) = {:?}", rep.recurrence.first());
    ensure!(rep.recurrence.len() == 6 && rep.recurrence.iter().all(Option::is_some), "R table {:?}", rep.recurrence);
    let eq = ok(equicontinuity_verdict(&FlowSystem::thue_morse(), 1, 64, 32, &caps()))?;
    ensure!(eq.is_fails(), "equicontinuity: {:?}", eq.status);
    let moduli: Vec<Option<usize>> = ok(serde_json::from_value(eq.certificate["moduli"].clone()))?;
    ensure!(moduli.len() == 65, "modulus table has {} entries", moduli.len());
    ensure!(moduli.windows(2).all(|w| matches!((w[0], w[1]), (Some(a), Some(b)) if b > a)), "moduli not strictly increasing");
    let r: Vec<usize> = rep.recurrence.iter().flatten().copied().collect();
    Ok(format!("R(1..6) = {r:?}, d'(1, H') from {} to {}", moduli[0].unwrap(), moduli[64].unwrap()))
}

fn mcmahon() -> Outcome {
    let m = 8u32;
    let flow = ok(FlowSystem::mcmahon_flow(m))?;
    let scheme = flow.scheme().expect("sequence space").clone();
    let letters: Vec<i32> = (-(m as i64)..=m as i64).map(|k| theta_letter(m, k)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let mut points = 0;
    for lo in [-8i64, -4, 0] {
        for delta in 0..2 {
            for bits in 0u32..256 {
                let symbols = (0..8).map(|k| (bits >> k) & 1).collect();
                let x = State::Seq(ok(Point::finite(&scheme, lo, symbols, 0, delta))?);
                for &li in &letters {
                    let sq = ok(flow.act(&word(&[li, li]), &x))?;
                    ensure!(sq.as_point().unwrap().with_sheet(0) == x.as_point().unwrap().with_sheet(0), "theta^2 moves the base at {x}");
                    ensure!(ok(flow.act(&word(&[li; 4]), &x))? == x, "theta^4 not the identity at {x}");
                    for &lj in &letters {
                        ensure!(ok(flow.act(&word(&[li, lj]), &x))? == ok(flow.act(&word(&[lj, li]), &x))?, "theta maps do not commute at {x}");
                    }
                }
                points += 1;
            }
        }
    }
    for j in 1..=m {
        let x = ok(PointSpec::Y { j, primed: true, delta: 1 }.build(&flow))?;
        let y = ok(PointSpec::Y { j, primed: false, delta: 0 }.build(&flow))?;
        let t = word(&[ok(theta_letter(m, j as i64))?]);
        let dist = ok(flow.distance(&ok(flow.act(&t, &x))?, &ok(flow.act(&t, &y))?))?;
        ensure!(dist.within(j as u64), "pair distance {dist} at j={j}");
    }
    let w = ok(regional_proximal_check(&flow, &ok(ProximalityWitness::mcmahon(&flow))?, 8))?;
    ensure!(w.is_holds(), "witness: {w:?}");
    Ok(format!("identities on {points} points, |i|, |j| <= 8; witness to j = 8"))
}

fn two_copy() -> Outcome {
    let m = 8u32;
    let flow = ok(FlowSystem::two_copy_flow(m))?;
    let scheme = flow.scheme().expect("sequence space").clone();
    for lo in [-8i64, -4, 0] {
        for sheet in 0..2 {
            for bits in 0u32..256 {
                let x = State::Seq(ok(Point::finite(&scheme, lo, (0..8).map(|k| (bits >> k) & 1).collect(), 0, sheet))?);
                for l in 1..=(3 * m as i32 + 1) {
                    ensure!(ok(flow.act(&word(&[l, l]), &x))? == x, "letter {l} is not an involution at {x}");
                }
            }
        }
    }
    let o_minus = ok(PointSpec::Constant { symbol: 0, sheet: 1 }.build(&flow))?;
    for i in 1..=m {
        let b = word(&[ok(b_letter(m, i))?]);
        let plus = ok(PointSpec::Xi { i, sheet: 0 }.build(&flow))?;
        let minus = ok(PointSpec::Xi { i, sheet: 1 }.build(&flow))?;
        ensure!(ok(flow.act(&b, &plus))? == minus, "b_{i} xi_(i,+1) != xi_(i,-1)");
        ensure!(ok(flow.act(&b, &o_minus))? == o_minus, "b_{i} moves o_-1");
    }
    let w = ok(regional_proximal_check(&flow, &ok(ProximalityWitness::two_copy(&flow))?, 8))?;
    ensure!(w.is_holds(), "witness: {w:?}");
    Ok("involutions on 1536 points, b_i identities for i <= 8, witness to depth 8".into())
}

fn successor() -> Outcome {
    let report = ok(run_default("THM-3.3.3", &caps(), 20240521))?;
    let p = report.predicates.iter().find(|p| p.id == "pointwise-period").ok_or("no pointwise-period predicate")?;
    let samples = p.verdict.certificate["samples"].as_array().ok_or("no samples")?;
    ensure!(samples.len() == 50, "{} samples", samples.len());
    let flow = FlowSystem::successor_map();
    let mut max = 0;
    for s in samples {
        let k = s["first_nonzero"].as_i64().ok_or("bad sample")?;
        let symbols: Vec<u32> = ok(serde_json::from_value(s["symbols"].clone()))?;
        let x = ok(PointSpec::Finite { lo: k, symbols, fill: 0, sheet: 0 }.build(&flow))?;
        // Coordinate k + 1 has modulus k + 1.
        let got = ok(pointwise_period(&flow, &x, 64))?;
        ensure!(got == Some(k as u64 + 1), "period {got:?} at first nonzero index {k}");
        max = max.max(k as u64 + 1);
    }
    ensure!(max >= 12, "largest sampled period {max}");
    let zero = ok(PointSpec::Constant { symbol: 0, sheet: 0 }.build(&flow))?;
    ensure!(ok(pointwise_period(&flow, &zero, 4))? == Some(1), "zero is not fixed");
    Ok(format!("50 seeded samples, largest period {max}, zero fixed"))
}

fn circle_stack() -> Outcome {
    let flow = ok(FlowSystem::named("circle-stack"))?;
    let rule = flow.rule().ok_or("no radius rule")?;
    let quarter = Rational64::new(1, 4);
    let mut ks = Vec::new();
    for n in 1..=20u32 {
        let r = rule.r(Level::Finite(n));
        let x = ok(PointSpec::Circle { level: n, angle: (0, 1) }.build(&flow))?;
        let p = ok(pointwise_period(&flow, &x, 1000))?;
        ensure!(p == Some(*r.denom() as u64), "level {n}: period {p:?}, r_n = {r}");
        let k = (1..=*r.denom())
            .find(|&k| {
                let y = flow.act_int(k, &x).expect("circle action");
                arc(y.as_circle().unwrap().angle, Rational64::from_integer(0)) >= quarter
            })
            .ok_or(format!("no quarter-turn iterate on level {n}"))?;
        for a in [(0i64, 1i64), (1, 3), (5, 7)] {
            let lim = ok(PointSpec::Circle { level: 0, angle: a }.build(&flow))?;
            ensure!(ok(flow.act_int(k, &lim))? == lim, "limit point moved by f^{k}");
        }
        ks.push(k);
    }
    Ok(format!("periods n + 1 for n <= 20, quarter-turn iterates {ks:?}"))
}

fn translate_cover_odometer() -> Outcome {
    let flow = FlowSystem::dyadic_odometer();
    let scheme = flow.scheme().expect("sequence space");
    for d in 1..=5usize {
        for s in ["zero", "ones"] {
            let x = ok(PointSpec::parse(s).and_then(|p| p.build(&flow)))?;
            let u = ok(depth_cylinder(scheme, x.as_point().unwrap(), d))?;
            let cover = ok(translate_cover(&flow, &u, 64))?;
            ensure!(cover.k == (0..1i64 << d).collect::<Vec<_>>(), "K = {:?} at d={d}", cover.k);
            ensure!(cover.minimal, "cover not certified minimal at d={d}");
        }
    }
    Ok("K = {0, ..., 2^d - 1} for d <= 5".into())
}

fn determinism() -> Outcome {
    let start = Instant::now();
    let config = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/default.json");
    let run = |dir: &Path| -> Result<(Vec<u8>, Vec<u8>), String> {
        let out = Command::new(env!("CARGO_BIN_EXE_zerodim"))
            .arg("verify")
            .arg(&config)
            .arg("--out")
            .arg(dir)
            .output()
            .map_err(|e| e.to_string())?;
        ensure!(out.status.code() == Some(0), "verify exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr));
        Ok((ok(std::fs::read(dir.join("report.json")))?, ok(std::fs::read(dir.join("report.md")))?))
    };
    let (a, b) = (ok(tempfile::tempdir())?, ok(tempfile::tempdir())?);
    let first = run(a.path())?;
    let second = run(b.path())?;
    ensure!(first.0 == second.0, "report.json differs between runs");
    ensure!(first.1 == second.1, "report.md differs between runs");
    within_budget(start, Duration::from_secs(120), format!("two runs, {} bytes of JSON identical", first.0.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 14] = [
        ("word metric matches |n| and L1 for |g| <= 20", word_metric),
        ("stabilized cones on Z are N or -N for r <= 50", cone_classification),
        ("cones on Z and Z^2 are thick for F inside ball(5)", cone_thickness),
        ("Psi containment and generation for 2Z and 3Z", psi_generation),
        ("subgroup lemmas on S3, S4, D4", subgroup_lemmas),
        ("odometer equivalence class", odometer_class),
        ("full-shift single-one negative fixture", single_one),
        ("Thue-Morse minimal but not equicontinuous", thue_morse),
        ("McMahon flow algebra and witness", mcmahon),
        ("two-copy flow identities and witness", two_copy),
        ("successor map periods", successor),
        ("circle stack periods and limit defect", circle_stack),
        ("odometer translate cover", translate_cover_odometer),
        ("verify is deterministic", determinism),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("[PASS] criterion {}: {name} ({detail})", i + 1),
            Err(reason) => {
                failed += 1;
                println!("[FAIL] criterion {}: {name}: {reason}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass in {:.1} s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}

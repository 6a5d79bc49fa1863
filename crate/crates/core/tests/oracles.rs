//! Frozen values with independent reference computations.

use std::collections::{BTreeMap, BTreeSet};

use zerodim_core::analysis::{complexity, equicontinuity_verdict, minimality_verdict, translate_cover};
use zerodim_core::cantor::{depth_cylinder, Cylinder, Distance};
use zerodim_core::flows::{FlowSystem, Language, PointSpec, State};
use zerodim_core::Caps;

const TM_COMPLEXITY: [usize; 16] = [2, 4, 6, 10, 12, 16, 20, 22, 24, 28, 32, 36, 40, 42, 44, 46];
const TM_RECURRENCE: [usize; 8] = [3, 9, 11, 21, 22, 41, 42, 43];

/// Thue–Morse prefix from the binary digit-sum parity.
fn tm_prefix(len: usize) -> Vec<u8> {
    (0..len as u64).map(|n| (n.count_ones() % 2) as u8).collect()
}

fn factors(w: &[u8], n: usize) -> BTreeSet<&[u8]> {
    w.windows(n).collect()
}

fn pt(flow: &FlowSystem, s: &str) -> State {
    PointSpec::parse(s).unwrap().build(flow).unwrap()
}

#[test]
fn thue_morse_complexity() {
    let w = tm_prefix(1 << 14);
    let reference: Vec<usize> = (1..=16).map(|n| factors(&w, n).len()).collect();
    assert_eq!(reference, TM_COMPLEXITY);
    let computed = complexity(&Language::thue_morse(), 16, &Caps::default()).unwrap();
    assert_eq!(computed, TM_COMPLEXITY);
}

#[test]
fn thue_morse_recurrence_function() {
    let w = tm_prefix(1 << 14);
    let reference: Vec<usize> = (1..=8)
        .map(|n| {
            let all = factors(&w, n);
            (n..).find(|&r| w.windows(r).all(|win| factors(win, n) == all)).unwrap()
        })
        .collect();
    assert_eq!(reference, TM_RECURRENCE);
    let rep = minimality_verdict(&Language::thue_morse(), 8, 64, &Caps::default()).unwrap();
    assert!(rep.verdict.is_holds());
    let computed: Vec<usize> = rep.recurrence.iter().map(|r| r.unwrap()).collect();
    assert_eq!(computed, TM_RECURRENCE);
}

/// Least `D` such that the central `2D-1` symbols of every `(2H'+1)`-factor determine it.
fn reference_modulus(w: &[u8], hp: usize) -> usize {
    let len = 2 * hp + 1;
    let words = factors(w, len);
    (1..=hp + 1)
        .find(|&d| {
            let cut = hp + 1 - d;
            let mut seen: BTreeMap<&[u8], &[u8]> = BTreeMap::new();
            words.iter().all(|u| *seen.entry(&u[cut..len - cut]).or_insert(u) == *u)
        })
        .unwrap()
}

#[test]
fn thue_morse_modulus_at_depth_one() {
    let w = tm_prefix(1 << 14);
    let reference: Vec<usize> = (0..=32).map(|hp| reference_modulus(&w, hp)).collect();
    assert_eq!(reference, (0..=32).map(|hp| hp + 1).collect::<Vec<_>>());
    let v = equicontinuity_verdict(&FlowSystem::thue_morse(), 1, 32, 64, &Caps::default()).unwrap();
    let moduli: Vec<Option<usize>> = serde_json::from_value(v.certificate["moduli"].clone()).unwrap();
    assert_eq!(moduli, (0..=32).map(|hp| Some(hp + 1)).collect::<Vec<_>>());
}

#[test]
fn odometer_translate_cover_is_the_residue_system() {
    let flow = FlowSystem::dyadic_odometer();
    let x = pt(&flow, "zero");
    for d in 1..=5usize {
        let u = depth_cylinder(flow.scheme().unwrap(), x.as_point().unwrap(), d).unwrap();
        let cover = translate_cover(&flow, &u, 64).unwrap();
        assert_eq!(cover.k, (0..1i64 << d).collect::<Vec<_>>());
        assert!(cover.minimal && cover.closed);
        // The translates f^k U, k < 2^d, are the 2^d residue classes mod 2^d.
        let mut classes = BTreeSet::new();
        for k in 0..1i64 << d {
            let y = flow.act_int(k, &x).unwrap();
            let digits: u64 = (0..d as i64).map(|i| (y.as_point().unwrap().eval(i).unwrap() as u64) << i).sum();
            assert_eq!(digits, k as u64);
            classes.insert(digits);
        }
        assert_eq!(classes.len(), 1 << d);
    }
}

#[test]
fn two_copy_and_mcmahon_distances() {
    let two = FlowSystem::two_copy_flow(8).unwrap();
    let o = pt(&two, "o");
    for i in 1..=6u32 {
        let xi = pt(&two, &format!("xi({i})"));
        assert_eq!(two.distance(&xi, &o).unwrap(), Distance::Pow(i as u64 + 1));
        assert_eq!(xi.as_point().unwrap().eval(i as i64 + 1).unwrap(), 1);
        assert_eq!(xi.as_point().unwrap().eval(i as i64).unwrap(), 0);
    }
    let mc = FlowSystem::mcmahon_flow(8).unwrap();
    let o = pt(&mc, "o");
    for j in 1..=6u32 {
        let y = pt(&mc, &format!("y({j})"));
        assert_eq!(mc.distance(&y, &o).unwrap(), Distance::Pow(j as u64 + 1));
    }
}

#[test]
fn flow_examples() {
    let odo = FlowSystem::dyadic_odometer();
    let x = PointSpec::Finite { lo: 0, symbols: vec![1, 1], fill: 0, sheet: 0 }.build(&odo).unwrap();
    let want = PointSpec::Finite { lo: 0, symbols: vec![0, 0, 1], fill: 0, sheet: 0 }.build(&odo).unwrap();
    assert_eq!(odo.act_int(1, &x).unwrap(), want);

    let succ = FlowSystem::successor_map();
    let x = PointSpec::Finite { lo: 2, symbols: vec![1], fill: 0, sheet: 0 }.build(&succ).unwrap();
    let want = PointSpec::Finite { lo: 2, symbols: vec![1, 1], fill: 0, sheet: 0 }.build(&succ).unwrap();
    assert_eq!(succ.act_int(1, &x).unwrap(), want);
    let orbit: BTreeSet<State> = succ.orbit_segment(&x, 3, &Caps::default()).unwrap().into_iter().map(|(_, y)| y).collect();
    assert_eq!(orbit.len(), 3);

    let tm = FlowSystem::thue_morse();
    let t = pt(&tm, "thue-morse");
    let c = depth_cylinder(tm.scheme().unwrap(), t.as_point().unwrap(), 1).unwrap();
    assert_eq!(c, Cylinder::new(tm.scheme().unwrap(), None, 0, vec![0]).unwrap());
}

use zerodim_core::analysis::*;
use zerodim_core::cantor::{depth_cylinder, ClopenSet, Cylinder};
use zerodim_core::caps::Caps;
use zerodim_core::flows::{FlowSystem, PointSpec, RadiusRule, State};

fn pt(flow: &FlowSystem, s: &str) -> State {
    PointSpec::parse(s).unwrap().build(flow).unwrap()
}

fn depth_set(flow: &FlowSystem, x: &State, d: usize) -> ClopenSet {
    ClopenSet::depth(flow.scheme().unwrap(), x.as_point().unwrap(), d, &Caps::default()).unwrap()
}

fn single_one_at_zero(flow: &FlowSystem) -> ClopenSet {
    let scheme = flow.scheme().unwrap();
    let c = Cylinder::new(scheme, None, 0, vec![1]).unwrap();
    ClopenSet::from_cylinder(scheme, &c, &Caps::default()).unwrap()
}

fn zero_at_zero(flow: &FlowSystem) -> ClopenSet {
    let scheme = flow.scheme().unwrap();
    let c = Cylinder::new(scheme, None, 0, vec![0]).unwrap();
    ClopenSet::from_cylinder(scheme, &c, &Caps::default()).unwrap()
}

#[test]
fn odometer_returns_to_depth_two_cylinder() {
    let odo = FlowSystem::dyadic_odometer();
    let x = pt(&odo, "zero");
    let u = depth_set(&odo, &x, 2);
    let r = return_times(&odo, &x, &u, 10, &Caps::default()).unwrap();
    assert_eq!(r.ints(), vec![-8, -4, 0, 4, 8]);
}

#[test]
fn single_one_returns_only_at_zero() {
    let fs = FlowSystem::full_shift(2).unwrap();
    let x = pt(&fs, "single-one");
    let r = return_times(&fs, &x, &single_one_at_zero(&fs), 10, &Caps::default()).unwrap();
    assert_eq!(r.ints(), vec![0]);
}

#[test]
fn full_space_returns_everything() {
    let odo = FlowSystem::dyadic_odometer();
    let x = pt(&odo, "zero");
    let scheme = odo.scheme().unwrap();
    let (lo, len) = scheme.depth_window(3);
    let u = ClopenSet::full(scheme, lo, len, &Caps::default()).unwrap();
    let r = return_times(&odo, &x, &u, 6, &Caps::default()).unwrap();
    assert_eq!(r.ints(), (-6..=6).collect::<Vec<_>>());
}

#[test]
fn ap_examples() {
    let caps = Caps::default();
    let odo = FlowSystem::dyadic_odometer();
    let x = pt(&odo, "zero");
    for d in 1..=4 {
        let v = ap_verdict(&odo, &x, &depth_set(&odo, &x, d), 64, &caps).unwrap();
        assert!(v.is_holds(), "{v:?}");
        assert_eq!(v.cert_u64("gap"), Some(1 << d));
    }
    let fs = FlowSystem::full_shift(2).unwrap();
    let s = pt(&fs, "single-one");
    assert!(ap_verdict(&fs, &s, &single_one_at_zero(&fs), 10, &caps).unwrap().is_fails());
    let tm = FlowSystem::thue_morse();
    let t = pt(&tm, "thue-morse");
    let v = ap_verdict(&tm, &t, &depth_set(&tm, &t, 1), 64, &caps).unwrap();
    assert!(v.is_holds(), "{v:?}");
    assert!(v.cert_u64("gap").unwrap() <= 3);
}

#[test]
fn ap_requires_membership() {
    let fs = FlowSystem::full_shift(2).unwrap();
    let x = pt(&fs, "zero");
    assert!(ap_verdict(&fs, &x, &single_one_at_zero(&fs), 10, &Caps::default()).is_err());
}

#[test]
fn regular_ap_examples() {
    let odo = FlowSystem::dyadic_odometer();
    let x = pt(&odo, "zero");
    let v = regular_ap_verdict(&odo, &x, &depth_set(&odo, &x, 3), 64).unwrap();
    assert!(v.is_holds(), "{v:?}");
    assert_eq!(v.cert_u64("kappa"), Some(8));

    let succ = FlowSystem::successor_map();
    let s = PointSpec::Finite { lo: 2, symbols: vec![1], fill: 0, sheet: 0 }.build(&succ).unwrap();
    let v = regular_ap_verdict(&succ, &s, &depth_set(&succ, &s, 2), 64).unwrap();
    assert!(v.is_holds(), "{v:?}");
    assert_eq!(v.cert_u64("kappa"), Some(3));

    let fs = FlowSystem::full_shift(2).unwrap();
    let y = pt(&fs, "single-one");
    assert!(regular_ap_verdict(&fs, &y, &single_one_at_zero(&fs), 64).unwrap().is_fails());
}

#[test]
fn type1_examples() {
    let odo = FlowSystem::dyadic_odometer();
    let v = recurrent_type1_verdict(&odo, &pt(&odo, "ones"), 3, 8).unwrap();
    assert!(v.is_holds(), "{v:?}");
    assert_eq!(v.cert_i64("n_plus"), Some(8));
    assert_eq!(v.cert_i64("n_minus"), Some(-8));
    let fs = FlowSystem::full_shift(2).unwrap();
    assert!(recurrent_type1_verdict(&fs, &pt(&fs, "single-one"), 1, 100).unwrap().is_fails());
    assert!(recurrent_type1_verdict(&fs, &pt(&fs, "zero"), 4, 3).unwrap().is_holds());
}

#[test]
fn type2_examples() {
    let caps = Caps::default();
    let odo = FlowSystem::dyadic_odometer();
    let v = recurrent_type2_verdict(&odo, &pt(&odo, "zero"), 3, None, 32, &caps).unwrap();
    assert!(v.is_holds(), "{v:?}");
    let fs = FlowSystem::full_shift(2).unwrap();
    let v = recurrent_type2_verdict(&fs, &pt(&fs, "single-one"), 1, None, 32, &caps).unwrap();
    assert!(v.is_fails(), "{v:?}");
    let v = recurrent_type2_verdict(&fs, &pt(&fs, "zero"), 1, None, 32, &caps).unwrap();
    assert!(v.is_holds(), "{v:?}");
    assert_eq!(v.cert_u64("bound"), Some(1));
}

#[test]
fn escape_examples() {
    let caps = Caps::default();
    let fs = FlowSystem::full_shift(2).unwrap();
    let x = pt(&fs, "single-one(5)");
    let e = escape_length(&fs, &x, &zero_at_zero(&fs), 20, &caps).unwrap();
    assert!(matches!(e, Escape::Finite { length: 5, .. }), "{e:?}");
    let z = pt(&fs, "zero");
    assert_eq!(escape_length(&fs, &z, &zero_at_zero(&fs), 20, &caps).unwrap(), Escape::InfiniteWithin { horizon: 20 });
    let odo = FlowSystem::dyadic_odometer();
    let o = pt(&odo, "zero");
    let e = escape_length(&odo, &o, &depth_set(&odo, &o, 1), 20, &caps).unwrap();
    assert!(matches!(e, Escape::Finite { length: 1, .. }), "{e:?}");
}

#[test]
fn invariant_core_examples() {
    let caps = Caps::default();
    let odo = FlowSystem::dyadic_odometer();
    let scheme = odo.scheme().unwrap();
    let (lo, len) = scheme.depth_window(3);
    let full = ClopenSet::full(scheme, lo, len, &caps).unwrap();
    let core = invariant_core(&odo, &full, 3, 8, &caps).unwrap();
    assert_eq!(core.inner.len(), 8);
    assert_eq!(core.outer.len(), 8);

    let fs = FlowSystem::full_shift(2).unwrap();
    let core = invariant_core(&fs, &zero_at_zero(&fs), 2, 8, &caps).unwrap();
    let zero_cyl = depth_cylinder(fs.scheme().unwrap(), pt(&fs, "zero").as_point().unwrap(), 2).unwrap();
    assert_eq!(core.outer, vec![zero_cyl.clone()]);
    assert!(core.inner.iter().all(|c| *c == zero_cyl));

    let succ = FlowSystem::successor_map();
    let z = pt(&succ, "zero");
    let core = invariant_core(&succ, &depth_set(&succ, &z, 1), 3, 16, &caps).unwrap();
    let zc = depth_cylinder(succ.scheme().unwrap(), z.as_point().unwrap(), 3).unwrap();
    // The first coordinate is invariant, so the whole cylinder is its own core.
    assert_eq!(core.inner.len(), 12);
    assert_eq!(core.outer, core.inner);
    assert!(core.inner.contains(&zc));
}

#[test]
fn orbit_cylinder_examples() {
    let caps = Caps::default();
    let fs = FlowSystem::full_shift(2).unwrap();
    let z = pt(&fs, "zero");
    let o = orbit_cylinders(&fs, &z, 2, 10, &caps).unwrap();
    assert_eq!(o.cylinders.len(), 1);
    let s = orbit_cylinders(&fs, &pt(&fs, "single-one"), 1, 10, &caps).unwrap();
    assert_eq!(s.cylinders.len(), 2);
    let odo = FlowSystem::dyadic_odometer();
    let o = orbit_cylinders(&odo, &pt(&odo, "ones"), 4, 16, &caps).unwrap();
    assert_eq!(o.cylinders.len(), 16);
}

#[test]
fn usc_examples() {
    let caps = Caps::default();
    let odo = FlowSystem::dyadic_odometer();
    let v = orbit_map_usc_verdict(&odo, &pt(&odo, "zero"), 3, 16, 6, &caps).unwrap();
    assert!(v.is_holds(), "{v:?}");
    let fs = FlowSystem::full_shift(2).unwrap();
    let v = orbit_map_usc_verdict(&fs, &pt(&fs, "zero"), 1, 16, 6, &caps).unwrap();
    assert!(v.is_fails(), "{v:?}");
    let cs = FlowSystem::circle_stack(RadiusRule::default()).unwrap();
    let v = orbit_map_usc_verdict(&cs, &pt(&cs, "circle(3,1/5)"), 3, 16, 6, &caps).unwrap();
    assert!(v.is_holds(), "{v:?}");
}

#[test]
fn orbit_relation_examples() {
    let caps = Caps::default();
    let odo = FlowSystem::dyadic_odometer();
    let x = pt(&odo, "zero");
    let pairs = vec![(x.clone(), odo.act_int(5, &x).unwrap())];
    assert!(orbit_relation_symmetry_verdict(&odo, &pairs, 3, 16, &caps).unwrap().is_holds());
    let fs = FlowSystem::full_shift(2).unwrap();
    let pairs = vec![(pt(&fs, "single-one"), pt(&fs, "zero"))];
    assert!(orbit_relation_symmetry_verdict(&fs, &pairs, 2, 16, &caps).unwrap().is_fails());
    let tm = FlowSystem::thue_morse();
    let t = pt(&tm, "thue-morse");
    let pairs = vec![(t.clone(), tm.act_int(7, &t).unwrap())];
    assert!(orbit_relation_symmetry_verdict(&tm, &pairs, 2, 32, &caps).unwrap().is_holds());
}

#[test]
fn equicontinuity_examples() {
    let caps = Caps::default();
    let odo = FlowSystem::dyadic_odometer();
    let v = equicontinuity_verdict(&odo, 3, 32, 12, &caps).unwrap();
    assert!(v.is_holds(), "{v:?}");
    assert_eq!(v.cert_u64("modulus"), Some(3));
    let fs = FlowSystem::full_shift(2).unwrap();
    assert!(equicontinuity_verdict(&fs, 1, 20, 10, &caps).unwrap().is_fails());
    let cs = FlowSystem::circle_stack(RadiusRule::default()).unwrap();
    let v = equicontinuity_verdict(&cs, 2, 64, 6, &caps).unwrap();
    assert!(v.is_fails(), "{v:?}");
}

#[test]
fn proximal_examples() {
    let caps = Caps::default();
    let fs = FlowSystem::full_shift(2).unwrap();
    let v = proximal_pair_verdict(&fs, &pt(&fs, "single-one"), &pt(&fs, "zero"), 5, 10, &caps).unwrap();
    assert!(v.is_holds(), "{v:?}");
    let odo = FlowSystem::dyadic_odometer();
    let (x, y) = (pt(&odo, "zero"), pt(&odo, "ones"));
    let v = proximal_pair_verdict(&odo, &x, &y, 4, 64, &caps).unwrap();
    assert!(v.is_fails(), "{v:?}");
    assert!(proximal_pair_verdict(&odo, &x, &x, 4, 64, &caps).is_err());
}

#[test]
fn regional_proximal_examples() {
    let tc = FlowSystem::two_copy_flow(8).unwrap();
    let w = ProximalityWitness::two_copy(&tc).unwrap();
    assert!(regional_proximal_check(&tc, &w, 8).unwrap().is_holds());
    let mc = FlowSystem::mcmahon_flow(8).unwrap();
    let w = ProximalityWitness::mcmahon(&mc).unwrap();
    assert!(regional_proximal_check(&mc, &w, 8).unwrap().is_holds());
    let odo = FlowSystem::dyadic_odometer();
    let w = ProximalityWitness::constant(&odo, pt(&odo, "zero"), pt(&odo, "ones"), 4);
    assert!(regional_proximal_check(&odo, &w, 3).unwrap().is_fails());
}

#[test]
fn period_examples() {
    let succ = FlowSystem::successor_map();
    assert_eq!(pointwise_period(&succ, &pt(&succ, "zero"), 100).unwrap(), Some(1));
    let x = PointSpec::Finite { lo: 2, symbols: vec![1], fill: 0, sheet: 0 }.build(&succ).unwrap();
    assert_eq!(pointwise_period(&succ, &x, 100).unwrap(), Some(3));
}

#[test]
fn weak_rigidity_examples() {
    let odo = FlowSystem::dyadic_odometer();
    let pts = vec![pt(&odo, "zero"), pt(&odo, "ones")];
    let v = weak_rigidity_verdict(&odo, &pts, 3, 64).unwrap();
    assert!(v.is_holds(), "{v:?}");
    assert_eq!(v.cert_i64("n"), Some(8));
    let fs = FlowSystem::full_shift(2).unwrap();
    assert!(weak_rigidity_verdict(&fs, &[pt(&fs, "single-one")], 1, 50).unwrap().is_fails());
    let v = weak_rigidity_verdict(&fs, &[], 1, 50).unwrap();
    assert_eq!(v.cert_i64("n"), Some(1));
}

#[test]
fn translate_cover_examples() {
    let odo = FlowSystem::dyadic_odometer();
    for d in 1..=5 {
        let x = pt(&odo, "zero");
        let c = depth_cylinder(odo.scheme().unwrap(), x.as_point().unwrap(), d).unwrap();
        let t = translate_cover(&odo, &c, 64).unwrap();
        assert_eq!(t.k, (0..(1i64 << d)).collect::<Vec<_>>());
        assert!(t.minimal && t.closed);
    }
}

#[test]
fn general_type1_with_cones() {
    use zerodim_core::group::{cone_approx, ConeApproximation, GroupSpec, SequenceDescriptor};
    let z = GroupSpec::integers();
    let odo = FlowSystem::dyadic_odometer();
    let cones: Vec<ConeApproximation> = [1i64, -1]
        .iter()
        .map(|s| cone_approx(&z, &SequenceDescriptor::ray(&[*s]), 24, 200, &Caps::default()).unwrap())
        .collect();
    assert!(recurrent_type1_general(&odo, &pt(&odo, "zero"), 3, &cones).unwrap().is_holds());
    let fs = FlowSystem::full_shift(2).unwrap();
    assert!(recurrent_type1_general(&fs, &pt(&fs, "single-one"), 1, &cones[..1]).unwrap().is_fails());
}

use proptest::prelude::*;
use zerodim_core::cantor::{agree_to_depth, depth_cylinder, distance, ClopenSet, CoordinateScheme, Cylinder, Distance, Point};
use zerodim_core::Caps;

fn binary() -> CoordinateScheme {
    CoordinateScheme::full(2)
}

fn tail() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0u32..2, 1..4)
}

prop_compose! {
    fn point()(lo in -8i64..4, window in prop::collection::vec(0u32..2, 0..10), left in tail(), right in tail()) -> Point {
        Point::new(&binary(), lo, window, left, right, 0).unwrap()
    }
}

prop_compose! {
    /// A clopen set on `[-3, 3)` given by an arbitrary pattern subset.
    fn clopen()(mask in prop::collection::vec(any::<bool>(), 64)) -> ClopenSet {
        let scheme = binary();
        let caps = Caps::default();
        let mut set = ClopenSet::empty(-3, 6);
        for (bits, keep) in mask.into_iter().enumerate() {
            if keep {
                let symbols = (0..6).map(|k| ((bits >> k) & 1) as u32).collect();
                let c = Cylinder::new(&scheme, None, -3, symbols).unwrap();
                set = set.union(&ClopenSet::from_cylinder(&scheme, &c, &caps).unwrap(), &scheme, &caps).unwrap();
            }
        }
        set
    }
}

/// Reference distance read straight off the coordinates.
fn naive_exponent(x: &Point, y: &Point) -> Option<u64> {
    (0..64i64).find(|&k| x.eval(k).unwrap() != y.eval(k).unwrap() || x.eval(-k).unwrap() != y.eval(-k).unwrap()).map(|k| k as u64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn distance_is_an_ultrametric(x in point(), y in point(), z in point()) {
        let s = binary();
        let (xy, yz, xz) = (distance(&s, &x, &y), distance(&s, &y, &z), distance(&s, &x, &z));
        prop_assert!(xz <= xy.max(yz));
        prop_assert_eq!(xy, distance(&s, &y, &x));
        prop_assert_eq!(distance(&s, &x, &x), Distance::Zero);
    }

    #[test]
    fn distance_matches_coordinatewise_scan(x in point(), y in point()) {
        let d = distance(&binary(), &x, &y);
        prop_assert_eq!(d.exponent(), naive_exponent(&x, &y));
    }

    #[test]
    fn depth_cylinder_is_the_closed_ball(x in point(), y in point(), d in 1usize..8) {
        let s = binary();
        let c = depth_cylinder(&s, &y, d).unwrap();
        prop_assert_eq!(c.contains(&x), distance(&s, &x, &y).within(d as u64));
        prop_assert_eq!(c.contains(&x), agree_to_depth(&s, &x, &y, d));
        prop_assert!(c.contains(&y));
    }

    #[test]
    fn de_morgan_and_idempotence(a in clopen(), b in clopen()) {
        let (s, caps) = (binary(), Caps::default());
        let not = |c: &ClopenSet| c.complement(&s, &caps).unwrap();
        let lhs = not(&a.union(&b, &s, &caps).unwrap());
        let rhs = not(&a).intersection(&not(&b), &s, &caps).unwrap();
        prop_assert!(lhs.set_eq(&rhs, &s, &caps).unwrap());
        let lhs = not(&a.intersection(&b, &s, &caps).unwrap());
        let rhs = not(&a).union(&not(&b), &s, &caps).unwrap();
        prop_assert!(lhs.set_eq(&rhs, &s, &caps).unwrap());
        prop_assert!(a.union(&a, &s, &caps).unwrap().set_eq(&a, &s, &caps).unwrap());
        prop_assert!(a.intersection(&a, &s, &caps).unwrap().set_eq(&a, &s, &caps).unwrap());
        prop_assert!(a.intersection(&not(&a), &s, &caps).unwrap().is_empty());
        prop_assert!(a.union(&not(&a), &s, &caps).unwrap().is_full(&s, &caps).unwrap());
    }

    #[test]
    fn clopen_is_the_union_of_its_cylinders(a in clopen(), x in point()) {
        let (s, caps) = (binary(), Caps::default());
        let mut rebuilt = ClopenSet::empty(a.lo, a.len);
        for c in a.cylinders(&s) {
            rebuilt = rebuilt.union(&ClopenSet::from_cylinder(&s, &c, &caps).unwrap(), &s, &caps).unwrap();
        }
        prop_assert!(rebuilt.set_eq(&a, &s, &caps).unwrap());
        let refined = a.refine(&s, a.lo - 2, a.len + 5, &caps).unwrap();
        prop_assert_eq!(refined.contains(&x), a.contains(&x));
        prop_assert!(refined.set_eq(&a, &s, &caps).unwrap());
    }
}

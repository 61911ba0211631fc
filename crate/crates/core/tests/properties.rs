//! Property tests over seeded random multiverses.

use clocklat::dual_lattice::GenusClock;
use clocklat::generate::{random_curve_universe, random_drawn_multiverse, random_multiverse, rng};
use clocklat::multiverse::{Multiverse, MultiverseFile};
use clocklat::planar_lattice::{escape_counts, PlanarClock, Sign};
use proptest::prelude::*;

fn instance(seed: u64, torus: bool) -> Multiverse {
    let mut r = rng(seed);
    if torus {
        random_multiverse(&mut r, 1, 6, 1, "p")
    } else {
        random_drawn_multiverse(&mut r, 6, 1, "p")
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn states_and_matchings_correspond(seed in any::<u64>(), torus in any::<bool>()) {
        let mv = instance(seed, torus);
        let gc = GenusClock::new(&mv).unwrap();
        let states = mv.enumerate_states();
        prop_assert_eq!(states.len(), gc.spine.graph.enumerate_matchings().len());
        for s in &states {
            let m = gc.spine.state_to_matching(&mv, s).unwrap();
            prop_assert_eq!(&gc.spine.matching_to_state(&m).unwrap(), s);
        }
    }

    #[test]
    fn file_round_trips_through_json(seed in any::<u64>(), torus in any::<bool>()) {
        let mv = instance(seed, torus);
        let text = mv.file.to_json();
        let back = MultiverseFile::from_json(&text).unwrap();
        prop_assert_eq!(&back, &mv.file);
        prop_assert_eq!(back.to_json(), text);
    }

    #[test]
    fn euler_identity_when_faces_qualify(seed in any::<u64>(), torus in any::<bool>()) {
        let mv = instance(seed, torus);
        if let Ok(e) = mv.euler_check() {
            prop_assert!(e.holds, "{} != {}", e.lhs, e.rhs);
        }
    }

    #[test]
    fn twisting_up_then_down_is_identity(seed in any::<u64>()) {
        let mv = instance(seed, false);
        let pc = PlanarClock::new(&mv).unwrap();
        for m in pc.spine.graph.enumerate_matchings() {
            for (c, sign) in pc.signed_cycles(&m) {
                let (there, back) = match sign {
                    Sign::Negative => {
                        let up = pc.twist_up(&m, c).unwrap();
                        (up.clone(), pc.twist_down(&up, c).unwrap())
                    }
                    Sign::Positive => {
                        let down = pc.twist_down(&m, c).unwrap();
                        (down.clone(), pc.twist_up(&down, c).unwrap())
                    }
                };
                prop_assert_ne!(&there, &m);
                prop_assert_eq!(&back, &m);
            }
        }
    }

    #[test]
    fn pushing_up_then_down_is_identity(seed in any::<u64>(), torus in any::<bool>()) {
        let mv = instance(seed, torus);
        let gc = GenusClock::new(&mv).unwrap();
        for m in gc.spine.graph.enumerate_matchings() {
            let r = gc.dual.prescribed_orientation(&m);
            let part = gc.dual.accessibility(&r);
            for (k, class) in part.classes.iter().enumerate() {
                if !class.minimal || class.is_outer {
                    continue;
                }
                let up = gc.dual.push_up(&r, k).unwrap();
                let part2 = gc.dual.accessibility(&up);
                prop_assert_eq!(part2.blocks(), part.blocks());
                let k2 = part2.class_of[class.vertices[0]];
                prop_assert!(part2.classes[k2].maximal);
                prop_assert_eq!(gc.dual.push_down(&up, k2).unwrap(), r.clone());
            }
        }
    }

    #[test]
    fn planar_lattice_laws(seed in any::<u64>()) {
        let mv = instance(seed, false);
        let l = PlanarClock::new(&mv).unwrap().lattice().unwrap();
        let n = l.len();
        for x in 0..n {
            prop_assert_eq!(l.meet(x, x).unwrap(), x);
            for y in 0..n {
                let m = l.meet(x, y).unwrap();
                let j = l.join(x, y).unwrap();
                prop_assert_eq!(m, l.meet(y, x).unwrap());
                prop_assert_eq!(l.join(x, m).unwrap(), x);
                prop_assert_eq!(l.meet(x, j).unwrap(), x);
                prop_assert!(l.leq(m, x) && l.leq(x, j));
            }
        }
    }

    #[test]
    fn escape_law_on_curve_universes(seed in any::<u64>()) {
        let mv = random_curve_universe(&mut rng(seed), 6, "u");
        for rec in escape_counts(&mv).unwrap() {
            prop_assert_eq!(rec.escape, rec.half_length + 2);
        }
    }
}

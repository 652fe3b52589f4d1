//! Chord lifts push forward to their chord and never cross the critical diameter.

use apriori::elephant::ElephantParams;
use apriori::pullback::{
    all_chords, crosses_diameter, find_admissible_orbits, lift_chord, pulloff_trace, AngleOrbit, Chord,
};
use proptest::prelude::*;

fn orbit() -> impl Strategy<Value = AngleOrbit> {
    (3usize..12).prop_flat_map(|p| (Just(p), 1u64..((1u64 << p) - 1))).prop_filter_map("periodic", |(p, k)| {
        let o = AngleOrbit::from_numerator(p, k).ok()?;
        let distinct: std::collections::BTreeSet<_> = o.numerators().iter().collect();
        (distinct.len() == p).then_some(o)
    })
}

proptest! {
    #[test]
    fn lifts_map_back_and_avoid_the_diameter(o in orbit()) {
        let p = o.p();
        for c in all_chords(p) {
            let l = lift_chord(&o, &c).unwrap();
            for x in l.lifts {
                prop_assert!(!crosses_diameter(&o, &x));
                // Forgetting primes and shifting by +1 recovers the chord.
                let (i, j) = x.indices();
                let back = Chord::plain((i + 1) % p, (j + 1) % p).unwrap();
                prop_assert_eq!(back.indices(), c.indices());
            }
            prop_assert_eq!(l.pulled_off, l.legitimate().is_none());
        }
    }

    #[test]
    fn traces_follow_legitimate_lifts(o in orbit()) {
        for c in all_chords(o.p()) {
            if let Ok(t) = pulloff_trace(&o, &c) {
                prop_assert_eq!(t.steps.len(), t.time);
                prop_assert_eq!(t.steps[0].chord, c);
                for w in t.steps.windows(2) {
                    prop_assert_eq!(w[0].lift, Some(w[1].chord));
                }
                prop_assert!(t.steps.last().unwrap().pulled_off);
            }
        }
    }
}

#[test]
fn horizontal_chords_pull_off_before_p_when_b_positive() {
    for (q, b) in [(3, 1), (4, 2), (5, 1)] {
        for o in find_admissible_orbits(ElephantParams::new(q, b).unwrap()).unwrap() {
            for c in all_chords(o.p()).iter().filter(|c| !crosses_diameter(&o, c)) {
                let t = pulloff_trace(&o, c).unwrap();
                assert!(t.time < o.p(), "{c:?} at q={q} b={b}");
            }
        }
    }
}

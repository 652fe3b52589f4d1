//! The placement enumerator agrees with the axiom validator.

use apriori::elephant::{enumerate_placements, placement_violations, ElephantParams, Sector, SectorPlacement};
use proptest::prelude::*;

fn sector(q: usize) -> impl Strategy<Value = Sector> {
    prop_oneof![
        1 => Just(Sector::Upsilon),
        4 => (0..q + 1).prop_map(Sector::S),
        4 => (0..q + 1).prop_map(Sector::Z),
    ]
}

/// A valid placement with one entry replaced by a random sector.
fn perturbed() -> impl Strategy<Value = (ElephantParams, SectorPlacement)> {
    (2usize..8)
        .prop_flat_map(|q| (Just(q), 0..q))
        .prop_flat_map(|(q, b)| {
            let params = ElephantParams::new(q, b).unwrap();
            let n = enumerate_placements(params).len();
            (Just(params), 0..n, 0..q + b - 1, sector(q))
        })
        .prop_map(|(params, i, at, s)| {
            let mut pl = enumerate_placements(params).swap_remove(i);
            pl.sectors[at] = s;
            (params, pl)
        })
}

proptest! {
    #[test]
    fn validator_accepts_exactly_the_enumerated((params, pl) in perturbed()) {
        let listed = enumerate_placements(params).contains(&pl);
        prop_assert_eq!(placement_violations(params, &pl).is_empty(), listed);
    }
}

#[test]
fn counts_are_powers_of_two() {
    for q in 2..10 {
        for b in 0..q {
            let params = ElephantParams::new(q, b).unwrap();
            let all = enumerate_placements(params);
            assert_eq!(all.len(), if b == 0 { 1 } else { 1 << (b - 1) });
            for pl in &all {
                assert!(placement_violations(params, pl).is_empty());
                assert_eq!(pl.blocks(params).iter().sum::<usize>(), b);
            }
        }
    }
}

#[test]
fn exhaustive_small_cases() {
    // Every sequence over U, S_1..S_{q-1}, Z_1..Z_{q-1} for small periods.
    for (q, b) in [(2, 0), (2, 1), (3, 0), (3, 1), (3, 2), (4, 1)] {
        let params = ElephantParams::new(q, b).unwrap();
        let mut alphabet = vec![Sector::Upsilon];
        alphabet.extend((1..q).map(Sector::S));
        alphabet.extend((1..q).map(Sector::Z));
        let len = q + b - 1;
        let total = alphabet.len().pow(len as u32);
        let mut valid = Vec::new();
        for mut code in 0..total {
            let sectors = (0..len)
                .map(|_| {
                    let s = alphabet[code % alphabet.len()];
                    code /= alphabet.len();
                    s
                })
                .collect();
            let pl = SectorPlacement { sectors };
            if placement_violations(params, &pl).is_empty() {
                valid.push(pl);
            }
        }
        let mut listed = enumerate_placements(params);
        valid.sort_by_key(|p| format!("{:?}", p.sectors));
        listed.sort_by_key(|p| format!("{:?}", p.sectors));
        assert_eq!(valid, listed, "q={q} b={b}");
    }
}

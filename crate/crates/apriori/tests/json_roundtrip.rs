//! Serialized inputs and records read back unchanged.

use apriori::cli::{instance_rng, random_quad, RunConfig, Sizes, Suite};
use apriori::elephant::{enumerate_placements, ElephantParams, SectorPlacement};
use apriori::lamination::{random_marking, BlaschkeMap, IdealMarking};
use apriori::pullback::{find_admissible_orbits, OrbitRecord};
use apriori::widths::Quadrilateral;
use proptest::prelude::*;

proptest! {
    #[test]
    fn markings_round_trip(seed in any::<u64>(), p in 3usize..12, gap in 0.0f64..1.0) {
        let m = random_marking(&mut instance_rng(seed, 0, 0), p, gap);
        let back: IdealMarking = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn quadrilaterals_round_trip(seed in any::<u64>()) {
        let q = random_quad(&mut instance_rng(seed, 0, 1));
        let back: Quadrilateral = serde_json::from_str(&serde_json::to_string(&q).unwrap()).unwrap();
        prop_assert_eq!(back, q);
    }

    #[test]
    fn blaschke_maps_round_trip(seed in any::<u64>(), d in 1usize..5) {
        let b = BlaschkeMap::random(&mut instance_rng(seed, 0, 2), d, 0.8);
        let back: BlaschkeMap = serde_json::from_str(&serde_json::to_string(&b).unwrap()).unwrap();
        prop_assert_eq!(back, b);
    }
}

#[test]
fn orbit_records_round_trip() {
    for (q, b) in [(3, 0), (4, 2), (6, 3)] {
        let params = ElephantParams::new(q, b).unwrap();
        for o in find_admissible_orbits(params).unwrap() {
            let r = OrbitRecord::new(params, &o);
            let text = serde_json::to_string(&r).unwrap();
            let back: OrbitRecord = serde_json::from_str(&text).unwrap();
            assert_eq!(back.orbit().unwrap(), o);
            assert_eq!(back, r);
        }
    }
}

#[test]
fn placements_use_sector_labels() {
    let params = ElephantParams::new(3, 1).unwrap();
    let pl = enumerate_placements(params).remove(0);
    let text = serde_json::to_string(&pl).unwrap();
    assert_eq!(text, r#"["S1","S2","Z2"]"#);
    let back: SectorPlacement = serde_json::from_str(&text).unwrap();
    assert_eq!(back, pl);
}

#[test]
fn run_configs_round_trip() {
    let c = RunConfig {
        seed: 42,
        suite: Suite::Pullback,
        delta: Some(0.001),
        sizes: Sizes::smoke(),
        ..RunConfig::default()
    };
    let back = RunConfig::from_json(&serde_json::to_string(&c).unwrap()).unwrap();
    assert_eq!(back, c);
}

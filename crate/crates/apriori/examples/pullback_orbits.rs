//! Admissible angle orbits, pull-off times of horizontal chords and the
//! two-to-one correspondence.

use apriori::elephant::ElephantParams;
use apriori::pullback::{find_admissible_orbits, horizontal_chords, pulloff_time, two_to_one_check, OrbitRecord};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (q, b) in [(3, 0), (4, 1), (5, 2), (6, 0)] {
        let params = ElephantParams::new(q, b)?;
        for o in find_admissible_orbits(params)? {
            let times: Vec<String> = horizontal_chords(&o)
                .iter()
                .map(|c| pulloff_time(&o, c).map_or("cycle".to_string(), |t| t.to_string()))
                .collect();
            let v = two_to_one_check(&o);
            println!(
                "q={q} b={b} θ0 = {}: pull-off times [{}], max fiber {}",
                OrbitRecord::new(params, &o).angles[0],
                times.join(", "),
                v.max_fiber
            );
        }
    }
    Ok(())
}

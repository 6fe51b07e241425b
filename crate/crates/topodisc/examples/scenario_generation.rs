//! Sample one interference-constrained world and look inside it: the
//! geometric user graph, the per-user channel sets carved out by primary
//! users, and the guaranteed common set.
//!
//! ```bash
//! cargo run -p topodisc --example scenario_generation
//! ```

use topodisc::model::intersect_all;
use topodisc::scenario::{generate_scenario, validate_scenario, ScenarioFile, ScenarioParams, ScenarioProvenance};

fn main() {
    let params = ScenarioParams {
        n_channels: 64,
        n_users: 20,
        area_side: 1000.0,
        su_range: 350.0,
        n_pus: 10,
        pu_range: 700.0,
        n_common: 4,
        max_resample_attempts: 1000,
    };

    let (topology_seed, channel_seed) = (1001, 2002);
    let (scenario, placement) =
        generate_scenario(&params, topology_seed, channel_seed).expect("params admit connectivity");

    println!(
        "{} users, {} channels, {} edges (connected: {})",
        scenario.n_users(),
        scenario.n_channels(),
        scenario.topology().edge_count(),
        scenario.topology().is_connected()
    );
    println!(
        "{} primary users placed, common set {}",
        placement.pu_positions.len(),
        scenario.common_set()
    );

    let sizes: Vec<usize> = scenario.channel_sets().map(|s| s.len()).collect();
    println!(
        "channel set sizes: min {} / mean {:.1} / max {}",
        sizes.iter().min().unwrap(),
        sizes.iter().sum::<usize>() as f64 / sizes.len() as f64,
        sizes.iter().max().unwrap()
    );

    let realized = intersect_all(scenario.channel_sets()).unwrap();
    println!(
        "realized global intersection {} (always contains the designated common set)",
        realized
    );

    let violations = validate_scenario(&scenario);
    println!("validation violations: {violations:?}");

    // Scenarios round-trip losslessly through JSON.
    let file = ScenarioFile::from_scenario(
        &scenario,
        ScenarioProvenance {
            master_seed: 0,
            scenario_index: 0,
            topology_seed,
            channel_seed,
        },
    );
    let path = std::env::temp_dir().join("topodisc_scenario.json");
    file.save(&path).unwrap();
    let reloaded = ScenarioFile::load(&path).unwrap().to_scenario().unwrap();
    println!(
        "saved to {} and reloaded identically: {}",
        path.display(),
        reloaded == scenario
    );
}

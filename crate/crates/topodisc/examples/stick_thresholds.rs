//! The stick-together tradeoff, isolated on a three-user chain: locking a
//! merged group onto the intersection of its known sets keeps the group
//! permanently synchronized (anything one member learns reaches the others
//! at the very next slot), but the narrowed set also makes meeting outsiders
//! rarer. Which effect wins depends on how wide the intersection stays, and
//! the thresholds exist to keep the strategy out of the regime where it
//! hurts.
//!
//! ```bash
//! cargo run -p topodisc --example stick_thresholds
//! ```

use topodisc::engine::{run_discovery, EngineConfig};
use topodisc::hop::AlgorithmSpec;
use topodisc::model::{ChannelSet, Scenario, Topology};

fn mean_ttd(scenario: &Scenario, algorithm: AlgorithmSpec, runs: u64) -> f64 {
    let mut total = 0u64;
    for run_seed in 0..runs {
        let r = run_discovery(
            scenario,
            &EngineConfig {
                t_max: 4096,
                algorithm,
                run_seed,
            },
        );
        total += r.ttd.observed().expect("horizon is generous") as u64;
    }
    total as f64 / runs as f64
}

fn chain_scenario(sets: [&[u16]; 3]) -> Scenario {
    Scenario::new(
        64,
        Topology::new(3, [(0, 1), (1, 2)]).unwrap(),
        sets.iter()
            .map(|xs| ChannelSet::new(xs.to_vec()).unwrap())
            .collect(),
        ChannelSet::new(vec![1]).unwrap(),
    )
    .unwrap()
}

fn main() {
    let runs = 8000;

    // End users overlap only on {1, 33}, so their direct meetings are rare
    // and the chain has to relay through the middle. A locked group keeps a
    // workable two-channel beat and drags everyone onto it: whoever meets
    // the group instantly hears everything it knows.
    let relay_bound = chain_scenario([
        &[1, 33, 6, 14, 22, 30, 38, 46],
        &[1, 33, 10, 18, 26, 42, 50, 58],
        &[1, 33, 10, 18, 6, 14, 54, 62],
    ]);

    // Comb-structured sets whose pairwise intersections are slivers: a
    // locked pair shrinks to two channels and starves its meetings with the
    // remaining user.
    let narrow = chain_scenario([
        &[1, 9, 17, 25, 33, 41, 49, 57],
        &[1, 5, 13, 23, 33, 37, 45, 53],
        &[1, 7, 15, 23, 31, 39, 47, 55],
    ]);

    let rules = [
        AlgorithmSpec::PseudoRandomSweep,
        AlgorithmSpec::StickTogether { n_th: 1, k_th: 2 },
        AlgorithmSpec::StickTogether { n_th: 4, k_th: 2 },
        AlgorithmSpec::StickTogether { n_th: 1, k_th: 4 },
    ];

    for (label, scenario) in [("relay-bound chain", &relay_bound), ("narrow overlaps", &narrow)] {
        println!("{label}:");
        for algorithm in rules {
            println!(
                "  {:<12} mean TTD {:>6.2} over {runs} runs",
                algorithm.to_string(),
                mean_ttd(scenario, algorithm, runs)
            );
        }
        println!();
    }

    println!("On the relay-bound chain the eager lock (stick:1,2) wins outright;");
    println!("with narrow overlaps the same lock backfires. Raising the set");
    println!("threshold (stick:4,2) refuses two-channel locks, and a user");
    println!("threshold beyond the population (stick:1,4) can never engage, so");
    println!("it reproduces the plain permuted sweep exactly.");
}

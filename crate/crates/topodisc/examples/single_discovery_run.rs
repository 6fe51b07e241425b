//! One complete discovery run, slot by slot: how fast knowledge percolates
//! from 20 self-aware users to 20 users that each know the whole network.
//!
//! ```bash
//! cargo run -p topodisc --example single_discovery_run
//! ```

use std::sync::Arc;

use topodisc::engine::{run_discovery, step, EngineConfig};
use topodisc::hop::{pseudo_random_sweep, slot_target, AlgorithmSpec, Permutation};
use topodisc::model::{HopDecision, KnowledgeState};
use topodisc::scenario::{generate_scenario, ScenarioParams};
use topodisc::seeding::{derive_seed, streams};

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
    let (scenario, _) = generate_scenario(&params, 7, 8).unwrap();
    let run_seed = 99;

    // Drive the slot loop by hand to watch knowledge grow under the
    // pseudo-random sweep with forward replacement.
    let n = scenario.n_channels();
    let k = scenario.n_users();
    let shared = Permutation::from_seed(derive_seed(run_seed, &[streams::SHARED_PERMUTATION]), n);
    let mut states: Vec<Arc<KnowledgeState>> = (0..k)
        .map(|u| Arc::new(KnowledgeState::initial(u, scenario.channel_set(u).clone())))
        .collect();

    println!("slot | users known (min/mean/max) | edges known (min/max) | complete");
    for t in 1..=n as u32 {
        let decisions: Vec<HopDecision> = (0..k)
            .map(|u| {
                HopDecision::Tune(pseudo_random_sweep(
                    scenario.channel_set(u),
                    &shared,
                    slot_target(t, n),
                    n,
                ))
            })
            .collect();
        states = step(&scenario, &states, &decisions);

        let known: Vec<usize> = states.iter().map(|s| s.n_known_users()).collect();
        let edges: Vec<usize> = states.iter().map(|s| s.n_known_edges()).collect();
        let complete = states.iter().filter(|s| s.is_complete(&scenario)).count();
        println!(
            "{t:>4} | {:>2} / {:>5.1} / {:>2}          | {:>3} / {:>3}           | {complete:>2}/{k}",
            known.iter().min().unwrap(),
            known.iter().sum::<usize>() as f64 / k as f64,
            known.iter().max().unwrap(),
            edges.iter().min().unwrap(),
            edges.iter().max().unwrap(),
        );
        if complete == k {
            break;
        }
    }

    // The engine wraps the same loop and reports the summary times.
    let result = run_discovery(
        &scenario,
        &EngineConfig {
            t_max: n as u32,
            algorithm: AlgorithmSpec::PseudoRandomSweep,
            run_seed,
        },
    );
    println!(
        "\nengine: discovery at slot {:?}, all-user rendezvous at {:?}, {} slots executed",
        result.ttd, result.ttr, result.slots_executed
    );
}

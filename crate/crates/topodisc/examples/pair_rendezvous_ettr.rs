//! Closed-form expected time-to-rendezvous against Monte Carlo pair runs:
//! the per-slot-permutation rule meets at the inverse Jaccard index, the
//! random hopper at n1*n2/n12.
//!
//! ```bash
//! cargo run -p topodisc --example pair_rendezvous_ettr
//! ```

use topodisc::analytics::{ettr_oracle_pi, ettr_oracle_random, ratio_to_f64};
use topodisc::engine::pair_time_to_rendezvous;
use topodisc::harness::sample_pair_sets;
use topodisc::hop::AlgorithmSpec;
use topodisc::seeding::derive_seed;

fn main() {
    let (n, n1, n2, n12) = (64u16, 8usize, 8usize, 4usize);
    let runs = 20_000u32;
    let seed = 2024;

    let sample = sample_pair_sets(n, n1, n2, n12, seed);
    println!(
        "|c1| = {n1}, |c2| = {n2}, |c1 ∩ c2| = {n12} over {n} channels (e.g. {} and {})",
        sample.0, sample.1
    );
    println!(
        "closed forms: inverse Jaccard {} = {}, random {}",
        sample.0.jaccard(&sample.1).unwrap(),
        ratio_to_f64(ettr_oracle_pi(&sample.0, &sample.1).unwrap()),
        ratio_to_f64(ettr_oracle_random(n1 as u64, n2 as u64, n12 as u64).unwrap()),
    );

    for (algorithm, oracle) in [
        (
            AlgorithmSpec::PiRandomized,
            ratio_to_f64(ettr_oracle_pi(&sample.0, &sample.1).unwrap()),
        ),
        (
            AlgorithmSpec::RandomHop,
            ratio_to_f64(ettr_oracle_random(n1 as u64, n2 as u64, n12 as u64).unwrap()),
        ),
    ] {
        let mut total = 0u64;
        for i in 0..runs {
            // Fresh sets each run with the same cardinalities; the closed
            // forms depend only on the counts.
            let (c1, c2) = sample_pair_sets(n, n1, n2, n12, derive_seed(seed, &[1, i as u64]));
            total += pair_time_to_rendezvous(
                &c1,
                &c2,
                algorithm,
                n,
                derive_seed(seed, &[2, i as u64]),
                1_000_000,
            )
            .expect("a shared channel guarantees rendezvous") as u64;
        }
        let mean = total as f64 / runs as f64;
        println!(
            "{algorithm:>8}: mean TTR {mean:.3} over {runs} runs (oracle {oracle}, rel err {:.2}%)",
            (mean - oracle).abs() / oracle * 100.0
        );
    }
}

//! How the lag-1 correlation of rendezvous trials drives the expected wait
//! for the first success: for a fixed per-slot success probability, the
//! expected first-success time of the stationary two-state chain grows
//! strictly with the correlation between consecutive trials.
//!
//! ```bash
//! cargo run -p topodisc --example markov_first_success
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use topodisc::analytics::{simulate_first_success, MarkovParams};

fn main() {
    let p = 0.25;
    println!("per-slot success probability p = {p}\n");
    println!("{:>6} {:>10} {:>12} {:>14}", "p00", "corr ω", "E[T] closed", "E[T] Monte Carlo");

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..10 {
        let p00 = 0.68 + 0.03 * i as f64;
        let m = match MarkovParams::new(p, p00) {
            Ok(m) => m,
            Err(_) => continue,
        };
        let closed = m.expected_first_success().unwrap();
        let runs = 200_000;
        let total: u64 = (0..runs)
            .map(|_| simulate_first_success(&m, &mut rng) as u64)
            .sum();
        println!(
            "{:>6.2} {:>10.3} {:>12.3} {:>14.3}",
            p00,
            m.lag1_correlation(),
            closed,
            total as f64 / runs as f64
        );
    }

    println!(
        "\nzero correlation reduces to independent trials: E[T] = 1/p = {}",
        MarkovParams::iid(p).unwrap().expected_first_success().unwrap()
    );
}

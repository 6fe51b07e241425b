//! Print the first sweep period of every channel-selection rule for two
//! small availability sets, marking the slots where the pair rendezvouses.
//!
//! ```bash
//! cargo run -p topodisc --example hop_sequences
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use topodisc::hop::{
    pi_algorithm, pseudo_random_sweep, random_hop, sweep_basic, sweep_forward_replacement,
    sweep_random_replacement, Permutation,
};
use topodisc::model::{Channel, ChannelSet, HopDecision};
use topodisc::seeding::{derive_seed, streams};

const N: Channel = 12;
const SEED: u64 = 42;

fn main() {
    let c1 = ChannelSet::new(vec![2, 3, 7, 10]).unwrap();
    let c2 = ChannelSet::new(vec![3, 5, 7, 11]).unwrap();
    println!("user 1: {c1}   user 2: {c2}   ring size {N}\n");

    let shared = Permutation::from_seed(derive_seed(SEED, &[streams::SHARED_PERMUTATION]), N);

    let rows: Vec<(&str, Box<dyn Fn(&ChannelSet, usize, Channel) -> HopDecision>)> = vec![
        ("sweep", Box::new(|c, _, t| sweep_basic(c, t))),
        (
            "sweep-random",
            Box::new(move |c, user, t| {
                // A real run advances one stream per user across slots; for a
                // printable table, reseed per slot.
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(
                    SEED,
                    &[streams::USER, user as u64, t as u64],
                ));
                HopDecision::Tune(sweep_random_replacement(c, t, &mut rng))
            }),
        ),
        (
            "sweep-forward",
            Box::new(|c, _, t| HopDecision::Tune(sweep_forward_replacement(c, t, N))),
        ),
        (
            "pi",
            Box::new(|c, _, t| {
                let pi_t = Permutation::from_seed(
                    derive_seed(SEED, &[streams::SLOT_PERMUTATION, t as u64]),
                    N,
                );
                HopDecision::Tune(pi_algorithm(c, &pi_t))
            }),
        ),
        (
            "prs",
            Box::new({
                let shared = shared.clone();
                move |c, _, t| HopDecision::Tune(pseudo_random_sweep(c, &shared, t, N))
            }),
        ),
        (
            "random",
            Box::new(|c, user, t| {
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(
                    SEED,
                    &[streams::USER, user as u64, t as u64],
                ));
                HopDecision::Tune(random_hop(c, &mut rng))
            }),
        ),
    ];

    print!("{:>16}", "slot");
    for t in 1..=N {
        print!("{t:>4}");
    }
    println!();
    print!("{:>16}", "π(t)");
    for t in 1..=N {
        print!("{:>4}", shared.apply(t));
    }
    println!("\n");

    for (name, decide) in &rows {
        for user in 0..2 {
            let set = if user == 0 { &c1 } else { &c2 };
            print!("{name:>14} u{}", user + 1);
            for t in 1..=N {
                match decide(set, user, t) {
                    HopDecision::Tune(c) => print!("{c:>4}"),
                    HopDecision::Idle => print!("{:>4}", "-"),
                }
            }
            println!();
        }
        print!("{:>16}", "meet?");
        for t in 1..=N {
            let a = decide(&c1, 0, t).channel();
            let b = decide(&c2, 1, t).channel();
            print!("{:>4}", if a.is_some() && a == b { "*" } else { "" });
        }
        println!("\n");
    }
}

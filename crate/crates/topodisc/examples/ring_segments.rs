//! The ring view of a pair of availability sets: occupied nodes cut the
//! channel ring into segments, and a forward-replacement sweep rendezvouses
//! exactly when its target falls in a segment ending at a shared channel.
//!
//! ```bash
//! cargo run -p topodisc --example ring_segments
//! ```

use topodisc::analytics::{ring_decompose, SegmentKind};
use topodisc::hop::sweep_forward_replacement;
use topodisc::model::{Channel, ChannelSet};

fn main() {
    let n: Channel = 16;
    let c1 = ChannelSet::new(vec![1, 2, 3, 4, 9, 12]).unwrap();
    let c2 = ChannelSet::new(vec![3, 4, 5, 6, 12, 14]).unwrap();
    println!("user 1: {c1}\nuser 2: {c2}\nring size {n}\n");

    let d = ring_decompose(&c1, &c2, n).unwrap();
    println!(
        "{} segments = |c1| + |c2| - |c1 ∩ c2| = {} + {} - {}; {} rendezvous segments\n",
        d.segment_count(),
        c1.len(),
        c2.len(),
        c1.intersection_size(&c2),
        d.rendezvous_count()
    );
    for s in d.segments() {
        let kind = match s.kind {
            SegmentKind::Rendezvous => "rendezvous",
            SegmentKind::FirstOnly => "user 1 only",
            SegmentKind::SecondOnly => "user 2 only",
        };
        println!("  ends at {:>2}  length {:>2}  {kind}", s.end_channel, s.length);
    }

    println!("\ntarget -> picks (match marked *):");
    for t in 1..=n {
        let a = sweep_forward_replacement(&c1, t, n);
        let b = sweep_forward_replacement(&c2, t, n);
        let matched = a == b;
        assert_eq!(matched, d.kind_at(t) == SegmentKind::Rendezvous);
        println!(
            "  t={t:>2}: user1 -> {a:>2}, user2 -> {b:>2} {}",
            if matched { "*" } else { "" }
        );
    }

    // Expected rendezvous mass: total length of rendezvous segments over n.
    let mass: u32 = d
        .segments()
        .iter()
        .filter(|s| s.kind == SegmentKind::Rendezvous)
        .map(|s| s.length as u32)
        .sum();
    println!(
        "\nfraction of targets that rendezvous: {mass}/{n} = {:.3}",
        mass as f64 / n as f64
    );
}

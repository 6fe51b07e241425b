use crate::hop::forward_pick;
use crate::model::{Channel, ChannelSet};

use super::AnalyticsError;

/// How a ring segment ends: at a channel both users hold, or at a channel
/// exclusive to one of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentKind {
    /// Forward end node is a common channel — a trial landing here
    /// rendezvouses.
    Rendezvous,
    /// Forward end node belongs to the first user only.
    FirstOnly,
    /// Forward end node belongs to the second user only.
    SecondOnly,
}

/// One of the line graphs the occupied nodes cut the `{1..=n}` ring into:
/// the maximal run of ring positions whose forward replacement resolves to
/// `end_channel`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RingSegment {
    pub end_channel: Channel,
    pub kind: SegmentKind,
    /// Number of ring positions in the segment (its end node included).
    pub length: u16,
}

/// Decomposition of the channel ring induced by a pair of availability
/// sets. Segments are listed by ascending end channel; there are
/// `n1 + n2 − n12` of them, `n12` of which are rendezvous segments, and
/// their lengths sum to `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingDecomposition {
    n: Channel,
    occupied: ChannelSet,
    segments: Vec<RingSegment>,
}

impl RingDecomposition {
    pub fn n(&self) -> Channel {
        self.n
    }

    pub fn segments(&self) -> &[RingSegment] {
        &self.segments
    }

    pub fn segment_count(&self) -> usize {
        self.segments.len()
    }

    pub fn rendezvous_count(&self) -> usize {
        self.segments
            .iter()
            .filter(|s| s.kind == SegmentKind::Rendezvous)
            .count()
    }

    /// The segment a sweep targeting `target` falls into: the one ending at
    /// the first occupied node at or after `target` on the ring.
    pub fn segment_at(&self, target: Channel) -> &RingSegment {
        let end = forward_pick(&self.occupied, target, self.n);
        let idx = self
            .segments
            .binary_search_by_key(&end, |s| s.end_channel)
            .expect("every occupied node ends a segment");
        &self.segments[idx]
    }

    pub fn kind_at(&self, target: Channel) -> SegmentKind {
        self.segment_at(target).kind
    }
}

/// Walks the ring `1..=n` and cuts it at every channel held by either user.
/// Each occupied node terminates the segment of all positions since the
/// previous occupied node (cyclically), and the segment's kind is decided
/// by which user(s) hold the end node.
pub fn ring_decompose(
    c1: &ChannelSet,
    c2: &ChannelSet,
    n: Channel,
) -> Result<RingDecomposition, AnalyticsError> {
    let occupied = c1.union(c2);
    if occupied.is_empty() {
        return Err(AnalyticsError::EmptyUnion);
    }
    if occupied.max_label().unwrap() > n {
        return Err(AnalyticsError::InvalidCounts(format!(
            "channel {} outside the {}-ring",
            occupied.max_label().unwrap(),
            n
        )));
    }
    let nodes: Vec<Channel> = occupied.iter().collect();
    let count = nodes.len();
    let mut segments = Vec::with_capacity(count);
    for (i, &end) in nodes.iter().enumerate() {
        let prev = nodes[(i + count - 1) % count];
        let length = if count == 1 {
            n
        } else if i == 0 {
            end + n - prev
        } else {
            end - prev
        };
        let kind = match (c1.contains(end), c2.contains(end)) {
            (true, true) => SegmentKind::Rendezvous,
            (true, false) => SegmentKind::FirstOnly,
            (false, true) => SegmentKind::SecondOnly,
            (false, false) => unreachable!("end node comes from the union"),
        };
        segments.push(RingSegment {
            end_channel: end,
            kind,
            length,
        });
    }
    Ok(RingDecomposition {
        n,
        occupied,
        segments,
    })
}

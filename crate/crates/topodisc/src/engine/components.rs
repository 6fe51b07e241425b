use crate::model::{Topology, UserId};

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }
}

/// Maximal connected components of the subgraph induced by `subset`.
///
/// Members of each component are ascending, and components are ordered by
/// their minimum user id. Users outside `subset` and their edges are
/// ignored.
pub fn connected_components(topology: &Topology, subset: &[UserId]) -> Vec<Vec<UserId>> {
    let mut members: Vec<UserId> = subset.to_vec();
    members.sort_unstable();
    members.dedup();
    components_of_group(&members, |a, b| topology.has_edge(a, b))
}

/// Components of a sorted member list under an arbitrary adjacency oracle.
pub(crate) fn components_of_group<F>(members: &[UserId], adjacent: F) -> Vec<Vec<UserId>>
where
    F: Fn(UserId, UserId) -> bool,
{
    let m = members.len();
    let mut uf = UnionFind::new(m);
    for i in 0..m {
        for j in (i + 1)..m {
            if adjacent(members[i], members[j]) {
                uf.union(i, j);
            }
        }
    }
    let mut groups: Vec<Vec<UserId>> = vec![Vec::new(); m];
    for (i, &user) in members.iter().enumerate() {
        let root = uf.find(i);
        groups[root].push(user);
    }
    let mut out: Vec<Vec<UserId>> = groups.into_iter().filter(|g| !g.is_empty()).collect();
    // Members are already ascending (inserted in sorted order); order the
    // components by their minimum id.
    out.sort_by_key(|g| g[0]);
    out
}

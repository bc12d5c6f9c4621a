use std::collections::BTreeSet;

use crate::graph::Graph;

/// Core number of every node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreDecomposition {
    pub core_number: Vec<usize>,
}

impl CoreDecomposition {
    /// Largest `k` with a non-empty k-core; zero for an empty graph.
    pub fn max_core(&self) -> usize {
        self.core_number.iter().copied().max().unwrap_or(0)
    }
}

/// Exact core numbers by linear-time bucket peeling (Batagelj–Zaversnik).
pub fn core_decomposition(g: &Graph) -> CoreDecomposition {
    let n = g.node_count();
    let mut deg = g.degrees();
    let max_deg = deg.iter().copied().max().unwrap_or(0);

    // bin[d] = start of the degree-d block in `vert`.
    let mut bin = vec![0usize; max_deg + 2];
    for &d in &deg {
        bin[d + 1] += 1;
    }
    for d in 1..bin.len() {
        bin[d] += bin[d - 1];
    }
    let mut vert = vec![0usize; n];
    let mut pos = vec![0usize; n];
    {
        let mut next = bin.clone();
        for v in 0..n {
            pos[v] = next[deg[v]];
            vert[pos[v]] = v;
            next[deg[v]] += 1;
        }
    }

    for i in 0..n {
        let v = vert[i];
        for &u in g.neighbors(v) {
            if deg[u] > deg[v] {
                // Swap u to the front of its block, then shrink the block.
                let du = deg[u];
                let pu = pos[u];
                let pw = bin[du];
                let w = vert[pw];
                if u != w {
                    vert[pu] = w;
                    pos[w] = pu;
                    vert[pw] = u;
                    pos[u] = pw;
                }
                bin[du] += 1;
                deg[u] -= 1;
            }
        }
    }
    CoreDecomposition { core_number: deg }
}

/// Removal order from repeatedly deleting a minimum-degree node, ties broken
/// by the smallest node id.
pub fn degeneracy_order(g: &Graph) -> Vec<usize> {
    let n = g.node_count();
    let mut deg = g.degrees();
    let max_deg = deg.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); max_deg + 1];
    for v in 0..n {
        buckets[deg[v]].insert(v);
    }
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut current = 0;
    for _ in 0..n {
        while buckets[current].is_empty() {
            current += 1;
        }
        let v = buckets[current].pop_first().expect("non-empty bucket");
        removed[v] = true;
        order.push(v);
        for &u in g.neighbors(v) {
            if removed[u] {
                continue;
            }
            buckets[deg[u]].remove(&u);
            deg[u] -= 1;
            buckets[deg[u]].insert(u);
            current = current.min(deg[u]);
        }
    }
    order
}

/// Position of each node in `order`.
pub(crate) fn positions(order: &[usize]) -> Vec<usize> {
    let mut pos = vec![0; order.len()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    pos
}

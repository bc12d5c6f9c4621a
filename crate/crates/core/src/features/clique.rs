use std::cmp::Reverse;

use super::cores::{degeneracy_order, positions};
use crate::graph::Graph;

/// A clique found by greedy growth from every node over its later
/// neighbors in the degeneracy order.
///
/// Nodes are visited in reverse degeneracy order (densest core first). Each
/// search starts from `{v}` with the candidates being neighbors of `v`
/// removed after it, and repeatedly adds the candidate adjacent to the most
/// other candidates (lowest id on ties). The largest clique seen is returned,
/// or an empty vector for the empty graph.
pub fn greedy_clique(g: &Graph) -> Vec<usize> {
    let order = degeneracy_order(g);
    let pos = positions(&order);
    let mut best: Vec<usize> = Vec::new();

    for &v in order.iter().rev() {
        let mut candidates: Vec<usize> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| pos[u] > pos[v])
            .collect();
        if candidates.len() < best.len() {
            continue;
        }
        let mut clique = vec![v];
        while !candidates.is_empty() {
            let (pick, _) = candidates
                .iter()
                .map(|&u| (u, intersection_size(g.neighbors(u), &candidates)))
                .max_by_key(|&(u, links)| (links, Reverse(u)))
                .expect("candidates non-empty");
            clique.push(pick);
            let nbrs = g.neighbors(pick);
            candidates.retain(|u| nbrs.binary_search(u).is_ok());
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best.sort_unstable();
    best
}

/// Size of [`greedy_clique`]: a lower bound on the maximum clique.
pub fn clique_lower_bound(g: &Graph) -> usize {
    greedy_clique(g).len()
}

fn intersection_size(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

//! Brute-force reference computations on an adjacency matrix. Deliberately
//! naive and independent of the library's graph type.

#![allow(dead_code)]

pub struct Adjacency {
    pub n: usize,
    pub a: Vec<Vec<bool>>,
}

impl Adjacency {
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Self {
        let mut a = vec![vec![false; n]; n];
        for &(u, v) in pairs {
            if u != v {
                a[u][v] = true;
                a[v][u] = true;
            }
        }
        Self { n, a }
    }

    pub fn degree(&self, v: usize) -> usize {
        self.a[v].iter().filter(|&&x| x).count()
    }

    pub fn edges(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    pub fn nbrs(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&u| self.a[v][u]).collect()
    }
}

/// Reference values for all fifteen features plus exact clique and
/// chromatic numbers.
#[derive(Debug, Clone)]
pub struct Expected {
    pub nodes: u64,
    pub edges: u64,
    pub density: f64,
    pub max_degree: u64,
    pub min_degree: u64,
    pub avg_degree: f64,
    pub assortativity: f64,
    pub total_triangles: u64,
    pub avg_triangles: f64,
    pub max_triangles: u64,
    pub avg_clustering: f64,
    pub transitivity: f64,
    pub max_kcore: u64,
    pub greedy_clique: u64,
    pub greedy_colors: u64,
    pub max_clique: u64,
    pub chromatic: u64,
}

pub fn per_node_triangles(g: &Adjacency) -> (u64, Vec<u64>) {
    let mut total = 0;
    let mut per = vec![0u64; g.n];
    for i in 0..g.n {
        for j in i + 1..g.n {
            for k in j + 1..g.n {
                if g.a[i][j] && g.a[j][k] && g.a[i][k] {
                    total += 1;
                    per[i] += 1;
                    per[j] += 1;
                    per[k] += 1;
                }
            }
        }
    }
    (total, per)
}

/// Pearson correlation over the (deg u, deg v) pairs of both orientations
/// of every edge, computed with two separate means and deviations.
pub fn pearson_assortativity(g: &Adjacency) -> f64 {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for u in 0..g.n {
        for v in 0..g.n {
            if g.a[u][v] {
                xs.push(g.degree(u) as f64);
                ys.push(g.degree(v) as f64);
            }
        }
    }
    if xs.is_empty() {
        return 0.0;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 || syy == 0.0 {
        return 0.0;
    }
    sxy / (sxx * syy).sqrt()
}

/// Largest k whose k-core is non-empty, by repeated peeling at every k.
pub fn max_kcore(g: &Adjacency) -> u64 {
    let mut best = 0;
    for k in 0..=g.n {
        let mut alive = vec![true; g.n];
        loop {
            let doomed: Vec<usize> = (0..g.n)
                .filter(|&v| alive[v] && (0..g.n).filter(|&u| alive[u] && g.a[v][u]).count() < k)
                .collect();
            if doomed.is_empty() {
                break;
            }
            for v in doomed {
                alive[v] = false;
            }
        }
        if alive.iter().any(|&x| x) {
            best = k as u64;
        }
    }
    best
}

/// Repeatedly removes the node of least remaining degree, smallest id
/// first on ties.
pub fn degeneracy_order(g: &Adjacency) -> Vec<usize> {
    let mut alive = vec![true; g.n];
    let mut order = Vec::with_capacity(g.n);
    for _ in 0..g.n {
        let v = (0..g.n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| ((0..g.n).filter(|&u| alive[u] && g.a[v][u]).count(), v))
            .unwrap();
        alive[v] = false;
        order.push(v);
    }
    order
}

/// Greedy clique: from each node in reverse removal order, grow a clique
/// among its later neighbors, always taking the candidate adjacent to the
/// most other candidates (smallest id on ties). Returns the largest size.
pub fn greedy_clique_size(g: &Adjacency) -> u64 {
    let order = degeneracy_order(g);
    let mut pos = vec![0; g.n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut best = 0;
    for &v in order.iter().rev() {
        let mut cand: Vec<usize> = g.nbrs(v).into_iter().filter(|&u| pos[u] > pos[v]).collect();
        let mut size = 1;
        while !cand.is_empty() {
            let mut pick = cand[0];
            let mut pick_links = 0;
            let mut first = true;
            for &u in &cand {
                let links = cand.iter().filter(|&&w| g.a[u][w]).count();
                if first || links > pick_links || (links == pick_links && u < pick) {
                    pick = u;
                    pick_links = links;
                    first = false;
                }
            }
            size += 1;
            cand.retain(|&w| g.a[pick][w]);
        }
        best = best.max(size);
    }
    best
}

/// Colors in reverse removal order with the smallest free color; returns
/// the number of colors used.
pub fn greedy_colors(g: &Adjacency) -> u64 {
    let mut color: Vec<Option<usize>> = vec![None; g.n];
    for &v in degeneracy_order(g).iter().rev() {
        let used: Vec<usize> = g.nbrs(v).iter().filter_map(|&u| color[u]).collect();
        color[v] = Some((0..).find(|c| !used.contains(c)).unwrap());
    }
    color
        .iter()
        .map(|c| c.unwrap() as u64 + 1)
        .max()
        .unwrap_or(0)
}

/// Exact maximum clique by exhaustive branching.
pub fn max_clique(g: &Adjacency) -> u64 {
    fn grow(g: &Adjacency, clique: usize, cand: &[usize], best: &mut usize) {
        if clique + cand.len() <= *best {
            return;
        }
        if cand.is_empty() {
            *best = clique;
            return;
        }
        for (i, &v) in cand.iter().enumerate() {
            let next: Vec<usize> = cand[i + 1..]
                .iter()
                .copied()
                .filter(|&u| g.a[v][u])
                .collect();
            grow(g, clique + 1, &next, best);
        }
    }
    let mut best = 0;
    let all: Vec<usize> = (0..g.n).collect();
    grow(g, 0, &all, &mut best);
    best as u64
}

/// Exact chromatic number: subset dynamic programming over independent
/// sets for small graphs, backtracking over k = 1, 2, ... otherwise.
pub fn chromatic_number(g: &Adjacency) -> u64 {
    if g.n <= 16 {
        chromatic_by_subsets(g)
    } else {
        chromatic_by_backtracking(g)
    }
}

/// `colors[S]` is the fewest independent sets covering `S`; the set holding
/// the lowest node of `S` is enumerated explicitly. O(3^n).
fn chromatic_by_subsets(g: &Adjacency) -> u64 {
    let full = 1usize << g.n;
    let independent: Vec<bool> = (0..full)
        .map(|s| {
            (0..g.n).all(|u| s >> u & 1 == 0 || (u + 1..g.n).all(|v| s >> v & 1 == 0 || !g.a[u][v]))
        })
        .collect();
    let mut colors = vec![u64::MAX; full];
    colors[0] = 0;
    for s in 1..full {
        let low = s & s.wrapping_neg();
        let rest = s ^ low;
        // Subsets of `rest`, each joined with the lowest node.
        let mut sub = rest;
        loop {
            let class = sub | low;
            if independent[class] && colors[s ^ class] != u64::MAX {
                colors[s] = colors[s].min(colors[s ^ class] + 1);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    colors[full - 1]
}

fn chromatic_by_backtracking(g: &Adjacency) -> u64 {
    fn colorable(
        g: &Adjacency,
        order: &[usize],
        i: usize,
        k: usize,
        color: &mut Vec<usize>,
    ) -> bool {
        if i == order.len() {
            return true;
        }
        let v = order[i];
        // Symmetry breaking: the first node of each search uses color 0.
        let top = if i == 0 { 1 } else { k };
        for c in 0..top {
            if order[..i].iter().all(|&u| !(g.a[v][u] && color[u] == c)) {
                color[v] = c;
                if colorable(g, order, i + 1, k, color) {
                    return true;
                }
            }
        }
        color[v] = usize::MAX;
        false
    }
    if g.n == 0 {
        return 0;
    }
    let mut order: Vec<usize> = (0..g.n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    (1..=g.n as u64)
        .find(|&k| colorable(g, &order, 0, k as usize, &mut vec![usize::MAX; g.n]))
        .unwrap()
}

pub fn expected(g: &Adjacency) -> Expected {
    let n = g.n;
    let m = g.edges();
    let degs: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let (total, per) = per_node_triangles(g);
    let local: Vec<f64> = (0..n)
        .map(|v| {
            let d = degs[v];
            if d < 2 {
                return 0.0;
            }
            let nb = g.nbrs(v);
            let mut closed = 0;
            for i in 0..nb.len() {
                for j in i + 1..nb.len() {
                    if g.a[nb[i]][nb[j]] {
                        closed += 1;
                    }
                }
            }
            closed as f64 / (d * (d - 1) / 2) as f64
        })
        .collect();
    let wedges: usize = degs.iter().map(|&d| d * d.saturating_sub(1) / 2).sum();
    Expected {
        nodes: n as u64,
        edges: m as u64,
        density: if n < 2 {
            0.0
        } else {
            m as f64 / (n * (n - 1) / 2) as f64
        },
        max_degree: *degs.iter().max().unwrap() as u64,
        min_degree: *degs.iter().min().unwrap() as u64,
        avg_degree: 2.0 * m as f64 / n as f64,
        assortativity: pearson_assortativity(g),
        total_triangles: total,
        avg_triangles: per.iter().sum::<u64>() as f64 / n as f64,
        max_triangles: *per.iter().max().unwrap(),
        avg_clustering: local.iter().sum::<f64>() / n as f64,
        transitivity: if wedges == 0 {
            0.0
        } else {
            3.0 * total as f64 / wedges as f64
        },
        max_kcore: max_kcore(g),
        greedy_clique: greedy_clique_size(g),
        greedy_colors: greedy_colors(g),
        max_clique: max_clique(g),
        chromatic: chromatic_number(g),
    }
}

/// Mismatches between extracted features and the oracle, as messages.
/// Integer features must agree exactly and reals within `tol`.
pub fn compare(f: &netclass::FeatureVector, e: &Expected, tol: f64) -> Vec<String> {
    let mut bad = Vec::new();
    let ints = [
        ("nodes", f.nodes, e.nodes),
        ("edges", f.edges, e.edges),
        ("max_degree", f.max_degree, e.max_degree),
        ("min_degree", f.min_degree, e.min_degree),
        ("total_triangles", f.total_triangles, e.total_triangles),
        ("max_triangles", f.max_triangles, e.max_triangles),
        ("max_kcore", f.max_kcore, e.max_kcore),
        ("max_clique_lb", f.max_clique_lb, e.greedy_clique),
        ("chromatic_number", f.chromatic_number, e.greedy_colors),
    ];
    for (name, got, want) in ints {
        if got != want {
            bad.push(format!("{name}: got {got}, want {want}"));
        }
    }
    let reals = [
        ("density", f.density, e.density),
        ("avg_degree", f.avg_degree, e.avg_degree),
        ("assortativity", f.assortativity, e.assortativity),
        ("avg_triangles", f.avg_triangles, e.avg_triangles),
        (
            "avg_clustering_coeff",
            f.avg_clustering_coeff,
            e.avg_clustering,
        ),
        (
            "frac_closed_triangles",
            f.frac_closed_triangles,
            e.transitivity,
        ),
    ];
    for (name, got, want) in reals {
        let close = (got - want).abs() <= tol;
        if !close {
            bad.push(format!("{name}: got {got}, want {want}"));
        }
    }
    if f.max_clique_lb > e.max_clique {
        bad.push(format!(
            "clique bound {} exceeds clique number {}",
            f.max_clique_lb, e.max_clique
        ));
    }
    if f.chromatic_number < e.chromatic {
        bad.push(format!(
            "coloring uses {} < chromatic number {}",
            f.chromatic_number, e.chromatic
        ));
    }
    bad
}

/// Random simple graph on `n` nodes: each pair kept with probability `p`.
pub fn random_pairs<R: rand::Rng>(n: usize, p: f64, rng: &mut R) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                pairs.push((u, v));
            }
        }
    }
    pairs
}

/// Name, node count and edge pairs.
pub type Fixture = (&'static str, usize, Vec<(usize, usize)>);

pub fn fixtures() -> Vec<Fixture> {
    let k = |n: usize| -> Vec<(usize, usize)> {
        (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect()
    };
    let mut k4_pendant = k(4);
    k4_pendant.push((0, 4));
    let k33: Vec<(usize, usize)> = (0..3).flat_map(|u| (3..6).map(move |v| (u, v))).collect();
    vec![
        ("K4", 4, k(4)),
        ("P3", 3, vec![(0, 1), (1, 2)]),
        ("C5", 5, vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]),
        ("S4", 5, vec![(0, 1), (0, 2), (0, 3), (0, 4)]),
        (
            "bowtie",
            5,
            vec![(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)],
        ),
        ("K3,3", 6, k33),
        ("K4+pendant", 5, k4_pendant),
        (
            "karate",
            34,
            netclass::graph::classic::karate_club().edges().collect(),
        ),
    ]
}

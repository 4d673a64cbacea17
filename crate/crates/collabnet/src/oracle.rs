// SPDX-License-Identifier: Apache-2.0

//! Naive reference implementations used by the test suites to validate the
//! fast paths. Everything here favors obviousness over speed and shares no
//! code with the production implementations beyond the graph type: distances
//! come from scratch BFS, betweenness from literal shortest-path
//! enumeration, and eigenvectors from a dense Jacobi solve.

use std::collections::VecDeque;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::CollabGraph;

/// Seeded Erdos-Renyi style random graph G(n, p).
pub fn gnp(n: usize, p: f64, seed: u64) -> CollabGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ids = (0..n).map(|i| format!("n{i:03}")).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    CollabGraph::from_edges(ids, edges).expect("gnp generates a simple graph")
}

/// Seeded random tree via random attachment: node i joins a uniform earlier
/// node.
pub fn random_tree(n: usize, seed: u64) -> CollabGraph {
    assert!(n >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ids = (0..n).map(|i| format!("n{i:03}")).collect();
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (rng.random_range(0..i), i)).collect();
    CollabGraph::from_edges(ids, edges).expect("tree is a simple graph")
}

/// Ring of `k` cliques of size `size`, adjacent cliques joined by one bridge.
/// Returns the graph and the planted community id per node.
pub fn ring_of_cliques(k: usize, size: usize) -> (CollabGraph, Vec<usize>) {
    assert!(k >= 2 && size >= 2);
    let n = k * size;
    let ids = (0..n).map(|i| format!("n{i:03}")).collect();
    let mut edges = Vec::new();
    for c in 0..k {
        let base = c * size;
        for a in 0..size {
            for b in (a + 1)..size {
                edges.push((base + a, base + b));
            }
        }
        let next = (c + 1) % k;
        edges.push((base + size - 1, next * size));
    }
    let planted = (0..n).map(|v| v / size).collect();
    (
        CollabGraph::from_edges(ids, edges).expect("clique ring is simple"),
        planted,
    )
}

fn bfs_distances(g: &CollabGraph, source: usize) -> Vec<i64> {
    let mut dist = vec![-1i64; g.node_count()];
    let mut queue = VecDeque::new();
    dist[source] = 0;
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if dist[w] < 0 {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

// Counts shortest s-t paths and how many pass through each interior node by
// enumerating every shortest path with a DFS over the distance DAG.
fn enumerate_paths(g: &CollabGraph, s: usize, t: usize, dist: &[i64], through: &mut [u64]) -> u64 {
    if dist[t] < 0 {
        return 0;
    }
    let mut total = 0u64;
    let mut path: Vec<usize> = vec![t];
    // DFS from t walking distance levels down toward s.
    fn recurse(
        g: &CollabGraph,
        s: usize,
        dist: &[i64],
        path: &mut Vec<usize>,
        through: &mut [u64],
        total: &mut u64,
    ) {
        let at = *path.last().expect("non-empty path");
        if at == s {
            *total += 1;
            for &v in path.iter().skip(1).take(path.len().saturating_sub(2)) {
                through[v] += 1;
            }
            return;
        }
        for &w in g.neighbors(at) {
            if dist[w] == dist[at] - 1 {
                path.push(w);
                recurse(g, s, dist, path, through, total);
                path.pop();
            }
        }
    }
    recurse(g, s, dist, &mut path, through, &mut total);
    total
}

/// Betweenness by literal enumeration of all shortest paths between every
/// unordered pair, normalized by 2/((n-1)(n-2)).
pub fn betweenness_brute_force(g: &CollabGraph) -> Vec<f64> {
    let n = g.node_count();
    let mut result = vec![0.0f64; n];
    if n <= 2 {
        return result;
    }
    for s in 0..n {
        let dist = bfs_distances(g, s);
        for t in (s + 1)..n {
            let mut through = vec![0u64; n];
            let total = enumerate_paths(g, s, t, &dist, &mut through);
            if total == 0 {
                continue;
            }
            for v in 0..n {
                if through[v] > 0 {
                    result[v] += through[v] as f64 / total as f64;
                }
            }
        }
    }
    let norm = 2.0 / ((n - 1) as f64 * (n - 2) as f64);
    for r in &mut result {
        *r *= norm;
    }
    result
}

/// Raw pair counts through each node on a tree: the unique path count.
pub fn tree_pair_counts(g: &CollabGraph) -> Vec<u64> {
    let n = g.node_count();
    let mut counts = vec![0u64; n];
    for s in 0..n {
        let dist = bfs_distances(g, s);
        for t in (s + 1)..n {
            let mut through = vec![0u64; n];
            let total = enumerate_paths(g, s, t, &dist, &mut through);
            assert!(total <= 1, "not a tree");
            for v in 0..n {
                counts[v] += through[v];
            }
        }
    }
    counts
}

/// Closeness via all-pairs BFS, in the component-scaled form when `scaled`.
pub fn closeness_brute_force(g: &CollabGraph, scaled: bool) -> Vec<f64> {
    let n = g.node_count();
    (0..n)
        .map(|v| {
            let dist = bfs_distances(g, v);
            let reach = dist.iter().filter(|&&d| d >= 0).count();
            if reach < 2 {
                return 0.0;
            }
            let sum: i64 = dist.iter().filter(|&&d| d > 0).sum();
            let k1 = (reach - 1) as f64;
            let within = k1 / sum as f64;
            if scaled {
                k1 / (n - 1) as f64 * within
            } else {
                within
            }
        })
        .collect()
}

/// Clustering coefficient by checking every neighbor pair for an edge.
pub fn clustering_brute_force(g: &CollabGraph) -> Vec<f64> {
    (0..g.node_count())
        .map(|v| {
            let nbrs = g.neighbors(v);
            let d = nbrs.len();
            if d < 2 {
                return 0.0;
            }
            let mut links = 0usize;
            for i in 0..d {
                for j in (i + 1)..d {
                    if g.has_edge(nbrs[i], nbrs[j]) {
                        links += 1;
                    }
                }
            }
            2.0 * links as f64 / (d as f64 * (d as f64 - 1.0))
        })
        .collect()
}

/// Average neighbor degree by direct summation.
pub fn avg_neighbor_degree_brute_force(g: &CollabGraph) -> Vec<f64> {
    (0..g.node_count())
        .map(|v| {
            let nbrs = g.neighbors(v);
            if nbrs.is_empty() {
                return 0.0;
            }
            nbrs.iter().map(|&u| g.degree(u) as f64).sum::<f64>() / nbrs.len() as f64
        })
        .collect()
}

/// Dense symmetric eigen-solve by cyclic Jacobi rotations. Returns
/// (eigenvalues, eigenvectors); eigenvector j is column j.
pub fn jacobi_symmetric(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..200 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p][q] * a[p][q];
            }
        }
        if off < 1e-24 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let eigenvalues = (0..n).map(|i| a[i][i]).collect();
    (eigenvalues, v)
}

/// Per-component dominant eigenvector via the dense Jacobi solve, assembled
/// into a full-graph vector with the same conventions as the fast path:
/// L2 normalization within the component, non-negative orientation, zeros on
/// isolates and size-1 components.
pub fn eigenvector_brute_force(g: &CollabGraph) -> Vec<f64> {
    let n = g.node_count();
    let comps = crate::graph::connected_components(g);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); comps.num_components()];
    for v in 0..n {
        members[comps.component_of[v]].push(v);
    }
    let mut result = vec![0.0; n];
    for nodes in &members {
        let k = nodes.len();
        if k < 2 {
            continue;
        }
        let mut local = std::collections::HashMap::new();
        for (i, &v) in nodes.iter().enumerate() {
            local.insert(v, i);
        }
        let mut a = vec![vec![0.0; k]; k];
        for (i, &v) in nodes.iter().enumerate() {
            for &w in g.neighbors(v) {
                a[i][local[&w]] = 1.0;
            }
        }
        let (eigenvalues, vectors) = jacobi_symmetric(a);
        let dominant = eigenvalues
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.partial_cmp(y.1).expect("finite eigenvalues"))
            .expect("non-empty spectrum")
            .0;
        let mut column: Vec<f64> = (0..k).map(|i| vectors[i][dominant]).collect();
        let norm = column.iter().map(|x| x * x).sum::<f64>().sqrt();
        let sign = if column.iter().sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
        for x in &mut column {
            *x *= sign / norm;
        }
        for (i, &v) in nodes.iter().enumerate() {
            result[v] = column[i];
        }
    }
    result
}

/// Modularity recomputed from the definition, edge by edge.
pub fn modularity_brute_force(g: &CollabGraph, community_of: &[usize]) -> f64 {
    let m = g.edge_count() as f64;
    let n_comms = community_of.iter().copied().max().map_or(0, |c| c + 1);
    let mut intra = vec![0.0f64; n_comms];
    let mut degree = vec![0.0f64; n_comms];
    for v in 0..g.node_count() {
        degree[community_of[v]] += g.degree(v) as f64;
    }
    for (u, v) in g.edges() {
        if community_of[u] == community_of[v] {
            intra[community_of[u]] += 1.0;
        }
    }
    (0..n_comms)
        .map(|c| intra[c] / m - (degree[c] / (2.0 * m)).powi(2))
        .sum()
}

/// Enumerates every partition of `n` items (restricted growth strings) and
/// feeds it to the visitor. Only sane for small n.
pub fn for_each_partition(n: usize, mut visit: impl FnMut(&[usize])) {
    assert!((1..=10).contains(&n), "partition enumeration is exponential");
    let mut assignment = vec![0usize; n];
    loop {
        visit(&assignment);
        // Next restricted growth string.
        let mut i = n;
        loop {
            if i == 1 {
                return;
            }
            i -= 1;
            let max_prefix = assignment[..i].iter().copied().max().unwrap_or(0);
            if assignment[i] <= max_prefix {
                assignment[i] += 1;
                for a in assignment.iter_mut().skip(i + 1) {
                    *a = 0;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_recovers_known_spectrum() {
        // [[2, 1], [1, 2]] has eigenvalues 1 and 3.
        let (mut vals, _) = jacobi_symmetric(vec![vec![2.0, 1.0], vec![1.0, 2.0]]);
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((vals[0] - 1.0).abs() < 1e-10);
        assert!((vals[1] - 3.0).abs() < 1e-10);
    }

    #[test]
    fn partition_enumeration_counts_bell_numbers() {
        let mut count = 0usize;
        for_each_partition(4, |_| count += 1);
        assert_eq!(count, 15); // Bell(4)
        let mut count = 0usize;
        for_each_partition(6, |_| count += 1);
        assert_eq!(count, 203); // Bell(6)
    }

    #[test]
    fn brute_betweenness_on_path() {
        let ids = (0..3).map(|i| format!("n{i}")).collect();
        let g = CollabGraph::from_edges(ids, [(0, 1), (1, 2)]).unwrap();
        let b = betweenness_brute_force(&g);
        assert_eq!(b, vec![0.0, 1.0, 0.0]);
    }
}

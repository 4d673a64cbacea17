// SPDX-License-Identifier: Apache-2.0

#![allow(clippy::needless_range_loop)]

//! Oracle equivalence: the fast measure/community implementations against
//! the naive reference implementations in `collabnet::oracle`, over seeded
//! random graph families.

use collabnet::community::{detect_communities, modularity};
use collabnet::graph::{connected_components, CollabGraph};
use collabnet::measures::{
    all_measures, avg_neighbor_degree, betweenness_centrality, closeness_centrality,
    closeness_centrality_in_component, clustering_coefficient, degree_centrality,
    eigenvector_centrality, MeasureError,
};
use collabnet::model::{Dataset, GroupRecord};
use collabnet::oracle;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn gnp_family() -> Vec<CollabGraph> {
    let mut graphs = Vec::new();
    let mut seed = 100;
    for &p in &[0.1, 0.3, 0.6] {
        for n in [8usize, 13, 21, 34] {
            graphs.push(oracle::gnp(n, p, seed));
            seed += 1;
        }
    }
    graphs
}

#[test]
fn betweenness_matches_path_enumeration() {
    for g in gnp_family() {
        let fast = betweenness_centrality(&g);
        let brute = oracle::betweenness_brute_force(&g);
        for v in 0..g.node_count() {
            assert!(
                (fast[v] - brute[v]).abs() <= 1e-9,
                "betweenness mismatch at node {v}: {} vs {}",
                fast[v],
                brute[v]
            );
        }
    }
}

#[test]
fn closeness_matches_all_pairs_bfs() {
    for g in gnp_family() {
        let brute_scaled = oracle::closeness_brute_force(&g, true);
        let brute_raw = oracle::closeness_brute_force(&g, false);
        for v in 0..g.node_count() {
            assert!((closeness_centrality(&g, v) - brute_scaled[v]).abs() <= 1e-12);
            assert!((closeness_centrality_in_component(&g, v) - brute_raw[v]).abs() <= 1e-12);
        }
    }
}

#[test]
fn clustering_and_neighbor_degree_match_naive_counts() {
    for g in gnp_family() {
        let brute_clu = oracle::clustering_brute_force(&g);
        let brute_and = oracle::avg_neighbor_degree_brute_force(&g);
        for v in 0..g.node_count() {
            assert_eq!(clustering_coefficient(&g, v), brute_clu[v]);
            assert_eq!(avg_neighbor_degree(&g, v), brute_and[v]);
        }
    }
}

#[test]
fn eigenvector_matches_dense_solve_and_residual_bound() {
    for g in gnp_family() {
        let x = eigenvector_centrality(&g, 1e-13, 100_000).unwrap();
        let dense = oracle::eigenvector_brute_force(&g);
        for v in 0..g.node_count() {
            assert!(
                (x[v] - dense[v]).abs() <= 1e-7,
                "eigenvector mismatch at {v}: {} vs {}",
                x[v],
                dense[v]
            );
        }
        // Per-component residual against the Rayleigh quotient.
        let comps = connected_components(&g);
        for c in 0..comps.num_components() {
            let nodes: Vec<usize> = (0..g.node_count())
                .filter(|&v| comps.component_of[v] == c)
                .collect();
            if nodes.len() < 2 {
                continue;
            }
            let ax: Vec<f64> = nodes
                .iter()
                .map(|&v| g.neighbors(v).iter().map(|&w| x[w]).sum::<f64>())
                .collect();
            let lambda: f64 = nodes.iter().zip(&ax).map(|(&v, a)| x[v] * a).sum();
            let residual: f64 = nodes
                .iter()
                .zip(&ax)
                .map(|(&v, a)| (a - lambda * x[v]).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!(residual <= 1e-6, "residual {residual} in component {c}");
        }
    }
}

#[test]
fn eigenvector_nonconvergence_is_reported() {
    let g = oracle::gnp(20, 0.3, 4242);
    let err = eigenvector_centrality(&g, 1e-13, 1).unwrap_err();
    match err {
        MeasureError::EigenvectorNonConvergence { size, .. } => assert!(size >= 2),
        other => panic!("unexpected error {other:?}"),
    }
}

#[test]
fn tree_betweenness_equals_unique_path_counts() {
    // On trees the raw (unnormalized) betweenness of a node is exactly the
    // number of node pairs whose unique path passes through it.
    for seed in 0..50 {
        let n = 5 + (seed as usize % 20);
        let g = oracle::random_tree(n, 7000 + seed);
        let normalized = betweenness_centrality(&g);
        let pair_counts = oracle::tree_pair_counts(&g);
        let unnorm = (n - 1) as f64 * (n - 2) as f64 / 2.0;
        for v in 0..n {
            let raw = normalized[v] * unnorm;
            assert!(
                (raw - pair_counts[v] as f64).abs() <= 1e-6,
                "tree {seed}, node {v}: raw {raw} vs count {}",
                pair_counts[v]
            );
        }
    }
}

fn dataset_for(g: &CollabGraph) -> Dataset {
    Dataset {
        groups: (0..g.node_count())
            .map(|v| GroupRecord {
                group_id: g.group_id(v).to_string(),
                name: g.group_id(v).to_string(),
                creation_year: None,
                genres: vec![],
                languages: vec![],
                members: [format!("m{v}")].into_iter().collect(),
            })
            .collect(),
        success: Default::default(),
    }
}

#[test]
fn measures_are_invariant_under_relabeling() {
    let g = oracle::gnp(30, 0.2, 900);
    let n = g.node_count();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(901);
    perm.shuffle(&mut rng);
    // Shuffled copy: node perm[v] of h corresponds to node v of g.
    let ids: Vec<String> = {
        let mut ids = vec![String::new(); n];
        for v in 0..n {
            ids[perm[v]] = g.group_id(v).to_string();
        }
        ids
    };
    let edges: Vec<(usize, usize)> = g.edges().map(|(u, v)| (perm[u], perm[v])).collect();
    let h = CollabGraph::from_edges(ids, edges).unwrap();

    let rows_g = all_measures(&g, &dataset_for(&g)).unwrap();
    let rows_h = all_measures(&h, &dataset_for(&h)).unwrap();
    for v in 0..n {
        let a = &rows_g[v];
        let b = rows_h
            .iter()
            .find(|r| r.group_id == a.group_id)
            .expect("relabeled row");
        assert_eq!(a.measures.degree, b.measures.degree);
        for (x, y) in [
            (a.measures.degree_centrality, b.measures.degree_centrality),
            (a.measures.avg_neighbor_degree, b.measures.avg_neighbor_degree),
            (a.measures.closeness, b.measures.closeness),
            (a.measures.betweenness, b.measures.betweenness),
            (a.measures.eigenvector, b.measures.eigenvector),
            (a.measures.clustering, b.measures.clustering),
        ] {
            assert!((x - y).abs() <= 1e-9, "{}: {x} vs {y}", a.group_id);
        }
    }
}

#[test]
fn disjoint_union_localizes_or_rescales_measures() {
    let a = oracle::gnp(14, 0.3, 950);
    let b = oracle::gnp(9, 0.4, 951);
    let na = a.node_count();
    let nb = b.node_count();
    let n = na + nb;
    let mut ids: Vec<String> = (0..na).map(|v| format!("a_{}", a.group_id(v))).collect();
    ids.extend((0..nb).map(|v| format!("b_{}", b.group_id(v))));
    let mut edges: Vec<(usize, usize)> = a.edges().collect();
    edges.extend(b.edges().map(|(u, v)| (u + na, v + na)));
    let u = CollabGraph::from_edges(ids, edges).unwrap();

    let eig_a = eigenvector_centrality(&a, 1e-13, 100_000).unwrap();
    let eig_u = eigenvector_centrality(&u, 1e-13, 100_000).unwrap();
    let bet_a = betweenness_centrality(&a);
    let bet_u = betweenness_centrality(&u);
    // Betweenness raw accumulation is local; only the 2/((n-1)(n-2))
    // normalization changes with the union size.
    let bet_rescale = ((na - 1) * (na - 2)) as f64 / ((n - 1) * (n - 2)) as f64;

    for v in 0..na {
        // Purely local measures are identical.
        assert_eq!(a.degree(v), u.degree(v));
        assert_eq!(avg_neighbor_degree(&a, v), avg_neighbor_degree(&u, v));
        assert_eq!(clustering_coefficient(&a, v), clustering_coefficient(&u, v));
        assert!(
            (closeness_centrality_in_component(&a, v) - closeness_centrality_in_component(&u, v))
                .abs()
                <= 1e-12
        );
        assert!((eig_a[v] - eig_u[v]).abs() <= 1e-8);

        // Globally normalized measures change by the exact rescaling.
        assert!(
            (degree_centrality(&u, v) - degree_centrality(&a, v) * (na - 1) as f64 / (n - 1) as f64)
                .abs()
                <= 1e-12
        );
        assert!(
            (closeness_centrality(&u, v)
                - closeness_centrality(&a, v) * (na - 1) as f64 / (n - 1) as f64)
                .abs()
                <= 1e-12
        );
        assert!((bet_u[v] - bet_a[v] * bet_rescale).abs() <= 1e-12);
        if a.degree(v) > 0 {
            assert_ne!(degree_centrality(&u, v), degree_centrality(&a, v));
        }
    }
}

#[test]
fn modularity_matches_brute_force_on_random_partitions() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for g in gnp_family() {
        if g.edge_count() == 0 {
            continue;
        }
        for k in [1usize, 2, 4] {
            let partition: Vec<usize> = (0..g.node_count())
                .map(|_| rand::RngExt::random_range(&mut rng, 0..k))
                .collect();
            let fast = modularity(&g, &partition).unwrap();
            let brute = oracle::modularity_brute_force(&g, &partition);
            assert!((fast - brute).abs() <= 1e-12);
            assert!((-0.5 - 1e-12..1.0).contains(&fast));
        }
    }
}

#[test]
fn two_triangles_partition_is_the_exhaustive_optimum() {
    let ids = (0..6).map(|i| format!("n{i}")).collect();
    let g = CollabGraph::from_edges(ids, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
    let mut best_q = f64::NEG_INFINITY;
    let mut best: Vec<usize> = Vec::new();
    oracle::for_each_partition(6, |assignment| {
        let q = oracle::modularity_brute_force(&g, assignment);
        if q > best_q {
            best_q = q;
            best = assignment.to_vec();
        }
    });
    assert!((best_q - 0.5).abs() <= 1e-12);
    assert_eq!(best, vec![0, 0, 0, 1, 1, 1]);

    let detected = detect_communities(&g, 5);
    assert_eq!(detected.community_of, best);
    assert!((detected.modularity.unwrap() - best_q).abs() <= 1e-12);
}

#[test]
fn louvain_recovers_planted_clique_ring() {
    let (g, planted) = oracle::ring_of_cliques(4, 5);
    let planted_q = oracle::modularity_brute_force(&g, &planted);
    assert!(planted_q >= 0.6, "planted Q {planted_q}");

    let a = detect_communities(&g, 17);
    assert_eq!(a.community_of, planted);
    assert!(a.modularity.unwrap() >= 0.6);

    let b = detect_communities(&g, 17);
    assert_eq!(a, b, "same seed must be byte-identical");

    // Different seeds stay within a small band of each other.
    let qs: Vec<f64> = (0..6)
        .map(|seed| detect_communities(&g, seed).modularity.unwrap())
        .collect();
    let lo = qs.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = qs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    assert!(hi - lo <= 0.05, "Q spread {} over seeds", hi - lo);
}

#[test]
fn louvain_frozen_quality_on_random_graphs() {
    // Golden values: seeded detection is contractually byte-deterministic,
    // so these pin the achieved quality. A silent optimizer regression
    // (e.g. mis-tracking nodes through aggregation) shows up as a drop.
    #[allow(clippy::excessive_precision)]
    let expected = [
        (8003u64, 0.28290842872008326, 6usize),
        (8011, 0.29668505757652069, 6),
        (8024, 0.27399477023319613, 6),
    ];
    for (seed, q, n) in expected {
        let g = oracle::gnp(60, 0.12, seed);
        let p = detect_communities(&g, seed);
        assert_eq!(p.num_communities, n, "seed {seed}");
        assert!(
            (p.modularity.unwrap() - q).abs() <= 1e-12,
            "seed {seed}: Q = {}, expected {q}",
            p.modularity.unwrap()
        );
    }
}

#[test]
fn louvain_never_ends_below_the_trivial_partition_on_connected_graphs() {
    for seed in 0..10 {
        let g = oracle::gnp(24, 0.25, 3000 + seed);
        let comps = connected_components(&g);
        if comps.num_components() != 1 {
            continue;
        }
        let p = detect_communities(&g, seed);
        assert!(
            p.modularity.unwrap() >= -1e-12,
            "Q {} below single-community baseline",
            p.modularity.unwrap()
        );
    }
}

#[test]
fn components_are_bfs_equivalence_classes() {
    for g in gnp_family() {
        let comps = connected_components(&g);
        assert_eq!(comps.sizes.iter().sum::<usize>(), g.node_count());
        for start in 0..g.node_count() {
            // BFS reach must be exactly the component of the start node.
            let mut seen = vec![false; g.node_count()];
            let mut queue = std::collections::VecDeque::from([start]);
            seen[start] = true;
            while let Some(v) = queue.pop_front() {
                for &w in g.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            for v in 0..g.node_count() {
                assert_eq!(
                    seen[v],
                    comps.component_of[v] == comps.component_of[start],
                    "reachability disagrees with components for ({start}, {v})"
                );
            }
        }
    }
}

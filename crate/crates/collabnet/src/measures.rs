// SPDX-License-Identifier: Apache-2.0

//! The six per-node network measures used as predictor variables: degree
//! centrality, average neighbor degree, closeness, betweenness, eigenvector
//! centrality, and clustering coefficient, plus group size as a control.
//!
//! Conventions for degenerate cases: isolates score 0 on every measure,
//! clustering is 0 below degree 2, betweenness is all-zero for n <= 2. This
//! keeps every node usable as a feature row.
//!
//! Closeness uses the component-scaled (Wasserman-Faust) form by default:
//! ((k-1)/(n-1)) * ((k-1)/sum_dist) over the node's component of size k.
//! On a connected graph this reduces to (n-1)/sum_dist. The unscaled
//! within-component form is available via [`MeasureOptions`]; note that the
//! scaled form, like degree centrality, depends on the global node count.
//!
//! Eigenvector centrality is computed per connected component and
//! L2-normalized within the component, so cross-component magnitudes are a
//! convention, not a comparison.

use std::collections::VecDeque;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

use crate::fmt::format_significant;
use crate::graph::{connected_components, CollabGraph};
use crate::model::Dataset;
use crate::parallel;

/// The per-node measure vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeMeasures {
    pub degree: usize,
    pub degree_centrality: f64,
    pub avg_neighbor_degree: f64,
    pub closeness: f64,
    pub betweenness: f64,
    pub eigenvector: f64,
    pub clustering: f64,
    /// Member count of the group, the control variable.
    pub group_size: usize,
}

/// One measures row keyed by group id.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureRow {
    pub group_id: String,
    pub measures: NodeMeasures,
}

#[derive(Debug, Clone, Copy)]
pub struct MeasureOptions {
    /// Scale closeness by component size over graph size (Wasserman-Faust).
    /// When false, closeness is the pure within-component form (k-1)/sum_dist.
    pub closeness_scaled: bool,
    pub eigen_tol: f64,
    pub eigen_max_iter: usize,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        MeasureOptions {
            closeness_scaled: true,
            eigen_tol: 1e-10,
            // Graphs with strong community structure have near-degenerate
            // leading eigenvalues; convergence can take several thousand
            // iterations even though each one is cheap.
            eigen_max_iter: 50_000,
        }
    }
}

#[derive(Debug, Error)]
pub enum MeasureError {
    #[error(
        "eigenvector centrality did not converge after {max_iter} iterations \
         on the component containing {group_id:?} (size {size})"
    )]
    EigenvectorNonConvergence {
        group_id: String,
        size: usize,
        max_iter: usize,
    },
    #[error("graph node {group_id:?} is not present in the dataset")]
    GroupNotInDataset { group_id: String },
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error on {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("{path}: bad measures row: {message}")]
    BadRow { path: PathBuf, message: String },
}

/// Degree normalized by the number of possible connections, deg(v)/(n-1).
/// Defined as 0 when the graph has fewer than two nodes.
pub fn degree_centrality(g: &CollabGraph, v: usize) -> f64 {
    let n = g.node_count();
    if n < 2 {
        return 0.0;
    }
    g.degree(v) as f64 / (n - 1) as f64
}

/// Mean degree over v's neighbors; 0 for a node without neighbors.
pub fn avg_neighbor_degree(g: &CollabGraph, v: usize) -> f64 {
    let nbrs = g.neighbors(v);
    if nbrs.is_empty() {
        return 0.0;
    }
    let total: usize = nbrs.iter().map(|&u| g.degree(u)).sum();
    total as f64 / nbrs.len() as f64
}

fn bfs_distance_sum(g: &CollabGraph, v: usize) -> (usize, u64) {
    let n = g.node_count();
    let mut dist = vec![u32::MAX; n];
    let mut queue = VecDeque::new();
    dist[v] = 0;
    queue.push_back(v);
    let mut reach = 0usize;
    let mut sum = 0u64;
    while let Some(u) = queue.pop_front() {
        reach += 1;
        sum += dist[u] as u64;
        for &w in g.neighbors(u) {
            if dist[w] == u32::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    (reach, sum)
}

fn closeness_from_bfs(reach: usize, sum: u64, n: usize, scaled: bool) -> f64 {
    if reach < 2 {
        return 0.0;
    }
    let k1 = (reach - 1) as f64;
    let within = k1 / sum as f64;
    if scaled {
        (k1 / (n - 1) as f64) * within
    } else {
        within
    }
}

/// Component-scaled (Wasserman-Faust) closeness centrality of one node.
pub fn closeness_centrality(g: &CollabGraph, v: usize) -> f64 {
    let (reach, sum) = bfs_distance_sum(g, v);
    closeness_from_bfs(reach, sum, g.node_count(), true)
}

/// Pure within-component closeness, (k-1)/sum_dist, without global scaling.
pub fn closeness_centrality_in_component(g: &CollabGraph, v: usize) -> f64 {
    let (reach, sum) = bfs_distance_sum(g, v);
    closeness_from_bfs(reach, sum, g.node_count(), false)
}

// Sources are processed in fixed-size blocks; blocks run in parallel and the
// final reduction walks blocks in index order, so the result does not depend
// on the worker count.
const SOURCE_BLOCK: usize = 64;

struct BlockResult {
    betweenness: Vec<f64>,
    // (source, reach, dist_sum) per source in the block
    per_source: Vec<(usize, usize, u64)>,
}

fn brandes_block(g: &CollabGraph, sources: std::ops::Range<usize>) -> BlockResult {
    let n = g.node_count();
    let mut betweenness = vec![0.0f64; n];
    let mut per_source = Vec::with_capacity(sources.len());
    let mut dist = vec![-1i64; n];
    let mut sigma = vec![0.0f64; n];
    let mut delta = vec![0.0f64; n];
    let mut stack: Vec<usize> = Vec::with_capacity(n);
    let mut queue: VecDeque<usize> = VecDeque::with_capacity(n);

    for s in sources {
        stack.clear();
        queue.clear();
        dist[s] = 0;
        sigma[s] = 1.0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for &w in g.neighbors(v) {
                if dist[w] < 0 {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                }
            }
        }
        let mut sum = 0u64;
        for &v in &stack {
            sum += dist[v] as u64;
        }
        per_source.push((s, stack.len(), sum));

        // Reverse pass; predecessors recognized by distance, no pred lists.
        while let Some(w) = stack.pop() {
            for &v in g.neighbors(w) {
                if dist[v] + 1 == dist[w] {
                    delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
                }
            }
            if w != s {
                betweenness[w] += delta[w];
            }
            // w is finished; clear its scratch state.
            dist[w] = -1;
            sigma[w] = 0.0;
            delta[w] = 0.0;
        }
    }
    BlockResult {
        betweenness,
        per_source,
    }
}

fn path_centralities(g: &CollabGraph, closeness_scaled: bool) -> (Vec<f64>, Vec<f64>) {
    let n = g.node_count();
    if n == 0 {
        return (Vec::new(), Vec::new());
    }
    let blocks: Vec<std::ops::Range<usize>> = (0..n)
        .step_by(SOURCE_BLOCK)
        .map(|start| start..(start + SOURCE_BLOCK).min(n))
        .collect();
    let results: Vec<BlockResult> = parallel::install(|| {
        blocks
            .into_par_iter()
            .map(|range| brandes_block(g, range))
            .collect()
    });

    let mut betweenness = vec![0.0f64; n];
    let mut closeness = vec![0.0f64; n];
    for block in &results {
        for (acc, b) in betweenness.iter_mut().zip(&block.betweenness) {
            *acc += b;
        }
        for &(s, reach, sum) in &block.per_source {
            closeness[s] = closeness_from_bfs(reach, sum, n, closeness_scaled);
        }
    }
    if n > 2 {
        // The accumulation counts every unordered pair twice; fold the
        // factor of 1/2 into the 2/((n-1)(n-2)) normalization.
        let norm = 1.0 / ((n - 1) as f64 * (n - 2) as f64);
        for b in &mut betweenness {
            *b *= norm;
        }
    } else {
        betweenness.iter_mut().for_each(|b| *b = 0.0);
    }
    (betweenness, closeness)
}

/// Betweenness centrality for every node (Brandes), normalized to [0,1] by
/// 2/((n-1)(n-2)) over unordered pairs excluding endpoints. All zeros for
/// n <= 2.
pub fn betweenness_centrality(g: &CollabGraph) -> Vec<f64> {
    path_centralities(g, true).0
}

/// Eigenvector centrality per node: power iteration on each connected
/// component of size >= 2, started from the uniform positive vector and
/// L2-normalized within the component. Isolates and size-1 components get 0.
///
/// Iteration runs on A + I, which shifts the spectrum away from the
/// plus/minus eigenvalue pair of bipartite components without changing the
/// eigenvectors. Convergence is successive-iterate L1 difference below
/// `tol * k` for a size-k component.
pub fn eigenvector_centrality(
    g: &CollabGraph,
    tol: f64,
    max_iter: usize,
) -> Result<Vec<f64>, MeasureError> {
    let n = g.node_count();
    let mut scores = vec![0.0f64; n];
    if n == 0 {
        return Ok(scores);
    }
    let comps = connected_components(g);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); comps.num_components()];
    for v in 0..n {
        members[comps.component_of[v]].push(v);
    }
    let mut local = vec![usize::MAX; n];
    for nodes in &members {
        let k = nodes.len();
        if k < 2 {
            continue;
        }
        for (i, &v) in nodes.iter().enumerate() {
            local[v] = i;
        }
        let kf = k as f64;
        let mut x = vec![1.0 / kf.sqrt(); k];
        let mut next = vec![0.0f64; k];
        let mut converged = false;
        for _ in 0..max_iter {
            for (i, &v) in nodes.iter().enumerate() {
                let mut acc = x[i]; // the +I term
                for &w in g.neighbors(v) {
                    acc += x[local[w]];
                }
                next[i] = acc;
            }
            let norm = next.iter().map(|a| a * a).sum::<f64>().sqrt();
            for a in next.iter_mut() {
                *a /= norm;
            }
            let diff: f64 = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
            std::mem::swap(&mut x, &mut next);
            if diff < tol * kf {
                converged = true;
                break;
            }
        }
        if !converged {
            let root = nodes[0];
            return Err(MeasureError::EigenvectorNonConvergence {
                group_id: g.group_id(root).to_string(),
                size: k,
                max_iter,
            });
        }
        for (i, &v) in nodes.iter().enumerate() {
            scores[v] = x[i];
        }
    }
    Ok(scores)
}

/// Fraction of realized edges among v's neighbors, 2T/(d(d-1)); 0 below
/// degree 2.
pub fn clustering_coefficient(g: &CollabGraph, v: usize) -> f64 {
    let d = g.degree(v);
    if d < 2 {
        return 0.0;
    }
    let nbrs = g.neighbors(v);
    let mut triangles = 0usize;
    for (i, &u) in nbrs.iter().enumerate() {
        // Count sorted-list intersection of later neighbors with N(u).
        let rest = &nbrs[i + 1..];
        let mut a = 0;
        let adj_u = g.neighbors(u);
        let mut b = 0;
        while a < rest.len() && b < adj_u.len() {
            match rest[a].cmp(&adj_u[b]) {
                std::cmp::Ordering::Less => a += 1,
                std::cmp::Ordering::Greater => b += 1,
                std::cmp::Ordering::Equal => {
                    triangles += 1;
                    a += 1;
                    b += 1;
                }
            }
        }
    }
    2.0 * triangles as f64 / (d as f64 * (d - 1) as f64)
}

/// Computes the full measures table for a graph built from `ds`, one row per
/// node in node order, with group size joined from the membership roster.
pub fn all_measures(g: &CollabGraph, ds: &Dataset) -> Result<Vec<MeasureRow>, MeasureError> {
    all_measures_with(g, ds, &MeasureOptions::default())
}

pub fn all_measures_with(
    g: &CollabGraph,
    ds: &Dataset,
    opts: &MeasureOptions,
) -> Result<Vec<MeasureRow>, MeasureError> {
    let index = ds.group_index();
    let (betweenness, closeness) = path_centralities(g, opts.closeness_scaled);
    let eigenvector = eigenvector_centrality(g, opts.eigen_tol, opts.eigen_max_iter)?;
    let mut rows = Vec::with_capacity(g.node_count());
    for v in 0..g.node_count() {
        let id = g.group_id(v);
        let &gi = index
            .get(id)
            .ok_or_else(|| MeasureError::GroupNotInDataset {
                group_id: id.to_string(),
            })?;
        rows.push(MeasureRow {
            group_id: id.to_string(),
            measures: NodeMeasures {
                degree: g.degree(v),
                degree_centrality: degree_centrality(g, v),
                avg_neighbor_degree: avg_neighbor_degree(g, v),
                closeness: closeness[v],
                betweenness: betweenness[v],
                eigenvector: eigenvector[v],
                clustering: clustering_coefficient(g, v),
                group_size: ds.groups[gi].members.len(),
            },
        });
    }
    Ok(rows)
}

pub const MEASURES_CSV_HEADER: [&str; 9] = [
    "group_id",
    "degree",
    "degree_centrality",
    "avg_neighbor_degree",
    "closeness",
    "betweenness",
    "eigenvector",
    "clustering",
    "group_size",
];

/// Writes the measures table as CSV; reals carry 12 significant digits.
pub fn write_measures_csv(rows: &[MeasureRow], path: &Path) -> Result<(), MeasureError> {
    let csv_err = |source| MeasureError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(MEASURES_CSV_HEADER).map_err(csv_err)?;
    for row in rows {
        let m = &row.measures;
        w.write_record([
            row.group_id.as_str(),
            &m.degree.to_string(),
            &format_significant(m.degree_centrality, 12),
            &format_significant(m.avg_neighbor_degree, 12),
            &format_significant(m.closeness, 12),
            &format_significant(m.betweenness, 12),
            &format_significant(m.eigenvector, 12),
            &format_significant(m.clustering, 12),
            &m.group_size.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|source| MeasureError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(())
}

pub fn read_measures_csv(path: &Path) -> Result<Vec<MeasureRow>, MeasureError> {
    let csv_err = |source| MeasureError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let bad = |message: String| MeasureError::BadRow {
        path: path.to_path_buf(),
        message,
    };
    let mut rdr = csv::Reader::from_path(path).map_err(csv_err)?;
    {
        let headers = rdr.headers().map_err(csv_err)?;
        if headers.iter().ne(MEASURES_CSV_HEADER) {
            return Err(bad(format!("unexpected header {headers:?}")));
        }
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        if rec.len() != MEASURES_CSV_HEADER.len() {
            return Err(bad(format!("expected {} fields", MEASURES_CSV_HEADER.len())));
        }
        let field = |i: usize| -> Result<f64, MeasureError> {
            rec[i]
                .parse::<f64>()
                .map_err(|e| bad(format!("field {}: {e}", MEASURES_CSV_HEADER[i])))
        };
        rows.push(MeasureRow {
            group_id: rec[0].to_string(),
            measures: NodeMeasures {
                degree: rec[1]
                    .parse()
                    .map_err(|e| bad(format!("field degree: {e}")))?,
                degree_centrality: field(2)?,
                avg_neighbor_degree: field(3)?,
                closeness: field(4)?,
                betweenness: field(5)?,
                eigenvector: field(6)?,
                clustering: field(7)?,
                group_size: rec[8]
                    .parse()
                    .map_err(|e| bad(format!("field group_size: {e}")))?,
            },
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::project_bipartite;
    use crate::model::{Dataset, GroupRecord};

    fn graph(n: usize, edges: &[(usize, usize)]) -> CollabGraph {
        let ids = (0..n).map(|i| format!("g{i}")).collect();
        CollabGraph::from_edges(ids, edges.iter().copied()).unwrap()
    }

    fn star5() -> CollabGraph {
        graph(5, &[(0, 1), (0, 2), (0, 3), (0, 4)])
    }

    #[test]
    fn degree_centrality_cases() {
        let g = graph(4, &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(degree_centrality(&g, 0), 1.0);
        let with_isolate = graph(4, &[(0, 1)]);
        assert_eq!(degree_centrality(&with_isolate, 3), 0.0);
        assert_eq!(degree_centrality(&star5(), 1), 0.25);
        let singleton = graph(1, &[]);
        assert_eq!(degree_centrality(&singleton, 0), 0.0);
    }

    #[test]
    fn avg_neighbor_degree_cases() {
        let g = star5();
        assert_eq!(avg_neighbor_degree(&g, 1), 4.0);
        assert_eq!(avg_neighbor_degree(&g, 0), 1.0);
        // 3-regular: K4
        let k4 = graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        for v in 0..4 {
            assert_eq!(avg_neighbor_degree(&k4, v), 3.0);
        }
    }

    #[test]
    fn closeness_cases() {
        let g = star5();
        assert_eq!(closeness_centrality(&g, 0), 1.0);
        assert!((closeness_centrality(&g, 1) - 4.0 / 7.0).abs() < 1e-15);
        // Size-3 path component inside a 6-node graph; center has distance
        // sum 2, so scaled closeness is (2/5)*(2/2) = 0.4.
        let g = graph(6, &[(0, 1), (1, 2), (3, 4)]);
        assert!((closeness_centrality(&g, 1) - 0.4).abs() < 1e-15);
        assert_eq!(closeness_centrality_in_component(&g, 1), 1.0);
        assert_eq!(closeness_centrality(&g, 5), 0.0);
    }

    #[test]
    fn betweenness_cases() {
        let path3 = graph(3, &[(0, 1), (1, 2)]);
        let b = betweenness_centrality(&path3);
        assert!((b[1] - 1.0).abs() < 1e-15);
        assert_eq!(b[0], 0.0);

        let b = betweenness_centrality(&star5());
        assert!((b[0] - 1.0).abs() < 1e-15);
        for v in 1..5 {
            assert_eq!(b[v], 0.0);
        }

        let k4 = graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        for v in betweenness_centrality(&k4) {
            assert_eq!(v, 0.0);
        }

        let tiny = graph(2, &[(0, 1)]);
        assert_eq!(betweenness_centrality(&tiny), vec![0.0, 0.0]);
    }

    #[test]
    fn eigenvector_symmetric_cases() {
        let c3 = graph(3, &[(0, 1), (1, 2), (2, 0)]);
        let x = eigenvector_centrality(&c3, 1e-12, 1000).unwrap();
        for v in x {
            assert!((v - 1.0 / 3f64.sqrt()).abs() < 1e-9);
        }
        let k5 = graph(
            5,
            &[
                (0, 1), (0, 2), (0, 3), (0, 4), (1, 2),
                (1, 3), (1, 4), (2, 3), (2, 4), (3, 4),
            ],
        );
        let x = eigenvector_centrality(&k5, 1e-12, 1000).unwrap();
        for v in x {
            assert!((v - 1.0 / 5f64.sqrt()).abs() < 1e-9);
        }
    }

    #[test]
    fn eigenvector_star_closed_form() {
        let x = eigenvector_centrality(&star5(), 1e-13, 2000).unwrap();
        assert!((x[0] - 1.0 / 2f64.sqrt()).abs() < 1e-8);
        for v in 1..5 {
            assert!((x[v] - 1.0 / (2.0 * 2f64.sqrt())).abs() < 1e-8);
        }
    }

    #[test]
    fn eigenvector_handles_bipartite_components_and_isolates() {
        // Single edge (bipartite) plus isolate: must converge under A + I.
        let g = graph(3, &[(0, 1)]);
        let x = eigenvector_centrality(&g, 1e-12, 1000).unwrap();
        assert!((x[0] - 1.0 / 2f64.sqrt()).abs() < 1e-9);
        assert!((x[1] - 1.0 / 2f64.sqrt()).abs() < 1e-9);
        assert_eq!(x[2], 0.0);
    }

    #[test]
    fn clustering_cases() {
        assert_eq!(clustering_coefficient(&star5(), 0), 0.0);
        let k4 = graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        for v in 0..4 {
            assert_eq!(clustering_coefficient(&k4, v), 1.0);
        }
        // Paw graph: triangle 0-1-2 plus pendant 3 on node 0.
        let paw = graph(4, &[(0, 1), (0, 2), (1, 2), (0, 3)]);
        assert!((clustering_coefficient(&paw, 0) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(clustering_coefficient(&paw, 3), 0.0);
    }

    fn dataset_for(g: &CollabGraph, sizes: &[usize]) -> Dataset {
        Dataset {
            groups: (0..g.node_count())
                .map(|v| GroupRecord {
                    group_id: g.group_id(v).to_string(),
                    name: g.group_id(v).to_string(),
                    creation_year: None,
                    genres: vec![],
                    languages: vec![],
                    members: (0..sizes[v]).map(|i| format!("m{v}_{i}")).collect(),
                })
                .collect(),
            success: Default::default(),
        }
    }

    #[test]
    fn all_measures_triangle_rows_identical() {
        let g = graph(3, &[(0, 1), (1, 2), (2, 0)]);
        let ds = dataset_for(&g, &[2, 2, 2]);
        let rows = all_measures(&g, &ds).unwrap();
        assert_eq!(rows.len(), 3);
        for r in &rows[1..] {
            assert_eq!(r.measures, rows[0].measures);
        }
    }

    #[test]
    fn all_measures_star_has_two_orbits() {
        let g = star5();
        let ds = dataset_for(&g, &[3, 1, 1, 1, 1]);
        let rows = all_measures(&g, &ds).unwrap();
        let hub = rows[0].measures;
        for r in &rows[2..] {
            assert_eq!(r.measures, rows[1].measures);
        }
        assert_ne!(hub, rows[1].measures);
    }

    #[test]
    fn all_measures_from_projection_joins_group_size() {
        let ds = crate::graph::tests::dataset_from_members(&[
            ("A", &["p1", "p2"]),
            ("B", &["p1"]),
            ("C", &[]),
        ]);
        let g = project_bipartite(&ds);
        let rows = all_measures(&g, &ds).unwrap();
        assert_eq!(rows[0].measures.group_size, 2);
        assert_eq!(rows[2].measures.group_size, 0);
        assert_eq!(rows[2].measures.degree, 0);
        assert_eq!(rows[2].measures.closeness, 0.0);
        assert_eq!(rows[2].measures.eigenvector, 0.0);
    }

    #[test]
    fn measures_csv_round_trip() {
        let g = star5();
        let ds = dataset_for(&g, &[3, 1, 1, 1, 1]);
        let rows = all_measures(&g, &ds).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("measures.csv");
        write_measures_csv(&rows, &path).unwrap();
        let back = read_measures_csv(&path).unwrap();
        assert_eq!(back.len(), rows.len());
        for (a, b) in rows.iter().zip(&back) {
            assert_eq!(a.group_id, b.group_id);
            assert!((a.measures.closeness - b.measures.closeness).abs() < 1e-11);
            assert_eq!(a.measures.degree, b.measures.degree);
        }
    }
}

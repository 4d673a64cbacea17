// SPDX-License-Identifier: Apache-2.0

//! CART decision tree: axis-aligned threshold splits chosen by Gini
//! impurity, majority-class leaves.
//!
//! All tie-breaks are deterministic: candidate features are scanned in
//! ascending index order, thresholds in ascending value order, and leaf
//! majorities resolve to the smallest class index. Samples with feature
//! value <= threshold go left.

use rand::RngExt;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub(crate) enum Node {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        class: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub(crate) nodes: Vec<Node>,
    /// Impurity decrease per feature, weighted by node sample fraction.
    pub(crate) importance: Vec<f64>,
}

fn gini(counts: &[usize], total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let t = total as f64;
    1.0 - counts.iter().map(|&c| (c as f64 / t).powi(2)).sum::<f64>()
}

fn majority_class(counts: &[usize]) -> usize {
    let mut best = 0;
    for (c, &count) in counts.iter().enumerate() {
        if count > counts[best] {
            best = c;
        }
    }
    best
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    gain: f64,
}

// Scans the sampled features for the best Gini-gain threshold among
// midpoints of consecutive distinct values. Returns None when no candidate
// leaves `min_leaf` samples on both sides.
fn find_split(
    x: &[Vec<f64>],
    y: &[usize],
    indices: &[usize],
    features: &[usize],
    n_classes: usize,
    min_leaf: usize,
) -> Option<BestSplit> {
    let n = indices.len();
    let mut parent_counts = vec![0usize; n_classes];
    for &i in indices {
        parent_counts[y[i]] += 1;
    }
    let parent_gini = gini(&parent_counts, n);

    let mut best: Option<BestSplit> = None;
    let mut sorted: Vec<(f64, usize)> = Vec::with_capacity(n);
    for &f in features {
        sorted.clear();
        sorted.extend(indices.iter().map(|&i| (x[i][f], y[i])));
        sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite feature values"));

        let mut left_counts = vec![0usize; n_classes];
        for pos in 1..n {
            left_counts[sorted[pos - 1].1] += 1;
            let (prev, next) = (sorted[pos - 1].0, sorted[pos].0);
            if prev >= next {
                continue;
            }
            if pos < min_leaf || n - pos < min_leaf {
                continue;
            }
            let threshold = prev + (next - prev) / 2.0;
            if threshold >= next {
                // Adjacent floats can round the midpoint onto the right
                // value, which would desynchronize the <= predicate.
                continue;
            }
            let mut gl = 0.0;
            let mut gr = 0.0;
            let t_l = pos as f64;
            let t_r = (n - pos) as f64;
            for (c, &lc) in left_counts.iter().enumerate() {
                let rc = parent_counts[c] - lc;
                gl += (lc as f64 / t_l).powi(2);
                gr += (rc as f64 / t_r).powi(2);
            }
            let weighted = (t_l * (1.0 - gl) + t_r * (1.0 - gr)) / n as f64;
            let gain = parent_gini - weighted;
            // Strict improvement over the incumbent keeps the lowest
            // feature index, then lowest threshold, on exact ties.
            if best.as_ref().is_none_or(|b| gain > b.gain) {
                best = Some(BestSplit {
                    feature: f,
                    threshold,
                    gain,
                });
            }
        }
    }
    best
}

// Draws `k` distinct feature indices (partial Fisher-Yates), returned sorted
// ascending so the split search scans them in index order.
fn sample_features(n_features: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n_features).collect();
    for i in 0..k {
        let j = rng.random_range(i..n_features);
        pool.swap(i, j);
    }
    let mut chosen = pool[..k].to_vec();
    chosen.sort_unstable();
    chosen
}

enum Slot {
    Root,
    Left(usize),
    Right(usize),
}

struct Work {
    indices: Vec<usize>,
    depth: usize,
    slot: Slot,
}

impl DecisionTree {
    /// Grows a tree on the rows selected by `sample_indices` (typically a
    /// bootstrap sample). Recursion stops at purity, `min_leaf`, or
    /// `max_depth`; nodes with no valid candidate split become leaves.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn fit(
        x: &[Vec<f64>],
        y: &[usize],
        sample_indices: &[usize],
        n_classes: usize,
        n_features: usize,
        max_features: usize,
        min_leaf: usize,
        max_depth: Option<usize>,
        rng: &mut ChaCha8Rng,
    ) -> DecisionTree {
        let mut nodes = Vec::new();
        let mut importance = vec![0.0f64; n_features];
        let n_root = sample_indices.len();
        let mut stack = vec![Work {
            indices: sample_indices.to_vec(),
            depth: 0,
            slot: Slot::Root,
        }];

        while let Some(work) = stack.pop() {
            let mut counts = vec![0usize; n_classes];
            for &i in &work.indices {
                counts[y[i]] += 1;
            }
            let n = work.indices.len();
            let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
            let depth_stop = max_depth.is_some_and(|d| work.depth >= d);

            let split = if pure || depth_stop || n < 2 * min_leaf.max(1) {
                None
            } else {
                let features = sample_features(n_features, max_features, rng);
                find_split(x, y, &work.indices, &features, n_classes, min_leaf)
            };

            let node_id = nodes.len();
            match split {
                Some(s) => {
                    importance[s.feature] += n as f64 / n_root as f64 * s.gain;
                    let (left_idx, right_idx): (Vec<usize>, Vec<usize>) = work
                        .indices
                        .iter()
                        .partition(|&&i| x[i][s.feature] <= s.threshold);
                    nodes.push(Node::Split {
                        feature: s.feature,
                        threshold: s.threshold,
                        left: 0,
                        right: 0,
                    });
                    // Right first so the left child is processed (and
                    // numbered) next: deterministic pre-order layout.
                    stack.push(Work {
                        indices: right_idx,
                        depth: work.depth + 1,
                        slot: Slot::Right(node_id),
                    });
                    stack.push(Work {
                        indices: left_idx,
                        depth: work.depth + 1,
                        slot: Slot::Left(node_id),
                    });
                }
                None => {
                    nodes.push(Node::Leaf {
                        class: majority_class(&counts),
                    });
                }
            }
            match work.slot {
                Slot::Root => {}
                Slot::Left(p) => {
                    if let Node::Split { left, .. } = &mut nodes[p] {
                        *left = node_id;
                    }
                }
                Slot::Right(p) => {
                    if let Node::Split { right, .. } = &mut nodes[p] {
                        *right = node_id;
                    }
                }
            }
        }
        DecisionTree { nodes, importance }
    }

    pub(crate) fn predict(&self, features: &[f64]) -> usize {
        let mut at = 0usize;
        loop {
            match &self.nodes[at] {
                Node::Leaf { class } => return *class,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if features[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    };
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn fit_plain(x: &[Vec<f64>], y: &[usize], n_classes: usize) -> DecisionTree {
        let idx: Vec<usize> = (0..x.len()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let nf = x[0].len();
        DecisionTree::fit(x, y, &idx, n_classes, nf, nf, 1, None, &mut rng)
    }

    #[test]
    fn interpolates_duplicate_free_data() {
        // Full-feature CART grown to purity classifies its own training
        // sample perfectly, including an XOR pattern where the first split
        // has zero gain.
        let x = vec![
            vec![0.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
        ];
        let y = vec![0, 1, 1, 0];
        let tree = fit_plain(&x, &y, 2);
        for (row, &label) in x.iter().zip(&y) {
            assert_eq!(tree.predict(row), label);
        }
    }

    #[test]
    fn identical_rows_with_different_labels_become_majority_leaf() {
        let x = vec![vec![1.0], vec![1.0]];
        let y = vec![1, 0];
        let tree = fit_plain(&x, &y, 2);
        assert_eq!(tree.nodes.len(), 1);
        // Tie resolves to the smallest class index.
        assert_eq!(tree.predict(&[1.0]), 0);
    }

    #[test]
    fn max_depth_zero_is_a_single_leaf() {
        let x = vec![vec![0.0], vec![1.0], vec![2.0]];
        let y = vec![0, 1, 1];
        let idx = vec![0, 1, 2];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let tree = DecisionTree::fit(&x, &y, &idx, 2, 1, 1, 1, Some(0), &mut rng);
        assert_eq!(tree.nodes.len(), 1);
        assert_eq!(tree.predict(&[0.0]), 1);
    }

    #[test]
    fn split_thresholds_stay_within_training_range() {
        use rand::RngExt;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x: Vec<Vec<f64>> = (0..120)
            .map(|_| vec![rng.random_range(-4.0..4.0), rng.random_range(10.0..20.0)])
            .collect();
        let y: Vec<usize> = x
            .iter()
            .map(|row| usize::from(row[0] + row[1] > 14.0))
            .collect();
        let tree = fit_plain(&x, &y, 2);
        for node in &tree.nodes {
            if let Node::Split { feature, threshold, .. } = node {
                let lo = x.iter().map(|r| r[*feature]).fold(f64::INFINITY, f64::min);
                let hi = x.iter().map(|r| r[*feature]).fold(f64::NEG_INFINITY, f64::max);
                assert!(
                    (lo..=hi).contains(threshold),
                    "threshold {threshold} outside [{lo}, {hi}] for feature {feature}"
                );
            }
        }
    }

    #[test]
    fn importance_concentrates_on_informative_feature() {
        // Feature 1 is pure signal, feature 0 is constant.
        let x: Vec<Vec<f64>> = (0..40)
            .map(|i| vec![1.0, i as f64])
            .collect();
        let y: Vec<usize> = (0..40).map(|i| usize::from(i >= 20)).collect();
        let tree = fit_plain(&x, &y, 2);
        assert_eq!(tree.importance[0], 0.0);
        assert!(tree.importance[1] > 0.0);
    }
}

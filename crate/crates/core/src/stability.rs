//! Rankings and the three ranking-stability metrics: mean bias, its
//! deviation, and top-k Jaccard overlap.

use std::collections::HashSet;

use thiserror::Error;

use crate::centrality::CentralityVector;
use crate::graph::NodeId;

#[derive(Debug, Error, PartialEq)]
pub enum StabilityError {
    #[error("rank vectors differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("rank vectors need at least two nodes, got {0}")]
    TooSmall(usize),
    #[error("top-k size {k} exceeds node count {n}")]
    TopKTooLarge { k: usize, n: usize },
}

/// Rank of every node, 1 being the most central. Always a permutation of
/// `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankVector(Vec<usize>);

impl RankVector {
    /// Wraps explicit ranks. Panics unless `ranks` is a permutation of `1..=n`.
    pub fn from_ranks(ranks: Vec<usize>) -> Self {
        let mut seen = vec![false; ranks.len()];
        for &r in &ranks {
            assert!(r >= 1 && r <= ranks.len() && !seen[r - 1], "not a rank permutation");
            seen[r - 1] = true;
        }
        RankVector(ranks)
    }

    pub fn ranks(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Nodes holding ranks `1..=k`.
    pub fn top(&self, k: usize) -> HashSet<NodeId> {
        self.0
            .iter()
            .enumerate()
            .filter(|&(_, &r)| r <= k)
            .map(|(v, _)| v)
            .collect()
    }
}

/// Descending-score ordinal ranking; equal scores are ordered by ascending
/// node id.
pub fn rank_nodes(c: &CentralityVector) -> RankVector {
    rank_scores(&c.scores)
}

pub fn rank_scores(scores: &[f64]) -> RankVector {
    let mut order: Vec<NodeId> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    let mut ranks = vec![0; scores.len()];
    for (position, v) in order.into_iter().enumerate() {
        ranks[v] = position + 1;
    }
    RankVector(ranks)
}

fn check_pair(x: &RankVector, y: &RankVector) -> Result<usize, StabilityError> {
    if x.len() != y.len() {
        return Err(StabilityError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(StabilityError::TooSmall(x.len()));
    }
    Ok(x.len())
}

fn displacements<'a>(x: &'a RankVector, y: &'a RankVector) -> impl Iterator<Item = usize> + 'a {
    x.0.iter().zip(&y.0).map(|(&a, &b)| a.abs_diff(b))
}

fn normalizer(n: usize) -> f64 {
    (n * (n - 1)) as f64
}

/// `μ = Σ_i |x_i − y_i| / (n(n − 1))`.
///
/// The signed sum is identically zero for two permutations, hence the
/// absolute displacement.
pub fn mean_bias(x: &RankVector, y: &RankVector) -> Result<f64, StabilityError> {
    let n = check_pair(x, y)?;
    let total: usize = displacements(x, y).sum();
    Ok(total as f64 / normalizer(n))
}

/// `σ = sqrt(Σ_i (|x_i − y_i| − μ)² / (n(n − 1)))`.
pub fn std_bias(x: &RankVector, y: &RankVector) -> Result<f64, StabilityError> {
    let n = check_pair(x, y)?;
    let mu = mean_bias(x, y)?;
    let ss: f64 = displacements(x, y)
        .map(|d| {
            let e = d as f64 - mu;
            e * e
        })
        .sum();
    Ok((ss / normalizer(n)).sqrt())
}

/// `|A ∩ B| / |A ∪ B|` for the top-`k` node sets of `x` and `y`.
/// `k = 0` compares two empty sets and yields 1.
pub fn jaccard_top_k(x: &RankVector, y: &RankVector, k: usize) -> Result<f64, StabilityError> {
    if x.len() != y.len() {
        return Err(StabilityError::LengthMismatch(x.len(), y.len()));
    }
    if k > x.len() {
        return Err(StabilityError::TopKTooLarge { k, n: x.len() });
    }
    if k == 0 {
        return Ok(1.0);
    }
    let a = x.top(k);
    let b = y.top(k);
    let overlap = a.intersection(&b).count();
    Ok(overlap as f64 / (2 * k - overlap) as f64)
}

//! Synthetic scale-free and exponential networks via the erased
//! configuration model, plus a tail-exponent estimator.

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{DegreeSequence, Graph, NodeId};
use crate::randomize::rng_from_seed;

/// Upper bound reported by [`estimate_gamma`] when the tail carries no
/// power-law signal.
pub const GAMMA_CAP: f64 = 20.0;

/// Minimum number of tail nodes [`estimate_gamma`] accepts.
pub const MIN_TAIL: usize = 10;

#[derive(Debug, Error, PartialEq)]
pub enum GenerateError {
    #[error("invalid generator parameters: {0}")]
    InvalidSpec(String),
    #[error("only {found} nodes have degree >= {k_min}; need at least {MIN_TAIL}")]
    InsufficientTail { found: usize, k_min: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DegreeModel {
    ScaleFree { gamma: f64 },
    Exponential { mean_degree: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSpec {
    pub model: DegreeModel,
    pub n: usize,
    pub k_min: usize,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn scale_free(n: usize, gamma: f64, seed: u64) -> Self {
        GeneratorSpec {
            model: DegreeModel::ScaleFree { gamma },
            n,
            k_min: 2,
            seed,
        }
    }

    pub fn exponential(n: usize, mean_degree: f64, seed: u64) -> Self {
        GeneratorSpec {
            model: DegreeModel::Exponential { mean_degree },
            n,
            k_min: 1,
            seed,
        }
    }

    fn validate(&self) -> Result<(), GenerateError> {
        let bad = |msg: String| Err(GenerateError::InvalidSpec(msg));
        if self.n < 2 {
            return bad(format!("need at least 2 nodes, got {}", self.n));
        }
        if self.k_min < 1 || self.k_min > self.n - 1 {
            return bad(format!("k_min must lie in [1, {}], got {}", self.n - 1, self.k_min));
        }
        match self.model {
            DegreeModel::ScaleFree { gamma } if gamma.is_nan() || gamma <= 1.0 => {
                bad(format!("gamma must exceed 1, got {gamma}"))
            }
            DegreeModel::Exponential { mean_degree } if mean_degree.is_nan() || mean_degree <= 0.0 => {
                bad(format!("mean degree must be positive, got {mean_degree}"))
            }
            _ => Ok(()),
        }
    }
}

/// Draws `n` degrees i.i.d. from weights over `k_min..=n-1`.
fn sample_sequence<R: Rng + ?Sized>(
    spec: &GeneratorSpec,
    weight: impl Fn(f64) -> f64,
    rng: &mut R,
) -> Result<DegreeSequence, GenerateError> {
    let support: Vec<usize> = (spec.k_min..spec.n).collect();
    let weights: Vec<f64> = support.iter().map(|&k| weight(k as f64)).collect();
    let dist =
        WeightedIndex::new(&weights).map_err(|e| GenerateError::InvalidSpec(format!("degree distribution: {e}")))?;
    let mut degrees: Vec<usize> = (0..spec.n).map(|_| support[dist.sample(rng)]).collect();
    fix_parity(&mut degrees, rng);
    Ok(DegreeSequence(degrees))
}

/// Makes the degree sum even by adding one to a uniformly chosen node.
/// A node already at `n − 1` is lowered instead so the cap holds.
fn fix_parity<R: Rng + ?Sized>(degrees: &mut [usize], rng: &mut R) {
    if degrees.iter().sum::<usize>() % 2 == 1 {
        let cap = degrees.len() - 1;
        let v = rng.gen_range(0..degrees.len());
        if degrees[v] < cap {
            degrees[v] += 1;
        } else {
            degrees[v] -= 1;
        }
    }
}

/// Discrete power law `P(k) ∝ k^−γ` on `[k_min, n − 1]`.
pub fn sample_powerlaw_degree_sequence<R: Rng + ?Sized>(
    spec: &GeneratorSpec,
    rng: &mut R,
) -> Result<DegreeSequence, GenerateError> {
    spec.validate()?;
    let DegreeModel::ScaleFree { gamma } = spec.model else {
        return Err(GenerateError::InvalidSpec("expected a scale-free spec".into()));
    };
    // Normalizing by k_min keeps the weights away from underflow for large gamma.
    let k0 = spec.k_min as f64;
    sample_sequence(spec, |k| (k / k0).powf(-gamma), rng)
}

/// `exp(−β·k)` rescaled so the largest weight on `[k_min, k_max]` is 1.
fn exponential_weight(beta: f64, k: f64, k_min: usize, k_max: usize) -> f64 {
    let anchor = if beta >= 0.0 { k_min } else { k_max } as f64;
    (-beta * (k - anchor)).exp()
}

/// Mean of `P(k) ∝ exp(−β·k)` on `[k_min, k_max]`.
fn truncated_exponential_mean(beta: f64, k_min: usize, k_max: usize) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for k in k_min..=k_max {
        let w = exponential_weight(beta, k as f64, k_min, k_max);
        num += k as f64 * w;
        den += w;
    }
    num / den
}

/// Decay rate `β = 1/κ` whose truncated exponential has the given mean.
/// Negative rates (rising weights) cover means above the uniform mean.
fn calibrate_rate(mean: f64, k_min: usize, k_max: usize) -> f64 {
    // The mean falls monotonically in β; bracket, then bisect.
    let (mut lo, mut hi) = (-1.0, 1.0);
    while truncated_exponential_mean(lo, k_min, k_max) < mean {
        lo *= 2.0;
    }
    while truncated_exponential_mean(hi, k_min, k_max) > mean {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if truncated_exponential_mean(mid, k_min, k_max) > mean {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Discrete exponential `P(k) ∝ exp(−k/κ)` on `[k_min, n − 1]`, with `κ`
/// chosen so the distribution mean equals `mean_degree`.
pub fn sample_exponential_degree_sequence<R: Rng + ?Sized>(
    spec: &GeneratorSpec,
    rng: &mut R,
) -> Result<DegreeSequence, GenerateError> {
    spec.validate()?;
    let DegreeModel::Exponential { mean_degree } = spec.model else {
        return Err(GenerateError::InvalidSpec("expected an exponential spec".into()));
    };
    let k_max = spec.n - 1;
    if mean_degree <= spec.k_min as f64 || mean_degree >= k_max as f64 {
        return Err(GenerateError::InvalidSpec(format!(
            "mean degree {mean_degree} must lie strictly between k_min = {} and n - 1 = {k_max}",
            spec.k_min
        )));
    }
    let beta = calibrate_rate(mean_degree, spec.k_min, k_max);
    sample_sequence(spec, |k| exponential_weight(beta, k, spec.k_min, k_max), rng)
}

/// Stub-matching realization with self-loops and repeated edges erased.
pub fn configuration_model<R: Rng + ?Sized>(seq: &DegreeSequence, rng: &mut R) -> Result<Graph, GenerateError> {
    if !seq.total().is_multiple_of(2) {
        return Err(GenerateError::InvalidSpec("degree sum must be even".into()));
    }
    let mut stubs: Vec<NodeId> = seq
        .as_slice()
        .iter()
        .enumerate()
        .flat_map(|(v, &k)| std::iter::repeat_n(v, k))
        .collect();
    stubs.shuffle(rng);
    let edges: Vec<(NodeId, NodeId)> = stubs.chunks_exact(2).map(|p| (p[0], p[1])).collect();
    Graph::from_edges(seq.len(), &edges).map_err(|e| GenerateError::InvalidSpec(e.to_string()))
}

/// Continuous maximum-likelihood tail exponent with the usual half-unit
/// correction for discrete data:
///
/// ```text
/// γ̂ = 1 + N / Σ_{k_i ≥ k_min} ln(k_i / (k_min − ½))
/// ```
///
/// A tail with no spread (every tail degree equal to `k_min`) is the
/// `γ → ∞` limit and reports [`GAMMA_CAP`]; estimates are also clamped to it.
pub fn estimate_gamma(g: &Graph, k_min: usize) -> Result<f64, GenerateError> {
    estimate_gamma_from_degrees(g.degrees().as_slice(), k_min)
}

pub fn estimate_gamma_from_degrees(degrees: &[usize], k_min: usize) -> Result<f64, GenerateError> {
    if k_min < 1 {
        return Err(GenerateError::InvalidSpec("k_min must be at least 1".into()));
    }
    let tail: Vec<usize> = degrees.iter().copied().filter(|&k| k >= k_min).collect();
    if tail.len() < MIN_TAIL {
        return Err(GenerateError::InsufficientTail {
            found: tail.len(),
            k_min,
        });
    }
    if tail.iter().all(|&k| k == k_min) {
        return Ok(GAMMA_CAP);
    }
    let shift = k_min as f64 - 0.5;
    let log_sum: f64 = tail.iter().map(|&k| (k as f64 / shift).ln()).sum();
    Ok((1.0 + tail.len() as f64 / log_sum).min(GAMMA_CAP))
}

/// Summary of a generated network; field names are part of the file format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorMetadata {
    pub model: String,
    pub n_target: usize,
    pub n_realized_nonisolated: usize,
    pub m_target: usize,
    pub m_realized: usize,
    pub gamma_target: Option<f64>,
    pub gamma_hat: Option<f64>,
    pub r: Option<f64>,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct GeneratedNetwork {
    pub graph: Graph,
    pub target: DegreeSequence,
    pub metadata: GeneratorMetadata,
}

/// Samples a degree sequence for `spec` and realizes it.
pub fn generate(spec: &GeneratorSpec) -> Result<GeneratedNetwork, GenerateError> {
    let mut rng = rng_from_seed(spec.seed);
    let (target, model, gamma_target) = match spec.model {
        DegreeModel::ScaleFree { gamma } => (
            sample_powerlaw_degree_sequence(spec, &mut rng)?,
            "scale-free",
            Some(gamma),
        ),
        DegreeModel::Exponential { .. } => (sample_exponential_degree_sequence(spec, &mut rng)?, "exponential", None),
    };
    let graph = configuration_model(&target, &mut rng)?;
    let degrees = graph.degrees();
    let metadata = GeneratorMetadata {
        model: model.to_owned(),
        n_target: spec.n,
        n_realized_nonisolated: degrees.as_slice().iter().filter(|&&k| k > 0).count(),
        m_target: target.total() / 2,
        m_realized: graph.edge_count(),
        gamma_target,
        gamma_hat: estimate_gamma(&graph, spec.k_min).ok(),
        r: graph.assortativity(),
        seed: spec.seed,
    };
    Ok(GeneratedNetwork {
        graph,
        target,
        metadata,
    })
}

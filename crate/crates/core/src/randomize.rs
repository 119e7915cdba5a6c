//! Degree-preserving randomization.
//!
//! Both noise models pick two distinct edges uniformly at random and
//! exchange their endpoints, which leaves every node's degree untouched:
//!
//! * model 1 proposes one of the two cross pairings with equal probability;
//! * model 2 proposes the degree-ordered pairing that pushes assortativity
//!   in the requested direction (the two highest-degree endpoints together
//!   to increase it, highest with lowest to decrease it).
//!
//! A proposal is rejected when the four endpoints are not distinct or when
//! a new edge already exists, so the graph stays simple. Plans count
//! *successful* rewires; attempts are bounded by `max_attempts_factor`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeDegreeSums, Graph, NodeId};

/// Default bound on attempts per successful rewire.
pub const DEFAULT_MAX_ATTEMPTS_FACTOR: u64 = 100;

/// Node count from which the automatic model-1 step count is `n` instead of `10n`.
pub const LARGE_NETWORK_THRESHOLD: usize = 2000;

/// Seeded RNG used for every stochastic operation in the crate.
pub type StdRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> StdRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Increase,
    Decrease,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Increase => "increase",
            Direction::Decrease => "decrease",
        })
    }
}

impl FromStr for Direction {
    type Err = PerturbError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "increase" | "inc" | "+" => Ok(Direction::Increase),
            "decrease" | "dec" | "-" => Ok(Direction::Decrease),
            _ => Err(PerturbError::InvalidPlan(format!("unknown direction `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseModel {
    /// Uniform double-edge swaps.
    Uniform,
    /// Assortativity-steered rewiring.
    Steered(Direction),
}

impl NoiseModel {
    pub fn number(self) -> u8 {
        match self {
            NoiseModel::Uniform => 1,
            NoiseModel::Steered(_) => 2,
        }
    }

    pub fn direction(self) -> Option<Direction> {
        match self {
            NoiseModel::Uniform => None,
            NoiseModel::Steered(d) => Some(d),
        }
    }
}

/// Number of successful rewires to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Steps {
    /// `n` for networks of at least 2000 nodes, `10n` otherwise.
    Auto,
    Exact(u64),
}

impl Steps {
    pub fn resolve(self, node_count: usize) -> u64 {
        match self {
            Steps::Exact(s) => s,
            Steps::Auto if node_count >= LARGE_NETWORK_THRESHOLD => node_count as u64,
            Steps::Auto => 10 * node_count as u64,
        }
    }
}

impl fmt::Display for Steps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Steps::Auto => f.write_str("auto"),
            Steps::Exact(s) => write!(f, "{s}"),
        }
    }
}

impl FromStr for Steps {
    type Err = PerturbError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Steps::Auto);
        }
        s.parse()
            .map(Steps::Exact)
            .map_err(|_| PerturbError::InvalidPlan(format!("steps must be `auto` or an integer, got `{s}`")))
    }
}

impl Serialize for Steps {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Steps::Auto => serializer.serialize_str("auto"),
            Steps::Exact(s) => serializer.serialize_u64(*s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PerturbationPlan {
    pub model: NoiseModel,
    pub steps: Steps,
    pub seed: u64,
    pub max_attempts_factor: u64,
}

impl PerturbationPlan {
    pub fn uniform(steps: Steps, seed: u64) -> Self {
        PerturbationPlan {
            model: NoiseModel::Uniform,
            steps,
            seed,
            max_attempts_factor: DEFAULT_MAX_ATTEMPTS_FACTOR,
        }
    }

    pub fn steered(direction: Direction, steps: Steps, seed: u64) -> Self {
        PerturbationPlan {
            model: NoiseModel::Steered(direction),
            steps,
            seed,
            max_attempts_factor: DEFAULT_MAX_ATTEMPTS_FACTOR,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationTrace {
    pub successful_steps: u64,
    pub attempted_steps: u64,
    /// Assortativity at each checkpoint; `None` where it is undefined.
    pub assortativity_series: Vec<Option<f64>>,
}

#[derive(Debug, Error)]
pub enum PerturbError {
    #[error("rewiring needs at least two edges, graph has {0}")]
    TooFewEdges(usize),
    #[error("invalid perturbation plan: {0}")]
    InvalidPlan(String),
    #[error(
        "rewiring saturated after {} successful of {} attempted steps",
        .trace.successful_steps, .trace.attempted_steps
    )]
    Saturated {
        trace: PerturbationTrace,
        partial: Box<Graph>,
    },
}

/// Mutable working copy of a graph for rewiring.
///
/// Holds an indexed edge array for O(1) uniform edge draws next to sorted
/// adjacency lists for O(log d) membership tests and O(d) updates. The sum
/// `Σ k_u·k_v` over edges is maintained incrementally so assortativity can
/// be read at any point without a rescan.
#[derive(Debug, Clone)]
pub struct Rewiring {
    adjacency: Vec<Vec<NodeId>>,
    edges: Vec<(NodeId, NodeId)>,
    labels: Vec<String>,
    sums: EdgeDegreeSums,
}

impl Rewiring {
    pub fn new(g: &Graph) -> Self {
        let edges: Vec<_> = g.edges().collect();
        let mut sums = EdgeDegreeSums::default();
        for &(u, v) in &edges {
            sums.add(g.neighbors(u).len() as u64, g.neighbors(v).len() as u64);
        }
        Rewiring {
            adjacency: g.adjacency().to_vec(),
            edges,
            labels: g.labels().to_vec(),
            sums,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edge stored at `index` in the sampling array.
    pub fn edge(&self, index: usize) -> (NodeId, NodeId) {
        self.edges[index]
    }

    /// Index of the edge `{u, v}` in the sampling array.
    pub fn edge_index(&self, u: NodeId, v: NodeId) -> Option<usize> {
        self.edges
            .iter()
            .position(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u))
    }

    fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v].len()
    }

    fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// `Σ_{(u,v)∈E} k_u·k_v`.
    pub fn degree_product_sum(&self) -> u128 {
        self.sums.product
    }

    pub fn assortativity(&self) -> Option<f64> {
        self.sums.coefficient()
    }

    pub fn snapshot(&self) -> Graph {
        Graph::from_sorted_adjacency(self.adjacency.clone(), self.labels.clone())
    }

    pub fn into_graph(self) -> Graph {
        Graph::from_sorted_adjacency(self.adjacency, self.labels)
    }

    fn draw_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> (usize, usize) {
        let m = self.edges.len();
        let i = rng.gen_range(0..m);
        let mut j = rng.gen_range(0..m - 1);
        if j >= i {
            j += 1;
        }
        (i, j)
    }

    /// Replaces edges `i = (a, b)` and `j = (c, d)` with `(a, d), (b, c)`,
    /// or with `(a, c), (b, d)` when `flip` is set. Returns whether the
    /// rewiring was applied.
    pub fn try_swap(&mut self, i: usize, j: usize, flip: bool) -> bool {
        let (a, b) = self.edges[i];
        let (c, d) = if flip {
            (self.edges[j].1, self.edges[j].0)
        } else {
            self.edges[j]
        };
        self.try_replace(i, j, (a, d), (b, c))
    }

    /// Uniform double-edge swap on a random pair of edges.
    pub fn double_edge_swap_step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> bool {
        let (i, j) = self.draw_pair(rng);
        let flip = rng.gen::<bool>();
        self.try_swap(i, j, flip)
    }

    /// Rewires edges `i` and `j` into the degree-ordered pairing for
    /// `direction`. Rejected when that pairing is already in place.
    pub fn try_assortative(&mut self, i: usize, j: usize, direction: Direction) -> bool {
        let (a, b) = self.edges[i];
        let (c, d) = self.edges[j];
        let mut nodes = [a, b, c, d];
        // Descending degree; ties by id keep the choice deterministic.
        nodes.sort_unstable_by(|&x, &y| self.degree(y).cmp(&self.degree(x)).then(x.cmp(&y)));
        let (first, second) = match direction {
            Direction::Increase => ((nodes[0], nodes[1]), (nodes[2], nodes[3])),
            Direction::Decrease => ((nodes[0], nodes[3]), (nodes[1], nodes[2])),
        };
        let same = |p: (NodeId, NodeId), q: (NodeId, NodeId)| p == q || p == (q.1, q.0);
        if (same(first, (a, b)) && same(second, (c, d))) || (same(first, (c, d)) && same(second, (a, b))) {
            return false;
        }
        self.try_replace(i, j, first, second)
    }

    /// Degree-ordered rewiring on a random pair of edges.
    pub fn assortative_rewire_step<R: Rng + ?Sized>(&mut self, direction: Direction, rng: &mut R) -> bool {
        let (i, j) = self.draw_pair(rng);
        self.try_assortative(i, j, direction)
    }

    fn try_replace(&mut self, i: usize, j: usize, e1: (NodeId, NodeId), e2: (NodeId, NodeId)) -> bool {
        let (a, b) = self.edges[i];
        let (c, d) = self.edges[j];
        if a == c || a == d || b == c || b == d {
            return false;
        }
        if self.has_edge(e1.0, e1.1) || self.has_edge(e2.0, e2.1) {
            return false;
        }
        let k = |v: NodeId| self.degree(v) as u128;
        let removed = k(a) * k(b) + k(c) * k(d);
        let added = k(e1.0) * k(e1.1) + k(e2.0) * k(e2.1);
        self.unlink(a, b);
        self.unlink(c, d);
        self.link(e1.0, e1.1);
        self.link(e2.0, e2.1);
        self.edges[i] = e1;
        self.edges[j] = e2;
        self.sums.product = self.sums.product + added - removed;
        true
    }

    fn unlink(&mut self, u: NodeId, v: NodeId) {
        for (x, y) in [(u, v), (v, u)] {
            let list = &mut self.adjacency[x];
            let pos = list.binary_search(&y).expect("edge present in adjacency");
            list.remove(pos);
        }
    }

    fn link(&mut self, u: NodeId, v: NodeId) {
        for (x, y) in [(u, v), (v, u)] {
            let list = &mut self.adjacency[x];
            let pos = list.binary_search(&y).expect_err("edge absent from adjacency");
            list.insert(pos, y);
        }
    }

    /// Applies up to `target` successful steps of `model`, giving up once
    /// `attempts` reaches `budget`.
    pub(crate) fn advance<R: Rng + ?Sized>(
        &mut self,
        model: NoiseModel,
        target: u64,
        budget: u64,
        progress: &mut Progress,
        rng: &mut R,
    ) -> bool {
        while progress.successful < target {
            if progress.attempted >= budget {
                return false;
            }
            progress.attempted += 1;
            let accepted = match model {
                NoiseModel::Uniform => self.double_edge_swap_step(rng),
                NoiseModel::Steered(direction) => self.assortative_rewire_step(direction, rng),
            };
            if accepted {
                progress.successful += 1;
            }
        }
        true
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Progress {
    pub successful: u64,
    pub attempted: u64,
}

/// Step counts at which `checkpoints` evenly spaced readings fall, ending at
/// `steps`. Repeated counts collapse, so `steps = 0` gives `[0]`.
pub fn checkpoint_schedule(steps: u64, checkpoints: usize) -> Vec<u64> {
    let c = checkpoints.max(1) as u64;
    let mut out: Vec<u64> = (1..=c).map(|i| (steps * i).div_ceil(c)).collect();
    out.dedup();
    out
}

fn check_plan(g: &Graph, plan: &PerturbationPlan) -> Result<u64, PerturbError> {
    let steps = plan.steps.resolve(g.node_count());
    if steps > 0 && g.edge_count() < 2 {
        return Err(PerturbError::TooFewEdges(g.edge_count()));
    }
    Ok(steps)
}

fn run(g: &Graph, plan: &PerturbationPlan, checkpoints: usize) -> Result<(Graph, PerturbationTrace), PerturbError> {
    let steps = check_plan(g, plan)?;
    let budget = plan.max_attempts_factor.saturating_mul(steps);
    let mut rng = rng_from_seed(plan.seed);
    let mut state = Rewiring::new(g);
    let mut progress = Progress::default();
    let mut series = Vec::new();
    for target in checkpoint_schedule(steps, checkpoints) {
        let completed = state.advance(plan.model, target, budget, &mut progress, &mut rng);
        series.push(state.assortativity());
        if !completed {
            return Err(PerturbError::Saturated {
                trace: PerturbationTrace {
                    successful_steps: progress.successful,
                    attempted_steps: progress.attempted,
                    assortativity_series: series,
                },
                partial: Box::new(state.into_graph()),
            });
        }
    }
    let trace = PerturbationTrace {
        successful_steps: progress.successful,
        attempted_steps: progress.attempted,
        assortativity_series: series,
    };
    Ok((state.into_graph(), trace))
}

/// Uniform double-edge swaps on a copy of `g`. The trace records the final
/// assortativity as its single checkpoint.
pub fn noise_model_1(g: &Graph, plan: &PerturbationPlan) -> Result<(Graph, PerturbationTrace), PerturbError> {
    if plan.model != NoiseModel::Uniform {
        return Err(PerturbError::InvalidPlan(
            "noise model 1 requires the uniform model".into(),
        ));
    }
    run(g, plan, 1)
}

/// Assortativity-steered rewiring on a copy of `g`, reading assortativity
/// at `checkpoints` evenly spaced step counts (the last one being `steps`).
pub fn noise_model_2(
    g: &Graph,
    plan: &PerturbationPlan,
    checkpoints: usize,
) -> Result<(Graph, PerturbationTrace), PerturbError> {
    if !matches!(plan.model, NoiseModel::Steered(_)) {
        return Err(PerturbError::InvalidPlan("noise model 2 requires a direction".into()));
    }
    if checkpoints == 0 {
        return Err(PerturbError::InvalidPlan("at least one checkpoint is required".into()));
    }
    run(g, plan, checkpoints)
}

/// Dispatches on `plan.model`.
pub fn perturb(
    g: &Graph,
    plan: &PerturbationPlan,
    checkpoints: usize,
) -> Result<(Graph, PerturbationTrace), PerturbError> {
    match plan.model {
        NoiseModel::Uniform => noise_model_1(g, plan),
        NoiseModel::Steered(_) => noise_model_2(g, plan, checkpoints),
    }
}

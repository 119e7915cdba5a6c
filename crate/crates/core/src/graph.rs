//! Undirected simple graphs with dense node ids, edge-list I/O and the
//! degree-assortativity coefficient.
//!
//! Nodes carry arbitrary string labels in the input; internally every node
//! is a dense index `0..n` and adjacency lists are kept sorted so that
//! neighbourhood intersections are a linear merge.

use std::collections::HashMap;
use std::io::{self, BufRead, Write};

use thiserror::Error;

/// Dense node index.
pub type NodeId = usize;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: expected two node labels, found {found} token(s)")]
    Parse { line: usize, found: usize },
    #[error("edge list contains no edges")]
    Empty,
    #[error("node id {id} out of range for graph with {n} nodes")]
    NodeOutOfRange { id: NodeId, n: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Immutable undirected simple graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<NodeId>>,
    labels: Vec<String>,
    edge_count: usize,
}

/// A graph freshly read from an edge list, with the number of input lines
/// that were discarded while building it.
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: Graph,
    pub duplicates_dropped: usize,
    pub self_loops_dropped: usize,
}

/// Per-node degrees. The sum is even for any sequence realizable by a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSequence(pub Vec<usize>);

impl DegreeSequence {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Degrees sorted ascending, for multiset comparison.
    pub fn sorted(&self) -> Vec<usize> {
        let mut d = self.0.clone();
        d.sort_unstable();
        d
    }
}

impl Graph {
    /// Builds a graph on nodes labelled `"0"..n`, dropping self-loops and
    /// repeated edges. Endpoints must be `< n`.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Self, GraphError> {
        let labels = (0..n).map(|i| i.to_string()).collect();
        Self::build(labels, edges.iter().copied()).map(|loaded| loaded.graph)
    }

    /// Same as [`Graph::from_edges`] but with explicit labels.
    pub fn from_labelled_edges(
        labels: Vec<String>,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<LoadedGraph, GraphError> {
        Self::build(labels, edges)
    }

    fn build(
        labels: Vec<String>,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<LoadedGraph, GraphError> {
        let n = labels.len();
        let mut adjacency = vec![Vec::new(); n];
        let mut self_loops_dropped = 0;
        for (u, v) in edges {
            for id in [u, v] {
                if id >= n {
                    return Err(GraphError::NodeOutOfRange { id, n });
                }
            }
            if u == v {
                self_loops_dropped += 1;
                continue;
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let mut half_duplicates = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            let before = list.len();
            list.dedup();
            half_duplicates += before - list.len();
        }
        let degree_sum: usize = adjacency.iter().map(Vec::len).sum();
        Ok(LoadedGraph {
            graph: Graph {
                adjacency,
                labels,
                edge_count: degree_sum / 2,
            },
            duplicates_dropped: half_duplicates / 2,
            self_loops_dropped,
        })
    }

    /// Rebuilds a graph from already-sorted, symmetric adjacency lists.
    pub(crate) fn from_sorted_adjacency(adjacency: Vec<Vec<NodeId>>, labels: Vec<String>) -> Self {
        debug_assert_eq!(adjacency.len(), labels.len());
        debug_assert!(adjacency.iter().all(|l| l.windows(2).all(|w| w[0] < w[1])));
        let degree_sum: usize = adjacency.iter().map(Vec::len).sum();
        Graph {
            adjacency,
            labels,
            edge_count: degree_sum / 2,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v]
    }

    /// Dense id of a label, by linear scan.
    pub fn id_of(&self, label: &str) -> Option<NodeId> {
        self.labels.iter().position(|l| l == label)
    }

    fn check(&self, v: NodeId) -> Result<(), GraphError> {
        if v < self.node_count() {
            Ok(())
        } else {
            Err(GraphError::NodeOutOfRange {
                id: v,
                n: self.node_count(),
            })
        }
    }

    /// Sorted neighbour ids of `v`. Panics if `v` is out of range.
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adjacency[v]
    }

    pub fn adjacency(&self) -> &[Vec<NodeId>] {
        &self.adjacency
    }

    pub fn degree(&self, v: NodeId) -> Result<usize, GraphError> {
        self.check(v)?;
        Ok(self.adjacency[v].len())
    }

    pub fn degrees(&self) -> DegreeSequence {
        DegreeSequence(self.adjacency.iter().map(Vec::len).collect())
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        u < self.node_count() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// `|N(u) ∩ N(v)|` by merging the two sorted lists.
    pub fn common_neighbors(&self, u: NodeId, v: NodeId) -> Result<usize, GraphError> {
        self.check(u)?;
        self.check(v)?;
        Ok(sorted_intersection_len(&self.adjacency[u], &self.adjacency[v]))
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Relabels nodes so that old node `v` becomes `perm[v]`. Labels travel
    /// with their nodes.
    pub fn permuted(&self, perm: &[NodeId]) -> Graph {
        assert_eq!(perm.len(), self.node_count(), "permutation length");
        let n = self.node_count();
        let mut adjacency = vec![Vec::new(); n];
        let mut labels = vec![String::new(); n];
        for (v, list) in self.adjacency.iter().enumerate() {
            let mut mapped: Vec<NodeId> = list.iter().map(|&u| perm[u]).collect();
            mapped.sort_unstable();
            adjacency[perm[v]] = mapped;
            labels[perm[v]] = self.labels[v].clone();
        }
        Graph::from_sorted_adjacency(adjacency, labels)
    }

    /// Newman's degree-assortativity coefficient, or `None` when every edge
    /// joins nodes of the same degree profile (zero variance, e.g. regular
    /// graphs) or the graph has no edges.
    pub fn assortativity(&self) -> Option<f64> {
        let mut sums = EdgeDegreeSums::default();
        for (u, v) in self.edges() {
            sums.add(self.adjacency[u].len() as u64, self.adjacency[v].len() as u64);
        }
        sums.coefficient()
    }
}

pub(crate) fn sorted_intersection_len(a: &[NodeId], b: &[NodeId]) -> usize {
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

/// Integer edge sums behind the assortativity coefficient.
///
/// With per-edge sums `S_jk = Σ j·k`, `P = Σ (j + k)` and `Q = Σ (j² + k²)`
/// over `m` edges, the coefficient is
///
/// ```text
/// r = (4m·S_jk − P²) / (2m·Q − P²)
/// ```
///
/// which is the half-sum form `[S_jk/m − (P/2m)²] / [Q/2m − (P/2m)²]` with
/// the common factor `4m²` cleared. `P` and `Q` depend only on the degree
/// sequence, so degree-preserving rewiring moves `r` through `S_jk` alone.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct EdgeDegreeSums {
    pub edges: u64,
    pub product: u128,
    pub linear: u128,
    pub square: u128,
}

impl EdgeDegreeSums {
    pub fn add(&mut self, j: u64, k: u64) {
        let (j, k) = (j as u128, k as u128);
        self.edges += 1;
        self.product += j * k;
        self.linear += j + k;
        self.square += j * j + k * k;
    }

    pub fn coefficient(&self) -> Option<f64> {
        if self.edges == 0 {
            return None;
        }
        let m = self.edges as i128;
        let p2 = (self.linear as i128) * (self.linear as i128);
        let denominator = 2 * m * self.square as i128 - p2;
        if denominator == 0 {
            return None;
        }
        let numerator = 4 * m * self.product as i128 - p2;
        Some(numerator as f64 / denominator as f64)
    }
}

/// Reads a whitespace-separated edge list. Blank lines and lines starting
/// with `#` are skipped; node labels get dense ids in order of first
/// appearance.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<LoadedGraph, GraphError> {
    let mut ids: HashMap<String, NodeId> = HashMap::new();
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    let mut intern = |label: &str, labels: &mut Vec<String>| -> NodeId {
        if let Some(&id) = ids.get(label) {
            return id;
        }
        let id = labels.len();
        labels.push(label.to_owned());
        ids.insert(label.to_owned(), id);
        id
    };
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(GraphError::Parse {
                line: idx + 1,
                found: tokens.len(),
            });
        }
        let u = intern(tokens[0], &mut labels);
        let v = intern(tokens[1], &mut labels);
        edges.push((u, v));
    }
    let loaded = Graph::build(labels, edges)?;
    if loaded.graph.edge_count() == 0 {
        return Err(GraphError::Empty);
    }
    Ok(loaded)
}

/// Writes one `label label` line per undirected edge.
pub fn save_edge_list<W: Write>(g: &Graph, mut writer: W) -> Result<(), GraphError> {
    for (u, v) in g.edges() {
        writeln!(writer, "{} {}", g.labels[u], g.labels[v])?;
    }
    writer.flush()?;
    Ok(())
}

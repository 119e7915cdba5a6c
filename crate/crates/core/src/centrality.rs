//! Six local-information centrality measures.
//!
//! Every measure looks at most two hops away from the scored node. All of
//! them are defined as 0 on the degenerate cases (isolated node, degree 1
//! for clustering, no node sharing a neighbour for the topological
//! coefficient) so that scores stay finite and rankings are total.
//!
//! | id    | measure                        |
//! |-------|--------------------------------|
//! | `h`   | H-index                        |
//! | `lc`  | leverage centrality            |
//! | `lse` | local structural entropy (nats)|
//! | `lcc` | local clustering coefficient   |
//! | `tc`  | topological coefficient        |
//! | `lac` | local average connectivity     |

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, NodeId};
use crate::par::{self, Execution};

#[derive(Debug, Error)]
pub enum CentralityError {
    #[error("unknown measure `{0}` (valid: h, lc, lse, lcc, tc, lac, all)")]
    UnknownMeasure(String),
    #[error("no measures requested")]
    NoMeasures,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Measure {
    #[serde(rename = "h")]
    HIndex,
    #[serde(rename = "lc")]
    Leverage,
    #[serde(rename = "lse")]
    LocalStructuralEntropy,
    #[serde(rename = "lcc")]
    LocalClustering,
    #[serde(rename = "tc")]
    TopologicalCoefficient,
    #[serde(rename = "lac")]
    LocalAverageConnectivity,
}

impl Measure {
    pub const ALL: [Measure; 6] = [
        Measure::HIndex,
        Measure::Leverage,
        Measure::LocalStructuralEntropy,
        Measure::LocalClustering,
        Measure::TopologicalCoefficient,
        Measure::LocalAverageConnectivity,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Measure::HIndex => "h",
            Measure::Leverage => "lc",
            Measure::LocalStructuralEntropy => "lse",
            Measure::LocalClustering => "lcc",
            Measure::TopologicalCoefficient => "tc",
            Measure::LocalAverageConnectivity => "lac",
        }
    }

    /// Parses a comma-separated list of ids; `all` expands to every measure.
    /// Duplicates are dropped, first occurrence wins.
    pub fn parse_list(spec: &str) -> Result<Vec<Measure>, CentralityError> {
        let mut out = Vec::new();
        for token in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let add: Vec<Measure> = if token.eq_ignore_ascii_case("all") {
                Measure::ALL.to_vec()
            } else {
                vec![token.parse()?]
            };
            for m in add {
                if !out.contains(&m) {
                    out.push(m);
                }
            }
        }
        if out.is_empty() {
            return Err(CentralityError::NoMeasures);
        }
        Ok(out)
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Measure {
    type Err = CentralityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Measure::ALL
            .into_iter()
            .find(|m| m.id().eq_ignore_ascii_case(s))
            .ok_or_else(|| CentralityError::UnknownMeasure(s.to_owned()))
    }
}

/// Scores of one measure for every node of one graph, indexed by node id.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityVector {
    pub measure: Measure,
    pub scores: Vec<f64>,
}

/// Reusable per-worker buffers sized to the graph.
struct Scratch {
    stamp: Vec<usize>,
    counts: Vec<u32>,
    touched: Vec<NodeId>,
    degrees: Vec<usize>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Scratch {
            stamp: vec![usize::MAX; n],
            counts: vec![0; n],
            touched: Vec::new(),
            degrees: Vec::new(),
        }
    }

    /// Marks `N(v)` so that `is_marked(u, v)` answers adjacency in O(1).
    fn mark_neighbors(&mut self, g: &Graph, v: NodeId) {
        for &u in g.neighbors(v) {
            self.stamp[u] = v;
        }
    }

    fn is_marked(&self, u: NodeId, v: NodeId) -> bool {
        self.stamp[u] == v
    }
}

fn h_index_kernel(g: &Graph, v: NodeId, s: &mut Scratch) -> f64 {
    s.degrees.clear();
    s.degrees.extend(g.neighbors(v).iter().map(|&u| g.neighbors(u).len()));
    s.degrees.sort_unstable_by(|a, b| b.cmp(a));
    s.degrees.iter().enumerate().take_while(|&(i, &d)| d > i).count() as f64
}

fn leverage_kernel(g: &Graph, v: NodeId) -> f64 {
    let kv = g.neighbors(v).len();
    if kv == 0 {
        return 0.0;
    }
    let kv_f = kv as f64;
    let sum: f64 = g
        .neighbors(v)
        .iter()
        .map(|&u| {
            let ku = g.neighbors(u).len() as f64;
            (kv_f - ku) / (kv_f + ku)
        })
        .sum();
    sum / kv_f
}

fn entropy_kernel(g: &Graph, v: NodeId) -> f64 {
    let kv = g.neighbors(v).len();
    if kv == 0 {
        return 0.0;
    }
    let total = (kv + g.neighbors(v).iter().map(|&u| g.neighbors(u).len()).sum::<usize>()) as f64;
    let term = |k: usize| {
        let p = k as f64 / total;
        p * p.ln()
    };
    let sum: f64 = term(kv) + g.neighbors(v).iter().map(|&u| term(g.neighbors(u).len())).sum::<f64>();
    -sum
}

/// Number of edges among the neighbours of `v`.
fn neighbor_links(g: &Graph, v: NodeId, s: &mut Scratch) -> usize {
    s.mark_neighbors(g, v);
    let twice: usize = g
        .neighbors(v)
        .iter()
        .map(|&u| g.neighbors(u).iter().filter(|&&w| s.is_marked(w, v)).count())
        .sum();
    twice / 2
}

fn clustering_kernel(g: &Graph, v: NodeId, s: &mut Scratch) -> f64 {
    let k = g.neighbors(v).len();
    if k < 2 {
        return 0.0;
    }
    let links = neighbor_links(g, v, s);
    (2 * links) as f64 / (k * (k - 1)) as f64
}

fn average_connectivity_kernel(g: &Graph, v: NodeId, s: &mut Scratch) -> f64 {
    let k = g.neighbors(v).len();
    if k == 0 {
        return 0.0;
    }
    // Induced degrees over N(v) sum to twice the induced edge count.
    let links = neighbor_links(g, v, s);
    (2 * links) as f64 / k as f64
}

fn topological_kernel(g: &Graph, v: NodeId, s: &mut Scratch) -> f64 {
    let k = g.neighbors(v).len();
    if k == 0 {
        return 0.0;
    }
    s.mark_neighbors(g, v);
    s.touched.clear();
    for &w in g.neighbors(v) {
        for &u in g.neighbors(w) {
            if u == v {
                continue;
            }
            if s.counts[u] == 0 {
                s.touched.push(u);
            }
            s.counts[u] += 1;
        }
    }
    if s.touched.is_empty() {
        return 0.0;
    }
    let mut total = 0u64;
    for &u in &s.touched {
        total += s.counts[u] as u64 + s.is_marked(u, v) as u64;
        s.counts[u] = 0;
    }
    let mean = total as f64 / s.touched.len() as f64;
    mean / k as f64
}

fn score(g: &Graph, measure: Measure, v: NodeId, s: &mut Scratch) -> f64 {
    match measure {
        Measure::HIndex => h_index_kernel(g, v, s),
        Measure::Leverage => leverage_kernel(g, v),
        Measure::LocalStructuralEntropy => entropy_kernel(g, v),
        Measure::LocalClustering => clustering_kernel(g, v, s),
        Measure::TopologicalCoefficient => topological_kernel(g, v, s),
        Measure::LocalAverageConnectivity => average_connectivity_kernel(g, v, s),
    }
}

fn single(g: &Graph, measure: Measure, v: NodeId) -> Result<f64, GraphError> {
    g.degree(v)?;
    Ok(score(g, measure, v, &mut Scratch::new(g.node_count())))
}

/// Largest `h` such that `v` has at least `h` neighbours of degree `≥ h`.
pub fn h_index(g: &Graph, v: NodeId) -> Result<usize, GraphError> {
    single(g, Measure::HIndex, v).map(|h| h as usize)
}

/// `(1/k_v) Σ_{u∈N(v)} (k_v − k_u)/(k_v + k_u)`.
pub fn leverage(g: &Graph, v: NodeId) -> Result<f64, GraphError> {
    single(g, Measure::Leverage, v)
}

/// Shannon entropy (nats) of the degree shares over `{v} ∪ N(v)`, using
/// degrees in the whole graph.
pub fn local_structural_entropy(g: &Graph, v: NodeId) -> Result<f64, GraphError> {
    single(g, Measure::LocalStructuralEntropy, v)
}

/// `2e_v / (k_v(k_v − 1))` with `e_v` the number of links among neighbours.
pub fn local_clustering(g: &Graph, v: NodeId) -> Result<f64, GraphError> {
    single(g, Measure::LocalClustering, v)
}

/// Mean over nodes sharing at least one neighbour with `v` of
/// `(common neighbours + [adjacent to v])`, divided by `k_v`.
pub fn topological_coefficient(g: &Graph, v: NodeId) -> Result<f64, GraphError> {
    single(g, Measure::TopologicalCoefficient, v)
}

/// Mean degree of `v`'s neighbours inside the subgraph induced by `N(v)`.
pub fn local_average_connectivity(g: &Graph, v: NodeId) -> Result<f64, GraphError> {
    single(g, Measure::LocalAverageConnectivity, v)
}

/// Scores every node for one measure.
pub fn compute(g: &Graph, measure: Measure, exec: Execution) -> CentralityVector {
    let n = g.node_count();
    let scores = par::map_indexed_with(exec, n, || Scratch::new(n), |s, v| score(g, measure, v, s));
    CentralityVector { measure, scores }
}

/// Scores every node for each requested measure, in request order.
pub fn compute_all(g: &Graph, measures: &[Measure], exec: Execution) -> Result<Vec<CentralityVector>, CentralityError> {
    if measures.is_empty() {
        return Err(CentralityError::NoMeasures);
    }
    Ok(measures.iter().map(|&m| compute(g, m, exec)).collect())
}

/// `%g`-style rendering with `digits` significant digits.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_owned();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let precision = digits.saturating_sub(1);
    let sci = format!("{:.*e}", precision, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        return format!("{}e{}", trim_zeros(mantissa), exp);
    }
    let decimals = (precision as i32 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_owned()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Writes `node,measure,score` rows, node-major within each measure.
pub fn write_csv<W: Write>(g: &Graph, vectors: &[CentralityVector], mut out: W) -> Result<(), CentralityError> {
    writeln!(out, "node,measure,score")?;
    for vector in vectors {
        for (v, &s) in vector.scores.iter().enumerate() {
            writeln!(out, "{},{},{}", g.label(v), vector.measure, format_significant(s, 12))?;
        }
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    const EPS: f64 = 1e-12;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= EPS
    }

    #[test]
    fn h_index_fixtures() {
        assert_eq!(h_index(&triangle(), 0).unwrap(), 2);
        assert_eq!(h_index(&star(3), 0).unwrap(), 1);
        assert_eq!(h_index(&path(4), 1).unwrap(), 1);
        assert_eq!(h_index(&complete(5), 0).unwrap(), 4);
        assert!(h_index(&triangle(), 3).is_err());
    }

    #[test]
    fn leverage_fixtures() {
        assert_eq!(leverage(&triangle(), 0).unwrap(), 0.0);
        assert!(close(leverage(&star(3), 0).unwrap(), 0.5));
        assert!(close(leverage(&star(3), 1).unwrap(), -0.5));
    }

    #[test]
    fn entropy_fixtures() {
        assert!(close(local_structural_entropy(&triangle(), 0).unwrap(), 3f64.ln()));
        let star_centre = -(0.5 * 0.5f64.ln() + 3.0 * (1.0 / 6.0) * (1.0 / 6.0f64).ln());
        assert!(close(local_structural_entropy(&star(3), 0).unwrap(), star_centre));
        assert!((star_centre - 1.2425).abs() < 1e-4);
        let p3_mid = -(0.5 * 0.5f64.ln() + 2.0 * 0.25 * 0.25f64.ln());
        assert!(close(local_structural_entropy(&path(3), 1).unwrap(), p3_mid));
        assert!((p3_mid - 1.0397).abs() < 1e-4);
    }

    #[test]
    fn clustering_fixtures() {
        assert_eq!(local_clustering(&triangle(), 0).unwrap(), 1.0);
        assert_eq!(local_clustering(&star(3), 0).unwrap(), 0.0);
        assert_eq!(local_clustering(&star(3), 1).unwrap(), 0.0);
        assert_eq!(local_clustering(&complete(4), 2).unwrap(), 1.0);
    }

    #[test]
    fn topological_fixtures() {
        assert_eq!(topological_coefficient(&triangle(), 0).unwrap(), 1.0);
        assert_eq!(topological_coefficient(&star(3), 1).unwrap(), 1.0);
        assert_eq!(topological_coefficient(&path(3), 1).unwrap(), 0.0);
    }

    #[test]
    fn average_connectivity_fixtures() {
        assert_eq!(local_average_connectivity(&triangle(), 0).unwrap(), 1.0);
        assert_eq!(local_average_connectivity(&star(3), 0).unwrap(), 0.0);
        assert_eq!(local_average_connectivity(&complete(4), 0).unwrap(), 2.0);
    }

    #[test]
    fn isolated_nodes_score_zero() {
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        for m in Measure::ALL {
            assert_eq!(compute(&g, m, Execution::Sequential).scores[2], 0.0, "{m}");
        }
    }

    #[test]
    fn compute_all_fixtures() {
        let lcc = compute_all(&triangle(), &[Measure::LocalClustering], Execution::Sequential).unwrap();
        assert_eq!(lcc[0].scores, vec![1.0; 3]);

        let v = compute_all(
            &star(3),
            &[Measure::HIndex, Measure::LocalAverageConnectivity],
            Execution::Parallel,
        )
        .unwrap();
        assert_eq!(v[0].measure, Measure::HIndex);
        assert_eq!(v[0].scores, vec![1.0; 4]);
        assert_eq!(v[1].scores, vec![0.0; 4]);

        assert!(matches!(
            compute_all(&star(3), &[], Execution::Sequential),
            Err(CentralityError::NoMeasures)
        ));
    }

    #[test]
    fn vertex_transitive_graphs_score_constant() {
        for g in [cycle(7), complete(6)] {
            for m in Measure::ALL {
                let s = compute(&g, m, Execution::Sequential).scores;
                assert!(s.iter().all(|&x| x == s[0]), "{m}: {s:?}");
            }
        }
    }

    #[test]
    fn measure_parsing() {
        assert_eq!(Measure::parse_list("all").unwrap(), Measure::ALL.to_vec());
        assert_eq!(
            Measure::parse_list("lcc, h,lcc").unwrap(),
            vec![Measure::LocalClustering, Measure::HIndex]
        );
        assert!(matches!(
            Measure::parse_list("pagerank"),
            Err(CentralityError::UnknownMeasure(m)) if m == "pagerank"
        ));
        assert!(matches!(Measure::parse_list(" , "), Err(CentralityError::NoMeasures)));
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_significant(1.0, 12), "1");
        assert_eq!(format_significant(0.0, 12), "0");
        assert_eq!(format_significant(-0.5, 12), "-0.5");
        assert_eq!(format_significant(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(format_significant(1.242453324894, 12), "1.24245332489");
        assert_eq!(format_significant(123456.0, 12), "123456");
        assert_eq!(format_significant(1.5e-9, 12), "1.5e-9");
        assert_eq!(format_significant(2.0e13, 12), "2e13");
    }

    #[test]
    fn csv_layout() {
        let g = triangle();
        let v = compute_all(&g, &[Measure::LocalClustering], Execution::Sequential).unwrap();
        let mut out = Vec::new();
        write_csv(&g, &v, &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "node,measure,score\n0,lcc,1\n1,lcc,1\n2,lcc,1\n"
        );
    }
}

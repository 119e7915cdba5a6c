//! Brute-force reference implementations over a dense adjacency matrix,
//! written straight from the measure definitions. Shared by the
//! integration and acceptance tests; deliberately shares no code with the
//! library kernels.

#![allow(dead_code)]

use netstab::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Dense {
    pub adj: Vec<Vec<bool>>,
}

impl Dense {
    pub fn from_graph(g: &Graph) -> Self {
        let n = g.node_count();
        let mut adj = vec![vec![false; n]; n];
        for (u, v) in g.edges() {
            adj[u][v] = true;
            adj[v][u] = true;
        }
        Dense { adj }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&b| b).count()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.n()).filter(|&u| self.adj[v][u]).collect()
    }

    pub fn h_index(&self, v: usize) -> usize {
        (0..=self.n())
            .rev()
            .find(|&h| self.neighbors(v).iter().filter(|&&u| self.degree(u) >= h).count() >= h)
            .unwrap()
    }

    pub fn leverage(&self, v: usize) -> f64 {
        let kv = self.degree(v) as f64;
        if kv == 0.0 {
            return 0.0;
        }
        let mut s = 0.0;
        for u in self.neighbors(v) {
            let ku = self.degree(u) as f64;
            s += (kv - ku) / (kv + ku);
        }
        s / kv
    }

    pub fn entropy(&self, v: usize) -> f64 {
        if self.degree(v) == 0 {
            return 0.0;
        }
        let mut local = vec![v];
        local.extend(self.neighbors(v));
        let total: usize = local.iter().map(|&j| self.degree(j)).sum();
        let mut h = 0.0;
        for &j in &local {
            let p = self.degree(j) as f64 / total as f64;
            h -= p * p.ln();
        }
        h
    }

    fn links_among_neighbors(&self, v: usize) -> usize {
        let nb = self.neighbors(v);
        let mut e = 0;
        for i in 0..nb.len() {
            for j in i + 1..nb.len() {
                if self.adj[nb[i]][nb[j]] {
                    e += 1;
                }
            }
        }
        e
    }

    pub fn clustering(&self, v: usize) -> f64 {
        let k = self.degree(v);
        if k < 2 {
            return 0.0;
        }
        2.0 * self.links_among_neighbors(v) as f64 / (k * (k - 1)) as f64
    }

    pub fn topological(&self, v: usize) -> f64 {
        let k = self.degree(v);
        if k == 0 {
            return 0.0;
        }
        let mut terms = Vec::new();
        for u in 0..self.n() {
            if u == v {
                continue;
            }
            let shared = (0..self.n()).filter(|&w| self.adj[v][w] && self.adj[u][w]).count();
            if shared >= 1 {
                terms.push((shared + self.adj[u][v] as usize) as f64);
            }
        }
        if terms.is_empty() {
            return 0.0;
        }
        let mean = terms.iter().sum::<f64>() / terms.len() as f64;
        mean / k as f64
    }

    pub fn average_connectivity(&self, v: usize) -> f64 {
        let nb = self.neighbors(v);
        if nb.is_empty() {
            return 0.0;
        }
        let induced: usize = nb.iter().map(|&u| nb.iter().filter(|&&w| self.adj[u][w]).count()).sum();
        induced as f64 / nb.len() as f64
    }

    /// Score of measure `id` (`h`, `lc`, `lse`, `lcc`, `tc`, `lac`).
    pub fn score(&self, id: &str, v: usize) -> f64 {
        match id {
            "h" => self.h_index(v) as f64,
            "lc" => self.leverage(v),
            "lse" => self.entropy(v),
            "lcc" => self.clustering(v),
            "tc" => self.topological(v),
            "lac" => self.average_connectivity(v),
            other => panic!("unknown measure {other}"),
        }
    }

    /// Pearson correlation of endpoint degrees over both orientations of
    /// every edge; `None` for zero variance.
    pub fn assortativity(&self) -> Option<f64> {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for u in 0..self.n() {
            for v in 0..self.n() {
                if self.adj[u][v] {
                    xs.push(self.degree(u) as f64);
                    ys.push(self.degree(v) as f64);
                }
            }
        }
        if xs.is_empty() {
            return None;
        }
        let len = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / len;
        let my = ys.iter().sum::<f64>() / len;
        let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let vx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        let vy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
        if vx == 0.0 || vy == 0.0 {
            return None;
        }
        Some(cov / (vx * vy).sqrt())
    }
}

/// Erdős–Rényi G(n, p) with a fixed seed.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

/// The `index`-th graph of the oracle corpus: sizes 3..=40, densities
/// spread between sparse and dense.
pub fn corpus_graph(index: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE ^ index);
    let n = rng.gen_range(3..=40);
    let p = rng.gen_range(0.05..0.6);
    erdos_renyi(n, p, index)
}

pub const MEASURE_IDS: [&str; 6] = ["h", "lc", "lse", "lcc", "tc", "lac"];

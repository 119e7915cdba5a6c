mod oracle;

use netstab::centrality::{self, compute, compute_all};
use netstab::{Execution, Graph, Measure};
use oracle::{corpus_graph, erdos_renyi, Dense};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn matches_brute_force_on_random_graphs() {
    for index in 0..50 {
        let g = corpus_graph(index);
        let dense = Dense::from_graph(&g);
        for m in Measure::ALL {
            let fast = compute(&g, m, Execution::Sequential).scores;
            for (v, &s) in fast.iter().enumerate() {
                let expected = dense.score(m.id(), v);
                if m == Measure::HIndex {
                    assert_eq!(s, expected, "graph {index} node {v} measure {m}");
                } else {
                    assert!(
                        (s - expected).abs() <= 1e-12,
                        "graph {index} node {v} {m}: {s} vs {expected}"
                    );
                }
            }
        }
    }
}

#[test]
fn single_node_entry_points_agree_with_batch() {
    let g = corpus_graph(7);
    let all = compute_all(&g, &Measure::ALL, Execution::Sequential).unwrap();
    for v in 0..g.node_count() {
        assert_eq!(centrality::h_index(&g, v).unwrap() as f64, all[0].scores[v]);
        assert_eq!(centrality::leverage(&g, v).unwrap(), all[1].scores[v]);
        assert_eq!(centrality::local_structural_entropy(&g, v).unwrap(), all[2].scores[v]);
        assert_eq!(centrality::local_clustering(&g, v).unwrap(), all[3].scores[v]);
        assert_eq!(centrality::topological_coefficient(&g, v).unwrap(), all[4].scores[v]);
        assert_eq!(centrality::local_average_connectivity(&g, v).unwrap(), all[5].scores[v]);
    }
}

#[test]
fn parallel_scores_are_bit_identical() {
    let g = erdos_renyi(400, 0.03, 99);
    let seq = compute_all(&g, &Measure::ALL, Execution::Sequential).unwrap();
    let par = compute_all(&g, &Measure::ALL, Execution::Parallel).unwrap();
    for (a, b) in seq.iter().zip(&par) {
        let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&a.scores), bits(&b.scores), "{}", a.measure);
    }
}

#[test]
fn vertex_transitive_graphs_are_flat() {
    let cycle: Vec<_> = (0..11).map(|i| (i, (i + 1) % 11)).collect();
    let complete: Vec<_> = (0..7).flat_map(|u| (u + 1..7).map(move |v| (u, v))).collect();
    for g in [
        Graph::from_edges(11, &cycle).unwrap(),
        Graph::from_edges(7, &complete).unwrap(),
    ] {
        for c in compute_all(&g, &Measure::ALL, Execution::Parallel).unwrap() {
            assert!(c.scores.iter().all(|&s| s == c.scores[0]), "{}", c.measure);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn relabeling_permutes_scores(n in 3usize..30, p in 0.05f64..0.5, seed in any::<u64>()) {
        let g = erdos_renyi(n, p, seed);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed ^ 1));
        let h = g.permuted(&perm);
        for m in Measure::ALL {
            let a = compute(&g, m, Execution::Sequential).scores;
            let b = compute(&h, m, Execution::Sequential).scores;
            for v in 0..n {
                prop_assert!((a[v] - b[perm[v]]).abs() <= 1e-12, "{} node {}", m, v);
            }
        }
    }

    #[test]
    fn scores_stay_in_range(n in 2usize..40, p in 0.0f64..0.7, seed in any::<u64>()) {
        let g = erdos_renyi(n, p, seed);
        let all = compute_all(&g, &Measure::ALL, Execution::Sequential).unwrap();
        for v in 0..n {
            let k = g.degree(v).unwrap() as f64;
            prop_assert!(all[0].scores[v] <= k);
            prop_assert!(all[1].scores[v] > -1.0 && all[1].scores[v] < 1.0);
            prop_assert!(all[2].scores[v] >= 0.0);
            prop_assert!((0.0..=1.0).contains(&all[3].scores[v]));
            prop_assert!(all[4].scores[v] >= 0.0);
            prop_assert!(all[5].scores[v] >= 0.0);
        }
        for c in &all {
            prop_assert!(c.scores.iter().all(|s| s.is_finite()));
        }
    }
}

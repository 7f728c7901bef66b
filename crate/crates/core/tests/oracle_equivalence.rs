//! Small randomized agreement checks against brute force. The full-size run
//! lives in the acceptance target.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cmld::engine::EngineConfig;
use cmld::graph::{ColoredGraph, Motif};
use cmld::motif::{
    decide_graph_motif, decide_multiset_motif, find_occurrence, min_add, min_cc, min_substitute,
    DEFAULT_MAX_SUBSTITUTE_K,
};
use cmld::oracle;

const PALETTE: [&str; 3] = ["r", "g", "b"];
const INSTANCES: u64 = 40;

fn instance(rng: &mut ChaCha8Rng) -> (ColoredGraph, Motif) {
    let n = rng.gen_range(3..=8);
    let labels: Vec<&str> = (0..n).map(|_| PALETTE[rng.gen_range(0..3)]).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(0.35) {
                edges.push((u, v));
            }
        }
    }
    let g = ColoredGraph::from_parts(&labels, &edges).unwrap();
    let k = rng.gen_range(1..=4.min(n));
    let mut counts = [0; 3];
    for _ in 0..k {
        counts[rng.gen_range(0..3)] += 1;
    }
    let entries: Vec<(&str, usize)> = (0..3).filter(|&c| counts[c] > 0).map(|c| (PALETTE[c], counts[c])).collect();
    (g, Motif::new(&entries).unwrap())
}

/// Randomized answers may miss (too large / "no"), never undercut the truth.
fn check_min(name: &str, got: Option<usize>, truth: Option<usize>, misses: &mut usize) {
    match (got, truth) {
        (Some(a), Some(b)) => {
            assert!(a >= b, "{name}: reported {a} below the true optimum {b}");
            *misses += usize::from(a > b);
        }
        (Some(a), None) => panic!("{name}: reported {a} on an infeasible instance"),
        (None, Some(_)) => *misses += 1,
        (None, None) => {}
    }
}

#[test]
fn decision_variants_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut misses = 0;
    for i in 0..INSTANCES {
        let (g, m) = instance(&mut rng);
        let cfg = EngineConfig::default().with_seed(i);
        let truth = oracle::brute_graph_motif(&g, &m).unwrap();
        let got = decide_graph_motif(&g, &m, &cfg).unwrap().answer;
        assert!(truth || !got, "graph motif said yes on a no-instance");
        misses += usize::from(truth && !got);

        let k = rng.gen_range(1..=m.size());
        let truth = oracle::brute_multiset_motif(&g, &m, k).unwrap();
        let got = decide_multiset_motif(&g, &m, k, &cfg).unwrap().answer;
        assert!(truth || !got, "multiset motif said yes on a no-instance");
        misses += usize::from(truth && !got);

        if let Some(occ) = find_occurrence(&g, &m, &cfg).unwrap() {
            assert!(oracle::is_occurrence(&g, &m, &occ.vertices));
        }
    }
    assert!(misses <= 1, "{misses} false negatives");
}

#[test]
fn minimization_variants_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut misses = 0;
    for i in 0..INSTANCES {
        let (g, m) = instance(&mut rng);
        let cfg = EngineConfig::default().with_seed(i);
        check_min(
            "min-add",
            min_add(&g, &m, Some(3), &cfg).unwrap().value,
            oracle::brute_min_add(&g, &m).unwrap().filter(|&p| p <= 3),
            &mut misses,
        );
        check_min(
            "min-cc",
            min_cc(&g, &m, &cfg).unwrap().value,
            oracle::brute_min_cc(&g, &m).unwrap(),
            &mut misses,
        );
        check_min(
            "min-substitute",
            min_substitute(&g, &m, DEFAULT_MAX_SUBSTITUTE_K, &cfg).unwrap().value,
            oracle::brute_min_substitute(&g, &m).unwrap(),
            &mut misses,
        );
    }
    assert!(misses <= 2, "{misses} false negatives");
}

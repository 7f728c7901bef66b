//! Reduced-size statistical and oracle checks behind `cmld selftest`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assignment::{rank_gf2, sample_subspaces, survival_log, ColorId};
use crate::circuit::{parse_circuit, EdgeMultipliers};
use crate::engine::{derive_seed, EngineConfig};
use crate::error::Result;
use crate::gf2m::FieldContext;
use crate::graph::{ColoredGraph, Motif};
use crate::group_algebra::{GroupAlgebra, GroupVector};
use crate::motif::{decide_graph_motif, find_occurrence, min_add, min_cc, min_substitute};
use crate::oracle;

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

pub fn run_all(config: &EngineConfig) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    Ok(vec![
        algebra_identities(&mut rng)?,
        survival_estimates(&mut rng)?,
        isolation(config)?,
        oracle_agreement(config, &mut rng)?,
    ])
}

fn algebra_identities(rng: &mut ChaCha8Rng) -> Result<Check> {
    let field = FieldContext::new(4)?;
    let mut mismatches = 0;
    let mut cases = 0;
    for k in 1..=6 {
        let algebra = GroupAlgebra::new(field.clone(), k)?;
        for _ in 0..200 {
            let count = rng.gen_range(1..=k);
            let rows: Vec<u64> = (0..count).map(|_| rng.gen_range(0..1u64 << k)).collect();
            let mut prod = algebra.identity();
            for &r in &rows {
                prod = algebra.mul_by_pair(&prod, GroupVector::new(k, r)?)?;
            }
            let square = algebra.from_pair(GroupVector::new(k, rows[0])?)?;
            let square = algebra.mul(&square, &square)?;
            cases += 1;
            if algebra.is_zero(&prod) == (rank_gf2(&rows) == count) || !algebra.is_zero(&square) {
                mismatches += 1;
            }
        }
    }
    Ok(Check {
        name: "algebra identities",
        passed: mismatches == 0,
        detail: format!("{mismatches} mismatches in {cases} cases"),
    })
}

fn survival_estimates(rng: &mut ChaCha8Rng) -> Result<Check> {
    const TRIALS: usize = 20_000;
    let mut worst: f64 = 0.0;
    for t in 2..=4 {
        let mut hits = 0;
        for _ in 0..TRIALS {
            let family = sample_subspaces(&[t], t, rng)?;
            let rows: Vec<u64> = (0..t)
                .map(|_| family.sample_vector(ColorId(0), rng).map(|v| v.bits()))
                .collect::<Result<_>>()?;
            hits += usize::from(rank_gf2(&rows) == t);
        }
        let estimate = hits as f64 / TRIALS as f64;
        worst = worst.max((estimate - survival_log(t).exp()).abs());
    }
    Ok(Check {
        name: "survival probabilities",
        passed: worst <= 0.03,
        detail: format!("largest deviation {worst:.4} over t = 2..4"),
    })
}

fn isolation(config: &EngineConfig) -> Result<Check> {
    let circuit = parse_circuit("(+ (* x1 x2) (* x1 x2))", "selftest")?;
    let field = FieldContext::new(8)?;
    let algebra = GroupAlgebra::new(field.clone(), 2)?;
    let values = [
        Some(algebra.from_pair(GroupVector::unit(2, 0))?),
        Some(algebra.from_pair(GroupVector::unit(2, 1))?),
    ];
    let plain = circuit.evaluate(&EdgeMultipliers::ones(&circuit), &algebra, &values)?;
    let mut nonzero = 0;
    for s in 0..200 {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, s));
        let mult = circuit.extend(&field, &mut rng);
        nonzero += usize::from(!algebra.is_zero(&circuit.evaluate(&mult, &algebra, &values)?));
    }
    Ok(Check {
        name: "isolation",
        passed: algebra.is_zero(&plain) && nonzero >= 190,
        detail: format!("{nonzero}/200 nonzero with multipliers"),
    })
}

/// Random graph on `n` vertices with about `n * 1.3` edges and `colors` colors.
fn random_graph(rng: &mut ChaCha8Rng, n: usize, colors: usize) -> Result<ColoredGraph> {
    let palette = ["a", "b", "c", "d"];
    let labels: Vec<&str> = (0..n).map(|_| palette[rng.gen_range(0..colors)]).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(2.6 / n as f64) {
                edges.push((u, v));
            }
        }
    }
    ColoredGraph::from_parts(&labels, &edges)
}

fn random_motif(rng: &mut ChaCha8Rng, k: usize, colors: usize) -> Result<Motif> {
    let palette = ["a", "b", "c", "d"];
    let mut counts = [0usize; 4];
    for _ in 0..k {
        counts[rng.gen_range(0..colors)] += 1;
    }
    let entries: Vec<(&str, usize)> = (0..colors)
        .filter(|&c| counts[c] > 0)
        .map(|c| (palette[c], counts[c]))
        .collect();
    Motif::new(&entries)
}

fn oracle_agreement(config: &EngineConfig, rng: &mut ChaCha8Rng) -> Result<Check> {
    let mut unsound = 0;
    let mut misses = 0;
    let mut cases = 0;
    for i in 0..12u64 {
        let n = rng.gen_range(4..=8);
        let k = rng.gen_range(2..=4);
        let g = random_graph(rng, n, 3)?;
        let m = random_motif(rng, k, 3)?;
        let cfg = config.with_seed(derive_seed(config.seed, i));

        let truth = oracle::brute_graph_motif(&g, &m)?;
        let got = decide_graph_motif(&g, &m, &cfg)?.answer;
        unsound += usize::from(got && !truth);
        misses += usize::from(truth && !got);

        if let Some(occ) = find_occurrence(&g, &m, &cfg)? {
            unsound += usize::from(!oracle::is_occurrence(&g, &m, &occ.vertices));
        }

        let pairs = [
            (min_add(&g, &m, Some(3), &cfg)?.value, oracle::brute_min_add(&g, &m)?.filter(|&p| p <= 3)),
            (min_cc(&g, &m, &cfg)?.value, oracle::brute_min_cc(&g, &m)?),
            (
                min_substitute(&g, &m, crate::motif::DEFAULT_MAX_SUBSTITUTE_K, &cfg)?.value,
                oracle::brute_min_substitute(&g, &m)?,
            ),
        ];
        for (got, truth) in pairs {
            // A randomized minimum can only be too large, never too small.
            match (got, truth) {
                (Some(a), Some(b)) if a < b => unsound += 1,
                (Some(_), None) => unsound += 1,
                (a, b) if a != b => misses += 1,
                _ => {}
            }
        }
        cases += 4;
    }
    Ok(Check {
        name: "oracle agreement",
        passed: unsound == 0 && misses <= 1,
        detail: format!("{unsound} unsound, {misses} missed of {cases} answers"),
    })
}

//! Color-constrained random assignment of group vectors to variables, the
//! survival probabilities it induces, and the repetition planner.
//!
//! Each color `c` gets a random subspace `S_c` of Z2^k of dimension
//! `min(mu(c), k)`, and each variable of color `c` gets a random nonzero vector
//! of `S_c`. More than `mu(c)` vectors of one subspace are always linearly
//! dependent, so any monomial exceeding a multiplicity evaluates to zero.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;

use crate::error::{Error, Result};
use crate::group_algebra::GroupVector;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ColorId(pub usize);

/// Rank over GF(2) of the given rows by Gaussian elimination.
pub fn rank_gf2(rows: &[u64]) -> usize {
    let mut rows = rows.to_vec();
    let mut rank = 0;
    for bit in (0..64).rev() {
        let mask = 1u64 << bit;
        let Some(pivot) = (rank..rows.len()).find(|&i| rows[i] & mask != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let p = rows[rank];
        for row in rows.iter_mut().skip(rank + 1) {
            if *row & mask != 0 {
                *row ^= p;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// `dim` uniformly random vectors of Z2^k, redrawn until independent.
/// Returns the basis and the number of draws it took.
pub fn sample_basis<G: Rng + ?Sized>(dim: usize, k: usize, rng: &mut G) -> (Vec<u64>, u32) {
    assert!(dim <= k && k <= 63);
    let mask = if k == 0 { 0 } else { u64::MAX >> (64 - k) };
    let mut attempts = 0;
    loop {
        attempts += 1;
        let rows: Vec<u64> = (0..dim).map(|_| rng.gen::<u64>() & mask).collect();
        if rank_gf2(&rows) == dim {
            return (rows, attempts);
        }
    }
}

/// Per-color random subspaces of Z2^k, indexed by [`ColorId`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceFamily {
    k: usize,
    bases: Vec<Vec<u64>>,
}

impl SubspaceFamily {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn basis(&self, color: ColorId) -> Option<&[u64]> {
        self.bases.get(color.0).map(Vec::as_slice)
    }

    pub fn num_colors(&self) -> usize {
        self.bases.len()
    }

    /// XOR of a uniformly random nonempty subset of the color's basis.
    ///
    /// A color with multiplicity zero has the trivial subspace, and the
    /// identity is returned: its `v0 + v` element is zero, which removes
    /// every monomial containing the variable.
    pub fn sample_vector<G: Rng + ?Sized>(&self, color: ColorId, rng: &mut G) -> Result<GroupVector> {
        let basis = self
            .basis(color)
            .ok_or_else(|| Error::UnknownColor(format!("#{}", color.0)))?;
        let t = basis.len();
        if t == 0 {
            return Ok(GroupVector::zero(self.k));
        }
        let subset: u64 = rng.gen_range(1..=(u64::MAX >> (64 - t)));
        let bits = basis
            .iter()
            .enumerate()
            .filter(|(i, _)| subset >> i & 1 == 1)
            .fold(0, |acc, (_, &row)| acc ^ row);
        GroupVector::new(self.k, bits)
    }
}

/// Samples `S_c` for every color, with `mu(c)` clamped to `k`.
pub fn sample_subspaces<G: Rng + ?Sized>(
    multiplicities: &[usize],
    k: usize,
    rng: &mut G,
) -> Result<SubspaceFamily> {
    if k == 0 || k > 63 {
        return Err(Error::InvalidArgument(format!(
            "subspace dimension k = {k} must be in 1..=63"
        )));
    }
    let bases = multiplicities
        .iter()
        .map(|&mu| sample_basis(mu.min(k), k, rng).0)
        .collect();
    Ok(SubspaceFamily { k, bases })
}

/// The vector `v` chosen for each variable; its value is `v0 + v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    vectors: Vec<GroupVector>,
}

impl Assignment {
    pub fn vectors(&self) -> &[GroupVector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// One independent draw per variable from its color's subspace.
pub fn assign_variables<G: Rng + ?Sized>(
    var_colors: &[ColorId],
    family: &SubspaceFamily,
    rng: &mut G,
) -> Result<Assignment> {
    let vectors = var_colors
        .iter()
        .map(|&c| family.sample_vector(c, rng))
        .collect::<Result<_>>()?;
    Ok(Assignment { vectors })
}

/// Probability that `t` random nonzero vectors of a random `t`-dimensional
/// subspace are linearly independent:
/// `prod_{i=1}^{t-1} (2^t - 2^{t-i}) / (2^t - 1)`, and 1 for `t = 1`.
pub fn survival_prob(t: usize) -> Result<BigRational> {
    if t == 0 {
        return Err(Error::InvalidArgument("group size must be at least 1".into()));
    }
    let two = BigInt::from(2);
    let full = num_traits::pow(two.clone(), t);
    let denom = &full - BigInt::one();
    let mut p = BigRational::one();
    for i in 1..t {
        let num = &full - num_traits::pow(two.clone(), t - i);
        p *= BigRational::new(num, denom.clone());
    }
    Ok(p)
}

/// Natural log of [`survival_prob`], computed in floating point. `t = 0`
/// (an empty group) contributes a factor of one.
pub fn survival_log(t: usize) -> f64 {
    let full = 2f64.powi(t as i32);
    (1..t)
        .map(|i| ((full - 2f64.powi((t - i) as i32)) / (full - 1.0)).ln())
        .sum()
}

/// Probability that a nonzero test survives, and how many trials push the
/// miss probability below `delta`.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct RepetitionPlan {
    pub trials: u64,
    /// Lower bound on the per-trial detection probability.
    pub per_trial_success: f64,
    pub delta: f64,
    /// Dimension of the group the trials evaluate over.
    pub group_dim: usize,
}

impl RepetitionPlan {
    pub fn from_success(q: f64, delta: f64, group_dim: usize) -> Result<Self> {
        check_delta(delta)?;
        if !(q > 0.0 && q <= 1.0) {
            return Err(Error::InvalidArgument(format!("success probability {q} out of range")));
        }
        let trials = ((1.0 / delta).ln() / q).ceil().max(1.0) as u64;
        Ok(RepetitionPlan {
            trials,
            per_trial_success: q,
            delta,
            group_dim,
        })
    }

    /// Plan for an instance answered without trials.
    pub fn empty(delta: f64, group_dim: usize) -> Self {
        RepetitionPlan {
            trials: 0,
            per_trial_success: 0.0,
            delta,
            group_dim,
        }
    }

    /// Trials times the `2^dim` coefficients each evaluation touches.
    pub fn work_units(&self) -> f64 {
        self.trials as f64 * 2f64.powi(self.group_dim as i32)
    }

    /// Bound on the probability that every trial misses.
    pub fn miss_probability(&self) -> f64 {
        (1.0 - self.per_trial_success).powf(self.trials as f64)
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("error bound {delta} must lie in (0, 1)")))
    }
}

/// Minimum over groupings `t_c <= min(mu_c, total)` with `sum t_c = total` of
/// `sum ln p_{t_c}`, or `None` if `total` cannot be covered.
pub fn worst_grouping_log(multiplicities: &[usize], total: usize) -> Option<f64> {
    let mut best = vec![f64::INFINITY; total + 1];
    best[0] = 0.0;
    for &mu in multiplicities {
        let cap = mu.min(total);
        if cap == 0 {
            continue;
        }
        let mut next = best.clone();
        for (s, &base) in best.iter().enumerate() {
            if base.is_infinite() {
                continue;
            }
            for t in 1..=cap.min(total - s) {
                let cand = base + survival_log(t);
                if cand < next[s + t] {
                    next[s + t] = cand;
                }
            }
        }
        best = next;
    }
    best[total].is_finite().then_some(best[total])
}

/// Trials needed so that an allowed degree-`k` monomial is detected with
/// probability at least `1 - delta`.
///
/// The per-trial bound is `1/4` (unconditional survival of `k` vectors) times
/// the smallest joint survival probability over all ways an allowed monomial
/// can split into same-colored groups.
pub fn plan_repetitions(multiplicities: &[usize], k: usize, delta: f64) -> Result<RepetitionPlan> {
    check_delta(delta)?;
    let coverable: usize = multiplicities.iter().map(|&m| m.min(k)).sum();
    let log = worst_grouping_log(multiplicities, k).ok_or(Error::Infeasible { k, coverable })?;
    RepetitionPlan::from_success(0.25 * log.exp(), delta, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_gf2(&[0b01, 0b10]), 2);
        assert_eq!(rank_gf2(&[0b11, 0b11]), 1);
        assert_eq!(rank_gf2(&[]), 0);
        assert_eq!(rank_gf2(&[0, 0]), 0);
        assert_eq!(rank_gf2(&[0b011, 0b110, 0b101]), 2);
    }

    // Rank by brute force: size of the span is 2^rank.
    fn span_rank(rows: &[u64]) -> usize {
        let mut span = std::collections::HashSet::new();
        for mask in 0u32..(1 << rows.len()) {
            let v = rows
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(0, |a, (_, &r)| a ^ r);
            span.insert(v);
        }
        span.len().trailing_zeros() as usize
    }

    #[test]
    fn rank_matches_span_size() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..500 {
            let n = rng.gen_range(0..7);
            let rows: Vec<u64> = (0..n).map(|_| rng.gen::<u64>() & 0x1f).collect();
            assert_eq!(rank_gf2(&rows), span_rank(&rows), "{rows:?}");
        }
    }

    #[test]
    fn survival_values() {
        assert_eq!(survival_prob(1).unwrap(), rat(1, 1));
        assert_eq!(survival_prob(2).unwrap(), rat(2, 3));
        assert_eq!(survival_prob(3).unwrap(), rat(24, 49));
        assert_eq!(survival_prob(4).unwrap(), rat(1344, 3375));
        assert!(survival_prob(0).is_err());
        for t in 1..=20 {
            let exact = survival_prob(t).unwrap().to_f64().unwrap();
            assert!((survival_log(t).exp() - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn survival_is_decreasing_and_above_quarter() {
        let quarter = rat(1, 4);
        let mut prev = survival_prob(1).unwrap();
        for t in 2..=32 {
            let p = survival_prob(t).unwrap();
            assert!(p < prev, "t={t}");
            assert!(p > quarter, "t={t}");
            prev = p;
        }
    }

    #[test]
    fn subspace_bases_have_full_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let fam = sample_subspaces(&[1, 3, 8, 20, 0], 8, &mut rng).unwrap();
        let dims: Vec<_> = (0..5)
            .map(|c| fam.basis(ColorId(c)).unwrap().len())
            .collect();
        assert_eq!(dims, vec![1, 3, 8, 8, 0]);
        for c in 0..5 {
            let b = fam.basis(ColorId(c)).unwrap();
            assert_eq!(rank_gf2(b), b.len());
            assert!(b.iter().all(|&r| r < 256));
        }
        assert!(sample_subspaces(&[1], 0, &mut rng).is_err());
    }

    #[test]
    fn basis_acceptance_rate() {
        // P(k random vectors of Z2^k independent) = prod_{i=1}^{k} (1 - 2^-i)
        let expected: f64 = (1..=8).map(|i| 1.0 - 0.5f64.powi(i)).product();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let runs = 20_000;
        let attempts: u64 = (0..runs)
            .map(|_| u64::from(sample_basis(8, 8, &mut rng).1))
            .sum();
        let rate = runs as f64 / attempts as f64;
        assert!((rate - expected).abs() < 0.01, "rate {rate} vs {expected}");
        assert!((expected - 0.2899).abs() < 0.001);
    }

    #[test]
    fn vectors_come_from_nonempty_subsets() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let fam = SubspaceFamily {
            k: 3,
            bases: vec![vec![0b001], vec![0b001, 0b010], vec![]],
        };
        for _ in 0..100 {
            assert_eq!(fam.sample_vector(ColorId(0), &mut rng).unwrap().bits(), 1);
        }
        let mut counts = [0u32; 4];
        for _ in 0..30_000 {
            counts[fam.sample_vector(ColorId(1), &mut rng).unwrap().bits() as usize] += 1;
        }
        assert_eq!(counts[0], 0);
        for &c in &counts[1..] {
            assert!((9_500..10_500).contains(&c), "{counts:?}");
        }
        assert!(fam.sample_vector(ColorId(2), &mut rng).unwrap().is_identity());
        assert!(matches!(
            fam.sample_vector(ColorId(3), &mut rng),
            Err(Error::UnknownColor(_))
        ));
    }

    #[test]
    fn sampled_vectors_are_nonzero() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let fam = sample_subspaces(&[1, 2, 5], 6, &mut rng).unwrap();
        for i in 0..100_000 {
            let v = fam.sample_vector(ColorId(i % 3), &mut rng).unwrap();
            assert!(!v.is_identity());
        }
    }

    #[test]
    fn assignment_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let fam = sample_subspaces(&[1, 1], 4, &mut rng).unwrap();
        let a = assign_variables(&[ColorId(0), ColorId(0), ColorId(1)], &fam, &mut rng).unwrap();
        assert_eq!(a.vectors()[0], a.vectors()[1]);
        assert!(assign_variables(&[], &fam, &mut rng).unwrap().is_empty());
        assert!(assign_variables(&[ColorId(2)], &fam, &mut rng).is_err());
    }

    #[test]
    fn plan_examples() {
        let delta = 0.01;
        for k in 1..10 {
            let plan = plan_repetitions(&vec![1; k + 2], k, delta).unwrap();
            assert_eq!(plan.per_trial_success, 0.25);
            assert_eq!(plan.trials, (4.0 * (1.0f64 / delta).ln()).ceil() as u64);
            assert!(plan.miss_probability() <= delta);
        }
        let p3 = 24.0 / 49.0;
        let plan = plan_repetitions(&[3, 3, 3], 9, delta).unwrap();
        assert!((plan.per_trial_success - 0.25 * p3 * p3 * p3).abs() < 1e-12);

        let grouped = plan_repetitions(&[3, 3], 6, delta).unwrap();
        let singles = plan_repetitions(&[1; 6], 6, delta).unwrap();
        assert!(grouped.trials > singles.trials);

        assert!(matches!(
            plan_repetitions(&[1, 2], 4, delta),
            Err(Error::Infeasible { k: 4, coverable: 3 })
        ));
        assert!(plan_repetitions(&[1], 1, 0.0).is_err());
        assert!(plan_repetitions(&[1], 1, 1.0).is_err());
    }

    #[test]
    fn worst_grouping_prefers_triples() {
        // With room for any grouping, six variables are worst as two triples.
        let log = worst_grouping_log(&[6, 6, 6, 6, 6, 6], 6).unwrap();
        let p3 = survival_log(3);
        assert!((log - 2.0 * p3).abs() < 1e-12);
        assert_eq!(worst_grouping_log(&[2], 3), None);
        assert_eq!(worst_grouping_log(&[], 0), Some(0.0));
    }
}

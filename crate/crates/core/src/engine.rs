//! Randomized decision procedure for constrained multilinear detection.
//!
//! Each trial draws per-color subspaces, a vector per variable and one field
//! multiplier per addition edge, then evaluates the circuit over
//! GF(2^b)[Z2^k]. A nonzero result proves that an allowed multilinear
//! monomial of degree `k` exists, so the first nonzero trial ends the run.
//! Trial `i` draws from its own ChaCha stream, which makes the verdict
//! independent of how trials are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::assignment::{assign_variables, plan_repetitions, sample_subspaces, ColorId, RepetitionPlan};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gf2m::{default_field_bits, FieldContext};
use crate::group_algebra::{GaElement, GroupAlgebra};

/// Default bound on `k` for evaluations over Z2^k.
pub const DEFAULT_MAX_K: usize = 16;

#[derive(Clone, Debug)]
pub struct CmldInstance {
    circuit: Circuit,
    var_colors: Vec<ColorId>,
    multiplicities: Vec<usize>,
    k: usize,
}

impl CmldInstance {
    /// `var_colors[v]` is the color of variable `v`; `multiplicities[c]` the
    /// bound for color `c`.
    pub fn new(
        circuit: Circuit,
        var_colors: Vec<ColorId>,
        multiplicities: Vec<usize>,
        k: usize,
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        if circuit.output().is_none() {
            return Err(Error::NoOutput);
        }
        if var_colors.len() < circuit.num_vars() {
            let missing = circuit.var_name(crate::circuit::VarId(var_colors.len()));
            return Err(Error::UncoloredVariable(missing.to_string()));
        }
        if let Some(c) = var_colors.iter().find(|c| c.0 >= multiplicities.len()) {
            return Err(Error::UnknownColor(format!("#{}", c.0)));
        }
        // Terms of degree above k always vanish over Z2^k (more than k vectors
        // are dependent), so only lower-degree terms must be excluded.
        let (min, max) = circuit.output_degree().unwrap_or((0, 0));
        if min < k {
            return Err(Error::NonHomogeneous { k, min, max });
        }
        Ok(CmldInstance {
            circuit,
            var_colors,
            multiplicities,
            k,
        })
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn var_colors(&self) -> &[ColorId] {
        &self.var_colors
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EngineConfig {
    pub delta: f64,
    pub seed: u64,
    pub threads: usize,
    pub field_bits: Option<u32>,
    /// Replaces the planned trial count when set.
    pub max_trials: Option<u64>,
    pub max_k: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            delta: 0.01,
            seed: 0,
            threads: 1,
            field_bits: None,
            max_trials: None,
            max_k: DEFAULT_MAX_K,
        }
    }
}

impl EngineConfig {
    pub fn with_seed(&self, seed: u64) -> Self {
        EngineConfig {
            seed,
            ..self.clone()
        }
    }

    pub fn with_delta(&self, delta: f64) -> Self {
        EngineConfig {
            delta,
            ..self.clone()
        }
    }

    pub(crate) fn field_for_degree(&self, degree: usize) -> Result<FieldContext> {
        FieldContext::new(self.field_bits.unwrap_or_else(|| default_field_bits(degree)))
    }

    pub(crate) fn apply_trial_cap(&self, mut plan: RepetitionPlan) -> RepetitionPlan {
        if let Some(cap) = self.max_trials {
            plan.trials = cap.max(1);
        }
        plan
    }

    pub(crate) fn check_k(&self, what: &'static str, value: usize, limit: usize) -> Result<()> {
        if value > limit {
            Err(Error::ResourceGuard { what, value, limit })
        } else {
            Ok(())
        }
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct Verdict {
    pub answer: bool,
    pub trials_run: u64,
    pub first_hit: Option<u64>,
    pub seed: u64,
    pub field_bits: u32,
    pub plan: RepetitionPlan,
}

impl Verdict {
    /// Verdict for an instance decided without running any trial.
    pub(crate) fn immediate_no(seed: u64, field_bits: u32, plan: RepetitionPlan) -> Self {
        Verdict {
            answer: false,
            trials_run: 0,
            first_hit: None,
            seed,
            field_bits,
            plan,
        }
    }
}

/// SplitMix64 of `seed ^ salt`; used to give sub-runs independent seeds.
pub fn derive_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Random stream for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Runs trials `0..total` in index order, `threads` at a time, and returns
/// the outcomes up to and including the first one for which `done` holds.
/// The returned prefix does not depend on `threads`.
pub fn run_trials<T, F, D>(total: u64, threads: usize, trial: F, done: D) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync,
    D: Fn(&T) -> bool,
{
    let mut outcomes = Vec::new();
    if threads <= 1 {
        for i in 0..total {
            let t = trial(i)?;
            let stop = done(&t);
            outcomes.push(t);
            if stop {
                break;
            }
        }
        return Ok(outcomes);
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let chunk = threads as u64 * 2;
    let mut start = 0;
    while start < total {
        let end = (start + chunk).min(total);
        let batch: Vec<Result<T>> = pool.install(|| (start..end).into_par_iter().map(&trial).collect());
        for t in batch {
            let t = t?;
            let stop = done(&t);
            outcomes.push(t);
            if stop {
                return Ok(outcomes);
            }
        }
        start = end;
    }
    Ok(outcomes)
}

/// Decides whether the instance's polynomial contains an allowed multilinear
/// monomial of degree `k`. A `yes` is always correct; a `no` is wrong with
/// probability at most `config.delta`.
pub fn solve_cmld(instance: &CmldInstance, config: &EngineConfig) -> Result<Verdict> {
    let k = instance.k;
    config.check_k("k", k, config.max_k)?;
    let field = config.field_for_degree(k)?;
    let field_bits = field.bits();
    let plan = match plan_repetitions(&instance.multiplicities, k, config.delta) {
        Ok(plan) => config.apply_trial_cap(plan),
        // No allowed degree-k monomial can exist.
        Err(Error::Infeasible { .. }) => {
            return Ok(Verdict::immediate_no(config.seed, field_bits, RepetitionPlan::empty(config.delta, k)))
        }
        Err(e) => return Err(e),
    };
    let algebra = GroupAlgebra::new(field.clone(), k)?;

    let trial = |i: u64| -> Result<bool> {
        let mut rng = trial_rng(config.seed, i);
        let family = sample_subspaces(&instance.multiplicities, k, &mut rng)?;
        let assignment = assign_variables(&instance.var_colors, &family, &mut rng)?;
        let values: Vec<Option<GaElement<_>>> = assignment
            .vectors()
            .iter()
            .map(|&v| algebra.from_pair(v).map(Some))
            .collect::<Result<_>>()?;
        let multipliers = instance.circuit.extend(&field, &mut rng);
        let out = instance.circuit.evaluate(&multipliers, &algebra, &values)?;
        Ok(!algebra.is_zero(&out))
    };

    let outcomes = run_trials(plan.trials, config.threads, trial, |&hit| hit)?;
    let hit = outcomes.last().copied().unwrap_or(false);
    Ok(Verdict {
        answer: hit,
        trials_run: outcomes.len() as u64,
        first_hit: hit.then(|| outcomes.len() as u64 - 1),
        seed: config.seed,
        field_bits,
        plan,
    })
}

/// Unconstrained detection: every variable its own color with multiplicity 1.
pub fn solve_mld(circuit: &Circuit, k: usize, config: &EngineConfig) -> Result<Verdict> {
    let n = circuit.num_vars();
    let instance = CmldInstance::new(circuit.clone(), (0..n).map(ColorId).collect(), vec![1; n], k)?;
    solve_cmld(&instance, config)
}

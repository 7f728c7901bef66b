//! Motif problems on vertex-colored graphs, reduced to constrained
//! multilinear detection on branching-walk circuits.

use std::collections::HashMap;

use crate::assignment::{plan_repetitions, sample_subspaces, worst_grouping_log, ColorId, RepetitionPlan};
use crate::circuit::{Circuit, GateId, VarId};
use crate::engine::{derive_seed, run_trials, solve_cmld, trial_rng, CmldInstance, EngineConfig, Verdict};
use crate::error::{Error, Result};
use crate::gf2m::{FieldContext, FieldElement};
use crate::graph::{ColoredGraph, Motif};
use crate::group_algebra::{GroupAlgebra, GroupVector};

/// Largest motif size accepted by [`min_substitute`] by default; its
/// evaluations run over a group of dimension `2k`.
pub const DEFAULT_MAX_SUBSTITUTE_K: usize = 10;

/// Gates `B(v, i)` of a branching-walk circuit. `B(v, i)` generates, among
/// its multilinear monomials, exactly the products over connected
/// `i`-vertex sets containing `v`.
#[derive(Clone, Debug)]
pub struct BranchingWalk {
    // levels[i - 1][v] = B(v, i)
    levels: Vec<Vec<Option<GateId>>>,
}

impl BranchingWalk {
    /// Adds `B(v, i)` for `1 <= i <= k` to `circuit`, with `B(v, 1) =
    /// terminals[v]` and
    /// `B(v, i) = sum_{j < i} (sum_{u in N(v)} B(u, j)) * B(v, i - j)`.
    /// Missing terminals make the corresponding gates vanish.
    ///
    /// Each neighbor sum is a separate gate for every `(v, i, j)`, so in a
    /// multilinear parse tree no gate is used twice and every tree carries
    /// its own product of edge multipliers.
    pub fn build(
        circuit: &mut Circuit,
        g: &ColoredGraph,
        k: usize,
        terminals: Vec<Option<GateId>>,
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("walk size k must be at least 1".into()));
        }
        if terminals.len() != g.len() {
            return Err(Error::InvalidArgument(format!(
                "{} terminals for {} vertices",
                terminals.len(),
                g.len()
            )));
        }
        let mut levels = vec![terminals];
        for i in 2..=k {
            let mut level = Vec::with_capacity(g.len());
            for v in 0..g.len() {
                let mut children = Vec::new();
                for j in 1..i {
                    let Some(own) = levels[i - j - 1][v] else { continue };
                    let around: Vec<GateId> = g.neighbors(v).iter().filter_map(|&u| levels[j - 1][u]).collect();
                    if around.is_empty() {
                        continue;
                    }
                    let around = circuit.new_add(around)?;
                    children.push(circuit.new_mul(around, own)?);
                }
                level.push(if children.is_empty() {
                    None
                } else {
                    Some(circuit.new_add(children)?)
                });
            }
            levels.push(level);
        }
        Ok(BranchingWalk { levels })
    }

    pub fn max_size(&self) -> usize {
        self.levels.len()
    }

    pub fn gate(&self, v: usize, size: usize) -> Option<GateId> {
        self.levels.get(size.checked_sub(1)?)?.get(v).copied().flatten()
    }

    /// `sum_v B(v, size)`, or `None` if every term vanishes.
    pub fn root_sum(&self, circuit: &mut Circuit, size: usize) -> Result<Option<GateId>> {
        let roots: Vec<GateId> = (0..self.levels[0].len())
            .filter_map(|v| self.gate(v, size))
            .collect();
        if roots.is_empty() {
            Ok(None)
        } else {
            circuit.new_add(roots).map(Some)
        }
    }
}

/// Branching-walk circuit of size `k` whose output is `sum_v B(v, k)`.
/// `terminal` supplies `B(v, 1)`; it returns `None` for vertices that may
/// not appear. Returns `None` when the output is identically empty.
pub fn branching_walk_circuit<F>(g: &ColoredGraph, k: usize, mut terminal: F) -> Result<Option<Circuit>>
where
    F: FnMut(&mut Circuit, usize) -> Result<Option<GateId>>,
{
    if g.is_empty() {
        return Err(Error::InvalidGraph("graph has no vertices".into()));
    }
    let mut circuit = Circuit::new();
    let terminals = (0..g.len())
        .map(|v| terminal(&mut circuit, v))
        .collect::<Result<Vec<_>>>()?;
    let walk = BranchingWalk::build(&mut circuit, g, k, terminals)?;
    match walk.root_sum(&mut circuit, k)? {
        Some(out) => {
            circuit.set_output(out)?;
            Ok(Some(circuit))
        }
        None => Ok(None),
    }
}

/// Input gate for a fresh variable, recording its color.
fn colored_input(circuit: &mut Circuit, colors: &mut Vec<ColorId>, name: String, color: ColorId) -> Result<GateId> {
    let var = circuit.add_var(name);
    debug_assert_eq!(var, VarId(colors.len()));
    colors.push(color);
    circuit.new_input(var)
}

fn vertex_var(prefix: char, v: usize) -> String {
    format!("{prefix}{v}")
}

/// Verdict for a run that needs no trials; reports the plan it would have used.
fn no_trials(multiplicities: &[usize], k: usize, config: &EngineConfig) -> Result<Verdict> {
    let field = config.field_for_degree(k)?;
    let plan = match plan_repetitions(multiplicities, k, config.delta) {
        Ok(plan) => config.apply_trial_cap(plan),
        Err(Error::Infeasible { .. }) => RepetitionPlan::empty(config.delta, k),
        Err(e) => return Err(e),
    };
    Ok(Verdict::immediate_no(config.seed, field.bits(), plan))
}

/// Detection on the branching-walk circuit of size `k`, with terminals `x_v`
/// for active vertices whose color has a positive multiplicity.
fn detect_colored_set(
    g: &ColoredGraph,
    multiplicities: &[usize],
    k: usize,
    active: &[bool],
    config: &EngineConfig,
) -> Result<Verdict> {
    config.check_k("k", k, config.max_k)?;
    let mut colors = Vec::new();
    let circuit = branching_walk_circuit(g, k, |c, v| {
        let color = g.color(v);
        if active[v] && multiplicities[color.0] > 0 {
            colored_input(c, &mut colors, vertex_var('x', v), color).map(Some)
        } else {
            Ok(None)
        }
    })?;
    match circuit {
        Some(circuit) => solve_cmld(
            &CmldInstance::new(circuit, colors, multiplicities.to_vec(), k)?,
            config,
        ),
        None => no_trials(multiplicities, k, config),
    }
}

/// Is there a connected set of `|M|` vertices whose colors are exactly `M`?
pub fn decide_graph_motif(g: &ColoredGraph, motif: &Motif, config: &EngineConfig) -> Result<Verdict> {
    let k = motif.size();
    let mults = motif.multiplicities_in(g);
    if g.is_empty() || !motif.fits_in(g) {
        let sizes: Vec<usize> = motif.entries().map(|(_, m)| m).collect();
        return no_trials(&sizes, k, config);
    }
    detect_colored_set(g, &mults, k, &vec![true; g.len()], config)
}

/// Is there a connected set of `k` vertices using each color `c` at most
/// `mu(c)` times?
pub fn decide_multiset_motif(g: &ColoredGraph, motif: &Motif, k: usize, config: &EngineConfig) -> Result<Verdict> {
    let sizes: Vec<usize> = motif.entries().map(|(_, m)| m).collect();
    let coverable: usize = sizes.iter().map(|&m| m.min(k)).sum();
    if k == 0 || coverable < k {
        return Err(Error::Infeasible { k, coverable });
    }
    if g.is_empty() {
        return no_trials(&sizes, k, config);
    }
    detect_colored_set(g, &motif.multiplicities_in(g), k, &vec![true; g.len()], config)
}

/// A set of vertices realizing a motif.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Occurrence {
    pub vertices: Vec<usize>,
}

/// Rounds of deletion sweeps before [`find_occurrence`] gives up.
const MAX_DELETION_PASSES: usize = 3;

/// Finds one occurrence of `motif` by deleting vertices while the answer
/// stays yes. The returned set always has exactly `|M|` vertices; with
/// probability at least `1 - delta` it is an occurrence whenever one exists.
pub fn find_occurrence(g: &ColoredGraph, motif: &Motif, config: &EngineConfig) -> Result<Option<Occurrence>> {
    let k = motif.size();
    let n = g.len();
    if n == 0 || !motif.fits_in(g) {
        return Ok(None);
    }
    let mults = motif.multiplicities_in(g);
    let per_call = config.with_delta(config.delta / (n as f64 + 1.0));
    let mut calls = 0u64;
    let mut decide = |active: &[bool]| -> Result<bool> {
        let cfg = per_call.with_seed(derive_seed(config.seed, calls));
        calls += 1;
        Ok(detect_colored_set(g, &mults, k, active, &cfg)?.answer)
    };

    let mut active: Vec<bool> = (0..n).map(|v| mults[g.color(v).0] > 0).collect();
    if !decide(&active)? {
        return Ok(None);
    }
    let mut remaining = active.iter().filter(|&&a| a).count();
    for _ in 0..MAX_DELETION_PASSES {
        for v in 0..n {
            if remaining == k {
                break;
            }
            if !active[v] {
                continue;
            }
            active[v] = false;
            if decide(&active)? {
                remaining -= 1;
            } else {
                active[v] = true;
            }
        }
        if remaining == k {
            let vertices = (0..n).filter(|&v| active[v]).collect();
            return Ok(Some(Occurrence { vertices }));
        }
    }
    Ok(None)
}

/// One decision made while sweeping a problem parameter.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct SweepStep {
    pub parameter: usize,
    pub verdict: Verdict,
}

/// Result of a parameter sweep: the first parameter answered yes, if any.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct SweepOutcome {
    pub value: Option<usize>,
    pub steps: Vec<SweepStep>,
}

impl SweepOutcome {
    pub fn total_trials(&self) -> u64 {
        self.steps.iter().map(|s| s.verdict.trials_run).sum()
    }
}

/// Smallest `p` such that some connected set of `|M| + p` vertices contains
/// the motif, searched for `p <= max_p` (default: as far as the graph and
/// `config.max_k` allow).
///
/// Motif-colored vertices get terminals `x_v + y_v`, all others `y_v`, where
/// every `y_v` carries a gap color of multiplicity `p`. The circuit degree
/// `|M| + p` equals the sum of all bounds, so an allowed term uses each motif
/// color exactly `mu(c)` times and exactly `p` gap variables. A term that
/// picks both `x_v` and `y_v` of one vertex only overstates `p`.
pub fn min_add(g: &ColoredGraph, motif: &Motif, max_p: Option<usize>, config: &EngineConfig) -> Result<SweepOutcome> {
    let k = motif.size();
    let n = g.len();
    let mut outcome = SweepOutcome {
        value: None,
        steps: Vec::new(),
    };
    if n == 0 || !motif.fits_in(g) {
        return Ok(outcome);
    }
    let limit = match max_p {
        Some(p) => {
            config.check_k("k + max_p", k + p, config.max_k)?;
            p.min(n - k)
        }
        None => (n - k).min(config.max_k.saturating_sub(k)),
    };
    let mults = motif.multiplicities_in(g);
    let gap = ColorId(g.num_colors());

    for p in 0..=limit {
        let mut colors = Vec::new();
        let circuit = branching_walk_circuit(g, k + p, |c, v| {
            let color = g.color(v);
            let x = if mults[color.0] > 0 {
                Some(colored_input(c, &mut colors, vertex_var('x', v), color)?)
            } else {
                None
            };
            let y = if p > 0 {
                Some(colored_input(c, &mut colors, vertex_var('y', v), gap)?)
            } else {
                None
            };
            match (x, y) {
                (Some(x), Some(y)) => c.new_add(vec![x, y]).map(Some),
                (x, y) => Ok(x.or(y)),
            }
        })?;
        let mut bounds = mults.clone();
        bounds.push(p);
        let cfg = config.with_seed(derive_seed(config.seed, p as u64));
        let verdict = match circuit {
            Some(circuit) => solve_cmld(&CmldInstance::new(circuit, colors, bounds, k + p)?, &cfg)?,
            None => no_trials(&bounds, k + p, &cfg)?,
        };
        let yes = verdict.answer;
        outcome.steps.push(SweepStep { parameter: p, verdict });
        if yes {
            outcome.value = Some(p);
            break;
        }
    }
    Ok(outcome)
}

/// Smallest `q` such that some set with colors exactly `M` induces at most
/// `q` connected components.
///
/// The q-part circuit sums, over roots `w_1 < ... < w_q` and sizes
/// `s_1 + ... + s_q = |M|`, the products `B(w_1, s_1) ... B(w_q, s_q)`. Fixing
/// the root order means each split of a set into parts is generated by a
/// single chain of gates, so equal-sized parts are never produced twice with
/// the same multipliers.
pub fn min_cc(g: &ColoredGraph, motif: &Motif, config: &EngineConfig) -> Result<SweepOutcome> {
    let k = motif.size();
    let mut outcome = SweepOutcome {
        value: None,
        steps: Vec::new(),
    };
    if g.is_empty() || !motif.fits_in(g) {
        return Ok(outcome);
    }
    config.check_k("k", k, config.max_k)?;
    let mults = motif.multiplicities_in(g);

    for q in 1..=k {
        let mut circuit = Circuit::new();
        let mut colors = Vec::new();
        let terminals = (0..g.len())
            .map(|v| {
                let color = g.color(v);
                if mults[color.0] > 0 {
                    colored_input(&mut circuit, &mut colors, vertex_var('x', v), color).map(Some)
                } else {
                    Ok(None)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let walk = BranchingWalk::build(&mut circuit, g, k - q + 1, terminals)?;
        let mut parts = PartChain {
            walk: &walk,
            n: g.len(),
            memo: HashMap::new(),
        };
        let out = parts.gate(&mut circuit, q, k, 0)?;
        let cfg = config.with_seed(derive_seed(config.seed, q as u64));
        let verdict = match out {
            Some(out) => {
                circuit.set_output(out)?;
                solve_cmld(&CmldInstance::new(circuit, colors, mults.clone(), k)?, &cfg)?
            }
            None => no_trials(&mults, k, &cfg)?,
        };
        let yes = verdict.answer;
        outcome.steps.push(SweepStep { parameter: q, verdict });
        if yes {
            outcome.value = Some(q);
            break;
        }
    }
    Ok(outcome)
}

/// `E(r, s, w)`: sum over `r` parts of total size `s` rooted at increasing
/// vertices `>= w`.
struct PartChain<'a> {
    walk: &'a BranchingWalk,
    n: usize,
    memo: HashMap<(usize, usize, usize), Option<GateId>>,
}

impl PartChain<'_> {
    fn gate(&mut self, circuit: &mut Circuit, r: usize, s: usize, w: usize) -> Result<Option<GateId>> {
        if w >= self.n || s < r || r == 0 {
            return Ok(None);
        }
        if let Some(&g) = self.memo.get(&(r, s, w)) {
            return Ok(g);
        }
        // Either w is not a root, or it roots the first part.
        let mut children: Vec<GateId> = self.gate(circuit, r, s, w + 1)?.into_iter().collect();
        if r == 1 {
            children.extend(self.walk.gate(w, s));
        } else {
            for s1 in 1..=s - (r - 1) {
                let Some(head) = self.walk.gate(w, s1) else { continue };
                if let Some(tail) = self.gate(circuit, r - 1, s - s1, w + 1)? {
                    children.push(circuit.new_mul(head, tail)?);
                }
            }
        }
        let gate = match children.len() {
            0 => None,
            _ => Some(circuit.new_add(children)?),
        };
        self.memo.insert((r, s, w), gate);
        Ok(gate)
    }
}

/// Result of [`min_substitute`].
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct SubstituteOutcome {
    /// Fewest substitutions found, `None` if every trial evaluated to zero.
    pub value: Option<usize>,
    pub trials_run: u64,
    /// First trial that reached `value`.
    pub best_trial: Option<u64>,
    pub seed: u64,
    pub field_bits: u32,
    pub plan: RepetitionPlan,
}

/// Smallest number of substitutions `sum_c max(0, count_S(c) - mu(c))` over
/// connected sets `S` of `|M|` vertices.
///
/// Every vertex gets terminal `a x_v + b y_v` (only `y_v` when its color is
/// not in the motif). Over `F[z][Z2^{2k}]`, `x_v` maps to
/// `(v0 + v~)(v0 + w)` with `v~` from the color's subspace in the upper `k`
/// coordinates and `w` uniform in the lower `k`, and `y_v` maps to
/// `z (v0 + w)`. The lowest nonzero power of `z` in the result counts the
/// `y` factors of a surviving term.
///
/// The result has degree at most `k` in `z`, so each trial evaluates the
/// circuit over `F[Z2^{2k}]` at `k + 1` distinct values of `z` and
/// interpolates.
pub fn min_substitute(
    g: &ColoredGraph,
    motif: &Motif,
    max_k: usize,
    config: &EngineConfig,
) -> Result<SubstituteOutcome> {
    let k = motif.size();
    config.check_k("k", k, max_k)?;
    let field = config.field_for_degree(2 * k)?;
    let sizes: Vec<usize> = motif.entries().map(|(_, m)| m).collect();
    let worst = (0..=k)
        .filter_map(|t| worst_grouping_log(&sizes, t))
        .fold(0.0, f64::min);
    let plan = config.apply_trial_cap(RepetitionPlan::from_success(
        worst.exp() / 16.0,
        config.delta,
        2 * k,
    )?);
    let mut outcome = SubstituteOutcome {
        value: None,
        trials_run: 0,
        best_trial: None,
        seed: config.seed,
        field_bits: field.bits(),
        plan,
    };
    if g.len() < k || g.is_empty() {
        return Ok(outcome);
    }

    let mults = motif.multiplicities_in(g);
    let Some(floor) = substitution_floor(g, &mults, k) else {
        return Ok(outcome);
    };
    // (vertex, color for x variables / None for y variables), by variable id
    let mut kinds = Vec::new();
    let circuit = branching_walk_circuit(g, k, |c, v| {
        let color = g.color(v);
        let y_var = c.add_var(vertex_var('y', v));
        kinds.push((v, None));
        let y = c.new_input(y_var)?;
        if mults[color.0] == 0 {
            return Ok(Some(y));
        }
        let x_var = c.add_var(vertex_var('x', v));
        kinds.push((v, Some(color)));
        let x = c.new_input(x_var)?;
        c.new_add(vec![x, y]).map(Some)
    })?;
    let Some(circuit) = circuit else {
        return Ok(outcome);
    };

    let algebra = GroupAlgebra::new(field.clone(), 2 * k)?;
    let points: Vec<FieldElement> = (0..=k as u32).map(FieldElement).collect();
    let inverse = vandermonde_inverse(&field, &points)?;
    let trial = |i: u64| -> Result<Option<usize>> {
        let mut rng = trial_rng(config.seed, i);
        let family = sample_subspaces(&mults, k, &mut rng)?;
        let lower: Vec<u64> = (0..g.len())
            .map(|_| rand::Rng::gen_range(&mut rng, 0..1u64 << k))
            .collect();
        let mut base = Vec::with_capacity(kinds.len());
        for &(v, color) in &kinds {
            let w = GroupVector::new(2 * k, lower[v])?;
            base.push(match color {
                Some(color) => {
                    let upper = family.sample_vector(color, &mut rng)?;
                    let upper = GroupVector::new(2 * k, upper.bits() << k)?;
                    algebra.mul_by_pair(&algebra.from_pair(upper)?, w)?
                }
                None => algebra.from_pair(w)?,
            });
        }
        let multipliers = circuit.extend(&field, &mut rng);

        let mut evaluations = Vec::with_capacity(points.len());
        for &z in &points {
            let values = base
                .iter()
                .zip(&kinds)
                .map(|(value, (_, color))| match color {
                    Some(_) => Ok(Some(value.clone())),
                    None => algebra.scale(value, z).map(Some),
                })
                .collect::<Result<Vec<_>>>()?;
            evaluations.push(circuit.evaluate(&multipliers, &algebra, &values)?);
        }
        // coefficient of z^p at w is sum_j inverse[p][j] * evaluations[j][w]
        for (p, row) in inverse.iter().enumerate() {
            let nonzero = (0..algebra.len()).any(|w| {
                row.iter()
                    .zip(&evaluations)
                    .fold(FieldElement::ZERO, |acc, (&m, e)| acc + field.mul(m, e.coeffs()[w]))
                    != FieldElement::ZERO
            });
            if nonzero {
                return Ok(Some(p));
            }
        }
        Ok(None)
    };

    let results = run_trials(outcome.plan.trials, config.threads, trial, |&p| p == Some(floor))?;
    outcome.trials_run = results.len() as u64;
    outcome.value = results.iter().flatten().copied().min();
    outcome.best_trial = outcome
        .value
        .and_then(|best| results.iter().position(|&p| p == Some(best)))
        .map(|i| i as u64);
    Ok(outcome)
}

/// Lower bound on the substitution count of any connected `k`-set, or `None`
/// when no component has `k` vertices. A set inside a component with only
/// `N_c` vertices of color `c` misses at least `mu(c) - N_c` of them, and every
/// missing motif vertex is a substituted one.
fn substitution_floor(g: &ColoredGraph, mults: &[usize], k: usize) -> Option<usize> {
    let mut seen = vec![false; g.len()];
    let mut best = None;
    for start in 0..g.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut counts = vec![0usize; mults.len()];
        let mut size = 0;
        while let Some(v) = stack.pop() {
            size += 1;
            counts[g.color(v).0] += 1;
            for &u in g.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        if size >= k {
            // colors absent from g have no entry in `mults`, so count what is covered
            let covered: usize = mults.iter().zip(&counts).map(|(&m, &c)| m.min(c)).sum();
            let deficit = k - covered;
            best = Some(best.map_or(deficit, |b: usize| b.min(deficit)));
        }
    }
    best
}

/// Inverse of the Vandermonde matrix `V[j][p] = points[j]^p`, so that
/// `coeff[p] = sum_j inverse[p][j] * value[j]`.
fn vandermonde_inverse(field: &FieldContext, points: &[FieldElement]) -> Result<Vec<Vec<FieldElement>>> {
    let n = points.len();
    // Gauss-Jordan on [V | I]
    let mut rows: Vec<Vec<FieldElement>> = points
        .iter()
        .enumerate()
        .map(|(j, &x)| {
            let mut row: Vec<FieldElement> = (0..n).map(|p| field.pow(x, p as u64)).collect();
            row.extend((0..n).map(|c| if c == j { FieldElement::ONE } else { FieldElement::ZERO }));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !rows[r][col].is_zero())
            .ok_or_else(|| Error::InvalidArgument("interpolation points are not distinct".into()))?;
        rows.swap(col, pivot);
        let inv = field.inverse(rows[col][col]).expect("pivot is nonzero");
        for x in rows[col].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = rows[col].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            let factor = row[col];
            if r != col && !factor.is_zero() {
                for (x, &p) in row.iter_mut().zip(&pivot_row) {
                    *x += field.mul(factor, p);
                }
            }
        }
    }
    Ok(rows.into_iter().map(|row| row[n..].to_vec()).collect())
}

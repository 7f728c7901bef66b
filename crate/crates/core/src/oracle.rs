//! Exhaustive reference answers for small instances.

use std::collections::{BTreeMap, HashMap};

use crate::assignment::ColorId;
use crate::circuit::{Circuit, Gate, VarId};
use crate::error::{Error, Result};
use crate::graph::{ColoredGraph, Motif};

/// Largest graph the enumeration oracles accept.
pub const MAX_ORACLE_VERTICES: usize = 24;

fn guard(g: &ColoredGraph) -> Result<()> {
    if g.len() > MAX_ORACLE_VERTICES {
        Err(Error::ResourceGuard {
            what: "oracle vertices",
            value: g.len(),
            limit: MAX_ORACLE_VERTICES,
        })
    } else {
        Ok(())
    }
}

/// Calls `visit` once for every connected set of `k` vertices (sorted).
///
/// Each set is grown from its smallest vertex; candidates are neighbors of
/// the current set above that vertex and not yet excluded.
pub fn for_each_connected_set<F: FnMut(&[usize])>(g: &ColoredGraph, k: usize, mut visit: F) {
    if k == 0 {
        return;
    }
    let n = g.len();
    let mut blocked = vec![false; n];
    for root in 0..n {
        let mut set = vec![root];
        let mut frontier: Vec<usize> = g.neighbors(root).iter().copied().filter(|&u| u > root).collect();
        blocked[root] = true;
        for &u in &frontier {
            blocked[u] = true;
        }
        extend(g, root, k, &mut set, frontier.clone(), &mut blocked, &mut visit);
        blocked[root] = false;
        for u in frontier.drain(..) {
            blocked[u] = false;
        }
    }
}

fn extend<F: FnMut(&[usize])>(
    g: &ColoredGraph,
    root: usize,
    k: usize,
    set: &mut Vec<usize>,
    mut frontier: Vec<usize>,
    blocked: &mut [bool],
    visit: &mut F,
) {
    if set.len() == k {
        let mut sorted = set.clone();
        sorted.sort_unstable();
        visit(&sorted);
        return;
    }
    while let Some(w) = frontier.pop() {
        let added: Vec<usize> = g
            .neighbors(w)
            .iter()
            .copied()
            .filter(|&u| u > root && !blocked[u])
            .collect();
        for &u in &added {
            blocked[u] = true;
        }
        let mut next = frontier.clone();
        next.extend(&added);
        set.push(w);
        extend(g, root, k, set, next, blocked, visit);
        set.pop();
        for &u in &added {
            blocked[u] = false;
        }
    }
}

/// All connected `k`-vertex sets, each sorted, in discovery order.
pub fn enum_connected_sets(g: &ColoredGraph, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_connected_set(g, k, |s| out.push(s.to_vec()));
    out
}

/// Number of connected components of the subgraph induced by `set`.
pub fn component_count(g: &ColoredGraph, set: &[usize]) -> usize {
    let inside: HashMap<usize, usize> = set.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut seen = vec![false; set.len()];
    let mut components = 0;
    for start in 0..set.len() {
        if seen[start] {
            continue;
        }
        components += 1;
        seen[start] = true;
        let mut stack = vec![set[start]];
        while let Some(v) = stack.pop() {
            for u in g.neighbors(v) {
                if let Some(&i) = inside.get(u) {
                    if !seen[i] {
                        seen[i] = true;
                        stack.push(*u);
                    }
                }
            }
        }
    }
    components
}

pub fn is_connected_set(g: &ColoredGraph, set: &[usize]) -> bool {
    !set.is_empty() && component_count(g, set) == 1
}

/// Vertex count per color of `g`, indexed by [`ColorId`].
pub fn color_counts(g: &ColoredGraph, set: &[usize]) -> Vec<usize> {
    let mut counts = vec![0; g.num_colors()];
    for &v in set {
        counts[g.color(v).0] += 1;
    }
    counts
}

/// Is `set` a connected set of distinct vertices whose colors are exactly `M`?
pub fn is_occurrence(g: &ColoredGraph, motif: &Motif, set: &[usize]) -> bool {
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    sorted.len() == set.len()
        && set.iter().all(|&v| v < g.len())
        && color_counts(g, set) == motif.multiplicities_in(g)
        && set.len() == motif.size()
        && is_connected_set(g, set)
}

fn covers(counts: &[usize], mults: &[usize]) -> bool {
    counts.iter().zip(mults).all(|(c, m)| c >= m)
}

/// Sum of `max(0, count(c) - mu(c))`.
pub fn substitutions(counts: &[usize], mults: &[usize]) -> usize {
    counts.iter().zip(mults).map(|(c, m)| c.saturating_sub(*m)).sum()
}

pub fn brute_graph_motif(g: &ColoredGraph, motif: &Motif) -> Result<bool> {
    guard(g)?;
    if !motif.fits_in(g) {
        return Ok(false);
    }
    let mults = motif.multiplicities_in(g);
    let mut found = false;
    for_each_connected_set(g, motif.size(), |s| found |= color_counts(g, s) == mults);
    Ok(found)
}

/// Connected `k`-set using each color at most `mu(c)` times.
pub fn brute_multiset_motif(g: &ColoredGraph, motif: &Motif, k: usize) -> Result<bool> {
    guard(g)?;
    let mults = motif.multiplicities_in(g);
    let mut found = false;
    for_each_connected_set(g, k, |s| {
        found |= color_counts(g, s).iter().zip(&mults).all(|(c, m)| c <= m)
    });
    Ok(found)
}

/// Fewest extra vertices in a connected set containing the motif.
pub fn brute_min_add(g: &ColoredGraph, motif: &Motif) -> Result<Option<usize>> {
    guard(g)?;
    let k = motif.size();
    if !motif.fits_in(g) {
        return Ok(None);
    }
    let mults = motif.multiplicities_in(g);
    for size in k..=g.len() {
        let mut found = false;
        for_each_connected_set(g, size, |s| found |= covers(&color_counts(g, s), &mults));
        if found {
            return Ok(Some(size - k));
        }
    }
    Ok(None)
}

/// Fewest components induced by a set whose colors are exactly `M`.
pub fn brute_min_cc(g: &ColoredGraph, motif: &Motif) -> Result<Option<usize>> {
    guard(g)?;
    if !motif.fits_in(g) {
        return Ok(None);
    }
    let mults = motif.multiplicities_in(g);
    let by_color: Vec<Vec<usize>> = (0..g.num_colors())
        .map(|c| (0..g.len()).filter(|&v| g.color(v) == ColorId(c)).collect())
        .collect();
    let mut best = usize::MAX;
    let mut chosen = Vec::new();
    choose_per_color(&by_color, &mults, 0, 0, &mut chosen, &mut |set| {
        best = best.min(component_count(g, set));
    });
    Ok(Some(best))
}

/// Visits every set taking exactly `mults[c]` vertices of each color `c`.
fn choose_per_color<F: FnMut(&[usize])>(
    by_color: &[Vec<usize>],
    mults: &[usize],
    color: usize,
    from: usize,
    chosen: &mut Vec<usize>,
    visit: &mut F,
) {
    if color == by_color.len() {
        visit(chosen);
        return;
    }
    let taken = chosen.iter().filter(|&&v| by_color[color].contains(&v)).count();
    if taken == mults[color] {
        choose_per_color(by_color, mults, color + 1, 0, chosen, visit);
        return;
    }
    let pool = &by_color[color];
    for i in from..pool.len() {
        if pool.len() - i < mults[color] - taken {
            break;
        }
        chosen.push(pool[i]);
        choose_per_color(by_color, mults, color, i + 1, chosen, visit);
        chosen.pop();
    }
}

/// Fewest substitutions over connected `|M|`-sets.
pub fn brute_min_substitute(g: &ColoredGraph, motif: &Motif) -> Result<Option<usize>> {
    guard(g)?;
    let mults = motif.multiplicities_in(g);
    let mut best: Option<usize> = None;
    for_each_connected_set(g, motif.size(), |s| {
        let p = substitutions(&color_counts(g, s), &mults);
        best = Some(best.map_or(p, |b| b.min(p)));
    });
    Ok(best)
}

/// Multilinear monomials (sorted variable lists) with their number of
/// copies, i.e. the count of parse trees producing each monomial.
pub type MonomialMap = BTreeMap<Vec<VarId>, u64>;

/// Expands the output into its multilinear monomials of degree at most
/// `cap`. Non-multilinear products are dropped as soon as they appear.
/// Fails once any gate holds more than `budget` monomials.
pub fn expand_multilinear(circuit: &Circuit, cap: usize, budget: usize) -> Result<MonomialMap> {
    let output = circuit.output().ok_or(Error::NoOutput)?;
    let mut values: Vec<MonomialMap> = Vec::with_capacity(output.0 + 1);
    for gate in &circuit.gates()[..=output.0] {
        let value = match gate {
            Gate::Input(v) => {
                let mut m = MonomialMap::new();
                if cap >= 1 {
                    m.insert(vec![*v], 1);
                }
                m
            }
            Gate::Add(children) => {
                let mut m = MonomialMap::new();
                for c in children {
                    for (mono, count) in &values[c.0] {
                        let e = m.entry(mono.clone()).or_insert(0);
                        *e = e.saturating_add(*count);
                    }
                }
                m
            }
            Gate::Mul(l, r) => {
                let mut m = MonomialMap::new();
                for (a, ca) in &values[l.0] {
                    for (b, cb) in &values[r.0] {
                        if a.len() + b.len() > cap || a.iter().any(|v| b.binary_search(v).is_ok()) {
                            continue;
                        }
                        let mut mono = a.clone();
                        mono.extend_from_slice(b);
                        mono.sort_unstable();
                        let e = m.entry(mono).or_insert(0);
                        *e = e.saturating_add(ca.saturating_mul(*cb));
                    }
                }
                m
            }
        };
        if value.len() > budget {
            return Err(Error::BudgetExceeded(budget));
        }
        values.push(value);
    }
    Ok(values.pop().expect("output expanded"))
}

/// Does the circuit contain a multilinear monomial of degree `k` with at
/// most `mults[c]` variables of each color? Copies are counted, never
/// cancelled.
pub fn brute_multilinear(
    circuit: &Circuit,
    var_colors: &[ColorId],
    mults: &[usize],
    k: usize,
    budget: usize,
) -> Result<bool> {
    let monomials = expand_multilinear(circuit, k, budget)?;
    Ok(monomials.keys().any(|mono| {
        if mono.len() != k {
            return false;
        }
        let mut used = vec![0usize; mults.len()];
        mono.iter().all(|v| {
            let c = var_colors[v.0].0;
            used[c] += 1;
            used[c] <= mults[c]
        })
    }))
}

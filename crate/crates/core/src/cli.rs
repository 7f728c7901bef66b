//! Command-line front end. Reports are single-line JSON on stdout; a short
//! human-readable summary goes to stderr.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::assignment::{ColorId, RepetitionPlan};
use crate::circuit::{parse_circuit, Circuit};
use crate::engine::{solve_cmld, solve_mld, CmldInstance, EngineConfig, Verdict, DEFAULT_MAX_K};
use crate::error::{Error, Result};
use crate::graph::{ColoredGraph, Motif};
use crate::motif::{
    decide_graph_motif, decide_multiset_motif, find_occurrence, min_add, min_cc, min_substitute, SweepOutcome,
    DEFAULT_MAX_SUBSTITUTE_K,
};
use crate::selftest;

#[derive(Debug, Parser)]
#[command(name = "cmld", version, about = "Constrained multilinear detection and colored motif search")]
pub struct Cli {
    #[command(flatten)]
    pub run: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Random seed.
    #[arg(long, global = true, env = "CMLD_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Bound on the probability of a wrong "no".
    #[arg(long, global = true, default_value_t = 0.01, value_parser = parse_delta)]
    pub delta: f64,
    /// Worker threads for independent trials.
    #[arg(long, global = true, env = "CMLD_THREADS", default_value_t = 1,
          value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: u32,
    /// Field width b of GF(2^b); derived from k when omitted.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..=32))]
    pub field_bits: Option<u32>,
    /// Run exactly this many trials instead of the planned number.
    #[arg(long, global = true)]
    pub max_reps: Option<u64>,
    /// Largest k (group dimension) accepted.
    #[arg(long, global = true)]
    pub max_k: Option<usize>,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    pub timing: bool,
}

fn parse_delta(s: &str) -> std::result::Result<f64, String> {
    let d: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if d > 0.0 && d < 1.0 {
        Ok(d)
    } else {
        Err(format!("delta must lie in (0, 1), got {d}"))
    }
}

impl RunConfig {
    fn engine(&self) -> EngineConfig {
        EngineConfig {
            delta: self.delta,
            seed: self.seed,
            threads: self.threads as usize,
            field_bits: self.field_bits,
            max_trials: self.max_reps,
            max_k: self.max_k.unwrap_or(DEFAULT_MAX_K),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct MotifInput {
    /// Graph file.
    pub graph: PathBuf,
    /// Motif file.
    pub motif: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether the motif occurs (with --k: multiset motif of size k).
    Decide {
        #[command(flatten)]
        input: MotifInput,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Find one occurrence of the motif.
    Find {
        #[command(flatten)]
        input: MotifInput,
    },
    /// Fewest extra vertices needed to connect the motif.
    MinAdd {
        #[command(flatten)]
        input: MotifInput,
        #[arg(long)]
        max_p: Option<usize>,
    },
    /// Fewest connected components covering the motif.
    MinCc {
        #[command(flatten)]
        input: MotifInput,
    },
    /// Fewest color substitutions in a connected set of motif size.
    MinSubstitute {
        #[command(flatten)]
        input: MotifInput,
    },
    /// Multilinear detection on a circuit file.
    Mld {
        circuit: PathBuf,
        #[arg(long)]
        k: usize,
        /// Colors file: `color <var> <label>` and `mult <label> <n>` lines.
        #[arg(long)]
        colors: Option<PathBuf>,
    },
    /// Run reduced statistical and oracle checks.
    Selftest,
}

/// Runs a parsed command, writing the JSON report to `out` and the summary
/// or error message to `err`. Returns the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let start = Instant::now();
    match execute(cli) {
        Ok((mut report, summary, ok)) => {
            if cli.run.timing {
                report.insert("wall_time_ms".into(), json!(start.elapsed().as_secs_f64() * 1e3));
            }
            let _ = writeln!(out, "{}", Value::Object(report));
            let _ = writeln!(err, "{summary}");
            if ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load(input: &MotifInput) -> Result<(ColoredGraph, Motif)> {
    let g = ColoredGraph::parse(&read(&input.graph)?, &input.graph.display().to_string())?;
    let m = Motif::parse(&read(&input.motif)?, &input.motif.display().to_string())?;
    Ok((g, m))
}

fn yes_no(answer: bool) -> &'static str {
    if answer {
        "yes"
    } else {
        "no"
    }
}

fn plan_json(plan: &RepetitionPlan) -> Value {
    json!({
        "trials": plan.trials,
        "q": plan.per_trial_success,
        "delta": plan.delta,
        "group_dim": plan.group_dim,
    })
}

fn base_report(command: &str, seed: u64) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("seed".into(), json!(seed));
    m
}

fn verdict_report(command: &str, k: usize, v: &Verdict) -> Map<String, Value> {
    let mut m = base_report(command, v.seed);
    m.insert("answer".into(), json!(yes_no(v.answer)));
    m.insert("k".into(), json!(k));
    m.insert("trials".into(), json!(v.trials_run));
    m.insert("first_hit".into(), json!(v.first_hit));
    m.insert("field_bits".into(), json!(v.field_bits));
    m.insert("plan".into(), plan_json(&v.plan));
    m
}

fn sweep_report(command: &str, key: &str, k: usize, seed: u64, s: &SweepOutcome) -> Map<String, Value> {
    let mut m = base_report(command, seed);
    m.insert("answer".into(), json!(yes_no(s.value.is_some())));
    m.insert(key.into(), json!(s.value));
    m.insert("k".into(), json!(k));
    m.insert("trials".into(), json!(s.total_trials()));
    let last_plan = s.steps.last().map(|st| plan_json(&st.verdict.plan));
    m.insert("plan".into(), last_plan.unwrap_or(Value::Null));
    let steps: Vec<Value> = s
        .steps
        .iter()
        .map(|st| {
            json!({
                key: st.parameter,
                "answer": yes_no(st.verdict.answer),
                "trials": st.verdict.trials_run,
                "field_bits": st.verdict.field_bits,
            })
        })
        .collect();
    m.insert("sweep".into(), Value::Array(steps));
    m
}

type Outcome = (Map<String, Value>, String, bool);

fn execute(cli: &Cli) -> Result<Outcome> {
    let cfg = cli.run.engine();
    match &cli.command {
        Command::Decide { input, k } => {
            let (g, m) = load(input)?;
            let (k, v) = match *k {
                Some(k) => (k, decide_multiset_motif(&g, &m, k, &cfg)?),
                None => (m.size(), decide_graph_motif(&g, &m, &cfg)?),
            };
            let summary = format!("decide: {} after {} trial(s)", yes_no(v.answer), v.trials_run);
            Ok((verdict_report("decide", k, &v), summary, true))
        }
        Command::Find { input } => {
            let (g, m) = load(input)?;
            let occ = find_occurrence(&g, &m, &cfg)?;
            let mut r = base_report("find", cfg.seed);
            r.insert("answer".into(), json!(yes_no(occ.is_some())));
            r.insert("k".into(), json!(m.size()));
            let labels = occ
                .as_ref()
                .map(|o| o.vertices.iter().map(|&v| g.vertex_label(v)).collect::<Vec<_>>());
            r.insert("vertices".into(), json!(labels));
            let summary = match &labels {
                Some(l) => format!("find: occurrence {{{}}}", l.join(", ")),
                None => "find: no occurrence".into(),
            };
            Ok((r, summary, true))
        }
        Command::MinAdd { input, max_p } => {
            let (g, m) = load(input)?;
            let s = min_add(&g, &m, *max_p, &cfg)?;
            let summary = format!("min-add: p = {}", show(s.value));
            Ok((sweep_report("min-add", "p", m.size(), cfg.seed, &s), summary, true))
        }
        Command::MinCc { input } => {
            let (g, m) = load(input)?;
            let s = min_cc(&g, &m, &cfg)?;
            let summary = format!("min-cc: q = {}", show(s.value));
            Ok((sweep_report("min-cc", "q", m.size(), cfg.seed, &s), summary, true))
        }
        Command::MinSubstitute { input } => {
            let (g, m) = load(input)?;
            let max_k = cli.run.max_k.unwrap_or(DEFAULT_MAX_SUBSTITUTE_K);
            let s = min_substitute(&g, &m, max_k, &cfg)?;
            let mut r = base_report("min-substitute", s.seed);
            r.insert("answer".into(), json!(yes_no(s.value.is_some())));
            r.insert("p".into(), json!(s.value));
            r.insert("k".into(), json!(m.size()));
            r.insert("trials".into(), json!(s.trials_run));
            r.insert("best_trial".into(), json!(s.best_trial));
            r.insert("field_bits".into(), json!(s.field_bits));
            r.insert("plan".into(), plan_json(&s.plan));
            let summary = format!("min-substitute: p = {}", show(s.value));
            Ok((r, summary, true))
        }
        Command::Mld { circuit, k, colors } => {
            let c = parse_circuit(&read(circuit)?, &circuit.display().to_string())?;
            let v = match colors {
                None => solve_mld(&c, *k, &cfg)?,
                Some(path) => {
                    let (var_colors, mults) = parse_colors(&read(path)?, &path.display().to_string(), &c)?;
                    solve_cmld(&CmldInstance::new(c, var_colors, mults, *k)?, &cfg)?
                }
            };
            let summary = format!("mld: {} after {} trial(s)", yes_no(v.answer), v.trials_run);
            Ok((verdict_report("mld", *k, &v), summary, true))
        }
        Command::Selftest => {
            let checks = selftest::run_all(&cfg)?;
            let passed = checks.iter().all(|c| c.passed);
            let mut r = base_report("selftest", cfg.seed);
            r.insert("passed".into(), json!(passed));
            r.insert("checks".into(), serde_json::to_value(&checks).map_err(|e| Error::Io(e.to_string()))?);
            let summary: Vec<String> = checks
                .iter()
                .map(|c| format!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail))
                .collect();
            Ok((r, summary.join("\n"), passed))
        }
    }
}

fn show(v: Option<usize>) -> String {
    v.map_or_else(|| "none".into(), |p| p.to_string())
}

/// Parses a colors file for `circuit`: `color <var> <label>` assigns a
/// variable's color, `mult <label> <n>` bounds a color. Every variable of
/// the circuit must be colored and every used color bounded.
pub fn parse_colors(text: &str, source: &str, circuit: &Circuit) -> Result<(Vec<ColorId>, Vec<usize>)> {
    let mut labels: Vec<String> = Vec::new();
    let mut var_colors: Vec<Option<ColorId>> = vec![None; circuit.num_vars()];
    let mut mults: Vec<Option<usize>> = Vec::new();
    let mut intern = |label: &str, mults: &mut Vec<Option<usize>>| -> ColorId {
        match labels.iter().position(|l| l == label) {
            Some(i) => ColorId(i),
            None => {
                labels.push(label.to_string());
                mults.push(None);
                ColorId(labels.len() - 1)
            }
        }
    };
    for (i, line) in text.lines().enumerate() {
        let no = i + 1;
        let content = line.split('#').next().unwrap_or("");
        let fields: Vec<&str> = content.split_whitespace().collect();
        let col = |f: &str| content.find(f).map_or(1, |p| p + 1);
        match fields.as_slice() {
            [] => {}
            ["color", var, label] => {
                let v = circuit
                    .var_by_name(var)
                    .ok_or_else(|| Error::parse(source, no, col(var), format!("unknown variable '{var}'")))?;
                if var_colors[v.0].is_some() {
                    return Err(Error::parse(source, no, col(var), format!("variable '{var}' colored twice")));
                }
                var_colors[v.0] = Some(intern(label, &mut mults));
            }
            ["mult", label, n] => {
                let n: usize = n
                    .parse()
                    .map_err(|_| Error::parse(source, no, col(n), format!("invalid multiplicity '{n}'")))?;
                let c = intern(label, &mut mults);
                if mults[c.0].replace(n).is_some() {
                    return Err(Error::parse(source, no, col(label), format!("color '{label}' bounded twice")));
                }
            }
            [first, ..] => {
                return Err(Error::parse(
                    source,
                    no,
                    col(first),
                    "expected 'color <var> <label>' or 'mult <label> <n>'",
                ))
            }
        }
    }
    let var_colors = var_colors
        .into_iter()
        .enumerate()
        .map(|(i, c)| c.ok_or_else(|| Error::UncoloredVariable(circuit.var_name(crate::circuit::VarId(i)).into())))
        .collect::<Result<Vec<_>>>()?;
    let mults = mults
        .into_iter()
        .zip(&labels)
        .map(|(m, l)| m.ok_or_else(|| Error::UnknownColor(format!("'{l}' has no multiplicity"))))
        .collect::<Result<Vec<_>>>()?;
    Ok((var_colors, mults))
}

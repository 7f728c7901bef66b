//! C ABI over the `cmld` library.
//!
//! Graphs, motifs and circuits live behind opaque handles that the caller
//! releases with the matching `*_free` function. Every fallible call returns a
//! [`CmldStatus`]; on failure the message is available from
//! [`cmld_last_error`] on the same thread until the next failing call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cmld::assignment::ColorId;
use cmld::circuit::{parse_circuit, Circuit};
use cmld::engine::{solve_cmld, solve_mld, CmldInstance, EngineConfig, Verdict, DEFAULT_MAX_K};
use cmld::graph::{ColoredGraph, Motif};
use cmld::motif::{self, DEFAULT_MAX_SUBSTITUTE_K};
use cmld::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmldStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    /// The multiplicities cannot cover `k` variables.
    Infeasible = 5,
    /// A size limit (`max_k`, oracle bounds, field width) was exceeded.
    ResourceLimit = 6,
    /// The output buffer is too small; the required length was still written.
    BufferTooSmall = 7,
    Internal = 8,
}

pub struct CmldGraph(ColoredGraph);
pub struct CmldMotif(Motif);
pub struct CmldCircuit(Circuit);

/// Run settings. Start from [`cmld_config_default`].
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct CmldConfig {
    /// Failure probability, in (0, 1).
    pub delta: f64,
    pub seed: u64,
    pub threads: u32,
    /// Field width b; 0 picks it from the degree.
    pub field_bits: u32,
    /// Overrides the planned number of trials when nonzero.
    pub max_trials: u64,
    /// Largest k accepted by the multilinear detectors.
    pub max_k: u32,
}

/// Outcome of a yes/no query.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct CmldDecision {
    pub answer: bool,
    pub trials_run: u64,
    pub planned_trials: u64,
    pub field_bits: u32,
}

/// Outcome of a minimization.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct CmldMinimum {
    /// False when no feasible value was found.
    pub found: bool,
    pub value: u64,
    pub trials_run: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(message));
}

fn status_of(error: &Error) -> CmldStatus {
    match error {
        Error::Parse { .. } => CmldStatus::Parse,
        Error::Infeasible { .. } => CmldStatus::Infeasible,
        Error::ResourceGuard { .. } | Error::BudgetExceeded(_) | Error::UnsupportedFieldBits(_) => {
            CmldStatus::ResourceLimit
        }
        _ => CmldStatus::InvalidArgument,
    }
}

struct Failure(CmldStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(CmldStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, turning errors and panics into a status and a stored message.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> CmldStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => CmldStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(panic) => {
            let message = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "internal error".into());
            set_last_error(message);
            CmldStatus::Internal
        }
    }
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(CmldStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn output<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn engine_config(config: *const CmldConfig) -> Result<EngineConfig, Failure> {
    let c = if config.is_null() { cmld_config_default() } else { *config };
    if !(c.delta > 0.0 && c.delta < 1.0) {
        return Err(Failure(CmldStatus::InvalidArgument, format!("delta {} is not in (0, 1)", c.delta)));
    }
    Ok(EngineConfig {
        delta: c.delta,
        seed: c.seed,
        threads: c.threads.max(1) as usize,
        field_bits: (c.field_bits != 0).then_some(c.field_bits),
        max_trials: (c.max_trials != 0).then_some(c.max_trials),
        max_k: c.max_k as usize,
    })
}

fn decision(v: &Verdict) -> CmldDecision {
    CmldDecision {
        answer: v.answer,
        trials_run: v.trials_run,
        planned_trials: v.plan.trials,
        field_bits: v.field_bits,
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cmld_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cmld_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |m| m.as_ptr()))
}

#[no_mangle]
pub extern "C" fn cmld_config_default() -> CmldConfig {
    let d = EngineConfig::default();
    CmldConfig {
        delta: d.delta,
        seed: d.seed,
        threads: d.threads as u32,
        field_bits: 0,
        max_trials: 0,
        max_k: DEFAULT_MAX_K as u32,
    }
}

/// Parses a graph in the text format (`n m` header, vertex lines
/// `<label> <color>`, edge lines `<label> <label>`).
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cmld_graph_parse(text: *const c_char, out: *mut *mut CmldGraph) -> CmldStatus {
    guard(|| {
        let out = output(out, "out")?;
        let g = ColoredGraph::parse(self::text(text, "text")?, "<graph>")?;
        *out = Box::into_raw(Box::new(CmldGraph(g)));
        Ok(())
    })
}

/// # Safety
/// `graph` must come from [`cmld_graph_parse`] or be null.
#[no_mangle]
pub unsafe extern "C" fn cmld_graph_free(graph: *mut CmldGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Number of vertices, 0 for a null handle.
///
/// # Safety
/// `graph` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn cmld_graph_vertex_count(graph: *const CmldGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.len())
}

/// Parses a motif, one `<color> <multiplicity>` pair per line.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cmld_motif_parse(text: *const c_char, out: *mut *mut CmldMotif) -> CmldStatus {
    guard(|| {
        let out = output(out, "out")?;
        let m = Motif::parse(self::text(text, "text")?, "<motif>")?;
        *out = Box::into_raw(Box::new(CmldMotif(m)));
        Ok(())
    })
}

/// # Safety
/// `motif` must come from [`cmld_motif_parse`] or be null.
#[no_mangle]
pub unsafe extern "C" fn cmld_motif_free(motif: *mut CmldMotif) {
    if !motif.is_null() {
        drop(Box::from_raw(motif));
    }
}

/// Total multiplicity, 0 for a null handle.
///
/// # Safety
/// `motif` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn cmld_motif_size(motif: *const CmldMotif) -> usize {
    motif.as_ref().map_or(0, |m| m.0.size())
}

/// Parses a circuit in s-expression form, e.g. `(+ (* x1 x2) x3)`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cmld_circuit_parse(text: *const c_char, out: *mut *mut CmldCircuit) -> CmldStatus {
    guard(|| {
        let out = output(out, "out")?;
        let c = parse_circuit(self::text(text, "text")?, "<circuit>")?;
        *out = Box::into_raw(Box::new(CmldCircuit(c)));
        Ok(())
    })
}

/// # Safety
/// `circuit` must come from [`cmld_circuit_parse`] or be null.
#[no_mangle]
pub unsafe extern "C" fn cmld_circuit_free(circuit: *mut CmldCircuit) {
    if !circuit.is_null() {
        drop(Box::from_raw(circuit));
    }
}

/// Number of distinct variables, in order of first appearance.
///
/// # Safety
/// `circuit` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn cmld_circuit_var_count(circuit: *const CmldCircuit) -> usize {
    circuit.as_ref().map_or(0, |c| c.0.num_vars())
}

/// Does the circuit contain a multilinear term of degree `k`?
///
/// When `var_colors` is non-null the query becomes constrained:
/// `var_colors[v] < color_count` is the color of variable `v` (for all
/// `var_count` variables) and at most `multiplicities[c]` chosen variables
/// may have color `c`.
///
/// # Safety
/// Handles must be live; arrays must hold the stated number of elements.
#[no_mangle]
pub unsafe extern "C" fn cmld_detect(
    circuit: *const CmldCircuit,
    k: usize,
    var_colors: *const u32,
    var_count: usize,
    multiplicities: *const usize,
    color_count: usize,
    config: *const CmldConfig,
    out: *mut CmldDecision,
) -> CmldStatus {
    guard(|| {
        let circuit = &handle(circuit, "circuit")?.0;
        let out = output(out, "out")?;
        let cfg = engine_config(config)?;
        let verdict = if var_colors.is_null() {
            solve_mld(circuit, k, &cfg)?
        } else {
            if multiplicities.is_null() && color_count > 0 {
                return Err(null("multiplicities"));
            }
            let colors = std::slice::from_raw_parts(var_colors, var_count);
            let mults = if color_count == 0 { &[][..] } else { std::slice::from_raw_parts(multiplicities, color_count) };
            let colors = colors.iter().map(|&c| ColorId(c as usize)).collect();
            let instance = CmldInstance::new(circuit.clone(), colors, mults.to_vec(), k)?;
            solve_cmld(&instance, &cfg)?
        };
        *out = decision(&verdict);
        Ok(())
    })
}

/// Graph Motif: is there a connected vertex set whose colors equal the motif?
///
/// # Safety
/// Handles must be live and `out` valid; `config` may be null for defaults.
#[no_mangle]
pub unsafe extern "C" fn cmld_graph_motif(
    graph: *const CmldGraph,
    motif: *const CmldMotif,
    config: *const CmldConfig,
    out: *mut CmldDecision,
) -> CmldStatus {
    guard(|| {
        let g = &handle(graph, "graph")?.0;
        let m = &handle(motif, "motif")?.0;
        let out = output(out, "out")?;
        *out = decision(&motif::decide_graph_motif(g, m, &engine_config(config)?)?);
        Ok(())
    })
}

/// Multiset Motif: is there a connected `k`-set whose colors fit in the motif?
///
/// # Safety
/// Handles must be live and `out` valid; `config` may be null for defaults.
#[no_mangle]
pub unsafe extern "C" fn cmld_multiset_motif(
    graph: *const CmldGraph,
    motif: *const CmldMotif,
    k: usize,
    config: *const CmldConfig,
    out: *mut CmldDecision,
) -> CmldStatus {
    guard(|| {
        let g = &handle(graph, "graph")?.0;
        let m = &handle(motif, "motif")?.0;
        let out = output(out, "out")?;
        *out = decision(&motif::decide_multiset_motif(g, m, k, &engine_config(config)?)?);
        Ok(())
    })
}

/// Writes the vertex indices of one occurrence into `vertices`.
///
/// `*found` tells whether an occurrence was found and `*len` how many indices
/// it has. If `capacity` is too small, nothing is copied, `*len` still holds
/// the required length and the call returns `BufferTooSmall`.
///
/// # Safety
/// Handles must be live; `vertices` must hold `capacity` elements.
#[no_mangle]
pub unsafe extern "C" fn cmld_find_occurrence(
    graph: *const CmldGraph,
    motif: *const CmldMotif,
    config: *const CmldConfig,
    vertices: *mut usize,
    capacity: usize,
    len: *mut usize,
    found: *mut bool,
) -> CmldStatus {
    guard(|| {
        let g = &handle(graph, "graph")?.0;
        let m = &handle(motif, "motif")?.0;
        let len = output(len, "len")?;
        let found = output(found, "found")?;
        let occurrence = motif::find_occurrence(g, m, &engine_config(config)?)?;
        *found = occurrence.is_some();
        let list = occurrence.map(|o| o.vertices).unwrap_or_default();
        *len = list.len();
        if list.is_empty() {
            return Ok(());
        }
        if capacity < list.len() {
            return Err(Failure(
                CmldStatus::BufferTooSmall,
                format!("occurrence needs {} slots, got {capacity}", list.len()),
            ));
        }
        if vertices.is_null() {
            return Err(null("vertices"));
        }
        ptr::copy_nonoverlapping(list.as_ptr(), vertices, list.len());
        Ok(())
    })
}

/// Min-Add: fewest extra vertices joining the motif into a connected set.
/// A negative `max_p` means no cap.
///
/// # Safety
/// Handles must be live and `out` valid; `config` may be null for defaults.
#[no_mangle]
pub unsafe extern "C" fn cmld_min_add(
    graph: *const CmldGraph,
    motif: *const CmldMotif,
    max_p: i64,
    config: *const CmldConfig,
    out: *mut CmldMinimum,
) -> CmldStatus {
    guard(|| {
        let g = &handle(graph, "graph")?.0;
        let m = &handle(motif, "motif")?.0;
        let out = output(out, "out")?;
        let cap = usize::try_from(max_p).ok();
        let r = motif::min_add(g, m, cap, &engine_config(config)?)?;
        *out = minimum(r.value, r.total_trials());
        Ok(())
    })
}

/// Min-CC: fewest connected components over motif-colored sets.
///
/// # Safety
/// Handles must be live and `out` valid; `config` may be null for defaults.
#[no_mangle]
pub unsafe extern "C" fn cmld_min_cc(
    graph: *const CmldGraph,
    motif: *const CmldMotif,
    config: *const CmldConfig,
    out: *mut CmldMinimum,
) -> CmldStatus {
    guard(|| {
        let g = &handle(graph, "graph")?.0;
        let m = &handle(motif, "motif")?.0;
        let out = output(out, "out")?;
        let r = motif::min_cc(g, m, &engine_config(config)?)?;
        *out = minimum(r.value, r.total_trials());
        Ok(())
    })
}

/// Min-Substitute: fewest color substitutions over connected `|M|`-sets.
///
/// # Safety
/// Handles must be live and `out` valid; `config` may be null for defaults.
#[no_mangle]
pub unsafe extern "C" fn cmld_min_substitute(
    graph: *const CmldGraph,
    motif: *const CmldMotif,
    config: *const CmldConfig,
    out: *mut CmldMinimum,
) -> CmldStatus {
    guard(|| {
        let g = &handle(graph, "graph")?.0;
        let m = &handle(motif, "motif")?.0;
        let out = output(out, "out")?;
        let r = motif::min_substitute(g, m, DEFAULT_MAX_SUBSTITUTE_K, &engine_config(config)?)?;
        *out = minimum(r.value, r.trials_run);
        Ok(())
    })
}

fn minimum(value: Option<usize>, trials_run: u64) -> CmldMinimum {
    CmldMinimum {
        found: value.is_some(),
        value: value.unwrap_or(0) as u64,
        trials_run,
    }
}

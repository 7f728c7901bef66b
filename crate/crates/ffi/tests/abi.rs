use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use cmld_ffi::*;

const TRIANGLE: &str = "3 3\na r\nb g\nc b\na b\nb c\nc a\n";
const PATH: &str = "3 2\na r\nb b\nc g\na b\nb c\n";

fn graph(text: &str) -> *mut CmldGraph {
    let text = CString::new(text).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { cmld_graph_parse(text.as_ptr(), &mut g) }, CmldStatus::Ok);
    g
}

fn motif(text: &str) -> *mut CmldMotif {
    let text = CString::new(text).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { cmld_motif_parse(text.as_ptr(), &mut m) }, CmldStatus::Ok);
    m
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(cmld_last_error()) }.to_str().unwrap().to_string()
}

#[test]
fn graph_motif_round_trip() {
    let g = graph(TRIANGLE);
    let m = motif("r 1\ng 1\nb 1\n");
    unsafe {
        assert_eq!(cmld_graph_vertex_count(g), 3);
        assert_eq!(cmld_motif_size(m), 3);
        let mut d = CmldDecision::default();
        assert_eq!(cmld_graph_motif(g, m, ptr::null(), &mut d), CmldStatus::Ok);
        assert!(d.answer);
        assert!(d.trials_run >= 1 && d.trials_run <= d.planned_trials);
        cmld_motif_free(m);
        cmld_graph_free(g);
    }
}

#[test]
fn occurrence_and_buffer_sizes() {
    let g = graph(TRIANGLE);
    let m = motif("r 1\ng 1\n");
    let cfg = cmld_config_default();
    let (mut len, mut found) = (0usize, false);
    let mut small = [0usize; 1];
    unsafe {
        let s = cmld_find_occurrence(g, m, &cfg, small.as_mut_ptr(), small.len(), &mut len, &mut found);
        assert_eq!(s, CmldStatus::BufferTooSmall);
        assert!(found);
        assert_eq!(len, 2);
        let mut buf = [usize::MAX; 4];
        let s = cmld_find_occurrence(g, m, &cfg, buf.as_mut_ptr(), buf.len(), &mut len, &mut found);
        assert_eq!(s, CmldStatus::Ok);
        let mut got = buf[..len].to_vec();
        got.sort();
        assert_eq!(got, vec![0, 1]);
        cmld_motif_free(m);
        cmld_graph_free(g);
    }
}

#[test]
fn minimizations() {
    // r and g sit at the ends of a path through b
    let g = graph(PATH);
    let m = motif("r 1\ng 1\n");
    let mut out = CmldMinimum::default();
    unsafe {
        assert_eq!(cmld_min_add(g, m, -1, ptr::null(), &mut out), CmldStatus::Ok);
        assert!(out.found);
        assert_eq!(out.value, 1);
        assert_eq!(cmld_min_cc(g, m, ptr::null(), &mut out), CmldStatus::Ok);
        assert_eq!((out.found, out.value), (true, 2));
        assert_eq!(cmld_min_substitute(g, m, ptr::null(), &mut out), CmldStatus::Ok);
        assert_eq!((out.found, out.value), (true, 1));
        cmld_motif_free(m);
        cmld_graph_free(g);
    }
}

#[test]
fn constrained_detection() {
    let text = CString::new("(+ (* x1 x2 x3) (* x2 x3 x4))").unwrap();
    let mut c = ptr::null_mut();
    unsafe {
        assert_eq!(cmld_circuit_parse(text.as_ptr(), &mut c), CmldStatus::Ok);
        assert_eq!(cmld_circuit_var_count(c), 4);
        let colors = [0u32, 0, 1, 1];
        let mut d = CmldDecision::default();
        // x2 x3 x4 uses one red and two blue variables
        let mults = [1usize, 2];
        let s = cmld_detect(c, 3, colors.as_ptr(), 4, mults.as_ptr(), 2, ptr::null(), &mut d);
        assert_eq!(s, CmldStatus::Ok);
        assert!(d.answer);
        let mults = [0usize, 3];
        let s = cmld_detect(c, 3, colors.as_ptr(), 4, mults.as_ptr(), 2, ptr::null(), &mut d);
        assert_eq!(s, CmldStatus::Ok);
        assert!(!d.answer);
        let s = cmld_detect(c, 3, ptr::null(), 0, ptr::null(), 0, ptr::null(), &mut d);
        assert_eq!(s, CmldStatus::Ok);
        assert!(d.answer);
        // multiplicities covering fewer than k variables are a certain no
        let mults = [0usize, 1];
        let s = cmld_detect(c, 3, colors.as_ptr(), 4, mults.as_ptr(), 2, ptr::null(), &mut d);
        assert_eq!(s, CmldStatus::Ok);
        assert!(!d.answer);
        assert_eq!(d.trials_run, 0);
        cmld_circuit_free(c);
    }
}

#[test]
fn infeasible_multiset_query() {
    let g = graph(TRIANGLE);
    let m = motif("r 1
");
    let mut d = CmldDecision::default();
    unsafe {
        assert_eq!(cmld_multiset_motif(g, m, 2, ptr::null(), &mut d), CmldStatus::Infeasible);
        assert_eq!(cmld_multiset_motif(g, m, 1, ptr::null(), &mut d), CmldStatus::Ok);
        assert!(d.answer);
        cmld_motif_free(m);
        cmld_graph_free(g);
    }
}

#[test]
fn errors_are_reported() {
    let bad = CString::new("g two\n").unwrap();
    let mut m = ptr::null_mut();
    unsafe {
        assert_eq!(cmld_motif_parse(bad.as_ptr(), &mut m), CmldStatus::Parse);
        assert!(m.is_null());
        assert!(last_error().starts_with("<motif>:1:"), "{}", last_error());
        assert_eq!(cmld_graph_parse(ptr::null(), &mut ptr::null_mut()), CmldStatus::NullPointer);
        let g = graph(TRIANGLE);
        let mut d = CmldDecision::default();
        assert_eq!(cmld_graph_motif(g, ptr::null(), ptr::null(), &mut d), CmldStatus::NullPointer);
        let mut cfg = cmld_config_default();
        cfg.delta = 0.0;
        let m = motif("r 1\n");
        assert_eq!(cmld_graph_motif(g, m, &cfg, &mut d), CmldStatus::InvalidArgument);
        assert!(last_error().contains("delta"));
        cmld_motif_free(m);
        cmld_graph_free(g);
        cmld_graph_free(ptr::null_mut());
    }
}

#[test]
fn seed_fixes_results() {
    let g = graph(TRIANGLE);
    let m = motif("r 1\nb 1\n");
    let mut cfg = cmld_config_default();
    cfg.seed = 41;
    let mut runs = Vec::new();
    unsafe {
        for threads in [1, 4] {
            cfg.threads = threads;
            let mut d = CmldDecision::default();
            assert_eq!(cmld_graph_motif(g, m, &cfg, &mut d), CmldStatus::Ok);
            runs.push((d.answer, d.trials_run, d.field_bits));
        }
        cmld_motif_free(m);
        cmld_graph_free(g);
    }
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(cmld_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/cmld.h");
    assert!(header.exists(), "build script did not write the header");
    let Ok(status) = Command::new("cc").args(["-fsyntax-only", "-x", "c", "-std=c99"]).arg(&header).status() else {
        eprintln!("no C compiler available, skipping");
        return;
    };
    assert!(status.success());
}

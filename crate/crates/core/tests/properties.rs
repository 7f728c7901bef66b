use proptest::collection::{btree_set, vec};
use proptest::prelude::*;

use cmld::assignment::rank_gf2;
use cmld::circuit::parse_circuit;
use cmld::gf2m::{FieldContext, FieldElement};
use cmld::graph::{ColoredGraph, Motif};
use cmld::group_algebra::{GroupAlgebra, GroupVector};

const PALETTE: [&str; 4] = ["red", "green", "blue", "c4"];

fn graph_strategy() -> impl Strategy<Value = ColoredGraph> {
    (1usize..10).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let edges = if pairs.is_empty() {
            Just(Vec::new()).boxed()
        } else {
            btree_set(0..pairs.len(), 0..=pairs.len())
                .prop_map(move |s| s.into_iter().map(|i| pairs[i]).collect::<Vec<_>>())
                .boxed()
        };
        (vec(0..PALETTE.len(), n), edges).prop_map(|(colors, edges)| {
            let labels: Vec<&str> = colors.iter().map(|&c| PALETTE[c]).collect();
            ColoredGraph::from_parts(&labels, &edges).unwrap()
        })
    })
}

/// Random expression over x1..x5 as s-expression text.
fn sexpr_strategy() -> impl Strategy<Value = String> {
    let leaf = (1u32..=5).prop_map(|i| format!("x{i}"));
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            vec(inner.clone(), 1..4).prop_map(|cs| format!("(+ {})", cs.join(" "))),
            (inner.clone(), inner).prop_map(|(a, b)| format!("(* {a} {b})")),
        ]
    })
}

proptest! {
    #[test]
    fn graph_text_round_trip(g in graph_strategy()) {
        let back = ColoredGraph::parse(&g.to_text(), "prop").unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(back.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    }

    #[test]
    fn motif_text_round_trip(counts in vec(0usize..4, PALETTE.len())) {
        prop_assume!(counts.iter().any(|&c| c > 0));
        let entries: Vec<(&str, usize)> = PALETTE.iter().zip(&counts)
            .filter(|(_, &c)| c > 0)
            .map(|(&l, &c)| (l, c))
            .collect();
        let m = Motif::new(&entries).unwrap();
        prop_assert_eq!(m.size(), counts.iter().sum::<usize>());
        prop_assert_eq!(Motif::parse(&m.to_text(), "prop").unwrap(), m);
    }

    #[test]
    fn circuit_sexpr_round_trip(text in sexpr_strategy()) {
        let c = parse_circuit(&text, "prop").unwrap();
        let printed = c.to_sexpr().unwrap();
        let again = parse_circuit(&printed, "prop").unwrap();
        prop_assert_eq!(again.to_sexpr().unwrap(), printed);
        prop_assert_eq!(again.output_degree(), c.output_degree());
    }

    #[test]
    fn field_tables_match_carryless_product(bits in 1u32..=16, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = FieldContext::new(bits).unwrap();
        let mask = (f.order() - 1) as u32;
        let (a, b, c) = (FieldElement(a & mask), FieldElement(b & mask), FieldElement(c & mask));
        prop_assert_eq!(f.mul(a, b), f.mul_schoolbook(a, b));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        if let Some(inv) = f.inverse(a) {
            prop_assert_eq!(f.mul(a, inv), FieldElement(1));
        } else {
            prop_assert!(a.is_zero());
        }
    }

    #[test]
    fn dense_product_matches_schoolbook(dim in 0usize..=7, seed in vec(any::<u8>(), 256)) {
        let alg = GroupAlgebra::new(FieldContext::new(8).unwrap(), dim).unwrap();
        let n = alg.len();
        let a = alg.from_coeffs(seed[..n].iter().map(|&x| FieldElement(x as u32)).collect()).unwrap();
        let b = alg.from_coeffs(seed[128..128 + n].iter().map(|&x| FieldElement(x as u32)).collect()).unwrap();
        let reference = alg.mul_schoolbook(&a, &b).unwrap();
        prop_assert_eq!(alg.mul_dense(&a, &b), reference.clone());
        prop_assert_eq!(alg.mul(&a, &b).unwrap(), reference.clone());
        prop_assert_eq!(alg.mul(&b, &a).unwrap(), reference);
    }

    #[test]
    fn pair_product_vanishes_iff_dependent(dim in 1usize..=8, raw in vec(any::<u64>(), 1..=8)) {
        let alg = GroupAlgebra::new(FieldContext::new(4).unwrap(), dim).unwrap();
        let rows: Vec<u64> = raw.iter().map(|r| r & ((1 << dim) - 1)).collect();
        let mut prod = alg.identity();
        for &r in &rows {
            prod = alg.mul_by_pair(&prod, GroupVector::new(dim, r).unwrap()).unwrap();
        }
        prop_assert_eq!(alg.is_zero(&prod), rank_gf2(&rows) < rows.len());
    }
}

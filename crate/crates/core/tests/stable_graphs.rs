mod oracles;

use std::collections::BTreeSet;

use oracles::graphs::brute_force_graphs;
use proptest::prelude::*;
use stratglue::stable_graphs::{build_poset, canonical_form, enumerate_stable_graphs, StableGraph};

fn signatures(max_dim: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for g in 0..=3 {
        for n in 0..=8 {
            let d = 3 * g as i64 - 3 + n as i64;
            if 2 * g + n > 2 && d <= max_dim as i64 {
                out.push((g, n));
            }
        }
    }
    out
}

#[test]
fn enumeration_agrees_with_splitting_generator() {
    for (g, n) in signatures(4) {
        let fast = enumerate_stable_graphs(g, n).unwrap();
        let slow = brute_force_graphs(g, n);
        assert_eq!(fast.len(), slow.len(), "count mismatch at ({g}, {n})");
        let fast: BTreeSet<_> = fast.into_iter().collect();
        for raw in &slow {
            let edges = raw.edges.iter().map(|&(a, b)| [a, b]).collect();
            let sg = StableGraph::new(raw.genera.clone(), edges, raw.tails.clone()).unwrap();
            assert!(fast.contains(&canonical_form(&sg)), "({g}, {n}) misses {sg}");
        }
    }
}

#[test]
fn known_counts() {
    let expected = [((0, 3), 1), ((0, 4), 4), ((0, 5), 26), ((0, 6), 236), ((0, 7), 2752), ((1, 1), 2), ((1, 2), 5), ((2, 0), 7)];
    for ((g, n), count) in expected {
        assert_eq!(enumerate_stable_graphs(g, n).unwrap().len(), count, "({g}, {n})");
    }
}

#[test]
fn contraction_stays_in_enumeration_and_raises_dimension() {
    for (g, n) in signatures(3) {
        let all: BTreeSet<_> = enumerate_stable_graphs(g, n).unwrap().into_iter().collect();
        for class in &all {
            let rep = class.representative();
            let ne = rep.num_edges();
            for mask in 1u32..(1 << ne) {
                let d: Vec<usize> = (0..ne).filter(|e| mask >> e & 1 == 1).collect();
                let (c, _) = rep.contract(&d).unwrap();
                assert!(c.is_stable());
                assert_eq!(c.genus().unwrap(), g);
                assert!(all.contains(&canonical_form(&c)));
                assert_eq!(c.dimension().unwrap(), rep.dimension().unwrap() + d.len() as i64);
            }
        }
    }
}

#[test]
fn poset_layers_and_top() {
    for (g, n) in signatures(3) {
        let p = build_poset(g, n).unwrap();
        assert_eq!(p.maximal(), vec![p.top()]);
        assert_eq!(p.elements()[p.top()].representative().num_edges(), 0);
        let covered: usize = p.layers().iter().map(Vec::len).sum();
        assert_eq!(covered, p.len());
        let max_edges = p.elements().iter().map(|c| c.representative().num_edges()).max().unwrap();
        let first: Vec<usize> = (0..p.len())
            .filter(|&i| p.elements()[i].representative().num_edges() == max_edges)
            .collect();
        assert_eq!(p.layers()[0], first);
    }
}

/// A random enumerated graph, relabelled by random vertex/edge permutations
/// and half-edge flips.
fn scrambled_graph() -> impl Strategy<Value = (StableGraph, StableGraph)> {
    let sigs = vec![(0u32, 5u32), (1, 2), (1, 3), (2, 0), (2, 1)];
    (prop::sample::select(sigs), any::<prop::sample::Index>(), any::<u64>()).prop_map(|((g, n), idx, seed)| {
        let all = enumerate_stable_graphs(g, n).unwrap();
        let rep = all[idx.index(all.len())].representative().clone();
        let mut state = seed | 1;
        let mut next = move |k: usize| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % k as u64) as usize
        };
        let nv = rep.num_vertices();
        let mut perm: Vec<usize> = (0..nv).collect();
        for i in (1..nv).rev() {
            perm.swap(i, next(i + 1));
        }
        let ne = rep.num_edges();
        let mut order: Vec<usize> = (0..ne).collect();
        for i in (1..ne).rev() {
            order.swap(i, next(i + 1));
        }
        let flips: Vec<bool> = (0..ne).map(|_| next(2) == 1).collect();
        let scrambled = rep.relabel_vertices(&perm).relabel_edges(&order, &flips);
        (rep, scrambled)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_form_ignores_labels((a, b) in scrambled_graph()) {
        prop_assert_eq!(canonical_form(&a), canonical_form(&b));
        prop_assert_eq!(a.genus().unwrap(), b.genus().unwrap());
    }

    #[test]
    fn contraction_composes((_, g) in scrambled_graph(), m1 in any::<u32>(), m2 in any::<u32>()) {
        let ne = g.num_edges();
        let i: Vec<usize> = (0..ne).filter(|e| m1 >> e & 1 == 1).collect();
        let extra: Vec<usize> = (0..ne).filter(|e| m2 >> e & 1 == 1).collect();
        let union: BTreeSet<usize> = i.iter().chain(&extra).copied().collect();
        let union: Vec<usize> = union.into_iter().collect();
        let (direct, _) = g.contract(&union).unwrap();
        let (step, map) = g.contract(&i).unwrap();
        let image: Vec<usize> = extra.iter().filter_map(|&e| map[e]).collect();
        let (two_step, _) = step.contract(&image).unwrap();
        prop_assert_eq!(canonical_form(&direct), canonical_form(&two_step));
        prop_assert_eq!(direct.genus().unwrap(), g.genus().unwrap());
        prop_assert!(direct.is_stable());
    }
}

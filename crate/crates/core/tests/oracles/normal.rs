//! Pointwise computation of the double normal bundle pieces.
//!
//! Walks a rational grid; every point p sits in N(V^[I]) for each I inside
//! its support J. The normal directions of the piece through p are found by
//! nudging one coordinate at a time and watching whether the support moves.

use std::collections::BTreeSet;

use stratglue::arith::{q, qi, Q};
use stratglue::linear_strata::{support_of, LinearStratification, Subset};

/// (alpha, beta, I, J, normal directions, target support)
pub type Record = (usize, usize, Subset, Subset, Subset, Subset);

fn strictly_below(s: &LinearStratification, a: usize, b: usize) -> bool {
    a != b && s.class(a).iter().all(|&i| s.class(b).iter().any(|&j| i & !j == 0))
}

pub fn grid(m: usize, values: &[Q]) -> Vec<Vec<Q>> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|p: Vec<Q>| {
                values.iter().map(move |v| {
                    let mut p = p.clone();
                    p.push(v.clone());
                    p
                })
            })
            .collect();
    }
    out
}

pub fn pointwise_double_normal(s: &LinearStratification) -> BTreeSet<Record> {
    let m = s.m();
    let values = [qi(-1), qi(0), q(1, 2), qi(1)];
    let nudge = q(1, 1000);
    let mut out = BTreeSet::new();
    for p in grid(m, &values) {
        let j = support_of(&p);
        let beta = s.class_of(j);
        let mut normal = 0;
        for k in 0..m {
            let mut moved = p.clone();
            moved[k] = &moved[k] + &nudge;
            if support_of(&moved) != j {
                normal |= 1 << k;
            }
        }
        for i in 0..=j {
            if i & !j != 0 {
                continue;
            }
            let alpha = s.class_of(i);
            if strictly_below(s, alpha, beta) {
                // the point viewed in V is tau of the normal-bundle point
                out.insert((alpha, beta, i, j, normal, support_of(&p)));
            }
        }
    }
    out
}

pub fn library_double_normal(s: &LinearStratification) -> BTreeSet<Record> {
    let mut out = BTreeSet::new();
    for a in 0..s.num_classes() {
        for b in 0..s.num_classes() {
            if !s.lt(a, b) {
                assert!(s.double_normal(a, b).is_err());
                continue;
            }
            for piece in s.double_normal(a, b).unwrap() {
                out.insert((a, b, piece.base, piece.piece, piece.normal, piece.target));
            }
        }
    }
    out
}

//! Points on which a two-step chart composition is defined, built directly
//! from nested supports.

use stratglue::arith::{q, qi, Q};
use stratglue::gluing_engine::StratifiedModel;

/// 100 points of the domain of Phi^b_c o Phi^a_b: a component I of a and
/// z whose flag from I passes through a b-support J and then a c-support K.
pub fn chain_points(model: &StratifiedModel, a: usize, b: usize, c: usize) -> Vec<(u64, Vec<Q>)> {
    let s = model.strat();
    let mut triples = Vec::new();
    for &i in s.class(a) {
        for &j in s.class(b).iter().filter(|&&j| j & i == i) {
            for &k in s.class(c).iter().filter(|&&k| k & j == j) {
                triples.push((i, j, k));
            }
        }
    }
    (0..100i64)
        .map(|t| {
            let (i, j, k) = triples[t as usize % triples.len()];
            let z = (0..model.axes() as i64)
                .map(|ax| {
                    let coord = ax as usize / model.d();
                    let frac = q(1 + (t * 5 + ax * 3) % 7, 8);
                    let sign = if (t + ax) % 3 == 0 { -1 } else { 1 };
                    let level = if i >> coord & 1 == 1 {
                        qi(1)
                    } else if j >> coord & 1 == 1 {
                        qi(16)
                    } else if k >> coord & 1 == 1 {
                        qi(4)
                    } else if (t + ax) % 4 == 0 {
                        qi(0)
                    } else {
                        qi(1) / qi(4)
                    };
                    level * (qi(1) + frac) * qi(sign)
                })
                .collect();
            (i, z)
        })
        .collect()
}


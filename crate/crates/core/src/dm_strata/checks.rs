use serde::Serialize;

use crate::error::Result;
use crate::linear_strata::Subset;
use crate::stable_graphs::{automorphisms, canonical_form, GraphClass};

use super::{contract_class, edges_of, EdgeStratification};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionRow {
    pub stratum: usize,
    pub cardinality: usize,
    pub source: i64,
    pub target: i64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionReport {
    pub rows: Vec<DimensionRow>,
    pub violations: usize,
    pub ok: bool,
}

/// dim [G] + |I| = dim [G'] for every stratum, with |I| the common size of
/// its edge sets.
pub fn verify_dimension_matching(es: &EdgeStratification) -> Result<DimensionReport> {
    let source = es.graph.representative().dimension()?;
    let mut rows = Vec::new();
    for (a, target) in es.targets.iter().enumerate() {
        let cardinality = es.strat.rank(a);
        let target = target.representative().dimension()?;
        rows.push(DimensionRow { stratum: a, cardinality, source, target, ok: source + cardinality as i64 == target });
    }
    let violations = rows.iter().filter(|r| !r.ok).count();
    Ok(DimensionReport { rows, violations, ok: violations == 0 })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FunctorialityReport {
    pub checked: usize,
    /// Pairs (I, I') of edge lists where contracting in two steps differs.
    pub failures: Vec<[Vec<usize>; 2]>,
    pub ok: bool,
}

/// Contracting I' at once agrees with contracting I and then the image of
/// I' \ I, for every I inside I'.
pub fn contraction_functoriality(class: &GraphClass) -> Result<FunctorialityReport> {
    let g = class.representative();
    let full: Subset = (1 << g.num_edges()) - 1;
    let mut checked = 0;
    let mut failures = Vec::new();
    for big in 0..=full {
        let direct = contract_class(g, big)?;
        // all subsets of `big`, including 0 and `big`
        let mut small = big;
        loop {
            let (partial, map) = g.contract(&edges_of(small))?;
            let rest: Vec<usize> = edges_of(big & !small).into_iter().map(|e| map[e].expect("edge survives")).collect();
            if canonical_form(&partial.contract(&rest)?.0) != direct {
                failures.push([edges_of(small), edges_of(big)]);
            }
            checked += 1;
            if small == 0 {
                break;
            }
            small = (small - 1) & big;
        }
    }
    Ok(FunctorialityReport { checked, ok: failures.is_empty(), failures })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivarianceReport {
    pub group_order: u64,
    pub generators: usize,
    pub checked: usize,
    pub failures: Vec<String>,
    pub ok: bool,
}

/// Every automorphism generator maps each stratum's edge sets onto edge sets
/// of the same stratum.
pub fn aut_equivariance(es: &EdgeStratification) -> EquivarianceReport {
    let g = es.graph.representative();
    let group = automorphisms(g);
    let mut checked = 0;
    let mut failures = Vec::new();
    for (k, sigma) in group.generators.iter().enumerate() {
        if !sigma.is_automorphism_of(g) {
            failures.push(format!("generator {k} is not an automorphism"));
            continue;
        }
        let perm = sigma.edge_perm();
        for s in 0..(1u64 << g.num_edges()) {
            let image: Subset = edges_of(s).into_iter().map(|e| 1u64 << perm[e]).sum();
            if es.strat.class_of(image) != es.strat.class_of(s) {
                failures.push(format!("generator {k} moves {:?} to {:?}", edges_of(s), edges_of(image)));
            }
            checked += 1;
        }
    }
    EquivarianceReport { group_order: group.order, generators: group.generators.len(), checked, ok: failures.is_empty(), failures }
}

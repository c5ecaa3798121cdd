//! Boundary strata of the moduli of curves as linear stratifications: each
//! edge subset of a dual graph is grouped by the class of the contraction.

mod checks;
mod report;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::linear_strata::{Field, LinearStratification, StratificationJson, Subset};
use crate::stable_graphs::{canonical_form, GraphClass, StableGraph};

pub use checks::{
    aut_equivariance, contraction_functoriality, verify_dimension_matching, DimensionReport, DimensionRow,
    EquivarianceReport, FunctorialityReport,
};
pub use report::{dm_report, AtlasCache, AtlasSummary, ClassReport, DmReport, StratumRow};

/// Rank of the gluing bundle: one line per edge.
pub fn gluing_bundle_rank(class: &GraphClass) -> usize {
    class.representative().num_edges()
}

/// Edge subsets of the representative grouped by the class of the
/// contraction, with the matching linear stratification of C^|E|.
#[derive(Clone, Debug)]
pub struct EdgeStratification {
    pub graph: GraphClass,
    /// Contraction class of each stratum, in stratum order.
    pub targets: Vec<GraphClass>,
    pub strat: LinearStratification,
}

impl EdgeStratification {
    pub fn m(&self) -> usize {
        self.strat.m()
    }

    pub fn target_of(&self, subset: Subset) -> &GraphClass {
        &self.targets[self.strat.class_of(subset)]
    }

    pub fn to_json(&self) -> EdgeStratificationJson {
        EdgeStratificationJson {
            graph: self.graph.key(),
            targets: self.targets.iter().map(|t| t.key()).collect(),
            stratification: self.strat.to_json(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeStratificationJson {
    pub graph: String,
    pub targets: Vec<String>,
    pub stratification: StratificationJson,
}

pub(crate) fn edges_of(subset: Subset) -> Vec<usize> {
    (0..64).filter(|e| subset >> e & 1 == 1).collect()
}

pub(crate) fn contract_class(g: &StableGraph, subset: Subset) -> Result<GraphClass> {
    Ok(canonical_form(&g.contract(&edges_of(subset))?.0))
}

/// Groups 2^E by contraction class; strata are ordered by edge count, then
/// by the class encoding.
pub fn edge_stratification(class: &GraphClass) -> Result<EdgeStratification> {
    let g = class.representative();
    let m = g.num_edges();
    let mut groups: BTreeMap<(u32, GraphClass), Vec<Subset>> = BTreeMap::new();
    for s in 0..(1u64 << m) {
        groups.entry((s.count_ones(), contract_class(g, s)?)).or_default().push(s);
    }
    let (keys, classes): (Vec<_>, Vec<_>) = groups.into_iter().unzip();
    let targets = keys.into_iter().map(|(_, c)| c).collect();
    let strat = LinearStratification::new(m, Field::Complex, classes)?;
    Ok(EdgeStratification { graph: class.clone(), targets, strat })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stable_graphs::StableGraph;

    fn class(genera: &[u32], edges: &[[usize; 2]], tails: &[usize]) -> GraphClass {
        canonical_form(&StableGraph::new(genera.to_vec(), edges.to_vec(), tails.to_vec()).unwrap())
    }

    #[test]
    fn ranks() {
        assert_eq!(gluing_bundle_rank(&class(&[1], &[], &[0])), 0);
        assert_eq!(gluing_bundle_rank(&class(&[0], &[[0, 0]], &[0])), 1);
        assert_eq!(gluing_bundle_rank(&class(&[0], &[[0, 0], [0, 0]], &[])), 2);
    }

    #[test]
    fn loop_graph_is_a_chain() {
        let es = edge_stratification(&class(&[0], &[[0, 0]], &[0])).unwrap();
        assert_eq!(es.strat.classes(), &[vec![0], vec![1]]);
        assert!(es.strat.lt(0, 1));
        assert_eq!(es.targets[1], class(&[1], &[], &[0]));
        assert_eq!(es.strat.field(), Field::Complex);
    }

    #[test]
    fn two_loops_share_a_class() {
        let es = edge_stratification(&class(&[0], &[[0, 0], [0, 0]], &[])).unwrap();
        assert_eq!(es.strat.classes(), &[vec![0], vec![1, 2], vec![3]]);
        assert_eq!(es.targets[1], class(&[1], &[[0, 0]], &[]));
    }

    #[test]
    fn separating_edge_splits_singletons() {
        // genus-1 vertex with a loop, joined by a bridge to a genus-1 vertex
        let es = edge_stratification(&class(&[0, 1], &[[0, 0], [0, 1]], &[])).unwrap();
        assert_eq!(es.strat.num_classes(), 4);
        assert!(es.strat.classes().iter().all(|c| c.len() == 1));
        assert_ne!(es.target_of(0b01), es.target_of(0b10));
    }
}

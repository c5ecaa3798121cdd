use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use itertools::Itertools;
use serde::Serialize;

use crate::error::Result;
use crate::gluing_engine::{linear_model, run, SampleSpec};
use crate::linear_strata::{validate, Field, LinearStratification, Subset};
use crate::stable_graphs::build_poset;

use super::checks::{
    aut_equivariance, contraction_functoriality, verify_dimension_matching, DimensionReport, EquivarianceReport,
    FunctorialityReport,
};
use super::{edge_stratification, edges_of};

/// Outcome of one atlas run, shared by all stratifications of the same shape.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AtlasSummary {
    pub strata: usize,
    pub passes: usize,
    pub samples: usize,
    pub compatible: bool,
    pub separated: bool,
    pub covered: bool,
    pub ok: bool,
    pub error: Option<String>,
}

type Shape = Vec<Vec<Subset>>;

fn permute(s: Subset, perm: &[usize]) -> Subset {
    perm.iter().enumerate().filter(|&(i, _)| s >> i & 1 == 1).map(|(_, &p)| 1u64 << p).sum()
}

/// Classes as sorted subset lists, minimized over coordinate permutations
/// (up to 7 coordinates; beyond that the raw shape is used).
fn shape(strat: &LinearStratification) -> Shape {
    let m = strat.m();
    let apply = |perm: &[usize]| -> Shape {
        let mut classes: Shape = strat
            .classes()
            .iter()
            .map(|c| {
                let mut c: Vec<Subset> = c.iter().map(|&s| permute(s, perm)).collect();
                c.sort();
                c
            })
            .collect();
        classes.sort();
        classes
    };
    if m > 7 {
        return apply(&(0..m).collect::<Vec<_>>());
    }
    (0..m).permutations(m).map(|p| apply(&p)).min().unwrap_or_else(|| apply(&[]))
}

/// Atlas verdicts keyed by stratification shape.
pub struct AtlasCache {
    spec: Option<SampleSpec>,
    field: Field,
    done: BTreeMap<Shape, AtlasSummary>,
    pub runs: usize,
    pub hits: usize,
}

impl AtlasCache {
    /// `spec` overrides the per-model default sample set.
    pub fn new(spec: Option<SampleSpec>) -> Self {
        Self { spec, field: Field::Complex, done: BTreeMap::new(), runs: 0, hits: 0 }
    }

    fn compute(&self, m: usize, shape: &Shape) -> AtlasSummary {
        let fail = |e: crate::error::Error, strata| AtlasSummary {
            strata,
            passes: 0,
            samples: 0,
            compatible: false,
            separated: false,
            covered: false,
            ok: false,
            error: Some(e.to_string()),
        };
        let strat = match LinearStratification::new(m, self.field, shape.clone()) {
            Ok(s) => s,
            Err(e) => return fail(e, shape.len()),
        };
        let model = match linear_model(&strat) {
            Ok(model) => model,
            Err(e) => return fail(e, shape.len()),
        };
        let spec = self.spec.clone().unwrap_or_else(|| SampleSpec::default_for(&model));
        match run(&model, &spec) {
            Ok(r) => AtlasSummary {
                strata: r.strata,
                passes: r.passes,
                samples: r.samples,
                compatible: r.compatible,
                separated: r.separated,
                covered: r.cover.ok,
                ok: r.ok,
                error: None,
            },
            Err(e) => fail(e, shape.len()),
        }
    }

    /// Runs every shape not seen yet, spread over the available cores.
    pub fn prefill(&mut self, strats: &[&LinearStratification]) {
        let mut todo: BTreeMap<Shape, usize> = BTreeMap::new();
        for s in strats {
            let key = shape(s);
            if !self.done.contains_key(&key) {
                todo.insert(key, s.m());
            }
        }
        let todo: Vec<(Shape, usize)> = todo.into_iter().collect();
        let next = AtomicUsize::new(0);
        let results = Mutex::new(Vec::new());
        let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(todo.len().max(1));
        std::thread::scope(|scope| {
            for _ in 0..threads {
                scope.spawn(|| loop {
                    let k = next.fetch_add(1, Ordering::Relaxed);
                    let Some((key, m)) = todo.get(k) else { break };
                    let summary = self.compute(*m, key);
                    results.lock().unwrap().push((key.clone(), summary));
                });
            }
        });
        for (key, summary) in results.into_inner().unwrap() {
            self.runs += 1;
            self.done.insert(key, summary);
        }
    }

    pub fn check(&mut self, strat: &LinearStratification) -> AtlasSummary {
        let key = shape(strat);
        if let Some(s) = self.done.get(&key) {
            self.hits += 1;
            return s.clone();
        }
        let summary = self.compute(strat.m(), &key);
        self.runs += 1;
        self.done.insert(key, summary.clone());
        summary
    }

    pub fn distinct(&self) -> usize {
        self.done.len()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StratumRow {
    /// Index of the contracted graph in the poset of the same (g, n).
    pub target: usize,
    pub target_graph: String,
    pub cardinality: usize,
    pub subsets: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassReport {
    pub index: usize,
    pub graph: String,
    pub key: String,
    pub edges: usize,
    pub dimension: i64,
    pub strata: Vec<StratumRow>,
    pub valid: bool,
    pub dimension_matching: DimensionReport,
    pub functoriality: FunctorialityReport,
    pub equivariance: EquivarianceReport,
    pub atlas: AtlasSummary,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DmReport {
    pub g: u32,
    pub n: u32,
    pub classes: Vec<ClassReport>,
    /// Distinct stratification shapes among the classes.
    pub models: usize,
    pub ok: bool,
}

/// Every check on every stable graph class of type (g, n).
pub fn dm_report(g: u32, n: u32, cache: &mut AtlasCache) -> Result<DmReport> {
    let poset = build_poset(g, n)?;
    let edge_strats = poset.elements().iter().map(edge_stratification).collect::<Result<Vec<_>>>()?;
    cache.prefill(&edge_strats.iter().map(|es| &es.strat).collect::<Vec<_>>());
    let mut classes = Vec::new();
    let mut shapes = BTreeSet::new();
    for (index, es) in edge_strats.iter().enumerate() {
        shapes.insert(shape(&es.strat));
        let rep = es.graph.representative();
        let strata = es
            .targets
            .iter()
            .enumerate()
            .map(|(a, t)| StratumRow {
                target: poset.index_of(t).expect("contraction has the same type"),
                target_graph: t.representative().to_string(),
                cardinality: es.strat.rank(a),
                subsets: es.strat.class(a).iter().map(|&s| edges_of(s)).collect(),
            })
            .collect();
        let valid = validate(es.m(), es.strat.classes(), None).valid;
        let dimension_matching = verify_dimension_matching(es)?;
        let functoriality = contraction_functoriality(&es.graph)?;
        let equivariance = aut_equivariance(es);
        let atlas = cache.check(&es.strat);
        let ok = valid && dimension_matching.ok && functoriality.ok && equivariance.ok && atlas.ok;
        classes.push(ClassReport {
            index,
            graph: rep.to_string(),
            key: es.graph.key(),
            edges: es.m(),
            dimension: rep.dimension()?,
            strata,
            valid,
            dimension_matching,
            functoriality,
            equivariance,
            atlas,
            ok,
        });
    }
    let ok = classes.iter().all(|c| c.ok);
    Ok(DmReport { g, n, classes, models: shapes.len(), ok })
}

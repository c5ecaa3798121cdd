use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::arith::{format_q, qi, Q};
use crate::error::{Error, Result};
use crate::linear_strata::{is_subset, Subset};

use super::chart::ChartMap;
use super::metric::Metric;
use super::model::StratifiedModel;
use super::region::{find_cell, Grid, Interval, RBox, Ranges, Region};

/// A tubular chart around a piece of one stratum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GluingDatum {
    pub stratum: usize,
    pub region: Region,
    pub metric: Metric,
    #[serde(with = "crate::arith::q_string")]
    pub epsilon: Q,
    pub chart: ChartMap,
    pub bundle_maps: BTreeMap<usize, ChartMap>,
}

impl GluingDatum {
    /// The component I through which z lies in the image of the chart:
    /// z_I nonzero, z|_I in U and the weighted normal norm below eps^2.
    /// The smallest such norm wins.
    pub fn image_component(&self, model: &StratifiedModel, z: &[Q]) -> Option<Subset> {
        let supp = model.support(z);
        let eps2 = &self.epsilon * &self.epsilon;
        let mut best: Option<(Q, Subset)> = None;
        for &i in model.strat().class(self.stratum) {
            if !is_subset(i, supp) {
                continue;
            }
            let base = model.project(z, i);
            if !self.region.boxes.iter().any(|b| b.contains(&base)) {
                continue;
            }
            let w = self.metric.weights_at(model, &base);
            let n = model.normal_norm(z, i, Some(&w));
            if n < eps2 && best.as_ref().is_none_or(|(bn, _)| n < *bn) {
                best = Some((n, i));
            }
        }
        best.map(|(_, i)| i)
    }

    pub fn in_image(&self, model: &StratifiedModel, z: &[Q]) -> bool {
        self.image_component(model, z).is_some()
    }

    /// Weights of the metric induced on the stratum of z: the datum's own
    /// metric there, or its push-forward from the base of z's component.
    pub fn induced_weights(&self, model: &StratifiedModel, z: &[Q]) -> Option<Vec<Q>> {
        let i = self.image_component(model, z)?;
        Some(self.metric.weights_at(model, &model.project(z, i)))
    }
}

pub fn restrict(model: &StratifiedModel, d: &GluingDatum, region: &Region, epsilon: &Q) -> Result<GluingDatum> {
    if region.stratum != d.stratum {
        return Err(Error::Region(format!("region lies in stratum {}, datum in {}", region.stratum, d.stratum)));
    }
    if !epsilon.is_positive() || epsilon > &d.epsilon {
        return Err(Error::Radius(format!("need 0 < {} <= {}", format_q(epsilon), format_q(&d.epsilon))));
    }
    if let Some(w) = subset_witness(model, region, &d.region) {
        return Err(Error::Region(format!("point {:?} is outside the domain", model.describe_point(&w))));
    }
    Ok(GluingDatum { region: region.clone(), epsilon: epsilon.clone(), ..d.clone() })
}

fn box_inside(a: &RBox, b: &RBox) -> bool {
    a.axes.iter().zip(&b.axes).all(|(x, y)| {
        let lo = match (&x.lo, &y.lo) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(p), Some(q)) => p >= q,
        };
        let hi = match (&x.hi, &y.hi) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(p), Some(q)) => p <= q,
        };
        lo && hi
    })
}

fn subset_witness(model: &StratifiedModel, a: &Region, b: &Region) -> Option<Vec<Q>> {
    if a.stratum == b.stratum && a.boxes.iter().all(|x| b.boxes.iter().any(|y| box_inside(x, y))) {
        return None;
    }
    a.difference_witness(b, model)
}

/// Supports of the stratum that points of the box can have.
fn realizable(model: &StratifiedModel, stratum: usize, b: &RBox) -> Vec<Subset> {
    let d = model.d();
    model
        .strat()
        .class(stratum)
        .iter()
        .copied()
        .filter(|&s| {
            (0..model.strat().m()).all(|j| s >> j & 1 == 1 || (0..d).all(|k| b.axes[j * d + k].contains(&Q::zero())))
        })
        .collect()
}

/// sup over the box of |z_j|^2, None if unbounded.
fn coord_sup(model: &StratifiedModel, b: &RBox, j: usize) -> Option<Q> {
    let d = model.d();
    (0..d).try_fold(Q::zero(), |acc, k| Some(acc + b.axes[j * d + k].sup_sqr()?))
}

/// inf over the box of |z_j|^2.
fn coord_inf(model: &StratifiedModel, b: &RBox, j: usize) -> Q {
    let d = model.d();
    (0..d).fold(Q::zero(), |acc, k| {
        let x = b.axes[j * d + k].inf_abs();
        acc + &x * &x
    })
}

/// Does {z|_I : z in b, supp z = J} lie in the region?
fn base_inside(model: &StratifiedModel, b: &RBox, comp: Subset, region: &Region) -> bool {
    if region.is_whole() {
        return true;
    }
    let d = model.d();
    let mut lifted = b.clone();
    for j in 0..model.strat().m() {
        if comp >> j & 1 == 0 {
            for k in 0..d {
                lifted.axes[j * d + k] = Interval::all();
            }
        }
    }
    let grid = Grid::new(model.axes(), std::iter::once(&lifted).chain(&region.boxes));
    let Some(within) = grid.ranges(&lifted) else { return true };
    let avoid: Vec<Ranges> = region.boxes.iter().filter_map(|x| grid.ranges(x)).collect();
    let domains = grid.support_domains(model, comp, None);
    find_cell(&domains, Some(&[within]), &avoid).is_none()
}

/// The datum over U^beta induced from d through Psi = tau o Phi^-1.
pub fn induce(model: &StratifiedModel, d: &GluingDatum, beta: usize, region: &Region, epsilon: &Q) -> Result<GluingDatum> {
    let strat = model.strat();
    let alpha = d.stratum;
    strat.check_class(beta)?;
    if !strat.lt(alpha, beta) {
        return Err(Error::Order(format!("stratum {beta} is not strictly above {alpha}")));
    }
    if region.stratum != beta {
        return Err(Error::Region(format!("region lies in stratum {}, expected {beta}", region.stratum)));
    }
    if !epsilon.is_positive() {
        return Err(Error::Radius(format!("radius {} is not positive", format_q(epsilon))));
    }
    let sup_w = d.metric.sup_weights();
    let inf_w = d.metric.inf_weights().into_iter().min().unwrap_or_else(|| qi(1));
    let eps2 = &d.epsilon * &d.epsilon;
    let eps_new2 = epsilon * epsilon;
    for b in &region.boxes {
        for comp in realizable(model, beta, b) {
            // a component of alpha whose tube holds the box
            let mut fit: Option<Q> = None;
            for &i in strat.class(alpha) {
                if !is_subset(i, comp) || !base_inside(model, b, i, &d.region) {
                    continue;
                }
                let mut total = Some(Q::zero());
                for j in 0..strat.m() {
                    if comp >> j & 1 == 1 && i >> j & 1 == 0 {
                        total = total.and_then(|t| Some(t + &sup_w[j] * coord_sup(model, b, j)?));
                    }
                }
                if let Some(t) = total {
                    if t <= eps2 && fit.as_ref().is_none_or(|f| t < *f) {
                        fit = Some(t);
                    }
                }
            }
            let Some(t) = fit else {
                return Err(Error::Region(format!("box {b} is not inside the image of stratum {alpha}")));
            };
            if t + &eps_new2 > eps2 {
                return Err(Error::Radius(format!(
                    "radius {} leaves the tube of stratum {alpha} over {b}",
                    format_q(epsilon)
                )));
            }
            // distinct components stay apart once the box avoids their
            // coordinate hyperplanes
            let r2 = (0..strat.m()).filter(|j| comp >> j & 1 == 1).map(|j| coord_inf(model, b, j)).min();
            if let Some(r2) = r2 {
                if r2.is_positive() && eps_new2 > &inf_w * &r2 {
                    return Err(Error::Injectivity(format!(
                        "radius {} exceeds the distance between components over {b}",
                        format_q(epsilon)
                    )));
                }
            }
        }
    }
    let psi = ChartMap::psi(beta, alpha);
    let chart = psi.then(&d.chart)?.normal_form(strat);
    let mut bundle_maps = BTreeMap::new();
    for g in strat.upper_set(beta) {
        if g != beta {
            let map = d.bundle_maps.get(&g).ok_or_else(|| Error::Order(format!("no bundle map {alpha} -> {g}")))?;
            bundle_maps.insert(g, psi.then(map)?.normal_form(strat));
        }
    }
    Ok(GluingDatum {
        stratum: beta,
        region: region.clone(),
        metric: Metric::Projected { from: alpha, inner: Box::new(d.metric.clone()) },
        epsilon: epsilon.clone(),
        chart,
        bundle_maps,
    })
}

/// Why two data over one stratum fail to coincide, if they do.
pub fn coincidence_failure(model: &StratifiedModel, d1: &GluingDatum, d2: &GluingDatum) -> Option<String> {
    if d1.stratum != d2.stratum {
        return Some(format!("strata {} and {} differ", d1.stratum, d2.stratum));
    }
    let strat = model.strat();
    if d1.chart.normal_form(strat) != d2.chart.normal_form(strat) {
        return Some(format!("charts {} and {} differ", d1.chart, d2.chart));
    }
    if d1.bundle_maps.keys().ne(d2.bundle_maps.keys()) {
        return Some("bundle maps cover different strata".into());
    }
    for (b, m1) in &d1.bundle_maps {
        let m2 = &d2.bundle_maps[b];
        if m1.normal_form(strat) != m2.normal_form(strat) {
            return Some(format!("bundle maps to {b} differ: {m1} vs {m2}"));
        }
    }
    let (n1, n2) = (d1.metric.normalized(), d2.metric.normalized());
    if n1.is_flat() && n2.is_flat() {
        return (n1 != n2).then(|| "metric weights differ".to_string());
    }
    let overlap = d1.region.intersect(&d2.region);
    for z in overlap.sample_points(model, 16) {
        let supp = model.support(&z);
        let (w1, w2) = (d1.metric.weights_at(model, &z), d2.metric.weights_at(model, &z));
        if (0..strat.m()).any(|j| supp >> j & 1 == 0 && w1[j] != w2[j]) {
            return Some(format!("metrics differ at {:?}", model.describe_point(&z)));
        }
        for (b, m) in &d1.bundle_maps {
            if m.evaluate(model, supp, &z) != d2.bundle_maps[b].evaluate(model, supp, &z) {
                return Some(format!("bundle maps to {b} differ at {:?}", model.describe_point(&z)));
            }
        }
    }
    None
}

pub fn coincide(model: &StratifiedModel, d1: &GluingDatum, d2: &GluingDatum) -> bool {
    coincidence_failure(model, d1, d2).is_none()
}

pub fn sew(model: &StratifiedModel, d1: &GluingDatum, d2: &GluingDatum) -> Result<GluingDatum> {
    if let Some(why) = coincidence_failure(model, d1, d2) {
        return Err(Error::NotCoincident(why));
    }
    let metric = {
        let (a, b) = (d1.metric.normalized(), d2.metric.normalized());
        if a == b {
            a
        } else {
            Metric::Patch { boxes: d1.region.boxes.clone(), inside: Box::new(a), outside: Box::new(b) }
        }
    };
    Ok(GluingDatum {
        stratum: d1.stratum,
        region: d1.region.union(&d2.region),
        metric,
        epsilon: d1.epsilon.clone().min(d2.epsilon.clone()) / qi(2),
        chart: d1.chart.clone(),
        bundle_maps: d1.bundle_maps.clone(),
    })
}

pub fn is_boundary_type(model: &StratifiedModel, region: &Region) -> bool {
    region.is_boundary_type(model)
}

fn shrink_interval(iv: &Interval) -> Interval {
    let half = |x: &Q| x / qi(2);
    let zero = Q::zero();
    let touches = iv.lo.as_ref().is_none_or(|lo| lo <= &zero) && iv.hi.as_ref().is_none_or(|hi| hi >= &zero);
    if touches {
        return Interval { lo: iv.lo.as_ref().map(half), hi: iv.hi.as_ref().map(half) };
    }
    match (&iv.lo, &iv.hi) {
        (Some(lo), Some(hi)) => {
            let q = (hi - lo) / qi(4);
            Interval::new(lo + &q, hi - &q)
        }
        (Some(lo), None) => Interval::above(lo * qi(2)),
        (None, Some(hi)) => Interval::below(hi * qi(2)),
        (None, None) => Interval::all(),
    }
}

/// Every box pulled inward: bounds at 0 or on both sides of 0 are halved,
/// others move a quarter of the way to the middle.
pub fn shrink_region(region: &Region) -> Region {
    Region {
        stratum: region.stratum,
        boxes: region.boxes.iter().map(|b| RBox { axes: b.axes.iter().map(shrink_interval).collect() }).collect(),
    }
}

/// A global datum agreeing with d near the lower strata. Returns the
/// extension and the region U' on which agreement was verified.
pub fn inward_extend(model: &StratifiedModel, d: &GluingDatum) -> Result<(GluingDatum, Region)> {
    if d.region.is_whole() {
        return Ok((d.clone(), d.region.clone()));
    }
    if !d.region.is_boundary_type(model) {
        return Err(Error::NotBoundaryType);
    }
    let canonical = model.canonical_datum(d.stratum)?;
    let inner = shrink_region(&d.region);
    if !inner.is_boundary_type(model) {
        return Err(Error::NotBoundaryType);
    }
    let mut ext = canonical.clone();
    if d.metric.normalized() != canonical.metric {
        ext.metric = Metric::Blend {
            inner: inner.boxes.clone(),
            outer: d.region.boxes.clone(),
            inside: Box::new(d.metric.clone()),
            outside: Box::new(canonical.metric.clone()),
        };
        ext.epsilon = d.epsilon.clone();
    }
    let eps = ext.epsilon.clone().min(d.epsilon.clone());
    let a = restrict(model, &ext, &inner, &eps)?;
    let b = restrict(model, d, &inner, &eps)?;
    if let Some(why) = coincidence_failure(model, &a, &b) {
        return Err(Error::NotCoincident(why));
    }
    Ok((ext, inner))
}

/// Outcome of a gluing-compatibility check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Compatibility {
    pub ok: bool,
    pub checked: usize,
    pub reason: Option<String>,
    pub witness: Option<Vec<String>>,
}

/// Gluing compatibility: for every beta above both strata the data induced
/// on beta agree on the common image. Maps are compared in normal form,
/// metrics and evaluations at the sample points lying in both images.
pub fn check_compatible(model: &StratifiedModel, d1: &GluingDatum, d2: &GluingDatum, samples: &[Vec<Q>]) -> Compatibility {
    let in1: Vec<Option<Subset>> = samples.iter().map(|z| d1.image_component(model, z)).collect();
    let in2: Vec<Option<Subset>> = samples.iter().map(|z| d2.image_component(model, z)).collect();
    compatible_with(model, d1, d2, samples, &in1, &in2)
}

pub(crate) fn compatible_with(
    model: &StratifiedModel,
    d1: &GluingDatum,
    d2: &GluingDatum,
    samples: &[Vec<Q>],
    in1: &[Option<Subset>],
    in2: &[Option<Subset>],
) -> Compatibility {
    let strat = model.strat();
    let fail = |reason: String, z: Option<&Vec<Q>>, checked| Compatibility {
        ok: false,
        checked,
        reason: Some(reason),
        witness: z.map(|z| model.describe_point(z)),
    };
    let induced = |d: &GluingDatum, beta: usize, m: &ChartMap| -> ChartMap {
        if d.stratum == beta {
            m.normal_form(strat)
        } else {
            ChartMap::psi(beta, d.stratum).then(m).map(|w| w.normal_form(strat)).unwrap_or_else(|_| m.clone())
        }
    };
    let above: Vec<usize> =
        strat.upper_set(d1.stratum).into_iter().filter(|&b| strat.le(d2.stratum, b)).collect();
    let mut checked = 0;
    for &beta in &above {
        if induced(d1, beta, &d1.chart) != induced(d2, beta, &d2.chart) {
            return fail(format!("induced charts over {beta} differ"), None, checked);
        }
        let maps = |d: &GluingDatum, g: usize| -> Option<ChartMap> {
            let m = if d.stratum == g { ChartMap::identity(g) } else { d.bundle_maps.get(&g)?.clone() };
            Some(induced(d, beta, &m))
        };
        for g in strat.upper_set(beta) {
            if g != beta && maps(d1, g) != maps(d2, g) {
                return fail(format!("induced bundle maps {beta} -> {g} differ"), None, checked);
            }
        }
    }
    for (k, z) in samples.iter().enumerate() {
        let (Some(c1), Some(c2)) = (in1[k], in2[k]) else { continue };
        let supp = model.support(z);
        let beta = strat.class_of(supp);
        if !above.contains(&beta) {
            continue;
        }
        checked += 1;
        let w1 = d1.metric.weights_at(model, &model.project(z, c1));
        let w2 = d2.metric.weights_at(model, &model.project(z, c2));
        if (0..strat.m()).any(|j| supp >> j & 1 == 0 && w1[j] != w2[j]) {
            return fail(format!("induced metrics over {beta} differ"), Some(z), checked);
        }
        let v1 = induced(d1, beta, &d1.chart).evaluate(model, supp, z);
        let v2 = induced(d2, beta, &d2.chart).evaluate(model, supp, z);
        if v1 != v2 {
            return fail(format!("induced charts over {beta} disagree"), Some(z), checked);
        }
    }
    Compatibility { ok: true, checked, reason: None, witness: None }
}

use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::Q;
use crate::linear_strata::is_subset;

use super::model::StratifiedModel;
use super::region::{Interval, RBox};

/// Diagonal normal-bundle metric, possibly varying with the base point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Metric {
    /// Constant weight per coordinate.
    Flat {
        #[serde(with = "crate::arith::q_vec_string")]
        weights: Vec<Q>,
    },
    /// c * inside + (1 - c) * outside, with c = 1 on the inner boxes and 0
    /// off the outer ones, piecewise linear between.
    Blend { inner: Vec<RBox>, outer: Vec<RBox>, inside: Box<Metric>, outside: Box<Metric> },
    /// inside on the boxes, outside elsewhere.
    Patch { boxes: Vec<RBox>, inside: Box<Metric>, outside: Box<Metric> },
    /// Push-forward of a metric on a lower stratum.
    Projected { from: usize, inner: Box<Metric> },
}

impl Metric {
    pub fn flat(weights: Vec<Q>) -> Self {
        Metric::Flat { weights }
    }

    pub fn unit(m: usize) -> Self {
        Metric::Flat { weights: vec![Q::one(); m] }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Metric::Flat { .. } => "flat",
            Metric::Blend { .. } => "blend",
            Metric::Patch { .. } => "patch",
            Metric::Projected { .. } => "projected",
        }
    }

    pub fn weights_at(&self, model: &StratifiedModel, base: &[Q]) -> Vec<Q> {
        match self {
            Metric::Flat { weights } => weights.clone(),
            Metric::Blend { inner, outer, inside, outside } => {
                let c = cutoff(inner, outer, base);
                let a = inside.weights_at(model, base);
                let b = outside.weights_at(model, base);
                a.iter().zip(&b).map(|(x, y)| &c * x + (Q::one() - &c) * y).collect()
            }
            Metric::Patch { boxes, inside, outside } => {
                if boxes.iter().any(|b| b.contains(base)) {
                    inside.weights_at(model, base)
                } else {
                    outside.weights_at(model, base)
                }
            }
            Metric::Projected { from, inner } => {
                let supp = model.support(base);
                let pick = model
                    .strat()
                    .class(*from)
                    .iter()
                    .copied()
                    .filter(|&i| is_subset(i, supp))
                    .min_by(|&x, &y| {
                        model.normal_norm(base, x, None).cmp(&model.normal_norm(base, y, None)).then(x.cmp(&y))
                    });
                match pick {
                    Some(i) => inner.weights_at(model, &model.project(base, i)),
                    None => inner.weights_at(model, base),
                }
            }
        }
    }

    /// Collapses constant pieces; two metrics with equal normal forms are
    /// equal as functions.
    pub fn normalized(&self) -> Metric {
        match self {
            Metric::Flat { .. } => self.clone(),
            Metric::Projected { from, inner } => match inner.normalized() {
                flat @ Metric::Flat { .. } => flat,
                other => Metric::Projected { from: *from, inner: Box::new(other) },
            },
            Metric::Blend { inner, outer, inside, outside } => {
                let (a, b) = (inside.normalized(), outside.normalized());
                if a == b && a.is_flat() {
                    a
                } else {
                    Metric::Blend { inner: inner.clone(), outer: outer.clone(), inside: Box::new(a), outside: Box::new(b) }
                }
            }
            Metric::Patch { boxes, inside, outside } => {
                let (a, b) = (inside.normalized(), outside.normalized());
                if a == b && a.is_flat() {
                    a
                } else {
                    Metric::Patch { boxes: boxes.clone(), inside: Box::new(a), outside: Box::new(b) }
                }
            }
        }
    }

    pub fn is_flat(&self) -> bool {
        matches!(self, Metric::Flat { .. })
    }

    /// Coordinatewise upper bound over all base points.
    pub fn sup_weights(&self) -> Vec<Q> {
        match self {
            Metric::Flat { weights } => weights.clone(),
            Metric::Blend { inside, outside, .. } | Metric::Patch { inside, outside, .. } => {
                let (a, b) = (inside.sup_weights(), outside.sup_weights());
                a.into_iter().zip(b).map(|(x, y)| x.max(y)).collect()
            }
            Metric::Projected { inner, .. } => inner.sup_weights(),
        }
    }

    pub fn inf_weights(&self) -> Vec<Q> {
        match self {
            Metric::Flat { weights } => weights.clone(),
            Metric::Blend { inside, outside, .. } | Metric::Patch { inside, outside, .. } => {
                let (a, b) = (inside.inf_weights(), outside.inf_weights());
                a.into_iter().zip(b).map(|(x, y)| x.min(y)).collect()
            }
            Metric::Projected { inner, .. } => inner.inf_weights(),
        }
    }
}

fn ramp(x: &Q, outer: &Interval, inner: &Interval) -> Q {
    if !outer.contains(x) {
        return Q::zero();
    }
    if let (Some(lo), Some(lo2)) = (&outer.lo, &inner.lo) {
        if x < lo2 {
            return (x - lo) / (lo2 - lo);
        }
    }
    if let (Some(hi), Some(hi2)) = (&outer.hi, &inner.hi) {
        if x > hi2 {
            return (hi - x) / (hi - hi2);
        }
    }
    Q::one()
}

fn cutoff(inner: &[RBox], outer: &[RBox], x: &[Q]) -> Q {
    let mut best = Q::zero();
    for (bi, bo) in inner.iter().zip(outer) {
        let mut c = Q::one();
        for (a, v) in x.iter().enumerate() {
            c = c.min(ramp(v, &bo.axes[a], &bi.axes[a]));
            if c.is_zero() {
                break;
            }
        }
        best = best.max(c);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qi};
    use crate::gluing_engine::model::linear_model;
    use crate::linear_strata::{Field, LinearStratification};

    #[test]
    fn blend_is_inside_on_inner_and_outside_off_outer() {
        let s = LinearStratification::new(1, Field::Real, vec![vec![0], vec![1]]).unwrap();
        let model = linear_model(&s).unwrap();
        let outer = vec![RBox { axes: vec![Interval::new(qi(-2), qi(2))] }];
        let inner = vec![RBox { axes: vec![Interval::new(qi(-1), qi(1))] }];
        let m = Metric::Blend {
            inner,
            outer,
            inside: Box::new(Metric::flat(vec![qi(3)])),
            outside: Box::new(Metric::flat(vec![qi(1)])),
        };
        assert_eq!(m.weights_at(&model, &[q(1, 2)]), vec![qi(3)]);
        assert_eq!(m.weights_at(&model, &[qi(5)]), vec![qi(1)]);
        assert_eq!(m.weights_at(&model, &[q(3, 2)]), vec![qi(2)]);
        assert_eq!(m.sup_weights(), vec![qi(3)]);
    }

    #[test]
    fn normalization_collapses_constants() {
        let flat = Metric::flat(vec![qi(1), qi(1)]);
        let p = Metric::Projected { from: 0, inner: Box::new(flat.clone()) };
        assert_eq!(p.normalized(), flat);
        let patch = Metric::Patch { boxes: vec![], inside: Box::new(p), outside: Box::new(flat.clone()) };
        assert_eq!(patch.normalized(), flat);
        let other = Metric::Patch { boxes: vec![], inside: Box::new(Metric::flat(vec![qi(2), qi(1)])), outside: Box::new(flat) };
        assert_eq!(other.normalized().kind(), "patch");
    }
}

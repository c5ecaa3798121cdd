use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::Q;
use crate::error::{Error, Result};
use crate::linear_strata::{format_subset, is_subset, LinearStratification, Subset};

use super::chart::ChartMap;
use super::datum::GluingDatum;
use super::metric::Metric;
use super::region::Region;

/// The coordinate model of a linear stratification: V = K^m with one real
/// axis per coordinate over R and two (re, im) over C.
#[derive(Clone, Debug)]
pub struct StratifiedModel {
    strat: LinearStratification,
    d: usize,
    layers: Vec<Vec<usize>>,
    charts: bool,
}

/// Fiber of Gl^alpha over S^alpha: for each beta above alpha, the dimension of
/// the beta-part of the normal fiber.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BundleSpec {
    pub stratum: usize,
    pub fiber_dim: usize,
    pub parts: BTreeMap<usize, usize>,
}

pub fn linear_model(strat: &LinearStratification) -> Result<StratifiedModel> {
    let checked = LinearStratification::new(strat.m(), strat.field(), strat.classes().to_vec())?;
    let model = StratifiedModel {
        d: checked.field().real_dim(),
        layers: checked.layers(),
        strat: checked,
        charts: true,
    };
    model.check_dimensions()?;
    Ok(model)
}

impl StratifiedModel {
    /// The same model with the canonical chart oracle switched off.
    pub fn without_charts(mut self) -> Self {
        self.charts = false;
        self
    }

    pub fn strat(&self) -> &LinearStratification {
        &self.strat
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn axes(&self) -> usize {
        self.strat.m() * self.d
    }

    pub fn num_strata(&self) -> usize {
        self.strat.num_classes()
    }

    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    /// Dimension of M_alpha over the ground field.
    pub fn dimension(&self, a: usize) -> usize {
        self.strat.rank(a)
    }

    pub fn fiber_dim(&self, a: usize) -> usize {
        self.strat.m() - self.strat.rank(a)
    }

    pub fn bundle(&self, a: usize) -> BundleSpec {
        BundleSpec {
            stratum: a,
            fiber_dim: self.fiber_dim(a),
            parts: self
                .strat
                .upper_set(a)
                .into_iter()
                .map(|b| (b, self.strat.rank(b) - self.strat.rank(a)))
                .collect(),
        }
    }

    fn check_dimensions(&self) -> Result<()> {
        for a in 0..self.num_strata() {
            for (b, fiber) in self.bundle(a).parts {
                if fiber + self.dimension(a) != self.dimension(b) {
                    return Err(Error::Dimension(format!("Gl fiber over {a} -> {b} has dimension {fiber}")));
                }
            }
        }
        Ok(())
    }

    pub fn coord_sqr(&self, z: &[Q], j: usize) -> Q {
        z[j * self.d..(j + 1) * self.d].iter().fold(Q::zero(), |acc, x| acc + x * x)
    }

    pub fn support(&self, z: &[Q]) -> Subset {
        (0..self.strat.m())
            .filter(|&j| z[j * self.d..(j + 1) * self.d].iter().any(|x| !x.is_zero()))
            .fold(0, |acc, j| acc | 1 << j)
    }

    pub fn class_of_point(&self, z: &[Q]) -> usize {
        self.strat.class_of(self.support(z))
    }

    /// sum over j outside `comp` of w_j |z_j|^2
    pub fn normal_norm(&self, z: &[Q], comp: Subset, weights: Option<&[Q]>) -> Q {
        let mut acc = Q::zero();
        for j in 0..self.strat.m() {
            if comp >> j & 1 == 0 {
                let s = self.coord_sqr(z, j);
                acc += match weights {
                    Some(w) => &w[j] * s,
                    None => s,
                };
            }
        }
        acc
    }

    /// z with every coordinate outside `comp` set to 0.
    pub fn project(&self, z: &[Q], comp: Subset) -> Vec<Q> {
        z.iter()
            .enumerate()
            .map(|(a, x)| if comp >> (a / self.d) & 1 == 1 { x.clone() } else { Q::zero() })
            .collect()
    }

    /// The flag I = F_0 < F_1 < ... obtained by adding the coordinates of
    /// supp(z) outside I in order of decreasing |z_j|, ties by index.
    pub fn flag(&self, z: &[Q], comp: Subset) -> Vec<Subset> {
        let mut rest: Vec<(Q, usize)> = (0..self.strat.m())
            .filter(|&j| comp >> j & 1 == 0 && !self.coord_sqr(z, j).is_zero())
            .map(|j| (self.coord_sqr(z, j), j))
            .collect();
        rest.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut out = vec![comp];
        let mut cur = comp;
        for (_, j) in rest {
            cur |= 1 << j;
            out.push(cur);
        }
        out
    }

    /// Phi(a, b) on the point (comp, z): first class-b member of the flag.
    pub fn phi_target(&self, b: usize, comp: Subset, z: &[Q]) -> Option<Subset> {
        self.flag(z, comp).into_iter().find(|&s| self.strat.class_of(s) == b)
    }

    /// Psi(b, a): the class-a supports inside `comp` whose flag reaches
    /// `comp` as its first class-b member; the nearest one wins.
    pub fn psi_target(&self, b: usize, a: usize, comp: Subset, z: &[Q]) -> Option<Subset> {
        self.strat
            .class(a)
            .iter()
            .copied()
            .filter(|&i| is_subset(i, comp) && self.phi_target(b, i, z) == Some(comp))
            .min_by(|&x, &y| self.normal_norm(z, x, None).cmp(&self.normal_norm(z, y, None)).then(x.cmp(&y)))
    }

    /// The canonical global datum over M_alpha: inclusion charts with unit
    /// weights and radius 1.
    pub fn canonical_datum(&self, a: usize) -> Result<GluingDatum> {
        self.strat.check_class(a)?;
        if !self.charts {
            return Err(Error::NoCanonicalDatum(a));
        }
        Ok(GluingDatum {
            stratum: a,
            region: Region::whole(a, self.axes()),
            metric: Metric::unit(self.strat.m()),
            epsilon: Q::one(),
            chart: ChartMap::glue(a),
            bundle_maps: self
                .strat
                .upper_set(a)
                .into_iter()
                .filter(|&b| b != a)
                .map(|b| (b, ChartMap::phi(a, b)))
                .collect(),
        })
    }

    pub fn describe_point(&self, z: &[Q]) -> Vec<String> {
        z.iter().map(crate::arith::format_q).collect()
    }

    pub fn describe_support(&self, s: Subset) -> String {
        format_subset(s)
    }
}

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::arith::{format_q, qi, Q};
use crate::error::{Error, Result};
use crate::linear_strata::{format_subset, is_subset, Field, Subset};

use super::datum::{compatible_with, induce, inward_extend, sew, GluingDatum};
use super::model::StratifiedModel;
use super::region::{Interval, RBox, Region};
use super::samples::{tube_points, SampleSpec};

/// Final data of the layered construction, indexed by stratum.
#[derive(Clone, Debug, Serialize)]
pub struct Atlas {
    pub data: Vec<GluingDatum>,
    pub passes: usize,
    pub layers: Vec<Vec<usize>>,
}

pub fn epsilon_floor() -> Q {
    Q::new(1.into(), num_bigint::BigInt::from(1u64 << 32))
}

/// Boxes around the class-K part of the lower stratum: z_K in a fixed open
/// orthant (half-planes over C), every other coordinate within r on each axis.
fn orthant_boxes(model: &StratifiedModel, k: Subset, r: &Q) -> Vec<RBox> {
    let (m, d) = (model.strat().m(), model.d());
    let near = Interval::symmetric(r);
    // per coordinate in K: the choices of half-space
    let choices: Vec<Vec<Interval>> = if d == 1 {
        vec![vec![Interval::above(Q::zero())], vec![Interval::below(Q::zero())]]
    } else {
        vec![
            vec![Interval::above(Q::zero()), Interval::all()],
            vec![Interval::below(Q::zero()), Interval::all()],
            vec![Interval::all(), Interval::above(Q::zero())],
            vec![Interval::all(), Interval::below(Q::zero())],
        ]
    };
    let mut boxes = vec![Vec::new()];
    for j in 0..m {
        if k >> j & 1 == 1 {
            boxes = boxes
                .into_iter()
                .flat_map(|b: Vec<Interval>| {
                    choices.iter().map(move |c| {
                        let mut b = b.clone();
                        b.extend(c.iter().cloned());
                        b
                    })
                })
                .collect();
        } else {
            for b in &mut boxes {
                b.extend(std::iter::repeat_n(near.clone(), d));
            }
        }
    }
    boxes.into_iter().map(|axes| RBox { axes }).collect()
}

pub fn build_atlas(model: &StratifiedModel) -> Result<Atlas> {
    build_atlas_with_floor(model, &epsilon_floor())
}

/// The layered induction. Layer one takes the canonical data. Each later
/// stratum gets the datum induced from the lower ones over orthant boxes
/// near its boundary, sewn and inward-extended; earlier radii are then
/// shrunk so their images in the new stratum sit inside the region where
/// the extension was verified, and the new radius is at most half of every
/// lower one.
pub fn build_atlas_with_floor(model: &StratifiedModel, floor: &Q) -> Result<Atlas> {
    let strat = model.strat();
    let n = model.num_strata();
    let layers = model.layers().to_vec();
    let mut data: Vec<Option<GluingDatum>> = vec![None; n];
    let mut passes = 0;
    let half = |x: &Q| x / qi(2);
    for layer in &layers {
        passes += 1;
        // shrinking is applied once the whole layer is built, so it does not
        // compound across strata of one layer
        let mut caps: Vec<Option<Q>> = vec![None; n];
        let mut built = Vec::new();
        for &a in layer {
            let lower: Vec<usize> = (0..n).filter(|&g| strat.lt(g, a)).collect();
            let canonical = model.canonical_datum(a)?;
            if lower.is_empty() {
                data[a] = Some(canonical);
                continue;
            }
            let lower_data: Vec<&GluingDatum> = lower.iter().map(|&g| data[g].as_ref().unwrap()).collect();
            let eps_min = lower_data.iter().map(|d| d.epsilon.clone()).min().unwrap();
            let weight: Q = lower_data
                .iter()
                .map(|d| d.metric.sup_weights().into_iter().fold(Q::zero(), |acc, w| acc + w))
                .max()
                .unwrap();
            let r = &eps_min / (weight * qi(model.d() as i64) + qi(2));
            let eps_induced = half(&eps_min);

            let mut boundary: Option<GluingDatum> = None;
            for (&g, d) in lower.iter().zip(&lower_data) {
                let boxes: Vec<RBox> = strat
                    .class(g)
                    .iter()
                    .filter(|&&k| strat.class(a).iter().any(|&j| is_subset(k, j)))
                    .flat_map(|&k| orthant_boxes(model, k, &r))
                    .collect();
                if boxes.is_empty() {
                    continue;
                }
                let piece = induce(model, d, a, &Region::from_boxes(a, boxes), &eps_induced)?;
                boundary = Some(match boundary {
                    None => piece,
                    Some(b) => sew(model, &b, &piece)?,
                });
            }
            let boundary = boundary.ok_or_else(|| Error::Region(format!("no lower data reach stratum {a}")))?;
            let (ext, _inner) = inward_extend(model, &boundary)?;

            // images of lower data in M_a must fit in the shrunken boxes
            let cap = half(&r);
            for &g in &lower {
                if caps[g].as_ref().is_none_or(|c| &cap < c) {
                    caps[g] = Some(cap.clone());
                }
            }
            built.push((a, ext));
        }
        for (g, cap) in caps.into_iter().enumerate() {
            if let (Some(cap), Some(d)) = (cap, data[g].as_mut()) {
                if d.epsilon > cap {
                    d.epsilon = cap;
                }
            }
        }
        for (a, mut ext) in built {
            let lowest = (0..n).filter(|&g| strat.lt(g, a)).map(|g| data[g].as_ref().unwrap().epsilon.clone()).min();
            if let Some(lowest) = lowest {
                ext.epsilon = ext.epsilon.min(half(&lowest));
            }
            data[a] = Some(ext);
        }
        // restore eps_b <= eps_g / 2 for all built g < b
        for l in &layers[..passes] {
            for &b in l {
                let bound = (0..n)
                    .filter(|&g| strat.lt(g, b))
                    .filter_map(|g| data[g].as_ref().map(|d| half(&d.epsilon)))
                    .min();
                if let (Some(bound), Some(d)) = (bound, data[b].as_mut()) {
                    if d.epsilon > bound {
                        d.epsilon = bound;
                    }
                }
            }
        }
        if let Some(d) = data.iter().flatten().find(|d| &d.epsilon < floor) {
            return Err(Error::Separation(format!(
                "radius of stratum {} fell to {} below the floor {}",
                d.stratum,
                format_q(&d.epsilon),
                format_q(floor)
            )));
        }
    }
    Ok(Atlas { data: data.into_iter().map(Option::unwrap).collect(), passes, layers })
}

/// Membership of every sample in every image.
fn memberships(model: &StratifiedModel, data: &[GluingDatum], samples: &[Vec<Q>]) -> Vec<Vec<Option<Subset>>> {
    data.iter().map(|d| samples.iter().map(|z| d.image_component(model, z)).collect()).collect()
}

pub fn cover_witness(model: &StratifiedModel, data: &[GluingDatum], samples: &[Vec<Q>]) -> Option<Vec<Q>> {
    samples.iter().find(|z| !data.iter().any(|d| d.in_image(model, z))).cloned()
}

/// Every sample lies in the image of some chart.
pub fn verify_cover(model: &StratifiedModel, data: &[GluingDatum], samples: &[Vec<Q>]) -> bool {
    cover_witness(model, data, samples).is_none()
}

#[derive(Clone, Debug, Serialize)]
pub struct DatumSummary {
    pub stratum: usize,
    pub supports: Vec<String>,
    pub dimension: usize,
    pub fiber_dim: usize,
    pub epsilon: String,
    pub boxes: usize,
    pub metric: &'static str,
    pub chart: String,
    pub bundle_maps: BTreeMap<usize, String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairCheck {
    pub pair: [usize; 2],
    pub ok: bool,
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverCheck {
    pub ok: bool,
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AtlasReport {
    pub m: usize,
    pub field: Field,
    pub strata: usize,
    pub layers: Vec<Vec<usize>>,
    pub passes: usize,
    pub samples: usize,
    pub data: Vec<DatumSummary>,
    pub compatibility: Vec<Vec<bool>>,
    pub incompatible: Vec<PairCheck>,
    pub separation: Vec<PairCheck>,
    pub cover: CoverCheck,
    pub compatible: bool,
    pub separated: bool,
    pub ok: bool,
}

/// The sample set used for reports: the spec points plus points straddling
/// every tube boundary.
pub fn report_samples(model: &StratifiedModel, atlas: &Atlas, spec: &SampleSpec) -> Vec<Vec<Q>> {
    let mut pts = spec.points(model);
    pts.extend(tube_points(model, &atlas.data, 8, 1));
    pts
}

pub fn report(model: &StratifiedModel, atlas: &Atlas, samples: &[Vec<Q>]) -> AtlasReport {
    let strat = model.strat();
    let n = atlas.data.len();
    let member = memberships(model, &atlas.data, samples);
    let mut compatibility = vec![vec![true; n]; n];
    let mut incompatible = Vec::new();
    for a in 0..n {
        for b in a..n {
            let c = compatible_with(model, &atlas.data[a], &atlas.data[b], samples, &member[a], &member[b]);
            compatibility[a][b] = c.ok;
            compatibility[b][a] = c.ok;
            if !c.ok {
                incompatible.push(PairCheck { pair: [a, b], ok: false, checked: c.checked, reason: c.reason, witness: c.witness });
            }
        }
    }
    let mut separation = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if strat.comparable(a, b) {
                continue;
            }
            let common: Vec<usize> = (0..n).filter(|&g| strat.le(g, a) && strat.le(g, b)).collect();
            let mut check = PairCheck { pair: [a, b], ok: true, checked: 0, reason: None, witness: None };
            for (k, z) in samples.iter().enumerate() {
                if member[a][k].is_none() || member[b][k].is_none() {
                    continue;
                }
                check.checked += 1;
                if !common.iter().any(|&g| member[g][k].is_some()) {
                    check.ok = false;
                    check.reason = Some("point in both images but in no common lower image".into());
                    check.witness = Some(model.describe_point(z));
                    break;
                }
            }
            separation.push(check);
        }
    }
    let uncovered = (0..samples.len()).find(|&k| member.iter().all(|row| row[k].is_none()));
    let cover = CoverCheck {
        ok: uncovered.is_none(),
        checked: samples.len(),
        witness: uncovered.map(|k| model.describe_point(&samples[k])),
    };
    let data = atlas
        .data
        .iter()
        .map(|d| DatumSummary {
            stratum: d.stratum,
            supports: strat.class(d.stratum).iter().map(|&s| format_subset(s)).collect(),
            dimension: model.dimension(d.stratum),
            fiber_dim: model.fiber_dim(d.stratum),
            epsilon: format_q(&d.epsilon),
            boxes: d.region.boxes.len(),
            metric: d.metric.kind(),
            chart: d.chart.to_string(),
            bundle_maps: d.bundle_maps.iter().map(|(b, m)| (*b, m.to_string())).collect(),
        })
        .collect();
    let compatible = incompatible.is_empty();
    let separated = separation.iter().all(|c| c.ok);
    AtlasReport {
        m: strat.m(),
        field: strat.field(),
        strata: n,
        layers: atlas.layers.clone(),
        passes: atlas.passes,
        samples: samples.len(),
        data,
        compatibility,
        incompatible,
        separation,
        ok: compatible && separated && cover.ok && atlas.passes == atlas.layers.len(),
        cover,
        compatible,
        separated,
    }
}

/// Builds the atlas and checks it on the given sample spec.
pub fn run(model: &StratifiedModel, spec: &SampleSpec) -> Result<AtlasReport> {
    let atlas = build_atlas(model)?;
    let samples = report_samples(model, &atlas, spec);
    Ok(report(model, &atlas, &samples))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;
    use crate::gluing_engine::model::linear_model;
    use crate::gluing_engine::samples::grid_points;
    use crate::linear_strata::LinearStratification;

    fn model(m: usize, classes: Vec<Vec<Subset>>) -> StratifiedModel {
        linear_model(&LinearStratification::new(m, Field::Real, classes).unwrap()).unwrap()
    }

    #[test]
    fn line_model() {
        let m = model(1, vec![vec![0], vec![1]]);
        let atlas = build_atlas(&m).unwrap();
        assert_eq!(atlas.data.len(), 2);
        assert_eq!(atlas.passes, 2);
        let r = report(&m, &atlas, &grid_points(1, 21));
        assert!(r.ok, "{r:?}");
    }

    #[test]
    fn chain_model_is_compatible() {
        let m = model(2, vec![vec![0], vec![0b01, 0b10], vec![0b11]]);
        let r = run(&m, &SampleSpec::Full { per_axis: 21 }).unwrap();
        assert_eq!(r.passes, 3);
        assert!(r.compatibility.iter().flatten().all(|&c| c));
        assert!(r.ok);
        // radii halve at least once per layer
        let eps: Vec<Q> = build_atlas(&m).unwrap().data.iter().map(|d| d.epsilon.clone()).collect();
        assert!(eps[1] <= &eps[0] / qi(2) && eps[2] <= &eps[1] / qi(2));
    }

    #[test]
    fn incomparable_strata_are_separated() {
        let m = model(2, vec![vec![0], vec![0b01], vec![0b10], vec![0b11]]);
        let r = run(&m, &SampleSpec::Full { per_axis: 21 }).unwrap();
        assert_eq!(r.separation.len(), 1);
        assert!(r.separation[0].ok && r.separation[0].checked > 0, "{:?}", r.separation);
        assert!(r.ok);
    }

    #[test]
    fn cover_fails_without_the_deepest_chart() {
        let m = model(1, vec![vec![0], vec![1]]);
        let atlas = build_atlas(&m).unwrap();
        let grid = grid_points(1, 21);
        assert!(verify_cover(&m, &atlas.data, &grid));
        let rest: Vec<GluingDatum> = atlas.data.iter().filter(|d| d.stratum != 0).cloned().collect();
        assert_eq!(cover_witness(&m, &rest, &grid), Some(vec![qi(0)]));
        // points within the radius of the origin
        let eps = &atlas.data[0].epsilon;
        let ball: Vec<Vec<Q>> = (-3..=3).map(|k| vec![eps * q(k, 4)]).collect();
        assert!(verify_cover(&m, &atlas.data, &ball));
    }

    #[test]
    fn floor_is_reported() {
        let m = model(2, vec![vec![0], vec![0b01, 0b10], vec![0b11]]);
        assert!(matches!(build_atlas_with_floor(&m, &q(1, 2)), Err(Error::Separation(_))));
    }

    #[test]
    fn model_without_charts_fails() {
        let m = model(1, vec![vec![0], vec![1]]).without_charts();
        assert_eq!(build_atlas(&m).unwrap_err(), Error::NoCanonicalDatum(0));
    }
}

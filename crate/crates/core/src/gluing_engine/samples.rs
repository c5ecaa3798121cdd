use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{q, qi, Q};

use super::datum::GluingDatum;
use super::model::StratifiedModel;

/// Which points of V the atlas checks are run on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SampleSpec {
    /// Every point of the grid {-1, ..., 1}^axes with `per_axis` values per axis.
    Full { per_axis: usize },
    /// `count` random points cycling through all supports.
    Spread { count: usize, seed: u64 },
}

impl SampleSpec {
    /// The 21-per-axis grid when it stays small, random points otherwise.
    pub fn default_for(model: &StratifiedModel) -> Self {
        if model.axes() <= 3 {
            SampleSpec::Full { per_axis: 21 }
        } else {
            SampleSpec::Spread { count: 512, seed: 0 }
        }
    }

    pub fn points(&self, model: &StratifiedModel) -> Vec<Vec<Q>> {
        match *self {
            SampleSpec::Full { per_axis } => grid_points(model.axes(), per_axis),
            SampleSpec::Spread { count, seed } => spread_points(model, count, seed),
        }
    }
}

pub fn grid_values(per_axis: usize) -> Vec<Q> {
    if per_axis <= 1 {
        return vec![Q::zero()];
    }
    let n = per_axis as i64 - 1;
    (0..=n).map(|k| q(2 * k - n, n)).collect()
}

pub fn grid_points(axes: usize, per_axis: usize) -> Vec<Vec<Q>> {
    let values = grid_values(per_axis);
    let mut out = vec![Vec::new()];
    for _ in 0..axes {
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

const DENOMINATORS: [i64; 10] = [1, 2, 3, 4, 5, 7, 8, 16, 64, 1024];

fn unit_value(rng: &mut ChaCha8Rng) -> Q {
    let den = DENOMINATORS[rng.gen_range(0..DENOMINATORS.len())];
    let num = rng.gen_range(1..=den);
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    q(sign * num, den)
}

/// Random points in [-1, 1]^axes whose supports run through every subset.
pub fn spread_points(model: &StratifiedModel, count: usize, seed: u64) -> Vec<Vec<Q>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (m, d) = (model.strat().m(), model.d());
    (0..count)
        .map(|k| {
            let s = k as u64 % (1u64 << m);
            let mut z = vec![Q::zero(); m * d];
            for j in 0..m {
                if s >> j & 1 == 1 {
                    // keep the coordinate nonzero
                    let lead = rng.gen_range(0..d);
                    for a in 0..d {
                        if a == lead || rng.gen_bool(0.5) {
                            z[j * d + a] = unit_value(&mut rng);
                        }
                    }
                }
            }
            z
        })
        .collect()
}

/// Points near each datum's tube boundary: normal coordinates on the scale of
/// the radius, base coordinates of size up to 1 or on that same scale.
pub fn tube_points(model: &StratifiedModel, data: &[GluingDatum], per_component: usize, seed: u64) -> Vec<Vec<Q>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (m, d) = (model.strat().m(), model.d());
    let spread = qi(4 * (m * d).max(1) as i64);
    let mut out = Vec::new();
    for datum in data {
        for &comp in model.strat().class(datum.stratum) {
            for _ in 0..per_component {
                let mut z = vec![Q::zero(); m * d];
                for j in 0..m {
                    if comp >> j & 1 == 1 {
                        // base coordinates either of unit size or as small as the normal ones
                        let small = rng.gen_bool(0.5);
                        let lead = rng.gen_range(0..d);
                        for a in 0..d {
                            if a == lead || rng.gen_bool(0.5) {
                                let v = unit_value(&mut rng);
                                z[j * d + a] = if small { &datum.epsilon * qi(2) * v / &spread } else { v };
                            }
                        }
                    } else if rng.gen_range(0..3) > 0 {
                        for a in 0..d {
                            let k = rng.gen_range(-8..=8);
                            z[j * d + a] = &datum.epsilon * qi(k) / &spread;
                        }
                    }
                }
                out.push(z);
            }
        }
    }
    out
}

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::arith::{format_q, q_string, GaussianRational, Q};
use crate::error::{Error, Result};

/// Gluing parameter t and horodisc radius delta for one node, 0 < |t| < delta^2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixture {
    pub t: GaussianRational,
    #[serde(with = "q_string")]
    pub delta: Q,
}

impl Fixture {
    pub fn new(t: GaussianRational, delta: Q) -> Result<Self> {
        check_parameter(&t, &delta)?;
        if t.is_zero() {
            return Err(Error::Annulus("t = 0 gives a node, not an annulus".into()));
        }
        Ok(Self { t, delta })
    }

    /// |t|/delta < |z| < delta, compared through squares.
    pub fn in_annulus(&self, z: &GaussianRational) -> bool {
        let n = z.norm_sqr();
        let d2 = &self.delta * &self.delta;
        self.t.norm_sqr() < &d2 * &n && n < d2
    }

    /// (|t|/delta)^2.
    pub fn inner_radius_sqr(&self) -> Q {
        self.t.norm_sqr() / (&self.delta * &self.delta)
    }
}

fn check_parameter(t: &GaussianRational, delta: &Q) -> Result<()> {
    if !delta.is_positive() {
        return Err(Error::Annulus(format!("delta = {} must be positive", format_q(delta))));
    }
    let d2 = delta * delta;
    if t.norm_sqr() >= &d2 * &d2 {
        return Err(Error::Annulus(format!("|t| >= delta^2 for t = {t}, delta = {}", format_q(delta))));
    }
    Ok(())
}

/// w = t / z on the annulus; the result lies in the same annulus.
pub fn plumb(z: &GaussianRational, fixture: &Fixture) -> Result<GaussianRational> {
    if !fixture.in_annulus(z) {
        return Err(Error::Annulus(format!(
            "z = {z} is not in |t|/delta < |z| < delta (t = {}, delta = {})",
            fixture.t,
            format_q(&fixture.delta)
        )));
    }
    Ok(&fixture.t / z)
}

/// What is kept of the two horodiscs at one node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NodeRegion {
    /// t = 0: both punctured discs 0 < |z|, |w| < delta stay, nothing is identified.
    Nodal {
        #[serde(with = "q_string")]
        delta: Q,
    },
    /// |z|, |w| <= |t|/delta are cut out and the annuli are identified by z w = t.
    Annulus {
        t: GaussianRational,
        #[serde(with = "q_string")]
        delta: Q,
        #[serde(with = "q_string")]
        inner_radius_sqr: Q,
    },
}

impl NodeRegion {
    pub fn relation(&self) -> Option<String> {
        match self {
            NodeRegion::Nodal { .. } => None,
            NodeRegion::Annulus { t, .. } => Some(format!("z w = {t}")),
        }
    }
}

/// Per-node description of the curve after excising the small discs.
pub fn excision_region(ts: &[GaussianRational], delta: &Q) -> Result<Vec<NodeRegion>> {
    ts.iter()
        .map(|t| {
            check_parameter(t, delta)?;
            if t.is_zero() {
                Ok(NodeRegion::Nodal { delta: delta.clone() })
            } else {
                let f = Fixture::new(t.clone(), delta.clone())?;
                Ok(NodeRegion::Annulus { inner_radius_sqr: f.inner_radius_sqr(), t: f.t, delta: f.delta })
            }
        })
        .collect()
}

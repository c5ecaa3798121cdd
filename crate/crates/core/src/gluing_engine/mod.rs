//! Gluing data, their inductions and the layered atlas construction, run on
//! the exact coordinate model of a linear stratification.

mod atlas;
mod chart;
mod datum;
mod metric;
mod model;
mod region;
mod samples;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linear_strata::{LinearStratification, StratificationJson};

pub use atlas::{
    build_atlas, build_atlas_with_floor, cover_witness, epsilon_floor, report, report_samples, run, verify_cover,
    Atlas, AtlasReport, CoverCheck, DatumSummary, PairCheck,
};
pub use chart::{Arrow, ChartMap, Strategy, Value};
pub use datum::{
    check_compatible, coincide, coincidence_failure, induce, inward_extend, is_boundary_type, restrict, sew,
    shrink_region, Compatibility, GluingDatum,
};
pub use metric::Metric;
pub use model::{linear_model, BundleSpec, StratifiedModel};
pub use region::{Interval, RBox, Region};
pub use samples::{grid_points, grid_values, spread_points, tube_points, SampleSpec};

/// Input of an atlas run: a stratification and optionally the sample set.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelJson {
    #[serde(flatten)]
    pub stratification: StratificationJson,
    #[serde(default)]
    pub samples: Option<SampleSpec>,
}

impl ModelJson {
    pub fn model(&self) -> Result<StratifiedModel> {
        linear_model(&LinearStratification::from_json(&self.stratification)?)
    }
}

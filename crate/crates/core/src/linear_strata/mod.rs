//! Coordinate-support stratifications of K^m.
//!
//! A subset I of {1..m} is stored as a bitmask with bit i-1 for index i. On
//! the wire subsets are sorted 1-based arrays.

mod generate;
mod group;
mod normal;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use generate::all_stratifications;
pub use group::{determinant, inverse, is_metric_orthogonal, mat_mul, preserves_stratification, special_orthogonal};
pub use normal::{DoubleNormalPiece, NormalPiece};

pub type Subset = u64;

/// Largest supported ambient dimension (the class table has 2^m entries).
pub const MAX_DIM: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    #[serde(rename = "R", alias = "real", alias = "r")]
    Real,
    #[serde(rename = "C", alias = "complex", alias = "c")]
    Complex,
}

impl Field {
    /// Real dimension of one coordinate.
    pub fn real_dim(self) -> usize {
        match self {
            Field::Real => 1,
            Field::Complex => 2,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::Real => "R",
            Field::Complex => "C",
        })
    }
}

pub fn subset_from_indices(indices: &[u32]) -> Subset {
    indices.iter().fold(0, |acc, &i| acc | 1 << (i - 1))
}

pub fn subset_indices(s: Subset) -> Vec<u32> {
    (0..64).filter(|i| s >> i & 1 == 1).map(|i| i + 1).collect()
}

pub fn format_subset(s: Subset) -> String {
    let parts: Vec<String> = subset_indices(s).iter().map(u32::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

pub fn is_subset(a: Subset, b: Subset) -> bool {
    a & !b == 0
}

/// Anything with an exact zero test can be a coordinate.
pub trait Coordinate {
    fn is_zero_coord(&self) -> bool;
}

impl<T: crate::arith::Scalar> Coordinate for T {
    fn is_zero_coord(&self) -> bool {
        self.is_zero()
    }
}

pub fn support_of<T: Coordinate>(point: &[T]) -> Subset {
    point
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero_coord())
        .fold(0, |acc, (i, _)| acc | 1 << i)
}

/// A validated stratification: classes partition the power set, members of a
/// class have equal size, and the frontier condition holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearStratification {
    m: usize,
    field: Field,
    classes: Vec<Vec<Subset>>,
    class_of: Vec<usize>,
    /// le[a][b]: every member of a lies in some member of b.
    le: Vec<Vec<bool>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub m: usize,
    pub classes: usize,
    pub violations: Vec<Violation>,
    /// Strict order pairs [a, b] with a < b, present when the partition is sound.
    pub order: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratificationJson {
    pub m: usize,
    #[serde(default = "default_field")]
    pub field: Field,
    pub classes: Vec<Vec<Vec<u32>>>,
    /// Optional declared strict relation; its transitive closure must match
    /// the relation forced by the classes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<[usize; 2]>>,
}

fn default_field() -> Field {
    Field::Real
}

fn violation(kind: &str, detail: String) -> Violation {
    Violation { kind: kind.into(), detail }
}

/// Order forced by the classes: a <= b iff every member of a sits inside
/// some member of b.
fn containment_order(classes: &[Vec<Subset>]) -> Vec<Vec<bool>> {
    classes
        .iter()
        .map(|a| {
            classes
                .iter()
                .map(|b| a.iter().all(|&i| b.iter().any(|&j| is_subset(i, j))))
                .collect()
        })
        .collect()
}

/// Checks the stratification axioms and returns every violation found.
pub fn validate(m: usize, classes: &[Vec<Subset>], declared: Option<&[[usize; 2]]>) -> ValidationReport {
    let mut violations = Vec::new();
    let mut report = |v| violations.push(v);
    if m > MAX_DIM {
        report(violation("dimension", format!("m = {m} exceeds the supported maximum {MAX_DIM}")));
        return ValidationReport { valid: false, m, classes: classes.len(), violations, order: vec![] };
    }
    let full: Subset = (1 << m) - 1;
    let mut owner: Vec<Option<usize>> = vec![None; 1 << m];
    let mut partition_ok = true;
    for (a, class) in classes.iter().enumerate() {
        if class.is_empty() {
            report(violation("partition", format!("class {a} is empty")));
            partition_ok = false;
        }
        for &s in class {
            if s & !full != 0 {
                report(violation("range", format!("class {a} contains {} outside 1..={m}", format_subset(s))));
                partition_ok = false;
                continue;
            }
            match owner[s as usize] {
                Some(b) => {
                    report(violation(
                        "partition",
                        format!("subset {} appears in classes {b} and {a}", format_subset(s)),
                    ));
                    partition_ok = false;
                }
                None => owner[s as usize] = Some(a),
            }
        }
        let sizes: BTreeSet<u32> = class.iter().map(|s| s.count_ones()).collect();
        if sizes.len() > 1 {
            let sizes: Vec<String> = sizes.iter().map(u32::to_string).collect();
            report(violation(
                "cardinality",
                format!("class {a} mixes subsets of sizes {}", sizes.join(", ")),
            ));
        }
    }
    for (s, o) in owner.iter().enumerate() {
        if o.is_none() {
            report(violation("partition", format!("subset {} is in no class", format_subset(s as Subset))));
            partition_ok = false;
        }
    }
    let mut order = Vec::new();
    if partition_ok {
        let le = containment_order(classes);
        // frontier: touching closures force comparability
        for a in 0..classes.len() {
            for b in 0..classes.len() {
                let touches = classes[a].iter().any(|&i| classes[b].iter().any(|&j| is_subset(i, j)));
                if touches && !le[a][b] {
                    report(violation(
                        "frontier",
                        format!("a member of class {a} lies in a member of class {b}, but not every member does"),
                    ));
                }
                if a != b && le[a][b] {
                    order.push([a, b]);
                }
            }
        }
        if let Some(pairs) = declared {
            let n = classes.len();
            let mut rel = vec![vec![false; n]; n];
            for (i, row) in rel.iter_mut().enumerate() {
                row[i] = true;
            }
            let mut bad = false;
            for &[a, b] in pairs {
                if a >= n || b >= n {
                    report(violation("order", format!("declared pair [{a}, {b}] names a missing class")));
                    bad = true;
                } else {
                    rel[a][b] = true;
                }
            }
            if !bad {
                for k in 0..n {
                    for i in 0..n {
                        for j in 0..n {
                            if rel[i][k] && rel[k][j] {
                                rel[i][j] = true;
                            }
                        }
                    }
                }
                for a in 0..n {
                    for b in 0..n {
                        if rel[a][b] != le[a][b] {
                            let want = if le[a][b] { "holds" } else { "fails" };
                            report(violation(
                                "order",
                                format!("declared order disagrees at ({a}, {b}): containment {want}"),
                            ));
                        }
                    }
                }
            }
        }
    }
    let valid = violations.is_empty();
    ValidationReport { valid, m, classes: classes.len(), violations, order }
}

impl LinearStratification {
    pub fn new(m: usize, field: Field, classes: Vec<Vec<Subset>>) -> Result<Self> {
        let report = validate(m, &classes, None);
        if !report.valid {
            let details: Vec<String> = report.violations.iter().map(|v| v.detail.clone()).collect();
            return Err(Error::InvalidStratification(details.join("; ")));
        }
        Ok(Self::from_checked(m, field, classes))
    }

    /// Builds without running the frontier/cardinality checks; the classes
    /// must still partition the power set.
    pub fn partition_only(m: usize, field: Field, classes: Vec<Vec<Subset>>) -> Result<Self> {
        let report = validate(m, &classes, None);
        let fatal: Vec<String> = report
            .violations
            .iter()
            .filter(|v| matches!(v.kind.as_str(), "partition" | "range" | "dimension"))
            .map(|v| v.detail.clone())
            .collect();
        if !fatal.is_empty() {
            return Err(Error::InvalidStratification(fatal.join("; ")));
        }
        Ok(Self::from_checked(m, field, classes))
    }

    fn from_checked(m: usize, field: Field, mut classes: Vec<Vec<Subset>>) -> Self {
        for c in &mut classes {
            c.sort_by_key(|&s| subset_indices(s));
        }
        let mut class_of = vec![0; 1 << m];
        for (a, c) in classes.iter().enumerate() {
            for &s in c {
                class_of[s as usize] = a;
            }
        }
        let le = containment_order(&classes);
        Self { m, field, classes, class_of, le }
    }

    pub fn from_json(json: &StratificationJson) -> Result<Self> {
        let report = validate_json(json);
        if !report.valid {
            let details: Vec<String> = report.violations.iter().map(|v| v.detail.clone()).collect();
            return Err(Error::InvalidStratification(details.join("; ")));
        }
        Ok(Self::from_checked(json.m, json.field, json_classes(json)?))
    }

    pub fn to_json(&self) -> StratificationJson {
        StratificationJson {
            m: self.m,
            field: self.field,
            classes: self
                .classes
                .iter()
                .map(|c| c.iter().map(|&s| subset_indices(s)).collect())
                .collect(),
            order: None,
        }
    }

    /// Stratification of K^m by support size.
    pub fn by_cardinality(m: usize, field: Field) -> Self {
        let mut classes = vec![Vec::new(); m + 1];
        for s in 0..(1u64 << m) {
            classes[s.count_ones() as usize].push(s);
        }
        Self::from_checked(m, field, classes)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class(&self, a: usize) -> &[Subset] {
        &self.classes[a]
    }

    pub fn classes(&self) -> &[Vec<Subset>] {
        &self.classes
    }

    pub fn class_of(&self, s: Subset) -> usize {
        self.class_of[s as usize]
    }

    /// Common size of the members of class `a` (the stratum's dimension over
    /// the field).
    pub fn rank(&self, a: usize) -> usize {
        self.classes[a][0].count_ones() as usize
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.le[a][b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.le[a][b]
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.le[a][b] || self.le[b][a]
    }

    /// The class containing {1..m}; it is the unique maximum.
    pub fn top(&self) -> usize {
        self.class_of(((1u64 << self.m) - 1) as Subset)
    }

    /// Classes at or above `a`.
    pub fn upper_set(&self, a: usize) -> Vec<usize> {
        (0..self.num_classes()).filter(|&b| self.le[a][b]).collect()
    }

    /// Iterated minimal elements.
    pub fn layers(&self) -> Vec<Vec<usize>> {
        let mut remaining: BTreeSet<usize> = (0..self.num_classes()).collect();
        let mut layers = Vec::new();
        while !remaining.is_empty() {
            let layer: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|&b| !remaining.iter().any(|&a| self.lt(a, b)))
                .collect();
            for x in &layer {
                remaining.remove(x);
            }
            layers.push(layer);
        }
        layers
    }

    /// Support and class of a point.
    pub fn stratum_of<T: Coordinate>(&self, point: &[T]) -> Result<(usize, Subset)> {
        if point.len() != self.m {
            return Err(Error::Dimension(format!("point has {} coordinates, expected {}", point.len(), self.m)));
        }
        let s = support_of(point);
        Ok((self.class_of(s), s))
    }

    pub(crate) fn check_class(&self, a: usize) -> Result<()> {
        if a >= self.num_classes() {
            return Err(Error::Order(format!("no class {a}")));
        }
        Ok(())
    }
}

fn json_classes(json: &StratificationJson) -> Result<Vec<Vec<Subset>>> {
    json.classes
        .iter()
        .map(|c| {
            c.iter()
                .map(|s| {
                    if let Some(&bad) = s.iter().find(|&&i| i == 0 || i as usize > json.m.min(63)) {
                        return Err(Error::InvalidStratification(format!("index {bad} outside 1..={}", json.m)));
                    }
                    let set: BTreeSet<u32> = s.iter().copied().collect();
                    if set.len() != s.len() {
                        return Err(Error::InvalidStratification(format!("subset {s:?} repeats an index")));
                    }
                    Ok(subset_from_indices(s))
                })
                .collect()
        })
        .collect()
}

/// Validation of the wire form; malformed subsets become violations.
pub fn validate_json(json: &StratificationJson) -> ValidationReport {
    match json_classes(json) {
        Ok(classes) => validate(json.m, &classes, json.order.as_deref()),
        Err(e) => ValidationReport {
            valid: false,
            m: json.m,
            classes: json.classes.len(),
            violations: vec![violation("range", e.to_string())],
            order: vec![],
        },
    }
}

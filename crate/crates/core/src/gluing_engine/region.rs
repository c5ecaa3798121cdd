use std::collections::HashSet;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{format_q, qi, Q};

use super::model::StratifiedModel;

/// Open interval with rational or infinite ends.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "opt_q")]
    pub lo: Option<Q>,
    #[serde(with = "opt_q")]
    pub hi: Option<Q>,
}

mod opt_q {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::arith::{format_q, parse_q, Q};

    pub fn serialize<S: Serializer>(v: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(q) => s.serialize_str(&format_q(q)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
        let raw = Option::<serde_json::Value>::deserialize(d)?;
        match raw {
            None | Some(serde_json::Value::Null) => Ok(None),
            Some(serde_json::Value::String(s)) => parse_q(&s).map(Some).map_err(serde::de::Error::custom),
            Some(serde_json::Value::Number(n)) => parse_q(&n.to_string()).map(Some).map_err(serde::de::Error::custom),
            Some(other) => Err(serde::de::Error::custom(format!("bad bound {other}"))),
        }
    }
}

impl Interval {
    pub fn all() -> Self {
        Self { lo: None, hi: None }
    }

    pub fn new(lo: Q, hi: Q) -> Self {
        Self { lo: Some(lo), hi: Some(hi) }
    }

    pub fn above(lo: Q) -> Self {
        Self { lo: Some(lo), hi: None }
    }

    pub fn below(hi: Q) -> Self {
        Self { lo: None, hi: Some(hi) }
    }

    /// (-r, r)
    pub fn symmetric(r: &Q) -> Self {
        Self::new(-r.clone(), r.clone())
    }

    pub fn contains(&self, x: &Q) -> bool {
        self.lo.as_ref().is_none_or(|lo| lo < x) && self.hi.as_ref().is_none_or(|hi| x < hi)
    }

    pub fn is_empty(&self) -> bool {
        matches!((&self.lo, &self.hi), (Some(lo), Some(hi)) if lo >= hi)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let lo = match (&self.lo, &other.lo) {
            (Some(a), Some(b)) => Some(a.max(b).clone()),
            (a, b) => a.clone().or_else(|| b.clone()),
        };
        let hi = match (&self.hi, &other.hi) {
            (Some(a), Some(b)) => Some(a.min(b).clone()),
            (a, b) => a.clone().or_else(|| b.clone()),
        };
        Self { lo, hi }
    }

    /// sup of x^2 over the closure; None when unbounded.
    pub fn sup_sqr(&self) -> Option<Q> {
        let (lo, hi) = (self.lo.as_ref()?, self.hi.as_ref()?);
        Some((lo * lo).max(hi * hi))
    }

    /// inf of |x| over the interval.
    pub fn inf_abs(&self) -> Q {
        if self.contains(&Q::zero()) {
            return Q::zero();
        }
        match (&self.lo, &self.hi) {
            (Some(lo), _) if !lo.is_negative() => lo.clone(),
            (_, Some(hi)) => hi.abs(),
            _ => Q::zero(),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lo = self.lo.as_ref().map_or("-inf".to_string(), format_q);
        let hi = self.hi.as_ref().map_or("inf".to_string(), format_q);
        write!(f, "({lo}, {hi})")
    }
}

/// Open axis-aligned box in the real coordinates of V.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RBox {
    pub axes: Vec<Interval>,
}

impl RBox {
    pub fn whole(axes: usize) -> Self {
        Self { axes: vec![Interval::all(); axes] }
    }

    pub fn contains(&self, z: &[Q]) -> bool {
        self.axes.iter().zip(z).all(|(i, x)| i.contains(x))
    }

    pub fn is_empty(&self) -> bool {
        self.axes.iter().any(Interval::is_empty)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        Self { axes: self.axes.iter().zip(&other.axes).map(|(a, b)| a.intersect(b)).collect() }
    }
}

impl fmt::Display for RBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.axes.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// Finite union of open boxes, intersected with one stratum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub stratum: usize,
    pub boxes: Vec<RBox>,
}

impl Region {
    pub fn whole(stratum: usize, axes: usize) -> Self {
        Self { stratum, boxes: vec![RBox::whole(axes)] }
    }

    pub fn from_boxes(stratum: usize, boxes: Vec<RBox>) -> Self {
        Self { stratum, boxes: boxes.into_iter().filter(|b| !b.is_empty()).collect() }
    }

    pub fn is_whole(&self) -> bool {
        self.boxes.iter().any(|b| b.axes.iter().all(|i| i.lo.is_none() && i.hi.is_none()))
    }

    pub fn contains(&self, model: &StratifiedModel, z: &[Q]) -> bool {
        model.class_of_point(z) == self.stratum && self.boxes.iter().any(|b| b.contains(z))
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut boxes = Vec::new();
        for a in &self.boxes {
            for b in &other.boxes {
                let c = a.intersect(b);
                if !c.is_empty() {
                    boxes.push(c);
                }
            }
        }
        Self { stratum: self.stratum, boxes }
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut boxes = self.boxes.clone();
        for b in &other.boxes {
            if !boxes.contains(b) {
                boxes.push(b.clone());
            }
        }
        Self { stratum: self.stratum, boxes }
    }

    /// A point of this region but not of `other`, if one exists.
    pub fn difference_witness(&self, other: &Region, model: &StratifiedModel) -> Option<Vec<Q>> {
        if self.stratum != other.stratum {
            return self.sample_points(model, 1).into_iter().next();
        }
        let grid = Grid::new(model.axes(), self.boxes.iter().chain(&other.boxes));
        let within: Vec<Ranges> = self.boxes.iter().filter_map(|b| grid.ranges(b)).collect();
        let avoid: Vec<Ranges> = other.boxes.iter().filter_map(|b| grid.ranges(b)).collect();
        for &s in model.strat().class(self.stratum) {
            let domains = grid.support_domains(model, s, None);
            if let Some(cell) = find_cell(&domains, Some(&within), &avoid) {
                return Some(grid.witness(model, &cell));
            }
        }
        None
    }

    pub fn is_subset_of(&self, other: &Region, model: &StratifiedModel) -> bool {
        self.difference_witness(other, model).is_none()
    }

    /// A point of M_alpha outside the region whose cell closure meets a lower
    /// stratum. None means the region is of boundary type.
    pub fn boundary_witness(&self, model: &StratifiedModel) -> Option<Vec<Q>> {
        let grid = Grid::new(model.axes(), self.boxes.iter());
        let avoid: Vec<Ranges> = self.boxes.iter().filter_map(|b| grid.ranges(b)).collect();
        for &s in model.strat().class(self.stratum) {
            for k in 0..model.strat().m() {
                if s >> k & 1 == 0 {
                    continue;
                }
                let domains = grid.support_domains(model, s, Some(k));
                if let Some(cell) = find_cell(&domains, None, &avoid) {
                    return Some(grid.witness(model, &cell));
                }
            }
        }
        None
    }

    pub fn is_boundary_type(&self, model: &StratifiedModel) -> bool {
        self.boundary_witness(model).is_none()
    }

    /// Deterministic points of the region: one per realizable cell pattern
    /// of each box, at most `per_box` per box.
    pub fn sample_points(&self, model: &StratifiedModel, per_box: usize) -> Vec<Vec<Q>> {
        let mut out = Vec::new();
        for b in &self.boxes {
            let grid = Grid::new(model.axes(), std::iter::once(b));
            let Some(ranges) = grid.ranges(b) else { continue };
            let mut taken = 0;
            for &s in model.strat().class(self.stratum) {
                let domains = grid.support_domains(model, s, None);
                let mut cells = Vec::new();
                enumerate_cells(&domains, &ranges, per_box - taken, &mut Vec::new(), &mut cells);
                for cell in cells {
                    out.push(grid.witness(model, &cell));
                    taken += 1;
                }
                if taken >= per_box {
                    break;
                }
            }
        }
        out
    }
}

/// Per-coordinate allowed piece tuples (one piece index per real axis).
pub(crate) type Domain = Vec<Vec<usize>>;
/// Per-axis inclusive piece-index ranges of a box.
pub(crate) type Ranges = Vec<(usize, usize)>;

/// Coordinate compression: each axis is cut at the box bounds and 0.
/// Piece 2i+1 is the point b_i, piece 2i the open gap below it, piece 2n the
/// gap above the last cut.
pub(crate) struct Grid {
    breaks: Vec<Vec<Q>>,
}

impl Grid {
    pub(crate) fn new<'a>(axes: usize, boxes: impl Iterator<Item = &'a RBox>) -> Self {
        let mut breaks = vec![vec![Q::zero()]; axes];
        for b in boxes {
            for (a, iv) in b.axes.iter().enumerate() {
                breaks[a].extend(iv.lo.iter().cloned());
                breaks[a].extend(iv.hi.iter().cloned());
            }
        }
        for list in &mut breaks {
            list.sort();
            list.dedup();
        }
        Self { breaks }
    }

    fn pieces(&self, axis: usize) -> usize {
        2 * self.breaks[axis].len() + 1
    }

    fn zero_piece(&self, axis: usize) -> usize {
        2 * self.breaks[axis].binary_search(&Q::zero()).unwrap() + 1
    }

    pub(crate) fn ranges(&self, b: &RBox) -> Option<Ranges> {
        let mut out = Vec::with_capacity(b.axes.len());
        for (a, iv) in b.axes.iter().enumerate() {
            let start = match &iv.lo {
                None => 0,
                Some(lo) => 2 * self.breaks[a].binary_search(lo).unwrap() + 2,
            };
            let end = match &iv.hi {
                None => self.pieces(a) - 1,
                Some(hi) => 2 * self.breaks[a].binary_search(hi).unwrap(),
            };
            if start > end {
                return None;
            }
            out.push((start, end));
        }
        Some(out)
    }

    /// Piece tuples for each coordinate so that the support is exactly `s`.
    /// With `vanish = Some(k)`, coordinate k is further restricted to cells
    /// whose closure reaches k = 0.
    pub(crate) fn support_domains(&self, model: &StratifiedModel, s: u64, vanish: Option<usize>) -> Vec<Domain> {
        let d = model.d();
        (0..model.strat().m())
            .map(|j| {
                let axes: Vec<usize> = (j * d..j * d + d).collect();
                let zero: Vec<usize> = axes.iter().map(|&a| self.zero_piece(a)).collect();
                if s >> j & 1 == 0 {
                    return vec![zero];
                }
                let choices: Vec<Vec<usize>> = axes
                    .iter()
                    .map(|&a| {
                        let z = self.zero_piece(a);
                        if vanish == Some(j) {
                            (z - 1..=z + 1).collect()
                        } else {
                            (0..self.pieces(a)).collect()
                        }
                    })
                    .collect();
                let mut tuples = vec![Vec::new()];
                for c in &choices {
                    tuples = tuples
                        .into_iter()
                        .flat_map(|t: Vec<usize>| {
                            c.iter().map(move |&p| {
                                let mut t = t.clone();
                                t.push(p);
                                t
                            })
                        })
                        .collect();
                }
                tuples.retain(|t| *t != zero);
                tuples
            })
            .collect()
    }

    fn value(&self, axis: usize, piece: usize) -> Q {
        let b = &self.breaks[axis];
        if piece % 2 == 1 {
            return b[piece / 2].clone();
        }
        let i = piece / 2;
        match (i.checked_sub(1).map(|k| &b[k]), b.get(i)) {
            (Some(lo), Some(hi)) => (lo + hi) / qi(2),
            (Some(lo), None) => lo + Q::one(),
            (None, Some(hi)) => hi - Q::one(),
            (None, None) => Q::zero(),
        }
    }

    pub(crate) fn witness(&self, model: &StratifiedModel, cell: &[Vec<usize>]) -> Vec<Q> {
        let d = model.d();
        let mut z = Vec::with_capacity(cell.len() * d);
        for (j, tuple) in cell.iter().enumerate() {
            for (k, &p) in tuple.iter().enumerate() {
                z.push(self.value(j * d + k, p));
            }
        }
        z
    }
}

fn tuple_in(ranges: &Ranges, coord: usize, tuple: &[usize]) -> bool {
    let d = tuple.len();
    tuple.iter().enumerate().all(|(k, &p)| {
        let (lo, hi) = ranges[coord * d + k];
        lo <= p && p <= hi
    })
}

/// Searches for a cell drawn from `domains` that lies in one of `within`
/// (any cell if None) and in none of `avoid`.
pub(crate) fn find_cell(domains: &[Domain], within: Option<&[Ranges]>, avoid: &[Ranges]) -> Option<Vec<Vec<usize>>> {
    let n = domains.len();
    // covers[b][c]: avoid box b contains every tuple allowed at coordinate c
    let covers: Vec<Vec<bool>> = avoid
        .iter()
        .map(|r| (0..n).map(|c| domains[c].iter().all(|t| tuple_in(r, c, t))).collect())
        .collect();
    let suffix: Vec<Vec<bool>> = covers
        .iter()
        .map(|row| {
            let mut s = vec![true; n + 1];
            for c in (0..n).rev() {
                s[c] = s[c + 1] && row[c];
            }
            s
        })
        .collect();

    #[allow(clippy::too_many_arguments)]
    fn rec(
        c: usize,
        domains: &[Domain],
        within: Option<&[Ranges]>,
        avoid: &[Ranges],
        suffix: &[Vec<bool>],
        cand_in: &[usize],
        cand_out: &[usize],
        cell: &mut Vec<Vec<usize>>,
        failed: &mut HashSet<(usize, Vec<usize>, Vec<usize>)>,
    ) -> bool {
        if within.is_some() && cand_in.is_empty() {
            return false;
        }
        if cand_out.iter().any(|&b| suffix[b][c]) {
            return false;
        }
        if c == domains.len() {
            return true;
        }
        if cand_out.is_empty() {
            // nothing left to avoid: complete greedily
            let mut done = true;
            for (k, dom) in domains.iter().enumerate().skip(c) {
                let pick = match within {
                    None => dom.first(),
                    Some(w) => dom.iter().find(|t| tuple_in(&w[cand_in[0]], k, t)),
                };
                match pick {
                    Some(t) => cell.push(t.clone()),
                    None => {
                        done = false;
                        break;
                    }
                }
            }
            if done {
                return true;
            }
            cell.truncate(c);
            if within.is_some_and(|_| cand_in.len() > 1) {
                // fall through to the full search over remaining candidates
            } else {
                return false;
            }
        }
        // the rest of the search depends only on the surviving candidates
        let key = (c, cand_in.to_vec(), cand_out.to_vec());
        if failed.contains(&key) {
            return false;
        }
        for t in &domains[c] {
            let next_in: Vec<usize> = match within {
                None => Vec::new(),
                Some(w) => cand_in.iter().copied().filter(|&b| tuple_in(&w[b], c, t)).collect(),
            };
            let next_out: Vec<usize> = cand_out.iter().copied().filter(|&b| tuple_in(&avoid[b], c, t)).collect();
            cell.push(t.clone());
            if rec(c + 1, domains, within, avoid, suffix, &next_in, &next_out, cell, failed) {
                return true;
            }
            cell.pop();
        }
        failed.insert(key);
        false
    }

    let cand_in: Vec<usize> = within.map_or(Vec::new(), |w| (0..w.len()).collect());
    let cand_out: Vec<usize> = (0..avoid.len()).collect();
    let mut cell = Vec::with_capacity(n);
    if rec(0, domains, within, avoid, &suffix, &cand_in, &cand_out, &mut cell, &mut HashSet::new()) {
        Some(cell)
    } else {
        None
    }
}

fn enumerate_cells(domains: &[Domain], ranges: &Ranges, limit: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
    if out.len() >= limit {
        return;
    }
    let c = cur.len();
    if c == domains.len() {
        out.push(cur.clone());
        return;
    }
    for t in &domains[c] {
        if tuple_in(ranges, c, t) {
            cur.push(t.clone());
            enumerate_cells(domains, ranges, limit, cur, out);
            cur.pop();
            if out.len() >= limit {
                return;
            }
        }
    }
}

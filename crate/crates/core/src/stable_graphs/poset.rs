use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::Serialize;

use super::canon::{canonical_form, GraphClass};
use super::enumerate::enumerate_stable_graphs;
use super::graph::GraphJson;
use crate::error::Result;

/// Stable-graph classes of type (g, n) ordered by contraction.
///
/// `a < b` when `b` is a contraction of `a` by a nonempty edge set, so the
/// zero-edge graph is the unique maximum. Elements are sorted by edge count,
/// so index 0 is the top.
#[derive(Clone, Debug)]
pub struct StrataPoset {
    pub g: u32,
    pub n: u32,
    elements: Vec<GraphClass>,
    /// (lower, upper) pairs related by a one-edge contraction.
    covers: Vec<(usize, usize)>,
    /// above[i] = indices strictly above i, as a bitset.
    above: Vec<Vec<u64>>,
    layers: Vec<Vec<usize>>,
}

impl StrataPoset {
    pub fn elements(&self) -> &[GraphClass] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    pub fn index_of(&self, class: &GraphClass) -> Option<usize> {
        self.elements.binary_search_by(|c| order_key(c).cmp(&order_key(class))).ok()
    }

    /// Strict order: `a` is a proper degeneration of `b`.
    pub fn lt(&self, a: usize, b: usize) -> bool {
        self.above[a][b / 64] >> (b % 64) & 1 == 1
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        a == b || self.lt(a, b)
    }

    /// Maximal elements; a well-formed poset has exactly one.
    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&a| self.above[a].iter().all(|w| *w == 0)).collect()
    }

    pub fn top(&self) -> usize {
        0
    }

    pub fn dimension(&self, i: usize) -> i64 {
        self.elements[i].representative().dimension().expect("enumerated graphs are stable")
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph strata_g{}_n{} {{", self.g, self.n);
        let _ = writeln!(s, "  rankdir=BT;");
        let _ = writeln!(s, "  node [shape=box, fontname=\"monospace\"];");
        for (i, c) in self.elements.iter().enumerate() {
            let _ = writeln!(
                s,
                "  n{i} [label=\"{}\\ndim {}\"];",
                c.representative(),
                self.dimension(i)
            );
        }
        for &(lo, hi) in &self.covers {
            let _ = writeln!(s, "  n{lo} -> n{hi};");
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            g: self.g,
            n: self.n,
            elements: self
                .elements
                .iter()
                .enumerate()
                .map(|(i, c)| ElementJson {
                    index: i,
                    key: c.key(),
                    edges: c.representative().num_edges(),
                    dimension: self.dimension(i),
                    graph: c.representative().to_json(),
                })
                .collect(),
            covers: self.covers.iter().map(|&(a, b)| [a, b]).collect(),
            layers: self.layers.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ElementJson {
    pub index: usize,
    pub key: String,
    pub edges: usize,
    pub dimension: i64,
    pub graph: GraphJson,
}

#[derive(Clone, Debug, Serialize)]
pub struct PosetJson {
    pub g: u32,
    pub n: u32,
    pub elements: Vec<ElementJson>,
    pub covers: Vec<[usize; 2]>,
    pub layers: Vec<Vec<usize>>,
}

fn order_key(c: &GraphClass) -> (usize, &[u32]) {
    (c.representative().num_edges(), c.encoding())
}

pub fn build_poset(g: u32, n: u32) -> Result<StrataPoset> {
    let elements = enumerate_stable_graphs(g, n)?;
    let index: HashMap<&GraphClass, usize> = elements.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut covers = BTreeSet::new();
    for (i, c) in elements.iter().enumerate() {
        let rep = c.representative();
        for e in 0..rep.num_edges() {
            let (contracted, _) = rep.contract(&[e])?;
            let j = index[&canonical_form(&contracted)];
            covers.insert((i, j));
        }
    }
    let covers: Vec<(usize, usize)> = covers.into_iter().collect();

    // Upper sets, filled from the top down: a cover target has fewer edges,
    // hence a smaller index.
    let words = elements.len().div_ceil(64);
    let mut above = vec![vec![0u64; words]; elements.len()];
    let mut up_edges: Vec<Vec<usize>> = vec![Vec::new(); elements.len()];
    for &(lo, hi) in &covers {
        up_edges[lo].push(hi);
    }
    for i in 0..elements.len() {
        let mut set = vec![0u64; words];
        for &j in &up_edges[i] {
            debug_assert!(j < i);
            set[j / 64] |= 1 << (j % 64);
            for (w, x) in set.iter_mut().zip(&above[j]) {
                *w |= x;
            }
        }
        above[i] = set;
    }

    let mut poset = StrataPoset { g, n, elements, covers, above, layers: Vec::new() };
    poset.layers = compute_layers(&poset);
    Ok(poset)
}

/// S_1 = minimal elements, S_k = minimal elements of what remains. An
/// element leaves in round 1 + (longest cover chain below it).
fn compute_layers(p: &StrataPoset) -> Vec<Vec<usize>> {
    let mut below: Vec<Vec<usize>> = vec![Vec::new(); p.len()];
    for &(lo, hi) in &p.covers {
        below[hi].push(lo);
    }
    // lower elements have more edges, hence larger indices
    let mut height = vec![0usize; p.len()];
    for i in (0..p.len()).rev() {
        height[i] = below[i].iter().map(|&lo| height[lo] + 1).max().unwrap_or(0);
    }
    let mut layers = vec![Vec::new(); height.iter().max().map_or(0, |h| h + 1)];
    for (i, &h) in height.iter().enumerate() {
        layers[h].push(i);
    }
    layers
}

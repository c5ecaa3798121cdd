use std::collections::BTreeMap;

use super::canon::{color_cells, for_each_cell_ordering};
use super::graph::StableGraph;

/// A graph automorphism acting on vertices and half-edges. Tails are fixed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Automorphism {
    pub vertex_perm: Vec<usize>,
    pub half_edge_perm: Vec<usize>,
}

impl Automorphism {
    pub fn identity(g: &StableGraph) -> Self {
        Self {
            vertex_perm: (0..g.num_vertices()).collect(),
            half_edge_perm: (0..2 * g.num_edges()).collect(),
        }
    }

    /// Induced permutation of edges.
    pub fn edge_perm(&self) -> Vec<usize> {
        (0..self.half_edge_perm.len() / 2).map(|e| self.half_edge_perm[2 * e] / 2).collect()
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            vertex_perm: other.vertex_perm.iter().map(|&v| self.vertex_perm[v]).collect(),
            half_edge_perm: other.half_edge_perm.iter().map(|&h| self.half_edge_perm[h]).collect(),
        }
    }

    /// Checks that the pair of permutations really is an automorphism of `g`.
    pub fn is_automorphism_of(&self, g: &StableGraph) -> bool {
        let nh = 2 * g.num_edges();
        if self.vertex_perm.len() != g.num_vertices() || self.half_edge_perm.len() != nh {
            return false;
        }
        if !is_permutation(&self.vertex_perm) || !is_permutation(&self.half_edge_perm) {
            return false;
        }
        let vertices_ok = (0..g.num_vertices())
            .all(|v| g.vertex_genus(v) == g.vertex_genus(self.vertex_perm[v]));
        let tails_ok = g.tails().iter().all(|&v| self.vertex_perm[v] == v);
        let incidence_ok = (0..nh).all(|h| {
            let img = self.half_edge_perm[h];
            g.half_edge_vertex(img) == self.vertex_perm[g.half_edge_vertex(h)]
                && self.half_edge_perm[h ^ 1] == img ^ 1
        });
        vertices_ok && tails_ok && incidence_ok
    }
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
}

/// Automorphism group given by generators together with its order.
#[derive(Clone, Debug)]
pub struct AutGroup {
    pub order: u64,
    pub generators: Vec<Automorphism>,
}

/// Vertex permutations that preserve genus, tails and edge multiplicities.
pub fn vertex_automorphisms(g: &StableGraph) -> Vec<Vec<usize>> {
    let nv = g.num_vertices();
    let cells = color_cells(g);
    let mult = g.multiplicities();
    let position: Vec<usize> = cells.iter().flatten().copied().collect();
    let mut out = Vec::new();
    for_each_cell_ordering(&cells, |order| {
        // vertex position[k] maps to order[k]
        let mut sigma = vec![0; nv];
        for k in 0..nv {
            sigma[position[k]] = order[k];
        }
        let fixes_tails = g.tails().iter().all(|&v| sigma[v] == v);
        let ok = fixes_tails
            && (0..nv).all(|v| g.vertex_genus(v) == g.vertex_genus(sigma[v]))
            && (0..nv).all(|u| (u..nv).all(|v| mult[u][v] == mult[sigma[u]][sigma[v]]));
        if ok {
            out.push(sigma);
        }
    });
    out.sort();
    out
}

/// Lifts a vertex automorphism to half-edges: the k-th edge between u and v
/// goes to the k-th edge between sigma(u) and sigma(v), orientation kept.
fn lift(g: &StableGraph, sigma: &[usize]) -> Automorphism {
    let mut buckets: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (e, &[a, b]) in g.edges().iter().enumerate() {
        buckets.entry((a.min(b), a.max(b))).or_default().push(e);
    }
    let mut half = vec![0; 2 * g.num_edges()];
    for (&(a, b), list) in &buckets {
        let (sa, sb) = (sigma[a], sigma[b]);
        let target = &buckets[&(sa.min(sb), sa.max(sb))];
        for (k, &e) in list.iter().enumerate() {
            let f = target[k];
            for side in 0..2 {
                let v = g.edges()[e][side];
                let img = sigma[v];
                // pick the half-edge of f sitting at img; for loops keep the side
                let fside = if g.edges()[f][side] == img { side } else { 1 - side };
                half[2 * e + side] = 2 * f + fside;
            }
        }
    }
    Automorphism { vertex_perm: sigma.to_vec(), half_edge_perm: half }
}

fn factorial(k: u64) -> u64 {
    (1..=k).product()
}

/// The automorphism group of `g`, fixing every tail.
///
/// Order: sum over vertex automorphisms is |Aut_V| times the edge-local
/// factor prod k_uv! * prod (k_vv! 2^k_vv).
pub fn automorphisms(g: &StableGraph) -> AutGroup {
    let vertex_auts = vertex_automorphisms(g);
    let mult = g.multiplicities();
    let nv = g.num_vertices();
    let mut local = 1u64;
    for u in 0..nv {
        local *= factorial(mult[u][u] as u64) << mult[u][u];
        for v in u + 1..nv {
            local *= factorial(mult[u][v] as u64);
        }
    }
    let order = vertex_auts.len() as u64 * local;

    let mut generators = Vec::new();
    for sigma in &vertex_auts {
        if sigma.iter().enumerate().any(|(i, &s)| i != s) {
            generators.push(lift(g, sigma));
        }
    }
    let mut buckets: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (e, &[a, b]) in g.edges().iter().enumerate() {
        buckets.entry((a.min(b), a.max(b))).or_default().push(e);
    }
    for (&(a, b), list) in &buckets {
        for w in list.windows(2) {
            let mut aut = Automorphism::identity(g);
            let (e, f) = (w[0], w[1]);
            // align f's orientation with e's
            let same = g.edges()[e] == g.edges()[f];
            aut.half_edge_perm[2 * e] = if same { 2 * f } else { 2 * f + 1 };
            aut.half_edge_perm[2 * e + 1] = if same { 2 * f + 1 } else { 2 * f };
            aut.half_edge_perm[2 * f] = if same { 2 * e } else { 2 * e + 1 };
            aut.half_edge_perm[2 * f + 1] = if same { 2 * e + 1 } else { 2 * e };
            generators.push(aut);
        }
        if a == b {
            for &e in list {
                let mut aut = Automorphism::identity(g);
                aut.half_edge_perm.swap(2 * e, 2 * e + 1);
                generators.push(aut);
            }
        }
    }
    AutGroup { order, generators }
}

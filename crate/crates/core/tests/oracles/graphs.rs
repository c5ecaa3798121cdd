//! Naive stable-graph generator used as a cross-check.
//!
//! Starts from the one-vertex graph and repeatedly degenerates: either trade a
//! unit of vertex genus for a loop, or split a vertex in two joined by a new
//! edge. Isomorphic copies are removed by trying every vertex bijection.

use std::collections::HashMap;

#[derive(Clone, Debug)]
pub struct RawGraph {
    pub genera: Vec<u32>,
    pub edges: Vec<(usize, usize)>,
    pub tails: Vec<usize>,
}

impl RawGraph {
    fn mult(&self) -> Vec<Vec<u32>> {
        let nv = self.genera.len();
        let mut m = vec![vec![0; nv]; nv];
        for &(a, b) in &self.edges {
            m[a][b] += 1;
            if a != b {
                m[b][a] += 1;
            }
        }
        m
    }

    fn invariant(&self) -> (usize, usize, Vec<(u32, Vec<usize>, usize, u32)>) {
        let m = self.mult();
        let mut per: Vec<_> = (0..self.genera.len())
            .map(|v| {
                let tails: Vec<usize> = (0..self.tails.len()).filter(|&t| self.tails[t] == v).collect();
                let deg: u32 = m[v].iter().sum::<u32>() + m[v][v];
                (self.genera[v], tails, deg as usize, m[v][v])
            })
            .collect();
        per.sort();
        (self.genera.len(), self.edges.len(), per)
    }
}

fn next_perm(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

pub fn isomorphic(a: &RawGraph, b: &RawGraph) -> bool {
    let nv = a.genera.len();
    if nv != b.genera.len() || a.edges.len() != b.edges.len() || a.tails.len() != b.tails.len() {
        return false;
    }
    let (ma, mb) = (a.mult(), b.mult());
    let mut p: Vec<usize> = (0..nv).collect();
    loop {
        if (0..nv).all(|v| a.genera[v] == b.genera[p[v]])
            && (0..a.tails.len()).all(|t| p[a.tails[t]] == b.tails[t])
            && (0..nv).all(|u| (0..nv).all(|v| ma[u][v] == mb[p[u]][p[v]]))
        {
            return true;
        }
        if !next_perm(&mut p) {
            return false;
        }
    }
}

fn stable_vertex(g: u32, valence: usize) -> bool {
    2 * g as usize + valence > 2
}

fn degenerations(x: &RawGraph) -> Vec<RawGraph> {
    let mut out = Vec::new();
    let nv = x.genera.len();
    for v in 0..nv {
        if x.genera[v] >= 1 {
            let mut y = x.clone();
            y.genera[v] -= 1;
            y.edges.push((v, v));
            out.push(y);
        }
        // items at v: tails, then half-edges (edge index, side)
        let tails: Vec<usize> = (0..x.tails.len()).filter(|&t| x.tails[t] == v).collect();
        let mut halves = Vec::new();
        for (e, &(a, b)) in x.edges.iter().enumerate() {
            if a == v {
                halves.push((e, 0));
            }
            if b == v {
                halves.push((e, 1));
            }
        }
        let items = tails.len() + halves.len();
        for mask in 0u32..(1 << items) {
            let moved = mask.count_ones() as usize;
            for g1 in 0..=x.genera[v] {
                let g2 = x.genera[v] - g1;
                if !stable_vertex(g1, items - moved + 1) || !stable_vertex(g2, moved + 1) {
                    continue;
                }
                let mut y = x.clone();
                let w = nv;
                y.genera[v] = g1;
                y.genera.push(g2);
                for (k, &t) in tails.iter().enumerate() {
                    if mask >> k & 1 == 1 {
                        y.tails[t] = w;
                    }
                }
                for (k, &(e, side)) in halves.iter().enumerate() {
                    if mask >> (tails.len() + k) & 1 == 1 {
                        if side == 0 {
                            y.edges[e].0 = w;
                        } else {
                            y.edges[e].1 = w;
                        }
                    }
                }
                y.edges.push((v, w));
                out.push(y);
            }
        }
    }
    out
}

/// All stable graphs of type (g, n) up to isomorphism.
pub fn brute_force_graphs(g: u32, n: u32) -> Vec<RawGraph> {
    let top = RawGraph { genera: vec![g], edges: vec![], tails: vec![0; n as usize] };
    let mut all = vec![top.clone()];
    let mut level = vec![top];
    while !level.is_empty() {
        let mut buckets: HashMap<_, Vec<RawGraph>> = HashMap::new();
        let mut next = Vec::new();
        for x in &level {
            for y in degenerations(x) {
                let bucket = buckets.entry(y.invariant()).or_default();
                if !bucket.iter().any(|z| isomorphic(z, &y)) {
                    bucket.push(y.clone());
                    next.push(y);
                }
            }
        }
        all.extend(next.iter().cloned());
        level = next;
    }
    all
}

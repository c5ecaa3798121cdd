use std::collections::BTreeSet;

use super::canon::{canonical_form, GraphClass};
use super::graph::StableGraph;
use crate::error::{Error, Result};

pub fn check_signature(g: u32, n: u32) -> Result<()> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::UnstableSignature { g, n });
    }
    Ok(())
}

/// All isomorphism classes of stable graphs of type (g, n), sorted by edge
/// count and then by encoding.
///
/// Vertex data (genus weights, tail placement, half-edge degrees) are chosen
/// first with some symmetry breaking among interchangeable vertices; then every
/// connected multigraph with that degree sequence is built and canonicalized.
pub fn enumerate_stable_graphs(g: u32, n: u32) -> Result<Vec<GraphClass>> {
    check_signature(g, n)?;
    let max_edges = 3 * g + n - 3;
    let mut found: BTreeSet<GraphClass> = BTreeSet::new();
    for e in 0..=max_edges {
        for b1 in 0..=g.min(e) {
            let nv = (e - b1 + 1) as usize;
            for genera in genus_vectors(g - b1, nv) {
                for tails in tail_placements(&genera, n as usize) {
                    degree_sequences(&genera, &tails, e as usize, &mut |degrees| {
                        multigraphs(degrees, &mut |edges| {
                            let graph = StableGraph::new(genera.clone(), edges.to_vec(), tails.clone())
                                .expect("indices in range");
                            if graph.is_connected() {
                                found.insert(canonical_form(&graph));
                            }
                        });
                    });
                }
            }
        }
    }
    let mut out: Vec<GraphClass> = found.into_iter().collect();
    out.sort_by(|a, b| {
        a.representative()
            .num_edges()
            .cmp(&b.representative().num_edges())
            .then_with(|| a.cmp(b))
    });
    Ok(out)
}

/// Non-increasing vectors of length `len` summing to `total`.
fn genus_vectors(total: u32, len: usize) -> Vec<Vec<u32>> {
    fn rec(left: u32, max: u32, len: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == len {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for x in (0..=left.min(max)).rev() {
            cur.push(x);
            rec(left - x, x, len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, total, len, &mut Vec::new(), &mut out);
    out
}

/// Places labels 1..=n on vertices. Vertices of equal genus form a group; a
/// label may go to an already used vertex or to the first unused vertex of a
/// group, so unused vertices of a group are always a tail-free suffix.
fn tail_placements(genera: &[u32], n: usize) -> Vec<Vec<usize>> {
    let mut groups: Vec<(usize, usize)> = Vec::new(); // (start, len)
    for (v, &gv) in genera.iter().enumerate() {
        match groups.last_mut() {
            Some((s, l)) if genera[*s] == gv => *l += 1,
            _ => groups.push((v, 1)),
        }
    }
    fn rec(
        label: usize,
        n: usize,
        groups: &[(usize, usize)],
        used: &mut Vec<usize>,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if label == n {
            out.push(cur.clone());
            return;
        }
        for gi in 0..groups.len() {
            let (start, len) = groups[gi];
            for v in start..start + used[gi] {
                cur.push(v);
                rec(label + 1, n, groups, used, cur, out);
                cur.pop();
            }
            if used[gi] < len {
                cur.push(start + used[gi]);
                used[gi] += 1;
                rec(label + 1, n, groups, used, cur, out);
                used[gi] -= 1;
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    let mut used = vec![0; groups.len()];
    rec(0, n, &groups, &mut used, &mut Vec::new(), &mut out);
    out
}

/// Half-edge degrees meeting stability (and connectivity when there is more
/// than one vertex) summing to twice the edge count. Tail-free vertices of
/// equal genus get non-increasing degrees.
fn degree_sequences(genera: &[u32], tails: &[usize], e: usize, visit: &mut dyn FnMut(&[usize])) {
    let nv = genera.len();
    let mut tail_count = vec![0usize; nv];
    for &v in tails {
        tail_count[v] += 1;
    }
    let lower: Vec<usize> = (0..nv)
        .map(|v| {
            let stable = (3 - (2 * genera[v] as i64 + tail_count[v] as i64)).max(0) as usize;
            let connected = usize::from(nv > 1);
            stable.max(connected)
        })
        .collect();
    let twin = |v: usize| v > 0 && genera[v] == genera[v - 1] && tail_count[v] == 0 && tail_count[v - 1] == 0;
    fn rec(
        v: usize,
        left: usize,
        lower: &[usize],
        twin: &dyn Fn(usize) -> bool,
        cur: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        let nv = lower.len();
        if v == nv {
            if left == 0 {
                visit(cur);
            }
            return;
        }
        let rest: usize = lower[v + 1..].iter().sum();
        if lower[v] + rest > left {
            return;
        }
        let mut hi = left - rest;
        if twin(v) {
            hi = hi.min(cur[v - 1]);
        }
        for d in lower[v]..=hi {
            cur.push(d);
            rec(v + 1, left - d, lower, twin, cur, visit);
            cur.pop();
        }
    }
    rec(0, 2 * e, &lower, &twin, &mut Vec::new(), visit);
}

/// Every loop/multiplicity assignment realizing the degree sequence, as an
/// edge list sorted by endpoints.
fn multigraphs(degrees: &[usize], visit: &mut dyn FnMut(&[[usize; 2]])) {
    let nv = degrees.len();
    let mut residual = degrees.to_vec();
    let mut edges = Vec::new();
    fn row(
        i: usize,
        j: usize,
        residual: &mut Vec<usize>,
        edges: &mut Vec<[usize; 2]>,
        visit: &mut dyn FnMut(&[[usize; 2]]),
    ) {
        let nv = residual.len();
        if i == nv {
            visit(edges);
            return;
        }
        if j == nv {
            if residual[i] == 0 {
                row(i + 1, i + 1, residual, edges, visit);
            }
            return;
        }
        if j == i {
            // loops at i
            for k in 0..=residual[i] / 2 {
                residual[i] -= 2 * k;
                edges.extend(std::iter::repeat_n([i, i], k));
                row(i, i + 1, residual, edges, visit);
                edges.truncate(edges.len() - k);
                residual[i] += 2 * k;
            }
            return;
        }
        let room = residual[i].min(residual[j]);
        if j + 1 == nv && residual[i] > room {
            return;
        }
        for k in 0..=room {
            residual[i] -= k;
            residual[j] -= k;
            edges.extend(std::iter::repeat_n([i, j], k));
            row(i, j + 1, residual, edges, visit);
            edges.truncate(edges.len() - k);
            residual[i] += k;
            residual[j] += k;
        }
    }
    if nv > 0 {
        row(0, 0, &mut residual, &mut edges, visit);
    }
}

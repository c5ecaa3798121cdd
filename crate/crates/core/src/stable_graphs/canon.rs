use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};

use super::graph::StableGraph;

/// Isomorphism class of a stable graph.
///
/// Equality, ordering and hashing use only the canonical encoding. The
/// representative is decoded from the encoding, so isomorphic inputs yield
/// identical representatives.
#[derive(Clone, Debug)]
pub struct GraphClass {
    encoding: Vec<u32>,
    representative: StableGraph,
}

impl GraphClass {
    pub fn encoding(&self) -> &[u32] {
        &self.encoding
    }

    pub fn representative(&self) -> &StableGraph {
        &self.representative
    }

    /// Compact hex rendering of the encoding, handy as a JSON key.
    pub fn key(&self) -> String {
        let parts: Vec<String> = self.encoding.iter().map(|x| format!("{x:x}")).collect();
        parts.join(".")
    }
}

impl PartialEq for GraphClass {
    fn eq(&self, other: &Self) -> bool {
        self.encoding == other.encoding
    }
}

impl Eq for GraphClass {}

impl Hash for GraphClass {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.encoding.hash(state);
    }
}

impl PartialOrd for GraphClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GraphClass {
    fn cmp(&self, other: &Self) -> Ordering {
        self.encoding.cmp(&other.encoding)
    }
}

/// Color refinement: start from (genus, tails, loops, degree) and refine by
/// the multiset of (neighbor color, multiplicity) until stable. Colors are
/// ranks of sorted signatures, hence invariant under relabelling.
pub(crate) fn refined_colors(g: &StableGraph) -> Vec<usize> {
    let nv = g.num_vertices();
    let mult = g.multiplicities();
    let initial: Vec<(u32, Vec<u32>, u32, usize)> = (0..nv)
        .map(|v| (g.vertex_genus(v), g.tails_at(v), mult[v][v], g.half_edge_degree(v)))
        .collect();
    let mut colors = rank(&initial);
    loop {
        let sigs: Vec<(usize, Vec<(usize, u32)>)> = (0..nv)
            .map(|v| {
                let mut nb: Vec<(usize, u32)> = (0..nv)
                    .filter(|&u| u != v && mult[v][u] > 0)
                    .map(|u| (colors[u], mult[v][u]))
                    .collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let next = rank(&sigs);
        let before = colors.iter().max().map_or(0, |m| m + 1);
        let after = next.iter().max().map_or(0, |m| m + 1);
        colors = next;
        if after == before {
            return colors;
        }
    }
}

fn rank<T: Ord + Clone>(items: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = items.to_vec();
    sorted.sort();
    sorted.dedup();
    items.iter().map(|x| sorted.binary_search(x).unwrap()).collect()
}

/// Vertices grouped by refined color, cells in color order.
pub(crate) fn color_cells(g: &StableGraph) -> Vec<Vec<usize>> {
    let colors = refined_colors(g);
    let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (v, c) in colors.into_iter().enumerate() {
        cells.entry(c).or_default().push(v);
    }
    cells.into_values().collect()
}

/// Calls `visit` with every vertex ordering that lists the cells in order and
/// permutes freely within each cell. `order[k]` is the vertex placed at `k`.
pub(crate) fn for_each_cell_ordering(cells: &[Vec<usize>], mut visit: impl FnMut(&[usize])) {
    let mut order: Vec<usize> = cells.iter().flatten().copied().collect();
    let mut starts = Vec::with_capacity(cells.len());
    let mut pos = 0;
    for c in cells {
        starts.push(pos);
        pos += c.len();
    }
    fn recurse(
        cell: usize,
        cells: &[Vec<usize>],
        starts: &[usize],
        order: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if cell == cells.len() {
            visit(order);
            return;
        }
        let start = starts[cell];
        let len = cells[cell].len();
        permute(start, start + len, order, &mut |o: &mut Vec<usize>| {
            recurse(cell + 1, cells, starts, o, visit)
        });
    }
    fn permute(k: usize, end: usize, order: &mut Vec<usize>, f: &mut dyn FnMut(&mut Vec<usize>)) {
        if k + 1 >= end {
            f(order);
            return;
        }
        for i in k..end {
            order.swap(k, i);
            permute(k + 1, end, order, f);
            order.swap(k, i);
        }
    }
    recurse(0, cells, &starts, &mut order, &mut visit);
}

fn encode(g: &StableGraph, mult: &[Vec<u32>], order: &[usize]) -> Vec<u32> {
    let nv = g.num_vertices();
    let mut out = vec![nv as u32, g.num_edges() as u32, g.num_tails() as u32];
    for &v in order {
        let tails = g.tails_at(v);
        out.push(g.vertex_genus(v));
        out.push(tails.len() as u32);
        out.extend(tails);
    }
    for i in 0..nv {
        for j in i..nv {
            out.push(mult[order[i]][order[j]]);
        }
    }
    out
}

fn decode(code: &[u32]) -> StableGraph {
    let (nv, n) = (code[0] as usize, code[2] as usize);
    let mut pos = 3;
    let mut genera = Vec::with_capacity(nv);
    let mut tails = vec![0usize; n];
    for v in 0..nv {
        genera.push(code[pos]);
        let t = code[pos + 1] as usize;
        for &label in &code[pos + 2..pos + 2 + t] {
            tails[label as usize - 1] = v;
        }
        pos += 2 + t;
    }
    let mut edges = Vec::new();
    for i in 0..nv {
        for j in i..nv {
            for _ in 0..code[pos] {
                edges.push([i, j]);
            }
            pos += 1;
        }
    }
    StableGraph::new(genera, edges, tails).expect("decoded encoding is well formed")
}

/// Lexicographically smallest encoding over all refinement-compatible vertex
/// orderings. Tails stay fixed; edges and half-edges are forgotten up to
/// multiplicity, so their labels never matter.
pub fn canonical_form(g: &StableGraph) -> GraphClass {
    let cells = color_cells(g);
    let mult = g.multiplicities();
    let mut best: Option<Vec<u32>> = None;
    for_each_cell_ordering(&cells, |order| {
        let code = encode(g, &mult, order);
        if best.as_ref().is_none_or(|b| code < *b) {
            best = Some(code);
        }
    });
    let encoding = best.expect("at least one ordering");
    let representative = decode(&encoding);
    GraphClass { encoding, representative }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(genera: &[u32], edges: &[[usize; 2]], tails: &[usize]) -> StableGraph {
        StableGraph::new(genera.to_vec(), edges.to_vec(), tails.to_vec()).unwrap()
    }

    /// Brute-force isomorphism: try every vertex bijection.
    fn isomorphic(a: &StableGraph, b: &StableGraph) -> bool {
        if a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges() {
            return false;
        }
        let nv = a.num_vertices();
        let (ma, mb) = (a.multiplicities(), b.multiplicities());
        let mut perm: Vec<usize> = (0..nv).collect();
        loop {
            let ok = (0..nv).all(|v| a.vertex_genus(v) == b.vertex_genus(perm[v]))
                && (0..a.num_tails()).all(|t| perm[a.tails()[t]] == b.tails()[t])
                && (0..nv).all(|u| (0..nv).all(|v| ma[u][v] == mb[perm[u]][perm[v]]));
            if ok {
                return true;
            }
            if !next_permutation(&mut perm) {
                return false;
            }
        }
    }

    fn next_permutation(p: &mut [usize]) -> bool {
        let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
            return false;
        };
        let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
        true
    }

    #[test]
    fn swapped_vertex_ids_agree() {
        let a = graph(&[1, 0], &[[0, 1]], &[0, 1, 1]);
        let b = graph(&[0, 1], &[[1, 0]], &[1, 0, 0]);
        assert_eq!(canonical_form(&a), canonical_form(&b));
        assert_eq!(canonical_form(&a).representative(), canonical_form(&b).representative());
    }

    #[test]
    fn loop_versus_bridge() {
        let looped = graph(&[0], &[[0, 0]], &[0]);
        let bridge = graph(&[1, 0], &[[0, 1]], &[1, 1, 1]);
        assert_eq!(looped.genus().unwrap(), 1);
        assert_eq!(bridge.genus().unwrap(), 1);
        assert_ne!(canonical_form(&looped), canonical_form(&bridge));
    }

    #[test]
    fn tail_relabelings_of_split_graph_give_three_classes() {
        let mut classes = Vec::new();
        let mut perm = vec![0usize, 1, 2, 3];
        loop {
            // labels perm[0], perm[1] on vertex 0, the others on vertex 1
            let mut tails = vec![0usize; 4];
            for (k, &label) in perm.iter().enumerate() {
                tails[label] = if k < 2 { 0 } else { 1 };
            }
            let g = graph(&[0, 0], &[[0, 1]], &tails);
            classes.push(g);
            if !next_permutation(&mut perm) {
                break;
            }
        }
        let mut keys: Vec<GraphClass> = classes.iter().map(canonical_form).collect();
        keys.sort();
        keys.dedup();
        assert_eq!(keys.len(), 3);
        // oracle: count brute-force isomorphism classes
        let mut reps: Vec<&StableGraph> = Vec::new();
        for g in &classes {
            if !reps.iter().any(|r| isomorphic(r, g)) {
                reps.push(g);
            }
        }
        assert_eq!(reps.len(), 3);
    }

    #[test]
    fn congruence_on_hand_picked_pairs() {
        let cases = [
            graph(&[0, 0, 0], &[[0, 1], [1, 2], [2, 0]], &[0, 1, 2]),
            graph(&[0, 0, 0], &[[0, 1], [1, 2], [2, 0]], &[1, 0, 2]),
            graph(&[0, 0, 0], &[[0, 1], [0, 1], [1, 2], [2, 2]], &[]),
            graph(&[0, 0, 0], &[[2, 1], [2, 1], [1, 0], [0, 0]], &[]),
            graph(&[0, 0], &[[0, 1], [0, 1], [0, 1]], &[]),
            graph(&[0, 0], &[[0, 0], [0, 1], [1, 1]], &[]),
            graph(&[1, 0, 0], &[[0, 1], [1, 2], [2, 2]], &[1]),
            graph(&[0, 0, 1], &[[2, 1], [1, 0], [0, 0]], &[1]),
        ];
        for a in &cases {
            for b in &cases {
                assert_eq!(canonical_form(a) == canonical_form(b), isomorphic(a, b), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn representative_is_isomorphic_to_input() {
        let g = graph(&[0, 1, 0], &[[2, 0], [0, 1], [2, 2]], &[2, 0]);
        let c = canonical_form(&g);
        assert!(isomorphic(&g, c.representative()));
        assert_eq!(canonical_form(c.representative()), c);
    }
}

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Weighted dual graph with labelled tails.
///
/// Vertices are `0..genera.len()`. Edge `e` joins `edges[e][0]` and
/// `edges[e][1]` (equal for a loop) and owns the half-edges `2e` (at the first
/// endpoint) and `2e + 1` (at the second). Tail label `i + 1` sits on vertex
/// `tails[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StableGraph {
    genera: Vec<u32>,
    edges: Vec<[usize; 2]>,
    tails: Vec<usize>,
}

impl StableGraph {
    pub fn new(genera: Vec<u32>, edges: Vec<[usize; 2]>, tails: Vec<usize>) -> Result<Self> {
        if genera.is_empty() {
            return Err(Error::MalformedGraph("a graph needs at least one vertex".into()));
        }
        let nv = genera.len();
        for (e, [a, b]) in edges.iter().enumerate() {
            if *a >= nv || *b >= nv {
                return Err(Error::MalformedGraph(format!("edge {e} references a missing vertex")));
            }
        }
        if let Some(i) = tails.iter().position(|&v| v >= nv) {
            return Err(Error::MalformedGraph(format!("tail {} references a missing vertex", i + 1)));
        }
        Ok(Self { genera, edges, tails })
    }

    /// The one-vertex, zero-edge graph of type (g, n).
    pub fn smooth(g: u32, n: u32) -> Self {
        Self { genera: vec![g], edges: Vec::new(), tails: vec![0; n as usize] }
    }

    pub fn num_vertices(&self) -> usize {
        self.genera.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_tails(&self) -> usize {
        self.tails.len()
    }

    pub fn vertex_genus(&self, v: usize) -> u32 {
        self.genera[v]
    }

    pub fn genera(&self) -> &[u32] {
        &self.genera
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn tails(&self) -> &[usize] {
        &self.tails
    }

    pub fn is_loop(&self, e: usize) -> bool {
        self.edges[e][0] == self.edges[e][1]
    }

    /// Vertex carrying half-edge `h`.
    pub fn half_edge_vertex(&self, h: usize) -> usize {
        self.edges[h / 2][h % 2]
    }

    pub fn tails_at(&self, v: usize) -> Vec<u32> {
        self.tails
            .iter()
            .enumerate()
            .filter(|(_, &w)| w == v)
            .map(|(i, _)| i as u32 + 1)
            .collect()
    }

    /// Number of half-edges at `v` (a loop counts twice).
    pub fn half_edge_degree(&self, v: usize) -> usize {
        self.edges.iter().map(|[a, b]| (*a == v) as usize + (*b == v) as usize).sum()
    }

    /// Valence m_v: tails plus half-edges.
    pub fn valence(&self, v: usize) -> usize {
        self.half_edge_degree(v) + self.tails.iter().filter(|&&w| w == v).count()
    }

    /// Edge multiplicities; the diagonal counts loops.
    pub fn multiplicities(&self) -> Vec<Vec<u32>> {
        let nv = self.num_vertices();
        let mut m = vec![vec![0u32; nv]; nv];
        for &[a, b] in &self.edges {
            m[a][b] += 1;
            if a != b {
                m[b][a] += 1;
            }
        }
        m
    }

    pub fn is_connected(&self) -> bool {
        let nv = self.num_vertices();
        let mut parent: Vec<usize> = (0..nv).collect();
        for &[a, b] in &self.edges {
            union(&mut parent, a, b);
        }
        let root = find(&mut parent, 0);
        (1..nv).all(|v| find(&mut parent, v) == root)
    }

    /// Total genus: vertex weights plus the first Betti number.
    pub fn genus(&self) -> Result<u32> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let weights: u32 = self.genera.iter().sum();
        Ok(weights + (self.num_edges() + 1 - self.num_vertices()) as u32)
    }

    /// 2 - 2g_v - m_v < 0 at every vertex.
    pub fn is_stable(&self) -> bool {
        (0..self.num_vertices()).all(|v| 2 * self.genera[v] as i64 + self.valence(v) as i64 > 2)
    }

    /// Complex dimension of the stratum: 3g - 3 + n - |E|.
    pub fn dimension(&self) -> Result<i64> {
        if !self.is_stable() {
            return Err(Error::UnstableGraph(self.to_string()));
        }
        let g = self.genus()? as i64;
        Ok(3 * g - 3 + self.num_tails() as i64 - self.num_edges() as i64)
    }

    /// Contracts the edges in `subset`.
    ///
    /// Returns the contracted graph and, for every old edge, its index in the
    /// new graph (`None` for contracted edges). Vertices of the result are
    /// numbered by the smallest old vertex they absorb.
    pub fn contract(&self, subset: &[usize]) -> Result<(StableGraph, Vec<Option<usize>>)> {
        let nv = self.num_vertices();
        let mut chosen = vec![false; self.num_edges()];
        for &e in subset {
            if e >= self.num_edges() {
                return Err(Error::UnknownEdge(e));
            }
            chosen[e] = true;
        }
        let mut parent: Vec<usize> = (0..nv).collect();
        for (e, &[a, b]) in self.edges.iter().enumerate() {
            if chosen[e] {
                union(&mut parent, a, b);
            }
        }
        let roots: Vec<usize> = (0..nv).map(|v| find(&mut parent, v)).collect();
        let mut new_index = BTreeMap::new();
        for &r in &roots {
            let next = new_index.len();
            new_index.entry(r).or_insert(next);
        }
        let vertex_map: Vec<usize> = roots.iter().map(|r| new_index[r]).collect();
        let mut genera = vec![0u32; new_index.len()];
        let mut vertex_count = vec![0i64; new_index.len()];
        let mut edge_count = vec![0i64; new_index.len()];
        for v in 0..nv {
            genera[vertex_map[v]] += self.genera[v];
            vertex_count[vertex_map[v]] += 1;
        }
        for (e, &[a, _]) in self.edges.iter().enumerate() {
            if chosen[e] {
                edge_count[vertex_map[a]] += 1;
            }
        }
        for (w, g) in genera.iter_mut().enumerate() {
            // cycle rank of the contracted subgraph
            *g += (edge_count[w] - vertex_count[w] + 1) as u32;
        }
        let mut edges = Vec::new();
        let mut edge_map = Vec::with_capacity(self.num_edges());
        for (e, &[a, b]) in self.edges.iter().enumerate() {
            if chosen[e] {
                edge_map.push(None);
            } else {
                edge_map.push(Some(edges.len()));
                edges.push([vertex_map[a], vertex_map[b]]);
            }
        }
        let tails = self.tails.iter().map(|&v| vertex_map[v]).collect();
        Ok((StableGraph { genera, edges, tails }, edge_map))
    }

    /// Relabels vertices by `perm` (old vertex `v` becomes `perm[v]`).
    pub fn relabel_vertices(&self, perm: &[usize]) -> StableGraph {
        let mut genera = vec![0; self.num_vertices()];
        for (v, &p) in perm.iter().enumerate() {
            genera[p] = self.genera[v];
        }
        let edges = self.edges.iter().map(|&[a, b]| [perm[a], perm[b]]).collect();
        let tails = self.tails.iter().map(|&v| perm[v]).collect();
        StableGraph { genera, edges, tails }
    }

    /// Reorders edges (`order[k]` is the old index of new edge `k`) and flips
    /// the half-edges of every edge with `flip[old] == true`.
    pub fn relabel_edges(&self, order: &[usize], flip: &[bool]) -> StableGraph {
        let edges = order
            .iter()
            .map(|&e| {
                let [a, b] = self.edges[e];
                if flip[e] {
                    [b, a]
                } else {
                    [a, b]
                }
            })
            .collect();
        StableGraph { genera: self.genera.clone(), edges, tails: self.tails.clone() }
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson::from(self)
    }
}

impl fmt::Display for StableGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for v in 0..self.num_vertices() {
            if v > 0 {
                write!(f, " | ")?;
            }
            write!(f, "g{}", self.genera[v])?;
            let tails = self.tails_at(v);
            if !tails.is_empty() {
                let list: Vec<String> = tails.iter().map(|t| t.to_string()).collect();
                write!(f, ":{}", list.join(","))?;
            }
        }
        if !self.edges.is_empty() {
            let list: Vec<String> = self.edges.iter().map(|[a, b]| format!("{a}-{b}")).collect();
            write!(f, " ; {}", list.join(" "))?;
        }
        write!(f, "]")
    }
}

pub(crate) fn find(parent: &mut [usize], v: usize) -> usize {
    let mut r = v;
    while parent[r] != r {
        r = parent[r];
    }
    let mut cur = v;
    while parent[cur] != r {
        let next = parent[cur];
        parent[cur] = r;
        cur = next;
    }
    r
}

pub(crate) fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi] = lo;
    }
}

// ---------------------------------------------------------------------------
// JSON schema

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct VertexJson {
    pub id: u64,
    pub genus: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct HalfEdgeJson {
    pub id: u64,
    pub vertex: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EdgeJson {
    pub id: u64,
    pub half_edges: [HalfEdgeJson; 2],
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TailJson {
    pub label: u32,
    pub vertex: u64,
}

/// Wire form of a [`StableGraph`]; ids are arbitrary but unique.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphJson {
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<EdgeJson>,
    pub tails: Vec<TailJson>,
}

impl From<&StableGraph> for GraphJson {
    fn from(g: &StableGraph) -> Self {
        GraphJson {
            vertices: g
                .genera
                .iter()
                .enumerate()
                .map(|(v, &genus)| VertexJson { id: v as u64, genus })
                .collect(),
            edges: g
                .edges
                .iter()
                .enumerate()
                .map(|(e, &[a, b])| EdgeJson {
                    id: e as u64,
                    half_edges: [
                        HalfEdgeJson { id: 2 * e as u64, vertex: a as u64 },
                        HalfEdgeJson { id: 2 * e as u64 + 1, vertex: b as u64 },
                    ],
                })
                .collect(),
            tails: g
                .tails
                .iter()
                .enumerate()
                .map(|(i, &v)| TailJson { label: i as u32 + 1, vertex: v as u64 })
                .collect(),
        }
    }
}

impl TryFrom<&GraphJson> for StableGraph {
    type Error = Error;

    fn try_from(json: &GraphJson) -> Result<Self> {
        let mut vertex_index = BTreeMap::new();
        let mut genera = Vec::new();
        for v in &json.vertices {
            if vertex_index.insert(v.id, genera.len()).is_some() {
                return Err(Error::MalformedGraph(format!("duplicate vertex id {}", v.id)));
            }
            genera.push(v.genus);
        }
        let lookup = |id: u64| {
            vertex_index
                .get(&id)
                .copied()
                .ok_or_else(|| Error::MalformedGraph(format!("unknown vertex id {id}")))
        };
        let mut half_edge_ids = BTreeSet::new();
        let mut edge_ids = BTreeSet::new();
        let mut edges = Vec::new();
        for e in &json.edges {
            if !edge_ids.insert(e.id) {
                return Err(Error::MalformedGraph(format!("duplicate edge id {}", e.id)));
            }
            for h in &e.half_edges {
                if !half_edge_ids.insert(h.id) {
                    return Err(Error::MalformedGraph(format!("half-edge {} used twice", h.id)));
                }
            }
            edges.push([lookup(e.half_edges[0].vertex)?, lookup(e.half_edges[1].vertex)?]);
        }
        let n = json.tails.len();
        let mut tails = vec![usize::MAX; n];
        for t in &json.tails {
            let slot = (t.label as usize)
                .checked_sub(1)
                .filter(|&i| i < n)
                .ok_or_else(|| Error::MalformedGraph(format!("tail label {} outside 1..={n}", t.label)))?;
            if tails[slot] != usize::MAX {
                return Err(Error::MalformedGraph(format!("tail label {} repeated", t.label)));
            }
            tails[slot] = lookup(t.vertex)?;
        }
        StableGraph::new(genera, edges, tails)
    }
}

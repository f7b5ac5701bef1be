//! Stable genus-zero trees with labeled legs.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::signature::LegSet;

/// Default upper bound on `n` for exhaustive enumeration.
pub const DEFAULT_MAX_N: usize = 9;

/// A stable tree: every vertex has valence at least 3, every leg sits on
/// exactly one vertex.
///
/// Vertices are indexed `0..num_vertices()`. Edge `e` joins
/// `edges()[e].0` and `edges()[e].1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StableTree {
    n: usize,
    vertex_legs: Vec<LegSet>,
    edges: Vec<(usize, usize)>,
}

impl StableTree {
    /// Builds a tree and checks connectivity, acyclicity, stability and
    /// that the legs `0..n` are partitioned among the vertices.
    pub fn new(n: usize, vertex_legs: Vec<LegSet>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let nv = vertex_legs.len();
        if nv == 0 {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        if edges.len() + 1 != nv {
            return Err(Error::InvalidGraph(format!(
                "a tree on {nv} vertices needs {} edges, got {}",
                nv - 1,
                edges.len()
            )));
        }
        let mut seen = LegSet::EMPTY;
        for legs in &vertex_legs {
            if !legs.is_disjoint(seen) {
                return Err(Error::InvalidGraph("a leg appears on two vertices".into()));
            }
            seen = seen.union(*legs);
        }
        if seen != LegSet::full(n) {
            return Err(Error::InvalidGraph(format!(
                "legs must be exactly 1..{n}, got {{{seen}}}"
            )));
        }
        for &(a, b) in &edges {
            if a >= nv || b >= nv || a == b {
                return Err(Error::InvalidGraph(format!("bad edge ({a}, {b})")));
            }
        }
        let tree = StableTree {
            n,
            vertex_legs,
            edges,
        };
        // Connectivity via union-find; with |E| = |V| - 1 this also rules out cycles.
        let mut uf = UnionFind::new(nv);
        for &(a, b) in &tree.edges {
            if !uf.union(a, b) {
                return Err(Error::InvalidGraph("edges contain a cycle".into()));
            }
        }
        for v in 0..nv {
            if tree.valence(v) < 3 {
                return Err(Error::InvalidGraph(format!(
                    "vertex {v} has valence {} < 3",
                    tree.valence(v)
                )));
            }
        }
        Ok(tree)
    }

    /// Builds the tree whose edges correspond to the given splits.
    ///
    /// Each split is a leg set; it is normalized to the side not containing
    /// leg 0. The root (vertex 0) carries leg 0; vertex `i + 1` is the
    /// `i`-th normalized split in increasing order and edge `i` joins it to
    /// its parent, with the parent listed first.
    pub fn from_splits(n: usize, splits: &[LegSet]) -> Result<Self> {
        let full = LegSet::full(n);
        let mut clusters: Vec<LegSet> = splits
            .iter()
            .map(|&s| if s.contains(0) { s.complement(n) } else { s })
            .collect();
        clusters.sort_unstable();
        for w in clusters.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidGraph(format!("repeated split {{{}}}", w[0])));
            }
        }
        for &c in &clusters {
            if !c.is_subset(full) || c.len() < 2 || c.complement(n).len() < 2 {
                return Err(Error::InvalidGraph(format!("split {{{c}}} is not stable")));
            }
        }
        for (i, &a) in clusters.iter().enumerate() {
            for &b in &clusters[i + 1..] {
                let nested = a.is_subset(b) || b.is_subset(a);
                if !nested && !a.is_disjoint(b) {
                    return Err(Error::InvalidGraph(format!(
                        "splits {{{a}}} and {{{b}}} cross"
                    )));
                }
            }
        }
        // Parent of a cluster: the smallest strictly larger cluster containing it.
        let parent = |c: LegSet| -> usize {
            clusters
                .iter()
                .enumerate()
                .filter(|(_, &d)| d != c && c.is_subset(d))
                .min_by_key(|(_, d)| d.len())
                .map(|(j, _)| j + 1)
                .unwrap_or(0)
        };
        let mut vertex_legs = vec![full; clusters.len() + 1];
        for (i, &c) in clusters.iter().enumerate() {
            vertex_legs[i + 1] = c;
        }
        let mut edges = Vec::with_capacity(clusters.len());
        for (i, &c) in clusters.iter().enumerate() {
            let p = parent(c);
            edges.push((p, i + 1));
            vertex_legs[p] = vertex_legs[p].difference(c);
        }
        StableTree::new(n, vertex_legs, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_legs.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn legs(&self, v: usize) -> LegSet {
        self.vertex_legs[v]
    }

    pub fn vertex_legs(&self) -> &[LegSet] {
        &self.vertex_legs
    }

    /// Vertex carrying the given 0-based leg.
    pub fn leg_vertex(&self, leg: usize) -> usize {
        self.vertex_legs
            .iter()
            .position(|l| l.contains(leg))
            .expect("every leg sits on a vertex")
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn valence(&self, v: usize) -> usize {
        self.vertex_legs[v].len() + self.degree(v)
    }

    /// `(neighbor, edge index)` pairs for every vertex.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.num_vertices()];
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            adj[a].push((b, e));
            adj[b].push((a, e));
        }
        adj
    }

    /// Legs on the side of edge `e` that contains vertex `v`.
    pub fn side(&self, e: usize, v: usize) -> LegSet {
        let adj = self.adjacency();
        let mut legs = LegSet::EMPTY;
        let mut stack = vec![v];
        let mut seen = vec![false; self.num_vertices()];
        seen[v] = true;
        while let Some(x) = stack.pop() {
            legs = legs.union(self.vertex_legs[x]);
            for &(y, f) in &adj[x] {
                if f != e && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        legs
    }

    /// For each edge, the legs on the side not containing leg 0.
    pub fn edge_splits(&self) -> Vec<LegSet> {
        let root = self.leg_vertex(0);
        let adj = self.adjacency();
        let mut below = vec![LegSet::EMPTY; self.num_edges()];
        // Iterative post-order from the root.
        let mut order = Vec::with_capacity(self.num_vertices());
        let mut parent_edge = vec![usize::MAX; self.num_vertices()];
        let mut seen = vec![false; self.num_vertices()];
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(x) = stack.pop() {
            order.push(x);
            for &(y, f) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent_edge[y] = f;
                    stack.push(y);
                }
            }
        }
        let mut subtree = self.vertex_legs.clone();
        for &x in order.iter().rev() {
            let pe = parent_edge[x];
            if pe != usize::MAX {
                below[pe] = subtree[x];
                let (a, b) = self.edges[pe];
                let p = if a == x { b } else { a };
                subtree[p] = subtree[p].union(subtree[x]);
            }
        }
        below
    }

    /// Sorted normalized splits; equal for two trees iff they are isomorphic
    /// by a map fixing leg labels.
    pub fn splits(&self) -> Vec<LegSet> {
        let mut s = self.edge_splits();
        s.sort_unstable();
        s
    }

    /// Renumbers vertices into the order produced by [`StableTree::from_splits`].
    ///
    /// Returns the new tree, the old-to-new vertex map and the old-to-new
    /// edge map.
    pub fn canonicalized(&self) -> (StableTree, Vec<usize>, Vec<usize>) {
        let splits = self.edge_splits();
        let canon = StableTree::from_splits(self.n, &splits).expect("splits of a stable tree");
        let sorted = canon.splits();
        let edge_map: Vec<usize> = splits
            .iter()
            .map(|s| sorted.binary_search(s).expect("split present"))
            .collect();
        let mut vertex_map = vec![0; self.num_vertices()];
        let root = self.leg_vertex(0);
        vertex_map[root] = 0;
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            // The endpoint on the split side is the child; it maps to split index + 1.
            let split = splits[e];
            let child = if self.side(e, a) == split { a } else { b };
            vertex_map[child] = edge_map[e] + 1;
        }
        (canon, vertex_map, edge_map)
    }
}

/// Minimal union-find over `0..n`.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    /// Returns false if `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// Growable tree used during enumeration.
#[derive(Clone)]
struct RawTree {
    vertex_legs: Vec<LegSet>,
    edges: Vec<(usize, usize)>,
}

/// Every tree on legs `0..=k` arises exactly once from a tree on `0..k` by
/// adding leg `k` to a vertex, subdividing an edge with a new vertex
/// carrying `k`, or replacing some leg `i` by a new vertex carrying `i, k`.
fn extend(tree: &RawTree, k: usize, out: &mut Vec<RawTree>) {
    for v in 0..tree.vertex_legs.len() {
        let mut t = tree.clone();
        t.vertex_legs[v].insert(k);
        out.push(t);
    }
    for e in 0..tree.edges.len() {
        let mut t = tree.clone();
        let (a, b) = t.edges[e];
        let w = t.vertex_legs.len();
        t.vertex_legs.push(LegSet::singleton(k));
        t.edges[e] = (a, w);
        t.edges.push((w, b));
        out.push(t);
    }
    for i in 0..k {
        let mut t = tree.clone();
        let v = t.vertex_legs.iter().position(|l| l.contains(i)).unwrap();
        t.vertex_legs[v] = t.vertex_legs[v].difference(LegSet::singleton(i));
        let w = t.vertex_legs.len();
        t.vertex_legs.push(LegSet::from_legs([i, k]));
        t.edges.push((v, w));
        out.push(t);
    }
}

fn generate(n: usize) -> Vec<StableTree> {
    let mut layer = vec![RawTree {
        vertex_legs: vec![LegSet::full(3)],
        edges: vec![],
    }];
    for k in 3..n {
        let mut next = Vec::new();
        for t in &layer {
            extend(t, k, &mut next);
        }
        layer = next;
    }
    let mut trees: Vec<(Vec<LegSet>, StableTree)> = layer
        .into_iter()
        .map(|raw| {
            let t = StableTree {
                n,
                vertex_legs: raw.vertex_legs,
                edges: raw.edges,
            };
            let splits = t.splits();
            let canon = StableTree::from_splits(n, &splits).expect("generated tree is stable");
            (splits, canon)
        })
        .collect();
    trees.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
    trees.into_iter().map(|(_, t)| t).collect()
}

fn cache() -> &'static Mutex<HashMap<usize, Arc<Vec<StableTree>>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<StableTree>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// All stable trees on legs `1..=n`, shared from a process-wide cache.
///
/// Trees come in canonical vertex numbering, ordered by edge count and
/// then by their sorted splits.
pub fn all_stable_trees(n: usize, max_n: usize) -> Result<Arc<Vec<StableTree>>> {
    if n < 3 {
        return Err(Error::Precondition(format!("need n >= 3, got {n}")));
    }
    if n > max_n {
        return Err(Error::ResourceGuard { n, bound: max_n });
    }
    if n > crate::signature::MAX_LEGS {
        return Err(Error::ResourceGuard {
            n,
            bound: crate::signature::MAX_LEGS,
        });
    }
    if let Some(t) = cache().lock().unwrap().get(&n) {
        return Ok(Arc::clone(t));
    }
    let trees = Arc::new(generate(n));
    cache().lock().unwrap().insert(n, Arc::clone(&trees));
    Ok(trees)
}

/// Stable trees on `n` legs with at most `max_edges` edges, using the
/// default enumeration bound.
pub fn enumerate_stable_trees(n: usize, max_edges: Option<usize>) -> Result<Vec<StableTree>> {
    enumerate_stable_trees_bounded(n, max_edges, DEFAULT_MAX_N)
}

pub fn enumerate_stable_trees_bounded(
    n: usize,
    max_edges: Option<usize>,
    max_n: usize,
) -> Result<Vec<StableTree>> {
    let all = all_stable_trees(n, max_n)?;
    Ok(all
        .iter()
        .filter(|t| max_edges.is_none_or(|m| t.num_edges() <= m))
        .cloned()
        .collect())
}

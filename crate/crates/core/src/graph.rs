//! Enhanced level graphs on stable trees.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signature::{LegSet, Signature};
use crate::tree::{StableTree, UnionFind};

/// Half-edge orders: `per_edge[e][0]` is the order at `tree.edges()[e].0`,
/// `per_edge[e][1]` the order at `tree.edges()[e].1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HalfEdgeOrders {
    pub per_edge: Vec<[i64; 2]>,
}

impl HalfEdgeOrders {
    /// Order of the half-edge of `e` at endpoint `v`.
    pub fn at(&self, tree: &StableTree, e: usize, v: usize) -> i64 {
        let (a, _) = tree.edges()[e];
        if a == v {
            self.per_edge[e][0]
        } else {
            self.per_edge[e][1]
        }
    }

    pub fn is_horizontal(&self, e: usize) -> bool {
        self.per_edge[e] == [-1, -1]
    }

    /// Enhancement of edge `e`: 0 for horizontal edges, otherwise the upper
    /// half-edge order plus one.
    pub fn kappa(&self, e: usize) -> u64 {
        let [a, b] = self.per_edge[e];
        (a.max(b) + 1) as u64
    }

    /// The endpoint carrying the non-negative order, for vertical edges.
    pub fn upper(&self, tree: &StableTree, e: usize) -> Option<usize> {
        let (a, b) = tree.edges()[e];
        let [oa, ob] = self.per_edge[e];
        if oa == -1 && ob == -1 {
            None
        } else if oa >= 0 {
            Some(a)
        } else {
            Some(b)
        }
    }
}

/// Derives the unique half-edge orders on a stable tree by peeling leaves.
///
/// At a vertex with a single undetermined half-edge, that order is `-2`
/// minus everything else at the vertex; its partner gets `-2` minus that.
pub fn derive_orders(tree: &StableTree, mu: &Signature) -> Result<HalfEdgeOrders> {
    if tree.n() != mu.n() {
        return Err(Error::Precondition(format!(
            "tree has {} legs but the signature has {} orders",
            tree.n(),
            mu.n()
        )));
    }
    let nv = tree.num_vertices();
    let ne = tree.num_edges();
    let adj = tree.adjacency();
    let mut known: Vec<[Option<i64>; 2]> = vec![[None, None]; ne];
    let mut unknown_count: Vec<usize> = (0..nv).map(|v| adj[v].len()).collect();
    let mut sum: Vec<i64> = (0..nv).map(|v| mu.sum_over(tree.legs(v))).collect();
    let mut queue: Vec<usize> = (0..nv).filter(|&v| unknown_count[v] == 1).collect();
    while let Some(v) = queue.pop() {
        if unknown_count[v] != 1 {
            continue;
        }
        let &(w, e) = adj[v]
            .iter()
            .find(|&&(_, e)| known[e][0].is_none())
            .expect("one undetermined half-edge");
        let here = -2 - sum[v];
        let there = -2 - here;
        let (a, _) = tree.edges()[e];
        known[e] = if a == v {
            [Some(here), Some(there)]
        } else {
            [Some(there), Some(here)]
        };
        unknown_count[v] = 0;
        sum[v] += here;
        unknown_count[w] -= 1;
        sum[w] += there;
        if unknown_count[w] == 1 {
            queue.push(w);
        }
    }
    let per_edge = known
        .into_iter()
        .map(|[a, b]| [a.expect("tree is fully peeled"), b.expect("tree is fully peeled")])
        .collect();
    let orders = HalfEdgeOrders { per_edge };
    debug_assert!(check_orders(tree, mu, &orders).is_ok());
    Ok(orders)
}

/// Checks the vertex degree condition and the per-edge rules.
pub fn check_orders(tree: &StableTree, mu: &Signature, orders: &HalfEdgeOrders) -> Result<()> {
    let mut sum: Vec<i64> = (0..tree.num_vertices())
        .map(|v| mu.sum_over(tree.legs(v)))
        .collect();
    for (e, &(a, b)) in tree.edges().iter().enumerate() {
        let [oa, ob] = orders.per_edge[e];
        if oa + ob != -2 {
            return Err(Error::InvalidGraph(format!("edge {e}: half-edge orders {oa}, {ob} do not sum to -2")));
        }
        if !(oa == -1 && ob == -1) && !(oa >= 0 || ob >= 0) {
            return Err(Error::InvalidGraph(format!("edge {e}: orders {oa}, {ob} are neither horizontal nor vertical")));
        }
        sum[a] += oa;
        sum[b] += ob;
    }
    for (v, s) in sum.into_iter().enumerate() {
        if s != -2 {
            return Err(Error::InvalidGraph(format!("vertex {v}: orders sum to {s}, not -2")));
        }
    }
    Ok(())
}

/// A stable tree together with a normalized level function and
/// enhancements compatible with a signature.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EnhancedLevelGraph {
    mu: Signature,
    tree: StableTree,
    orders: HalfEdgeOrders,
    levels: Vec<i64>,
}

impl EnhancedLevelGraph {
    /// Builds a graph from a tree and a level function; orders and
    /// enhancements are derived. Levels must cover `0, -1, .., -L` exactly.
    pub fn new(mu: Signature, tree: StableTree, levels: Vec<i64>) -> Result<Self> {
        let orders = derive_orders(&tree, &mu)?;
        Self::with_orders(mu, tree, orders, levels)
    }

    fn with_orders(
        mu: Signature,
        tree: StableTree,
        orders: HalfEdgeOrders,
        levels: Vec<i64>,
    ) -> Result<Self> {
        if levels.len() != tree.num_vertices() {
            return Err(Error::InvalidGraph(format!(
                "{} levels for {} vertices",
                levels.len(),
                tree.num_vertices()
            )));
        }
        let bottom = levels.iter().copied().min().unwrap_or(0);
        let mut used = vec![false; (-bottom) as usize + 1];
        for &l in &levels {
            if l > 0 {
                return Err(Error::InvalidGraph(format!("level {l} is above 0")));
            }
            used[(-l) as usize] = true;
        }
        if used.iter().any(|u| !u) {
            return Err(Error::InvalidGraph(
                "levels must be the consecutive range 0, -1, .., -L".into(),
            ));
        }
        for e in 0..tree.num_edges() {
            let (a, b) = tree.edges()[e];
            match orders.upper(&tree, e) {
                None if levels[a] != levels[b] => {
                    return Err(Error::InvalidGraph(format!(
                        "edge {e} is horizontal but joins levels {} and {}",
                        levels[a], levels[b]
                    )))
                }
                Some(u) => {
                    let l = if u == a { b } else { a };
                    if levels[u] <= levels[l] {
                        return Err(Error::InvalidGraph(format!(
                            "edge {e} must point down from vertex {u} to vertex {l}"
                        )));
                    }
                }
                None => {}
            }
        }
        Ok(EnhancedLevelGraph {
            mu,
            tree,
            orders,
            levels,
        })
    }

    pub fn mu(&self) -> &Signature {
        &self.mu
    }

    pub fn tree(&self) -> &StableTree {
        &self.tree
    }

    pub fn orders(&self) -> &HalfEdgeOrders {
        &self.orders
    }

    pub fn levels(&self) -> &[i64] {
        &self.levels
    }

    pub fn level(&self, v: usize) -> i64 {
        self.levels[v]
    }

    /// Number of levels below the top.
    pub fn num_levels_below(&self) -> usize {
        (-self.levels.iter().copied().min().unwrap_or(0)) as usize
    }

    pub fn num_edges(&self) -> usize {
        self.tree.num_edges()
    }

    pub fn kappa(&self, e: usize) -> u64 {
        self.orders.kappa(e)
    }

    pub fn kappas(&self) -> Vec<u64> {
        (0..self.num_edges()).map(|e| self.kappa(e)).collect()
    }

    pub fn is_horizontal(&self, e: usize) -> bool {
        self.orders.is_horizontal(e)
    }

    pub fn num_horizontal(&self) -> usize {
        (0..self.num_edges()).filter(|&e| self.is_horizontal(e)).count()
    }

    /// Levels below the top plus horizontal edges.
    pub fn codim(&self) -> usize {
        self.num_levels_below() + self.num_horizontal()
    }

    /// `(upper, lower)` endpoints of a vertical edge.
    pub fn ends(&self, e: usize) -> Option<(usize, usize)> {
        let (a, b) = self.tree.edges()[e];
        self.orders
            .upper(&self.tree, e)
            .map(|u| if u == a { (a, b) } else { (b, a) })
    }

    /// Whether edge `e` crosses passage `i` (1-based): the gap just above level `-i`.
    pub fn crosses(&self, e: usize, i: usize) -> bool {
        match self.ends(e) {
            Some((u, l)) => {
                let p = -(i as i64);
                self.levels[u] > p && p >= self.levels[l]
            }
            None => false,
        }
    }

    /// Passages crossed by edge `e`, increasing.
    pub fn passages(&self, e: usize) -> Vec<usize> {
        (1..=self.num_levels_below())
            .filter(|&i| self.crosses(e, i))
            .collect()
    }

    /// Codimension one with no horizontal edge.
    pub fn is_vertical_divisor(&self) -> bool {
        self.num_horizontal() == 0 && self.num_levels_below() == 1
    }

    /// Codimension one with exactly one horizontal edge.
    pub fn is_horizontal_divisor(&self) -> bool {
        self.num_levels_below() == 0 && self.num_horizontal() == 1
    }

    /// Canonical encoding; equal iff the graphs are isomorphic by a map
    /// fixing leg labels, levels and enhancements.
    pub fn canonical_form(&self) -> Vec<u8> {
        let adj = self.tree.adjacency();
        let root = self.tree.leg_vertex(0);
        // Children before parents: compute encodings in reverse DFS order.
        let nv = self.tree.num_vertices();
        let mut parent = vec![usize::MAX; nv];
        let mut order = Vec::with_capacity(nv);
        let mut stack = vec![root];
        parent[root] = root;
        while let Some(x) = stack.pop() {
            order.push(x);
            for &(y, _) in &adj[x] {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    stack.push(y);
                }
            }
        }
        let mut enc: Vec<String> = vec![String::new(); nv];
        for &x in order.iter().rev() {
            let mut children: Vec<String> = adj[x]
                .iter()
                .filter(|&&(y, _)| parent[y] == x && y != root)
                .map(|&(y, e)| format!("[{}:{}]", self.kappa(e), enc[y]))
                .collect();
            children.sort_unstable();
            enc[x] = format!(
                "({};{};{})",
                self.levels[x],
                self.tree.legs(x),
                children.concat()
            );
        }
        format!("{}|{}", self.mu, enc[root]).into_bytes()
    }

    /// The same graph with vertices renumbered canonically.
    pub fn canonicalized(&self) -> EnhancedLevelGraph {
        let (tree, vmap, emap) = self.tree.canonicalized();
        let mut levels = vec![0; tree.num_vertices()];
        for (old, &new) in vmap.iter().enumerate() {
            levels[new] = self.levels[old];
        }
        let mut per_edge = vec![[0, 0]; tree.num_edges()];
        for (old, &new) in emap.iter().enumerate() {
            let (a, _) = self.tree.edges()[old];
            let (na, _) = tree.edges()[new];
            let [oa, ob] = self.orders.per_edge[old];
            per_edge[new] = if vmap[a] == na { [oa, ob] } else { [ob, oa] };
        }
        EnhancedLevelGraph {
            mu: self.mu.clone(),
            tree,
            orders: HalfEdgeOrders { per_edge },
            levels,
        }
    }

    /// Keeps the given level passages (1-based) and all horizontal edges.
    pub fn undegenerate(&self, keep: &[usize]) -> Result<EnhancedLevelGraph> {
        let horizontal: Vec<usize> = (0..self.num_edges())
            .filter(|&e| self.is_horizontal(e))
            .collect();
        self.undegenerate_with(keep, &horizontal)
    }

    /// Keeps the given level passages (1-based) and the listed horizontal
    /// edges; every other edge is contracted and orders are re-derived.
    pub fn undegenerate_with(
        &self,
        keep_passages: &[usize],
        keep_horizontal: &[usize],
    ) -> Result<EnhancedLevelGraph> {
        let l = self.num_levels_below();
        let mut keep: Vec<usize> = keep_passages.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep.iter().any(|&i| i == 0 || i > l) {
            return Err(Error::Precondition(format!(
                "passages to keep must lie in 1..={l}, got {keep_passages:?}"
            )));
        }
        for &e in keep_horizontal {
            if e >= self.num_edges() || !self.is_horizontal(e) {
                return Err(Error::Precondition(format!("edge {e} is not horizontal")));
            }
        }
        let kept_edge = |e: usize| {
            if self.is_horizontal(e) {
                keep_horizontal.contains(&e)
            } else {
                keep.iter().any(|&i| self.crosses(e, i))
            }
        };
        let nv = self.tree.num_vertices();
        let mut uf = UnionFind::new(nv);
        for (e, &(a, b)) in self.tree.edges().iter().enumerate() {
            if !kept_edge(e) {
                uf.union(a, b);
            }
        }
        let mut class_index = vec![usize::MAX; nv];
        let mut vertex_legs = Vec::new();
        let mut levels = Vec::new();
        for v in 0..nv {
            let r = uf.find(v);
            if class_index[r] == usize::MAX {
                class_index[r] = vertex_legs.len();
                vertex_legs.push(LegSet::EMPTY);
                let j = (-self.levels[v]) as usize;
                levels.push(-(keep.iter().filter(|&&k| k <= j).count() as i64));
            }
            let c = class_index[r];
            vertex_legs[c] = vertex_legs[c].union(self.tree.legs(v));
        }
        let edges: Vec<(usize, usize)> = self
            .tree
            .edges()
            .iter()
            .enumerate()
            .filter(|&(e, _)| kept_edge(e))
            .map(|(_, &(a, b))| (class_index[uf.find(a)], class_index[uf.find(b)]))
            .collect();
        let tree = StableTree::new(self.tree.n(), vertex_legs, edges)?;
        let graph = EnhancedLevelGraph::new(self.mu.clone(), tree, levels)?;
        Ok(graph.canonicalized())
    }

    /// Divisorial undegenerations: one per level passage (horizontal edges
    /// contracted), followed by one per horizontal edge (all passages
    /// collapsed), in that order.
    pub fn divisorial_undegenerations(&self) -> Vec<EnhancedLevelGraph> {
        let mut out = Vec::with_capacity(self.codim());
        for i in 1..=self.num_levels_below() {
            out.push(self.undegenerate_with(&[i], &[]).expect("valid passage"));
        }
        for e in 0..self.num_edges() {
            if self.is_horizontal(e) {
                out.push(self.undegenerate_with(&[], &[e]).expect("horizontal edge"));
            }
        }
        out
    }

    pub fn to_json(&self) -> GraphJson {
        let vertices = (0..self.tree.num_vertices())
            .map(|v| VertexJson {
                level: self.levels[v],
                legs: self.tree.legs(v).labels(),
            })
            .collect();
        let edges = (0..self.num_edges())
            .map(|e| {
                let (u, v) = self.ends(e).unwrap_or(self.tree.edges()[e]);
                EdgeJson {
                    u,
                    v,
                    kappa: self.kappa(e),
                }
            })
            .collect();
        GraphJson {
            vertices,
            edges,
            mu: self.mu.orders().to_vec(),
        }
    }

    pub fn from_json(json: &GraphJson) -> Result<EnhancedLevelGraph> {
        let mu = Signature::new(json.mu.clone())?;
        let n = mu.n();
        let mut vertex_legs = Vec::with_capacity(json.vertices.len());
        for v in &json.vertices {
            if let Some(&bad) = v.legs.iter().find(|&&l| l == 0 || l > n) {
                return Err(Error::InvalidGraph(format!("leg label {bad} outside 1..={n}")));
            }
            vertex_legs.push(LegSet::from_labels(&v.legs));
        }
        let edges = json.edges.iter().map(|e| (e.u, e.v)).collect();
        let tree = StableTree::new(n, vertex_legs, edges)?;
        let levels = json.vertices.iter().map(|v| v.level).collect();
        let graph = EnhancedLevelGraph::new(mu, tree, levels)?;
        for (e, ej) in json.edges.iter().enumerate() {
            if graph.kappa(e) != ej.kappa {
                return Err(Error::InvalidGraph(format!(
                    "edge {e}: enhancement {} given, the signature forces {}",
                    ej.kappa,
                    graph.kappa(e)
                )));
            }
            if let Some((u, _)) = graph.ends(e) {
                if u != ej.u {
                    return Err(Error::InvalidGraph(format!(
                        "edge {e}: `u` must be the upper end (vertex {u})"
                    )));
                }
            }
        }
        Ok(graph)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("graph serializes")
    }

    pub fn from_json_str(s: &str) -> Result<EnhancedLevelGraph> {
        let json: GraphJson = serde_json::from_str(s)?;
        Self::from_json(&json)
    }
}

impl fmt::Display for EnhancedLevelGraph {
    /// Compact one-line view: vertices grouped by level, then edges.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for lvl in 0..=self.num_levels_below() {
            let verts: Vec<String> = (0..self.tree.num_vertices())
                .filter(|&v| self.levels[v] == -(lvl as i64))
                .map(|v| format!("v{v}{{{}}}", self.tree.legs(v)))
                .collect();
            parts.push(format!("{}: {}", -(lvl as i64), verts.join(" ")));
        }
        let edges: Vec<String> = (0..self.num_edges())
            .map(|e| {
                let (u, v) = self.ends(e).unwrap_or(self.tree.edges()[e]);
                if self.is_horizontal(e) {
                    format!("v{u}~v{v}")
                } else {
                    format!("v{u}-{}-v{v}", self.kappa(e))
                }
            })
            .collect();
        write!(f, "{} | {}", parts.join(" / "), edges.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub level: i64,
    pub legs: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub u: usize,
    pub v: usize,
    pub kappa: u64,
}

/// Interchange format for graphs; leg labels are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<EdgeJson>,
    pub mu: Vec<i64>,
}

impl Serialize for EnhancedLevelGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for EnhancedLevelGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let json = GraphJson::deserialize(d)?;
        EnhancedLevelGraph::from_json(&json).map_err(serde::de::Error::custom)
    }
}

/// All level structures on a tree compatible with its forced orientations.
pub fn enumerate_level_structures(
    tree: &StableTree,
    mu: &Signature,
) -> Result<Vec<EnhancedLevelGraph>> {
    enumerate_level_structures_bounded(tree, mu, None)
}

/// As [`enumerate_level_structures`], keeping only structures with at most
/// `max_below` levels below the top.
pub fn enumerate_level_structures_bounded(
    tree: &StableTree,
    mu: &Signature,
    max_below: Option<usize>,
) -> Result<Vec<EnhancedLevelGraph>> {
    let orders = derive_orders(tree, mu)?;
    let nv = tree.num_vertices();
    // Horizontal edges glue vertices into blocks that share a level.
    let mut uf = UnionFind::new(nv);
    for e in 0..tree.num_edges() {
        if orders.is_horizontal(e) {
            let (a, b) = tree.edges()[e];
            uf.union(a, b);
        }
    }
    let mut block_of = vec![usize::MAX; nv];
    let mut roots = Vec::new();
    for v in 0..nv {
        let r = uf.find(v);
        if block_of[r] == usize::MAX {
            block_of[r] = roots.len();
            roots.push(r);
        }
        block_of[v] = block_of[r];
    }
    let nb = roots.len();
    // above[b]: bitmask of blocks that must sit strictly above block b.
    let mut above = vec![0u64; nb];
    for e in 0..tree.num_edges() {
        if let Some(u) = orders.upper(tree, e) {
            let (a, b) = tree.edges()[e];
            let l = if u == a { b } else { a };
            above[block_of[l]] |= 1 << block_of[u];
        }
    }
    let limit = max_below.unwrap_or(usize::MAX);
    let mut results = Vec::new();
    let mut block_level = vec![0i64; nb];
    fn rec(
        remaining: u64,
        depth: usize,
        limit: usize,
        above: &[u64],
        block_level: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
    ) {
        if remaining == 0 {
            out.push(block_level.clone());
            return;
        }
        if depth > limit {
            return;
        }
        let sources: Vec<usize> = (0..above.len())
            .filter(|&b| remaining & (1 << b) != 0 && above[b] & remaining == 0)
            .collect();
        for mask in 1u64..(1 << sources.len()) {
            let mut chosen = 0u64;
            for (i, &b) in sources.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    chosen |= 1 << b;
                    block_level[b] = -(depth as i64);
                }
            }
            rec(remaining & !chosen, depth + 1, limit, above, block_level, out);
        }
    }
    let mut raw = Vec::new();
    rec((1u64 << nb) - 1, 0, limit, &above, &mut block_level, &mut raw);
    for bl in raw {
        let levels: Vec<i64> = (0..nv).map(|v| bl[block_of[v]]).collect();
        results.push(EnhancedLevelGraph::with_orders(
            mu.clone(),
            tree.clone(),
            orders.clone(),
            levels,
        )?);
    }
    Ok(results)
}

//! Cherries, balance, and smoothness of the coarse space.

use std::collections::HashMap;
use std::sync::Mutex;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::families::{family_tag, match_families};
use crate::graph::{derive_orders, enumerate_level_structures, EnhancedLevelGraph};
use crate::lattice::{ghost_group_order, twist_data, TwistData};
use crate::par::{self, Parallelism};
use crate::signature::{LegSet, Signature};
use crate::strata::Options;
use crate::tree::{all_stable_trees, StableTree};

/// A three-vertex tree: a root joined to two leaves. Upright cherries have
/// the root on top; inverted ones have it at the bottom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Cherry {
    pub root: LegSet,
    pub left: LegSet,
    pub right: LegSet,
    pub inverted: bool,
}

impl Cherry {
    /// Checks that the three sets partition `0..n` and that every vertex is stable.
    pub fn new(n: usize, root: LegSet, left: LegSet, right: LegSet, inverted: bool) -> Result<Cherry> {
        let disjoint = root.is_disjoint(left) && root.is_disjoint(right) && left.is_disjoint(right);
        if !disjoint || root.union(left).union(right) != LegSet::full(n) {
            return Err(Error::Precondition("cherry leg sets must partition the legs".into()));
        }
        if root.is_empty() || left.len() < 2 || right.len() < 2 {
            return Err(Error::Precondition(
                "cherry needs a leg on the root and two legs on each leaf".into(),
            ));
        }
        Ok(Cherry { root, left, right, inverted })
    }

    /// Builds from 1-based labels.
    pub fn from_labels(n: usize, root: &[usize], left: &[usize], right: &[usize], inverted: bool) -> Result<Cherry> {
        Cherry::new(
            n,
            LegSet::from_labels(root),
            LegSet::from_labels(left),
            LegSet::from_labels(right),
            inverted,
        )
    }

    pub fn swapped(self) -> Cherry {
        Cherry { left: self.right, right: self.left, ..self }
    }

    /// Vertex 0 is the root, vertices 1 and 2 the leaves.
    pub fn tree(&self, n: usize) -> StableTree {
        StableTree::new(n, vec![self.root, self.left, self.right], vec![(0, 1), (0, 2)])
            .expect("cherry is a stable tree")
    }
}

impl Serialize for Cherry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Cherry", 4)?;
        st.serialize_field("root", &self.root.labels())?;
        st.serialize_field("left", &self.left.labels())?;
        st.serialize_field("right", &self.right.labels())?;
        st.serialize_field("inverted", &self.inverted)?;
        st.end()
    }
}

impl std::fmt::Display for Cherry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.inverted {
            write!(f, "<{} | {} || {}>", self.left, self.right, self.root)
        } else {
            write!(f, "<{} || {} | {}>", self.root, self.left, self.right)
        }
    }
}

/// Enhancements `(a, b)` on the edges to the left and right leaf.
pub fn cherry_enhancements(c: &Cherry, mu: &Signature) -> (u64, u64) {
    let a = (-1 - mu.sum_over(c.left)).unsigned_abs();
    let b = (-1 - mu.sum_over(c.right)).unsigned_abs();
    (a, b)
}

pub fn is_cherry_realizable(c: &Cherry, mu: &Signature) -> bool {
    let (r, l, rt) = (mu.sum_over(c.root), mu.sum_over(c.left), mu.sum_over(c.right));
    if c.inverted {
        r >= 2 && l <= -2 && rt <= -2
    } else {
        r <= -2 && l >= 0 && rt >= 0
    }
}

pub fn is_balanced(c: &Cherry, mu: &Signature) -> bool {
    mu.sum_over(c.left) == mu.sum_over(c.right)
}

/// All stable cherries on `n` legs, each unordered pair of leaves once
/// (the leaf holding the smaller minimum leg is `left`), upright first.
pub fn all_cherries(n: usize) -> Vec<Cherry> {
    let full = LegSet::full(n).0;
    let mut out = Vec::new();
    for inverted in [false, true] {
        for left in 1..=full {
            let left = LegSet(left);
            if left.len() < 2 || !left.is_subset(LegSet(full)) {
                continue;
            }
            let rest = LegSet(full).difference(left);
            let min_left = left.0.trailing_zeros();
            // Iterate subsets of `rest`.
            let mut sub = rest.0;
            while sub != 0 {
                let right = LegSet(sub);
                let root = rest.difference(right);
                if right.len() >= 2 && !root.is_empty() && right.0.trailing_zeros() > min_left {
                    out.push(Cherry { root, left, right, inverted });
                }
                sub = (sub - 1) & rest.0;
            }
        }
    }
    out
}

/// A realizable unbalanced cherry, if one exists; the first in
/// [`all_cherries`] order.
pub fn find_cherry_witness(mu: &Signature) -> Option<Cherry> {
    all_cherries(mu.n())
        .into_iter()
        .find(|c| is_cherry_realizable(c, mu) && !is_balanced(c, mu))
}

/// Certificate of singularity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Witness {
    Cherry(Cherry),
    Stratum(EnhancedLevelGraph),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothnessVerdict {
    pub smooth: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
}

impl SmoothnessVerdict {
    fn smooth(mu: &Signature) -> Self {
        SmoothnessVerdict {
            smooth: true,
            witness: None,
            family: family_tag(mu).map(|f| f.tag.to_string()),
        }
    }

    fn singular(witness: Witness) -> Self {
        SmoothnessVerdict {
            smooth: false,
            witness: Some(witness),
            family: None,
        }
    }
}

/// Smoothness of the coarse space.
///
/// Up to four points the space is always smooth. Otherwise a realizable
/// unbalanced cherry decides singularity at once; failing that, the full
/// ghost scan decides when `n` is within the enumeration bound. Beyond the
/// bound (and only for `n >= 7`) the two known smooth families are the
/// answer.
pub fn classify_smooth(mu: &Signature) -> Result<SmoothnessVerdict> {
    classify_smooth_with(mu, &Options::default())
}

pub fn classify_smooth_with(mu: &Signature, opts: &Options) -> Result<SmoothnessVerdict> {
    if mu.n() <= 4 {
        return Ok(SmoothnessVerdict::smooth(mu));
    }
    if let Some(c) = find_cherry_witness(mu) {
        return Ok(SmoothnessVerdict::singular(Witness::Cherry(c)));
    }
    if mu.n() <= opts.max_n {
        return classify_smooth_full_with(mu, opts);
    }
    if mu.n() >= 7 && !match_families(mu).is_empty() {
        return Ok(SmoothnessVerdict::smooth(mu));
    }
    Err(Error::ResourceGuard { n: mu.n(), bound: opts.max_n })
}

/// Ground truth: smooth iff every stratum of codimension at least one has
/// trivial ghost group. The witness is the first offending stratum in
/// tree order.
pub fn classify_smooth_full(mu: &Signature) -> Result<SmoothnessVerdict> {
    classify_smooth_full_with(mu, &Options::default())
}

pub fn classify_smooth_full_with(mu: &Signature, opts: &Options) -> Result<SmoothnessVerdict> {
    let trees = all_stable_trees(mu.n(), opts.max_n)?;
    let memo: Mutex<HashMap<TwistData, bool>> = Mutex::new(HashMap::new());
    let found = par::find_map_first(&trees, opts.parallelism, |tree| {
        first_nontrivial_ghost(tree, mu, &memo)
    });
    Ok(match found {
        Some(g) => SmoothnessVerdict::singular(Witness::Stratum(g)),
        None => SmoothnessVerdict::smooth(mu),
    })
}

fn first_nontrivial_ghost(
    tree: &StableTree,
    mu: &Signature,
    memo: &Mutex<HashMap<TwistData, bool>>,
) -> Option<EnhancedLevelGraph> {
    let orders = derive_orders(tree, mu).expect("sizes agree");
    let mut vertical = (0..tree.num_edges())
        .filter(|&e| !orders.is_horizontal(e))
        .map(|e| orders.kappa(e));
    // With all enhancements equal the edge matrix is an interval matrix,
    // hence totally unimodular, and the index is 1.
    if let Some(first) = vertical.next() {
        if vertical.all(|k| k == first) {
            return None;
        }
    } else {
        return None;
    }
    let mut graphs = enumerate_level_structures(tree, mu).expect("valid tree");
    graphs.sort_by_cached_key(|g| g.canonical_form());
    graphs.into_iter().find(|g| {
        if g.num_levels_below() < 2 {
            return false;
        }
        let td = twist_data(g).expect("has passages").normalized();
        if let Some(&nontrivial) = memo.lock().unwrap().get(&td) {
            return nontrivial;
        }
        let nontrivial = !ghost_group_order(&td).is_trivial();
        memo.lock().unwrap().insert(td, nontrivial);
        nontrivial
    })
}

/// Verdicts for every sorted signature of length `n` with entries in
/// `[min, max]`. Smoothness is invariant under permuting legs, so one
/// representative per multiset suffices.
pub fn smooth_scan(
    n: usize,
    min: i64,
    max: i64,
    opts: &Options,
) -> Result<Vec<(Signature, SmoothnessVerdict)>> {
    let sigs = Signature::box_multisets(n, min, max);
    // Parallelism is spent across signatures; each classification runs sequentially.
    let inner = Options { parallelism: Parallelism::Sequential, ..*opts };
    let verdicts = par::map(&sigs, opts.parallelism, |mu| classify_smooth_with(mu, &inner));
    sigs.into_iter()
        .zip(verdicts)
        .map(|(mu, v)| v.map(|v| (mu, v)))
        .collect()
}

/// Realizability through the general level-structure enumerator: the
/// cherry tree admits a level function with the root strictly above (or,
/// for inverted cherries, strictly below) both leaves.
pub fn is_cherry_realizable_by_levels(c: &Cherry, mu: &Signature) -> bool {
    let tree = c.tree(mu.n());
    enumerate_level_structures(&tree, mu)
        .expect("valid cherry")
        .iter()
        .any(|g| {
            let (r, a, b) = (g.level(0), g.level(1), g.level(2));
            if c.inverted {
                r < a && r < b
            } else {
                r > a && r > b
            }
        })
}

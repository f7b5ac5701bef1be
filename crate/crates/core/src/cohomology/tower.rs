//! The blowup tower over the moduli of pointed rational curves and the
//! Betti numbers it produces.

use std::collections::{BTreeSet, HashMap};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use super::m0n::{m0bar_poly, picard_rank};
use super::poly::{PoincarePolynomial, Poly};
use crate::cherry::classify_smooth_with;
use crate::error::{Error, Result};
use crate::geometry::{is_exceptional, StrataIndex};
use crate::graph::EnhancedLevelGraph;
use crate::signature::{LegSet, Signature};
use crate::strata::Options;
use crate::tree::StableTree;

/// How to extend the partial order on exceptional divisors to a total order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TieBreak {
    /// Smallest canonical form first among the available divisors.
    Canonical,
    /// Largest canonical form first.
    ReverseCanonical,
    /// Random priorities from a seeded generator.
    Seeded(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TowerOptions {
    pub tie_break: TieBreak,
    /// Also accept the smooth five- and six-point signatures outside the two
    /// main families, blowing up upright cherries before inverted ones.
    pub experimental: bool,
    pub limits: Options,
}

impl Default for TowerOptions {
    fn default() -> Self {
        TowerOptions {
            tie_break: TieBreak::Canonical,
            experimental: false,
            limits: Options::default(),
        }
    }
}

/// One blowup: the stratum of the moduli of curves it is centered on and
/// the exceptional divisor it creates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupStep {
    pub center: StableTree,
    pub codim: usize,
    pub divisor: EnhancedLevelGraph,
}

impl Serialize for BlowupStep {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        #[derive(Serialize)]
        struct Center {
            vertices: Vec<Vec<usize>>,
            edges: Vec<(usize, usize)>,
        }
        let center = Center {
            vertices: self.center.vertex_legs().iter().map(|l| l.labels()).collect(),
            edges: self.center.edges().to_vec(),
        };
        let mut st = s.serialize_struct("BlowupStep", 3)?;
        st.serialize_field("center", &center)?;
        st.serialize_field("codim", &self.codim)?;
        st.serialize_field("divisor", &self.divisor)?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct BlowupPlan {
    pub steps: Vec<BlowupStep>,
}

impl BlowupPlan {
    fn split_sets(&self) -> Vec<Vec<LegSet>> {
        self.steps.iter().map(|s| s.center.splits()).collect()
    }
}

fn is_main_family(mu: &Signature) -> bool {
    let n = mu.n();
    let zeros = mu.orders().iter().filter(|&&m| m == 0).count();
    let count = |v: i64| mu.orders().iter().filter(|&&m| m == v).count();
    (zeros == n - 1 && count(-2) == 1) || (zeros == n - 2 && count(-1) == 2)
}

/// Orders the exceptional divisors so that smaller centers come first.
///
/// `D` precedes `D'` when some codimension-two stratum has profile
/// `[D, D']`. The partial order is extended by `tie_break` and the result
/// is checked against center containment.
pub fn build_blowup_plan(mu: &Signature, opts: &TowerOptions) -> Result<BlowupPlan> {
    let n = mu.n();
    let supported = n <= 4 || is_main_family(mu) || (opts.experimental && (n == 5 || n == 6));
    if !supported {
        return Err(Error::Precondition(format!(
            "the blowup tower is only available for permutations of (0^{{n-1}},-2) and (0^{{n-2}},-1^2){}; got {mu}",
            if n == 5 || n == 6 { " (use the experimental mode for other smooth five- and six-point signatures)" } else { "" }
        )));
    }
    let verdict = classify_smooth_with(mu, &opts.limits)?;
    if !verdict.smooth {
        return Err(Error::Precondition(format!("the coarse space for {mu} is singular")));
    }
    let index = StrataIndex::build(mu, &opts.limits)?;
    let exceptional: Vec<usize> = (0..index.num_divisors())
        .filter(|&d| is_exceptional(index.divisor(d)))
        .collect();

    // Experimental mode splits the divisors into upright and inverted cherries.
    let mut groups: Vec<(Vec<usize>, bool)> = Vec::new();
    let main = n <= 4 || is_main_family(mu);
    if main {
        groups.push((exceptional.clone(), false));
    } else {
        let mut upright = Vec::new();
        let mut inverted = Vec::new();
        for &d in &exceptional {
            match cherry_shape(index.divisor(d)) {
                Some(false) => upright.push(d),
                Some(true) => inverted.push(d),
                None => {
                    return Err(Error::Tower(format!(
                        "exceptional divisor is neither a cherry nor an inverted cherry: {}",
                        index.divisor(d)
                    )))
                }
            }
        }
        groups.push((upright, false));
        groups.push((inverted, true));
    }

    let mut rng = match opts.tie_break {
        TieBreak::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut order = Vec::with_capacity(exceptional.len());
    for (group, reversed) in groups {
        order.extend(topological_order(&index, &group, reversed, opts.tie_break, rng.as_mut())?);
    }

    let steps: Vec<BlowupStep> = order
        .iter()
        .map(|&d| {
            let divisor = index.divisor(d).clone();
            let center = StableTree::from_splits(n, &divisor.tree().splits()).expect("stable");
            BlowupStep { codim: center.num_edges(), center, divisor }
        })
        .collect();
    let plan = BlowupPlan { steps };
    validate_plan(&plan)?;
    Ok(plan)
}

/// `Some(false)` for an upright cherry, `Some(true)` for an inverted one.
fn cherry_shape(g: &EnhancedLevelGraph) -> Option<bool> {
    if g.tree().num_vertices() != 3 {
        return None;
    }
    let top = (0..3).filter(|&v| g.level(v) == 0).count();
    match top {
        1 => Some(false),
        2 => Some(true),
        _ => None,
    }
}

fn topological_order(
    index: &StrataIndex,
    group: &[usize],
    reversed: bool,
    tie_break: TieBreak,
    rng: Option<&mut ChaCha8Rng>,
) -> Result<Vec<usize>> {
    let pos: HashMap<usize, usize> = group.iter().enumerate().map(|(i, &d)| (d, i)).collect();
    let m = group.len();
    let mut succ = vec![Vec::new(); m];
    let mut indeg = vec![0usize; m];
    for (i, g) in index.strata().iter().enumerate() {
        if g.num_levels_below() != 2 || g.num_horizontal() != 0 {
            continue;
        }
        let du = index.undegenerations(i);
        let (first, second) = if reversed { (du[1], du[0]) } else { (du[0], du[1]) };
        if let (Some(&a), Some(&b)) = (pos.get(&first), pos.get(&second)) {
            succ[a].push(b);
            indeg[b] += 1;
        }
    }
    let keys: Vec<Vec<u8>> = group.iter().map(|&d| index.divisor(d).canonical_form()).collect();
    let priority: Vec<u64> = match (tie_break, rng) {
        (TieBreak::Seeded(_), Some(rng)) => (0..m).map(|_| rng.random()).collect(),
        _ => vec![0; m],
    };
    let mut ready: BTreeSet<(u64, Vec<u8>, usize)> = BTreeSet::new();
    let ready_key = |i: usize| -> (u64, Vec<u8>, usize) {
        match tie_break {
            TieBreak::ReverseCanonical => {
                (0, keys[i].iter().map(|b| 255 - b).chain(std::iter::once(255)).collect(), i)
            }
            _ => (priority[i], keys[i].clone(), i),
        }
    };
    for i in 0..m {
        if indeg[i] == 0 {
            ready.insert(ready_key(i));
        }
    }
    let mut out = Vec::with_capacity(m);
    while let Some(k) = ready.pop_first() {
        let i = k.2;
        out.push(group[i]);
        for &j in &succ[i] {
            indeg[j] -= 1;
            if indeg[j] == 0 {
                ready.insert(ready_key(j));
            }
        }
    }
    if out.len() != m {
        return Err(Error::Tower("the divisor order has a cycle".into()));
    }
    Ok(out)
}

fn validate_plan(plan: &BlowupPlan) -> Result<()> {
    let sets = plan.split_sets();
    for (i, si) in sets.iter().enumerate() {
        if plan.steps[i].codim < 2 {
            return Err(Error::Tower(format!("center {i} has codimension {}", plan.steps[i].codim)));
        }
        for (j, sj) in sets.iter().enumerate() {
            if i == j {
                continue;
            }
            if si == sj {
                return Err(Error::Tower(format!("centers {i} and {j} coincide")));
            }
            // Z_i inside Z_j means the splits of j are among those of i.
            let contained = sj.iter().all(|s| si.contains(s));
            if contained && i > j {
                return Err(Error::Tower(format!(
                    "center {i} lies inside center {j} but is blown up later"
                )));
            }
        }
    }
    Ok(())
}

fn compatible(a: LegSet, b: LegSet) -> bool {
    a.is_subset(b) || b.is_subset(a) || a.is_disjoint(b)
}

/// Betti numbers of proper transforms of boundary strata along the tower.
struct TowerEvaluator {
    n: usize,
    centers: Vec<Vec<LegSet>>,
    memo: HashMap<(Vec<LegSet>, usize), Poly>,
    max_n: usize,
    depth: usize,
}

impl TowerEvaluator {
    fn stratum_poly(&self, splits: &[LegSet]) -> Result<Poly> {
        let tree = StableTree::from_splits(self.n, splits)?;
        let mut p = Poly::one();
        for v in 0..tree.num_vertices() {
            let val = tree.valence(v);
            p = &p * &m0bar_poly(val, self.max_n.max(val))?;
        }
        Ok(p)
    }

    /// Proper transform of the stratum with split set `s` after the first
    /// `k` blowups. Empty when it lies inside an earlier center.
    fn proper_transform(&mut self, s: &[LegSet], k: usize) -> Result<Poly> {
        if let Some(p) = self.memo.get(&(s.to_vec(), k)) {
            return Ok(p.clone());
        }
        self.depth += 1;
        if self.depth > 64 {
            return Err(Error::Tower("recursion too deep".into()));
        }
        let result = if self.centers[..k].iter().any(|c| c.iter().all(|x| s.contains(x))) {
            Poly::zero()
        } else {
            let mut p = self.stratum_poly(s)?;
            for j in 0..k {
                let center = self.centers[j].clone();
                if !center.iter().all(|&c| s.iter().all(|&x| compatible(c, x))) {
                    continue;
                }
                let mut union: Vec<LegSet> = s.to_vec();
                for c in center {
                    if !union.contains(&c) {
                        union.push(c);
                    }
                }
                union.sort_unstable();
                let r = union.len() - s.len();
                if r >= 2 {
                    let trace = self.proper_transform(&union, j)?;
                    p = &p + &(&trace * &Poly::blowup_factor(r));
                }
            }
            p
        };
        self.depth -= 1;
        self.memo.insert((s.to_vec(), k), result.clone());
        Ok(result)
    }
}

/// Betti numbers of the smooth coarse space, via the blowup formula along
/// the plan.
pub fn poincare_multiscale(mu: &Signature) -> Result<PoincarePolynomial> {
    poincare_multiscale_with(mu, &TowerOptions::default())
}

pub fn poincare_multiscale_with(mu: &Signature, opts: &TowerOptions) -> Result<PoincarePolynomial> {
    let plan = build_blowup_plan(mu, opts)?;
    poincare_from_plan(mu.n(), &plan, opts.limits.max_n)
}

pub fn poincare_from_plan(n: usize, plan: &BlowupPlan, max_n: usize) -> Result<PoincarePolynomial> {
    let mut eval = TowerEvaluator {
        n,
        centers: plan.split_sets(),
        memo: HashMap::new(),
        max_n,
        depth: 0,
    };
    let m = eval.centers.len();
    let p = eval.proper_transform(&[], m)?;
    let result = PoincarePolynomial::from_even(&p, n - 3);
    if !result.is_well_formed() {
        return Err(Error::Tower(format!("result {result} violates Poincaré duality")));
    }
    Ok(result)
}

/// `(expected, computed)` second Betti numbers: the Picard rank of the
/// moduli of curves plus the number of exceptional divisors, against `c_2`
/// from the tower.
pub fn h2_crosscheck(mu: &Signature) -> Result<(u64, u64)> {
    h2_crosscheck_with(mu, &TowerOptions::default())
}

pub fn h2_crosscheck_with(mu: &Signature, opts: &TowerOptions) -> Result<(u64, u64)> {
    let plan = build_blowup_plan(mu, opts)?;
    let expected = picard_rank(mu.n()) + plan.steps.len() as u64;
    let computed = poincare_from_plan(mu.n(), &plan, opts.limits.max_n)?.h2();
    Ok((expected, computed))
}

/// Whether the tower accepts this signature without the experimental flag.
pub fn is_tower_supported(mu: &Signature) -> bool {
    mu.n() <= 4 || is_main_family(mu)
}

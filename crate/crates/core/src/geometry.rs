//! Intersections of boundary divisors, profiles, and stratum censuses.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::EnhancedLevelGraph;
use crate::par;
use crate::signature::Signature;
use crate::strata::{enumerate_strata_with, Options};

/// Every stratum of a signature together with its divisorial
/// undegenerations, indexed for intersection lookups.
pub struct StrataIndex {
    mu: Signature,
    strata: Vec<EnhancedLevelGraph>,
    divisors: Vec<usize>,
    divisor_of: HashMap<Vec<u8>, usize>,
    /// Divisor indices of each stratum: vertical ones by passage, then horizontal ones.
    undegenerations: Vec<Vec<usize>>,
    by_key: HashMap<Vec<usize>, Vec<usize>>,
}

impl StrataIndex {
    pub fn build(mu: &Signature, opts: &Options) -> Result<StrataIndex> {
        let strata = enumerate_strata_with(mu, None, opts)?;
        let divisors: Vec<usize> = (0..strata.len()).filter(|&i| strata[i].codim() == 1).collect();
        let divisor_of: HashMap<Vec<u8>, usize> = divisors
            .iter()
            .enumerate()
            .map(|(d, &i)| (strata[i].canonical_form(), d))
            .collect();
        let undegenerations: Vec<Vec<usize>> = par::map(&strata, opts.parallelism, |g| {
            g.divisorial_undegenerations()
                .iter()
                .map(|d| divisor_of[&d.canonical_form()])
                .collect()
        });
        let mut by_key: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        for (i, du) in undegenerations.iter().enumerate() {
            let mut key = du.clone();
            key.sort_unstable();
            by_key.entry(key).or_default().push(i);
        }
        Ok(StrataIndex {
            mu: mu.clone(),
            strata,
            divisors,
            divisor_of,
            undegenerations,
            by_key,
        })
    }

    pub fn mu(&self) -> &Signature {
        &self.mu
    }

    pub fn strata(&self) -> &[EnhancedLevelGraph] {
        &self.strata
    }

    pub fn num_divisors(&self) -> usize {
        self.divisors.len()
    }

    pub fn divisor(&self, d: usize) -> &EnhancedLevelGraph {
        &self.strata[self.divisors[d]]
    }

    /// Index of a divisor of this signature.
    pub fn divisor_index(&self, g: &EnhancedLevelGraph) -> Result<usize> {
        if g.mu() != &self.mu {
            return Err(Error::Precondition(format!(
                "divisor belongs to {} rather than {}",
                g.mu(),
                self.mu
            )));
        }
        self.divisor_of.get(&g.canonical_form()).copied().ok_or_else(|| {
            Error::Precondition(format!("not a boundary divisor: {g}"))
        })
    }

    /// Divisor indices of stratum `i`, vertical by passage then horizontal.
    pub fn undegenerations(&self, i: usize) -> &[usize] {
        &self.undegenerations[i]
    }

    /// Strata whose divisorial undegenerations form exactly this multiset.
    pub fn strata_with_key(&self, divisors: &[usize]) -> &[usize] {
        let mut key = divisors.to_vec();
        key.sort_unstable();
        self.by_key.get(&key).map_or(&[], |v| v.as_slice())
    }

    /// Resolves an intersection of divisors given by index.
    pub fn profile_of(&self, divisors: &[usize]) -> Option<Profile> {
        let realizations = self.strata_with_key(divisors);
        let first = *realizations.first()?;
        let g = &self.strata[first];
        let l = g.num_levels_below();
        let du = &self.undegenerations[first];
        let mut horizontal: Vec<usize> = du[l..].to_vec();
        horizontal.sort_unstable();
        Some(Profile {
            vertical: du[..l].to_vec(),
            horizontal,
            realizations: realizations.to_vec(),
        })
    }

    pub fn profile_graphs(&self, p: &Profile) -> ProfileReport {
        ProfileReport {
            profile: p.vertical.iter().map(|&d| self.divisor(d).clone()).collect(),
            realizations: p.realizations.iter().map(|&i| self.strata[i].clone()).collect(),
            horizontal: p.horizontal.iter().map(|&d| self.divisor(d).clone()).collect(),
        }
    }

    /// Number of distinct vertical orderings among the realizations of a key.
    pub fn orderings(&self, divisors: &[usize]) -> usize {
        let mut seen: Vec<&[usize]> = self
            .strata_with_key(divisors)
            .iter()
            .map(|&i| &self.undegenerations[i][..self.strata[i].num_levels_below()])
            .collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }
}

/// Ordered vertical divisors and unordered horizontal divisors of an
/// intersection, with every stratum realizing it; all by index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    pub vertical: Vec<usize>,
    pub horizontal: Vec<usize>,
    pub realizations: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileReport {
    pub profile: Vec<EnhancedLevelGraph>,
    pub realizations: Vec<EnhancedLevelGraph>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub horizontal: Vec<EnhancedLevelGraph>,
}

/// The stratum (or strata) whose divisorial undegenerations are exactly
/// the given divisors, or `None` if the intersection is empty. Repeated
/// divisors are kept as given.
pub fn intersection_profile(divisors: &[EnhancedLevelGraph], mu: &Signature) -> Result<Option<ProfileReport>> {
    let index = StrataIndex::build(mu, &Options::default())?;
    intersection_profile_in(&index, divisors)
}

pub fn intersection_profile_in(index: &StrataIndex, divisors: &[EnhancedLevelGraph]) -> Result<Option<ProfileReport>> {
    if divisors.is_empty() {
        return Err(Error::Precondition("need at least one divisor".into()));
    }
    let ids = divisors
        .iter()
        .map(|d| index.divisor_index(d))
        .collect::<Result<Vec<_>>>()?;
    Ok(index.profile_of(&ids).map(|p| index.profile_graphs(&p)))
}

/// Outcome of [`verify_unique_graph`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct UniquenessReport {
    /// Distinct sets of `r` divisors with nonempty intersection.
    pub checked: usize,
    /// Sets whose realizing strata number other than one, with that count.
    pub multiple_graphs: Vec<(Vec<usize>, usize)>,
    /// Sets realized with more than one vertical ordering.
    pub multiple_orderings: Vec<Vec<usize>>,
    /// Vertical divisors `D` for which `[D, D]` is realized.
    pub repeated_realized: Vec<usize>,
}

impl UniquenessReport {
    pub fn passed(&self) -> bool {
        self.multiple_graphs.is_empty() && self.multiple_orderings.is_empty() && self.repeated_realized.is_empty()
    }
}

/// Every set of `r` distinct divisors that meet (all lie over some common
/// stratum) must be realized by exactly one codimension-`r` stratum with a
/// unique ordering; a doubled divisor must never be realized.
pub fn verify_unique_graph(mu: &Signature, r: usize) -> Result<UniquenessReport> {
    let index = StrataIndex::build(mu, &Options::default())?;
    Ok(verify_unique_graph_in(&index, r))
}

pub fn verify_unique_graph_in(index: &StrataIndex, r: usize) -> UniquenessReport {
    let mut sets: Vec<Vec<usize>> = Vec::new();
    for i in 0..index.strata.len() {
        let mut du = index.undegenerations[i].clone();
        du.sort_unstable();
        du.dedup();
        for_each_subset(&du, r, &mut |s| sets.push(s.to_vec()));
    }
    sets.sort_unstable();
    sets.dedup();
    let mut report = UniquenessReport {
        checked: sets.len(),
        ..Default::default()
    };
    for s in &sets {
        let count = index.strata_with_key(s).len();
        if count != 1 {
            report.multiple_graphs.push((s.clone(), count));
        }
        if index.orderings(s) > 1 {
            report.multiple_orderings.push(s.clone());
        }
    }
    for d in 0..index.num_divisors() {
        if !index.strata_with_key(&[d, d]).is_empty() {
            report.repeated_realized.push(d);
        }
    }
    report
}

fn for_each_subset(items: &[usize], r: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(items: &[usize], r: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == r {
            f(cur);
            return;
        }
        for i in start..items.len() {
            if items.len() - i < r - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, r, i + 1, cur, f);
            cur.pop();
        }
    }
    rec(items, r, 0, &mut Vec::with_capacity(r), f);
}

/// Stratum counts by codimension and the exceptional divisors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumCensus {
    pub counts: BTreeMap<usize, usize>,
    #[serde(rename = "exceptional")]
    pub exceptional_divisors: Vec<EnhancedLevelGraph>,
}

/// A vertical divisor is exceptional over the moduli of pointed curves when
/// its tree has at least two edges; horizontal divisors never are.
pub fn is_exceptional(g: &EnhancedLevelGraph) -> bool {
    g.is_vertical_divisor() && g.num_edges() >= 2
}

pub fn census(mu: &Signature) -> Result<StratumCensus> {
    census_with(mu, &Options::default())
}

pub fn census_with(mu: &Signature, opts: &Options) -> Result<StratumCensus> {
    let strata = enumerate_strata_with(mu, None, opts)?;
    let mut counts = BTreeMap::new();
    for g in &strata {
        *counts.entry(g.codim()).or_insert(0) += 1;
    }
    let exceptional_divisors = strata.into_iter().filter(is_exceptional).collect();
    Ok(StratumCensus { counts, exceptional_divisors })
}

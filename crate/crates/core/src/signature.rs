//! Zero/pole signatures and subsets of marked legs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest number of marked points representable by [`LegSet`].
pub const MAX_LEGS: usize = 32;

/// A set of marked legs, stored as a bitmask over 0-based leg indices.
///
/// Leg `i` (0-based) is the marked point labeled `i + 1` in all external
/// formats.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LegSet(pub u32);

impl LegSet {
    pub const EMPTY: LegSet = LegSet(0);

    pub fn full(n: usize) -> LegSet {
        if n >= 32 {
            LegSet(u32::MAX)
        } else {
            LegSet((1u32 << n) - 1)
        }
    }

    pub fn singleton(leg: usize) -> LegSet {
        LegSet(1 << leg)
    }

    pub fn from_legs<I: IntoIterator<Item = usize>>(legs: I) -> LegSet {
        LegSet(legs.into_iter().fold(0, |acc, l| acc | (1 << l)))
    }

    /// Builds a set from 1-based labels.
    pub fn from_labels(labels: &[usize]) -> LegSet {
        LegSet::from_legs(labels.iter().map(|&l| l - 1))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, leg: usize) -> bool {
        self.0 & (1 << leg) != 0
    }

    pub fn insert(&mut self, leg: usize) {
        self.0 |= 1 << leg;
    }

    pub fn union(self, other: LegSet) -> LegSet {
        LegSet(self.0 | other.0)
    }

    pub fn intersection(self, other: LegSet) -> LegSet {
        LegSet(self.0 & other.0)
    }

    pub fn difference(self, other: LegSet) -> LegSet {
        LegSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: LegSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: LegSet) -> bool {
        self.0 & other.0 == 0
    }

    /// Complement inside `{0, .., n-1}`.
    pub fn complement(self, n: usize) -> LegSet {
        LegSet(!self.0 & LegSet::full(n).0)
    }

    /// 0-based leg indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |i| bits & (1 << i) != 0)
    }

    /// 1-based labels in increasing order.
    pub fn labels(self) -> Vec<usize> {
        self.iter().map(|l| l + 1).collect()
    }
}

impl fmt::Display for LegSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.labels().iter().map(|l| l.to_string()).collect();
        write!(f, "{}", labels.join(","))
    }
}

/// Orders `(m_1, .., m_n)` of the zeros and poles at the marked points.
///
/// Invariants: `n >= 3` and the orders sum to `-2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Signature {
    orders: Vec<i64>,
}

impl Signature {
    pub fn new(orders: Vec<i64>) -> Result<Self> {
        if orders.len() < 3 {
            return Err(Error::InvalidSignature(format!(
                "need at least 3 marked points, got {}",
                orders.len()
            )));
        }
        if orders.len() > MAX_LEGS {
            return Err(Error::InvalidSignature(format!(
                "at most {MAX_LEGS} marked points are supported, got {}",
                orders.len()
            )));
        }
        let sum: i64 = orders.iter().sum();
        if sum != -2 {
            return Err(Error::InvalidSignature(format!(
                "orders must sum to -2 (genus 0), got {sum}"
            )));
        }
        Ok(Signature { orders })
    }

    pub fn n(&self) -> usize {
        self.orders.len()
    }

    pub fn orders(&self) -> &[i64] {
        &self.orders
    }

    /// Order at 0-based leg `leg`.
    pub fn order(&self, leg: usize) -> i64 {
        self.orders[leg]
    }

    /// Sum of the orders over a set of legs.
    pub fn sum_over(&self, legs: LegSet) -> i64 {
        legs.iter().map(|l| self.orders[l]).sum()
    }

    /// The same multiset of orders sorted in descending order.
    pub fn sorted_desc(&self) -> Signature {
        let mut orders = self.orders.clone();
        orders.sort_unstable_by(|a, b| b.cmp(a));
        Signature { orders }
    }

    /// Applies a permutation: the new leg `i` carries the order of old leg `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Signature {
        Signature {
            orders: perm.iter().map(|&p| self.orders[p]).collect(),
        }
    }

    /// All signatures of length `n` with entries in `[min, max]`, one per
    /// multiset, each sorted in descending order. Output is sorted.
    pub fn box_multisets(n: usize, min: i64, max: i64) -> Vec<Signature> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(n);
        fn rec(
            n: usize,
            min: i64,
            upper: i64,
            remaining: i64,
            current: &mut Vec<i64>,
            out: &mut Vec<Signature>,
        ) {
            let left = n - current.len();
            if left == 0 {
                if remaining == 0 {
                    out.push(Signature {
                        orders: current.clone(),
                    });
                }
                return;
            }
            // Remaining entries are each in [min, value].
            for value in (min..=upper).rev() {
                let rest = (left - 1) as i64;
                if value + rest * value < remaining {
                    break;
                }
                if value + rest * min > remaining {
                    continue;
                }
                current.push(value);
                rec(n, min, value, remaining - value, current, out);
                current.pop();
            }
        }
        if n >= 3 && min <= max {
            rec(n, min, max, -2, &mut current, &mut out);
        }
        out.sort();
        out
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.orders.iter().map(|m| m.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for Signature {
    type Err = Error;

    /// Parses a comma-separated integer list such as `0,0,0,0,-2`.
    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        let orders = trimmed
            .split(',')
            .map(|p| {
                p.trim().parse::<i64>().map_err(|_| {
                    Error::InvalidSignature(format!("`{}` is not an integer", p.trim()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Signature::new(orders)
    }
}

impl<'de> Deserialize<'de> for Signature {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let orders = Vec::<i64>::deserialize(d)?;
        Signature::new(orders).map_err(serde::de::Error::custom)
    }
}

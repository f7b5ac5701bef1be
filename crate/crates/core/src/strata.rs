//! Enumeration of all boundary strata for a signature.

use crate::error::Result;
use crate::graph::{enumerate_level_structures_bounded, EnhancedLevelGraph};
use crate::par::{self, Parallelism};
use crate::signature::Signature;
use crate::tree::{all_stable_trees, DEFAULT_MAX_N};

/// Enumeration limits and execution strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    /// Largest `n` for which exhaustive enumeration is attempted.
    pub max_n: usize,
    pub parallelism: Parallelism,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            max_n: DEFAULT_MAX_N,
            parallelism: Parallelism::default(),
        }
    }
}

impl Options {
    pub fn sequential() -> Self {
        Options {
            parallelism: Parallelism::Sequential,
            ..Options::default()
        }
    }

    pub fn with_max_n(self, max_n: usize) -> Self {
        Options { max_n, ..self }
    }
}

/// All enhanced level graphs compatible with `mu`, optionally restricted to
/// one codimension, sorted by canonical form.
pub fn enumerate_strata(mu: &Signature, codim: Option<usize>) -> Result<Vec<EnhancedLevelGraph>> {
    enumerate_strata_with(mu, codim, &Options::default())
}

pub fn enumerate_strata_with(
    mu: &Signature,
    codim: Option<usize>,
    opts: &Options,
) -> Result<Vec<EnhancedLevelGraph>> {
    let trees = all_stable_trees(mu.n(), opts.max_n)?;
    let per_tree = par::map(&trees, opts.parallelism, |tree| -> Result<Vec<(Vec<u8>, EnhancedLevelGraph)>> {
        let orders = crate::graph::derive_orders(tree, mu)?;
        let horizontal = (0..tree.num_edges()).filter(|&e| orders.is_horizontal(e)).count();
        let vertical = tree.num_edges() - horizontal;
        let max_below = match codim {
            Some(c) => {
                // codim = levels below + horizontal, and levels below is
                // between min(1, vertical) and vertical.
                let min_below = usize::from(vertical > 0);
                if c < horizontal + min_below || c > horizontal + vertical {
                    return Ok(Vec::new());
                }
                Some(c - horizontal)
            }
            None => None,
        };
        let graphs = enumerate_level_structures_bounded(tree, mu, max_below)?;
        Ok(graphs
            .into_iter()
            .filter(|g| codim.is_none_or(|c| g.codim() == c))
            .map(|g| (g.canonical_form(), g))
            .collect())
    });
    let mut all = Vec::new();
    for r in per_tree {
        all.extend(r?);
    }
    all.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(all.into_iter().map(|(_, g)| g).collect())
}

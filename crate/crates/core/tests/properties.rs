use msd_core::cherry::{classify_smooth, classify_smooth_full};
use msd_core::geometry::{census, StrataIndex};
use msd_core::graph::derive_orders;
use msd_core::lattice::{ghost_group_order, smith_normal_form_i64, twist_data, TwistData, TwistEdge};
use msd_core::strata::{enumerate_strata, enumerate_strata_with, Options};
use msd_core::tree::{all_stable_trees, StableTree};
use msd_core::{EnhancedLevelGraph, LegSet, Signature};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use proptest::sample::Index;

fn signature_strategy(min_n: usize, max_n: usize) -> impl Strategy<Value = Signature> {
    (min_n..=max_n)
        .prop_flat_map(|n| prop::collection::vec(-4i64..=4, n - 1))
        .prop_filter_map("last entry out of range", |mut v| {
            let last = -2 - v.iter().sum::<i64>();
            if !(-8..=8).contains(&last) {
                return None;
            }
            v.push(last);
            Signature::new(v).ok()
        })
}

fn permutation(n: usize, seed: &[Index]) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, seed[i].index(i + 1));
    }
    p
}

fn pick(mu: &Signature, which: Index) -> Option<EnhancedLevelGraph> {
    let strata = enumerate_strata(mu, None).unwrap();
    (!strata.is_empty()).then(|| strata[which.index(strata.len())].clone())
}

/// Same graph with vertices renumbered by `perm` and edges reversed in order.
fn shuffle_vertices(g: &EnhancedLevelGraph, perm: &[usize]) -> EnhancedLevelGraph {
    let t = g.tree();
    let nv = t.num_vertices();
    let mut legs = vec![LegSet::EMPTY; nv];
    let mut levels = vec![0; nv];
    for v in 0..nv {
        legs[perm[v]] = t.legs(v);
        levels[perm[v]] = g.level(v);
    }
    let edges = t.edges().iter().rev().map(|&(a, b)| (perm[b], perm[a])).collect();
    let tree = StableTree::new(t.n(), legs, edges).unwrap();
    EnhancedLevelGraph::new(g.mu().clone(), tree, levels).unwrap()
}

/// Moves old leg `perm[i]` to new leg `i`, matching `Signature::permuted`.
fn relabel_legs(g: &EnhancedLevelGraph, perm: &[usize]) -> EnhancedLevelGraph {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    let t = g.tree();
    let legs = (0..t.num_vertices())
        .map(|v| LegSet::from_legs(t.legs(v).iter().map(|o| inv[o])))
        .collect();
    let tree = StableTree::new(t.n(), legs, t.edges().to_vec()).unwrap();
    EnhancedLevelGraph::new(g.mu().permuted(perm), tree, g.levels().to_vec()).unwrap()
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..=6, c), r))
}

fn twist_strategy() -> impl Strategy<Value = TwistData> {
    (1usize..=4).prop_flat_map(|l| {
        prop::collection::vec((1u64..=12, 1usize..=l, 1usize..=l), 1..=4).prop_filter_map("uncrossed passage", move |raw| {
            let edges = raw
                .into_iter()
                .map(|(k, a, b)| TwistEdge {
                    kappa: k,
                    passages: (a.min(b)..=a.max(b)).collect(),
                })
                .collect();
            let td = TwistData::new(l, edges).ok()?;
            // Realized graphs always have full column rank.
            let crossing: Vec<Vec<i64>> = td
                .edges
                .iter()
                .map(|e| (1..=l).map(|i| e.passages.contains(&i) as i64).collect())
                .collect();
            let rank = smith_normal_form_i64(&crossing).iter().filter(|d| !d.is_zero()).count();
            (rank == l).then_some(td)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn canonical_form_ignores_vertex_numbering(
        mu in signature_strategy(4, 6),
        which in any::<Index>(),
        seed in prop::collection::vec(any::<Index>(), 8),
    ) {
        if let Some(g) = pick(&mu, which) {
            let perm = permutation(g.tree().num_vertices(), &seed);
            let h = shuffle_vertices(&g, &perm);
            prop_assert_eq!(h.canonical_form(), g.canonical_form());
            prop_assert_eq!(h.canonicalized(), g);
        }
    }

    #[test]
    fn relabeled_strata_are_strata_of_relabeled_signature(
        mu in signature_strategy(4, 5),
        seed in prop::collection::vec(any::<Index>(), 8),
    ) {
        let perm = permutation(mu.n(), &seed);
        let nu = mu.permuted(&perm);
        let mut moved: Vec<Vec<u8>> = enumerate_strata(&mu, None)
            .unwrap()
            .iter()
            .map(|g| relabel_legs(g, &perm).canonical_form())
            .collect();
        moved.sort();
        let direct: Vec<Vec<u8>> = enumerate_strata(&nu, None).unwrap().iter().map(|g| g.canonical_form()).collect();
        prop_assert_eq!(moved, direct);
        prop_assert_eq!(census(&mu).unwrap().counts, census(&nu).unwrap().counts);
    }

    #[test]
    fn smoothness_ignores_leg_order(
        mu in signature_strategy(4, 6),
        seed in prop::collection::vec(any::<Index>(), 8),
    ) {
        let nu = mu.permuted(&permutation(mu.n(), &seed));
        prop_assert_eq!(classify_smooth(&mu).unwrap().smooth, classify_smooth(&nu).unwrap().smooth);
    }

    #[test]
    fn undegenerations_compose(mu in signature_strategy(4, 6), which in any::<Index>(), a in any::<Index>(), b in any::<Index>()) {
        if let Some(g) = pick(&mu, which) {
            let l = g.num_levels_below();
            if l >= 2 {
                let (i, j) = (a.index(l) + 1, b.index(l) + 1);
                prop_assume!(i != j);
                let (i, j) = (i.min(j), i.max(j));
                let two = g.undegenerate_with(&[i, j], &[]).unwrap();
                prop_assert_eq!(two.undegenerate_with(&[1], &[]).unwrap(), g.undegenerate_with(&[i], &[]).unwrap());
                prop_assert_eq!(two.undegenerate_with(&[2], &[]).unwrap(), g.undegenerate_with(&[j], &[]).unwrap());
            }
            let all: Vec<usize> = (1..=l).collect();
            prop_assert_eq!(g.undegenerate(&all).unwrap(), g.clone());
        }
    }

    #[test]
    fn orders_rederive_and_json_round_trips(mu in signature_strategy(4, 6), which in any::<Index>()) {
        if let Some(g) = pick(&mu, which) {
            prop_assert_eq!(&derive_orders(g.tree(), &mu).unwrap(), g.orders());
            let back = EnhancedLevelGraph::from_json_str(&g.to_json_string()).unwrap();
            prop_assert_eq!(back.canonical_form(), g.canonical_form());
            prop_assert_eq!(back.canonicalized(), g);
        }
    }

    #[test]
    fn snf_diagonal_divides_and_survives_unimodular_moves(m in small_matrix(), row in any::<Index>(), col in any::<Index>(), c in -3i64..=3) {
        let d = smith_normal_form_i64(&m);
        let nonzero: Vec<&BigInt> = d.iter().filter(|x| !x.is_zero()).collect();
        for w in nonzero.windows(2) {
            prop_assert!((w[1] % w[0]).is_zero());
        }
        prop_assert!(d.iter().all(|x| !x.is_negative()));
        let rows = m.len();
        let mut moved = m.clone();
        let (r0, r1) = (row.index(rows), (row.index(rows) + 1) % rows);
        if r0 != r1 {
            let add: Vec<i64> = moved[r1].iter().map(|x| c * x).collect();
            moved[r0].iter_mut().zip(add).for_each(|(x, y)| *x += y);
        }
        let cols = m[0].len();
        let (c0, c1) = (col.index(cols), (col.index(cols) + 1) % cols);
        if c0 != c1 {
            for r in moved.iter_mut() {
                r[c0] -= c * r[c1];
            }
        }
        prop_assert_eq!(smith_normal_form_i64(&moved), d);
    }

    #[test]
    fn ghost_order_ignores_edge_order_and_normalization(td in twist_strategy()) {
        let base = ghost_group_order(&td).ghost_order;
        let mut rev = td.edges.clone();
        rev.reverse();
        let reversed = TwistData::new(td.num_passages, rev).unwrap();
        prop_assert_eq!(ghost_group_order(&reversed).ghost_order, base.clone());
        prop_assert_eq!(ghost_group_order(&td.normalized()).ghost_order, base);
    }

    #[test]
    fn no_divisor_meets_itself(mu in signature_strategy(4, 6)) {
        let index = StrataIndex::build(&mu, &Options::default()).unwrap();
        for d in 0..index.num_divisors() {
            prop_assert!(index.strata_with_key(&[d, d]).is_empty());
        }
    }

    #[test]
    fn sequential_and_parallel_strata_agree(mu in signature_strategy(4, 6)) {
        let par = enumerate_strata_with(&mu, None, &Options::default()).unwrap();
        let seq = enumerate_strata_with(&mu, None, &Options::sequential()).unwrap();
        prop_assert_eq!(par, seq);
    }
}

#[test]
fn main_families_have_trivial_ghost_groups() {
    for n in 5..=7 {
        let mut pole = vec![0; n];
        pole[n - 1] = -2;
        let mut two = vec![0; n];
        two[n - 1] = -1;
        two[n - 2] = -1;
        for v in [pole, two] {
            let mu = Signature::new(v).unwrap();
            assert!(classify_smooth_full(&mu).unwrap().smooth, "{mu}");
        }
    }
    // One pole of order two: every enhancement is 1, so every ghost group
    // is trivial, at n = 8 as well.
    let mut v = vec![0; 8];
    v[7] = -2;
    let mu = Signature::new(v).unwrap();
    for tree in all_stable_trees(8, 8).unwrap().iter() {
        let orders = derive_orders(tree, &mu).unwrap();
        assert!((0..tree.num_edges()).all(|e| orders.kappa(e) == 1));
    }
}

#[test]
fn ghost_of_realized_graphs_matches_definition_at_small_size() {
    let mu = Signature::new(vec![2, 2, -2, -2, -2]).unwrap();
    for g in enumerate_strata(&mu, None).unwrap() {
        if g.num_levels_below() == 0 {
            continue;
        }
        let td = twist_data(&g).unwrap();
        assert_eq!(
            ghost_group_order(&td).ghost_order,
            num_bigint::BigUint::from(msd_core::lattice::ghost_order_by_cosets(&td))
        );
    }
}

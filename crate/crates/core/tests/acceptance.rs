//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Expected sets, formulas and brute-force checks are written out here
//! rather than taken from the library.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::process::ExitCode;
use std::time::Instant;

use msd_core::cherry::{all_cherries, classify_smooth, classify_smooth_full, is_cherry_realizable, smooth_scan};
use msd_core::cohomology::{
    build_blowup_plan, poincare_multiscale_with, PoincarePolynomial, TieBreak, TowerOptions,
};
use msd_core::geometry::{census, verify_unique_graph_in, StrataIndex};
use msd_core::graph::enumerate_level_structures;
use msd_core::lattice::{ghost_group_order, prong_orbit_count, twist_data, TwistData, TwistEdge};
use msd_core::strata::{enumerate_strata, Options};
use msd_core::tree::StableTree;
use msd_core::{EnhancedLevelGraph, LegSet, Signature};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn sig(v: &[i64]) -> Signature {
    Signature::new(v.to_vec()).unwrap()
}

fn sorted_desc(mut v: Vec<i64>) -> Vec<i64> {
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

fn in_box(v: &[i64], lo: i64, hi: i64) -> bool {
    v.iter().all(|x| (lo..=hi).contains(x))
}

// ---------------------------------------------------------------------------
// Family templates for the smoothness tables.

/// n = 5: (family number, template in one parameter).
fn five_point_templates() -> Vec<(usize, fn(i64) -> Vec<i64>)> {
    vec![
        (1, |a| vec![2 * a - 1, a - 1, -a, -a, -a]),
        (1, |a| vec![a, a, 0, -a - 1, -a - 1]),
        (2, |a| vec![4 * a - 2, a - 1, -a, -a, -3 * a + 1]),
        (3, |a| vec![3 * a - 1, 2 * a - 1, -a, -2 * a, -2 * a]),
        (3, |a| vec![2 * a - 1, 2 * a - 1, -a, -a, -2 * a]),
        (4, |a| vec![4 * a - 2, -a, -a, -a, -a]),
        (5, |a| vec![4 * a - 2, 4 * a - 2, -a, -a, -6 * a + 2]),
    ]
}

/// Members of the n = 5 families inside the box, sorted, with family numbers.
fn five_point_members(lo: i64, hi: i64) -> BTreeMap<Vec<i64>, BTreeSet<usize>> {
    let mut out: BTreeMap<Vec<i64>, BTreeSet<usize>> = BTreeMap::new();
    let range = -3 * (hi - lo + 2)..=3 * (hi - lo + 2);
    for (fam, t) in five_point_templates() {
        for a in range.clone() {
            let v = t(a);
            if in_box(&v, lo, hi) {
                out.entry(sorted_desc(v)).or_default().insert(fam);
            }
        }
    }
    for a in range {
        if (-2 - 2 * a) % 3 == 0 {
            let b = (-2 - 2 * a) / 3;
            let v = vec![a, a, b, b, b];
            if in_box(&v, lo, hi) {
                out.entry(sorted_desc(v)).or_default().insert(6);
            }
        }
    }
    out
}

fn six_point_members(lo: i64, hi: i64) -> BTreeSet<Vec<i64>> {
    let mut out: BTreeSet<Vec<i64>> = [
        vec![0, 0, 0, 0, 0, -2],
        vec![2, 0, -1, -1, -1, -1],
        vec![1, 0, 0, -1, -1, -1],
    ]
    .into_iter()
    .filter(|v| in_box(v, lo, hi))
    .map(sorted_desc)
    .collect();
    for a in -2 * (hi - lo)..=2 * (hi - lo) {
        let b = -1 - 2 * a;
        let v = vec![a, a, a, a, b, b];
        if in_box(&v, lo, hi) {
            out.insert(sorted_desc(v));
        }
    }
    out
}

fn seven_plus_members(n: usize) -> BTreeSet<Vec<i64>> {
    let mut a = vec![0; n];
    a[n - 1] = -2;
    let mut b = vec![0; n];
    b[n - 1] = -1;
    b[n - 2] = -1;
    [a, b].into_iter().collect()
}

fn scanned_smooth(n: usize, lo: i64, hi: i64) -> BTreeSet<Vec<i64>> {
    smooth_scan(n, lo, hi, &Options::default())
        .unwrap()
        .into_iter()
        .filter(|(_, v)| v.smooth)
        .map(|(mu, _)| mu.orders().to_vec())
        .collect()
}

fn criterion_1() -> Outcome {
    let (lo, hi) = (-8, 8);
    let mut notes = Vec::new();
    let mut pass = true;
    let expected: [(usize, BTreeSet<Vec<i64>>); 3] = [
        (5, five_point_members(lo, hi).into_keys().collect()),
        (6, six_point_members(lo, hi)),
        (7, seven_plus_members(7)),
    ];
    for (n, want) in expected {
        let got = scanned_smooth(n, lo, hi);
        let extra: Vec<_> = got.difference(&want).collect();
        let missing: Vec<_> = want.difference(&got).collect();
        if !extra.is_empty() || !missing.is_empty() {
            pass = false;
            notes.push(format!("n={n}: extra {extra:?}, missing {missing:?}"));
        } else {
            notes.push(format!("n={n}: {} smooth", got.len()));
        }
    }
    outcome(pass, format!("box [{lo},{hi}], {}", notes.join("; ")))
}

// ---------------------------------------------------------------------------
// Slanted cherries.

fn edge(kappa: u64, passages: &[usize]) -> TwistEdge {
    TwistEdge { kappa, passages: passages.to_vec() }
}

/// Index of `sum l_i Z` in `{x : kappa_e | sum over crossed passages}`,
/// counted over the fundamental box.
fn coset_count(td: &TwistData) -> u64 {
    let lcms: Vec<u64> = (1..=td.num_passages)
        .map(|i| {
            td.edges
                .iter()
                .filter(|e| e.passages.contains(&i))
                .fold(1u64, |acc, e| acc.lcm(&e.kappa))
        })
        .collect();
    let mut count = 0;
    let total: u64 = lcms.iter().product();
    for idx in 0..total {
        let mut rest = idx;
        let x: Vec<u64> = lcms
            .iter()
            .map(|&l| {
                let v = rest % l;
                rest /= l;
                v
            })
            .collect();
        if td
            .edges
            .iter()
            .all(|e| e.passages.iter().map(|&i| x[i - 1]).sum::<u64>() % e.kappa == 0)
        {
            count += 1;
        }
    }
    count
}

/// Upright slanted cherry for (a-1, 0, b-1, 0, -a-b): root {5} on top,
/// leaf {1,2} one level down, leaf {3,4} two levels down.
fn slanted_graph(a: u64, b: u64) -> EnhancedLevelGraph {
    let (a, b) = (a as i64, b as i64);
    let mu = sig(&[a - 1, 0, b - 1, 0, -a - b]);
    let tree = StableTree::new(
        5,
        vec![LegSet::from_labels(&[5]), LegSet::from_labels(&[1, 2]), LegSet::from_labels(&[3, 4])],
        vec![(0, 1), (0, 2)],
    )
    .unwrap();
    EnhancedLevelGraph::new(mu, tree, vec![0, -1, -2]).unwrap()
}

fn criterion_2() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for a in 1..=20u64 {
        for b in 1..=20u64 {
            let g = a.gcd(&b);
            // Upright slants: the longer edge carries b, then a. Inverted
            // slants: the edge from the higher leaf crosses both passages.
            let shapes = [
                (vec![edge(a, &[1]), edge(b, &[1, 2])], b / g),
                (vec![edge(b, &[1]), edge(a, &[1, 2])], a / g),
                (vec![edge(a, &[1, 2]), edge(b, &[2])], a / g),
                (vec![edge(b, &[1, 2]), edge(a, &[2])], b / g),
            ];
            for (edges, want) in shapes {
                let td = TwistData::new(2, edges).unwrap();
                let got = ghost_group_order(&td).ghost_order;
                let oracle = coset_count(&td);
                checked += 1;
                if got != BigUint::from(want) || oracle != want {
                    failures.push(format!("a={a} b={b}: got {got}, formula {want}, cosets {oracle}"));
                }
            }
            let g = slanted_graph(a, b);
            let td = twist_data(&g).unwrap();
            if ghost_group_order(&td).ghost_order != BigUint::from(b / a.gcd(&b)) {
                failures.push(format!("graph a={a} b={b}"));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("{checked} twist shapes and 400 realized graphs; failures: {:?}", failures.iter().take(3).collect::<Vec<_>>()),
    )
}

// ---------------------------------------------------------------------------
// Prong orbits on chains.

/// All trees on vertices `0..=l` via Prüfer sequences; vertex `i` sits at
/// level `-i`, so each edge (i, j), i < j, crosses passages i+1..=j.
fn chain_shapes(l: usize) -> Vec<Vec<(usize, usize)>> {
    let m = l + 1;
    if m == 2 {
        return vec![vec![(0, 1)]];
    }
    let len = m - 2;
    let mut out = Vec::new();
    let total = m.pow(len as u32);
    for code in 0..total {
        let mut seq = Vec::with_capacity(len);
        let mut c = code;
        for _ in 0..len {
            seq.push(c % m);
            c /= m;
        }
        let mut degree = vec![1usize; m];
        for &s in &seq {
            degree[s] += 1;
        }
        let mut edges = Vec::with_capacity(l);
        for &s in &seq {
            let leaf = (0..m).find(|&v| degree[v] == 1).unwrap();
            edges.push((leaf.min(s), leaf.max(s)));
            degree[leaf] -= 1;
            degree[s] -= 1;
        }
        let rest: Vec<usize> = (0..m).filter(|&v| degree[v] == 1).collect();
        edges.push((rest[0], rest[1]));
        out.push(edges);
    }
    out
}

fn chain_twist(shape: &[(usize, usize)], kappas: &[u64], l: usize) -> TwistData {
    let edges = shape
        .iter()
        .zip(kappas)
        .map(|(&(i, j), &k)| edge(k, &(i + 1..=j).collect::<Vec<_>>()))
        .collect();
    TwistData::new(l, edges).unwrap()
}

fn criterion_3() -> Outcome {
    let mut bad = Vec::new();
    let mut exhaustive = 0u64;
    for l in 1..=4usize {
        for shape in chain_shapes(l) {
            for code in 0..8u64.pow(l as u32) {
                let mut c = code;
                let kappas: Vec<u64> = (0..l)
                    .map(|_| {
                        let k = c % 8 + 1;
                        c /= 8;
                        k
                    })
                    .collect();
                exhaustive += 1;
                if !prong_orbit_count(&chain_twist(&shape, &kappas, l)).is_one() {
                    bad.push(format!("L={l} {shape:?} {kappas:?}"));
                }
            }
        }
    }
    // For L = 5, 6: the orbit count is prime to p whenever the square
    // crossing matrix is invertible mod p, and kappa = (p, .., p) yields
    // exactly that test. A 0/1 matrix of size at most 6 has determinant at
    // most 9 in absolute value, so primes up to 7 cover every kappa.
    let mut reduced = 0u64;
    for l in 5..=6usize {
        for shape in chain_shapes(l) {
            for p in [2u64, 3, 5, 7] {
                reduced += 1;
                if !prong_orbit_count(&chain_twist(&shape, &vec![p; l], l)).is_one() {
                    bad.push(format!("L={l} {shape:?} p={p}"));
                }
            }
        }
    }
    // Strata with one vertex per level.
    let mut strata_checked = 0u64;
    let mut memo: HashMap<TwistData, bool> = HashMap::new();
    for n in 3..=6usize {
        for mu in Signature::box_multisets(n, -6, 6) {
            for g in enumerate_strata(&mu, None).unwrap() {
                let l = g.num_levels_below();
                if l == 0 || g.tree().num_vertices() != l + 1 {
                    continue;
                }
                strata_checked += 1;
                let td = twist_data(&g).unwrap().normalized();
                let ok = *memo.entry(td.clone()).or_insert_with(|| prong_orbit_count(&td).is_one());
                if !ok {
                    bad.push(format!("{}: {g}", mu));
                }
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{exhaustive} chains exhaustively (L<=4, kappa<=8), {reduced} prime checks (L=5,6), {strata_checked} one-vertex-per-level strata (n<=6, box [-6,6]); failures {:?}",
            bad.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

// ---------------------------------------------------------------------------

fn criterion_4() -> Outcome {
    let mut failures = Vec::new();
    let mut sets = 0usize;
    let mut signatures = 0usize;
    for n in 3..=6usize {
        for mu in Signature::box_multisets(n, -4, 4) {
            signatures += 1;
            let index = StrataIndex::build(&mu, &Options::default()).unwrap();
            let max_codim = index.strata().iter().map(|g| g.codim()).max().unwrap_or(0);
            for r in 1..=max_codim.max(2) {
                let rep = verify_unique_graph_in(&index, r);
                sets += rep.checked;
                if !rep.passed() {
                    failures.push(format!("{mu} r={r}: {rep:?}"));
                }
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("{signatures} signatures (n<=6, box [-4,4]), {sets} intersecting divisor sets; failures {:?}", failures.iter().take(2).collect::<Vec<_>>()),
    )
}

fn criterion_5() -> Outcome {
    // Blowup counts by family; a signature in several families is held to
    // the lowest-numbered one (this is how family 3 at a = 0 gets 0).
    let expected_by_family: BTreeMap<usize, usize> = [(1, 0), (2, 1), (3, 2), (4, 3), (5, 4), (6, 6)].into_iter().collect();
    let mut failures = Vec::new();
    let mut overlaps = Vec::new();
    let members = five_point_members(-8, 8);
    for (v, fams) in &members {
        let count = census(&sig(v)).unwrap().exceptional_divisors.len();
        let lowest = *fams.iter().next().unwrap();
        if fams.len() > 1 {
            overlaps.push(format!("{v:?} in families {fams:?} has {count}"));
        }
        if count != expected_by_family[&lowest] {
            failures.push(format!("{v:?} (family {lowest}): {count}"));
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{} family members in box [-8,8]; overlapping parameters: {}; failures {:?}",
            members.len(),
            overlaps.join(", "),
            failures
        ),
    )
}

fn tower(mu: &Signature, tie_break: TieBreak, experimental: bool) -> PoincarePolynomial {
    poincare_multiscale_with(mu, &TowerOptions { tie_break, experimental, ..TowerOptions::default() }).unwrap()
}

fn well_formed(p: &PoincarePolynomial) -> bool {
    let b = &p.betti;
    b.first() == Some(&1)
        && b.last() == Some(&1)
        && b.iter().eq(b.iter().rev())
        && b.iter().skip(1).step_by(2).all(|&c| c == 0)
}

/// Rank of H^2 of the moduli of n-pointed rational curves.
fn keel_rank(n: usize) -> u64 {
    (1u64 << (n - 1)) - (n * (n - 1) / 2) as u64 - 1
}

/// Smooth signatures the tower accepts, with the experimental flag where needed.
fn tower_inputs() -> Vec<(Signature, bool)> {
    let mut out = Vec::new();
    for n in 3..=7usize {
        for v in seven_plus_members(n) {
            out.push((sig(&v), false));
            // One non-sorted representative as well.
            let mut r = v.clone();
            r.rotate_left(1);
            out.push((sig(&r), false));
        }
    }
    for v in five_point_members(-4, 4).into_keys().chain(six_point_members(-4, 4)) {
        out.push((sig(&v), true));
    }
    out
}

fn criterion_6() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    let a1 = tower(&sig(&[0, 0, 0, 0, -2]), TieBreak::Canonical, false).betti;
    let a2 = tower(&sig(&[2, 2, -2, -2, -2]), TieBreak::Canonical, true).betti;
    let ok_a = a1 == vec![1, 0, 8, 0, 1] && a2 == vec![1, 0, 11, 0, 1];
    pass &= ok_a;
    notes.push(format!("(a) {a1:?} {a2:?}"));
    let mu = sig(&[0, 0, 0, 0, 0, -2]);
    let b = tower(&mu, TieBreak::Canonical, false).betti;
    let exceptional = census(&mu).unwrap().exceptional_divisors.len() as u64;
    let ok_b = b == vec![1, 0, 41, 0, 41, 0, 1] && b[2] == keel_rank(6) + exceptional && exceptional == 25;
    pass &= ok_b;
    notes.push(format!("(b) {b:?}, c2 = {} + {exceptional}", keel_rank(6)));
    let mut checked = 0;
    for (mu, exp) in tower_inputs() {
        let base = tower(&mu, TieBreak::Canonical, exp);
        let others = [TieBreak::ReverseCanonical, TieBreak::Seeded(7), TieBreak::Seeded(2024)];
        let same = others.iter().all(|&t| tower(&mu, t, exp) == base);
        checked += 1;
        if !well_formed(&base) || !same {
            pass = false;
            notes.push(format!("(c) {mu}: {base}"));
        }
    }
    notes.push(format!("(c) {checked} signatures, 4 tie-breaks each"));
    outcome(pass, notes.join("; "))
}

// ---------------------------------------------------------------------------

/// BFS over prod Z/kappa_e, the i-th generator adding 1 on edges crossing i.
fn orbit_search(td: &TwistData) -> u64 {
    let k: Vec<u64> = td.edges.iter().map(|e| e.kappa).collect();
    let total: u64 = k.iter().product();
    let mut seen = vec![false; total as usize];
    let mut orbits = 0;
    let step = |x: u64, i: usize| -> u64 {
        let mut rest = x;
        let mut out = 0;
        let mut place = 1;
        for (e, &ke) in td.edges.iter().zip(&k) {
            let mut d = rest % ke;
            rest /= ke;
            if e.passages.contains(&i) {
                d = (d + 1) % ke;
            }
            out += d * place;
            place *= ke;
        }
        out
    };
    for s in 0..total {
        if seen[s as usize] {
            continue;
        }
        orbits += 1;
        seen[s as usize] = true;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for i in 1..=td.num_passages {
                let y = step(x, i);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    stack.push(y);
                }
            }
        }
    }
    orbits
}

/// Realizable iff some level structure puts the root strictly above both
/// leaves (strictly below, for inverted cherries).
fn realizable_by_levels(c: &msd_core::cherry::Cherry, mu: &Signature) -> bool {
    let tree = c.tree(mu.n());
    let mid = (0..3).find(|&v| tree.degree(v) == 2).unwrap();
    let leaves: Vec<usize> = (0..3).filter(|&v| v != mid).collect();
    enumerate_level_structures(&tree, mu).unwrap().iter().any(|g| {
        let (r, a, b) = (g.level(mid), g.level(leaves[0]), g.level(leaves[1]));
        if c.inverted {
            r < a && r < b
        } else {
            r > a && r > b
        }
    })
}

fn criterion_7() -> Outcome {
    let mut failures = Vec::new();
    // (i) cherry realizability against level structures.
    let mut cherries = 0u64;
    for n in 5..=7usize {
        let all = all_cherries(n);
        for mu in Signature::box_multisets(n, -5, 5) {
            for c in &all {
                cherries += 1;
                if is_cherry_realizable(c, &mu) != realizable_by_levels(c, &mu) {
                    failures.push(format!("cherry {c} on {mu}"));
                }
            }
        }
    }
    // (ii) classifier against the full ghost scan.
    let mut classified = 0u64;
    for n in 3..=6usize {
        for mu in Signature::box_multisets(n, -6, 6) {
            classified += 1;
            let fast = classify_smooth(&mu).unwrap().smooth;
            let full = classify_smooth_full(&mu).unwrap().smooth;
            if fast != full {
                failures.push(format!("classify {mu}: {fast} vs {full}"));
            }
        }
    }
    // (iii) prong orbits against BFS, over distinct twist data of strata
    // and all chains with L <= 3 whose enhancement product is at most 10^4.
    let mut twists: BTreeSet<Vec<(u64, Vec<usize>)>> = BTreeSet::new();
    let mut tds: Vec<TwistData> = Vec::new();
    let mut push = |td: TwistData| {
        let product: u64 = td.edges.iter().map(|e| e.kappa).product();
        let key: Vec<(u64, Vec<usize>)> = td.normalized().edges.iter().map(|e| (e.kappa, e.passages.clone())).collect();
        if product <= 10_000 && twists.insert(key) {
            tds.push(td);
        }
    };
    for n in 3..=6usize {
        let (lo, hi) = if n <= 5 { (-6, 6) } else { (-3, 3) };
        for mu in Signature::box_multisets(n, lo, hi) {
            for g in enumerate_strata(&mu, None).unwrap() {
                if g.num_levels_below() >= 1 {
                    push(twist_data(&g).unwrap());
                }
            }
        }
    }
    for l in 1..=3usize {
        for shape in chain_shapes(l) {
            for code in 0..6u64.pow(l as u32) {
                let mut c = code;
                let kappas: Vec<u64> = (0..l)
                    .map(|_| {
                        let k = c % 6 + 1;
                        c /= 6;
                        k
                    })
                    .collect();
                push(chain_twist(&shape, &kappas, l));
            }
        }
    }
    for td in &tds {
        if prong_orbit_count(td) != BigUint::from(orbit_search(td)) {
            failures.push(format!("prongs {td:?}"));
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{cherries} cherry/signature pairs (n<=7, box [-5,5]); {classified} signatures classified both ways (n<=6, box [-6,6]); {} distinct twist data against BFS; failures {:?}",
            tds.len(),
            failures.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for (mu, exp) in tower_inputs() {
        let opts = TowerOptions { experimental: exp, ..TowerOptions::default() };
        let plan = build_blowup_plan(&mu, &opts).unwrap();
        let exceptional = census(&mu).unwrap().exceptional_divisors.len();
        let c2 = poincare_multiscale_with(&mu, &opts).unwrap().h2();
        let expected = keel_rank(mu.n()) + exceptional as u64;
        checked += 1;
        if c2 != expected || plan.steps.len() != exceptional {
            failures.push(format!("{mu}: c2 {c2}, expected {expected}"));
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "h2 = Picard rank + exceptional divisors on {checked} smooth signatures (n<=7); the generation theorem itself is not a computation and is not checked; failures {failures:?}"
        ),
    )
}

fn main() -> ExitCode {
    // Honor the usual libtest filters loosely: `cargo test -- --list` etc.
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 smoothness tables", criterion_1),
        ("2 slanted cherry ghost orders", criterion_2),
        ("3 unique prong-matching class on chains", criterion_3),
        ("4 unique graph and ordering for divisor intersections", criterion_4),
        ("5 exceptional divisor counts for five points", criterion_5),
        ("6 Poincare polynomials", criterion_6),
        ("7 oracle equivalences", criterion_7),
        ("8 second Betti number cross-check", criterion_8),
    ];
    let mut all_pass = true;
    for (name, f) in criteria {
        let t = Instant::now();
        let o = f();
        all_pass &= o.pass;
        println!(
            "criterion {name}: {} ({:.1}s) {}",
            if o.pass { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            o.detail
        );
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

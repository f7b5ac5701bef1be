//! Named families of smooth signatures, matched up to permutation.

use crate::signature::Signature;

/// A family match: its position in the list for this `n` (1-based), the
/// template text and the parameters that produce the signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyMatch {
    pub index: usize,
    pub tag: &'static str,
    pub a: Option<i64>,
    pub b: Option<i64>,
}

type Template = fn(i64) -> Vec<i64>;

/// One-parameter templates for five points, grouped by family.
const FIVE_POINT: &[(usize, &str, Template)] = &[
    (1, "(2a-1,a-1,-a^3)", |a| vec![2 * a - 1, a - 1, -a, -a, -a]),
    (1, "(a^2,0,(-a-1)^2)", |a| vec![a, a, 0, -a - 1, -a - 1]),
    (2, "(4a-2,a-1,-a^2,-3a+1)", |a| vec![4 * a - 2, a - 1, -a, -a, -3 * a + 1]),
    (3, "(3a-1,2a-1,-a,(-2a)^2)", |a| vec![3 * a - 1, 2 * a - 1, -a, -2 * a, -2 * a]),
    (3, "((2a-1)^2,-a^2,-2a)", |a| vec![2 * a - 1, 2 * a - 1, -a, -a, -2 * a]),
    (4, "(4a-2,-a^4)", |a| vec![4 * a - 2, -a, -a, -a, -a]),
    (5, "((4a-2)^2,-a^2,-6a+2)", |a| vec![4 * a - 2, 4 * a - 2, -a, -a, -6 * a + 2]),
];

const FIVE_POINT_TWO_PARAM: &str = "(a^2,b^3), 2a+3b=-2";
const SIX_POINT_TWO_PARAM: &str = "(a^4,b^2), 2a+b=-1";

fn sorted_desc(mut v: Vec<i64>) -> Vec<i64> {
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

/// Candidate parameter values: every family entry is affine in `a` with
/// slope at most 6, so `|a|` is bounded by the largest entry plus 2.
fn parameter_range(mu: &Signature) -> std::ops::RangeInclusive<i64> {
    let m = mu.orders().iter().map(|x| x.abs()).max().unwrap_or(0) + 2;
    -m..=m
}

/// All family matches for `mu`, in list order. A signature can lie in
/// several families at special parameter values.
pub fn match_families(mu: &Signature) -> Vec<FamilyMatch> {
    let n = mu.n();
    let target = sorted_desc(mu.orders().to_vec());
    let count = |v: i64| target.iter().filter(|&&x| x == v).count();
    let mut out = Vec::new();
    match n {
        5 => {
            for &(index, tag, f) in FIVE_POINT {
                if let Some(a) = parameter_range(mu).find(|&a| sorted_desc(f(a)) == target) {
                    out.push(FamilyMatch { index, tag, a: Some(a), b: None });
                }
            }
            for a in parameter_range(mu) {
                if (-2 - 2 * a) % 3 == 0 {
                    let b = (-2 - 2 * a) / 3;
                    if sorted_desc(vec![a, a, b, b, b]) == target {
                        out.push(FamilyMatch { index: 6, tag: FIVE_POINT_TWO_PARAM, a: Some(a), b: Some(b) });
                        break;
                    }
                }
            }
        }
        6 => {
            let fixed: [(&str, Vec<i64>); 3] = [
                ("(0^5,-2)", vec![0, 0, 0, 0, 0, -2]),
                ("(2,0,-1^4)", vec![2, 0, -1, -1, -1, -1]),
                ("(1,0^2,-1^3)", vec![1, 0, 0, -1, -1, -1]),
            ];
            for (i, (tag, v)) in fixed.into_iter().enumerate() {
                if v == target {
                    out.push(FamilyMatch { index: i + 1, tag, a: None, b: None });
                }
            }
            for a in parameter_range(mu) {
                let b = -1 - 2 * a;
                if sorted_desc(vec![a, a, a, a, b, b]) == target {
                    out.push(FamilyMatch { index: 4, tag: SIX_POINT_TWO_PARAM, a: Some(a), b: Some(b) });
                    break;
                }
            }
        }
        n if n >= 7 => {
            if count(0) == n - 1 && count(-2) == 1 {
                out.push(FamilyMatch { index: 1, tag: "(0^{n-1},-2)", a: None, b: None });
            }
            if count(0) == n - 2 && count(-1) == 2 {
                out.push(FamilyMatch { index: 2, tag: "(0^{n-2},-1^2)", a: None, b: None });
            }
        }
        _ => {}
    }
    out
}

/// First matching family, if any.
pub fn family_tag(mu: &Signature) -> Option<FamilyMatch> {
    match_families(mu).into_iter().next()
}

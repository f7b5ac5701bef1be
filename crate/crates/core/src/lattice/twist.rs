//! Twist lattices, ghost-group orders and prong-matching orbits.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};

use super::snf::smith_normal_form;
use crate::error::{Error, Result};
use crate::graph::EnhancedLevelGraph;

/// One vertical edge: its enhancement and the passages it crosses.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TwistEdge {
    pub kappa: u64,
    pub passages: Vec<usize>,
}

/// Passage-crossing data of a level graph; horizontal edges are dropped.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwistData {
    #[serde(rename = "L")]
    pub num_passages: usize,
    pub edges: Vec<TwistEdge>,
}

impl TwistData {
    /// Checks enhancements are positive, each passage set is a nonempty
    /// interval inside `1..=L`, and every passage is crossed.
    pub fn new(num_passages: usize, edges: Vec<TwistEdge>) -> Result<Self> {
        let mut crossed = vec![false; num_passages + 1];
        for (e, edge) in edges.iter().enumerate() {
            if edge.kappa == 0 {
                return Err(Error::InvalidGraph(format!("edge {e}: enhancement must be positive")));
            }
            let p = &edge.passages;
            if p.is_empty() || p.windows(2).any(|w| w[1] != w[0] + 1) {
                return Err(Error::InvalidGraph(format!(
                    "edge {e}: passages {p:?} are not a nonempty interval"
                )));
            }
            if p[0] == 0 || *p.last().unwrap() > num_passages {
                return Err(Error::InvalidGraph(format!(
                    "edge {e}: passages {p:?} outside 1..={num_passages}"
                )));
            }
            for &i in p {
                crossed[i] = true;
            }
        }
        if let Some(i) = (1..=num_passages).find(|&i| !crossed[i]) {
            return Err(Error::InvalidGraph(format!("passage {i} is crossed by no edge")));
        }
        Ok(TwistData {
            num_passages,
            edges,
        })
    }

    /// Edges sorted; ghost orders and orbit counts do not depend on edge order.
    pub fn normalized(&self) -> TwistData {
        let mut edges = self.edges.clone();
        edges.sort();
        TwistData {
            num_passages: self.num_passages,
            edges,
        }
    }

    /// `lcm` of the enhancements crossing each passage, indexed from passage 1.
    pub fn passage_lcms(&self) -> Vec<BigUint> {
        (1..=self.num_passages)
            .map(|i| {
                self.edges
                    .iter()
                    .filter(|e| e.passages.contains(&i))
                    .fold(BigUint::one(), |acc, e| acc.lcm(&BigUint::from(e.kappa)))
            })
            .collect()
    }
}

/// Passage data of a graph with at least one level below the top.
pub fn twist_data(graph: &EnhancedLevelGraph) -> Result<TwistData> {
    let l = graph.num_levels_below();
    if l == 0 {
        return Err(Error::Precondition("graph has no level passages".into()));
    }
    let edges = (0..graph.num_edges())
        .filter(|&e| !graph.is_horizontal(e))
        .map(|e| TwistEdge {
            kappa: graph.kappa(e),
            passages: graph.passages(e),
        })
        .collect();
    TwistData::new(l, edges)
}

/// Order of the ghost group together with the Smith diagonal it comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeIndexResult {
    #[serde(serialize_with = "ser_big")]
    pub ghost_order: BigUint,
    #[serde(rename = "snf", serialize_with = "ser_big_vec")]
    pub snf_diagonal: Vec<BigUint>,
}

impl LatticeIndexResult {
    pub fn is_trivial(&self) -> bool {
        self.ghost_order.is_one()
    }
}

/// Index of the lattice generated by the edge vectors `(1/kappa_e) * sum of
/// crossed w_i` inside the lattice with basis `w_i / l_i`.
///
/// In the second basis an edge vector has coordinates `l_i / kappa_e` on
/// its crossed passages; the index is the product of the Smith diagonal.
pub fn ghost_group_order(td: &TwistData) -> LatticeIndexResult {
    let lcms = td.passage_lcms();
    let matrix: Vec<Vec<BigInt>> = td
        .edges
        .iter()
        .map(|e| {
            let kappa = BigUint::from(e.kappa);
            (1..=td.num_passages)
                .map(|i| {
                    if e.passages.contains(&i) {
                        let (q, r) = lcms[i - 1].div_rem(&kappa);
                        assert!(r.is_zero(), "passage lcm must be divisible by each crossing enhancement");
                        BigInt::from(q)
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    let diag: Vec<BigUint> = smith_normal_form(&matrix)
        .into_iter()
        .map(|d| d.to_biguint().expect("non-negative"))
        .collect();
    assert!(
        diag.len() == td.num_passages && diag.iter().all(|d| !d.is_zero()),
        "edge matrix must have full column rank"
    );
    let ghost_order = diag.iter().product();
    LatticeIndexResult {
        ghost_order,
        snf_diagonal: diag,
    }
}

/// Number of orbits of the level rotation group on prong-matchings.
///
/// The cokernel of `[A^T | diag(kappa)]`, where `A` is the edge-passage
/// crossing matrix.
pub fn prong_orbit_count(td: &TwistData) -> BigUint {
    let e = td.edges.len();
    let matrix: Vec<Vec<BigInt>> = td
        .edges
        .iter()
        .enumerate()
        .map(|(r, edge)| {
            let mut row: Vec<BigInt> = (1..=td.num_passages)
                .map(|i| BigInt::from(u8::from(edge.passages.contains(&i))))
                .collect();
            row.extend((0..e).map(|c| {
                if c == r {
                    BigInt::from(edge.kappa)
                } else {
                    BigInt::zero()
                }
            }));
            row
        })
        .collect();
    smith_normal_form(&matrix)
        .into_iter()
        .map(|d| d.to_biguint().expect("non-negative"))
        .product()
}

fn ser_big<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x.to_u64() {
        Some(v) => s.serialize_u64(v),
        None => s.serialize_str(&x.to_string()),
    }
}

fn ser_big_vec<S: Serializer>(xs: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    struct Big<'a>(&'a BigUint);
    impl Serialize for Big<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
            ser_big(self.0, s)
        }
    }
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&Big(x))?;
    }
    seq.end()
}

/// Brute-force index of `Tw^s` in `Tw`, by counting points of `Tw` in the
/// fundamental box of `Tw^s = sum l_i Z`.
///
/// Exponential; meant for cross-checks on small inputs.
pub fn ghost_order_by_cosets(td: &TwistData) -> u64 {
    let lcms: Vec<u64> = td
        .passage_lcms()
        .iter()
        .map(|x| x.to_u64().expect("small lcm"))
        .collect();
    let total: u64 = lcms.iter().product();
    let mut count = 0;
    let mut x = vec![0u64; lcms.len()];
    for mut idx in 0..total {
        for (slot, &l) in x.iter_mut().zip(&lcms) {
            *slot = idx % l;
            idx /= l;
        }
        let in_tw = td.edges.iter().all(|e| {
            let s: u64 = e.passages.iter().map(|&i| x[i - 1]).sum();
            s % e.kappa == 0
        });
        if in_tw {
            count += 1;
        }
    }
    count
}

/// Explicit orbit enumeration of the rotation action on `prod Z/kappa_e`.
pub fn prong_orbits_by_search(td: &TwistData) -> u64 {
    let kappas: Vec<u64> = td.edges.iter().map(|e| e.kappa).collect();
    let total: u64 = kappas.iter().product();
    let encode = |v: &[u64]| v.iter().zip(&kappas).rev().fold(0u64, |acc, (&x, &k)| acc * k + x);
    let decode = |mut c: u64| {
        kappas
            .iter()
            .map(|&k| {
                let x = c % k;
                c /= k;
                x
            })
            .collect::<Vec<u64>>()
    };
    let mut seen = vec![false; total as usize];
    let mut orbits = 0;
    for start in 0..total {
        if seen[start as usize] {
            continue;
        }
        orbits += 1;
        seen[start as usize] = true;
        let mut stack = vec![start];
        while let Some(c) = stack.pop() {
            let v = decode(c);
            for i in 1..=td.num_passages {
                let w: Vec<u64> = v
                    .iter()
                    .zip(&td.edges)
                    .map(|(&x, e)| if e.passages.contains(&i) { (x + 1) % e.kappa } else { x })
                    .collect();
                let d = encode(&w);
                if !seen[d as usize] {
                    seen[d as usize] = true;
                    stack.push(d);
                }
            }
        }
    }
    orbits
}

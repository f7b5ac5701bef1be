//! Poincaré polynomials of moduli spaces of stable pointed rational curves.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use super::poly::{PoincarePolynomial, Poly};
use crate::error::Result;
use crate::tree::{all_stable_trees, DEFAULT_MAX_N};

/// Compactly supported E-polynomial of the open moduli space with `m`
/// points: `(q-2)(q-3)..(q-(m-2))`.
pub fn open_e_polynomial(m: usize) -> Poly {
    (2..=m.saturating_sub(2) as i64).fold(Poly::one(), |acc, k| &acc * &Poly::linear(k))
}

/// Poincaré polynomial in `t^2`, summing the E-polynomials of all open strata.
pub fn m0bar_poly(n: usize, max_n: usize) -> Result<Poly> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Poly>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return Ok(p.clone());
    }
    let trees = all_stable_trees(n, max_n)?;
    let mut total = Poly::zero();
    for t in trees.iter() {
        let term = (0..t.num_vertices()).fold(Poly::one(), |acc, v| &acc * &open_e_polynomial(t.valence(v)));
        total = &total + &term;
    }
    cache.lock().unwrap().insert(n, total.clone());
    Ok(total)
}

pub fn poincare_m0bar(n: usize) -> Result<PoincarePolynomial> {
    poincare_m0bar_bounded(n, DEFAULT_MAX_N)
}

pub fn poincare_m0bar_bounded(n: usize, max_n: usize) -> Result<PoincarePolynomial> {
    let p = m0bar_poly(n, max_n)?;
    Ok(PoincarePolynomial::from_even(&p, n - 3))
}

/// Rank of the Picard group: `2^(n-1) - C(n, 2) - 1`.
pub fn picard_rank(n: usize) -> u64 {
    (1u64 << (n - 1)) - (n * (n - 1) / 2) as u64 - 1
}

//! Polynomials with integer coefficients and Poincaré polynomials.

use std::fmt;
use std::ops::{Add, Mul};

use serde::{Serialize, Serializer};

/// Dense polynomial in one variable, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly(Vec<i64>);

impl Poly {
    pub fn new(mut coeffs: Vec<i64>) -> Poly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Poly {
        Poly(Vec::new())
    }

    pub fn one() -> Poly {
        Poly(vec![1])
    }

    /// `x - c`.
    pub fn linear(c: i64) -> Poly {
        Poly::new(vec![-c, 1])
    }

    /// `x + x^2 + .. + x^(r-1)`.
    pub fn blowup_factor(r: usize) -> Poly {
        let mut c = vec![0; r.max(1)];
        for slot in c.iter_mut().skip(1) {
            *slot = 1;
        }
        Poly::new(c)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.0.get(i).copied().unwrap_or(0)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let len = self.0.len().max(rhs.0.len());
        Poly::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![0; self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }
}

/// Betti numbers `c_0, .., c_{2d}` of a smooth projective variety with
/// cohomology only in even degrees.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PoincarePolynomial {
    pub betti: Vec<u64>,
}

impl PoincarePolynomial {
    /// From a polynomial in `t^2`; `dim` fixes the top degree.
    pub fn from_even(p: &Poly, dim: usize) -> PoincarePolynomial {
        assert!(p.degree().is_none_or(|d| d <= dim), "degree exceeds dimension");
        let mut betti = vec![0u64; 2 * dim + 1];
        for i in 0..=dim {
            let c = p.coeff(i);
            assert!(c >= 0, "negative Betti number");
            betti[2 * i] = c as u64;
        }
        PoincarePolynomial { betti }
    }

    pub fn dim(&self) -> usize {
        (self.betti.len() - 1) / 2
    }

    /// `c_2`, the rank of the second cohomology.
    pub fn h2(&self) -> u64 {
        self.betti.get(2).copied().unwrap_or(0)
    }

    pub fn is_palindromic(&self) -> bool {
        self.betti.iter().eq(self.betti.iter().rev())
    }

    /// Palindromic, unit ends, odd degrees zero.
    pub fn is_well_formed(&self) -> bool {
        self.is_palindromic()
            && self.betti.first() == Some(&1)
            && self.betti.last() == Some(&1)
            && self.betti.iter().skip(1).step_by(2).all(|&c| c == 0)
    }
}

impl Serialize for PoincarePolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("PoincarePolynomial", 2)?;
        st.serialize_field("dim", &self.dim())?;
        st.serialize_field("betti", &self.betti)?;
        st.end()
    }
}

impl fmt::Display for PoincarePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .betti
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| match k {
                0 => c.to_string(),
                1 => format!("{c}t"),
                _ if c == 1 => format!("t^{k}"),
                _ => format!("{c}t^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

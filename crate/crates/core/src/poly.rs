//! Sparse multivariate polynomials over an exact field.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::scalar::Field;

pub type Exponent = Vec<u32>;

/// Exponent vector to coefficient, zero coefficients never stored. Terms
/// iterate in lexicographic exponent order.
#[derive(Clone, Debug, PartialEq)]
pub struct SparsePoly<S> {
    nvars: usize,
    terms: BTreeMap<Exponent, S>,
}

impl<S: Field> SparsePoly<S> {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: S) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn monomial(exponent: Exponent, c: S) -> Self {
        let mut p = Self::zero(exponent.len());
        p.add_term(exponent, c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, S)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, S> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: &[u32]) -> S {
        self.terms.get(e).cloned().unwrap_or_else(S::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn add_term(&mut self, e: Exponent, c: S) {
        assert_eq!(e.len(), self.nvars, "exponent arity mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coefficients(|c| -c.clone())
    }

    pub fn scale(&self, k: &S) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.clone() * k.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_filtered(other, |_| true)
    }

    /// Product keeping only exponents accepted by `keep`.
    pub(crate) fn mul_filtered(&self, other: &Self, keep: impl Fn(&[u32]) -> bool) -> Self {
        assert_eq!(self.nvars, other.nvars, "arity mismatch");
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                if keep(&e) {
                    out.add_term(e, c1.clone() * c2.clone());
                }
            }
        }
        out
    }

    pub fn map_coefficients<T: Field>(&self, f: impl Fn(&S) -> T) -> SparsePoly<T> {
        SparsePoly::from_terms(
            self.nvars,
            self.terms.iter().map(|(e, c)| (e.clone(), f(c))),
        )
    }

    /// Multiplies by the monomial `v^shift`.
    pub fn shift(&self, shift: &[u32]) -> Self {
        SparsePoly::from_terms(
            self.nvars,
            self.terms
                .iter()
                .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone())),
        )
    }

    /// `prod_i d^{orders_i}/dv_i^{orders_i}`.
    pub fn derivative(&self, orders: &[u32]) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e.iter().zip(orders).any(|(m, r)| m < r) {
                continue;
            }
            let factor = falling_factorial_product(e, orders);
            let coeff = c.clone() * c.embed_int(&factor);
            let exp = e.iter().zip(orders).map(|(m, r)| m - r).collect();
            out.add_term(exp, coeff);
        }
        out
    }
}

/// `[m]_r = prod_i m_i (m_i - 1) ... (m_i - r_i + 1)`.
pub fn falling_factorial_product(m: &[u32], r: &[u32]) -> BigInt {
    let mut acc = BigInt::from(1);
    for (&mi, &ri) in m.iter().zip(r) {
        for j in 0..ri {
            acc *= i64::from(mi) - i64::from(j);
        }
    }
    acc
}

impl<S: Field> fmt::Display for SparsePoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| {
                        if k == 1 {
                            format!("v{}", i + 1)
                        } else {
                            format!("v{}^{}", i + 1, k)
                        }
                    })
                    .collect();
                if mono.is_empty() {
                    format!("{c}")
                } else {
                    format!("{c}*{}", mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Fp};
    use num_rational::BigRational;

    #[test]
    fn product_and_cancellation() {
        let x = SparsePoly::monomial(vec![1, 0], rat(1, 1));
        let y = SparsePoly::monomial(vec![0, 1], rat(1, 1));
        let s = x.add(&y);
        let d = x.sub(&y);
        let prod = s.mul(&d);
        let expect = x.mul(&x).sub(&y.mul(&y));
        assert_eq!(prod, expect);
        assert!(s.sub(&s).is_zero());
    }

    #[test]
    fn derivative_mod_p() {
        // d^2/dv^2 of v^5 = 20 v^3 = 6 v^3 mod 7
        let p = SparsePoly::monomial(vec![5], Fp::new(1, 7));
        let d = p.derivative(&[2]);
        assert_eq!(d.coefficient(&[3]).value(), 6);
        // v^7 is killed by one derivative mod 7
        let q = SparsePoly::monomial(vec![7], Fp::new(1, 7));
        assert!(q.derivative(&[1]).is_zero());
    }

    #[test]
    fn derivative_below_order_vanishes() {
        let p = SparsePoly::monomial(vec![1, 2], BigRational::from_integer(3.into()));
        assert!(p.derivative(&[2, 0]).is_zero());
        assert_eq!(p.derivative(&[1, 1]).coefficient(&[0, 1]), rat(6, 1));
    }
}

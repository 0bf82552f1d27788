//! Commutative coefficient polynomials.
//!
//! A [`CoeffPoly`] is a finite map from exponent vectors to coefficients. The
//! map is a `BTreeMap`, so terms are always stored in lexicographic order of the
//! exponent vector (variable 0 most significant). Addition and scaling keep a
//! polynomial in normal form; products must go through
//! [`Algebra::mul`](super::Algebra::mul), which applies the `u`-relation.

use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_traits::ToPrimitive;

use crate::scalar::Scalar;

/// Exponent vector; its length is the variable count of the owning algebra.
pub type Monomial = Vec<u16>;

#[derive(Debug, Clone, PartialEq)]
pub struct CoeffPoly<R> {
    pub(crate) terms: BTreeMap<Monomial, R>,
}

impl<R: Scalar> CoeffPoly<R> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, R)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored (nonzero) terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &R)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: Monomial, c: R) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.clone(), x.clone() * c.clone()))
                .collect(),
        }
    }

    /// Product without any relation applied.
    pub(crate) fn raw_mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(m, ca.clone() * cb.clone());
            }
        }
        out
    }

    /// Coefficient of `var^k`, as a polynomial in the remaining variables.
    pub fn coefficient_of(&self, var: usize, k: u16) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m[var] == k {
                let mut m = m.clone();
                m[var] = 0;
                out.add_term(m, c.clone());
            }
        }
        out
    }

    /// Drops every term carrying `var^k` with `k >= degree`.
    pub fn truncate(&self, var: usize, degree: u16) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m[var] < degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn max_degree(&self, var: usize) -> u16 {
        self.terms.keys().map(|m| m[var]).max().unwrap_or(0)
    }

    /// Evaluates with one value per variable.
    pub fn eval(&self, values: &[R]) -> R {
        let mut acc = R::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (e, v) in m.iter().zip(values) {
                for _ in 0..*e {
                    t = t * v.clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Floating-point evaluation.
    pub fn eval_f64(&self, values: &[f64]) -> f64
    where
        R: ToPrimitive,
    {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.iter()
                    .zip(values)
                    .fold(c.to_f64().unwrap_or(f64::NAN), |t, (e, v)| {
                        t * v.powi(i32::from(*e))
                    })
            })
            .sum()
    }
}

impl<R: Scalar> Add for CoeffPoly<R> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl<R: Scalar> AddAssign for CoeffPoly<R> {
    fn add_assign(&mut self, rhs: Self) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl<R: Scalar> Sub for CoeffPoly<R> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= rhs;
        self
    }
}

impl<R: Scalar> SubAssign for CoeffPoly<R> {
    fn sub_assign(&mut self, rhs: Self) {
        for (m, c) in rhs.terms {
            self.add_term(m, -c);
        }
    }
}

impl<R: Scalar> Neg for CoeffPoly<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

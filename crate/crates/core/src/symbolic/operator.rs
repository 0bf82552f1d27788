//! Normal-ordered linear differential operators in momentum space.

use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_traits::ToPrimitive;

use crate::scalar::Scalar;

use super::algebra::Algebra;
use super::poly::CoeffPoly;

/// Derivative multi-index `(a_0, ..., a_D)` for `∂^{a_0}_{p^0} ⋯ ∂^{a_D}_{p^D}`.
pub type DerivIndex = Vec<u16>;

/// `Σ c_a(p) ∂^a`, coefficients to the left of derivatives.
///
/// Terms are keyed by derivative multi-index in lexicographic order and each
/// coefficient is itself a reduced [`CoeffPoly`], so the representation is the
/// normal form.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorExpr<R> {
    components: usize,
    terms: BTreeMap<DerivIndex, CoeffPoly<R>>,
}

impl<R: Scalar> OperatorExpr<R> {
    pub fn zero(components: usize) -> Self {
        Self {
            components,
            terms: BTreeMap::new(),
        }
    }

    pub fn multiplication(components: usize, c: CoeffPoly<R>) -> Self {
        let mut op = Self::zero(components);
        op.add_term(vec![0; components], c);
        op
    }

    pub fn derivative(components: usize, mu: usize, c: CoeffPoly<R>) -> Self {
        let mut idx = vec![0; components];
        idx[mu] = 1;
        let mut op = Self::zero(components);
        op.add_term(idx, c);
        op
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DerivIndex, &CoeffPoly<R>)> {
        self.terms.iter()
    }

    /// Number of derivative terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total number of monomials across all coefficients.
    pub fn monomial_count(&self) -> usize {
        self.terms.values().map(CoeffPoly::len).sum()
    }

    pub fn coefficient(&self, idx: &[u16]) -> Option<&CoeffPoly<R>> {
        self.terms.get(idx)
    }

    pub fn add_term(&mut self, idx: DerivIndex, c: CoeffPoly<R>) {
        assert_eq!(idx.len(), self.components, "derivative index length");
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(idx.clone()).or_insert_with(CoeffPoly::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&idx);
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        let mut out = Self::zero(self.components);
        for (idx, p) in &self.terms {
            out.add_term(idx.clone(), p.scale(c));
        }
        out
    }

    /// `c ∘ A` for a multiplication operator `c`.
    pub fn left_mul(&self, alg: &Algebra<R>, c: &CoeffPoly<R>) -> Self {
        let mut out = Self::zero(self.components);
        for (idx, p) in &self.terms {
            out.add_term(idx.clone(), alg.mul(c, p));
        }
        out
    }

    /// Applies `f` to every coefficient.
    pub fn map_coefficients(&self, f: impl Fn(&CoeffPoly<R>) -> CoeffPoly<R>) -> Self {
        let mut out = Self::zero(self.components);
        for (idx, p) in &self.terms {
            out.add_term(idx.clone(), f(p));
        }
        out
    }

    /// Normal form of `self ∘ rhs`.
    ///
    /// Each derivative of `self` is moved past the coefficients of `rhs` with
    /// the multivariate Leibniz rule
    /// `∂^a ∘ b = Σ_{c ≤ a} binom(a, c) (∂^c b) ∂^{a-c}`.
    pub fn compose(&self, alg: &Algebra<R>, rhs: &Self) -> Self {
        assert_eq!(self.components, rhs.components, "dimension mismatch");
        let n = self.components;
        let mut acc: BTreeMap<DerivIndex, CoeffPoly<R>> = BTreeMap::new();
        for (b_idx, b) in &rhs.terms {
            let mut derivs: HashMap<DerivIndex, CoeffPoly<R>> = HashMap::new();
            for (a_idx, a) in &self.terms {
                for c_idx in sub_indices(a_idx) {
                    let db = derivative_of(alg, &mut derivs, b, &c_idx);
                    if db.is_zero() {
                        continue;
                    }
                    let binom = c_idx
                        .iter()
                        .zip(a_idx)
                        .map(|(c, a)| binomial(*a, *c))
                        .product::<u64>();
                    let out_idx: DerivIndex =
                        (0..n).map(|i| a_idx[i] - c_idx[i] + b_idx[i]).collect();
                    let term = a.raw_mul(&db).scale(&R::from_u64(binom).unwrap());
                    *acc.entry(out_idx).or_insert_with(CoeffPoly::zero) += term;
                }
            }
        }
        let mut out = Self::zero(n);
        for (idx, c) in acc {
            out.add_term(idx, alg.reduce(c));
        }
        out
    }

    /// `[self, rhs] = self ∘ rhs - rhs ∘ self`.
    pub fn commutator(&self, alg: &Algebra<R>, rhs: &Self) -> Self {
        self.compose(alg, rhs) - rhs.compose(alg, self)
    }

    /// Acts on a coefficient-ring function `φ`: `Σ c_a ∂^a φ`.
    pub fn apply(&self, alg: &Algebra<R>, phi: &CoeffPoly<R>) -> CoeffPoly<R> {
        let mut derivs = HashMap::new();
        let mut out = CoeffPoly::zero();
        for (idx, c) in &self.terms {
            let d = derivative_of(alg, &mut derivs, phi, idx);
            out += alg.mul(c, &d);
        }
        out
    }

    /// Numerical action at one point: `values` assigns every ring variable and
    /// `derivative(a)` returns `∂^a φ` at that point.
    pub fn apply_at(&self, values: &[f64], derivative: impl Fn(&[u16]) -> f64) -> f64
    where
        R: ToPrimitive,
    {
        self.terms
            .iter()
            .map(|(idx, c)| c.eval_f64(values) * derivative(idx))
            .sum()
    }

    /// Keeps the coefficient of `var^k` in every term.
    pub fn coefficient_of(&self, var: usize, k: u16) -> Self {
        self.map_coefficients(|c| c.coefficient_of(var, k))
    }
}

fn derivative_of<R: Scalar>(
    alg: &Algebra<R>,
    cache: &mut HashMap<DerivIndex, CoeffPoly<R>>,
    base: &CoeffPoly<R>,
    idx: &[u16],
) -> CoeffPoly<R> {
    if let Some(d) = cache.get(idx) {
        return d.clone();
    }
    let d = match idx.iter().position(|&a| a > 0) {
        None => base.clone(),
        Some(mu) => {
            let mut lower = idx.to_vec();
            lower[mu] -= 1;
            let prev = derivative_of(alg, cache, base, &lower);
            alg.diff(&prev, mu)
        }
    };
    cache.insert(idx.to_vec(), d.clone());
    d
}

/// All multi-indices `c` with `c ≤ a` componentwise.
fn sub_indices(a: &[u16]) -> Vec<DerivIndex> {
    let mut out = vec![Vec::with_capacity(a.len())];
    for &ai in a {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=ai).map(move |ci| {
                    let mut v = prefix.clone();
                    v.push(ci);
                    v
                })
            })
            .collect();
    }
    out
}

fn binomial(n: u16, k: u16) -> u64 {
    let (n, k) = (u64::from(n), u64::from(k.min(n - k)));
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

impl<R: Scalar> Add for OperatorExpr<R> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl<R: Scalar> AddAssign for OperatorExpr<R> {
    fn add_assign(&mut self, rhs: Self) {
        assert_eq!(self.components, rhs.components, "dimension mismatch");
        for (idx, c) in rhs.terms {
            self.add_term(idx, c);
        }
    }
}

impl<R: Scalar> Sub for OperatorExpr<R> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= rhs;
        self
    }
}

impl<R: Scalar> SubAssign for OperatorExpr<R> {
    fn sub_assign(&mut self, rhs: Self) {
        assert_eq!(self.components, rhs.components, "dimension mismatch");
        for (idx, c) in rhs.terms {
            self.add_term(idx, -c);
        }
    }
}

impl<R: Scalar> Neg for OperatorExpr<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            components: self.components,
            terms: self.terms.into_iter().map(|(i, c)| (i, -c)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::Spacetime;
    use crate::symbolic::{Param, Symbol, SymbolicParams};
    use crate::Rational;

    fn alg(d: usize) -> Algebra<Rational> {
        Algebra::minkowski(Spacetime::new(d).unwrap(), SymbolicParams::symbolic())
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(5, 5), 1);
        assert_eq!(sub_indices(&[1, 2]).len(), 6);
    }

    #[test]
    fn leibniz_on_momentum() {
        let a = alg(1);
        let d1 = a.partial(1);
        let p1 = a.momentum(1);
        // ∂ ∘ p = p ∂ + 1
        let expected = OperatorExpr::derivative(2, 1, a.p(1)) + a.mult(a.one());
        assert_eq!(d1.compose(&a, &p1), expected);
        // p ∘ ∂ is already normal-ordered
        assert_eq!(p1.compose(&a, &d1), OperatorExpr::derivative(2, 1, a.p(1)));
    }

    #[test]
    fn derivative_past_u() {
        for d in 1..=3 {
            let a = alg(d);
            for mu in 0..=d {
                let lhs = a.partial(mu).compose(&a, &a.mult(a.u()));
                let u2 = a.mul(&a.u(), &a.u());
                let chain = a.mul(&a.mul(&a.beta(), &a.p_lower(mu)), &u2).scale(&Rational::from_integer(2.into()));
                let expected = OperatorExpr::derivative(d + 1, mu, a.u()) + a.mult(chain);
                assert_eq!(lhs, expected, "mu = {mu}");
            }
        }
    }

    #[test]
    fn derivative_past_u_agrees_numerically_on_monomials() {
        // (∂_μ ∘ u) φ evaluated against the difference quotient of u φ.
        let a = alg(1);
        let op = a.partial(1).compose(&a, &a.mult(a.u()));
        let (b, p0, p1) = (0.3f64, 0.4f64, 0.25f64);
        let u = |p0: f64, p1: f64| 1.0 / (1.0 - b * (p0 * p0 - p1 * p1));
        for deg in 0..=4 {
            let phi = |p1: f64| p1.powi(deg);
            let dphi = |p1: f64| if deg == 0 { 0.0 } else { f64::from(deg) * p1.powi(deg - 1) };
            let vals = [p0, p1, 0.0, b, 0.0, 0.0, u(p0, p1), 0.0];
            let got = op.apply_at(&vals, |idx| if idx[1] == 0 { phi(p1) } else { dphi(p1) });
            let step = 1e-5;
            let fd = (u(p0, p1 + step) * phi(p1 + step) - u(p0, p1 - step) * phi(p1 - step)) / (2.0 * step);
            assert!((got - fd).abs() < 1e-8, "deg {deg}: {got} vs {fd}");
        }
    }

    #[test]
    fn u_relation_is_applied() {
        let a = alg(2);
        let prod = a.mul(&a.u(), &a.one_minus_beta_s());
        assert_eq!(prod, a.one());
        // with numeric β
        let b = Algebra::minkowski(
            Spacetime::new(2).unwrap(),
            SymbolicParams {
                beta: Param::Value(Rational::new(1.into(), 3.into())),
                ..SymbolicParams::symbolic()
            },
        );
        assert_eq!(b.mul(&b.u(), &b.one_minus_beta_s()), b.one());
        assert_eq!(b.symbol(Symbol::Beta).len(), 1);
        // β = 0 collapses u
        let c = Algebra::minkowski(Spacetime::new(2).unwrap(), SymbolicParams::<Rational>::undeformed());
        assert_eq!(c.u(), c.one());
    }

    #[test]
    fn commutator_of_undeformed_pair() {
        let a = alg(3);
        for mu in 0..4 {
            for nu in 0..4 {
                let c = a.x(mu).commutator(&a, &a.momentum(nu));
                let expected = if mu == nu {
                    a.mult(a.h().scale(&-Rational::from_integer(a.metric(mu).into())))
                } else {
                    OperatorExpr::zero(4)
                };
                assert_eq!(c, expected);
                assert!(a.momentum(mu).commutator(&a, &a.momentum(nu)).is_zero());
            }
        }
    }

    #[test]
    fn position_examples() {
        let free = Algebra::minkowski(Spacetime::new(2).unwrap(), SymbolicParams::<Rational>::undeformed());
        for mu in 0..3 {
            assert_eq!(free.position(mu), free.x(mu));
        }
        // D = 1, μ = 1, β' = γ = 0: X¹ = h (1 - β((p⁰)² - (p¹)²)) ∂₁
        let a = Algebra::minkowski(
            Spacetime::new(1).unwrap(),
            SymbolicParams {
                beta_prime: Param::Value(Rational::from_integer(0.into())),
                gamma: Param::Value(Rational::from_integer(0.into())),
                ..SymbolicParams::symbolic()
            },
        );
        let coeff = a.mul(&a.h(), &a.one_minus_beta_s());
        assert_eq!(a.position(1), OperatorExpr::derivative(2, 1, coeff));
        // P^μ acting on p⁰p¹
        let phi = a.mul(&a.p(0), &a.p(1));
        assert_eq!(a.momentum(0).apply(&a, &phi), a.mul(&a.p(0), &phi));
    }
}

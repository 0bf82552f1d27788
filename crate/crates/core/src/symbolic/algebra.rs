//! The coefficient ring and the operator builders.
//!
//! Coefficients live in `Q[p^μ, h, β, β', γ, u, ε]` modulo the single relation
//! `u (1 - β s) = 1`, `s = p_ν p^ν`. Here `h` is the central symbol `iħ`, `u`
//! stands for `(1 - β s)^{-1}` and `ε` is a bookkeeping symbol for first-order
//! variations. Because the ideal is principal its generator is already a
//! Gröbner basis, so rewriting every occurrence of the leading monomial
//! `u β (p^0)²` (or `u (p^0)²` when `β` is a number) yields a unique remainder:
//! two coefficients are equal in the quotient ring iff their reduced term maps
//! coincide.

use std::fmt::{self, Display};

use crate::kinematics::Spacetime;
use crate::scalar::Scalar;

use super::operator::OperatorExpr;
use super::poly::{CoeffPoly, Monomial};

/// A deformation constant: either a free symbol or a fixed exact value.
#[derive(Debug, Clone, PartialEq)]
pub enum Param<R> {
    Symbolic,
    Value(R),
}

/// The three deformation constants as seen by the symbolic engine.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicParams<R> {
    pub beta: Param<R>,
    pub beta_prime: Param<R>,
    pub gamma: Param<R>,
}

impl<R: Scalar> SymbolicParams<R> {
    pub fn symbolic() -> Self {
        Self {
            beta: Param::Symbolic,
            beta_prime: Param::Symbolic,
            gamma: Param::Symbolic,
        }
    }

    pub fn undeformed() -> Self {
        Self {
            beta: Param::Value(R::zero()),
            beta_prime: Param::Value(R::zero()),
            gamma: Param::Value(R::zero()),
        }
    }

    /// `β = γ = 0` with `β'` symbolic.
    pub fn snyder() -> Self {
        Self {
            beta: Param::Value(R::zero()),
            beta_prime: Param::Symbolic,
            gamma: Param::Value(R::zero()),
        }
    }
}

/// How the momentum components are contracted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricMode {
    /// `D + 1` components with signature `(+, -, ..., -)`.
    Minkowski,
    /// `D` spatial components only, with the spatial block `g_{ij} = -δ_{ij}`
    /// of the Minkowski metric, so that `x^i = +h ∂/∂p^i` and `s = -p²`.
    Euclidean,
}

/// Symbol slots beyond the momentum components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symbol {
    P(usize),
    H,
    Beta,
    BetaPrime,
    Gamma,
    U,
    Eps,
}

/// Coefficient ring plus metric: everything needed to build and normal-order
/// operators.
#[derive(Debug, Clone)]
pub struct Algebra<R> {
    mode: MetricMode,
    metric: Vec<i8>,
    params: SymbolicParams<R>,
}

impl<R: Scalar> Algebra<R> {
    pub fn minkowski(st: Spacetime, params: SymbolicParams<R>) -> Self {
        Self {
            mode: MetricMode::Minkowski,
            metric: st.signature(),
            params,
        }
    }

    pub fn euclidean(spatial_dims: usize, params: SymbolicParams<R>) -> Self {
        assert!(spatial_dims > 0, "spatial dimension must be positive");
        Self {
            mode: MetricMode::Euclidean,
            metric: vec![-1; spatial_dims],
            params,
        }
    }

    pub fn mode(&self) -> MetricMode {
        self.mode
    }

    pub fn params(&self) -> &SymbolicParams<R> {
        &self.params
    }

    /// Number of momentum components carried by the ring.
    pub fn components(&self) -> usize {
        self.metric.len()
    }

    pub fn metric(&self, mu: usize) -> i8 {
        self.metric[mu]
    }

    pub fn nvars(&self) -> usize {
        self.components() + 6
    }

    pub fn var(&self, sym: Symbol) -> usize {
        let n = self.components();
        match sym {
            Symbol::P(mu) => {
                assert!(mu < n, "momentum index {mu} out of range");
                mu
            }
            Symbol::H => n,
            Symbol::Beta => n + 1,
            Symbol::BetaPrime => n + 2,
            Symbol::Gamma => n + 3,
            Symbol::U => n + 4,
            Symbol::Eps => n + 5,
        }
    }

    pub fn symbol_name(&self, var: usize) -> String {
        let n = self.components();
        let offset = usize::from(self.mode == MetricMode::Euclidean);
        match var.checked_sub(n) {
            None => format!("p{}", var + offset),
            Some(0) => "h".into(),
            Some(1) => "b".into(),
            Some(2) => "b'".into(),
            Some(3) => "g".into(),
            Some(4) => "u".into(),
            Some(5) => "eps".into(),
            _ => format!("?{var}"),
        }
    }

    // ---- coefficient constructors -------------------------------------

    fn unit_monomial(&self) -> Monomial {
        vec![0; self.nvars()]
    }

    pub fn constant(&self, c: R) -> CoeffPoly<R> {
        CoeffPoly::from_terms([(self.unit_monomial(), c)])
    }

    pub fn int(&self, n: i64) -> CoeffPoly<R> {
        self.constant(R::from_i64(n).expect("small integer"))
    }

    pub fn one(&self) -> CoeffPoly<R> {
        self.int(1)
    }

    pub fn symbol(&self, sym: Symbol) -> CoeffPoly<R> {
        let mut m = self.unit_monomial();
        m[self.var(sym)] = 1;
        CoeffPoly::from_terms([(m, R::one())])
    }

    fn param(&self, p: &Param<R>, sym: Symbol) -> CoeffPoly<R> {
        match p {
            Param::Symbolic => self.symbol(sym),
            Param::Value(v) => self.constant(v.clone()),
        }
    }

    /// Contravariant `p^μ`.
    pub fn p(&self, mu: usize) -> CoeffPoly<R> {
        self.symbol(Symbol::P(mu))
    }

    /// Covariant `p_μ = g_{μμ} p^μ`.
    pub fn p_lower(&self, mu: usize) -> CoeffPoly<R> {
        self.p(mu).scale(&self.sign(mu))
    }

    pub fn h(&self) -> CoeffPoly<R> {
        self.symbol(Symbol::H)
    }

    pub fn beta(&self) -> CoeffPoly<R> {
        self.param(&self.params.beta, Symbol::Beta)
    }

    pub fn beta_prime(&self) -> CoeffPoly<R> {
        self.param(&self.params.beta_prime, Symbol::BetaPrime)
    }

    pub fn gamma(&self) -> CoeffPoly<R> {
        self.param(&self.params.gamma, Symbol::Gamma)
    }

    /// `u = (1 - β s)^{-1}`.
    pub fn u(&self) -> CoeffPoly<R> {
        self.reduce(self.symbol(Symbol::U))
    }

    pub fn eps(&self) -> CoeffPoly<R> {
        self.symbol(Symbol::Eps)
    }

    /// `s = p_ν p^ν`.
    pub fn s(&self) -> CoeffPoly<R> {
        let mut out = CoeffPoly::zero();
        for mu in 0..self.components() {
            out += self.p(mu).raw_mul(&self.p_lower(mu));
        }
        out
    }

    /// `1 - β s`.
    pub fn one_minus_beta_s(&self) -> CoeffPoly<R> {
        self.one() - self.mul(&self.beta(), &self.s())
    }

    /// `2β - β' - (2β + β') β s`, the numerator of the `[X, X]` structure function.
    pub fn structure_numerator(&self) -> CoeffPoly<R> {
        let two_b = self.beta().scale(&R::from_i64(2).unwrap());
        let first = two_b.clone() - self.beta_prime();
        let second = self.mul(&(two_b + self.beta_prime()), &self.mul(&self.beta(), &self.s()));
        first - second
    }

    /// `g(s) = (1 - β s)^{-2} [2β - β' - (2β + β') β s]`, written with `u`.
    pub fn translation_deformation(&self) -> CoeffPoly<R> {
        let u = self.u();
        self.mul(&self.mul(&u, &u), &self.structure_numerator())
    }

    fn sign(&self, mu: usize) -> R {
        R::from_i8(self.metric[mu]).unwrap()
    }

    // ---- ring operations ----------------------------------------------

    pub fn mul(&self, a: &CoeffPoly<R>, b: &CoeffPoly<R>) -> CoeffPoly<R> {
        self.reduce(a.raw_mul(b))
    }

    /// Rewrites to the unique remainder modulo `u (1 - β s) - 1`.
    pub fn reduce(&self, poly: CoeffPoly<R>) -> CoeffPoly<R> {
        let iu = self.var(Symbol::U);
        let ib = self.var(Symbol::Beta);
        let lead = 0usize;
        let g00 = self.sign(lead);
        let mut out = CoeffPoly::zero();
        let mut stack: Vec<(Monomial, R)> = poly.terms.into_iter().collect();
        while let Some((m, c)) = stack.pop() {
            if c.is_zero() {
                continue;
            }
            if m[iu] == 0 {
                out.add_term(m, c);
                continue;
            }
            match &self.params.beta {
                Param::Value(b) if b.is_zero() => {
                    // u = 1
                    let mut m = m;
                    m[iu] = 0;
                    out.add_term(m, c);
                }
                Param::Symbolic => {
                    if m[ib] == 0 || m[lead] < 2 {
                        out.add_term(m, c);
                        continue;
                    }
                    // u β p0² = g00 (u - 1 - u β Σ_{μ≥1} g_μμ p_μ²)
                    let mut rest = m;
                    rest[iu] -= 1;
                    rest[ib] -= 1;
                    rest[lead] -= 2;
                    let c = c * g00.clone();
                    let mut with_u = rest.clone();
                    with_u[iu] += 1;
                    stack.push((with_u.clone(), c.clone()));
                    stack.push((rest, -c.clone()));
                    for mu in 1..self.components() {
                        let mut t = with_u.clone();
                        t[ib] += 1;
                        t[mu] += 2;
                        stack.push((t, -c.clone() * self.sign(mu)));
                    }
                }
                Param::Value(b) => {
                    if m[lead] < 2 {
                        out.add_term(m, c);
                        continue;
                    }
                    // u p0² = g00 ((u - 1)/b - u Σ_{μ≥1} g_μμ p_μ²)
                    let mut rest = m;
                    rest[iu] -= 1;
                    rest[lead] -= 2;
                    let c = c * g00.clone();
                    let cb = c.clone() / b.clone();
                    let mut with_u = rest.clone();
                    with_u[iu] += 1;
                    stack.push((with_u.clone(), cb.clone()));
                    stack.push((rest, -cb));
                    for mu in 1..self.components() {
                        let mut t = with_u.clone();
                        t[mu] += 2;
                        stack.push((t, -c.clone() * self.sign(mu)));
                    }
                }
            }
        }
        out
    }

    /// `∂/∂p^μ`, with `∂u/∂p^μ = 2 β p_μ u²`.
    pub fn diff(&self, poly: &CoeffPoly<R>, mu: usize) -> CoeffPoly<R> {
        let iu = self.var(Symbol::U);
        let mut plain = CoeffPoly::zero();
        let mut via_u = CoeffPoly::zero();
        for (m, c) in poly.terms() {
            if m[mu] > 0 {
                let mut d = m.clone();
                d[mu] -= 1;
                plain.add_term(d, c.clone() * R::from_u16(m[mu]).unwrap());
            }
            if m[iu] > 0 {
                // a u^{a-1} · u² = a u^{a+1}; the 2 β p_μ factor is applied below.
                let mut d = m.clone();
                d[iu] += 1;
                via_u.add_term(d, c.clone() * R::from_u16(m[iu]).unwrap());
            }
        }
        if via_u.is_zero() {
            return plain;
        }
        let chain = self.beta().raw_mul(&self.p_lower(mu)).scale(&R::from_i64(2).unwrap());
        plain + self.reduce(via_u.raw_mul(&chain))
    }

    /// Value assignment consistent with the relation: `u = 1/(1 - β s)`.
    pub fn assignment(&self, p: &[R], h: R, beta: R, beta_prime: R, gamma: R) -> Vec<R> {
        assert_eq!(p.len(), self.components());
        let beta = match &self.params.beta {
            Param::Value(v) => v.clone(),
            Param::Symbolic => beta,
        };
        let s = p
            .iter()
            .enumerate()
            .fold(R::zero(), |acc, (mu, x)| acc + self.sign(mu) * x.clone() * x.clone());
        let u = R::one() / (R::one() - beta.clone() * s);
        let mut v = p.to_vec();
        v.extend([h, beta, beta_prime, gamma, u, R::zero()]);
        v
    }

    pub fn display_poly<'a>(&'a self, poly: &'a CoeffPoly<R>) -> PolyDisplay<'a, R> {
        PolyDisplay { alg: self, poly }
    }

    // ---- operator builders --------------------------------------------

    pub fn mult(&self, c: CoeffPoly<R>) -> OperatorExpr<R> {
        OperatorExpr::multiplication(self.components(), c)
    }

    /// `∂/∂p^μ`.
    pub fn partial(&self, mu: usize) -> OperatorExpr<R> {
        OperatorExpr::derivative(self.components(), mu, self.one())
    }

    /// Undeformed contravariant position `x^μ = -h g^{μν} ∂/∂p^ν`.
    pub fn x(&self, mu: usize) -> OperatorExpr<R> {
        let c = self.h().scale(&-self.sign(mu));
        OperatorExpr::derivative(self.components(), mu, c)
    }

    /// `x_μ = -h ∂/∂p^μ`.
    pub fn x_lower(&self, mu: usize) -> OperatorExpr<R> {
        self.x(mu).scale(&self.sign(mu))
    }

    /// `p_ν x^ν = -h p^ν ∂_ν`.
    pub fn dilation(&self) -> OperatorExpr<R> {
        let mut out = OperatorExpr::zero(self.components());
        for nu in 0..self.components() {
            out += OperatorExpr::derivative(self.components(), nu, -self.h().raw_mul(&self.p(nu)));
        }
        out
    }

    /// Deformed position `X^μ = (1 - β s) x^μ - β' p^μ p_ν x^ν + h γ p^μ`.
    pub fn position(&self, mu: usize) -> OperatorExpr<R> {
        assert!(mu < self.components(), "index {mu} out of range");
        let a = self.x(mu).left_mul(self, &self.one_minus_beta_s());
        let b = self
            .dilation()
            .left_mul(self, &self.mul(&self.beta_prime(), &self.p(mu)));
        let c = self.mult(self.mul(&self.mul(&self.h(), &self.gamma()), &self.p(mu)));
        a - b + c
    }

    /// `X_μ = g_{μμ} X^μ`.
    pub fn position_lower(&self, mu: usize) -> OperatorExpr<R> {
        self.position(mu).scale(&self.sign(mu))
    }

    /// `P^μ = p^μ`.
    pub fn momentum(&self, mu: usize) -> OperatorExpr<R> {
        assert!(mu < self.components(), "index {mu} out of range");
        self.mult(self.p(mu))
    }

    pub fn momentum_lower(&self, mu: usize) -> OperatorExpr<R> {
        self.mult(self.p_lower(mu))
    }

    /// `L̂_{αβ} = u ∘ (X_α P_β - X_β P_α)`.
    pub fn lorentz_generator(&self, a: usize, b: usize) -> OperatorExpr<R> {
        let inner = self.position_lower(a).compose(self, &self.momentum_lower(b))
            - self.position_lower(b).compose(self, &self.momentum_lower(a));
        inner.left_mul(self, &self.u())
    }

    /// `P̂_α = u p_α`.
    pub fn translation_generator(&self, a: usize) -> OperatorExpr<R> {
        self.mult(self.mul(&self.u(), &self.p_lower(a)))
    }
}

pub struct PolyDisplay<'a, R> {
    alg: &'a Algebra<R>,
    poly: &'a CoeffPoly<R>,
}

impl<R: Scalar> Display for PolyDisplay<'_, R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.poly.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (v, e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*{}", self.alg.symbol_name(v))?,
                    _ => write!(f, "*{}^{e}", self.alg.symbol_name(v))?,
                }
            }
        }
        Ok(())
    }
}

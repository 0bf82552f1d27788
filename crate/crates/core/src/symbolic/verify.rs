//! Identity suites: the covariant algebra, the deformed Poincaré generators,
//! the transformations that leave the algebra invariant, and the Snyder and
//! Kempf reductions.
//!
//! Every check builds `lhs - rhs` as an operator in normal form and passes iff
//! it has no terms. Failures are reported, never thrown.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::Spacetime;
use crate::scalar::Scalar;

use super::algebra::{Algebra, Param, Symbol, SymbolicParams};
use super::operator::OperatorExpr;
use super::poly::CoeffPoly;

/// One identity and its outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub identity_id: String,
    pub latex_tag: String,
    pub pass: bool,
    pub residual_term_count: usize,
}

/// Serializes as a plain JSON list of [`IdentityCheck`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VerificationReport {
    pub entries: Vec<IdentityCheck>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        !self.entries.is_empty() && self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.entries.iter().filter(|e| !e.pass)
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.entries.extend(other.entries);
    }

    fn record<R: Scalar>(&mut self, id: String, latex: String, residual: &OperatorExpr<R>) {
        self.entries.push(IdentityCheck {
            identity_id: id,
            latex_tag: latex,
            pass: residual.is_zero(),
            residual_term_count: residual.monomial_count(),
        });
    }
}

/// Deliberate perturbations of the right-hand sides, used to show that the
/// checks can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgebraMutation {
    /// `β' → 2β'` in `[X, P]`.
    DoubledBetaPrime,
    /// `(1 - βs) → (1 + βs)` in `[X, P]`.
    FlippedMetricTerm,
    /// `2β → 3β` in the `[X, X]` numerator.
    TripledBeta,
    /// `(2β + β') → (2β - β')` in the `[X, X]` numerator.
    FlippedCrossTerm,
}

impl AlgebraMutation {
    pub const ALL: [Self; 4] = [
        Self::DoubledBetaPrime,
        Self::FlippedMetricTerm,
        Self::TripledBeta,
        Self::FlippedCrossTerm,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoincareMutation {
    /// `L̂_{αβ} = X_α P_β - X_β P_α` without the `u` prefactor.
    DropLorentzPrefactor,
    /// `P̂_α = p_α` instead of `u p_α`. Any `f(s) p_α` still closes `iso(D,1)`
    /// with `L̂` because `s` is a Lorentz scalar, so this mutation is only
    /// visible to the translation check in [`verify_transformation`].
    DropTranslationPrefactor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformationMutation {
    /// `g(s) → (1 - βs)^{-1} (2β - β')`.
    TruncatedTranslationDeformation,
    /// Translations generated by `p_α` instead of `P̂_α = u p_α`.
    UndeformedTranslationGenerator,
}

fn int<R: Scalar>(n: i64) -> R {
    R::from_i64(n).unwrap()
}

fn metric_sign<R: Scalar>(alg: &Algebra<R>, mu: usize) -> R {
    R::from_i8(alg.metric(mu)).unwrap()
}

/// Right-hand side numerator of `[X, X]`, optionally perturbed.
fn xx_numerator<R: Scalar>(alg: &Algebra<R>, mutation: Option<AlgebraMutation>) -> CoeffPoly<R> {
    let b = alg.beta();
    let bp = alg.beta_prime();
    let bs = alg.mul(&b, &alg.s());
    let two_b = b.scale(&int(match mutation {
        Some(AlgebraMutation::TripledBeta) => 3,
        _ => 2,
    }));
    let cross = match mutation {
        Some(AlgebraMutation::FlippedCrossTerm) => b.scale(&int(2)) - bp.clone(),
        _ => b.scale(&int(2)) + bp.clone(),
    };
    two_b - bp - alg.mul(&cross, &bs)
}

/// `P^μ X^ν - P^ν X^μ`.
fn px_antisym<R: Scalar>(alg: &Algebra<R>, x: &[OperatorExpr<R>], mu: usize, nu: usize) -> OperatorExpr<R> {
    x[nu].left_mul(alg, &alg.p(mu)) - x[mu].left_mul(alg, &alg.p(nu))
}

/// Checks `[X^μ, P^ν]`, `[X^μ, X^ν]` (with `u` and denominator-cleared) and
/// `[P^μ, P^ν]` for every ordered index pair.
pub fn verify_algebra<R: Scalar>(alg: &Algebra<R>) -> VerificationReport {
    verify_algebra_with(alg, None)
}

pub fn verify_algebra_with<R: Scalar>(
    alg: &Algebra<R>,
    mutation: Option<AlgebraMutation>,
) -> VerificationReport {
    let n = alg.components();
    let x: Vec<_> = (0..n).map(|mu| alg.position(mu)).collect();
    let p: Vec<_> = (0..n).map(|mu| alg.momentum(mu)).collect();
    let h = alg.h();
    let bp = match mutation {
        Some(AlgebraMutation::DoubledBetaPrime) => alg.beta_prime().scale(&int(2)),
        _ => alg.beta_prime(),
    };
    let metric_term = match mutation {
        Some(AlgebraMutation::FlippedMetricTerm) => alg.one() + alg.mul(&alg.beta(), &alg.s()),
        _ => alg.one_minus_beta_s(),
    };
    let numerator = xx_numerator(alg, mutation);
    let u_num = alg.mul(&alg.u(), &numerator);
    let cleared = alg.one_minus_beta_s();
    let tag = |s: &str, mu: usize, nu: usize| format!("{s}[{mu},{nu}]");

    let mut report = VerificationReport::default();
    for mu in 0..n {
        for nu in 0..n {
            // [X^μ, P^ν] + h[(1 - βs) g^{μν} - β' p^μ p^ν] = 0
            let mut rhs = alg.mul(&bp, &alg.mul(&alg.p(mu), &alg.p(nu))).scale(&-R::one());
            if mu == nu {
                rhs += metric_term.scale(&metric_sign(alg, mu));
            }
            let residual = x[mu].commutator(alg, &p[nu]) + alg.mult(alg.mul(&h, &rhs));
            report.record(
                tag("xp", mu, nu),
                format!(
                    "[X^{{{mu}}},P^{{{nu}}}]=-i\\hbar[(1-\\beta P_\\rho P^\\rho)g^{{{mu}{nu}}}-\\beta' P^{{{mu}}}P^{{{nu}}}]"
                ),
                &residual,
            );

            let xx = x[mu].commutator(alg, &x[nu]);
            let px = px_antisym(alg, &x, mu, nu);
            // [X^μ, X^ν] - h u (2β - β' - (2β+β')βs)(P^μX^ν - P^νX^μ) = 0
            let residual = xx.clone() - px.left_mul(alg, &alg.mul(&h, &u_num));
            report.record(
                tag("xx", mu, nu),
                format!("[X^{{{mu}}},X^{{{nu}}}]=i\\hbar\\frac{{2\\beta-\\beta'-(2\\beta+\\beta')\\beta P_\\rho P^\\rho}}{{1-\\beta P_\\rho P^\\rho}}(P^{{{mu}}}X^{{{nu}}}-P^{{{nu}}}X^{{{mu}}})"),
                &residual,
            );
            // (1 - βs)[X^μ, X^ν] - h (2β - β' - (2β+β')βs)(P^μX^ν - P^νX^μ) = 0
            let residual = xx.left_mul(alg, &cleared) - px.left_mul(alg, &alg.mul(&h, &numerator));
            report.record(
                tag("xx_cleared", mu, nu),
                format!("(1-\\beta P_\\rho P^\\rho)[X^{{{mu}}},X^{{{nu}}}]=i\\hbar(2\\beta-\\beta'-(2\\beta+\\beta')\\beta P_\\rho P^\\rho)(P^{{{mu}}}X^{{{nu}}}-P^{{{nu}}}X^{{{mu}}})"),
                &residual,
            );

            let residual = p[mu].commutator(alg, &p[nu]);
            report.record(tag("pp", mu, nu), format!("[P^{{{mu}}},P^{{{nu}}}]=0"), &residual);
        }
    }
    report
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect()
}

/// Checks that `L̂_{αβ}` and `P̂_α` realize `iso(D,1)`.
pub fn verify_poincare<R: Scalar>(alg: &Algebra<R>) -> VerificationReport {
    verify_poincare_with(alg, None)
}

pub fn verify_poincare_with<R: Scalar>(
    alg: &Algebra<R>,
    mutation: Option<PoincareMutation>,
) -> VerificationReport {
    let n = alg.components();
    let h = alg.h();
    let mut report = VerificationReport::default();

    let idx = pairs(n);
    let mut l = vec![vec![OperatorExpr::zero(n); n]; n];
    for &(a, b) in &idx {
        let gen = match mutation {
            Some(PoincareMutation::DropLorentzPrefactor) => {
                alg.position_lower(a).compose(alg, &alg.momentum_lower(b))
                    - alg.position_lower(b).compose(alg, &alg.momentum_lower(a))
            }
            _ => alg.lorentz_generator(a, b),
        };
        // L̂_{αβ} normal-orders to x_α p_β - x_β p_α.
        let plain = alg.x_lower(a).compose(alg, &alg.momentum_lower(b))
            - alg.x_lower(b).compose(alg, &alg.momentum_lower(a));
        report.record(
            format!("l_simplify[{a},{b}]"),
            format!("\\hat L_{{{a}{b}}}=x_{{{a}}}p_{{{b}}}-x_{{{b}}}p_{{{a}}}"),
            &(gen.clone() - plain),
        );
        l[b][a] = -gen.clone();
        l[a][b] = gen;
    }
    let p_hat: Vec<_> = (0..n)
        .map(|a| match mutation {
            Some(PoincareMutation::DropTranslationPrefactor) => alg.momentum_lower(a),
            _ => alg.translation_generator(a),
        })
        .collect();
    let g = |a: usize, b: usize| -> R {
        if a == b {
            metric_sign(alg, a)
        } else {
            R::zero()
        }
    };

    for &(a, b) in &idx {
        for &(r, s) in &idx {
            let lhs = l[a][b].commutator(alg, &l[r][s]);
            let combo = l[b][s].scale(&g(a, r)) - l[b][r].scale(&g(a, s)) - l[a][s].scale(&g(b, r))
                + l[a][r].scale(&g(b, s));
            let rhs = combo.left_mul(alg, &-h.clone());
            report.record(
                format!("ll[{a}{b},{r}{s}]"),
                format!("[\\hat L_{{{a}{b}}},\\hat L_{{{r}{s}}}]=-i\\hbar(g_{{{a}{r}}}\\hat L_{{{b}{s}}}-g_{{{a}{s}}}\\hat L_{{{b}{r}}}-g_{{{b}{r}}}\\hat L_{{{a}{s}}}+g_{{{b}{s}}}\\hat L_{{{a}{r}}})"),
                &(lhs - rhs),
            );
        }
    }
    for a in 0..n {
        for b in 0..n {
            report.record(
                format!("phat_phat[{a},{b}]"),
                format!("[\\hat P_{{{a}}},\\hat P_{{{b}}}]=0"),
                &p_hat[a].commutator(alg, &p_hat[b]),
            );
        }
    }
    for &(a, b) in &idx {
        for r in 0..n {
            let lhs = l[a][b].commutator(alg, &p_hat[r]);
            let rhs = (p_hat[a].scale(&g(b, r)) - p_hat[b].scale(&g(a, r))).left_mul(alg, &h);
            report.record(
                format!("l_phat[{a}{b},{r}]"),
                format!("[\\hat L_{{{a}{b}}},\\hat P_{{{r}}}]=i\\hbar(g_{{{b}{r}}}\\hat P_{{{a}}}-g_{{{a}{r}}}\\hat P_{{{b}}})"),
                &(lhs - rhs),
            );
        }
    }
    report
}

/// An infinitesimal Lorentz transformation or translation with exact entries.
#[derive(Debug, Clone, PartialEq)]
pub enum TransformationSpec<R> {
    /// Covariant antisymmetric `δω_{μν}`.
    Lorentz { omega: Vec<Vec<R>> },
    /// Contravariant `δa^μ`.
    Translation { shift: Vec<R> },
}

impl<R: Scalar> TransformationSpec<R> {
    pub fn lorentz(omega: Vec<Vec<R>>) -> Result<Self> {
        let n = omega.len();
        for (mu, row) in omega.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            for nu in 0..n {
                if row[nu] != -omega[nu][mu].clone() {
                    return Err(Error::NotAntisymmetric(mu, nu));
                }
            }
        }
        Ok(Self::Lorentz { omega })
    }

    pub fn translation(shift: Vec<R>) -> Self {
        Self::Translation { shift }
    }

    /// `δω = E_{αβ} - E_{βα}` for every `α < β`; by linearity, passing on this
    /// basis is equivalent to passing with symbolic `δω`.
    pub fn lorentz_basis(components: usize) -> Vec<Self> {
        pairs(components)
            .into_iter()
            .map(|(a, b)| {
                let mut omega = vec![vec![R::zero(); components]; components];
                omega[a][b] = R::one();
                omega[b][a] = -R::one();
                Self::Lorentz { omega }
            })
            .collect()
    }

    pub fn translation_basis(components: usize) -> Vec<Self> {
        (0..components)
            .map(|a| {
                let mut shift = vec![R::zero(); components];
                shift[a] = R::one();
                Self::Translation { shift }
            })
            .collect()
    }

    fn components(&self) -> usize {
        match self {
            Self::Lorentz { omega } => omega.len(),
            Self::Translation { shift } => shift.len(),
        }
    }

    fn label(&self) -> String {
        match self {
            Self::Lorentz { omega } => {
                let nz: Vec<String> = pairs(omega.len())
                    .into_iter()
                    .filter(|&(a, b)| !omega[a][b].is_zero())
                    .map(|(a, b)| format!("{a}{b}"))
                    .collect();
                format!("lorentz({})", nz.join(","))
            }
            Self::Translation { shift } => {
                let nz: Vec<String> = shift
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(a, _)| a.to_string())
                    .collect();
                format!("translation({})", nz.join(","))
            }
        }
    }
}

/// The three relations evaluated on arbitrary `(X, P)`, residuals only.
fn relation_residuals<R: Scalar>(
    alg: &Algebra<R>,
    x: &[OperatorExpr<R>],
    p: &[CoeffPoly<R>],
) -> Vec<(String, OperatorExpr<R>)> {
    let n = alg.components();
    let h = alg.h();
    let b = alg.beta();
    let bp = alg.beta_prime();
    let s = (0..n).fold(CoeffPoly::zero(), |acc, mu| {
        acc + alg.mul(&p[mu], &p[mu]).scale(&metric_sign(alg, mu))
    });
    let one_minus_bs = alg.one() - alg.mul(&b, &s);
    let numerator = b.scale(&int(2)) - bp.clone()
        - alg.mul(&(b.scale(&int(2)) + bp.clone()), &alg.mul(&b, &s));
    let p_ops: Vec<_> = p.iter().map(|c| alg.mult(c.clone())).collect();
    let mut out = Vec::new();
    for mu in 0..n {
        for nu in 0..n {
            let mut rhs = alg.mul(&bp, &alg.mul(&p[mu], &p[nu])).scale(&-R::one());
            if mu == nu {
                rhs += one_minus_bs.scale(&metric_sign(alg, mu));
            }
            out.push((
                format!("xp[{mu},{nu}]"),
                x[mu].commutator(alg, &p_ops[nu]) + alg.mult(alg.mul(&h, &rhs)),
            ));
            let px = x[nu].left_mul(alg, &p[mu]) - x[mu].left_mul(alg, &p[nu]);
            out.push((
                format!("xx_cleared[{mu},{nu}]"),
                x[mu].commutator(alg, &x[nu]).left_mul(alg, &one_minus_bs)
                    - px.left_mul(alg, &alg.mul(&h, &numerator)),
            ));
            out.push((format!("pp[{mu},{nu}]"), p_ops[mu].commutator(alg, &p_ops[nu])));
        }
    }
    out
}

/// Checks one infinitesimal transformation: its generator reproduces the
/// stated variations, and the algebra holds to first order for the
/// transformed operators.
pub fn verify_transformation<R: Scalar>(
    alg: &Algebra<R>,
    spec: &TransformationSpec<R>,
    mutation: Option<TransformationMutation>,
) -> Result<VerificationReport> {
    let n = alg.components();
    if spec.components() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: spec.components(),
        });
    }
    if let TransformationSpec::Lorentz { omega } = spec {
        TransformationSpec::lorentz(omega.clone())?;
    }
    let label = spec.label();
    let h = alg.h();
    let eps_var = alg.var(Symbol::Eps);
    let x: Vec<_> = (0..n).map(|mu| alg.position(mu)).collect();
    let mut report = VerificationReport::default();

    let (dx, dp): (Vec<OperatorExpr<R>>, Vec<CoeffPoly<R>>) = match spec {
        TransformationSpec::Lorentz { omega } => {
            // δω^μ_ν = g^{μμ} δω_{μν}
            let mixed = |mu: usize, nu: usize| metric_sign(alg, mu) * omega[mu][nu].clone();
            let upper = |a: usize, b: usize| metric_sign::<R>(alg, a) * metric_sign(alg, b) * omega[a][b].clone();
            let dx: Vec<_> = (0..n)
                .map(|mu| {
                    (0..n).fold(OperatorExpr::zero(n), |acc, nu| acc + x[nu].scale(&mixed(mu, nu)))
                })
                .collect();
            let dp: Vec<_> = (0..n)
                .map(|mu| {
                    (0..n).fold(CoeffPoly::zero(), |acc, nu| acc + alg.p(nu).scale(&mixed(mu, nu)))
                })
                .collect();
            let gens: Vec<Vec<Option<OperatorExpr<R>>>> = (0..n)
                .map(|a| {
                    (0..n)
                        .map(|b| (a != b && !omega[a][b].is_zero()).then(|| alg.lorentz_generator(a, b)))
                        .collect()
                })
                .collect();
            for mu in 0..n {
                // δX^μ = (i/2ħ) δω^{αβ}[L̂_{αβ}, X^μ]  ⇔  Σ δω^{αβ}[L̂_{αβ}, X^μ] = -2h δω^μ_ν X^ν
                let mut lhs_x = OperatorExpr::zero(n);
                let mut lhs_p = OperatorExpr::zero(n);
                for a in 0..n {
                    for b in 0..n {
                        if let Some(l) = &gens[a][b] {
                            let w = upper(a, b);
                            lhs_x += l.commutator(alg, &x[mu]).scale(&w);
                            lhs_p += l.commutator(alg, &alg.momentum(mu)).scale(&w);
                        }
                    }
                }
                let rhs_x = dx[mu].left_mul(alg, &h.scale(&int(-2)));
                let rhs_p = alg.mult(alg.mul(&h, &dp[mu]).scale(&int(-2)));
                report.record(
                    format!("{label}:dX[{mu}]"),
                    format!("\\delta X^{{{mu}}}=\\frac{{i}}{{2\\hbar}}\\delta\\omega^{{\\alpha\\beta}}[\\hat L_{{\\alpha\\beta}},X^{{{mu}}}]=\\delta\\omega^{{{mu}}}{{}}_\\nu X^\\nu"),
                    &(lhs_x - rhs_x),
                );
                report.record(
                    format!("{label}:dP[{mu}]"),
                    format!("\\delta P^{{{mu}}}=\\frac{{i}}{{2\\hbar}}\\delta\\omega^{{\\alpha\\beta}}[\\hat L_{{\\alpha\\beta}},P^{{{mu}}}]=\\delta\\omega^{{{mu}}}{{}}_\\nu P^\\nu"),
                    &(lhs_p - rhs_p),
                );
            }
            (dx, dp)
        }
        TransformationSpec::Translation { shift } => {
            let g_s = match mutation {
                Some(TransformationMutation::TruncatedTranslationDeformation) => {
                    alg.mul(&alg.u(), &(alg.beta().scale(&int(2)) - alg.beta_prime()))
                }
                _ => alg.translation_deformation(),
            };
            // δa_ν P^ν
            let a_dot_p = (0..n).fold(CoeffPoly::zero(), |acc, nu| {
                acc + alg.p(nu).scale(&(metric_sign::<R>(alg, nu) * shift[nu].clone()))
            });
            let numerator = alg.structure_numerator();
            let one_minus_bs = alg.one_minus_beta_s();
            let cleared_sq = alg.mul(&one_minus_bs, &one_minus_bs);
            let p_hat: Vec<_> = (0..n)
                .map(|a| match mutation {
                    Some(TransformationMutation::UndeformedTranslationGenerator) => {
                        alg.momentum_lower(a)
                    }
                    _ => alg.translation_generator(a),
                })
                .collect();
            let mut dx = Vec::with_capacity(n);
            for mu in 0..n {
                let delta = alg.constant(-shift[mu].clone())
                    - alg.mul(&g_s, &alg.mul(&a_dot_p, &alg.p(mu)));
                let mut lhs = OperatorExpr::zero(n);
                let mut lhs_p = OperatorExpr::zero(n);
                for a in 0..n {
                    if shift[a].is_zero() {
                        continue;
                    }
                    lhs += p_hat[a].commutator(alg, &x[mu]).scale(&shift[a]);
                    lhs_p += p_hat[a].commutator(alg, &alg.momentum(mu)).scale(&shift[a]);
                }
                // δX^μ = (i/ħ) δa^α[P̂_α, X^μ]  ⇔  δa^α[P̂_α, X^μ] = -h δX^μ
                let rhs = alg.mult(alg.mul(&h, &delta).scale(&-R::one()));
                report.record(
                    format!("{label}:dX[{mu}]"),
                    format!("\\frac{{i}}{{\\hbar}}\\delta a^\\alpha[\\hat P_\\alpha,X^{{{mu}}}]=-\\delta a^{{{mu}}}-g(P_\\rho P^\\rho)\\delta a_\\nu P^\\nu P^{{{mu}}}"),
                    &(lhs.clone() - rhs),
                );
                // Same identity multiplied through by (1 - βs)².
                let delta_cleared = alg.mul(&alg.constant(-shift[mu].clone()), &cleared_sq)
                    - alg.mul(
                        &match mutation {
                            Some(TransformationMutation::TruncatedTranslationDeformation) => {
                                alg.mul(&one_minus_bs, &(alg.beta().scale(&int(2)) - alg.beta_prime()))
                            }
                            _ => numerator.clone(),
                        },
                        &alg.mul(&a_dot_p, &alg.p(mu)),
                    );
                let residual = lhs.left_mul(alg, &cleared_sq)
                    - alg.mult(alg.mul(&h, &delta_cleared).scale(&-R::one()));
                report.record(
                    format!("{label}:dX_cleared[{mu}]"),
                    format!("(1-\\beta P_\\rho P^\\rho)^2\\delta a^\\alpha[\\hat P_\\alpha,X^{{{mu}}}]=i\\hbar(1-\\beta P_\\rho P^\\rho)^2\\delta X^{{{mu}}}"),
                    &residual,
                );
                report.record(
                    format!("{label}:dP[{mu}]"),
                    format!("\\delta a^\\alpha[\\hat P_\\alpha,P^{{{mu}}}]=0"),
                    &lhs_p,
                );
                dx.push(alg.mult(delta));
            }
            (dx, vec![CoeffPoly::zero(); n])
        }
    };

    // First-order invariance: substitute X + ε δX, P + ε δP and keep O(ε).
    let eps = alg.eps();
    let x_new: Vec<_> = (0..n)
        .map(|mu| x[mu].clone() + dx[mu].left_mul(alg, &eps))
        .collect();
    let p_new: Vec<_> = (0..n)
        .map(|mu| alg.p(mu) + alg.mul(&eps, &dp[mu]))
        .collect();
    for (id, residual) in relation_residuals(alg, &x_new, &p_new) {
        let through_first = residual.map_coefficients(|c| c.truncate(eps_var, 2));
        report.record(
            format!("{label}:invariance:{id}"),
            format!("\\delta\\,\\mathrm{{{id}}}=0"),
            &through_first,
        );
    }
    Ok(report)
}

/// Runs [`verify_transformation`] over the full Lorentz and translation bases.
pub fn verify_transformations<R: Scalar>(alg: &Algebra<R>) -> VerificationReport {
    let n = alg.components();
    let mut report = VerificationReport::default();
    for spec in TransformationSpec::lorentz_basis(n)
        .into_iter()
        .chain(TransformationSpec::translation_basis(n))
    {
        report.extend(verify_transformation(alg, &spec, None).expect("basis specs are valid"));
    }
    report
}

/// Snyder (`D = 3`, `β = γ = 0`) and Euclidean Kempf reductions.
pub fn verify_reductions<R: Scalar>(spatial_dims: usize) -> Result<VerificationReport> {
    let mut report = verify_snyder::<R>(spatial_dims)?;
    report.extend(verify_kempf::<R>(spatial_dims)?);
    Ok(report)
}

/// `[X^μ, X^ν]` with `β = γ = 0` and symbolic `β'`.
pub fn verify_snyder<R: Scalar>(spatial_dims: usize) -> Result<VerificationReport> {
    let mut report = VerificationReport::default();
    let st = Spacetime::new(spatial_dims)?;

    // Snyder: [X^μ, X^ν] = -h β' (P^μ X^ν - P^ν X^μ)
    let snyder = Algebra::minkowski(st, SymbolicParams::<R>::snyder());
    let n = snyder.components();
    let x: Vec<_> = (0..n).map(|mu| snyder.position(mu)).collect();
    for mu in 0..n {
        for nu in 0..n {
            let lhs = x[mu].commutator(&snyder, &x[nu]);
            let rhs = px_antisym(&snyder, &x, mu, nu)
                .left_mul(&snyder, &snyder.mul(&snyder.h(), &snyder.beta_prime()).scale(&-R::one()));
            report.record(
                format!("snyder:xx[{mu},{nu}]"),
                format!("[X^{{{mu}}},X^{{{nu}}}]=-i\\hbar\\beta'(P^{{{mu}}}X^{{{nu}}}-P^{{{nu}}}X^{{{mu}}})"),
                &(lhs - rhs),
            );
        }
    }

    Ok(report)
}

/// Euclidean mode: Kempf's algebra with symbolic parameters and the
/// canonical commutators at `β = β' = 0`.
pub fn verify_kempf<R: Scalar>(spatial_dims: usize) -> Result<VerificationReport> {
    Spacetime::new(spatial_dims)?;
    let kempf = Algebra::euclidean(spatial_dims, SymbolicParams::<R>::symbolic());
    let mut report = kempf_checks(&kempf, "kempf");

    // β = β' = 0 in Euclidean mode recovers the canonical commutators.
    let ccr = Algebra::euclidean(
        spatial_dims,
        SymbolicParams {
            beta: Param::Value(R::zero()),
            beta_prime: Param::Value(R::zero()),
            gamma: Param::Symbolic,
        },
    );
    let n = ccr.components();
    for i in 0..n {
        for j in 0..n {
            let xp = ccr.position(i).commutator(&ccr, &ccr.momentum(j));
            let expected = if i == j { ccr.mult(ccr.h()) } else { OperatorExpr::zero(n) };
            report.record(
                format!("ccr:xp[{i},{j}]"),
                format!("[X^{{{}}},P^{{{}}}]=i\\hbar\\delta^{{{}{}}}", i + 1, j + 1, i + 1, j + 1),
                &(xp - expected),
            );
            report.record(
                format!("ccr:xx[{i},{j}]"),
                format!("[X^{{{}}},X^{{{}}}]=0", i + 1, j + 1),
                &ccr.position(i).commutator(&ccr, &ccr.position(j)),
            );
        }
    }
    Ok(report)
}

/// Kempf's representation written out literally,
/// `X^i = (1 + βp²) x^i + β' p^i (p·x) + h γ p^i`, `x^i = h ∂/∂p^i`.
pub fn kempf_position<R: Scalar>(alg: &Algebra<R>, i: usize) -> OperatorExpr<R> {
    let n = alg.components();
    let p2 = (0..n).fold(CoeffPoly::zero(), |acc, j| acc + alg.mul(&alg.p(j), &alg.p(j)));
    let one_plus = alg.one() + alg.mul(&alg.beta(), &p2);
    let mut op = OperatorExpr::derivative(n, i, alg.mul(&one_plus, &alg.h()));
    for j in 0..n {
        let c = alg.mul(&alg.mul(&alg.beta_prime(), &alg.p(i)), &alg.mul(&alg.p(j), &alg.h()));
        op += OperatorExpr::derivative(n, j, c);
    }
    op + alg.mult(alg.mul(&alg.mul(&alg.h(), &alg.gamma()), &alg.p(i)))
}

fn kempf_checks<R: Scalar>(alg: &Algebra<R>, prefix: &str) -> VerificationReport {
    let n = alg.components();
    let h = alg.h();
    let b = alg.beta();
    let bp = alg.beta_prime();
    let p2 = (0..n).fold(CoeffPoly::zero(), |acc, j| acc + alg.mul(&alg.p(j), &alg.p(j)));
    let one_plus = alg.one() + alg.mul(&b, &p2);
    let x: Vec<_> = (0..n).map(|i| kempf_position(alg, i)).collect();
    let mut report = VerificationReport::default();
    for i in 0..n {
        report.record(
            format!("{prefix}:representation[{i}]"),
            format!("X^{{{0}}}=(1+\\beta p^2)x^{{{0}}}+\\beta' p^{{{0}}}(p\\cdot x)+i\\hbar\\gamma p^{{{0}}}", i + 1),
            &(alg.position(i) - x[i].clone()),
        );
    }
    // numerator of Eq. (1): 2β - β' + (2β + β') β P²
    let numerator = b.scale(&int(2)) - bp.clone()
        + alg.mul(&(b.scale(&int(2)) + bp.clone()), &alg.mul(&b, &p2));
    for i in 0..n {
        for j in 0..n {
            let (ti, tj) = (i + 1, j + 1);
            // [X^i, P^j] = -h[(1 + βP²) g^{ij} - β' P^i P^j], g^{ij} = -δ^{ij}
            let mut rhs = alg.mul(&bp, &alg.mul(&alg.p(i), &alg.p(j)));
            if i == j {
                rhs += one_plus.clone();
            }
            let lhs = x[i].commutator(alg, &alg.momentum(j));
            report.record(
                format!("{prefix}:xp[{i},{j}]"),
                format!("[X^{{{ti}}},P^{{{tj}}}]=-i\\hbar[(1+\\beta P^2)g^{{{ti}{tj}}}-\\beta' P^{{{ti}}}P^{{{tj}}}]"),
                &(lhs - alg.mult(alg.mul(&h, &rhs))),
            );
            let xx = x[i].commutator(alg, &x[j]);
            let px = x[j].left_mul(alg, &alg.p(i)) - x[i].left_mul(alg, &alg.p(j));
            report.record(
                format!("{prefix}:xx[{i},{j}]"),
                format!("[X^{{{ti}}},X^{{{tj}}}]=i\\hbar\\frac{{2\\beta-\\beta'+(2\\beta+\\beta')\\beta P^2}}{{1+\\beta P^2}}(P^{{{ti}}}X^{{{tj}}}-P^{{{tj}}}X^{{{ti}}})"),
                &(xx.clone() - px.left_mul(alg, &alg.mul(&alg.u(), &alg.mul(&h, &numerator)))),
            );
            report.record(
                format!("{prefix}:xx_cleared[{i},{j}]"),
                format!("(1+\\beta P^2)[X^{{{ti}}},X^{{{tj}}}]=i\\hbar(2\\beta-\\beta'+(2\\beta+\\beta')\\beta P^2)(P^{{{ti}}}X^{{{tj}}}-P^{{{tj}}}X^{{{ti}}})"),
                &(xx.left_mul(alg, &one_plus) - px.left_mul(alg, &alg.mul(&h, &numerator))),
            );
            report.record(
                format!("{prefix}:pp[{i},{j}]"),
                format!("[P^{{{ti}}},P^{{{tj}}}]=0"),
                &alg.momentum(i).commutator(alg, &alg.momentum(j)),
            );
        }
    }
    report
}

use approx::assert_relative_eq;
use minlen_core::dirac::*;
use minlen_core::symbolic::{Algebra, OperatorExpr, Param, SymbolicParams};
use minlen_core::{Error, Rational};
use num_traits::FromPrimitive;
use proptest::prelude::*;

fn qn(n: u64, tau: i8) -> QuantumNumber {
    QuantumNumber::new(n, tau).unwrap()
}

fn params(b: f64, w: f64) -> DOParams<f64> {
    DOParams::new(b, w).unwrap()
}

/// Normalized Hermite function of order `k` with width `√ω` (recurrence).
fn hermite_function(k: usize, omega: f64, p: f64) -> f64 {
    let x = p / omega.sqrt();
    let g = (-x * x / 2.0).exp() / (std::f64::consts::PI * omega).powf(0.25);
    let (mut h0, mut h1) = (g, std::f64::consts::SQRT_2 * x * g);
    if k == 0 {
        return h0;
    }
    for j in 1..k {
        let next = (2.0 / (j as f64 + 1.0)).sqrt() * x * h1 - (j as f64 / (j as f64 + 1.0)).sqrt() * h0;
        h0 = h1;
        h1 = next;
    }
    h1
}

/// Gegenbauer polynomial `C_n^λ(x)` by recurrence.
fn gegenbauer(n: usize, lambda: f64, x: f64) -> f64 {
    let (mut c0, mut c1) = (1.0, 2.0 * lambda * x);
    if n == 0 {
        return c0;
    }
    for m in 2..=n {
        let m = m as f64;
        let next = (2.0 * x * (m + lambda - 1.0) * c1 - (m + 2.0 * lambda - 2.0) * c0) / m;
        c0 = c1;
        c1 = next;
    }
    c1
}

proptest! {
    #[test]
    fn self_consistency(b in 0.0f64..0.999, w in 1e-3f64..2.0, n in 0u64..1000, minus in any::<bool>()) {
        let tau = if minus && n > 0 { -1 } else { 1 };
        let p = params(b, w);
        let p0 = p0_allowed(&p, qn(n, tau));
        let k = k_factor(&p, n);
        let e = e_formula(&p, n, p0);
        prop_assert!((e - (p0 * p0 - 1.0)).abs() <= 1e-13 * (k + p0 * p0));
    }

    #[test]
    fn acceptability_holds_for_every_level(b in 0.0f64..0.999_999, w in 1e-4f64..5.0, n in 0u64..100_000) {
        let p = params(b, w);
        let p0 = p0_allowed(&p, qn(n, 1));
        prop_assert!(b * p0 * p0 < 1.0);
        prop_assert!(p.c0(p0) > 0.0);
    }

    #[test]
    fn closed_forms_agree(b in 1e-3f64..0.999, w in 1e-3f64..1.0, n in 0u64..200) {
        let p = params(b, w);
        prop_assert!(p0_cross_check(&p, qn(n, 1)).unwrap() < 1e-12);
    }

    #[test]
    fn energy_is_rest_energy_times_p0(b in 0.0f64..0.99, w in 1e-3f64..1.0, n in 0u64..500, m in 0.1f64..10.0, c in 0.5f64..3.0) {
        let units = PhysicalUnits::new(m, c, 1.0).unwrap();
        let p = params(b, w).with_units(units);
        let e = energy(&p, qn(n, 1));
        prop_assert!((e - m * c * c * p0_allowed(&p, qn(n, 1))).abs() <= 1e-14 * e.abs());
        if b > 0.0 {
            let bound = c / p.beta().unwrap().sqrt();
            prop_assert!(e < bound && e >= m * c * c);
        }
    }
}

#[test]
fn undeformed_limit_is_linear_in_beta() {
    let w = 0.1;
    let errs: Vec<f64> = [1e-3, 1e-4, 1e-5]
        .iter()
        .map(|&b| {
            let p = params(b, w);
            (0..=20)
                .map(|n| (energy(&p, qn(n, 1)) - (1.0 + 2.0 * w * n as f64).sqrt()).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    for pair in errs.windows(2) {
        let ratio = pair[0] / pair[1];
        assert!((8.0..=12.0).contains(&ratio), "ratio {ratio}");
    }
}

#[test]
fn strictly_increasing_and_bounded_up_to_1e5() {
    for b in [0.1, 0.5, 0.9] {
        let p = params(b, 0.1);
        let bound = 1.0 / b.sqrt();
        let mut last = 0.0;
        for n in 0..=100_000u64 {
            let e = energy(&p, qn(n, 1));
            assert!(e > last, "b={b} n={n}");
            assert!(e < bound);
            last = e;
        }
    }
}

#[test]
fn diagnostic_mode_flags_decrease() {
    let t = spectrum_table(&DOParams::diagnostic(1.5, 0.1).unwrap(), 20);
    assert!(t.monotonicity_violated);
    assert!(t.levels.iter().all(|l| !l.physical));
    assert!(matches!(DOParams::new(1.5, 0.1), Err(Error::Unphysical(_))));
}

#[test]
fn eigen_oracle_matches_closed_form() {
    for b in [0.1, 0.5] {
        for w in [0.1, 0.5] {
            let p = params(b, w);
            let p0 = p0_allowed(&p, qn(2, 1));
            let sol = eigensolve_factorized(&p, p0, 6, &GridSpec::default()).unwrap();
            let e1 = e_formula(&p, 1, p0);
            for (k, &ev) in sol.eigenvalues.iter().enumerate() {
                let exact = e_formula(&p, k as u64, p0);
                let scale = if k == 0 { e1 } else { exact };
                assert!((ev - exact).abs() <= 1e-5 * scale, "b={b} w={w} k={k}");
                assert!(sol.observed_order[k].unwrap() >= 2.0);
            }
        }
    }
}

#[test]
fn second_order_scheme_converges_quadratically() {
    let p = params(0.5, 0.1);
    let p0 = p0_allowed(&p, qn(2, 1));
    let spec = GridSpec::new(512, 2).unwrap().with_scheme(Scheme::Central2);
    let sol = eigensolve_factorized(&p, p0, 4, &spec).unwrap();
    for (k, order) in sol.observed_order.iter().enumerate() {
        let order = order.unwrap();
        assert!((order - 2.0).abs() < 0.01, "k={k} order {order}");
        let exact = e_formula(&p, k as u64, p0);
        assert!((sol.eigenvalues[k] - exact).abs() < 1e-7 * exact.max(0.1));
    }
}

#[test]
fn undeformed_box_recovers_oscillator() {
    let p = params(0.0, 0.25);
    let sol = eigensolve_factorized(&p, 1.0, 5, &GridSpec::default()).unwrap();
    for (k, &ev) in sol.eigenvalues.iter().enumerate() {
        assert!((ev - 0.5 * k as f64).abs() < 1e-8, "k={k}: {ev}");
    }
}

#[test]
fn partner_spectrum_drops_the_zero_mode() {
    let p = params(0.5, 0.1);
    let p0 = p0_allowed(&p, qn(3, 1));
    let spec = GridSpec::default();
    let h = eigensolve_factorized(&p, p0, 5, &spec).unwrap();
    let partner = eigensolve_partner(&p, p0, 4, &spec).unwrap();
    assert!(h.eigenvalues[0].abs() < 1e-9);
    for k in 0..4 {
        assert_relative_eq!(partner.eigenvalues[k], h.eigenvalues[k + 1], max_relative = 1e-8);
    }
}

#[test]
fn tau_minus_zero_mode_is_absent() {
    for (b, w) in [(0.0, 0.1), (0.1, 0.5), (0.5, 0.1)] {
        let z = search_tau_minus_zero_mode(&params(b, w), &GridSpec::default()).unwrap();
        assert!(!z.found);
        assert_relative_eq!(z.partner_floor, z.gap, max_relative = 1e-8);
    }
    assert!(QuantumNumber::new(0, -1).is_err());
}

#[test]
fn ground_state_closed_form() {
    let spec = GridSpec::default();
    let g = ground_state(&params(0.5, 0.1), 1.0, &spec).unwrap();
    assert!((g.norm_squared() - 1.0).abs() < 1e-12);
    assert!(g.metadata.residual_lower <= 1e-8);
    assert!(g.psi2.iter().all(|&x| x == 0.0));
    // (0.5 + 0.5 p²)^(-10), normalized by the same quadrature
    let raw: Vec<f64> = g.grid.p.iter().map(|p| (0.5 + 0.5 * p * p).powi(-10)).collect();
    let norm = (raw.iter().map(|x| x * x).sum::<f64>() * g.grid.weight()).sqrt();
    for (a, b) in g.psi1.iter().zip(&raw) {
        assert!((a - b / norm).abs() < 1e-12);
    }

    let g = ground_state(&params(0.0, 0.1), 1.0, &spec).unwrap();
    for (p, &v) in g.grid.p.iter().zip(&g.psi1) {
        assert!((v - hermite_function(0, 0.1, *p)).abs() < 1e-12);
    }

    assert!(matches!(
        ground_state(&params(0.5, 0.1), 1.5, &spec),
        Err(Error::Unacceptable(_))
    ));
}

#[test]
fn hermite_functions_are_ladder_eigenstates() {
    let w = 0.3;
    let p = params(0.0, w);
    let grid = Frame::for_level(&p, 1.0, &GridSpec::default()).unwrap().grid(1024);
    for k in 0..5 {
        let psi: Vec<f64> = grid.p.iter().map(|&x| hermite_function(k, w, x)).collect();
        let down = apply_ladder(&grid, w, Ladder::Lowering, &psi);
        let up = apply_ladder(&grid, w, Ladder::Raising, &down.values);
        for (a, b) in up.values.iter().zip(&psi) {
            assert!((a - 2.0 * w * k as f64 * b).abs() < 1e-9, "k={k}");
        }
    }
}

#[test]
fn excited_states_match_gegenbauer_oracle() {
    let (b, w) = (0.5, 0.1);
    let p = params(b, w);
    let lambda = 1.0 / (b * w);
    for n in 1..=5u64 {
        let s = wavefunction(&p, qn(n, 1), &GridSpec::default()).unwrap();
        let a = (b * s.grid.frame.c0()).sqrt();
        let oracle: Vec<f64> = s
            .grid
            .q
            .iter()
            .map(|&q| {
                let x = a * q;
                x.cos().powf(lambda) * gegenbauer(n as usize, lambda, x.sin())
            })
            .collect();
        let norm = (oracle.iter().map(|x| x * x).sum::<f64>() * s.grid.weight()).sqrt();
        let c = s.grid.centre();
        let sign = if n % 2 == 0 { oracle[c].signum() } else { (oracle[c + 1] - oracle[c - 1]).signum() };
        let (mut diff, mut amp) = (0.0f64, 0.0f64);
        for (x, y) in s.psi1.iter().zip(&oracle) {
            diff = diff.max((x * renorm(&s) - sign * y / norm).abs());
            amp = amp.max(y.abs() / norm);
        }
        assert!(diff < 1e-8 * amp, "n={n}: {diff}");
        assert_eq!(s.metadata.nodes as u64, n);
    }
}

/// Factor that rescales `ψ₁` to unit norm on its own.
fn renorm(s: &WavefunctionGrid<f64>) -> f64 {
    1.0 / (s.psi1.iter().map(|v| v * v).sum::<f64>() * s.grid.weight()).sqrt()
}

#[test]
fn coupled_equations_hold_for_low_levels() {
    let p = params(0.5, 0.1);
    let spec = GridSpec::default();
    for q in QuantumNumber::all(5) {
        let s = wavefunction(&p, q, &spec).unwrap();
        assert!((s.norm_squared() - 1.0).abs() < 1e-8, "{q}");
        assert!(s.metadata.residual_upper <= 1e-6, "{q}: {:?}", s.metadata);
        assert!(s.metadata.residual_lower <= 1e-6, "{q}: {:?}", s.metadata);
        assert!(s.metadata.warnings.is_empty(), "{q}: {:?}", s.metadata.warnings);
    }
}

#[test]
fn phase_convention() {
    let p = params(0.1, 0.5);
    for n in 1..=4u64 {
        let s = wavefunction(&p, qn(n, 1), &GridSpec::default()).unwrap();
        let c = s.grid.centre();
        if n % 2 == 0 {
            assert!(s.psi1[c] > 0.0);
        } else {
            assert!(s.psi1[c + 1] > s.psi1[c - 1]);
        }
    }
}

#[test]
fn diagnostic_mode_produces_no_wavefunctions() {
    let d = DOParams::diagnostic(1.5, 0.1).unwrap();
    assert!(matches!(
        wavefunction(&d, qn(1, 1), &GridSpec::default()),
        Err(Error::Unphysical(_))
    ));
}

#[test]
fn inner_products() {
    let spec = GridSpec::default();
    let p = params(0.0, 0.1);
    let a = wavefunction(&p, qn(0, 1), &spec).unwrap();
    let b = wavefunction(&p, qn(1, 1), &spec).unwrap();
    assert!((inner_product(&a, &a, qn(0, 1)).unwrap().re - 1.0).abs() < 1e-12);
    assert!(inner_product(&a, &b, qn(0, 1)).unwrap().norm() < 1e-12);
    let ab = inner_product(&a, &b, qn(1, 1)).unwrap();
    let ba = inner_product(&b, &a, qn(1, 1)).unwrap();
    assert_eq!(ab, ba.conj());

    let p = params(0.5, 0.1);
    let a = wavefunction(&p, qn(0, 1), &spec).unwrap();
    let b = wavefunction(&p, qn(2, 1), &spec).unwrap();
    assert!(matches!(
        inner_product(&a, &b, qn(0, 1)),
        Err(Error::IncompatibleGrids(_))
    ));
    let b_on_a = b.resample_onto(&a.grid);
    let own = inner_product(&b_on_a, &b_on_a, qn(2, 1)).unwrap().re;
    assert!((own - 1.0).abs() < 1e-9, "{own}");
    let o = overlap(&p, qn(0, 1), qn(2, 1), qn(0, 1), &spec).unwrap();
    assert!(o.value.norm() > 10.0 * o.error_estimate);
}

#[test]
fn commutator_matches_symbolic_engine() {
    // [B⁺, B⁻] built from p ∓ ω f ∂_p with f = c₀ + βp², β a ring symbol.
    let w = Rational::from_f64(0.25).unwrap();
    let c0 = Rational::from_f64(0.5).unwrap();
    let alg: Algebra<Rational> = Algebra::euclidean(
        1,
        SymbolicParams {
            beta: Param::Symbolic,
            beta_prime: Param::Value(Rational::from_integer(0.into())),
            gamma: Param::Value(Rational::from_integer(0.into())),
        },
    );
    let f = alg.constant(c0.clone()) + alg.mul(&alg.beta(), &alg.mul(&alg.p(0), &alg.p(0)));
    let ladder = |s: i64| {
        let mut op = alg.mult(alg.p(0));
        op += OperatorExpr::derivative(1, 0, f.scale(&(w.clone() * Rational::from_integer(s.into()))));
        op
    };
    let comm = ladder(-1).commutator(&alg, &ladder(1));
    let expected = alg.mult(f.scale(&(w.clone() * Rational::from_integer((-2).into()))));
    assert!((comm.clone() - expected).is_zero());

    let b = 0.5;
    let p = params(b, 0.25);
    let grid = Frame::for_level(&p, 1.0, &GridSpec::default()).unwrap().grid(2048);
    let phi: Vec<f64> = grid.p.iter().map(|&x| (-x * x).exp()).collect();
    let ud = apply_ladder(&grid, 0.25, Ladder::Raising, &apply_ladder(&grid, 0.25, Ladder::Lowering, &phi).values);
    let du = apply_ladder(&grid, 0.25, Ladder::Lowering, &apply_ladder(&grid, 0.25, Ladder::Raising, &phi).values);
    let mut values = vec![0.0; alg.nvars()];
    values[alg.var(minlen_core::symbolic::Symbol::Beta)] = b;
    for j in (0..grid.len()).filter(|&j| grid.p[j].abs() < 3.0) {
        let x = grid.p[j];
        values[0] = x;
        let gauss = (-x * x).exp();
        let symbolic = comm.apply_at(&values, |idx| match idx[0] {
            0 => gauss,
            1 => -2.0 * x * gauss,
            _ => (4.0 * x * x - 2.0) * gauss,
        });
        assert!((ud.values[j] - du.values[j] - symbolic).abs() < 1e-8, "p={x}");
    }
}

#[test]
fn nonrelativistic_ratio_carries_the_extra_factor() {
    // R = (E(β̃) - mc²)/(E(0) - mc²) = (1 - β̃)/(1 + β̃ω̃n) beyond first order in ω̃n
    let b = 0.5;
    let residuals = |w: f64| {
        let (deformed, flat) = (params(b, w), params(0.0, w));
        (1..=20u64).fold((0.0f64, 0.0f64), |(with, without), n| {
            let r = (energy(&deformed, qn(n, 1)) - 1.0) / (energy(&flat, qn(n, 1)) - 1.0);
            let factor = 1.0 / (1.0 + b * w * n as f64);
            (with.max((r - (1.0 - b) * factor).abs()), without.max((r - (1.0 - b)).abs()))
        })
    };
    let (with3, without3) = residuals(1e-3);
    let (with4, without4) = residuals(1e-4);
    assert!(with3 < 1e-3 * without3, "{with3} vs {without3}");
    assert!(with3 / with4 >= 80.0, "{}", with3 / with4);
    assert!((8.0..=12.0).contains(&(without3 / without4)), "{}", without3 / without4);
}

#[test]
fn ground_state_tends_to_the_gaussian_linearly() {
    let w = 0.1;
    let errs: Vec<f64> = [1e-2, 1e-3, 1e-4]
        .iter()
        .map(|&b| {
            // q_max grows like β̃^(-1/2); keep the Gaussian resolved
            let spec = GridSpec::new(4096, 1).unwrap();
            let g = ground_state(&params(b, w), 1.0, &spec).unwrap();
            g.grid
                .p
                .iter()
                .zip(&g.psi1)
                .filter(|(p, _)| p.abs() < 2.0)
                .map(|(&p, &v)| (v - hermite_function(0, w, p)).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    for pair in errs.windows(2) {
        let ratio = pair[0] / pair[1];
        assert!((8.0..=12.0).contains(&ratio), "{errs:?}");
    }
}

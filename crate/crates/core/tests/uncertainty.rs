use minlen_core::dirac::{wavefunction, DOParams, GridSpec, QuantumNumber};
use minlen_core::kinematics::DeformationParams;
use minlen_core::uncertainty::*;
use minlen_core::{Error, Rational};
use proptest::prelude::*;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Golden-section minimum of a unimodal `f` on `[a, b]`: `(x, f(x))`.
fn golden(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut c, mut d) = (b - g * (b - a), a + g * (b - a));
    for _ in 0..200 {
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    let x = (a + b) / 2.0;
    (x, f(x))
}

/// Root of an increasing function on `[a, b]` by bisection.
fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    for _ in 0..200 {
        let m = (a + b) / 2.0;
        if f(m) > 0.0 {
            b = m;
        } else {
            a = m;
        }
    }
    (a + b) / 2.0
}

fn rational_moments() -> impl Strategy<Value = (Vec<(i64, i64)>, i64, usize)> {
    (1usize..=3).prop_flat_map(|d| {
        (
            prop::collection::vec((-20i64..=20, 0i64..=20), d),
            0i64..=50,
            1..=d,
        )
    })
}

proptest! {
    #[test]
    fn long_and_compact_forms_agree(
        (comps, p0, i) in rational_moments(),
        b in 0i64..=9, bp in 0i64..=9, hbar in 1i64..=5,
    ) {
        let mean: Vec<Rational> = comps.iter().map(|&(m, _)| r(m, 7)).collect();
        let spread: Vec<Rational> = comps.iter().map(|&(_, s)| r(s, 5)).collect();
        let m = MomentSet::new(mean, spread, r(p0, 3)).unwrap();
        let params = DeformationParams::new(r(b, 10), r(bp, 10), r(0, 1)).unwrap();
        let hbar = r(hbar, 2);
        let long = ur_bound(&m, &params, i, hbar.clone()).unwrap();
        let compact = ur_bound_compact(m.meansq_p0().clone(), &m.meansq_p(), &params, i, hbar).unwrap();
        prop_assert_eq!(long, compact);
    }

    #[test]
    fn isotropic_bound_is_permutation_invariant(
        means in prop::collection::vec(-3.0f64..3.0, 3),
        spread in 0.01f64..2.0,
        p0sq in 0.0f64..4.0,
        b in 0.0f64..0.2, bp in 0.0f64..0.2,
        perm_index in 0usize..6,
    ) {
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let perm = perms[perm_index];
        let m = MomentSet::new(means, vec![spread; 3], p0sq).unwrap();
        let pm = m.permuted(&perm).unwrap();
        let params = DeformationParams::new(b, bp, 0.0).unwrap();
        for (k, &j) in perm.iter().enumerate() {
            let a = ur_bound(&pm, &params, k + 1, 1.0).unwrap();
            let b = ur_bound(&m, &params, j + 1, 1.0).unwrap();
            prop_assert!((a - b).abs() <= 1e-15 * b);
        }
    }

    #[test]
    fn min_delta_x_matches_numeric_minimum(
        means in prop::collection::vec(-1.0f64..1.0, 2),
        p0sq in 0.0f64..2.0,
        b in 0.01f64..0.3, bp in 0.0f64..0.3,
        i in 1usize..=2,
    ) {
        let m = MomentSet::new(means, vec![1.0; 2], p0sq).unwrap();
        let params = DeformationParams::new(b, bp, 0.0).unwrap();
        let exact = match min_delta_x(&m, &params, i, 1.0) {
            Ok(v) => v,
            Err(Error::Unacceptable(_)) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        let (_, numeric) = golden(|dp| isotropic_delta_x_bound(&m, &params, i, 1.0, dp).unwrap(), 1e-3, 1e3);
        prop_assert!((numeric - exact).abs() <= 1e-10 * exact, "{numeric} vs {exact}");
    }
}

#[test]
fn gup_minimum_matches_oracles() {
    for (beta, hbar) in [(0.01, 1.0), (0.5, 1.0), (2.0, 0.3), (1e-4, 2.0)] {
        let (at, value) = gup_minimum(beta, hbar).unwrap();
        let slope = |dp: f64| -1.0 / (dp * dp) + beta;
        let root = bisect(slope, 1e-6, 1e6);
        assert!((root - at).abs() <= 1e-12 * at, "beta={beta}: {root} vs {at}");
        let (_, numeric) = golden(|dp| gup_bound(dp, beta, hbar).unwrap(), 1e-6, 1e6);
        assert!((numeric - value).abs() <= 1e-12 * value);
        assert!((gup_bound(at, beta, hbar).unwrap() - value).abs() <= 1e-12 * value);
    }
    assert!(gup_minimum(0.0, 1.0).is_err());
    assert!(gup_bound(0.0, 0.1, 1.0).is_err());
}

#[test]
fn kempf_value_at_zero_energy() {
    for dims in 1..=3 {
        let params = DeformationParams::new(r(1, 7), r(2, 9), r(0, 1)).unwrap();
        let sq = absolute_min_delta_x_squared(&params, r(0, 1), dims).unwrap();
        assert_eq!(sq, r(dims as i64, 7) + r(2, 9));
        let fp = DeformationParams::new(1.0 / 7.0, 2.0 / 9.0, 0.0).unwrap();
        let v = absolute_min_delta_x(&fp, 0.0, dims, 1.0).unwrap();
        assert!((v - (dims as f64 / 7.0 + 2.0 / 9.0).sqrt()).abs() < 1e-15);
    }
    let params = DeformationParams::new(0.5, 0.0, 0.0).unwrap();
    assert!(matches!(absolute_min_delta_x(&params, 2.0, 1, 1.0), Err(Error::Unacceptable(_))));
}

#[test]
fn anisotropic_spreads_are_rejected() {
    let m = MomentSet::new(vec![0.0, 0.0], vec![1.0, 2.0], 1.0).unwrap();
    let params = DeformationParams::new(0.1, 0.0, 0.0).unwrap();
    assert!(min_delta_x(&m, &params, 1, 1.0).is_err());
}

#[test]
fn undeformed_ground_state_saturates() {
    let p = DOParams::<f64>::new(0.0, 0.1).unwrap();
    let s = wavefunction(&p, QuantumNumber::new(0, 1).unwrap(), &GridSpec::default()).unwrap();
    let rep = UncertaintyReport::for_state(&s).unwrap();
    assert!((rep.product - 0.5).abs() < 1e-8, "{}", rep.product);
    assert_eq!(rep.bound, 0.5);
}

#[test]
fn computed_states_respect_the_bound() {
    let spec = GridSpec::default();
    for b in [0.0, 0.1, 0.5] {
        for w in [0.1, 0.5] {
            let p = DOParams::<f64>::new(b, w).unwrap();
            for q in QuantumNumber::all(5) {
                let s = wavefunction(&p, q, &spec).unwrap();
                let sm = state_moments(&s).unwrap();
                assert!(sm.mean_p.abs() < 1e-12, "b={b} {q}: <P> = {}", sm.mean_p);
                assert_eq!(sm.mean_x, 0.0);
                let rep = UncertaintyReport::for_state(&s).unwrap();
                assert!(rep.slack >= -1e-10, "b={b} w={w} {q}: slack {}", rep.slack);
            }
        }
    }
}

#[test]
fn deformed_ground_states_saturate_the_bound() {
    // B⁻ψ₀ = 0 makes ψ₀ an eigenvector of P - iω̃X, a minimum-uncertainty state.
    for b in [0.1, 0.5, 0.9] {
        let p = DOParams::<f64>::new(b, 0.1).unwrap();
        let s = wavefunction(&p, QuantumNumber::new(0, 1).unwrap(), &GridSpec::default()).unwrap();
        let rep = UncertaintyReport::for_state(&s).unwrap();
        assert!(rep.slack.abs() < 1e-8 * rep.bound, "b={b}: {}", rep.slack);
        assert!((rep.bound - 0.5).abs() > 1e-4);
    }
    let p = DOParams::<f64>::new(0.5, 0.1).unwrap();
    let s = wavefunction(&p, QuantumNumber::new(1, 1).unwrap(), &GridSpec::default()).unwrap();
    assert!(UncertaintyReport::for_state(&s).unwrap().slack > 1e-3);
}

#[test]
fn unnormalized_states_are_rejected() {
    let p = DOParams::<f64>::new(0.1, 0.1).unwrap();
    let mut s = wavefunction(&p, QuantumNumber::new(1, 1).unwrap(), &GridSpec::default()).unwrap();
    s.psi1.iter_mut().for_each(|v| *v *= 1.1);
    assert!(matches!(state_moments(&s), Err(Error::Unnormalized(_))));
}

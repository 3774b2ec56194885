use std::f64::consts::PI;

use emzv::numerics::{
    self, f_n_checked, zeta, Evaluator, Kronecker, NumericsConfig, RegMethod, Tau,
};
use emzv::{Error, Expression, Index};
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;

fn idx(v: &[u64]) -> Index {
    Index::new(v.to_vec()).unwrap()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn kron(tau: Tau) -> Kronecker {
    Kronecker::new(tau, &NumericsConfig::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn theta_is_odd_and_antiperiodic(x in -2.0f64..2.0, y in -0.4f64..0.4, t in -0.5f64..0.5) {
        let k = kron(Tau::new(t, 1.1).unwrap());
        let z = c(x, y);
        let th = k.theta(z).unwrap();
        let scale = th.norm().max(1.0);
        prop_assert!((k.theta(-z).unwrap() + th).norm() < 1e-12 * scale);
        prop_assert!((k.theta(z + 1.0).unwrap() + th).norm() < 1e-12 * scale);
    }

    #[test]
    fn kronecker_quasi_periodicity(x in 0.05f64..0.95, y in -0.3f64..0.3, a in 0.1f64..0.4) {
        let tau = Tau::new(0.2, 1.3).unwrap();
        let k = kron(tau);
        let z = c(x, y);
        let alpha = c(a, 0.15);
        let f = k.kronecker_f(alpha, z).unwrap();
        prop_assert!((k.kronecker_f(alpha, z + 1.0).unwrap() - f).norm() < 1e-10 * f.norm());
        let shifted = k.kronecker_f(alpha, z + tau.value()).unwrap();
        let factor = (-2.0 * PI * Complex64::i() * alpha).exp();
        prop_assert!((shifted - factor * f).norm() < 1e-10 * f.norm());
    }

    #[test]
    fn f_n_reflects(n in 0usize..8, x in 0.05f64..0.95) {
        let k = kron(Tau::imaginary(1.0).unwrap());
        let v = f_n_checked(&k, n, c(x, 0.0)).unwrap();
        let w = f_n_checked(&k, n, c(1.0 - x, 0.0)).unwrap();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((w - sign * v).norm() < 1e-11 * v.norm().max(1.0));
    }
}

#[test]
fn theta_prime_matches_finite_difference() {
    for tau in [Tau::imaginary(1.0).unwrap(), Tau::new(-0.3, 0.8).unwrap()] {
        let k = kron(tau);
        let h = 1e-5;
        let fd = (k.theta(c(h, 0.0)).unwrap() - k.theta(c(-h, 0.0)).unwrap()) / (2.0 * h);
        assert!((fd - k.theta_prime0()).norm() < 1e-8 * k.theta_prime0().norm());
    }
}

#[test]
fn f_n_stable_under_finer_circle() {
    let tau = Tau::new(0.1, 0.9).unwrap();
    let base = NumericsConfig::default();
    let rho = base.radius_for(&tau).unwrap();
    let coarse = Kronecker::with_circle(tau, base.theta_terms, rho, base.cauchy_samples).unwrap();
    let doubled = Kronecker::with_circle(tau, base.theta_terms, rho, 2 * base.cauchy_samples).unwrap();
    let halved = Kronecker::with_circle(tau, base.theta_terms, rho / 2.0, base.cauchy_samples).unwrap();
    for z in [c(0.2, 0.0), c(0.47, 0.1), c(0.81, -0.2)] {
        let a = coarse.f_all(z, 6).unwrap();
        let b = doubled.f_all(z, 6).unwrap();
        let h = halved.f_all(z, 6).unwrap();
        for n in 0..=6 {
            let s = a[n].norm().max(1.0);
            assert!((a[n] - b[n]).norm() < 1e-9 * s, "n={n} z={z}");
            assert!((a[n] - h[n]).norm() < 1e-9 * s, "n={n} z={z}");
        }
    }
}

#[test]
fn one_shot_functions_agree_with_kronecker() {
    let tau = Tau::imaginary(1.0).unwrap();
    let cfg = NumericsConfig::default();
    let k = kron(tau);
    let z = c(0.3, 0.1);
    assert_eq!(numerics::theta(z, tau, &cfg).unwrap(), k.theta(z).unwrap());
    assert_eq!(numerics::theta_prime0(tau, &cfg).unwrap(), k.theta_prime0());
    let a = c(0.2, 0.05);
    assert_eq!(numerics::kronecker_f(a, z, tau, &cfg).unwrap(), k.kronecker_f(a, z).unwrap());
    assert_eq!(numerics::f_n(3, z, tau, &cfg).unwrap(), f_n_checked(&k, 3, z).unwrap());
}

#[test]
fn poles_are_reported() {
    let tau = Tau::imaginary(1.0).unwrap();
    let cfg = NumericsConfig::default();
    let err = numerics::kronecker_f(c(0.2, 0.0), c(1.0, 1.0), tau, &cfg).unwrap_err();
    assert!(matches!(err, Error::Pole(_)));
    assert!(err.is_numeric());
    assert!(matches!(numerics::f_n(2, c(0.0, 0.0), tau, &cfg), Err(Error::Pole(_))));
}

#[test]
fn even_singletons_are_zeta_values() {
    // ∫_0^1 f^(2m) = -2ζ(2m), independent of τ
    for tau in [Tau::imaginary(1.0).unwrap(), Tau::new(0.3, 0.6).unwrap()] {
        let ev = Evaluator::new(tau, NumericsConfig::default()).unwrap();
        for m in [2u64, 4, 6] {
            let v = ev.emzv_admissible(&idx(&[m])).unwrap();
            let want = -2.0 * zeta(m as i64).unwrap();
            assert!((v.value - want).norm() < 1e-11, "I({m}) = {} at {tau:?}", v.value);
        }
        for m in [3u64, 5] {
            assert!(ev.emzv_admissible(&idx(&[m])).unwrap().value.norm() < 1e-11);
        }
    }
}

#[test]
fn admissible_input_is_required() {
    let tau = Tau::imaginary(1.0).unwrap();
    let cfg = NumericsConfig::default();
    for k in [&[1u64][..], &[2, 1], &[1, 0, 2]] {
        assert!(matches!(
            numerics::emzv_admissible(&idx(k), tau, &cfg),
            Err(Error::Precondition(_))
        ));
    }
}

#[test]
fn quadrature_refinement_is_converged() {
    let tau = Tau::new(0.25, 0.9).unwrap();
    let base = Evaluator::new(tau, NumericsConfig::default()).unwrap();
    let finer = Evaluator::new(
        tau,
        NumericsConfig {
            quad_order: 28,
            quad_levels: 56,
            ..NumericsConfig::default()
        },
    )
    .unwrap();
    for k in [&[2u64, 3][..], &[0, 2, 0, 2], &[3, 1, 2], &[4, 0, 0]] {
        let a = base.emzv(&idx(k)).unwrap();
        let b = finer.emzv(&idx(k)).unwrap();
        assert!((a.value - b.value).norm() < 1e-10, "{k:?}: {} vs {}", a.value, b.value);
    }
}

#[test]
fn reflection_holds_numerically() {
    let tau = Tau::new(-0.2, 1.2).unwrap();
    let ev = Evaluator::new(tau, NumericsConfig::default()).unwrap();
    for k in emzv::index::indices_up_to(4, 3) {
        if k.is_empty() {
            continue;
        }
        let sign = if k.weight() % 2 == 0 { 1.0 } else { -1.0 };
        let a = ev.emzv(&k).unwrap().value;
        let b = ev.emzv(&k.reversed()).unwrap().value;
        assert!((a - sign * b).norm() < 1e-9, "{k}: {a} vs {b}");
    }
}

#[test]
fn shuffle_holds_numerically() {
    let tau = Tau::new(0.4, 0.7).unwrap();
    let ev = Evaluator::new(tau, NumericsConfig::default()).unwrap();
    for (v, w) in [(&[2u64][..], &[0u64, 3][..]), (&[1, 2], &[1]), (&[0, 1], &[2, 0])] {
        let id = emzv::relations::shuffle_identity(&idx(v), &idx(w));
        let l = ev.eval_expression(&id.lhs).unwrap().value;
        let r = ev.eval_expression(&id.rhs).unwrap().value;
        assert!((l - r).norm() < 1e-9, "{id}: {l} vs {r}");
    }
}

#[test]
fn expression_values() {
    let tau = Tau::imaginary(1.0).unwrap();
    let cfg = NumericsConfig::default();
    let one = numerics::eval_expression(&Expression::one(), tau, &cfg).unwrap();
    assert_eq!(one.value, c(1.0, 0.0));
    assert_eq!(one.error, 0.0);

    // I(0,2) = I(0) I(2) / 2
    let half = BigRational::new(1.into(), 2.into());
    let prod = Expression::product(vec![idx(&[0]), idx(&[2])], half);
    let a = numerics::eval_expression(&prod, tau, &cfg).unwrap();
    let b = numerics::emzv_regularized(&idx(&[0, 2]), tau, &cfg).unwrap();
    assert!((a.value - b.value).norm() < 1e-10, "{} vs {}", a.value, b.value);
    assert!(a.error >= 0.0 && b.error >= 0.0);
}

#[test]
fn letters_beyond_limit_are_rejected() {
    let tau = Tau::imaginary(1.0).unwrap();
    let cfg = NumericsConfig {
        max_letter: 4,
        ..NumericsConfig::default()
    };
    let err = numerics::emzv_admissible(&idx(&[6]), tau, &cfg).unwrap_err();
    assert!(matches!(err, Error::Argument(_)));
}

#[test]
fn zeta_values() {
    assert_eq!(zeta(0).unwrap(), -0.5);
    assert!((zeta(2).unwrap() - PI * PI / 6.0).abs() < 1e-15);
    assert!((zeta(4).unwrap() - PI.powi(4) / 90.0).abs() < 1e-15);
    assert!((zeta(3).unwrap() - 1.202_056_903_159_594_3).abs() < 1e-15);
    assert!(zeta(1).is_err());
}

#[test]
fn eps_fit_tracks_series_for_small_eps() {
    let tau = Tau::imaginary(1.0).unwrap();
    let series = Evaluator::new(tau, NumericsConfig::default()).unwrap();
    let fit = Evaluator::new(
        tau,
        NumericsConfig {
            reg_method: RegMethod::EpsFit,
            eps0: 1e-9,
            tolerance: 1e-5,
            ..NumericsConfig::default()
        },
    )
    .unwrap();
    for k in [&[0u64, 1][..], &[2, 1]] {
        let s = series.emzv_regularized(&idx(k)).unwrap().value;
        let f = fit.emzv_regularized(&idx(k)).unwrap().value;
        assert!((s - f).norm() < 1e-6, "{k:?}: {s} vs {f}");
    }
}

#[test]
fn eps_fit_reports_unstable_fits() {
    let tau = Tau::imaginary(1.0).unwrap();
    let cfg = NumericsConfig {
        reg_method: RegMethod::EpsFit,
        ..NumericsConfig::default()
    };
    let err = numerics::emzv_regularized(&idx(&[1, 0, 2]), tau, &cfg).unwrap_err();
    assert!(matches!(err, Error::Fit(_)), "{err}");
}

#[test]
fn config_text_round_trip() {
    let cfg = NumericsConfig::parse(
        "# tuned\nquad_order = 24\ncauchy_radius = 0.3  # fixed\nreg_method = eps-fit\n",
    )
    .unwrap();
    assert_eq!(cfg.quad_order, 24);
    assert_eq!(cfg.cauchy_radius, Some(0.3));
    assert_eq!(cfg.reg_method, RegMethod::EpsFit);
    assert!(matches!(NumericsConfig::parse("bogus = 1"), Err(Error::Config(_))));
    assert!(matches!(NumericsConfig::parse("quad_order"), Err(Error::Config(_))));
    assert!(matches!(NumericsConfig::parse("cauchy_samples = 8"), Err(Error::Config(_))));
    // radius must stay inside min(1, Im τ)
    let tight = NumericsConfig::parse("cauchy_radius = 0.9").unwrap();
    assert!(tight.radius_for(&Tau::imaginary(0.5).unwrap()).is_err());
}

#[test]
fn tau_parsing() {
    let t: Tau = "0.5+2i".parse().unwrap();
    assert_eq!((t.re(), t.im()), (0.5, 2.0));
    let t: Tau = "-1e-3+1.5i".parse().unwrap();
    assert_eq!((t.re(), t.im()), (-1e-3, 1.5));
    assert!("0.5-1i".parse::<Tau>().is_err());
    assert!("abc".parse::<Tau>().is_err());
}

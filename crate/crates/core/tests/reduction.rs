use emzv::expr::Expression;
use emzv::index::{indices_up_to, Index, Parity};
use emzv::numerics::{Evaluator, NumericsConfig, Tau};
use emzv::reduction::{is_terminal, reduce, simplify_zero_one, Rule, DEFAULT_FUEL};
use emzv::relations::prepend_zero_identity;
use emzv::verify::verify_reduction;
use emzv::Error;
use proptest::prelude::*;

fn ix(v: &[u32]) -> Index {
    Index::from(v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reduction_is_sound(v in prop::collection::vec(0u32..=3, 1..=4)) {
        let k = Index::from(&v[..]);
        let (e, trace) = reduce(&k, DEFAULT_FUEL).unwrap();
        prop_assert!(e.atoms().iter().all(is_terminal));
        prop_assert!(e.is_homogeneous(k.weight()));
        prop_assert!(trace.replays());
        prop_assert_eq!(&trace.final_expr, &e);
    }
}

#[test]
fn terminal_atoms_are_fixed() {
    for k in indices_up_to(4, 3) {
        if k.is_empty() || !is_terminal(&k) {
            continue;
        }
        let (e, trace) = reduce(&k, 1).unwrap();
        assert_eq!(e, Expression::atom(k.clone()));
        assert!(trace.is_empty());
    }
}

#[test]
fn two_one_goes_through_reflection() {
    let (_, trace) = reduce(&ix(&[2, 1]), DEFAULT_FUEL).unwrap();
    assert_eq!(trace.steps[0].rule, Rule::Reflect);
    assert_eq!(trace.steps[1].rule, Rule::OddParity);
    assert_eq!(trace.steps[1].input, ix(&[1, 2]));
}

#[test]
fn fuel_exhaustion_keeps_the_trace() {
    match reduce(&ix(&[2, 1]), 1) {
        Err(Error::FuelExhausted { trace, .. }) => {
            assert_eq!(trace.root, ix(&[2, 1]));
            assert_eq!(trace.steps.len(), 1);
        }
        other => panic!("expected FuelExhausted, got {other:?}"),
    }
    assert!(matches!(reduce(&ix(&[1]), 0), Err(Error::Argument(_))));
}

/// `I(1, k_2, ..., 0) + I(0, 1, k_2, ...)` is admissible up to products of
/// strictly shorter values.
#[test]
fn prepend_zero_congruence() {
    for k in indices_up_to(5, 4) {
        if k.len() < 2 || k.first() != Some(1) || k.last() != Some(0) || k.parity() != Parity::Odd {
            continue;
        }
        let id = prepend_zero_identity(&k).unwrap();
        let r = k.len();
        let m = k.prefix(r - 1).prepend(0);
        let zero = ix(&[0]);
        let rhs = id.rhs.substitute(|a| (a == &zero).then(Expression::one));
        let rest = &rhs + &Expression::atom(m);
        for (mono, _) in rest.iter() {
            let atoms = mono.atoms();
            let linear_admissible = atoms.len() == 1 && atoms[0].is_admissible();
            let short_product = atoms.len() >= 2 && atoms.iter().all(|a| a.len() < r);
            assert!(linear_admissible || short_product, "{k}: {mono}");
        }
    }
}

#[test]
fn pipeline_examples() {
    let rep = verify_reduction(&ix(&[0, 0]), Tau::imaginary(1.0).unwrap(), 1e-6).unwrap();
    assert!(rep.pass);
    assert!((rep.lhs.unwrap().value - 0.5).norm() < 1e-12);
    let rep = verify_reduction(&ix(&[1, 2, 2]), Tau::imaginary(2.0).unwrap(), 1e-6).unwrap();
    assert!(rep.pass, "{rep:?}");
}

#[test]
fn zero_one_post_pass_keeps_values() {
    let ev = Evaluator::new(Tau::imaginary(1.0).unwrap(), NumericsConfig::default()).unwrap();
    for k in [ix(&[1, 2, 1, 0]), ix(&[2, 1, 1]), ix(&[1, 0, 1, 2])] {
        let (e, _) = reduce(&k, DEFAULT_FUEL).unwrap();
        let s = simplify_zero_one(&e);
        let a = ev.eval_expression(&e).unwrap().value;
        let b = ev.eval_expression(&s).unwrap().value;
        assert!((a - b).norm() < 1e-9, "{k}: {a} vs {b}");
    }
}

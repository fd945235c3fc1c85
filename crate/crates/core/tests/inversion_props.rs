use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use ogsr_core::algebra::{oriented_power, PowerDirection};
use ogsr_core::inversion::{
    dyadic_family, invert_ordered, invert_seminormed, invert_two_sided, InversionStatus,
    OrderedOptions,
};
use ogsr_core::rings::{instance_from_designator, Element, Ring, Value};
use ogsr_core::seminorm::SeminormSpec;
use ogsr_core::topology::BasicOpen;
use proptest::prelude::*;

fn ring(d: &str) -> Ring {
    instance_from_designator(d).unwrap()
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn opts(budget: usize, witness: Option<Element>, direction: PowerDirection) -> OrderedOptions {
    OrderedOptions {
        budget,
        witness,
        direction,
        ..OrderedOptions::default()
    }
}

/// Inverse of `x` modulo `m` by the extended Euclidean algorithm.
fn inverse_mod(x: i64, m: i64) -> Option<i64> {
    let (mut r0, mut r1) = (m, x.rem_euclid(m));
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (t0, t1) = (t1, t0 - k * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(m))
}

/// Truncated power-series inverse by the coefficient recurrence.
fn series_inverse(a: &[BigRational]) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(a.len());
    for n in 0..a.len() {
        let mut acc = if n == 0 {
            BigRational::one()
        } else {
            BigRational::zero()
        };
        for k in 1..=n {
            acc -= &a[k] * &b[n - k];
        }
        b.push(acc / &a[0]);
    }
    b
}

#[test]
fn residues_mod_625_match_extended_euclid() {
    let r = ring("padic:5,4");
    let spec = SeminormSpec::by_name("padic", &r).unwrap();
    for k in 0..125 {
        let x = 1 + 5 * k;
        let el = r.residue(&BigInt::from(x)).unwrap();
        let cert = invert_seminormed(&el, &spec, &[], 64).unwrap();
        assert_eq!(cert.status, InversionStatus::ExactInverse, "x = {x}");
        let expected = r
            .residue(&BigInt::from(inverse_mod(x, 625).unwrap()))
            .unwrap();
        assert_eq!(cert.inverse_candidate.unwrap(), expected, "x = {x}");
        assert!(cert.iterations <= 4);
    }
}

#[test]
fn one_minus_x_in_long_series() {
    let r = ring("series:64");
    let spec = SeminormSpec::by_name("ord2", &r).unwrap();
    let mut coeffs = vec![BigRational::zero(); 64];
    coeffs[0] = BigRational::one();
    coeffs[1] = -BigRational::one();
    let x = r.element(Value::Coeffs(coeffs)).unwrap();
    let cert = invert_seminormed(&x, &spec, &[], 128).unwrap();
    assert_eq!(cert.status, InversionStatus::ExactInverse);
    assert_eq!(cert.iterations, 64);
    assert_eq!(
        cert.inverse_candidate.unwrap().coefficients().unwrap(),
        vec![BigRational::one(); 64].as_slice()
    );
}

#[test]
fn halving_after_32_terms() {
    let r = ring("rat");
    let cert = invert_ordered(
        &r.scalar(&q(1, 2)).unwrap(),
        &opts(32, Some(r.integer(2)), PowerDirection::RightNested),
    )
    .unwrap();
    let closed = BigRational::from_integer(2.into())
        - BigRational::new(1.into(), BigInt::from(2).pow(31u32));
    assert_eq!(
        cert.inverse_candidate.unwrap().as_scalar().unwrap(),
        &closed
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn series_inverses_match_the_recurrence(tail in proptest::collection::vec(-9i64..10, 15), den in 1i64..5) {
        let r = ring("series:16");
        let spec = SeminormSpec::by_name("ord2", &r).unwrap();
        let mut coeffs = vec![BigRational::one()];
        coeffs.extend(tail.iter().map(|&c| q(c, den)));
        let x = r.element(Value::Coeffs(coeffs.clone())).unwrap();
        let cert = invert_seminormed(&x, &spec, &[], 64).unwrap();
        prop_assert_eq!(cert.status, InversionStatus::ExactInverse);
        let inv = cert.inverse_candidate.unwrap();
        let expected = series_inverse(&coeffs);
        prop_assert_eq!(inv.coefficients().unwrap(), expected.as_slice());
        prop_assert!(x.mul(&inv).unwrap().is_one());
    }

    #[test]
    fn seminormed_residual_measures_decrease(tail in proptest::collection::vec(-9i64..10, 15)) {
        let r = ring("series:16");
        let spec = SeminormSpec::by_name("ord2", &r).unwrap();
        let mut coeffs = vec![BigRational::one()];
        coeffs.extend(tail.iter().map(|&c| q(c, 1)));
        let x = r.element(Value::Coeffs(coeffs)).unwrap();
        let cert = invert_seminormed(&x, &spec, &[], 64).unwrap();
        let m: Vec<BigRational> = cert.residual_trace.iter().map(|t| t.measure.clone().unwrap()).collect();
        for w in m.windows(2) {
            prop_assert!(w[1] <= w[0]);
        }
    }

    #[test]
    fn dual_numbers_match_the_closed_form(b in 1i64..50, d in 1i64..6) {
        let r = ring("pair:lex,dual");
        let bq = -q(b, d);
        let x = r.element(Value::Pair(BigRational::one(), bq.clone())).unwrap();
        let c = r.element(Value::Pair(q(2, 1), BigRational::zero())).unwrap();
        let cert = invert_ordered(&x, &opts(8, Some(c), PowerDirection::RightNested)).unwrap();
        prop_assert_eq!(cert.status, InversionStatus::ExactInverse);
        // (a, b)^-1 = (1/a, -b/a^2) with a = 1.
        let expected = r.element(Value::Pair(BigRational::one(), -bq)).unwrap();
        prop_assert_eq!(cert.inverse_candidate.unwrap(), expected);
    }

    #[test]
    fn rational_candidates_follow_the_geometric_sum(n in 1i64..40, extra in 0i64..40, budget in 1usize..48) {
        let r = ring("rat");
        let xq = q(n, n + extra);
        let x = r.scalar(&xq).unwrap();
        let mut o = opts(budget, None, PowerDirection::RightNested);
        o.family = dyadic_family(&r, 8).unwrap();
        let cert = invert_ordered(&x, &o).unwrap();
        let s = cert.inverse_candidate.clone().unwrap();
        if cert.status == InversionStatus::ExactInverse {
            prop_assert!(x.mul(&s).unwrap().is_one());
        } else {
            let y = BigRational::one() - &xq;
            let closed = (BigRational::one() - num_traits::pow(y, budget)) / &xq;
            prop_assert_eq!(s.as_scalar().unwrap(), &closed);
        }
        // Residuals are the powers of 1 - x.
        let y = r.one().sub(&x).unwrap();
        for t in &cert.residual_trace {
            prop_assert_eq!(&t.residual, &oriented_power(&y, t.n + 1, PowerDirection::RightNested).unwrap());
        }
    }

    #[test]
    fn both_orientations_agree_when_commutative(n in 1i64..20, extra in 0i64..20, b in -20i64..1) {
        let r = ring("rat");
        let x = r.scalar(&q(n, n + extra)).unwrap();
        let family = dyadic_family(&r, 8).unwrap();
        let right = invert_ordered(&x, &OrderedOptions { family: family.clone(), ..opts(24, None, PowerDirection::RightNested) }).unwrap();
        let left = invert_ordered(&x, &OrderedOptions { family, ..opts(24, None, PowerDirection::LeftNested) }).unwrap();
        prop_assert_eq!(right.status, left.status);
        prop_assert_eq!(right.inverse_candidate, left.inverse_candidate);

        let dual = ring("pair:lex,dual");
        let x = dual.element(Value::Pair(BigRational::one(), q(b, 3))).unwrap();
        let cert = invert_two_sided(&x, None, None, 16, &[]).unwrap();
        prop_assert_eq!(cert.status, InversionStatus::ExactInverse);
        let s = cert.inverse_candidate.unwrap();
        prop_assert!(x.mul(&s).unwrap().is_one() && s.mul(&x).unwrap().is_one());
    }

    #[test]
    fn residue_runs_never_break_invariants(k in 0i64..625) {
        let r = ring("padic:5,4");
        let spec = SeminormSpec::by_name("padic", &r).unwrap();
        let x = r.residue(&BigInt::from(k)).unwrap();
        let windows = vec![BasicOpen::symmetric(&spec.target().scalar(&q(1, 625)).unwrap())];
        let cert = invert_seminormed(&x, &spec, &windows, 64).unwrap();
        if cert.status == InversionStatus::ExactInverse {
            prop_assert!(x.mul(cert.inverse_candidate.as_ref().unwrap()).unwrap().is_one());
        } else {
            prop_assert_eq!(cert.status, InversionStatus::HypothesisFailed);
            prop_assert!(k % 5 != 1);
        }
    }
}

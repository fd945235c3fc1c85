use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use ogsr_core::rings::{instance_from_designator, Element, Ring, Sampler};
use ogsr_core::seminorm::{
    ball_translation_law, cauchy_check, hausdorff_witness, multiplication_modulus, refine_ball,
    stabilized_limit, Ball, SeminormSpec,
};
use ogsr_core::topology::BasicOpen;
use proptest::prelude::*;

const NORMS: &[(&str, &str)] = &[
    ("ord2", "series:8"),
    ("ord2", "series:16"),
    ("abs", "rat"),
    ("padic", "padic:5,4"),
    ("padic", "padic:2,8"),
];

fn spec(name: &str, ring: &str) -> SeminormSpec {
    SeminormSpec::by_name(name, &instance_from_designator(ring).unwrap()).unwrap()
}

fn dyadic(spec: &SeminormSpec, j: u32) -> BasicOpen {
    let r = BigRational::new(BigInt::one(), BigInt::from(2).pow(j));
    BasicOpen::symmetric(&spec.target().scalar(&r).unwrap())
}

/// A window strictly wider than `f(d)`.
fn window_over(spec: &SeminormSpec, d: &Element) -> BasicOpen {
    let v = spec.value(d).unwrap();
    let r = if v == BigRational::from_integer(0.into()) {
        BigRational::new(1.into(), 4.into())
    } else {
        v * BigInt::from(2)
    };
    BasicOpen::symmetric(&spec.target().scalar(&r).unwrap())
}

#[test]
fn hausdorff_succeeds_for_shipped_norms() {
    for (name, ring) in NORMS {
        let spec = spec(name, ring);
        let mut sampler = Sampler::new(spec.source(), 4);
        let mut pairs = 0;
        while pairs < 100 {
            let (a, b) = (sampler.next_element(), sampler.next_element());
            if a == b {
                continue;
            }
            let w = hausdorff_witness(&spec, &a, &b, 200, pairs).unwrap();
            assert!(w.certified(), "{w}");
            assert!(Ball::new(&spec, &a, &w.window)
                .unwrap()
                .contains(&a)
                .unwrap());
            assert!(Ball::new(&spec, &b, &w.window)
                .unwrap()
                .contains(&b)
                .unwrap());
            pairs += 1;
        }
    }
}

#[test]
fn refined_balls_sit_inside_both_balls() {
    let spec = spec("ord2", "series:8");
    let ring = spec.source().clone();
    let mut sampler = Sampler::new(&ring, 21);
    for _ in 0..5 {
        let gpp = sampler.random_element();
        let (d1, d2) = (sampler.random_element(), sampler.random_element());
        let (g, gp) = (gpp.add(&d1).unwrap(), gpp.add(&d2).unwrap());
        let (v, vp) = (window_over(&spec, &d1), window_over(&spec, &d2));
        let vpp = refine_ball(&v, &vp, &g, &gp, &gpp, &spec).unwrap();
        let inner = Ball::new(&spec, &gpp, &vpp).unwrap();
        let (b1, b2) = (
            Ball::new(&spec, &g, &v).unwrap(),
            Ball::new(&spec, &gp, &vp).unwrap(),
        );
        let mut members = 0;
        let mut attempts = 0;
        while members < 1000 && attempts < 200_000 {
            attempts += 1;
            let x = gpp.add(&sampler.random_element()).unwrap();
            if inner.contains(&x).unwrap() {
                members += 1;
                assert!(b1.contains(&x).unwrap() && b2.contains(&x).unwrap());
            }
        }
        assert_eq!(members, 1000);
    }
}

#[test]
fn translation_law_holds_on_every_spec() {
    let all: Vec<(&str, &str)> = NORMS
        .iter()
        .copied()
        .chain([("const-term", "series:8"), ("abs", "int")])
        .collect();
    for (name, ring) in all {
        let spec = spec(name, ring);
        let mut sampler = Sampler::new(spec.source(), 8);
        for _ in 0..3 {
            let (a, g) = (sampler.next_element(), sampler.next_element());
            let v = dyadic(&spec, 2);
            let report = ball_translation_law(&spec, &a, &g, &v, 1000, 3).unwrap();
            assert!(report.passed(), "{report}");
        }
    }
}

#[test]
fn multiplication_modulus_has_no_sampled_violation() {
    for (name, ring) in [("abs", "rat"), ("ord2", "series:8"), ("padic", "padic:5,4")] {
        let spec = spec(name, ring);
        let mut sampler = Sampler::new(spec.source(), 17);
        let mut checked = 0;
        for round in 0..10 {
            let a = sampler.next_element();
            let v = dyadic(&spec, round % 4);
            let (vp, _) = multiplication_modulus(&spec, &a, &v).unwrap();
            for _ in 0..1000 {
                let r = sampler.random_element();
                let x = r.add(&sampler.random_element()).unwrap();
                let close = vp
                    .contains(&spec.eval(&x.sub(&r).unwrap()).unwrap())
                    .unwrap();
                if close {
                    let image = a.mul(&x).unwrap().sub(&a.mul(&r).unwrap()).unwrap();
                    assert!(
                        v.contains(&spec.eval(&image).unwrap()).unwrap(),
                        "{name}: a={a} x={x} r={r}"
                    );
                }
                checked += 1;
            }
        }
        assert_eq!(checked, 10_000);
    }
}

fn series_with_shrinking_steps(ring: &Ring, seed: u64, len: usize) -> Vec<Element> {
    let mut sampler = Sampler::new(ring, seed);
    let n = ring.precision().unwrap();
    let mut acc = sampler.random_element();
    let mut out = vec![acc.clone()];
    for k in 1..len {
        // Step of order >= k: zero once k reaches the precision.
        let mut coeffs = vec![BigRational::from_integer(0.into()); n];
        for c in coeffs.iter_mut().skip(k) {
            *c = sampler.small_rational();
        }
        acc = acc
            .add(
                &ring
                    .element(ogsr_core::rings::Value::Coeffs(coeffs))
                    .unwrap(),
            )
            .unwrap();
        out.push(acc.clone());
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn stabilizing_series_are_cauchy(seed in any::<u64>(), len in 18usize..30) {
        let spec = spec("ord2", "series:16");
        let u = series_with_shrinking_steps(spec.source(), seed, len);
        let windows: Vec<BasicOpen> = (0..16).map(|j| dyadic(&spec, j)).collect();
        let verdict = cauchy_check(&spec, &u, &windows).unwrap();
        prop_assert!(verdict.passed(), "{}", verdict);
        prop_assert!(stabilized_limit(&u).is_some());
    }

    #[test]
    fn cauchy_prefixes_at_full_precision_have_limits(seed in any::<u64>(), len in 2usize..24) {
        let spec = spec("ord2", "series:16");
        let mut sampler = Sampler::new(spec.source(), seed);
        let base = series_with_shrinking_steps(spec.source(), seed, len);
        // Perturb some tails so that not every prefix is Cauchy.
        let u: Vec<Element> = base
            .iter()
            .map(|x| if sampler.rng().gen_bool(0.2) { x.add(&sampler.random_element()).unwrap() } else { x.clone() })
            .collect();
        let windows: Vec<BasicOpen> = (0..16).map(|j| dyadic(&spec, j)).collect();
        if cauchy_check(&spec, &u, &windows).unwrap().passed() {
            prop_assert!(stabilized_limit(&u).is_some());
        }
    }
}

use rand::Rng;

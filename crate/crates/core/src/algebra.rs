//! Partial-order comparison, oriented powers and sampled axiom checks for
//! unital nonassociative rings.

use std::fmt;

use crate::error::{Error, Result};
use crate::rings::{Element, Ring, Sampler};

/// Four-valued verdict of the decidable partial order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Comparison {
    Less,
    Equal,
    Greater,
    Incomparable,
}

impl Comparison {
    pub fn reversed(self) -> Self {
        match self {
            Comparison::Less => Comparison::Greater,
            Comparison::Greater => Comparison::Less,
            other => other,
        }
    }

    /// `x <= y` given `compare(x, y)`.
    pub fn is_le(self) -> bool {
        matches!(self, Comparison::Less | Comparison::Equal)
    }

    pub fn is_ge(self) -> bool {
        matches!(self, Comparison::Greater | Comparison::Equal)
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub fn compare(x: &Element, y: &Element) -> Result<Comparison> {
    x.compare(y)
}

/// Nesting direction of repeated products.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PowerDirection {
    /// `x^{->(n+1)} = x * x^{->n}`
    RightNested,
    /// `x^{<-(n+1)} = x^{<-n} * x`
    LeftNested,
}

impl PowerDirection {
    /// One nesting step applied to `acc`.
    pub fn step(self, x: &Element, acc: &Element) -> Result<Element> {
        match self {
            PowerDirection::RightNested => x.mul(acc),
            PowerDirection::LeftNested => acc.mul(x),
        }
    }
}

impl fmt::Display for PowerDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PowerDirection::RightNested => "right",
            PowerDirection::LeftNested => "left",
        })
    }
}

pub fn oriented_power(x: &Element, n: usize, dir: PowerDirection) -> Result<Element> {
    let mut acc = x.ring().one();
    for _ in 0..n {
        acc = dir.step(x, &acc)?;
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckOutcome {
    Pass,
    Fail {
        witness: Vec<Element>,
        detail: String,
    },
    Skipped(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCheck {
    pub name: &'static str,
    /// Required checks decide the report verdict; the others are informational.
    pub required: bool,
    pub outcome: CheckOutcome,
}

impl AxiomCheck {
    pub fn passed(&self) -> bool {
        !matches!(self.outcome, CheckOutcome::Fail { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub suite: &'static str,
    pub subject: String,
    pub samples: usize,
    pub seed: u64,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks
            .iter()
            .filter(|c| c.required)
            .all(AxiomCheck::passed)
    }

    pub fn check(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| c.required && !c.passed())
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite: {}", self.suite)?;
        writeln!(f, "subject: {}", self.subject)?;
        writeln!(f, "samples: {}", self.samples)?;
        writeln!(f, "seed: {}", self.seed)?;
        for c in &self.checks {
            let tag = if c.required {
                "required"
            } else {
                "informational"
            };
            match &c.outcome {
                CheckOutcome::Pass => writeln!(f, "check {} ({tag}): pass", c.name)?,
                CheckOutcome::Skipped(why) => {
                    writeln!(f, "check {} ({tag}): skipped: {why}", c.name)?
                }
                CheckOutcome::Fail { witness, detail } => {
                    let verdict = if c.required { "fail" } else { "absent" };
                    let w: Vec<String> = witness.iter().map(ToString::to_string).collect();
                    writeln!(
                        f,
                        "check {} ({tag}): {verdict}: witness [{}]: {detail}",
                        c.name,
                        w.join("; ")
                    )?
                }
            }
        }
        writeln!(
            f,
            "verdict: {}",
            if self.passed() { "pass" } else { "fail" }
        )
    }
}

/// Runs `law` over every sampled tuple and keeps the first counterexample.
pub(crate) fn sampled_check<const K: usize>(
    name: &'static str,
    required: bool,
    tuples: &[[Element; K]],
    mut law: impl FnMut(&[Element; K]) -> Result<Option<String>>,
) -> AxiomCheck {
    for t in tuples {
        let outcome = match law(t) {
            Ok(None) => continue,
            Ok(Some(detail)) => CheckOutcome::Fail {
                witness: t.to_vec(),
                detail,
            },
            Err(e) => CheckOutcome::Fail {
                witness: t.to_vec(),
                detail: e.to_string(),
            },
        };
        return AxiomCheck {
            name,
            required,
            outcome,
        };
    }
    AxiomCheck {
        name,
        required,
        outcome: CheckOutcome::Pass,
    }
}

pub(crate) fn sample_triples(ring: &Ring, count: usize, seed: u64) -> Vec<[Element; 3]> {
    let mut sampler = Sampler::new(ring, seed);
    let pool = sampler.take_elements(count.max(1) * 3);
    // Probes come first; spreading them over positions pairs them with each other.
    let n = count.max(1);
    (0..n)
        .map(|i| {
            [
                pool[i].clone(),
                pool[(i * 7 + 1) % pool.len()].clone(),
                pool[n + 2 * i + 1].clone(),
            ]
        })
        .collect()
}

fn differ(lhs: &Element, rhs: &Element) -> Option<String> {
    (lhs != rhs).then(|| format!("{lhs} != {rhs}"))
}

/// Abelian-group axioms of `(R,+,0)`, biadditivity and unit laws of `*`;
/// associativity and commutativity of `*` are reported but not required.
pub fn check_ring_axioms(ring: &Ring, sample_count: usize, seed: u64) -> AxiomReport {
    let triples = sample_triples(ring, sample_count, seed);
    let zero = ring.zero();
    let one = ring.one();
    let checks = vec![
        sampled_check("add-commutative", true, &triples, |[x, y, _]| {
            Ok(differ(&x.add(y)?, &y.add(x)?))
        }),
        sampled_check("add-associative", true, &triples, |[x, y, z]| {
            Ok(differ(&x.add(y)?.add(z)?, &x.add(&y.add(z)?)?))
        }),
        sampled_check("add-identity", true, &triples, |[x, _, _]| {
            Ok(differ(&zero.add(x)?, x).or(differ(&x.add(&zero)?, x)))
        }),
        sampled_check("add-inverse", true, &triples, |[x, _, _]| {
            Ok(differ(&x.add(&x.neg())?, &zero).or(differ(&x.neg().add(x)?, &zero)))
        }),
        sampled_check("left-distributive", true, &triples, |[x, y, z]| {
            Ok(differ(&x.mul(&y.add(z)?)?, &x.mul(y)?.add(&x.mul(z)?)?))
        }),
        sampled_check("right-distributive", true, &triples, |[x, y, z]| {
            Ok(differ(&x.add(y)?.mul(z)?, &x.mul(z)?.add(&y.mul(z)?)?))
        }),
        sampled_check("unit-identity", true, &triples, |[x, _, _]| {
            Ok(differ(&one.mul(x)?, x).or(differ(&x.mul(&one)?, x)))
        }),
        sampled_check("unit-nonzero", true, &triples[..1], |_| {
            Ok((one == zero).then(|| "1 = 0".to_string()))
        }),
        sampled_check("mul-associative", false, &triples, |[x, y, z]| {
            Ok(differ(&x.mul(y)?.mul(z)?, &x.mul(&y.mul(z)?)?))
        }),
        sampled_check("mul-commutative", false, &triples, |[x, y, _]| {
            Ok(differ(&x.mul(y)?, &y.mul(x)?))
        }),
    ];
    AxiomReport {
        suite: "ring",
        subject: ring.name().to_string(),
        samples: sample_count,
        seed,
        checks,
    }
}

/// Translation invariance of `<=`, pointedness of the positive cone, closure
/// of the cone under products and, when declared, `1 >= 0`.
///
/// The compatibility law for rings is read additively: `x <= y` implies
/// `x + z <= y + z`.
pub fn check_order_compatibility(ring: &Ring, sample_count: usize, seed: u64) -> AxiomReport {
    let triples = sample_triples(ring, sample_count, seed);
    let zero = ring.zero();
    let mut checks = vec![
        sampled_check("order-antisymmetric", true, &triples, |[x, y, _]| {
            Ok((x != y && x.leq(y)? && y.leq(x)?).then(|| format!("{x} <= {y} <= {x}")))
        }),
        sampled_check("order-transitive", true, &triples, |[x, y, z]| {
            Ok((x.leq(y)? && y.leq(z)? && !x.leq(z)?)
                .then(|| format!("{x} <= {y} <= {z} but not {x} <= {z}")))
        }),
        sampled_check("translation-invariant", true, &triples, |[x, y, z]| {
            let shifted = x.add(z)?.leq(&y.add(z)?)?;
            Ok((x.leq(y)? && !shifted).then(|| format!("{x} <= {y} but not after adding {z}")))
        }),
        sampled_check("cone-closed-under-product", true, &triples, |[x, y, _]| {
            // Map arbitrary samples into the cone: |x| is x or -x when comparable to 0.
            let into_cone = |e: &Element| -> Option<Element> {
                if e.is_nonnegative() {
                    Some(e.clone())
                } else if e.neg().is_nonnegative() {
                    Some(e.neg())
                } else {
                    None
                }
            };
            let (Some(a), Some(b)) = (into_cone(x), into_cone(y)) else {
                return Ok(None);
            };
            let ab = a.mul(&b)?;
            let ba = b.mul(&a)?;
            Ok(if !zero.leq(&ab)? {
                Some(format!("{a} >= 0, {b} >= 0 but {a}*{b} = {ab} is not >= 0"))
            } else if !zero.leq(&ba)? {
                Some(format!("{b} >= 0, {a} >= 0 but {b}*{a} = {ba} is not >= 0"))
            } else {
                None
            })
        }),
    ];
    let unit = if ring.declares_unit_nonnegative() {
        let one = ring.one();
        sampled_check("unit-nonnegative", true, &triples[..1], |_| {
            Ok((!zero.leq(&one)?).then(|| "1 is not >= 0".to_string()))
        })
    } else {
        AxiomCheck {
            name: "unit-nonnegative",
            required: false,
            outcome: CheckOutcome::Skipped("not declared by this instance".into()),
        }
    };
    checks.push(unit);
    if !ring.declares_order_compatible() {
        for c in checks.iter_mut() {
            c.required = false;
        }
    }
    AxiomReport {
        suite: "order",
        subject: ring.name().to_string(),
        samples: sample_count,
        seed,
        checks,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConvexVerdict {
    Pass,
    Fail { index: usize, witness: Element },
}

/// Looks for a chain `x <= y <= z` with `x`, `z` members and `y` not.
pub fn is_convex_sampled(
    mut member: impl FnMut(&Element) -> Result<bool>,
    triples: &[(Element, Element, Element)],
) -> Result<ConvexVerdict> {
    for (index, (x, y, z)) in triples.iter().enumerate() {
        if !(x.leq(y)? && y.leq(z)?) {
            return Err(Error::MalformedTriple { index });
        }
        if member(x)? && member(z)? && !member(y)? {
            return Ok(ConvexVerdict::Fail {
                index,
                witness: y.clone(),
            });
        }
    }
    Ok(ConvexVerdict::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{instance_from_designator, make_fixture, parse_element, Fault};

    #[test]
    fn compare_examples() {
        let int = instance_from_designator("int").unwrap();
        assert_eq!(
            compare(&int.integer(3), &int.integer(5)).unwrap(),
            Comparison::Less
        );
        let pairs = instance_from_designator("pair:comp,comp").unwrap();
        let a = parse_element(&pairs, "(1,0)").unwrap();
        let b = parse_element(&pairs, "(0,1)").unwrap();
        assert_eq!(compare(&a, &b).unwrap(), Comparison::Incomparable);
        let antilex = instance_from_designator("poly:antilex").unwrap();
        let x = parse_element(&antilex, "[0,1]").unwrap();
        assert_eq!(compare(&x, &antilex.one()).unwrap(), Comparison::Less);
    }

    #[test]
    fn oriented_power_examples() {
        let int = instance_from_designator("int").unwrap();
        let two = int.integer(2);
        assert_eq!(
            oriented_power(&two, 0, PowerDirection::RightNested).unwrap(),
            int.one()
        );
        assert_eq!(
            oriented_power(&two, 3, PowerDirection::RightNested).unwrap(),
            int.integer(8)
        );
        assert_eq!(
            oriented_power(&two, 3, PowerDirection::LeftNested).unwrap(),
            int.integer(8)
        );

        let sca = instance_from_designator("sca:twisted3").unwrap();
        let a = parse_element(&sca, "{0,1,0}").unwrap();
        assert_eq!(
            oriented_power(&a, 3, PowerDirection::RightNested).unwrap(),
            sca.one()
        );
        assert!(oriented_power(&a, 3, PowerDirection::LeftNested)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn rationals_pass_ring_axioms() {
        let rat = instance_from_designator("rat").unwrap();
        let report = check_ring_axioms(&rat, 1000, 0);
        assert!(report.passed(), "{report}");
        assert_eq!(
            report.check("mul-associative").unwrap().outcome,
            CheckOutcome::Pass
        );
    }

    #[test]
    fn twisted_algebra_is_distributive_but_not_associative() {
        let sca = instance_from_designator("sca:twisted3").unwrap();
        let report = check_ring_axioms(&sca, 1000, 0);
        assert!(report.passed(), "{report}");
        assert!(!report.check("mul-associative").unwrap().passed());
        assert!(report
            .to_string()
            .contains("mul-associative (informational): absent"));
    }

    #[test]
    fn noncommutative_addition_fixture_fails_with_witness() {
        let ring = make_fixture(Fault::NoncommutativeAddition);
        let report = check_ring_axioms(&ring, 100, 0);
        assert!(!report.passed());
        match &report.check("add-commutative").unwrap().outcome {
            CheckOutcome::Fail { witness, .. } => assert_eq!(witness.len(), 3),
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn order_compatibility_examples() {
        for name in ["poly:lex", "pair:comp,comp"] {
            let ring = instance_from_designator(name).unwrap();
            let report = check_order_compatibility(&ring, 1000, 0);
            assert!(report.passed(), "{report}");
        }
        let corrupted = make_fixture(Fault::AllPositive);
        let report = check_order_compatibility(&corrupted, 100, 0);
        assert!(!report.passed());
        assert!(matches!(
            report.check("order-antisymmetric").unwrap().outcome,
            CheckOutcome::Fail { .. }
        ));
    }

    #[test]
    fn lex_pairs_with_componentwise_product_are_flagged() {
        let ring = instance_from_designator("pair:lex,comp").unwrap();
        let report = check_order_compatibility(&ring, 1000, 0);
        assert!(!report.check("cone-closed-under-product").unwrap().passed());
        // The instance does not claim compatibility, so the failure is informational.
        assert!(report.passed());
    }

    #[test]
    fn convexity_examples() {
        let rat = instance_from_designator("rat").unwrap();
        let q = |s: &str| parse_element(&rat, s).unwrap();
        let unit_interval = |x: &Element| Ok(rat.zero().leq(x)? && x.leq(&rat.one())?);
        let chains = vec![(q("0"), q("1/3"), q("1")), (q("-1"), q("1/2"), q("3/4"))];
        assert_eq!(
            is_convex_sampled(unit_interval, &chains).unwrap(),
            ConvexVerdict::Pass
        );

        let int = instance_from_designator("int").unwrap();
        let gap = |x: &Element| Ok(x.is_zero() || *x == int.integer(2));
        let chains = vec![(int.integer(0), int.integer(1), int.integer(2))];
        assert_eq!(
            is_convex_sampled(gap, &chains).unwrap(),
            ConvexVerdict::Fail {
                index: 0,
                witness: int.integer(1)
            }
        );

        let bad = vec![(int.integer(2), int.integer(1), int.integer(3))];
        assert_eq!(
            is_convex_sampled(|_| Ok(true), &bad),
            Err(Error::MalformedTriple { index: 0 })
        );
    }
}

//! Finite representation of the interval topology of a partially ordered
//! ring: basic opens are complements of finitely many down-sets `]-inf, b]`
//! and up-sets `[a, +inf[`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::algebra::{AxiomCheck, AxiomReport, CheckOutcome, Comparison};
use crate::error::{Error, Result};
use crate::rings::{same_ring, Cursor, Element, Ring, RingSpec, Sampler};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubbasicClosed {
    /// `{x : x <= b}`
    DownSet(Element),
    /// `{x : a <= x}`
    UpSet(Element),
}

impl SubbasicClosed {
    pub fn contains(&self, x: &Element) -> Result<bool> {
        match self {
            SubbasicClosed::DownSet(b) => x.leq(b),
            SubbasicClosed::UpSet(a) => a.leq(x),
        }
    }

    pub fn bound(&self) -> &Element {
        match self {
            SubbasicClosed::DownSet(e) | SubbasicClosed::UpSet(e) => e,
        }
    }

    fn map_bound(&self, f: impl Fn(&Element) -> Result<Element>) -> Result<Self> {
        Ok(match self {
            SubbasicClosed::DownSet(b) => SubbasicClosed::DownSet(f(b)?),
            SubbasicClosed::UpSet(a) => SubbasicClosed::UpSet(f(a)?),
        })
    }
}

#[derive(Clone, Debug)]
pub struct BasicOpen {
    ring: Ring,
    excluded: Vec<SubbasicClosed>,
}

impl PartialEq for BasicOpen {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.excluded == other.excluded
    }
}

impl Eq for BasicOpen {}

impl BasicOpen {
    pub fn whole(ring: &Ring) -> Self {
        BasicOpen {
            ring: ring.clone(),
            excluded: Vec::new(),
        }
    }

    pub fn excluding(ring: &Ring, excluded: Vec<SubbasicClosed>) -> Result<Self> {
        let open = BasicOpen {
            ring: ring.clone(),
            excluded,
        };
        for s in &open.excluded {
            open.check_ring(s.bound())?;
        }
        Ok(open)
    }

    /// `]lo, hi[` in a totally ordered ring: excludes `]-inf, lo]` and `[hi, +inf[`.
    pub fn interval(lo: &Element, hi: &Element) -> Result<Self> {
        lo.check_same_ring(hi)?;
        Ok(BasicOpen {
            ring: lo.ring().clone(),
            excluded: vec![
                SubbasicClosed::DownSet(lo.clone()),
                SubbasicClosed::UpSet(hi.clone()),
            ],
        })
    }

    /// `]lo, +inf[`
    pub fn above(lo: &Element) -> Self {
        BasicOpen {
            ring: lo.ring().clone(),
            excluded: vec![SubbasicClosed::DownSet(lo.clone())],
        }
    }

    /// `]-inf, hi[`
    pub fn below(hi: &Element) -> Self {
        BasicOpen {
            ring: hi.ring().clone(),
            excluded: vec![SubbasicClosed::UpSet(hi.clone())],
        }
    }

    /// `]-eps, eps[`
    pub fn symmetric(eps: &Element) -> Self {
        BasicOpen::interval(&eps.neg(), eps).expect("same ring")
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn excluded(&self) -> &[SubbasicClosed] {
        &self.excluded
    }

    pub fn is_whole(&self) -> bool {
        self.excluded.is_empty()
    }

    fn check_ring(&self, x: &Element) -> Result<()> {
        if same_ring(&self.ring, x.ring()) {
            Ok(())
        } else {
            Err(Error::MixedRings {
                left: self.ring.name().into(),
                right: x.ring().name().into(),
            })
        }
    }

    /// `x` lies in none of the excluded sets; incomparable counts as "not <=".
    pub fn contains(&self, x: &Element) -> Result<bool> {
        self.check_ring(x)?;
        for s in &self.excluded {
            if s.contains(x)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `a + V`: every bound shifted by `a`.
    pub fn translate(&self, a: &Element) -> Result<Self> {
        self.check_ring(a)?;
        let excluded = self
            .excluded
            .iter()
            .map(|s| s.map_bound(|b| a.add(b)))
            .collect::<Result<_>>()?;
        Ok(BasicOpen {
            ring: self.ring.clone(),
            excluded,
        })
    }

    /// `-V`: down-sets become up-sets of the negated bound and vice versa.
    pub fn negate(&self) -> Self {
        let excluded = self
            .excluded
            .iter()
            .map(|s| match s {
                SubbasicClosed::DownSet(b) => SubbasicClosed::UpSet(b.neg()),
                SubbasicClosed::UpSet(a) => SubbasicClosed::DownSet(a.neg()),
            })
            .collect();
        BasicOpen {
            ring: self.ring.clone(),
            excluded,
        }
    }

    pub fn intersect(&self, other: &BasicOpen) -> Result<Self> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::MixedRings {
                left: self.ring.name().into(),
                right: other.ring.name().into(),
            });
        }
        let mut excluded = self.excluded.clone();
        excluded.extend(other.excluded.iter().cloned());
        Ok(BasicOpen {
            ring: self.ring.clone(),
            excluded,
        })
    }

    /// Scales every bound by a positive rational factor (rational carriers only).
    pub(crate) fn scale(&self, factor: &Element) -> Result<Self> {
        let excluded = self
            .excluded
            .iter()
            .map(|s| s.map_bound(|b| b.mul(factor)))
            .collect::<Result<_>>()?;
        Ok(BasicOpen {
            ring: self.ring.clone(),
            excluded,
        })
    }

    /// Effective `(lower, upper)` bounds in a totally ordered ring.
    pub fn interval_bounds(&self) -> Result<(Option<Element>, Option<Element>)> {
        if !self.ring.order_kind().is_total() {
            return Err(Error::UnsupportedCarrier {
                operation: "interval_bounds",
                carrier: self.ring.name().into(),
            });
        }
        let mut lo: Option<Element> = None;
        let mut hi: Option<Element> = None;
        for s in &self.excluded {
            match s {
                SubbasicClosed::DownSet(b) => {
                    if lo.as_ref().map_or(Ok(true), |l| l.leq(b))? {
                        lo = Some(b.clone());
                    }
                }
                SubbasicClosed::UpSet(a) => {
                    if hi.as_ref().map_or(Ok(true), |h| a.leq(h))? {
                        hi = Some(a.clone());
                    }
                }
            }
        }
        Ok((lo, hi))
    }

    /// Parses `open{ below: [b...], above: [a...] }`.
    pub fn parse(ring: &Ring, text: &str) -> Result<Self> {
        let mut cur = Cursor::new(text);
        cur.keyword("open")?;
        cur.expect('{')?;
        cur.keyword("below")?;
        cur.expect(':')?;
        let below = element_list(&mut cur, ring)?;
        cur.expect(',')?;
        cur.keyword("above")?;
        cur.expect(':')?;
        let above = element_list(&mut cur, ring)?;
        cur.expect('}')?;
        if !cur.at_end() {
            return Err(cur.error("trailing input"));
        }
        let excluded = below
            .into_iter()
            .map(SubbasicClosed::DownSet)
            .chain(above.into_iter().map(SubbasicClosed::UpSet))
            .collect();
        BasicOpen::excluding(ring, excluded)
    }
}

fn element_list(cur: &mut Cursor<'_>, ring: &Ring) -> Result<Vec<Element>> {
    cur.expect('[')?;
    let mut out = Vec::new();
    if cur.eat(']') {
        return Ok(out);
    }
    loop {
        out.push(cur.element(ring)?);
        if cur.eat(']') {
            return Ok(out);
        }
        cur.expect(',')?;
    }
}

impl fmt::Display for BasicOpen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let below: Vec<String> = self
            .excluded
            .iter()
            .filter_map(|s| match s {
                SubbasicClosed::DownSet(b) => Some(b.to_string()),
                _ => None,
            })
            .collect();
        let above: Vec<String> = self
            .excluded
            .iter()
            .filter_map(|s| match s {
                SubbasicClosed::UpSet(a) => Some(a.to_string()),
                _ => None,
            })
            .collect();
        write!(
            f,
            "open{{ below: [{}], above: [{}] }}",
            below.join(", "),
            above.join(", ")
        )
    }
}

/// Per-open outcome of an eventual-membership check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Eventually {
    /// Every term from this index to the end of the prefix is inside.
    InsideFrom(usize),
    NotEventuallyInside,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupLimitVerdict {
    pub prefix_len: usize,
    pub per_open: Vec<Eventually>,
}

impl SupLimitVerdict {
    pub fn passed(&self) -> bool {
        self.prefix_len > 0
            && self
                .per_open
                .iter()
                .all(|e| matches!(e, Eventually::InsideFrom(_)))
    }
}

impl fmt::Display for SupLimitVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "prefix_len: {}", self.prefix_len)?;
        for (i, e) in self.per_open.iter().enumerate() {
            match e {
                Eventually::InsideFrom(n) => writeln!(f, "open[{i}]: inside from {n}")?,
                Eventually::NotEventuallyInside => writeln!(f, "open[{i}]: not eventually inside")?,
            }
        }
        writeln!(
            f,
            "verdict: {}",
            if self.passed() { "pass" } else { "fail" }
        )
    }
}

/// Checks, on a finite weakly increasing prefix, that the sequence eventually
/// enters every listed open neighbourhood of `sup`.
pub fn sup_limit_check(
    sequence: impl IntoIterator<Item = Element>,
    sup: &Element,
    opens: &[BasicOpen],
) -> Result<SupLimitVerdict> {
    for v in opens {
        if !v.contains(sup)? {
            return Err(Error::NotMember(format!("supremum {sup} of {v}")));
        }
    }
    // Last index at which the term was outside, per open.
    let mut last_outside: Vec<Option<usize>> = vec![None; opens.len()];
    let mut prev: Option<Element> = None;
    let mut len = 0;
    for (n, u) in sequence.into_iter().enumerate() {
        if let Some(p) = &prev {
            if !p.leq(&u)? {
                return Err(Error::NotIncreasing { index: n });
            }
        }
        for (v, last) in opens.iter().zip(last_outside.iter_mut()) {
            if !v.contains(&u)? {
                *last = Some(n);
            }
        }
        prev = Some(u);
        len = n + 1;
    }
    let per_open = last_outside
        .into_iter()
        .map(|last| match last {
            None if len > 0 => Eventually::InsideFrom(0),
            Some(n) if n + 1 < len => Eventually::InsideFrom(n + 1),
            _ => Eventually::NotEventuallyInside,
        })
        .collect();
    Ok(SupLimitVerdict {
        prefix_len: len,
        per_open,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationWitness {
    /// Open neighbourhood of the competing point.
    pub open: BasicOpen,
    /// Every term from this index on lies outside `open`.
    pub avoided_from: usize,
}

/// An open set containing `other` that the increasing sequence with supremum
/// `limit` eventually avoids, so `other` cannot be a second limit.
pub fn separation_witness(
    limit: &Element,
    other: &Element,
    sequence: &[Element],
) -> Result<SeparationWitness> {
    limit.check_same_ring(other)?;
    if limit == other {
        return Err(Error::PreconditionFailed(
            "competing point equals the limit".into(),
        ));
    }
    let candidate = if !other.leq(limit)? {
        // Every term is <= limit, so none enters P \ ]-inf, limit].
        Some((
            BasicOpen::excluding(limit.ring(), vec![SubbasicClosed::DownSet(limit.clone())])?,
            0,
        ))
    } else {
        let mut found = None;
        for (m, u) in sequence.iter().enumerate() {
            if !u.leq(other)? {
                found = Some((
                    BasicOpen::excluding(limit.ring(), vec![SubbasicClosed::UpSet(u.clone())])?,
                    m,
                ));
                break;
            }
        }
        found
    };
    let Some((open, avoided_from)) = candidate else {
        return Err(Error::NoWitnessFound {
            prefix: sequence.len(),
        });
    };
    debug_assert!(open.contains(other)?);
    for u in &sequence[avoided_from..] {
        if open.contains(u)? {
            return Err(Error::NoWitnessFound {
                prefix: sequence.len(),
            });
        }
    }
    Ok(SeparationWitness { open, avoided_from })
}

fn require_total(ring: &Ring, operation: &'static str) -> Result<()> {
    if ring.order_kind().is_total() {
        Ok(())
    } else {
        Err(Error::UnsupportedCarrier {
            operation,
            carrier: ring.name().into(),
        })
    }
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Neighbourhoods `W1` of `a` and `W2` of `b` with `W1 + W2` inside `V`.
///
/// Each one-sided bound of `V` with slack `s` around `a + b` becomes a bound
/// at distance `s/4` from `a` and from `b`, so sums stay within `s/2` of
/// `a + b`. On the integers the bounds are placed on lattice points.
pub fn split_neighborhood(
    v: &BasicOpen,
    a: &Element,
    b: &Element,
) -> Result<(BasicOpen, BasicOpen)> {
    let ring = v.ring().clone();
    require_total(&ring, "split_neighborhood")?;
    let sum = a.add(b)?;
    if !v.contains(&sum)? {
        return Err(Error::NotMember(format!("{a} + {b}")));
    }
    let integral = matches!(ring.spec(), RingSpec::Integers);
    if !integral && !ring.is_divisible() {
        return Err(Error::UnsupportedCarrier {
            operation: "split_neighborhood",
            carrier: ring.name().into(),
        });
    }
    let margin = |slack: &Element| -> Result<Element> {
        if integral {
            let s = slack.as_scalar().expect("integer scalar").to_integer();
            let m: BigInt = (s - 1) / 2;
            ring.scalar(&BigRational::from_integer(m + 1))
        } else {
            slack.mul(&ring.scalar(&rational(1, 4))?)
        }
    };
    let mut w1 = Vec::new();
    let mut w2 = Vec::new();
    for s in v.excluded() {
        match s {
            SubbasicClosed::DownSet(alpha) => {
                let q = margin(&sum.sub(alpha)?)?;
                w1.push(SubbasicClosed::DownSet(a.sub(&q)?));
                w2.push(SubbasicClosed::DownSet(b.sub(&q)?));
            }
            SubbasicClosed::UpSet(beta) => {
                let q = margin(&beta.sub(&sum)?)?;
                w1.push(SubbasicClosed::UpSet(a.add(&q)?));
                w2.push(SubbasicClosed::UpSet(b.add(&q)?));
            }
        }
    }
    Ok((
        BasicOpen::excluding(&ring, w1)?,
        BasicOpen::excluding(&ring, w2)?,
    ))
}

fn require_rationals(ring: &Ring, operation: &'static str) -> Result<()> {
    if matches!(ring.spec(), RingSpec::Rationals) && ring.fault().is_none() {
        Ok(())
    } else {
        Err(Error::UnsupportedCarrier {
            operation,
            carrier: ring.name().into(),
        })
    }
}

/// Neighbourhoods `V1` of `x` and `V2` of `y` whose products land in `V`,
/// over the rationals.
///
/// Points with a zero coordinate use the `epsilon`/`eta` construction for
/// continuity at `(a,0)`, `(0,b)` and `(0,0)`; elsewhere both factors get the
/// same relative radius `delta <= 1/2` with `3 |xy| delta` below the slack.
pub fn product_continuity_witness(
    v: &BasicOpen,
    x: &Element,
    y: &Element,
) -> Result<(BasicOpen, BasicOpen)> {
    let ring = v.ring().clone();
    require_rationals(&ring, "product_continuity_witness")?;
    let p = x.mul(y)?;
    if !v.contains(&p)? {
        return Err(Error::NotMember(format!("{x} * {y}")));
    }
    let (lo, hi) = v.interval_bounds()?;
    let val = |e: &Element| e.as_scalar().expect("rational").clone();
    let pv = val(&p);
    let slack = match (&lo, &hi) {
        (None, None) => return Ok((BasicOpen::whole(&ring), BasicOpen::whole(&ring))),
        (Some(l), None) => &pv - val(l),
        (None, Some(h)) => val(h) - &pv,
        (Some(l), Some(h)) => (&pv - val(l)).min(val(h) - &pv),
    };
    let el = |q: BigRational| ring.scalar(&q).expect("rational carrier");
    let around = |c: &BigRational, r: &BigRational| BasicOpen::interval(&el(c - r), &el(c + r));
    let (xv, yv) = (val(x), val(y));
    match (xv.is_zero(), yv.is_zero()) {
        (true, true) => Ok((around(&xv, &BigRational::one())?, around(&yv, &slack)?)),
        (false, true) | (true, false) => {
            let (nonzero, _) = if yv.is_zero() { (&xv, &yv) } else { (&yv, &xv) };
            let eta = nonzero.abs() / BigInt::from(2);
            let radius = &slack / (nonzero.abs() + &eta);
            let near = around(nonzero, &eta)?;
            let small = around(&BigRational::zero(), &radius)?;
            Ok(if yv.is_zero() {
                (near, small)
            } else {
                (small, near)
            })
        }
        (false, false) => {
            let delta = rational(1, 2).min(&slack / (pv.abs() * BigInt::from(3)));
            Ok((
                around(&xv, &(&delta * xv.abs()))?,
                around(&yv, &(&delta * yv.abs()))?,
            ))
        }
    }
}

/// A rational drawn from the open interval, or near `center` on unbounded sides.
pub fn sample_in_bounds(
    sampler: &mut Sampler,
    lo: Option<&BigRational>,
    hi: Option<&BigRational>,
    center: &BigRational,
) -> BigRational {
    let rng = sampler.rng();
    let frac = rational(rng.gen_range(1..1024), 1024);
    let spread = rational(rng.gen_range(1..64), 4);
    match (lo, hi) {
        (Some(l), Some(h)) => l + (h - l) * frac,
        (Some(l), None) => l + spread * frac,
        (None, Some(h)) => h - spread * frac,
        (None, None) => center + spread * (frac - rational(1, 2)),
    }
}

/// Random basic opens that all contain `point`, built from sampled bounds.
pub fn generate_opens_containing(
    point: &Element,
    count: usize,
    seed: u64,
) -> Result<Vec<BasicOpen>> {
    let ring = point.ring().clone();
    let mut sampler = Sampler::new(&ring, seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let downs = sampler.rng().gen_range(0..=2);
        let ups = sampler.rng().gen_range(0..=2);
        let mut excluded = Vec::new();
        let mut attempts = 0;
        while excluded.len() < downs + ups && attempts < 64 {
            attempts += 1;
            let mut delta = sampler.random_element();
            if ring.is_divisible() {
                let k = sampler.rng().gen_range(0..16u32);
                let scale = BigRational::new(BigInt::one(), BigInt::from(2).pow(k));
                delta = delta.mul(&ring.scalar(&scale)?)?;
            }
            let bound = point.add(&delta)?;
            let set = if excluded.len() < downs {
                SubbasicClosed::DownSet(bound)
            } else {
                SubbasicClosed::UpSet(bound)
            };
            if !set.contains(point)? {
                excluded.push(set);
            }
        }
        out.push(BasicOpen::excluding(&ring, excluded)?);
    }
    Ok(out)
}

/// A basic open with up to two down-sets and two up-sets at sampled bounds.
pub fn random_open(sampler: &mut Sampler) -> Result<BasicOpen> {
    let ring = sampler.ring().clone();
    let downs = sampler.rng().gen_range(0..=2);
    let ups = sampler.rng().gen_range(0..=2);
    let mut excluded = Vec::with_capacity(downs + ups);
    for _ in 0..downs {
        excluded.push(SubbasicClosed::DownSet(sampler.random_element()));
    }
    for _ in 0..ups {
        excluded.push(SubbasicClosed::UpSet(sampler.random_element()));
    }
    BasicOpen::excluding(&ring, excluded)
}

/// `p` if it is nonnegative, else `-p` if that is, else 0.
fn nonnegative_part(p: Element) -> Element {
    if p.is_nonnegative() {
        p
    } else if p.neg().is_nonnegative() {
        p.neg()
    } else {
        p.ring().zero()
    }
}

/// Sampled translation, negation and convexity laws for basic opens.
///
/// Chains `x <= y <= z` are built as `x`, `x + p`, `x + p + q` from
/// nonnegative `p`, `q`, which relies on translation-invariance of the order.
pub fn check_topology_laws(ring: &Ring, samples: usize, seed: u64) -> Result<AxiomReport> {
    let mut sampler = Sampler::new(ring, seed);
    let mut translate = CheckOutcome::Pass;
    let mut negate = CheckOutcome::Pass;
    let mut convex = CheckOutcome::Pass;
    for _ in 0..samples {
        let v = random_open(&mut sampler)?;
        let a = sampler.next_element();
        let x = sampler.next_element();
        let y = x.add(&nonnegative_part(sampler.random_element()))?;
        let z = y.add(&nonnegative_part(sampler.random_element()))?;

        let (lhs, rhs) = (v.translate(&a)?.contains(&x)?, v.contains(&x.sub(&a)?)?);
        if lhs != rhs && translate == CheckOutcome::Pass {
            let detail = format!("{v} + a contains x: {lhs}, V contains x - a: {rhs}");
            translate = CheckOutcome::Fail {
                witness: vec![a.clone(), x.clone()],
                detail,
            };
        }
        let (lhs, rhs) = (v.negate().contains(&x)?, v.contains(&x.neg())?);
        if lhs != rhs && negate == CheckOutcome::Pass {
            let detail = format!("-{v} contains x: {lhs}, V contains -x: {rhs}");
            negate = CheckOutcome::Fail {
                witness: vec![x.clone()],
                detail,
            };
        }
        let chain = x.leq(&y)? && y.leq(&z)?;
        let broken = !chain || (v.contains(&x)? && v.contains(&z)? && !v.contains(&y)?);
        if broken && convex == CheckOutcome::Pass {
            let detail = if chain {
                format!("{v} contains x and z but not y")
            } else {
                "not a chain".into()
            };
            convex = CheckOutcome::Fail {
                witness: vec![x, y, z],
                detail,
            };
        }
    }
    let checks = [
        ("translate", translate),
        ("negate", negate),
        ("convex", convex),
    ]
    .into_iter()
    .map(|(name, outcome)| AxiomCheck {
        name,
        required: true,
        outcome,
    })
    .collect();
    Ok(AxiomReport {
        suite: "topology",
        subject: ring.name().to_string(),
        samples,
        seed,
        checks,
    })
}

/// Whether `x` and `y` are comparable.
pub fn comparable(x: &Element, y: &Element) -> Result<bool> {
    Ok(x.compare(y)? != Comparison::Incomparable)
}

//! Ring seminorms into the rationals and the topology they induce.
//!
//! Balls are written additively: `B_V(g) = {x : f(x - g) in V}`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::{sample_triples, sampled_check, AxiomReport};
use crate::error::{Error, Result};
use crate::rings::{
    instance_from_designator, ord_valuation, same_ring, Element, Ring, RingSpec, Sampler,
};
use crate::topology::BasicOpen;

/// Samples used by the smoke test in [`hausdorff_witness`].
pub const HAUSDORFF_SMOKE_SAMPLES: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeminormKind {
    /// `|x|` on integers or rationals.
    Abs,
    /// `2^-ord(x)` on truncated series.
    Ord2,
    /// `p^-v(x)` on residues mod `p^N`.
    PAdic,
    /// `|c0|` on truncated series; not definite.
    ConstTerm,
}

impl SeminormKind {
    pub fn name(self) -> &'static str {
        match self {
            SeminormKind::Abs => "abs",
            SeminormKind::Ord2 => "ord2",
            SeminormKind::PAdic => "padic",
            SeminormKind::ConstTerm => "const-term",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Claims {
    pub subadditive: bool,
    pub even: bool,
    pub submultiplicative: bool,
    pub nonnegative: bool,
    pub definite: bool,
    pub unit_bounded: bool,
}

impl Claims {
    pub const NORM: Claims = Claims {
        subadditive: true,
        even: true,
        submultiplicative: true,
        nonnegative: true,
        definite: true,
        unit_bounded: true,
    };

    pub const SEMINORM: Claims = Claims {
        definite: false,
        ..Claims::NORM
    };

    pub fn is_norm(&self) -> bool {
        *self == Claims::NORM
    }
}

#[derive(Clone, Debug)]
pub struct SeminormSpec {
    kind: SeminormKind,
    source: Ring,
    target: Ring,
    claims: Claims,
}

impl SeminormSpec {
    /// Looks up a named seminorm on `source`.
    pub fn by_name(name: &str, source: &Ring) -> Result<Self> {
        let kind = match name {
            "abs" => SeminormKind::Abs,
            "ord2" => SeminormKind::Ord2,
            "padic" => SeminormKind::PAdic,
            "const-term" => SeminormKind::ConstTerm,
            other => return Err(Error::InvalidSpec(format!("unknown seminorm `{other}`"))),
        };
        let fits = match kind {
            SeminormKind::Abs => matches!(source.spec(), RingSpec::Integers | RingSpec::Rationals),
            SeminormKind::Ord2 | SeminormKind::ConstTerm => {
                matches!(source.spec(), RingSpec::TruncatedSeries(_))
            }
            SeminormKind::PAdic => matches!(source.spec(), RingSpec::Residues(_)),
        };
        if !fits || source.fault().is_some() {
            return Err(Error::InvalidSpec(format!(
                "seminorm `{name}` is not defined on {}",
                source.name()
            )));
        }
        let claims = if kind == SeminormKind::ConstTerm {
            Claims::SEMINORM
        } else {
            Claims::NORM
        };
        Ok(SeminormSpec {
            kind,
            source: source.clone(),
            target: instance_from_designator("rat")?,
            claims,
        })
    }

    /// The seminorm conventionally paired with `source`, if any.
    pub fn default_for(source: &Ring) -> Result<Self> {
        let name = match source.spec() {
            RingSpec::Integers | RingSpec::Rationals => "abs",
            RingSpec::TruncatedSeries(_) => "ord2",
            RingSpec::Residues(_) => "padic",
            _ => {
                return Err(Error::InvalidSpec(format!(
                    "no seminorm is shipped for {}",
                    source.name()
                )));
            }
        };
        SeminormSpec::by_name(name, source)
    }

    pub fn kind(&self) -> SeminormKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    pub fn claims(&self) -> Claims {
        self.claims
    }

    fn check_source(&self, x: &Element) -> Result<()> {
        if same_ring(&self.source, x.ring()) {
            Ok(())
        } else {
            Err(Error::MixedRings {
                left: self.source.name().into(),
                right: x.ring().name().into(),
            })
        }
    }

    fn check_target(&self, v: &BasicOpen) -> Result<()> {
        if same_ring(&self.target, v.ring()) {
            Ok(())
        } else {
            Err(Error::MixedRings {
                left: self.target.name().into(),
                right: v.ring().name().into(),
            })
        }
    }

    /// `f(x)` as a rational.
    pub fn value(&self, x: &Element) -> Result<BigRational> {
        self.check_source(x)?;
        if x.is_zero() {
            return Ok(BigRational::zero());
        }
        Ok(match self.kind {
            SeminormKind::Abs => x.as_scalar().expect("scalar carrier").abs(),
            SeminormKind::Ord2 => inverse_power(2, ord_valuation(x)?),
            SeminormKind::PAdic => {
                let p = match x.ring().spec() {
                    RingSpec::Residues(r) => r.prime,
                    _ => unreachable!("checked at construction"),
                };
                inverse_power(p, ord_valuation(x)?)
            }
            SeminormKind::ConstTerm => x
                .coefficients()
                .and_then(|c| c.first())
                .map_or_else(BigRational::zero, |c| c.abs()),
        })
    }

    /// `f(x)` as an element of the target ring.
    pub fn eval(&self, x: &Element) -> Result<Element> {
        self.target.scalar(&self.value(x)?)
    }
}

impl fmt::Display for SeminormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on {}", self.name(), self.source.name())
    }
}

fn inverse_power(base: u64, k: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(base).pow(k as u32))
}

pub fn check_seminorm_axioms(spec: &SeminormSpec, sample_count: usize, seed: u64) -> AxiomReport {
    let triples = sample_triples(spec.source(), sample_count, seed);
    let f = |x: &Element| spec.value(x);
    let le =
        |a: BigRational, b: BigRational, what: &str| (a > b).then(|| format!("{what}: {a} > {b}"));
    let claims = spec.claims();
    let one = spec.source().one();
    let checks = vec![
        sampled_check("vanishes-at-zero", true, &triples[..1], |_| {
            let z = f(&spec.source().zero())?;
            Ok((!z.is_zero()).then(|| format!("f(0) = {z}")))
        }),
        sampled_check("nonnegative", claims.nonnegative, &triples, |[x, _, _]| {
            let v = f(x)?;
            Ok(v.is_negative().then(|| format!("f(x) = {v}")))
        }),
        sampled_check("even", claims.even, &triples, |[x, _, _]| {
            let (a, b) = (f(x)?, f(&x.neg())?);
            Ok((a != b).then(|| format!("f(x) = {a}, f(-x) = {b}")))
        }),
        sampled_check("subadditive", claims.subadditive, &triples, |[x, y, _]| {
            Ok(le(f(&x.add(y)?)?, f(x)? + f(y)?, "f(x+y) vs f(x)+f(y)"))
        }),
        sampled_check(
            "submultiplicative",
            claims.submultiplicative,
            &triples,
            |[x, y, _]| Ok(le(f(&x.mul(y)?)?, f(x)? * f(y)?, "f(xy) vs f(x)f(y)")),
        ),
        sampled_check("definite", claims.definite, &triples, |[x, _, _]| {
            Ok((!x.is_zero() && f(x)?.is_zero()).then(|| format!("f({x}) = 0")))
        }),
        sampled_check("unit-bounded", claims.unit_bounded, &triples[..1], |_| {
            Ok(le(f(&one)?, BigRational::one(), "f(1) vs 1"))
        }),
    ];
    AxiomReport {
        suite: "seminorm",
        subject: spec.to_string(),
        samples: sample_count,
        seed,
        checks,
    }
}

#[derive(Clone, Debug)]
pub struct Ball {
    pub spec: SeminormSpec,
    pub center: Element,
    pub window: BasicOpen,
}

impl Ball {
    pub fn new(spec: &SeminormSpec, center: &Element, window: &BasicOpen) -> Result<Self> {
        spec.check_source(center)?;
        spec.check_target(window)?;
        Ok(Ball {
            spec: spec.clone(),
            center: center.clone(),
            window: window.clone(),
        })
    }

    pub fn contains(&self, x: &Element) -> Result<bool> {
        self.window
            .contains(&self.spec.eval(&x.sub(&self.center)?)?)
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B[{}]({}, {})", self.spec, self.center, self.window)
    }
}

pub fn ball_contains(ball: &Ball, x: &Element) -> Result<bool> {
    ball.contains(x)
}

/// A window `V''` with `B_V''(gpp)` inside both `B_V(g)` and `B_Vp(gp)`.
pub fn refine_ball(
    v: &BasicOpen,
    vp: &BasicOpen,
    g: &Element,
    gp: &Element,
    gpp: &Element,
    spec: &SeminormSpec,
) -> Result<BasicOpen> {
    let first = Ball::new(spec, g, v)?;
    let second = Ball::new(spec, gp, vp)?;
    if !first.contains(gpp)? || !second.contains(gpp)? {
        return Err(Error::PreconditionFailed(format!(
            "{gpp} is not in both balls"
        )));
    }
    let c = spec.eval(&gpp.sub(g)?)?;
    let cp = spec.eval(&gpp.sub(gp)?)?;
    let shifted = v.translate(&c.neg())?;
    let shifted_p = vp.translate(&cp.neg())?;
    shifted
        .intersect(&shifted.negate())?
        .intersect(&shifted_p)?
        .intersect(&shifted_p.negate())
}

/// Draws `count` source elements, alternating raw samples with points
/// shifted to `near`.
fn nearby_samples(
    spec: &SeminormSpec,
    near: &[Element],
    count: usize,
    seed: u64,
) -> Result<Vec<Element>> {
    let mut sampler = Sampler::new(spec.source(), seed);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let d = sampler.next_element();
        out.push(match near.get(i % (near.len() + 1)) {
            Some(c) => c.add(&d)?,
            None => d,
        });
    }
    Ok(out)
}

/// Checks `a + B_V(g) = B_V(g + a)` and `-B_V(g) = B_V(-g)` on samples.
pub fn ball_translation_law(
    spec: &SeminormSpec,
    a: &Element,
    g: &Element,
    v: &BasicOpen,
    samples: usize,
    seed: u64,
) -> Result<AxiomReport> {
    let ball = Ball::new(spec, g, v)?;
    let moved = Ball::new(spec, &g.add(a)?, v)?;
    let mirrored = Ball::new(spec, &g.neg(), v)?;
    let xs: Vec<[Element; 1]> =
        nearby_samples(spec, &[g.add(a)?, g.neg(), g.clone()], samples, seed)?
            .into_iter()
            .map(|x| [x])
            .collect();
    let checks = vec![
        sampled_check("translate", true, &xs, |[x]| {
            let lhs = ball.contains(&x.sub(a)?)?;
            let rhs = moved.contains(x)?;
            Ok((lhs != rhs).then(|| format!("x in a+B: {lhs}, x in B(g+a): {rhs}")))
        }),
        sampled_check("negate", true, &xs, |[x]| {
            let lhs = ball.contains(&x.neg())?;
            let rhs = mirrored.contains(x)?;
            Ok((lhs != rhs).then(|| format!("x in -B: {lhs}, x in B(-g): {rhs}")))
        }),
    ];
    Ok(AxiomReport {
        suite: "ball-translation",
        subject: format!("{spec}, a = {a}, g = {g}"),
        samples,
        seed,
        checks,
    })
}

/// Which continuity argument justified a multiplication modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModulusPath {
    /// `f(a) = 0`: every product difference has seminorm 0.
    ZeroFactor,
    /// `f(a) <= 1`: `f(ax - ar) <= f(x - r)`, so the window is reused.
    Contractive,
    /// `f(a) > 1`: the window is divided by `f(a)` in the target.
    DivisionScaled,
}

impl fmt::Display for ModulusPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModulusPath::ZeroFactor => "zero-factor",
            ModulusPath::Contractive => "contractive (f(a) <= 1)",
            ModulusPath::DivisionScaled => "division-scaled (f(a) > 1)",
        })
    }
}

/// `V'` with `f(x - r) in V' => f(ax - ar) in V`.
pub fn multiplication_modulus(
    spec: &SeminormSpec,
    a: &Element,
    v: &BasicOpen,
) -> Result<(BasicOpen, ModulusPath)> {
    spec.check_target(v)?;
    let fa = spec.value(a)?;
    if !v.contains(&spec.target().zero())? {
        return Err(Error::NotMember(format!("0 of window {v}")));
    }
    if fa.is_zero() {
        return Ok((BasicOpen::whole(spec.target()), ModulusPath::ZeroFactor));
    }
    if fa <= BigRational::one() {
        return Ok((v.clone(), ModulusPath::Contractive));
    }
    if !spec.target().is_divisible() {
        return Err(Error::NoModulus(format!(
            "f({a}) = {fa} > 1 is not invertible in {}",
            spec.target().name()
        )));
    }
    Ok((
        v.scale(&spec.target().scalar(&fa.recip())?)?,
        ModulusPath::DivisionScaled,
    ))
}

#[derive(Clone, Debug)]
pub struct HausdorffWitness {
    pub epsilon: BigRational,
    pub window: BasicOpen,
    pub certificate: Vec<String>,
    pub smoke_samples: usize,
    pub smoke_hits: usize,
}

impl HausdorffWitness {
    pub fn certified(&self) -> bool {
        self.smoke_hits == 0
    }
}

impl fmt::Display for HausdorffWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "epsilon: {}", self.epsilon)?;
        writeln!(f, "window: {}", self.window)?;
        for line in &self.certificate {
            writeln!(f, "certificate: {line}")?;
        }
        writeln!(
            f,
            "smoke: {} samples, {} common members",
            self.smoke_samples, self.smoke_hits
        )
    }
}

/// Disjoint balls `B_W(a)` and `B_W(b)` with `W = ]-e/2, e/2[`, `e = f(a - b)`.
pub fn hausdorff_witness(
    spec: &SeminormSpec,
    a: &Element,
    b: &Element,
    smoke_samples: usize,
    seed: u64,
) -> Result<HausdorffWitness> {
    spec.check_source(a)?;
    spec.check_source(b)?;
    if a == b {
        return Err(Error::PreconditionFailed("the two points coincide".into()));
    }
    let target = spec.target();
    if !target.order_kind().is_total() || !target.is_divisible() {
        return Err(Error::UnsupportedCarrier {
            operation: "hausdorff_witness",
            carrier: target.name().into(),
        });
    }
    let diff = a.sub(b)?;
    let epsilon = spec.value(&diff)?;
    if epsilon.is_zero() {
        return Err(Error::NotDefinite {
            difference: diff.to_string(),
        });
    }
    let half = &epsilon / BigInt::from(2);
    let window = BasicOpen::symmetric(&target.scalar(&half)?);

    // W + W inside ]-e, e[: the open bounds of W add up to exactly e.
    let (lo, hi) = window.interval_bounds()?;
    let (lo, hi) = (lo.expect("bounded"), hi.expect("bounded"));
    let reach = hi.add(&hi)?;
    let outer = BasicOpen::symmetric(&target.scalar(&epsilon)?);
    let mut certificate = vec![
        format!("e = f(a - b) = f({diff}) = {epsilon}"),
        format!("W = {window}"),
        format!("sup W + sup W = {reach}, inf W + inf W = {}", lo.add(&lo)?),
        format!(
            "e in ]-e, e[: {}",
            outer.contains(&target.scalar(&epsilon)?)?
        ),
    ];
    let triangle_ok =
        spec.claims().subadditive && spec.claims().even && reach.as_scalar() == Some(&epsilon);
    certificate.push(if triangle_ok {
        format!("x in both balls => e <= f(a - x) + f(x - b) < {half} + {half} = e, contradiction")
    } else {
        "triangle argument unavailable".into()
    });

    let ball_a = Ball::new(spec, a, &window)?;
    let ball_b = Ball::new(spec, b, &window)?;
    let mut hits = 0;
    for x in nearby_samples(spec, &[a.clone(), b.clone()], smoke_samples, seed)? {
        if ball_a.contains(&x)? && ball_b.contains(&x)? {
            hits += 1;
        }
    }
    if !triangle_ok {
        hits = hits.max(1);
    }
    Ok(HausdorffWitness {
        epsilon,
        window,
        certificate,
        smoke_samples,
        smoke_hits: hits,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CauchyVerdict {
    pub prefix_len: usize,
    /// Least index from which all differences lie in the window, per window.
    pub settled_from: Vec<Option<usize>>,
}

impl CauchyVerdict {
    pub fn passed(&self) -> bool {
        self.settled_from.iter().all(Option::is_some)
    }
}

impl fmt::Display for CauchyVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "prefix_len: {}", self.prefix_len)?;
        for (i, s) in self.settled_from.iter().enumerate() {
            match s {
                Some(n) => writeln!(f, "window[{i}]: settled from {n}")?,
                None => writeln!(f, "window[{i}]: not settled")?,
            }
        }
        writeln!(
            f,
            "verdict: {}",
            if self.passed() { "pass" } else { "fail" }
        )
    }
}

/// For each window, the least `N` such that `f(u_n - u_m)` lies in it for all
/// `n, m` in `[N, len)`; a settled tail must hold at least two terms.
pub fn cauchy_check(
    spec: &SeminormSpec,
    u: &[Element],
    windows: &[BasicOpen],
) -> Result<CauchyVerdict> {
    if u.len() < 2 {
        return Err(Error::PreconditionFailed(
            "Cauchy check needs at least two terms".into(),
        ));
    }
    for v in windows {
        spec.check_target(v)?;
    }
    let len = u.len();
    let mut settled_from = Vec::with_capacity(windows.len());
    for v in windows {
        let mut from = len - 1;
        'down: for n in (0..len - 1).rev() {
            for m in n + 1..len {
                let d = u[n].sub(&u[m])?;
                if !v.contains(&spec.eval(&d)?)? || !v.contains(&spec.eval(&d.neg())?)? {
                    break 'down;
                }
            }
            from = n;
        }
        settled_from.push((from + 1 < len).then_some(from));
    }
    Ok(CauchyVerdict {
        prefix_len: len,
        settled_from,
    })
}

/// The value a sequence prefix is eventually constant at, with the index
/// where it settles, if the constant tail has at least two terms.
pub fn stabilized_limit(u: &[Element]) -> Option<(Element, usize)> {
    let last = u.last()?;
    let from = u.iter().rposition(|x| x != last).map_or(0, |i| i + 1);
    (u.len() - from >= 2).then(|| (last.clone(), from))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::parse_element;

    fn series(n: usize) -> Ring {
        instance_from_designator(&format!("series:{n}")).unwrap()
    }

    fn window(spec: &SeminormSpec, r: &str) -> BasicOpen {
        BasicOpen::symmetric(&parse_element(spec.target(), r).unwrap())
    }

    #[test]
    fn shipped_norms_pass_every_flag() {
        for (name, ring) in [
            ("ord2", "series:8"),
            ("abs", "rat"),
            ("padic", "padic:5,4"),
            ("abs", "int"),
        ] {
            let spec =
                SeminormSpec::by_name(name, &instance_from_designator(ring).unwrap()).unwrap();
            let report = check_seminorm_axioms(&spec, 300, 3);
            assert!(report.passed(), "{report}");
            assert!(report.checks.iter().all(|c| c.passed()), "{report}");
        }
    }

    #[test]
    fn const_term_is_not_definite() {
        let ring = series(8);
        let spec = SeminormSpec::by_name("const-term", &ring).unwrap();
        let report = check_seminorm_axioms(&spec, 300, 3);
        assert!(report.passed());
        let definite = report.check("definite").unwrap();
        assert!(!definite.required);
        match &definite.outcome {
            crate::algebra::CheckOutcome::Fail { witness, .. } => {
                assert_eq!(witness[0], parse_element(&ring, "[0,1]").unwrap());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_or_mismatched_seminorms() {
        let rat = instance_from_designator("rat").unwrap();
        assert!(SeminormSpec::by_name("sup", &rat).is_err());
        assert!(SeminormSpec::by_name("ord2", &rat).is_err());
    }

    #[test]
    fn ball_examples() {
        let ring = series(8);
        let spec = SeminormSpec::by_name("ord2", &ring).unwrap();
        let ball = Ball::new(&spec, &ring.one(), &window(&spec, "1/4")).unwrap();
        assert!(ball
            .contains(&parse_element(&ring, "[1,0,0,1]").unwrap())
            .unwrap());
        assert!(!ball
            .contains(&parse_element(&ring, "[1,1]").unwrap())
            .unwrap());

        let rat = instance_from_designator("rat").unwrap();
        let abs = SeminormSpec::by_name("abs", &rat).unwrap();
        let ball = Ball::new(&abs, &rat.zero(), &window(&abs, "2")).unwrap();
        assert!(ball_contains(&ball, &rat.one()).unwrap());
        assert!(matches!(
            ball.contains(&ring.one()),
            Err(Error::MixedRings { .. })
        ));
    }

    #[test]
    fn refine_examples() {
        let ring = series(8);
        let spec = SeminormSpec::by_name("ord2", &ring).unwrap();
        let v = window(&spec, "1/2");
        let g = ring.one();
        let gp = parse_element(&ring, "[1,0,0,1]").unwrap();
        let gpp = parse_element(&ring, "[1,0,1]").unwrap();
        let vpp = refine_ball(&v, &v, &g, &gp, &gpp, &spec).unwrap();
        let inner = Ball::new(&spec, &gpp, &vpp).unwrap();
        let b1 = Ball::new(&spec, &g, &v).unwrap();
        let b2 = Ball::new(&spec, &gp, &v).unwrap();
        let mut members = 0;
        for x in nearby_samples(&spec, std::slice::from_ref(&gpp), 2000, 9).unwrap() {
            if inner.contains(&x).unwrap() {
                members += 1;
                assert!(b1.contains(&x).unwrap() && b2.contains(&x).unwrap(), "{x}");
            }
        }
        assert!(members >= 100, "{members}");

        let same = refine_ball(&v, &v, &g, &g, &g, &spec).unwrap();
        assert_eq!(
            same,
            v.intersect(&v.negate())
                .unwrap()
                .intersect(&v)
                .unwrap()
                .intersect(&v.negate())
                .unwrap()
        );

        let far = parse_element(&ring, "[2]").unwrap();
        assert!(matches!(
            refine_ball(&v, &v, &g, &gp, &far, &spec),
            Err(Error::PreconditionFailed(_))
        ));
    }

    #[test]
    fn translation_law_on_series() {
        let ring = series(8);
        let spec = SeminormSpec::by_name("ord2", &ring).unwrap();
        let a = parse_element(&ring, "[0,2,1]").unwrap();
        let g = parse_element(&ring, "[1,-1]").unwrap();
        let report = ball_translation_law(&spec, &a, &g, &window(&spec, "1/8"), 500, 1).unwrap();
        assert!(report.passed(), "{report}");
        let report = ball_translation_law(
            &spec,
            &ring.zero(),
            &ring.zero(),
            &window(&spec, "1/2"),
            200,
            2,
        )
        .unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn modulus_examples() {
        let ring = series(8);
        let spec = SeminormSpec::by_name("ord2", &ring).unwrap();
        let v = window(&spec, "1/4");
        let x = parse_element(&ring, "[0,1]").unwrap();
        assert_eq!(
            multiplication_modulus(&spec, &x, &v).unwrap(),
            (v.clone(), ModulusPath::Contractive)
        );

        let rat = instance_from_designator("rat").unwrap();
        let abs = SeminormSpec::by_name("abs", &rat).unwrap();
        let (vp, path) = multiplication_modulus(&abs, &rat.integer(3), &window(&abs, "1")).unwrap();
        assert_eq!(vp, window(&abs, "1/3"));
        assert_eq!(path, ModulusPath::DivisionScaled);
        let (vp, path) = multiplication_modulus(&abs, &rat.zero(), &window(&abs, "1")).unwrap();
        assert!(vp.is_whole());
        assert_eq!(path, ModulusPath::ZeroFactor);
    }

    #[test]
    fn hausdorff_examples() {
        let ring = series(8);
        let spec = SeminormSpec::by_name("ord2", &ring).unwrap();
        let b = parse_element(&ring, "[1,1]").unwrap();
        let w = hausdorff_witness(&spec, &ring.one(), &b, 2000, 0).unwrap();
        assert_eq!(w.epsilon, BigRational::new(1.into(), 2.into()));
        assert_eq!(w.window, window(&spec, "1/4"));
        assert!(w.certified());

        let rat = instance_from_designator("rat").unwrap();
        let abs = SeminormSpec::by_name("abs", &rat).unwrap();
        let w = hausdorff_witness(&abs, &rat.zero(), &rat.one(), 500, 0).unwrap();
        assert_eq!(w.window, window(&abs, "1/2"));

        let ct = SeminormSpec::by_name("const-term", &ring).unwrap();
        let x = parse_element(&ring, "[0,1]").unwrap();
        assert_eq!(
            hausdorff_witness(&ct, &ring.zero(), &x, 10, 0).unwrap_err(),
            Error::NotDefinite {
                difference: "[0,-1]".into()
            }
        );
    }

    #[test]
    fn cauchy_examples() {
        let ring = series(16);
        let spec = SeminormSpec::by_name("ord2", &ring).unwrap();
        let mut u = Vec::new();
        let mut acc = ring.zero();
        let mut power = ring.one();
        let x = parse_element(&ring, "[0,1]").unwrap();
        for _ in 0..20 {
            acc = acc.add(&power).unwrap();
            power = power.mul(&x).unwrap();
            u.push(acc.clone());
        }
        let windows: Vec<BasicOpen> = (0..=8)
            .map(|j| BasicOpen::symmetric(&spec.target().scalar(&inverse_power(2, j)).unwrap()))
            .collect();
        let verdict = cauchy_check(&spec, &u, &windows).unwrap();
        assert!(verdict.passed());
        assert_eq!(verdict.settled_from, (0..=8).map(Some).collect::<Vec<_>>());
        assert_eq!(stabilized_limit(&u).map(|(_, n)| n), Some(15));

        let int = instance_from_designator("int").unwrap();
        let abs = SeminormSpec::by_name("abs", &int).unwrap();
        let naturals: Vec<Element> = (0..10).map(|n| int.integer(n)).collect();
        assert!(!cauchy_check(&abs, &naturals, &[window(&abs, "1")])
            .unwrap()
            .passed());

        let constant = vec![int.integer(4); 3];
        let verdict = cauchy_check(&abs, &constant, &[window(&abs, "1")]).unwrap();
        assert_eq!(verdict.settled_from, vec![Some(0)]);
    }
}

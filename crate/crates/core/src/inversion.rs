//! Certifying inversion by geometric series.
//!
//! Ordered mode sums `s_n = sum_{k<=n} (1-x)^k` (oriented powers) under a
//! witness `c` with `x c >= 1`; seminormed mode sums the same series under
//! `f(1 - x) < 1`. Every run ends in a certificate recording what was checked.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::algebra::{Comparison, PowerDirection};
use crate::error::{Error, Result};
use crate::rings::{Element, Ring};
use crate::seminorm::{cauchy_check, check_seminorm_axioms, multiplication_modulus, SeminormSpec};
use crate::topology::BasicOpen;

pub const DEFAULT_BUDGET: usize = 64;
/// Largest multiplier tried by the doubling search unless configured.
pub const DEFAULT_SEARCH_BUDGET: u64 = 1 << 20;
/// Leading trace entries kept in rendered certificates.
pub const TRACE_HEAD: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessSearch {
    Found { c: Element, n: u64 },
    NotFound { tried_up_to: u64 },
    IncomparabilityHit { n: u64 },
}

impl fmt::Display for WitnessSearch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessSearch::Found { c, n } => write!(f, "found c = {c} (n = {n})"),
            WitnessSearch::NotFound { tried_up_to } => write!(f, "not found (n <= {tried_up_to})"),
            WitnessSearch::IncomparabilityHit { n } => write!(f, "incomparability hit at n = {n}"),
        }
    }
}

/// Tries `n = 1, 2, 4, ...` up to `budget` for `n x >= 1`.
pub fn archimedean_witness_search(x: &Element, budget: u64) -> Result<WitnessSearch> {
    if !x.is_positive() {
        return Err(Error::NotPositive(x.to_string()));
    }
    let one = x.ring().one();
    let mut n = 1u64;
    let mut tried = 0;
    while n <= budget {
        match x.times(n)?.compare(&one)? {
            Comparison::Greater | Comparison::Equal => {
                return Ok(WitnessSearch::Found {
                    c: one.times(n)?,
                    n,
                })
            }
            Comparison::Incomparable => return Ok(WitnessSearch::IncomparabilityHit { n }),
            Comparison::Less => {}
        }
        tried = n;
        match n.checked_mul(2) {
            Some(next) => n = next,
            None => break,
        }
    }
    Ok(WitnessSearch::NotFound { tried_up_to: tried })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InversionStatus {
    ExactInverse,
    ConvergentEvidence,
    HypothesisFailed,
    BudgetExhausted,
}

impl InversionStatus {
    fn severity(self) -> u8 {
        match self {
            InversionStatus::ExactInverse => 0,
            InversionStatus::ConvergentEvidence => 1,
            InversionStatus::BudgetExhausted => 2,
            InversionStatus::HypothesisFailed => 3,
        }
    }
}

impl fmt::Display for InversionStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Right,
    Left,
    TwoSided,
}

impl From<PowerDirection> for Direction {
    fn from(d: PowerDirection) -> Self {
        match d {
            PowerDirection::RightNested => Direction::Right,
            PowerDirection::LeftNested => Direction::Left,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Right => "right",
            Direction::Left => "left",
            Direction::TwoSided => "two-sided",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessSource {
    Supplied,
    Search { n: u64 },
    NotApplicable,
}

impl fmt::Display for WitnessSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessSource::Supplied => f.write_str("supplied"),
            WitnessSource::Search { n } => write!(f, "archimedean search (n = {n})"),
            WitnessSource::NotApplicable => f.write_str("absent"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisVerdict {
    pub name: String,
    pub holds: bool,
    pub detail: String,
    pub witness: Option<Element>,
}

impl HypothesisVerdict {
    fn new(name: &str, holds: bool, detail: impl Into<String>) -> Self {
        HypothesisVerdict {
            name: name.into(),
            holds,
            detail: detail.into(),
            witness: None,
        }
    }

    fn with_witness(mut self, w: &Element) -> Self {
        self.witness = Some(w.clone());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub n: usize,
    pub residual: Element,
    /// Seminorm of the residual, in seminormed runs.
    pub measure: Option<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InversionCertificate {
    pub status: InversionStatus,
    pub direction: Direction,
    /// Number of series terms in the candidate.
    pub iterations: usize,
    pub inverse_candidate: Option<Element>,
    pub residual_trace: Vec<TraceEntry>,
    pub witness_used: Option<Element>,
    pub witness_source: WitnessSource,
    pub hypothesis_report: Vec<HypothesisVerdict>,
    pub path_note: Option<String>,
}

impl InversionCertificate {
    fn new(direction: Direction) -> Self {
        InversionCertificate {
            status: InversionStatus::BudgetExhausted,
            direction,
            iterations: 0,
            inverse_candidate: None,
            residual_trace: Vec::new(),
            witness_used: None,
            witness_source: WitnessSource::NotApplicable,
            hypothesis_report: Vec::new(),
            path_note: None,
        }
    }

    /// Records a verdict; returns whether it holds.
    fn hypothesis(&mut self, v: HypothesisVerdict) -> bool {
        let holds = v.holds;
        self.hypothesis_report.push(v);
        if !holds {
            self.status = InversionStatus::HypothesisFailed;
        }
        holds
    }

    pub fn failed_hypothesis(&self) -> Option<&HypothesisVerdict> {
        self.hypothesis_report.iter().find(|h| !h.holds)
    }
}

fn opt(e: &Option<Element>) -> String {
    e.as_ref()
        .map_or_else(|| "absent".into(), ToString::to_string)
}

impl fmt::Display for InversionCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "status: {}", self.status)?;
        writeln!(f, "direction: {}", self.direction)?;
        writeln!(f, "iterations: {}", self.iterations)?;
        writeln!(f, "inverse_candidate: {}", opt(&self.inverse_candidate))?;
        writeln!(f, "witness_used: {}", opt(&self.witness_used))?;
        writeln!(f, "witness_source: {}", self.witness_source)?;
        writeln!(f, "hypothesis_report:")?;
        for h in &self.hypothesis_report {
            let verdict = if h.holds { "holds" } else { "FAILS" };
            write!(f, "  {}: {verdict}; {}", h.name, h.detail)?;
            if let Some(w) = &h.witness {
                write!(f, "; witness {w}")?;
            }
            writeln!(f)?;
        }
        writeln!(f, "residual_trace: {} entries", self.residual_trace.len())?;
        let len = self.residual_trace.len();
        for (i, t) in self.residual_trace.iter().enumerate() {
            if i >= TRACE_HEAD && i + 1 < len {
                if i == TRACE_HEAD {
                    writeln!(f, "  ...")?;
                }
                continue;
            }
            write!(f, "  n={} r={}", t.n, t.residual)?;
            if let Some(m) = &t.measure {
                write!(f, " f={m}")?;
            }
            writeln!(f)?;
        }
        writeln!(
            f,
            "path_note: {}",
            self.path_note.as_deref().unwrap_or("absent")
        )
    }
}

#[derive(Clone, Debug)]
pub struct OrderedOptions {
    pub direction: PowerDirection,
    pub budget: usize,
    /// Supplied witness `c`; searched for when absent.
    pub witness: Option<Element>,
    /// Positive elements the residual powers must drop below for convergence evidence.
    pub family: Vec<Element>,
    pub search_budget: u64,
}

impl Default for OrderedOptions {
    fn default() -> Self {
        OrderedOptions {
            direction: PowerDirection::RightNested,
            budget: DEFAULT_BUDGET,
            witness: None,
            family: Vec::new(),
            search_budget: DEFAULT_SEARCH_BUDGET,
        }
    }
}

/// `{2^-k : 1 <= k <= max_k}` embedded in a divisible ring.
pub fn dyadic_family(ring: &Ring, max_k: u32) -> Result<Vec<Element>> {
    (1..=max_k)
        .map(|k| ring.scalar(&BigRational::new(BigInt::one(), BigInt::from(2).pow(k))))
        .collect()
}

fn product(dir: PowerDirection, x: &Element, s: &Element) -> Result<Element> {
    match dir {
        PowerDirection::RightNested => x.mul(s),
        PowerDirection::LeftNested => s.mul(x),
    }
}

/// Ordered inversion: right inverse for `RightNested`, left for `LeftNested`.
pub fn invert_ordered(x: &Element, options: &OrderedOptions) -> Result<InversionCertificate> {
    let dir = options.direction;
    let ring = x.ring().clone();
    let one = ring.one();
    let mut cert = InversionCertificate::new(dir.into());

    let unit_ok = ring.declares_unit_nonnegative() && one.is_nonnegative();
    if !cert.hypothesis(HypothesisVerdict::new(
        "1 >= 0",
        unit_ok,
        format!("declared by {}", ring.name()),
    )) {
        return Ok(cert);
    }
    if !cert.hypothesis(
        HypothesisVerdict::new("x > 0", x.is_positive(), format!("x = {x}")).with_witness(x),
    ) {
        return Ok(cert);
    }
    let below_one = x.compare(&one)?;
    if !cert.hypothesis(HypothesisVerdict::new(
        "x <= 1",
        below_one.is_le(),
        format!("x vs 1: {below_one}"),
    )) {
        return Ok(cert);
    }

    let c = match &options.witness {
        Some(c) => {
            x.check_same_ring(c)?;
            cert.witness_source = WitnessSource::Supplied;
            c.clone()
        }
        None => match archimedean_witness_search(x, options.search_budget)? {
            WitnessSearch::Found { c, n } => {
                cert.witness_source = WitnessSource::Search { n };
                c
            }
            other => {
                let detail = match other {
                    WitnessSearch::NotFound { tried_up_to } => {
                        format!("no n <= {tried_up_to} with n x >= 1")
                    }
                    WitnessSearch::IncomparabilityHit { n } => {
                        format!("{n} x is incomparable to 1")
                    }
                    WitnessSearch::Found { .. } => unreachable!(),
                };
                cert.hypothesis(
                    HypothesisVerdict::new("sup-almost-inverse witness", false, detail)
                        .with_witness(x),
                );
                return Ok(cert);
            }
        },
    };
    cert.witness_used = Some(c.clone());
    if !cert.hypothesis(
        HypothesisVerdict::new("c > 0", c.is_positive(), format!("c = {c}")).with_witness(&c),
    ) {
        return Ok(cert);
    }
    let xc = product(dir, x, &c)?;
    let name = match dir {
        PowerDirection::RightNested => "x c >= 1",
        PowerDirection::LeftNested => "c x >= 1",
    };
    let cmp = xc.compare(&one)?;
    if !cert.hypothesis(
        HypothesisVerdict::new(name, cmp.is_ge(), format!("product = {xc}, vs 1: {cmp}"))
            .with_witness(&c),
    ) {
        return Ok(cert);
    }

    let y = one.sub(x)?;
    let mut t = one.clone();
    let mut s = one.clone();
    let mut powers = vec![t.clone()];
    for n in 0..options.budget {
        if n > 0 {
            t = dir.step(&y, &t)?;
            let next = s.add(&t)?;
            let recurrence = match dir {
                PowerDirection::RightNested => y.mul(&s)?.add(&one)?,
                PowerDirection::LeftNested => s.mul(&y)?.add(&one)?,
            };
            if recurrence != next {
                return Err(Error::InvariantViolation {
                    index: n,
                    detail: format!("s_n = {next} but (1-x) s_(n-1) + 1 = {recurrence}"),
                });
            }
            if !s.leq(&next)? {
                return Err(Error::InvariantViolation {
                    index: n,
                    detail: format!("s_n = {next} < s_(n-1) = {s}"),
                });
            }
            s = next;
            powers.push(t.clone());
        }
        if !s.leq(&c)? {
            return Err(Error::InvariantViolation {
                index: n,
                detail: format!("s_n = {s} exceeds c = {c}"),
            });
        }
        let xs = product(dir, x, &s)?;
        let residual = one.sub(&xs)?;
        cert.residual_trace.push(TraceEntry {
            n,
            residual: residual.clone(),
            measure: None,
        });
        cert.iterations = n + 1;
        if xs == one {
            cert.status = InversionStatus::ExactInverse;
            cert.inverse_candidate = Some(s);
            return Ok(cert);
        }
        let next_power = dir.step(&y, &t)?;
        if next_power.is_zero() {
            return Err(Error::InvariantViolation {
                index: n + 1,
                detail: format!("series terminated but x s = 1 - {residual}"),
            });
        }
    }
    cert.inverse_candidate = Some(s);
    cert.status = if converges_against(&powers, &options.family)? {
        InversionStatus::ConvergentEvidence
    } else {
        InversionStatus::BudgetExhausted
    };
    Ok(cert)
}

/// Residual powers weakly decreasing and below every family element at some index.
fn converges_against(powers: &[Element], family: &[Element]) -> Result<bool> {
    if family.is_empty() {
        return Ok(false);
    }
    for w in powers.windows(2) {
        if !w[1].leq(&w[0])? {
            return Ok(false);
        }
    }
    for eps in family {
        let mut reached = false;
        for t in powers {
            if t.leq(eps)? {
                reached = true;
                break;
            }
        }
        if !reached {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Both oriented series; when both terminate the candidates must agree.
pub fn invert_two_sided(
    x: &Element,
    c_right: Option<&Element>,
    c_left: Option<&Element>,
    budget: usize,
    family: &[Element],
) -> Result<InversionCertificate> {
    let run = |direction, witness: Option<&Element>| {
        invert_ordered(
            x,
            &OrderedOptions {
                direction,
                budget,
                witness: witness.cloned(),
                family: family.to_vec(),
                ..OrderedOptions::default()
            },
        )
    };
    let right = run(PowerDirection::RightNested, c_right)?;
    let left = run(PowerDirection::LeftNested, c_left)?;
    let mut cert = right.clone();
    cert.direction = Direction::TwoSided;
    cert.hypothesis_report = Vec::new();
    for (tag, part) in [("right", &right), ("left", &left)] {
        for h in &part.hypothesis_report {
            cert.hypothesis_report.push(HypothesisVerdict {
                name: format!("{tag}: {}", h.name),
                ..h.clone()
            });
        }
    }
    cert.status = if right.status.severity() >= left.status.severity() {
        right.status
    } else {
        left.status
    };
    if right.status == InversionStatus::ExactInverse && left.status == InversionStatus::ExactInverse
    {
        let (r, l) = (
            right.inverse_candidate.unwrap(),
            left.inverse_candidate.unwrap(),
        );
        if r != l {
            return Err(Error::DirectionalMismatch {
                right: r.to_string(),
                left: l.to_string(),
            });
        }
        let one = x.ring().one();
        if x.mul(&r)? != one || r.mul(x)? != one {
            return Err(Error::InvariantViolation {
                index: cert.iterations,
                detail: "two-sided product check".into(),
            });
        }
        cert.iterations = right.iterations.max(left.iterations);
        cert.inverse_candidate = Some(r);
    }
    Ok(cert)
}

/// Samples used to confirm the seminorm axioms before a seminormed run.
const SEMINORM_PRECHECK_SAMPLES: usize = 100;

/// Seminormed inversion under `f(1 - x) < 1`.
pub fn invert_seminormed(
    x: &Element,
    spec: &SeminormSpec,
    windows: &[BasicOpen],
    budget: usize,
) -> Result<InversionCertificate> {
    let mut cert = InversionCertificate::new(Direction::Right);
    let ring = x.ring().clone();
    if !crate::rings::same_ring(&ring, spec.source()) {
        return Err(Error::MixedRings {
            left: spec.source().name().into(),
            right: ring.name().into(),
        });
    }
    let axioms = check_seminorm_axioms(spec, SEMINORM_PRECHECK_SAMPLES, 0);
    if !cert.hypothesis(HypothesisVerdict::new(
        "seminorm axioms",
        axioms.passed(),
        format!("{spec}, {} samples", SEMINORM_PRECHECK_SAMPLES),
    )) {
        return Ok(cert);
    }
    let target_one = spec.target().one();
    if !cert.hypothesis(HypothesisVerdict::new(
        "1 >= 0 in target",
        spec.target().declares_unit_nonnegative() && target_one.is_nonnegative(),
        format!("declared by {}", spec.target().name()),
    )) {
        return Ok(cert);
    }
    let one = ring.one();
    let y = one.sub(x)?;
    let fy = spec.value(&y)?;
    if !cert.hypothesis(
        HypothesisVerdict::new(
            "f(1-x) < 1",
            fy < BigRational::one(),
            format!("f(1-x) = f({y}) = {fy}"),
        )
        .with_witness(x),
    ) {
        return Ok(cert);
    }

    let reference = windows
        .first()
        .cloned()
        .unwrap_or_else(|| BasicOpen::symmetric(&target_one));
    let (_, path) = multiplication_modulus(spec, x, &reference)?;
    cert.path_note = Some(format!("multiplication by x continuous via {path}"));

    let mut t = one.clone();
    let mut u = one.clone();
    let mut partial_sums = Vec::new();
    for n in 0..budget {
        if n > 0 {
            t = y.mul(&t)?;
            u = u.add(&t)?;
        }
        partial_sums.push(u.clone());
        let xu = x.mul(&u)?;
        let residual = one.sub(&xu)?;
        let measure = spec.value(&residual)?;
        cert.residual_trace.push(TraceEntry {
            n,
            residual: residual.clone(),
            measure: Some(measure),
        });
        cert.iterations = n + 1;
        if xu == one {
            cert.status = InversionStatus::ExactInverse;
            cert.inverse_candidate = Some(u);
            return Ok(cert);
        }
    }
    cert.inverse_candidate = Some(u);
    if partial_sums.len() >= 2 {
        let verdict = cauchy_check(spec, &partial_sums, windows)?;
        if let Some(i) = verdict.settled_from.iter().position(Option::is_none) {
            return Err(Error::NotCauchy {
                window: windows[i].to_string(),
            });
        }
    }
    let last = cert.residual_trace.last().and_then(|t| t.measure.clone());
    let mut entered = !windows.is_empty();
    if let Some(m) = last {
        let m = spec.target().scalar(&m)?;
        for v in windows {
            entered &= v.contains(&m)?;
        }
    }
    cert.status = if entered {
        InversionStatus::ConvergentEvidence
    } else {
        InversionStatus::BudgetExhausted
    };
    Ok(cert)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InfPowerVerdict {
    /// Index at which the power first drops below each family element.
    Pass { reached_at: Vec<usize> },
    Fail {
        /// Family elements never undercut within the budget.
        unreached: Vec<Element>,
        /// Nonzero `a` with `x a = a` (or `a x = a`), when one was found.
        fixed_point: Option<Element>,
    },
}

impl fmt::Display for InfPowerVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InfPowerVerdict::Pass { reached_at } => {
                let at: Vec<String> = reached_at.iter().map(ToString::to_string).collect();
                write!(f, "pass; reached at [{}]", at.join(", "))
            }
            InfPowerVerdict::Fail {
                unreached,
                fixed_point,
            } => {
                let un: Vec<String> = unreached.iter().map(ToString::to_string).collect();
                write!(
                    f,
                    "fail; unreached [{}]; fixed point {}",
                    un.join(", "),
                    opt(fixed_point)
                )
            }
        }
    }
}

/// Pointwise check that the oriented powers of `x` have infimum 0, plus the
/// fixed-point test `x a = a` for a supplied or discovered lower bound `a`.
pub fn inf_power_zero_check(
    x: &Element,
    direction: PowerDirection,
    family: &[Element],
    budget: usize,
    candidate: Option<&Element>,
) -> Result<InfPowerVerdict> {
    let ring = x.ring().clone();
    let (zero, one) = (ring.zero(), ring.one());
    if !zero.leq(x)? || !x.leq(&one)? {
        return Err(Error::PreconditionFailed(format!("{x} is not in [0, 1]")));
    }
    let mut reached: Vec<Option<usize>> = vec![None; family.len()];
    let mut discovered = None;
    let mut prev: Option<Element> = None;
    let mut p = one.clone();
    for n in 1..=budget.max(1) {
        p = direction.step(x, &p)?;
        for (slot, eps) in reached.iter_mut().zip(family) {
            if slot.is_none() && p.leq(eps)? {
                *slot = Some(n);
            }
        }
        if prev.as_ref() == Some(&p) && !p.is_zero() {
            discovered = Some(p.clone());
            break;
        }
        if !family.is_empty() && reached.iter().all(Option::is_some) && candidate.is_none() {
            break;
        }
        prev = Some(p.clone());
    }
    let mut fixed_point = None;
    for a in candidate.into_iter().chain(discovered.as_ref()) {
        x.check_same_ring(a)?;
        let image = product(direction, x, a)?;
        if !a.is_zero() && a.is_nonnegative() && image == *a {
            fixed_point = Some(a.clone());
            break;
        }
    }
    if fixed_point.is_none() && reached.iter().all(Option::is_some) {
        return Ok(InfPowerVerdict::Pass {
            reached_at: reached.into_iter().flatten().collect(),
        });
    }
    let unreached = family
        .iter()
        .zip(&reached)
        .filter(|(_, r)| r.is_none())
        .map(|(e, _)| e.clone())
        .collect();
    Ok(InfPowerVerdict::Fail {
        unreached,
        fixed_point,
    })
}

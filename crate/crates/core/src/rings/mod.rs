//! Concrete exact-arithmetic rings.
//!
//! Every ring is described at runtime by a [`RingSpec`] and realized as a
//! shared [`RingInstance`]. Elements carry a handle to their instance and a
//! canonical [`Value`] payload, so equality of elements is syntactic.
//!
//! Shipped carriers:
//!
//! - big integers and big rationals with their usual total order;
//! - univariate polynomials over either, ordered lexicographically (sign of
//!   the highest-degree coefficient) or antilexicographically (sign of the
//!   lowest-degree coefficient);
//! - pairs over either with lexicographic or componentwise order and a
//!   componentwise or dual-number product;
//! - rational power series truncated at `X^N`, ordered antilexicographically;
//! - residues modulo `p^N` with the trivial cone `{0}`;
//! - finite-rank rational algebras given by structure constants, ordered by
//!   the cone of nonnegative multiples of the unit.

mod grammar;
mod sample;

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::Comparison;
use crate::error::{Error, Result};

pub(crate) use grammar::Cursor;
pub use grammar::{parse_element, render_element};
pub use sample::Sampler;

pub type Ring = Arc<RingInstance>;

/// Default bound on polynomial degree before multiplication gives up.
pub const DEFAULT_DEGREE_GUARD: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scalars {
    Integers,
    Rationals,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PolyOrder {
    Lexicographic,
    Antilexicographic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairOrder {
    Lexicographic,
    Componentwise,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairProduct {
    Componentwise,
    /// `(a,b)(c,d) = (ac, ad + bc)`
    DualNumber,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Total,
    Lexicographic,
    Antilexicographic,
    Componentwise,
    ConeGenerated,
}

impl OrderKind {
    pub fn is_total(self) -> bool {
        matches!(
            self,
            OrderKind::Total | OrderKind::Lexicographic | OrderKind::Antilexicographic
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialRingSpec {
    pub base: Scalars,
    pub order: PolyOrder,
    pub max_degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairRingSpec {
    pub base: Scalars,
    pub order: PairOrder,
    pub product: PairProduct,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeriesSpec {
    pub precision: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueRingSpec {
    pub prime: u64,
    pub exponent: u32,
}

/// A rational algebra with basis `e_0..e_{r-1}` and products
/// `e_i * e_j = sum_k table[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstantAlgebraSpec {
    pub table: Vec<Vec<Vec<BigRational>>>,
    pub unit_index: usize,
}

impl StructureConstantAlgebraSpec {
    pub fn rank(&self) -> usize {
        self.table.len()
    }

    /// Basis `{1, a, b}` with `a*a = b`, `a*b = 1`, `b*a = 0`, `b*b = 0`.
    pub fn twisted3() -> Self {
        let basis = |k: usize| -> Vec<BigRational> {
            (0..3)
                .map(|i| {
                    if i == k {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        };
        let zero = vec![BigRational::zero(); 3];
        let table = vec![
            vec![basis(0), basis(1), basis(2)],
            vec![basis(1), basis(2), basis(0)],
            vec![basis(2), zero.clone(), zero],
        ];
        StructureConstantAlgebraSpec {
            table,
            unit_index: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingSpec {
    Integers,
    Rationals,
    Polynomial(PolynomialRingSpec),
    Pair(PairRingSpec),
    TruncatedSeries(TruncatedSeriesSpec),
    Residues(ResidueRingSpec),
    StructureConstants(StructureConstantAlgebraSpec),
}

/// Deliberate corruptions used only by negative-control fixtures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Fault {
    /// Rationals with `a (+) b = a + 2b`.
    NoncommutativeAddition,
    /// Rationals whose positive cone is declared to be everything.
    AllPositive,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Scalar(BigRational),
    Coeffs(Vec<BigRational>),
    Pair(BigRational, BigRational),
    Residue(BigUint),
    Vector(Vec<BigRational>),
}

#[derive(Debug)]
pub struct RingInstance {
    name: String,
    spec: RingSpec,
    fault: Option<Fault>,
    modulus: BigUint,
}

/// Builds a validated ring instance from its spec.
pub fn make_instance(spec: RingSpec) -> Result<Ring> {
    let mut modulus = BigUint::zero();
    match &spec {
        RingSpec::Integers | RingSpec::Rationals | RingSpec::Pair(_) => {}
        RingSpec::Polynomial(p) => {
            if p.max_degree == 0 {
                return Err(Error::InvalidSpec("degree guard must be positive".into()));
            }
        }
        RingSpec::TruncatedSeries(s) => {
            if s.precision == 0 {
                return Err(Error::InvalidSpec("series precision must be >= 1".into()));
            }
        }
        RingSpec::Residues(r) => {
            if !is_prime(r.prime) {
                return Err(Error::InvalidSpec(format!("{} is not prime", r.prime)));
            }
            if r.exponent == 0 {
                return Err(Error::InvalidSpec("residue exponent must be >= 1".into()));
            }
            modulus = BigUint::from(r.prime).pow(r.exponent);
        }
        RingSpec::StructureConstants(s) => validate_structure(s)?,
    }
    Ok(Arc::new(RingInstance {
        name: designator(&spec),
        spec,
        fault: None,
        modulus,
    }))
}

/// Builds one of the corrupted rational fixtures.
pub fn make_fixture(fault: Fault) -> Ring {
    let name = match fault {
        Fault::NoncommutativeAddition => "fixture:noncomm-add",
        Fault::AllPositive => "fixture:all-positive",
    };
    Arc::new(RingInstance {
        name: name.to_string(),
        spec: RingSpec::Rationals,
        fault: Some(fault),
        modulus: BigUint::zero(),
    })
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn validate_structure(s: &StructureConstantAlgebraSpec) -> Result<()> {
    let r = s.rank();
    if r == 0 {
        return Err(Error::InvalidSpec(
            "structure-constant rank must be >= 1".into(),
        ));
    }
    if s.unit_index >= r {
        return Err(Error::InvalidSpec(format!(
            "unit index {} out of range for rank {r}",
            s.unit_index
        )));
    }
    for (i, row) in s.table.iter().enumerate() {
        if row.len() != r || row.iter().any(|v| v.len() != r) {
            return Err(Error::InvalidSpec(format!("table row {i} is not {r}x{r}")));
        }
    }
    for i in 0..r {
        let expected: Vec<BigRational> = (0..r)
            .map(|k| {
                if k == i {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        if s.table[s.unit_index][i] != expected || s.table[i][s.unit_index] != expected {
            return Err(Error::InvalidSpec(format!(
                "unit e_{} fails the identity law on e_{i}",
                s.unit_index
            )));
        }
    }
    Ok(())
}

/// The canonical textual name of a spec, as accepted by [`instance_from_designator`].
pub fn designator(spec: &RingSpec) -> String {
    match spec {
        RingSpec::Integers => "int".into(),
        RingSpec::Rationals => "rat".into(),
        RingSpec::Polynomial(p) => {
            let prefix = match p.base {
                Scalars::Integers => "zpoly",
                Scalars::Rationals => "poly",
            };
            let order = match p.order {
                PolyOrder::Lexicographic => "lex",
                PolyOrder::Antilexicographic => "antilex",
            };
            if p.max_degree == DEFAULT_DEGREE_GUARD {
                format!("{prefix}:{order}")
            } else {
                format!("{prefix}:{order}:{}", p.max_degree)
            }
        }
        RingSpec::Pair(p) => {
            let prefix = match p.base {
                Scalars::Integers => "zpair",
                Scalars::Rationals => "pair",
            };
            let order = match p.order {
                PairOrder::Lexicographic => "lex",
                PairOrder::Componentwise => "comp",
            };
            let product = match p.product {
                PairProduct::Componentwise => "comp",
                PairProduct::DualNumber => "dual",
            };
            format!("{prefix}:{order},{product}")
        }
        RingSpec::TruncatedSeries(s) => format!("series:{}", s.precision),
        RingSpec::Residues(r) => format!("padic:{},{}", r.prime, r.exponent),
        RingSpec::StructureConstants(s) => {
            if *s == StructureConstantAlgebraSpec::twisted3() {
                "sca:twisted3".into()
            } else {
                format!("sca:rank{}", s.rank())
            }
        }
    }
}

/// Parses a ring designator such as `rat`, `poly:lex`, `pair:lex,dual`,
/// `series:8`, `padic:5,4`, `sca:twisted3` or `fixture:all-positive`.
pub fn instance_from_designator(text: &str) -> Result<Ring> {
    let text = text.trim();
    let (head, args) = match text.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (text, None),
    };
    let bad = || Error::InvalidSpec(format!("unknown ring designator `{text}`"));
    let spec = match (head, args) {
        ("int", None) => RingSpec::Integers,
        ("rat", None) => RingSpec::Rationals,
        ("poly" | "zpoly", Some(args)) => {
            let base = if head == "poly" {
                Scalars::Rationals
            } else {
                Scalars::Integers
            };
            let mut parts = args.split(':');
            let order = match parts.next() {
                Some("lex") => PolyOrder::Lexicographic,
                Some("antilex") => PolyOrder::Antilexicographic,
                _ => return Err(bad()),
            };
            let max_degree = match parts.next() {
                Some(g) => g.parse().map_err(|_| bad())?,
                None => DEFAULT_DEGREE_GUARD,
            };
            if parts.next().is_some() {
                return Err(bad());
            }
            RingSpec::Polynomial(PolynomialRingSpec {
                base,
                order,
                max_degree,
            })
        }
        ("pair" | "zpair", Some(args)) => {
            let base = if head == "pair" {
                Scalars::Rationals
            } else {
                Scalars::Integers
            };
            let (order, product) = args.split_once(',').ok_or_else(bad)?;
            let order = match order {
                "lex" => PairOrder::Lexicographic,
                "comp" => PairOrder::Componentwise,
                _ => return Err(bad()),
            };
            let product = match product {
                "comp" => PairProduct::Componentwise,
                "dual" => PairProduct::DualNumber,
                _ => return Err(bad()),
            };
            RingSpec::Pair(PairRingSpec {
                base,
                order,
                product,
            })
        }
        ("series", Some(n)) => RingSpec::TruncatedSeries(TruncatedSeriesSpec {
            precision: n.parse().map_err(|_| bad())?,
        }),
        ("padic", Some(args)) => {
            let (p, n) = args.split_once(',').ok_or_else(bad)?;
            RingSpec::Residues(ResidueRingSpec {
                prime: p.trim().parse().map_err(|_| bad())?,
                exponent: n.trim().parse().map_err(|_| bad())?,
            })
        }
        ("sca", Some("twisted3")) => {
            RingSpec::StructureConstants(StructureConstantAlgebraSpec::twisted3())
        }
        ("fixture", Some("noncomm-add")) => return Ok(make_fixture(Fault::NoncommutativeAddition)),
        ("fixture", Some("all-positive")) => return Ok(make_fixture(Fault::AllPositive)),
        _ => return Err(bad()),
    };
    make_instance(spec)
}

/// Every non-fixture instance the crate ships, in a fixed order.
pub fn shipped_instances() -> Vec<Ring> {
    [
        "int",
        "rat",
        "poly:lex",
        "poly:antilex",
        "zpoly:lex",
        "zpoly:antilex",
        "pair:lex,dual",
        "pair:lex,comp",
        "pair:comp,comp",
        "series:8",
        "series:16",
        "padic:5,4",
        "padic:2,8",
        "sca:twisted3",
    ]
    .iter()
    .map(|d| instance_from_designator(d).expect("shipped designator"))
    .collect()
}

fn trim(mut coeffs: Vec<BigRational>) -> Vec<BigRational> {
    while coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    coeffs
}

fn convolve(a: &[BigRational], b: &[BigRational], cap: usize) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let len = (a.len() + b.len() - 1).min(cap);
    let mut out = vec![BigRational::zero(); len];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() || i >= len {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if i + j >= len {
                break;
            }
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn add_coeffs(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let len = a.len().max(b.len());
    let zero = BigRational::zero();
    trim(
        (0..len)
            .map(|i| a.get(i).unwrap_or(&zero) + b.get(i).unwrap_or(&zero))
            .collect(),
    )
}

impl RingInstance {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn fault(&self) -> Option<Fault> {
        self.fault
    }

    pub fn order_kind(&self) -> OrderKind {
        match &self.spec {
            RingSpec::Integers | RingSpec::Rationals => OrderKind::Total,
            RingSpec::Polynomial(p) => match p.order {
                PolyOrder::Lexicographic => OrderKind::Lexicographic,
                PolyOrder::Antilexicographic => OrderKind::Antilexicographic,
            },
            RingSpec::Pair(p) => match p.order {
                PairOrder::Lexicographic => OrderKind::Lexicographic,
                PairOrder::Componentwise => OrderKind::Componentwise,
            },
            RingSpec::TruncatedSeries(_) => OrderKind::Antilexicographic,
            RingSpec::Residues(_) | RingSpec::StructureConstants(_) => OrderKind::ConeGenerated,
        }
    }

    /// Whether the instance claims `1 >= 0`.
    pub fn declares_unit_nonnegative(&self) -> bool {
        !matches!(self.spec, RingSpec::Residues(_))
    }

    /// Whether the instance claims its order is compatible with `+` and `*`.
    ///
    /// The only shipped exception is lexicographically ordered pairs with the
    /// componentwise product: `(0,1)` and `(1,-1)` are positive but their
    /// product `(0,-1)` is not.
    pub fn declares_order_compatible(&self) -> bool {
        !matches!(
            self.spec,
            RingSpec::Pair(PairRingSpec {
                order: PairOrder::Lexicographic,
                product: PairProduct::Componentwise,
                ..
            })
        )
    }

    /// Whether `+` and `*` admit exact halving (every element is divisible by 2).
    pub fn is_divisible(&self) -> bool {
        match &self.spec {
            RingSpec::Rationals
            | RingSpec::TruncatedSeries(_)
            | RingSpec::StructureConstants(_) => true,
            RingSpec::Polynomial(p) => p.base == Scalars::Rationals,
            RingSpec::Pair(p) => p.base == Scalars::Rationals,
            RingSpec::Integers => false,
            RingSpec::Residues(r) => r.prime != 2,
        }
    }

    /// Precision of a truncated-series instance, modulus exponent of a residue instance.
    pub fn precision(&self) -> Option<usize> {
        match &self.spec {
            RingSpec::TruncatedSeries(s) => Some(s.precision),
            RingSpec::Residues(r) => Some(r.exponent as usize),
            _ => None,
        }
    }

    pub fn modulus(&self) -> Option<&BigUint> {
        match self.spec {
            RingSpec::Residues(_) => Some(&self.modulus),
            _ => None,
        }
    }

    pub(crate) fn scalars(&self) -> Scalars {
        match &self.spec {
            RingSpec::Integers => Scalars::Integers,
            RingSpec::Polynomial(p) => p.base,
            RingSpec::Pair(p) => p.base,
            _ => Scalars::Rationals,
        }
    }

    pub fn zero(self: &Arc<Self>) -> Element {
        let value = match &self.spec {
            RingSpec::Integers | RingSpec::Rationals => Value::Scalar(BigRational::zero()),
            RingSpec::Polynomial(_) | RingSpec::TruncatedSeries(_) => Value::Coeffs(Vec::new()),
            RingSpec::Pair(_) => Value::Pair(BigRational::zero(), BigRational::zero()),
            RingSpec::Residues(_) => Value::Residue(BigUint::zero()),
            RingSpec::StructureConstants(s) => Value::Vector(vec![BigRational::zero(); s.rank()]),
        };
        Element {
            ring: self.clone(),
            value,
        }
    }

    pub fn one(self: &Arc<Self>) -> Element {
        self.embed_canonical(&BigRational::one())
    }

    /// Embeds `q * 1`. Fails on integer carriers for non-integral `q`.
    pub fn scalar(self: &Arc<Self>, q: &BigRational) -> Result<Element> {
        if !q.is_integer() && (self.scalars() == Scalars::Integers || self.modulus().is_some()) {
            return Err(Error::UnsupportedCarrier {
                operation: "embed non-integral scalar",
                carrier: self.name.clone(),
            });
        }
        Ok(self.embed_canonical(q))
    }

    pub fn integer(self: &Arc<Self>, n: i64) -> Element {
        self.embed_canonical(&BigRational::from_integer(BigInt::from(n)))
    }

    fn embed_canonical(self: &Arc<Self>, q: &BigRational) -> Element {
        let value = match &self.spec {
            RingSpec::Integers | RingSpec::Rationals => Value::Scalar(q.clone()),
            RingSpec::Polynomial(_) | RingSpec::TruncatedSeries(_) => {
                Value::Coeffs(trim(vec![q.clone()]))
            }
            RingSpec::Pair(p) => match p.product {
                PairProduct::Componentwise => Value::Pair(q.clone(), q.clone()),
                PairProduct::DualNumber => Value::Pair(q.clone(), BigRational::zero()),
            },
            RingSpec::Residues(_) => Value::Residue(self.reduce(&q.to_integer())),
            RingSpec::StructureConstants(s) => {
                let mut v = vec![BigRational::zero(); s.rank()];
                v[s.unit_index] = q.clone();
                Value::Vector(v)
            }
        };
        Element {
            ring: self.clone(),
            value,
        }
    }

    fn reduce(&self, n: &BigInt) -> BigUint {
        let m = BigInt::from(self.modulus.clone());
        n.mod_floor(&m)
            .to_biguint()
            .expect("mod_floor is nonnegative")
    }

    /// Validates and canonicalizes a raw payload.
    pub fn element(self: &Arc<Self>, value: Value) -> Result<Element> {
        let integral = |q: &BigRational| self.scalars() == Scalars::Rationals || q.is_integer();
        let value = match (&self.spec, value) {
            (RingSpec::Integers | RingSpec::Rationals, Value::Scalar(q)) if integral(&q) => {
                Value::Scalar(q)
            }
            (RingSpec::Polynomial(p), Value::Coeffs(c)) if c.iter().all(integral) => {
                let c = trim(c);
                if c.len() > p.max_degree + 1 {
                    return Err(Error::GrowthExceeded {
                        degree: c.len() - 1,
                        guard: p.max_degree,
                    });
                }
                Value::Coeffs(c)
            }
            (RingSpec::TruncatedSeries(s), Value::Coeffs(c)) => {
                let c = trim(c);
                if c.len() > s.precision {
                    return Err(Error::WrongArity {
                        expected: s.precision,
                        found: c.len(),
                    });
                }
                Value::Coeffs(c)
            }
            (RingSpec::Pair(_), Value::Pair(a, b)) if integral(&a) && integral(&b) => {
                Value::Pair(a, b)
            }
            (RingSpec::Residues(_), Value::Residue(n)) => Value::Residue(n % &self.modulus),
            (RingSpec::StructureConstants(s), Value::Vector(v)) => {
                if v.len() != s.rank() {
                    return Err(Error::WrongArity {
                        expected: s.rank(),
                        found: v.len(),
                    });
                }
                Value::Vector(v)
            }
            (_, other) => {
                return Err(Error::InvalidSpec(format!(
                    "payload {other:?} does not fit carrier {}",
                    self.name
                )))
            }
        };
        Ok(Element {
            ring: self.clone(),
            value,
        })
    }

    /// Residue element from an arbitrary (possibly negative) integer.
    pub fn residue(self: &Arc<Self>, n: &BigInt) -> Result<Element> {
        if self.modulus().is_none() {
            return Err(Error::UnsupportedCarrier {
                operation: "residue",
                carrier: self.name.clone(),
            });
        }
        Ok(Element {
            ring: self.clone(),
            value: Value::Residue(self.reduce(n)),
        })
    }

    fn add_values(&self, a: &Value, b: &Value) -> Value {
        match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => match self.fault {
                Some(Fault::NoncommutativeAddition) => Value::Scalar(x + y + y),
                _ => Value::Scalar(x + y),
            },
            (Value::Coeffs(x), Value::Coeffs(y)) => Value::Coeffs(add_coeffs(x, y)),
            (Value::Pair(a1, b1), Value::Pair(a2, b2)) => Value::Pair(a1 + a2, b1 + b2),
            (Value::Residue(x), Value::Residue(y)) => Value::Residue((x + y) % &self.modulus),
            (Value::Vector(x), Value::Vector(y)) => {
                Value::Vector(x.iter().zip(y).map(|(p, q)| p + q).collect())
            }
            _ => unreachable!("payload kinds are fixed per carrier"),
        }
    }

    fn neg_value(&self, a: &Value) -> Value {
        match a {
            Value::Scalar(x) => Value::Scalar(-x),
            Value::Coeffs(x) => Value::Coeffs(x.iter().map(|c| -c).collect()),
            Value::Pair(a, b) => Value::Pair(-a, -b),
            Value::Residue(x) => Value::Residue((&self.modulus - x) % &self.modulus),
            Value::Vector(x) => Value::Vector(x.iter().map(|c| -c).collect()),
        }
    }

    fn mul_values(&self, a: &Value, b: &Value) -> Result<Value> {
        Ok(match (&self.spec, a, b) {
            (_, Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x * y),
            (RingSpec::Polynomial(p), Value::Coeffs(x), Value::Coeffs(y)) => {
                if !x.is_empty() && !y.is_empty() && x.len() + y.len() - 2 > p.max_degree {
                    return Err(Error::GrowthExceeded {
                        degree: x.len() + y.len() - 2,
                        guard: p.max_degree,
                    });
                }
                Value::Coeffs(convolve(x, y, usize::MAX))
            }
            (RingSpec::TruncatedSeries(s), Value::Coeffs(x), Value::Coeffs(y)) => {
                Value::Coeffs(convolve(x, y, s.precision))
            }
            (RingSpec::Pair(p), Value::Pair(a1, b1), Value::Pair(a2, b2)) => match p.product {
                PairProduct::Componentwise => Value::Pair(a1 * a2, b1 * b2),
                PairProduct::DualNumber => Value::Pair(a1 * a2, a1 * b2 + b1 * a2),
            },
            (_, Value::Residue(x), Value::Residue(y)) => Value::Residue((x * y) % &self.modulus),
            (RingSpec::StructureConstants(s), Value::Vector(x), Value::Vector(y)) => {
                let r = s.rank();
                let mut out = vec![BigRational::zero(); r];
                for (i, xi) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    for (j, yj) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                        let w = xi * yj;
                        for (k, t) in s.table[i][j].iter().enumerate() {
                            if !t.is_zero() {
                                out[k] += &w * t;
                            }
                        }
                    }
                }
                Value::Vector(out)
            }
            _ => unreachable!("payload kinds are fixed per carrier"),
        })
    }

    /// Membership in the positive cone.
    fn is_nonnegative(&self, v: &Value) -> bool {
        if self.fault == Some(Fault::AllPositive) {
            return true;
        }
        match (&self.spec, v) {
            (_, Value::Scalar(x)) => !x.is_negative(),
            (RingSpec::Polynomial(p), Value::Coeffs(c)) => match p.order {
                PolyOrder::Lexicographic => c.last().is_none_or(Signed::is_positive),
                PolyOrder::Antilexicographic => lowest_nonzero(c).is_none_or(Signed::is_positive),
            },
            (RingSpec::TruncatedSeries(_), Value::Coeffs(c)) => {
                lowest_nonzero(c).is_none_or(Signed::is_positive)
            }
            (RingSpec::Pair(p), Value::Pair(a, b)) => match p.order {
                PairOrder::Lexicographic => a.is_positive() || (a.is_zero() && !b.is_negative()),
                PairOrder::Componentwise => !a.is_negative() && !b.is_negative(),
            },
            (_, Value::Residue(x)) => x.is_zero(),
            (RingSpec::StructureConstants(s), Value::Vector(x)) => {
                x.iter().enumerate().all(|(i, c)| {
                    if i == s.unit_index {
                        !c.is_negative()
                    } else {
                        c.is_zero()
                    }
                })
            }
            _ => unreachable!("payload kinds are fixed per carrier"),
        }
    }

    fn is_zero_value(v: &Value) -> bool {
        match v {
            Value::Scalar(x) => x.is_zero(),
            Value::Coeffs(c) => c.is_empty(),
            Value::Pair(a, b) => a.is_zero() && b.is_zero(),
            Value::Residue(x) => x.is_zero(),
            Value::Vector(x) => x.iter().all(Zero::is_zero),
        }
    }
}

fn lowest_nonzero(c: &[BigRational]) -> Option<&BigRational> {
    c.iter().find(|x| !x.is_zero())
}

impl fmt::Display for RingInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// An exact value of a specific ring instance, always in canonical form.
#[derive(Clone)]
pub struct Element {
    ring: Ring,
    value: Value,
}

pub(crate) fn same_ring(a: &Ring, b: &Ring) -> bool {
    Arc::ptr_eq(a, b) || (a.spec == b.spec && a.fault == b.fault)
}

impl Element {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn value(&self) -> &Value {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        RingInstance::is_zero_value(&self.value)
    }

    pub fn is_one(&self) -> bool {
        *self == self.ring.one()
    }

    pub(crate) fn check_same_ring(&self, other: &Element) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::MixedRings {
                left: self.ring.name.clone(),
                right: other.ring.name.clone(),
            })
        }
    }

    fn with_value(&self, value: Value) -> Element {
        Element {
            ring: self.ring.clone(),
            value,
        }
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.check_same_ring(other)?;
        Ok(self.with_value(self.ring.add_values(&self.value, &other.value)))
    }

    pub fn neg(&self) -> Element {
        self.with_value(self.ring.neg_value(&self.value))
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Element) -> Result<Element> {
        self.check_same_ring(other)?;
        Ok(self.with_value(self.ring.mul_values(&self.value, &other.value)?))
    }

    /// `n * self` as the `n`-fold sum, by doubling.
    pub fn times(&self, n: u64) -> Result<Element> {
        let mut acc = self.ring.zero();
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.add(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.add(&base)?;
            }
        }
        Ok(acc)
    }

    /// `self <= other` in the instance's order.
    pub fn leq(&self, other: &Element) -> Result<bool> {
        let d = other.sub(self)?;
        Ok(self.ring.is_nonnegative(&d.value))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.ring.is_nonnegative(&self.value)
    }

    pub fn compare(&self, other: &Element) -> Result<Comparison> {
        self.check_same_ring(other)?;
        if self.value == other.value {
            return Ok(Comparison::Equal);
        }
        Ok(match (self.leq(other)?, other.leq(self)?) {
            (true, false) => Comparison::Less,
            (false, true) => Comparison::Greater,
            (false, false) => Comparison::Incomparable,
            // Only reachable when the cone is not pointed (corrupted fixtures).
            (true, true) => Comparison::Equal,
        })
    }

    /// Strict `0 < self`.
    pub fn is_positive(&self) -> bool {
        !self.is_zero() && self.is_nonnegative()
    }

    /// Coefficient list of a polynomial or series element.
    pub fn coefficients(&self) -> Option<&[BigRational]> {
        match &self.value {
            Value::Coeffs(c) => Some(c),
            _ => None,
        }
    }

    pub fn as_scalar(&self) -> Option<&BigRational> {
        match &self.value {
            Value::Scalar(q) => Some(q),
            _ => None,
        }
    }

    pub fn as_residue(&self) -> Option<&BigUint> {
        match &self.value {
            Value::Residue(n) => Some(n),
            _ => None,
        }
    }
}

/// Order of vanishing: least `k` with a nonzero coefficient of `X^k` for
/// truncated series, largest `k <= N` with `p^k | x` for residues. Zero maps
/// to `N` in both.
pub fn ord_valuation(x: &Element) -> Result<usize> {
    match (x.ring.spec(), &x.value) {
        (RingSpec::TruncatedSeries(s), Value::Coeffs(c)) => {
            Ok(c.iter().position(|q| !q.is_zero()).unwrap_or(s.precision))
        }
        (RingSpec::Residues(r), Value::Residue(n)) => {
            let exponent = r.exponent as usize;
            if n.is_zero() {
                return Ok(exponent);
            }
            let p = BigUint::from(r.prime);
            let mut m = n.clone();
            let mut k = 0;
            while k < exponent && (&m % &p).is_zero() {
                m /= &p;
                k += 1;
            }
            Ok(k)
        }
        _ => Err(Error::UnsupportedCarrier {
            operation: "ord_valuation",
            carrier: x.ring.name.clone(),
        }),
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.value == other.value
    }
}

impl Eq for Element {}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_element(self))
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", render_element(self), self.ring.name)
    }
}

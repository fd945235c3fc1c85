use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Element, Ring, RingSpec, Scalars, Value};

/// Deterministic element generator: a fixed list of probe elements (units,
/// generators, boundary cases) followed by seeded random draws.
pub struct Sampler {
    ring: Ring,
    rng: ChaCha8Rng,
    probes: Vec<Element>,
    next_probe: usize,
}

impl Sampler {
    pub fn new(ring: &Ring, seed: u64) -> Self {
        Sampler {
            ring: ring.clone(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            probes: probes(ring),
            next_probe: 0,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn small_integer(&mut self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.rng.gen_range(-12i64..=12)))
    }

    pub fn small_rational(&mut self) -> BigRational {
        let n = self.rng.gen_range(-20i64..=20);
        let d = self.rng.gen_range(1i64..=8);
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn scalar(&mut self, base: Scalars) -> BigRational {
        match base {
            Scalars::Integers => self.small_integer(),
            Scalars::Rationals => self.small_rational(),
        }
    }

    /// A fresh random element, skipping probes.
    pub fn random_element(&mut self) -> Element {
        let ring = self.ring.clone();
        let value = match ring.spec() {
            RingSpec::Integers => Value::Scalar(self.small_integer()),
            RingSpec::Rationals => Value::Scalar(self.small_rational()),
            RingSpec::Polynomial(p) => {
                let len = self.rng.gen_range(0..=4);
                Value::Coeffs((0..len).map(|_| self.scalar(p.base)).collect())
            }
            RingSpec::Pair(p) => Value::Pair(self.scalar(p.base), self.scalar(p.base)),
            RingSpec::TruncatedSeries(s) => {
                let order = self.rng.gen_range(0..=s.precision);
                let coeffs = (0..s.precision)
                    .map(|k| {
                        if k < order || self.rng.gen_bool(0.4) {
                            BigRational::zero()
                        } else {
                            self.small_rational()
                        }
                    })
                    .collect();
                Value::Coeffs(coeffs)
            }
            RingSpec::Residues(r) => {
                let valuation = self.rng.gen_range(0..=r.exponent);
                let p = BigUint::from(r.prime);
                let mut n = BigUint::zero();
                for k in (valuation..r.exponent).rev() {
                    let digit = if k == valuation {
                        self.rng.gen_range(1..r.prime)
                    } else {
                        self.rng.gen_range(0..r.prime)
                    };
                    n = n * &p + BigUint::from(digit);
                }
                Value::Residue(n * p.pow(valuation))
            }
            RingSpec::StructureConstants(s) => {
                Value::Vector((0..s.rank()).map(|_| self.small_rational()).collect())
            }
        };
        ring.element(value)
            .expect("sampled payload fits its carrier")
    }

    pub fn next_element(&mut self) -> Element {
        if self.next_probe < self.probes.len() {
            self.next_probe += 1;
            return self.probes[self.next_probe - 1].clone();
        }
        self.random_element()
    }

    /// `n` elements: the probes first, then random draws.
    pub fn take_elements(&mut self, n: usize) -> Vec<Element> {
        (0..n).map(|_| self.next_element()).collect()
    }
}

impl Iterator for Sampler {
    type Item = Element;

    fn next(&mut self) -> Option<Element> {
        Some(self.next_element())
    }
}

fn probes(ring: &Ring) -> Vec<Element> {
    let lit = |s: &str| super::parse_element(ring, s).expect("probe literal");
    let mut out = vec![ring.zero(), ring.one(), ring.one().neg()];
    match ring.spec() {
        RingSpec::Polynomial(_) => out.extend(["[0,1]", "[1,-1]", "[0,0,1]"].map(lit)),
        RingSpec::TruncatedSeries(s) => {
            out.push(lit("[0,1]"));
            out.push(lit("[1,-1]"));
            if s.precision > 2 {
                out.push(lit("[0,0,1]"));
            }
        }
        RingSpec::Pair(_) => out.extend(["(1,0)", "(0,1)", "(1,-1)", "(0,-1)"].map(lit)),
        RingSpec::Residues(r) => {
            out.push(ring.integer(r.prime as i64));
            out.push(ring.integer(r.prime as i64 - 1));
        }
        RingSpec::StructureConstants(s) => {
            for i in 0..s.rank() {
                let mut v = vec![BigRational::zero(); s.rank()];
                v[i] = BigRational::from_integer(BigInt::from(1));
                out.push(ring.element(Value::Vector(v)).expect("basis vector"));
            }
        }
        RingSpec::Integers | RingSpec::Rationals => out.push(ring.integer(2)),
    }
    out
}

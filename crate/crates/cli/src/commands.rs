use std::fmt::Write as _;
use std::thread;

use ogsr_core::algebra::{check_order_compatibility, check_ring_axioms, PowerDirection};
use ogsr_core::error::Error;
use ogsr_core::inversion::{
    dyadic_family, invert_ordered, invert_seminormed, invert_two_sided, InversionCertificate,
    InversionStatus, OrderedOptions, DEFAULT_BUDGET,
};
use ogsr_core::rings::{instance_from_designator, parse_element, Element, Ring};
use ogsr_core::seminorm::{check_seminorm_axioms, SeminormSpec};
use ogsr_core::suite::{run_scenario, ScenarioResult, SCENARIOS};
use ogsr_core::topology::{
    product_continuity_witness, separation_witness, split_neighborhood, sup_limit_check, BasicOpen,
};

use crate::config::{DirectionArg, RunConfig, TopologyOp};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

const DEFAULT_SAMPLES: usize = 1000;
const DEFAULT_FAMILY_DEPTH: u32 = 16;
const DEFAULT_SEQUENCE_LEN: usize = 64;

#[derive(Debug)]
pub struct Output {
    pub code: u8,
    pub report: String,
}

impl Output {
    fn new(code: u8, report: impl Into<String>) -> Self {
        Output {
            code,
            report: report.into(),
        }
    }
}

/// A diagnostic and its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

type CmdResult = Result<Output, Failure>;

fn config_error(message: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_CONFIG,
        message: message.to_string(),
    }
}

fn required<'a>(value: &'a Option<String>, flag: &str) -> Result<&'a str, Failure> {
    value
        .as_deref()
        .ok_or_else(|| config_error(format!("missing --{flag}")))
}

fn ring_of(cfg: &RunConfig) -> Result<Ring, Failure> {
    instance_from_designator(required(&cfg.ring, "ring")?).map_err(config_error)
}

fn element(ring: &Ring, text: &str, flag: &str) -> Result<Element, Failure> {
    parse_element(ring, text).map_err(|e| config_error(format!("--{flag} `{text}`: {e}")))
}

fn open(ring: &Ring, text: &str) -> Result<BasicOpen, Failure> {
    BasicOpen::parse(ring, text).map_err(|e| config_error(format!("--open `{text}`: {e}")))
}

pub fn axioms(cfg: &RunConfig) -> CmdResult {
    let ring = ring_of(cfg)?;
    let samples = cfg.samples.unwrap_or(DEFAULT_SAMPLES);
    let seed = cfg.seed.unwrap_or(0);
    let mut reports = vec![
        check_ring_axioms(&ring, samples, seed),
        check_order_compatibility(&ring, samples, seed),
    ];
    let seminorm = match &cfg.seminorm {
        Some(name) => Some(SeminormSpec::by_name(name, &ring).map_err(config_error)?),
        None => SeminormSpec::default_for(&ring).ok(),
    };
    if let Some(spec) = seminorm {
        reports.push(check_seminorm_axioms(&spec, samples, seed));
    }
    let passed = reports.iter().all(|r| r.passed());
    let text = reports
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Output::new(
        if passed { EXIT_OK } else { EXIT_FAILED },
        text,
    ))
}

fn certificate_code(cert: &InversionCertificate) -> u8 {
    match cert.status {
        InversionStatus::ExactInverse | InversionStatus::ConvergentEvidence => EXIT_OK,
        InversionStatus::HypothesisFailed => EXIT_FAILED,
        InversionStatus::BudgetExhausted => EXIT_BUDGET,
    }
}

/// Engine errors that are evidence against a hypothesis rather than bad input.
fn engine_error(e: Error) -> Failure {
    match e {
        Error::InvariantViolation { .. }
        | Error::DirectionalMismatch { .. }
        | Error::NotCauchy { .. } => Failure {
            code: EXIT_FAILED,
            message: e.to_string(),
        },
        other => config_error(other),
    }
}

pub fn invert(cfg: &RunConfig) -> CmdResult {
    let ring = ring_of(cfg)?;
    let x = element(&ring, required(&cfg.x, "x")?, "x")?;
    let budget = cfg.budget.unwrap_or(DEFAULT_BUDGET);
    let depth = cfg.family_depth.unwrap_or(DEFAULT_FAMILY_DEPTH);
    let direction = cfg.direction.unwrap_or(DirectionArg::Right);

    let cert = if let Some(name) = &cfg.seminorm {
        if direction != DirectionArg::Right {
            return Err(config_error(
                "seminormed inversion computes right inverses only",
            ));
        }
        let spec = SeminormSpec::by_name(name, &ring).map_err(config_error)?;
        let windows: Vec<BasicOpen> = dyadic_family(spec.target(), depth)
            .map_err(config_error)?
            .iter()
            .map(BasicOpen::symmetric)
            .collect();
        invert_seminormed(&x, &spec, &windows, budget).map_err(engine_error)?
    } else {
        let witness = cfg
            .witness
            .as_deref()
            .map(|w| element(&ring, w, "witness"))
            .transpose()?;
        let family = if ring.is_divisible() {
            dyadic_family(&ring, depth).map_err(config_error)?
        } else {
            Vec::new()
        };
        match direction {
            DirectionArg::Both => {
                invert_two_sided(&x, witness.as_ref(), witness.as_ref(), budget, &family)
                    .map_err(engine_error)?
            }
            DirectionArg::Right | DirectionArg::Left => {
                let options = OrderedOptions {
                    direction: if direction == DirectionArg::Right {
                        PowerDirection::RightNested
                    } else {
                        PowerDirection::LeftNested
                    },
                    budget,
                    witness,
                    family,
                    ..OrderedOptions::default()
                };
                invert_ordered(&x, &options).map_err(engine_error)?
            }
        }
    };
    Ok(Output::new(certificate_code(&cert), cert.to_string()))
}

fn sequence(ring: &Ring, cfg: &RunConfig) -> Result<Vec<Element>, Failure> {
    let text = required(&cfg.sequence, "sequence")?;
    if text == "dyadic" {
        let len = cfg.sequence_len.unwrap_or(DEFAULT_SEQUENCE_LEN);
        let one = ring.one();
        let mut out = vec![ring.zero()];
        let mut gap = one.clone();
        let half = parse_element(ring, "1/2")
            .map_err(|_| config_error("`dyadic` needs a divisible ring"))?;
        while out.len() < len {
            gap = gap.mul(&half).map_err(config_error)?;
            out.push(one.sub(&gap).map_err(config_error)?);
        }
        out.truncate(len);
        return Ok(out);
    }
    text.split(';')
        .map(|t| element(ring, t, "sequence"))
        .collect()
}

pub fn topology(cfg: &RunConfig) -> CmdResult {
    let ring = ring_of(cfg)?;
    let op = cfg.op.ok_or_else(|| config_error("missing --op"))?;
    let first_open = || -> Result<BasicOpen, Failure> {
        let text = cfg
            .opens
            .first()
            .ok_or_else(|| config_error("missing --open"))?;
        open(&ring, text)
    };
    let arg = |value: &Option<String>, flag: &str| element(&ring, required(value, flag)?, flag);
    let query = config_error;
    let mut out = String::new();
    let code = match op {
        TopologyOp::Contains => {
            let v = first_open()?;
            let x = arg(&cfg.x, "x")?;
            writeln!(out, "{}", v.contains(&x).map_err(query)?).unwrap();
            EXIT_OK
        }
        TopologyOp::Translate => {
            let v = first_open()?;
            writeln!(out, "{}", v.translate(&arg(&cfg.a, "a")?).map_err(query)?).unwrap();
            EXIT_OK
        }
        TopologyOp::Negate => {
            writeln!(out, "{}", first_open()?.negate()).unwrap();
            EXIT_OK
        }
        TopologyOp::SupLimit => {
            let seq = sequence(&ring, cfg)?;
            let sup = match &cfg.sup {
                Some(s) => element(&ring, s, "sup")?,
                None => ring.one(),
            };
            let opens = cfg
                .opens
                .iter()
                .map(|t| open(&ring, t))
                .collect::<Result<Vec<_>, _>>()?;
            let verdict = sup_limit_check(seq, &sup, &opens).map_err(query)?;
            write!(out, "{verdict}").unwrap();
            if verdict.passed() {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
        TopologyOp::Separation => {
            let seq = sequence(&ring, cfg)?;
            match separation_witness(&arg(&cfg.a, "a")?, &arg(&cfg.b, "b")?, &seq) {
                Ok(w) => {
                    writeln!(out, "open: {}", w.open).unwrap();
                    writeln!(out, "avoided_from: {}", w.avoided_from).unwrap();
                    EXIT_OK
                }
                Err(e @ Error::NoWitnessFound { .. }) => {
                    writeln!(out, "{e}").unwrap();
                    EXIT_FAILED
                }
                Err(e) => return Err(query(e)),
            }
        }
        TopologyOp::Split | TopologyOp::Product => {
            let v = first_open()?;
            let (a, b) = (arg(&cfg.a, "a")?, arg(&cfg.b, "b")?);
            let (w1, w2) = if op == TopologyOp::Split {
                split_neighborhood(&v, &a, &b)
            } else {
                product_continuity_witness(&v, &a, &b)
            }
            .map_err(query)?;
            writeln!(out, "first: {w1}").unwrap();
            writeln!(out, "second: {w2}").unwrap();
            EXIT_OK
        }
    };
    Ok(Output::new(code, out))
}

pub fn suite(cfg: &RunConfig) -> CmdResult {
    let ids: Vec<&str> = match &cfg.id {
        Some(id) => vec![id.as_str()],
        None => SCENARIOS.to_vec(),
    };
    let results: Vec<Result<ScenarioResult, Error>> = thread::scope(|s| {
        let handles: Vec<_> = ids
            .iter()
            .map(|id| s.spawn(move || run_scenario(id)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scenario thread"))
            .collect()
    });
    let mut report = String::new();
    let mut deviating = Vec::new();
    for r in results {
        let r = r.map_err(config_error)?;
        if !r.meets_expectation() {
            deviating.push(r.id.clone());
        }
        writeln!(report, "{r}").unwrap();
    }
    writeln!(
        report,
        "suite: {}/{} scenarios meet expectations",
        ids.len() - deviating.len(),
        ids.len()
    )
    .unwrap();
    if !deviating.is_empty() {
        writeln!(report, "deviating: {}", deviating.join(", ")).unwrap();
    }
    Ok(Output::new(
        if deviating.is_empty() {
            EXIT_OK
        } else {
            EXIT_FAILED
        },
        report,
    ))
}

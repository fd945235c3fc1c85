use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Deserialize;

/// Settings shared by every subcommand; a JSON config file supplies
/// defaults and command-line flags override them.
#[derive(Args, Debug, Default, Clone)]
pub struct Flags {
    /// Ring designator, e.g. `rat`, `poly:lex`, `series:8`, `padic:5,4`.
    #[arg(long)]
    pub ring: Option<String>,
    /// Seminorm name: `abs`, `ord2`, `padic` or `const-term`.
    #[arg(long)]
    pub seminorm: Option<String>,
    /// Element literal to invert or query.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// Witness `c` with `x c >= 1`; searched for when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub witness: Option<String>,
    /// Maximum number of series terms.
    #[arg(long)]
    pub budget: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub direction: Option<DirectionArg>,
    /// Samples per axiom check.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Convergence family `2^-k`, `k <= depth`.
    #[arg(long)]
    pub family_depth: Option<u32>,
    /// Topology operation.
    #[arg(long, value_enum)]
    pub op: Option<TopologyOp>,
    /// Basic open `open{ below: [..], above: [..] }`; repeatable.
    #[arg(long = "open")]
    pub opens: Vec<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Claimed supremum for `sup-limit`.
    #[arg(long, allow_hyphen_values = true)]
    pub sup: Option<String>,
    /// `dyadic` for `1 - 2^-n`, or element literals separated by `;`.
    #[arg(long, allow_hyphen_values = true)]
    pub sequence: Option<String>,
    /// Length of a generated sequence.
    #[arg(long)]
    pub sequence_len: Option<usize>,
    /// Scenario id for `suite`.
    #[arg(long)]
    pub id: Option<String>,
    /// Also write the report to this path.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// JSON config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(ValueEnum, Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum DirectionArg {
    Right,
    Left,
    Both,
}

#[derive(ValueEnum, Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum TopologyOp {
    Contains,
    Translate,
    Negate,
    SupLimit,
    Separation,
    Split,
    Product,
}

#[derive(Deserialize, Debug, Default, Clone)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunConfig {
    pub ring: Option<String>,
    pub seminorm: Option<String>,
    pub x: Option<String>,
    pub witness: Option<String>,
    pub budget: Option<usize>,
    pub seed: Option<u64>,
    pub direction: Option<DirectionArg>,
    pub samples: Option<usize>,
    pub family_depth: Option<u32>,
    pub op: Option<TopologyOp>,
    #[serde(default)]
    pub opens: Vec<String>,
    pub a: Option<String>,
    pub b: Option<String>,
    pub sup: Option<String>,
    pub sequence: Option<String>,
    pub sequence_len: Option<usize>,
    pub id: Option<String>,
    pub report: Option<PathBuf>,
}

pub fn load(path: &Path) -> Result<RunConfig, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

impl RunConfig {
    /// Config file values overridden by any flag that was given.
    pub fn resolve(flags: Flags) -> Result<Self, String> {
        let base = match &flags.config {
            Some(path) => load(path)?,
            None => RunConfig::default(),
        };
        Ok(RunConfig {
            ring: flags.ring.or(base.ring),
            seminorm: flags.seminorm.or(base.seminorm),
            x: flags.x.or(base.x),
            witness: flags.witness.or(base.witness),
            budget: flags.budget.or(base.budget),
            seed: flags.seed.or(base.seed),
            direction: flags.direction.or(base.direction),
            samples: flags.samples.or(base.samples),
            family_depth: flags.family_depth.or(base.family_depth),
            op: flags.op.or(base.op),
            opens: if flags.opens.is_empty() {
                base.opens
            } else {
                flags.opens
            },
            a: flags.a.or(base.a),
            b: flags.b.or(base.b),
            sup: flags.sup.or(base.sup),
            sequence: flags.sequence.or(base.sequence),
            sequence_len: flags.sequence_len.or(base.sequence_len),
            id: flags.id.or(base.id),
            report: flags.report.or(base.report),
        })
    }
}

//! The `chores` command line.
//!
//! Exit codes: `check` gives 0 fair, 1 not fair; `solve` and `oracle`
//! give 0 feasible, 1 infeasible, 3 inconclusive. Unreadable or invalid
//! input and usage errors give 2.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use chores_core::allocation::Allocation;
use chores_core::fairness::{check_fairness, Criterion, FairnessQuery, FairnessStatus, Violation};
use chores_core::generate::{make_strict, random_instance, InstanceShape};
use chores_core::instance::{Aggregation, Instance, Polarity};
use chores_core::oracle::SearchBudget;
use chores_core::rational::{format_rational, parse_rational, Rational};
use chores_core::reductions::{
    default_complete_epsilon, default_star_epsilon, partition_to_star_addeq,
    partition_to_two_agent_ccd, partition_to_witness, random_22e3sat, sat_to_complete_maxef,
    sat_to_path_ccd, sat_to_path_ccd_binary, sat_to_star_addef, truth_to_complete_allocation,
    truth_to_path_allocation, truth_to_star_allocation, PartitionInstance, ReductionOutput,
};
use chores_core::topology::TopologyKind;

use crate::dimacs::{emit_dimacs, parse_dimacs, parse_integers};
use crate::format::{
    emit_allocation, emit_instance, emit_labels, parse_allocation, parse_instance,
};
use crate::parallel::{parse_seconds, OracleConfig, MAX_NODES_ENV, TIMEOUT_ENV};
use crate::route::{self, SolverChoice, Verdict};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NO: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "chores",
    version,
    about = "Connected fair division of indivisible chores"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check an allocation against a fairness criterion.
    Check {
        instance: PathBuf,
        allocation: PathBuf,
        #[command(flatten)]
        query: QueryArgs,
    },
    /// Decide whether a fair allocation exists, using a polynomial solver
    /// when one applies.
    Solve {
        instance: PathBuf,
        #[command(flatten)]
        query: QueryArgs,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Write the witness allocation here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Like `solve`, but always by exhaustive search.
    Oracle {
        instance: PathBuf,
        #[command(flatten)]
        query: QueryArgs,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Build a hardness instance from a CNF formula or a PARTITION input.
    Reduce(ReduceArgs),
    /// Generate random instances or formulas.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
}

#[derive(Args, Debug)]
struct QueryArgs {
    #[arg(long, value_parser = parse_criterion)]
    criterion: Criterion,
    /// Approximation factor, at least 1.
    #[arg(long, default_value = "1", value_parser = parse_rational_arg)]
    factor: Rational,
    /// Proportionality share used for every agent instead of `T_i / n`.
    #[arg(long, value_parser = parse_rational_arg)]
    threshold: Option<Rational>,
}

#[derive(Args, Debug)]
struct BudgetArgs {
    /// Search node limit.
    #[arg(long, env = MAX_NODES_ENV, default_value_t = SearchBudget::DEFAULT_MAX_NODES)]
    max_nodes: u64,
    /// Search time limit in seconds.
    #[arg(long, env = TIMEOUT_ENV, default_value = "60", value_parser = parse_timeout)]
    timeout: Duration,
    /// Worker threads for exhaustive search.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Only explore bundles of zero disutility.
    #[arg(long)]
    zero_only: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SourceKind {
    Sat,
    Partition,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Target {
    Path,
    PathBinary,
    CompleteMaxef,
    StarAddef,
    StarAddeq,
    TwoAgent,
}

#[derive(Args, Debug)]
struct ReduceArgs {
    source: SourceKind,
    /// DIMACS CNF for `sat`; integers for `partition` (consecutive pairs
    /// for `star-addeq`).
    input: PathBuf,
    #[arg(long, value_enum)]
    target: Target,
    /// Proportionality factor of the path construction.
    #[arg(long, default_value = "1", value_parser = parse_rational_arg)]
    c: Rational,
    #[arg(long, value_parser = parse_rational_arg)]
    epsilon: Option<Rational>,
    /// Write the instance here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Write the chore and agent labels here.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Search for a model (or partition) by brute force and write the
    /// corresponding fair allocation here.
    #[arg(long)]
    witness: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Topology {
    Path,
    Star,
    Complete,
    Tree,
    General,
}

impl From<Topology> for TopologyKind {
    fn from(t: Topology) -> Self {
        match t {
            Topology::Path => TopologyKind::Path,
            Topology::Star => TopologyKind::Star,
            Topology::Complete => TopologyKind::Complete,
            Topology::Tree => TopologyKind::Tree,
            Topology::General => TopologyKind::General,
        }
    }
}

#[derive(Subcommand, Debug)]
enum GenCommand {
    Instance {
        #[arg(long, value_enum)]
        topology: Topology,
        #[arg(long)]
        agents: usize,
        #[arg(long)]
        items: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "add", value_parser = parse_aggregation)]
        aggregation: Aggregation,
        #[arg(long, default_value = "chores", value_parser = parse_polarity)]
        polarity: Polarity,
        #[arg(long, default_value_t = 6)]
        max_numer: u32,
        #[arg(long, default_value_t = 3)]
        max_denom: u32,
        /// Keep raw values instead of normalizing rows.
        #[arg(long)]
        raw: bool,
        /// Break ties so every agent ranks the items strictly.
        #[arg(long)]
        strict: bool,
    },
    /// A random formula with every variable twice positive and twice negative.
    Formula {
        #[arg(long)]
        vars: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Allow a variable to appear twice in one clause.
        #[arg(long)]
        allow_repeats: bool,
    },
}

fn parse_criterion(s: &str) -> Result<Criterion, String> {
    s.parse()
        .map_err(|e: chores_core::instance::UnknownName| e.to_string())
}

fn parse_aggregation(s: &str) -> Result<Aggregation, String> {
    s.parse()
        .map_err(|e: chores_core::instance::UnknownName| e.to_string())
}

fn parse_polarity(s: &str) -> Result<Polarity, String> {
    s.parse()
        .map_err(|e: chores_core::instance::UnknownName| e.to_string())
}

fn parse_rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn parse_timeout(s: &str) -> Result<Duration, String> {
    parse_seconds(s).ok_or_else(|| format!("`{s}` is not a number of seconds"))
}

impl QueryArgs {
    fn query(&self) -> Result<FairnessQuery> {
        let mut q = FairnessQuery::new(self.criterion, self.factor.clone())?;
        if let Some(t) = &self.threshold {
            q = q.with_threshold(t.clone());
        }
        Ok(q)
    }
}

impl BudgetArgs {
    fn config(&self) -> OracleConfig {
        OracleConfig {
            budget: SearchBudget::default()
                .with_max_nodes(self.max_nodes)
                .with_time_limit(Some(self.timeout))
                .with_zero_only(self.zero_only),
            jobs: self.jobs.max(1),
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_instance(path: &Path) -> Result<Instance> {
    parse_instance(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn write_or_print(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => out
            .write_all(text.as_bytes())
            .context("cannot write to stdout"),
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_INPUT
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8> {
    match cli.command {
        Command::Check {
            instance,
            allocation,
            query,
        } => {
            let inst = read_instance(&instance)?;
            let alloc = parse_allocation(&read(&allocation)?)
                .with_context(|| format!("in {}", allocation.display()))?;
            check(&inst, &alloc, &query.query()?, out)
        }
        Command::Solve {
            instance,
            query,
            budget,
            output,
        } => solve(
            &read_instance(&instance)?,
            &query.query()?,
            &budget.config(),
            false,
            output.as_deref(),
            out,
            err,
        ),
        Command::Oracle {
            instance,
            query,
            budget,
            output,
        } => solve(
            &read_instance(&instance)?,
            &query.query()?,
            &budget.config(),
            true,
            output.as_deref(),
            out,
            err,
        ),
        Command::Reduce(args) => reduce(&args, out, err),
        Command::Gen { what } => generate(what, out),
    }
}

fn check(
    inst: &Instance,
    alloc: &Allocation,
    query: &FairnessQuery,
    out: &mut dyn Write,
) -> Result<u8> {
    let report = check_fairness(inst, alloc, query);
    match report.status {
        FairnessStatus::InvalidAllocation => {
            let v = &report.validity;
            writeln!(out, "invalid allocation")?;
            if !v.agents_match {
                writeln!(
                    out,
                    "  {} bundles for {} agents",
                    alloc.agents(),
                    inst.agents()
                )?;
            }
            for a in &v.disconnected_agents {
                writeln!(out, "  bundle of agent {a} is not connected")?;
            }
            for item in &v.unallocated_items {
                writeln!(out, "  item {item} is not allocated")?;
            }
            for (item, holders) in &v.shared_items {
                writeln!(out, "  item {item} is held by agents {holders:?}")?;
            }
            for (agent, item) in &v.unknown_items {
                writeln!(out, "  agent {agent} holds unknown item {item}")?;
            }
            return Ok(EXIT_NO);
        }
        FairnessStatus::Fair => writeln!(out, "fair")?,
        FairnessStatus::Unfair => writeln!(out, "not fair")?,
    }
    for (a, v) in report.values.iter().enumerate() {
        writeln!(out, "  agent {a}: {}", format_rational(v))?;
    }
    for v in &report.violations {
        writeln!(out, "  {}", describe(v))?;
    }
    Ok(if report.is_fair() { EXIT_OK } else { EXIT_NO })
}

fn describe(v: &Violation) -> String {
    match v {
        Violation::Proportionality {
            agent,
            value,
            bound,
        } => format!(
            "agent {agent} has {} against a bound of {}",
            format_rational(value),
            format_rational(bound)
        ),
        Violation::Envy {
            agent,
            envied,
            own,
            other,
        } => format!(
            "agent {agent} envies agent {envied} ({} vs {})",
            format_rational(own),
            format_rational(other)
        ),
        Violation::Inequity {
            agent,
            other,
            value,
            other_value,
        } => format!(
            "agent {agent} at {} is not equitable with agent {other} at {}",
            format_rational(value),
            format_rational(other_value)
        ),
    }
}

fn solve(
    inst: &Instance,
    query: &FairnessQuery,
    config: &OracleConfig,
    force_oracle: bool,
    output: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<u8> {
    let (route, verdict) = route::solve(inst, query, config, force_oracle)?;
    if let Some(w) = &route.warning {
        writeln!(err, "warning: {w}")?;
    }
    writeln!(out, "solver: {}", route.choice)?;
    Ok(match verdict {
        Verdict::Feasible { allocation, eta } => {
            writeln!(out, "feasible")?;
            if let Some(eta) = eta {
                writeln!(out, "common value: {}", format_rational(&eta))?;
            }
            write_or_print(output, &emit_allocation(&allocation), out)?;
            EXIT_OK
        }
        Verdict::Infeasible => {
            writeln!(out, "infeasible")?;
            EXIT_NO
        }
        Verdict::Inconclusive(reason) => {
            let what = match reason {
                chores_core::oracle::StopReason::NodeLimit => "node limit",
                chores_core::oracle::StopReason::TimeLimit => "time limit",
            };
            writeln!(out, "inconclusive: {what} reached")?;
            debug_assert_eq!(route.choice, SolverChoice::Oracle);
            EXIT_INCONCLUSIVE
        }
    })
}

fn brute_force_split(values: &[u64]) -> Option<Vec<bool>> {
    let total: u64 = values.iter().sum();
    if values.len() > 30 || !total.is_multiple_of(2) {
        return None;
    }
    (0u64..1 << values.len())
        .map(|mask| {
            (0..values.len())
                .map(|i| mask >> i & 1 == 1)
                .collect::<Vec<bool>>()
        })
        .find(|pick| {
            values
                .iter()
                .zip(pick)
                .filter(|(_, &p)| p)
                .map(|(v, _)| v)
                .sum::<u64>()
                * 2
                == total
        })
}

fn reduce(args: &ReduceArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8> {
    let text = read(&args.input)?;
    let (output, witness): (ReductionOutput, Option<Allocation>) = match args.source {
        SourceKind::Sat => {
            let formula =
                parse_dimacs(&text).with_context(|| format!("in {}", args.input.display()))?;
            let output = match args.target {
                Target::Path => sat_to_path_ccd(&formula, &args.c)?,
                Target::PathBinary => sat_to_path_ccd_binary(&formula, &args.c)?,
                Target::CompleteMaxef => {
                    let eps = args
                        .epsilon
                        .clone()
                        .unwrap_or_else(default_complete_epsilon);
                    sat_to_complete_maxef(&formula, &eps)?
                }
                Target::StarAddef => {
                    let eps = args
                        .epsilon
                        .clone()
                        .unwrap_or_else(|| default_star_epsilon(&formula));
                    sat_to_star_addef(&formula, &eps)?
                }
                Target::StarAddeq | Target::TwoAgent => {
                    bail!("target {:?} takes a partition input", args.target)
                }
            };
            let witness = match (&args.witness, formula.brute_force()) {
                (Some(_), Some(model)) => Some(match args.target {
                    Target::CompleteMaxef => {
                        truth_to_complete_allocation(&output, &formula, &model)?
                    }
                    Target::StarAddef => truth_to_star_allocation(&output, &formula, &model)?,
                    _ => truth_to_path_allocation(&output, &formula, &model)?,
                }),
                _ => None,
            };
            (output, witness)
        }
        SourceKind::Partition => {
            let values =
                parse_integers(&text).with_context(|| format!("in {}", args.input.display()))?;
            match args.target {
                Target::StarAddeq => {
                    if values.len() % 2 != 0 {
                        bail!(
                            "star-addeq needs pairs of integers, got {} values",
                            values.len()
                        );
                    }
                    let pairs = values.chunks(2).map(|c| (c[0], c[1])).collect();
                    let pp = PartitionInstance::new(pairs)?;
                    let output = partition_to_star_addeq(&pp)?;
                    let witness = match args.witness {
                        Some(_) => certificate(&pp)
                            .map(|c| partition_to_witness(&output, &pp, &c))
                            .transpose()?,
                        None => None,
                    };
                    (output, witness)
                }
                Target::TwoAgent => {
                    let output = partition_to_two_agent_ccd(&values)?;
                    let witness = brute_force_split(&values)
                        .filter(|_| args.witness.is_some())
                        .map(|pick| {
                            let owners: Vec<usize> =
                                pick.iter().map(|&p| usize::from(!p)).collect();
                            Allocation::from_owners(2, &owners)
                        });
                    (output, witness)
                }
                _ => bail!("target {:?} takes a CNF input", args.target),
            }
        }
    };
    write_or_print(
        args.output.as_deref(),
        &emit_instance(&output.instance),
        out,
    )?;
    if let Some(path) = &args.labels {
        write_or_print(Some(path), &emit_labels(&output), out)?;
    }
    if let Some(path) = &args.witness {
        match witness {
            Some(w) => write_or_print(Some(path), &emit_allocation(&w), out)?,
            None => {
                writeln!(err, "no witness: the source instance has no solution")?;
                return Ok(EXIT_NO);
            }
        }
    }
    Ok(EXIT_OK)
}

fn certificate(pp: &PartitionInstance) -> Option<Vec<bool>> {
    let p = pp.pairs().len();
    if p > 30 {
        return None;
    }
    (0u64..1 << p)
        .map(|mask| (0..p).map(|i| mask >> i & 1 == 1).collect::<Vec<bool>>())
        .find(|c| pp.is_certificate(c))
}

fn generate(what: GenCommand, out: &mut dyn Write) -> Result<u8> {
    match what {
        GenCommand::Instance {
            topology,
            agents,
            items,
            seed,
            aggregation,
            polarity,
            max_numer,
            max_denom,
            raw,
            strict,
        } => {
            if agents == 0 || items == 0 {
                bail!("need at least one agent and one item");
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let shape = InstanceShape::new(topology.into(), agents, items)
                .aggregation(aggregation)
                .polarity(polarity)
                .values(max_numer, max_denom)
                .normalize(!raw);
            let mut inst = random_instance(&shape, &mut rng)?;
            if strict {
                inst = make_strict(&inst, &mut rng);
            }
            out.write_all(emit_instance(&inst).as_bytes())?;
        }
        GenCommand::Formula {
            vars,
            seed,
            allow_repeats,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let formula = random_22e3sat(vars, allow_repeats, &mut rng)?;
            out.write_all(emit_dimacs(&formula).as_bytes())?;
        }
    }
    Ok(EXIT_OK)
}

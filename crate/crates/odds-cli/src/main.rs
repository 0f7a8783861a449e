//! `odds` — command-line front end for the odds-problem solver suite.
//!
//! Subcommands: `solve` (DP, simplex-on-flow-LP, or odds-theorem), `verify`
//! (machine-checked optimality certificates), `simulate` (seeded Monte
//! Carlo), `export-lp` (MPS / LP text), and `gen` (instance files).
//!
//! Exit codes: 0 success, 1 usage error, 2 verification failure,
//! 3 numerical failure.  All output is deterministic for fixed flags;
//! `timing_ms` fields are the only wall-clock-dependent values.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use odds_core::bridge::{flow_to_policy, policy_to_flow};
use odds_core::dp::{odds_threshold, policy_from_values, solve_dp};
use odds_core::duality::{
    check_dual_feasible, check_primal_feasible, complementary_slackness, duality_gap,
};
use odds_core::evaluate::{expected_reward, seeded_probabilities, simulate, SimResult};
use odds_core::export::{to_lp_text, to_mps};
use odds_core::io::{parse_instance_json, parse_policy_json, InstanceFile, LoadedInstance};
use odds_core::lp::{
    build_dual_lp, build_flow_lp, build_secretary_reduced_lp, flow_from_ff_primal,
    values_from_ff_duals, DualForm, LpProblem,
};
use odds_core::rewards::{build_rewards, VariantSpec};
use odds_core::simplex::{solve_lp, LpOutcome, LpSolution};
use odds_core::types::{Instance, Policy, StopRegion};

// ---------------------------------------------------------------------------
// Tolerances pinned for the verify command
// ---------------------------------------------------------------------------

/// |simplex flow optimum - DP w_0|.
const TOL_SIMPLEX_AGREEMENT: f64 = 1e-7;
/// Duality gap of the DP-derived primal/dual pair.
const TOL_DUALITY_GAP: f64 = 1e-10;
/// Complementary-slackness violations (relative to max(1, w_0)).
const TOL_SLACKNESS: f64 = 1e-7;
/// Policy -> flow -> policy and flow -> policy -> flow reproduction.
const TOL_ROUNDTRIP: f64 = 1e-12;
/// |odds-theorem win probability - DP w_0| on last-success instances.
const TOL_ODDS_AGREEMENT: f64 = 1e-12;
/// Primal feasibility of the simplex flow.
const TOL_LP_FEASIBILITY: f64 = 1e-9;
/// P-feasibility of the value vector recovered from the flow LP duals.
const TOL_DUAL_FEASIBILITY: f64 = 1e-7;
/// Stored solution documents: value vs. recomputed expectation and optimum.
const TOL_SOLUTION_FILE: f64 = 1e-9;

// ---------------------------------------------------------------------------
// Command line
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "odds",
    about = "Optimal stopping for Bernoulli sequences: DP, flow LP, and odds-theorem solvers",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and print a solution document.
    Solve(SolveArgs),
    /// Certify optimality: duality gap, complementary slackness, roundtrips.
    Verify(VerifyArgs),
    /// Estimate a policy's value by seeded Monte Carlo.
    Simulate(SimulateArgs),
    /// Export a formulation as an MPS or LP-text file.
    ExportLp(ExportArgs),
    /// Generate an instance file.
    Gen(GenArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Solution method.
    #[arg(long, value_enum, default_value_t = Method::Dp)]
    method: Method,
    /// Write the solution document here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Method {
    Dp,
    Simplex,
    OddsTheorem,
    All,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Dp => "dp",
            Method::Simplex => "simplex",
            Method::OddsTheorem => "odds-theorem",
            Method::All => "all",
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Instance file (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Check a previously written solution document instead of running the
    /// live solver pipeline.
    #[arg(long)]
    check_files: Option<PathBuf>,
    /// Write the certificate report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Instance file (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Policy file (JSON with a `pi` array), or the word `optimal`.
    #[arg(long, default_value = "optimal")]
    policy: String,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of deterministic PRNG substreams (part of the
    /// reproducibility contract).
    #[arg(long, default_value_t = 1)]
    workers: u64,
    /// Also report the exact expected reward and the z-score.
    #[arg(long)]
    compare_exact: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ExportArgs {
    /// Instance file (JSON).
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    formulation: Formulation,
    #[arg(long, value_enum)]
    format: ExportFormat,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, ValueEnum)]
enum Formulation {
    Ff,
    DualP,
    DualP1,
    SecretaryReduced,
}

#[derive(Copy, Clone, ValueEnum)]
enum ExportFormat {
    Mps,
    LpText,
}

#[derive(Args)]
struct GenArgs {
    /// Number of observations (optional when --p-list fixes it).
    #[arg(long)]
    n: Option<usize>,
    /// Generate the classical secretary instance (p_i = 1/i, R_i = i/n).
    #[arg(long)]
    secretary: bool,
    /// Reward variant for generated instances.
    #[arg(long, value_enum)]
    variant: Option<VariantKind>,
    /// Parameter m (mth-last, any-of-last-m).
    #[arg(long)]
    m: Option<usize>,
    /// Parameter k (k-of-last-l).
    #[arg(long)]
    k: Option<usize>,
    /// Parameter l (k-of-last-l).
    #[arg(long)]
    l: Option<usize>,
    /// Comma-separated success probabilities.
    #[arg(long)]
    p_list: Option<String>,
    /// Seed for random p drawn uniformly from [0.05, 0.95].
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, ValueEnum)]
enum VariantKind {
    LastSuccess,
    MthLast,
    AnyOfLastM,
    KOfLastL,
}

// ---------------------------------------------------------------------------
// Error-to-exit-code mapping
// ---------------------------------------------------------------------------

enum CliError {
    Usage(String),
    Verification(String),
    Numerical(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Verification(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Verification(m) | CliError::Numerical(m) => m,
        }
    }
}

fn usage(err: impl std::fmt::Display) -> CliError {
    CliError::Usage(err.to_string())
}

fn numerical(err: impl std::fmt::Display) -> CliError {
    CliError::Numerical(err.to_string())
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::ExportLp(args) => cmd_export_lp(args),
        Command::Gen(args) => cmd_gen(args),
    };
    if let Err(err) = result {
        eprintln!("error: {}", err.message());
        std::process::exit(err.exit_code());
    }
}

// ---------------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------------

fn read_instance(path: &Path) -> Result<LoadedInstance, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let loaded =
        parse_instance_json(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    for flag in loaded.instance.flags() {
        eprintln!("warning: {flag}");
    }
    Ok(loaded)
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{}", text.trim_end());
            Ok(())
        }
    }
}

fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("documents serialize");
    text.push('\n');
    text
}

fn solve_ff(prob: &LpProblem) -> Result<LpSolution, CliError> {
    match solve_lp(prob).map_err(numerical)? {
        LpOutcome::Optimal(sol) => Ok(sol),
        other => Err(CliError::Numerical(format!(
            "LP solver returned {other:?} on a problem that must have an optimum"
        ))),
    }
}

/// Last-success rewards are the suffix failure products; used to decide
/// whether the odds theorem applies to explicit reward vectors.
fn is_last_success_instance(loaded: &LoadedInstance) -> bool {
    if loaded.variant == Some(VariantSpec::LastSuccess) {
        return true;
    }
    let inst = &loaded.instance;
    let mut tail = 1.0;
    for i in (0..inst.n()).rev() {
        if (inst.rewards()[i] - tail).abs() > 1e-9 * tail.max(1.0) {
            return false;
        }
        tail *= inst.q_at(i);
    }
    true
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct PolicyDoc {
    stop: Vec<bool>,
    pi: Vec<f64>,
}

impl PolicyDoc {
    fn from_region(region: &StopRegion) -> Self {
        PolicyDoc {
            stop: region.stop().to_vec(),
            pi: region.to_policy().pi().to_vec(),
        }
    }

    /// Fractional policies (possible for degenerate LP optima) render with
    /// the midpoint rule: stop where the continuation probability is below
    /// one half.
    fn from_policy(pol: &Policy) -> Self {
        PolicyDoc {
            stop: pol.pi().iter().map(|&v| v < 0.5).collect(),
            pi: pol.pi().to_vec(),
        }
    }
}

#[derive(Serialize)]
struct SolutionDoc {
    value: f64,
    policy: PolicyDoc,
    method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    checks: Option<serde_json::Value>,
    timing_ms: f64,
}

fn solve_by_dp(inst: &Instance) -> Result<(f64, PolicyDoc), CliError> {
    let w = solve_dp(inst);
    let region = policy_from_values(inst, &w).map_err(numerical)?;
    Ok((w.root(), PolicyDoc::from_region(&region)))
}

fn solve_by_simplex(inst: &Instance) -> Result<(f64, PolicyDoc), CliError> {
    let sol = solve_ff(&build_flow_lp(inst))?;
    let flow = flow_from_ff_primal(inst, &sol.primal);
    let pol = flow_to_policy(inst, &flow).map_err(numerical)?;
    Ok((sol.objective, PolicyDoc::from_policy(&pol)))
}

fn solve_by_odds(loaded: &LoadedInstance) -> Result<(f64, PolicyDoc), CliError> {
    if !is_last_success_instance(loaded) {
        eprintln!(
            "warning: the odds theorem is only guaranteed for last-success rewards; \
             reporting its value anyway"
        );
    }
    let inst = &loaded.instance;
    let (s_star, win) = odds_threshold(inst).map_err(usage)?;
    let stop: Vec<bool> = (1..=inst.n()).map(|i| i >= s_star).collect();
    Ok((win, PolicyDoc::from_region(&StopRegion::new(stop))))
}

fn cmd_solve(args: SolveArgs) -> Result<(), CliError> {
    let loaded = read_instance(&args.input)?;
    let inst = &loaded.instance;
    let started = Instant::now();
    let (value, policy, checks) = match args.method {
        Method::Dp => {
            let (value, policy) = solve_by_dp(inst)?;
            (value, policy, None)
        }
        Method::Simplex => {
            let (value, policy) = solve_by_simplex(inst)?;
            (value, policy, None)
        }
        Method::OddsTheorem => {
            let (value, policy) = solve_by_odds(&loaded)?;
            (value, policy, None)
        }
        Method::All => {
            let (dp_value, policy) = solve_by_dp(inst)?;
            let (lp_value, _) = solve_by_simplex(inst)?;
            let odds_applicable = is_last_success_instance(&loaded);
            let odds_value = if odds_applicable {
                Some(odds_threshold(inst).map_err(usage)?.1)
            } else {
                None
            };
            let mut agreement = (dp_value - lp_value).abs() <= TOL_SIMPLEX_AGREEMENT;
            if let Some(ov) = odds_value {
                agreement &= (dp_value - ov).abs() <= TOL_ODDS_AGREEMENT;
            }
            let checks = serde_json::json!({
                "dp": dp_value,
                "simplex": lp_value,
                "odds_theorem": odds_value,
                "odds_applicable": odds_applicable,
                "agreement": agreement,
            });
            (dp_value, policy, Some(checks))
        }
    };
    let doc = SolutionDoc {
        value,
        policy,
        method: args.method.name().into(),
        checks,
        timing_ms: started.elapsed().as_secs_f64() * 1e3,
    };
    emit(args.output.as_deref(), &to_pretty_json(&doc))
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct CheckItem {
    name: &'static str,
    passed: bool,
    value: f64,
    tolerance: f64,
}

impl CheckItem {
    fn new(name: &'static str, value: f64, tolerance: f64) -> Self {
        CheckItem {
            name,
            passed: value.abs() <= tolerance,
            value,
            tolerance,
        }
    }
}

#[derive(Serialize)]
struct VerifyDoc {
    checks: Vec<CheckItem>,
    all_passed: bool,
    timing_ms: f64,
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    let loaded = read_instance(&args.input)?;
    let started = Instant::now();
    let checks = match &args.check_files {
        Some(solution_path) => check_solution_file(&loaded.instance, solution_path)?,
        None => run_certificates(&loaded)?,
    };
    let doc = VerifyDoc {
        all_passed: checks.iter().all(|c| c.passed),
        checks,
        timing_ms: started.elapsed().as_secs_f64() * 1e3,
    };
    emit(args.output.as_deref(), &to_pretty_json(&doc))?;
    if doc.all_passed {
        Ok(())
    } else {
        let failed: Vec<&str> = doc
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect();
        Err(CliError::Verification(format!(
            "checks failed: {}",
            failed.join(", ")
        )))
    }
}

fn run_certificates(loaded: &LoadedInstance) -> Result<Vec<CheckItem>, CliError> {
    let inst = &loaded.instance;
    let mut checks = Vec::new();

    // DP route: values, deterministic policy, induced flow.
    let w = solve_dp(inst);
    let region = policy_from_values(inst, &w).map_err(numerical)?;
    let dp_policy = region.to_policy();
    let dp_flow = policy_to_flow(inst, &dp_policy).map_err(numerical)?;

    // LP route: simplex on the flow formulation.
    let ff = solve_ff(&build_flow_lp(inst))?;
    checks.push(CheckItem::new(
        "simplex_ff_agreement",
        ff.objective - w.root(),
        TOL_SIMPLEX_AGREEMENT,
    ));
    let lp_flow = flow_from_ff_primal(inst, &ff.primal);
    let primal_res = check_primal_feasible(inst, &lp_flow).map_err(numerical)?;
    checks.push(CheckItem::new(
        "lp_flow_feasibility",
        primal_res.max_residual(),
        TOL_LP_FEASIBILITY,
    ));
    let w_from_duals = values_from_ff_duals(inst, &ff.duals);
    let dual_res = check_dual_feasible(inst, &w_from_duals).map_err(numerical)?;
    checks.push(CheckItem::new(
        "lp_dual_feasibility",
        dual_res.max_residual(),
        TOL_DUAL_FEASIBILITY,
    ));

    // Certificates for the DP-derived primal/dual pair.
    let gap = duality_gap(inst, &dp_flow, &w).map_err(numerical)?;
    checks.push(CheckItem::new("duality_gap", gap, TOL_DUALITY_GAP));
    let slackness = complementary_slackness(inst, &dp_flow, &w).map_err(numerical)?;
    checks.push(CheckItem::new(
        "complementary_slackness",
        slackness.max_violation,
        TOL_SLACKNESS,
    ));

    // Policy/flow correspondence, both directions.
    let back_policy = flow_to_policy(inst, &dp_flow).map_err(numerical)?;
    let policy_residual = dp_policy
        .pi()
        .iter()
        .zip(back_policy.pi())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    checks.push(CheckItem::new(
        "roundtrip_policy_flow_policy",
        policy_residual,
        TOL_ROUNDTRIP,
    ));
    let back_flow = policy_to_flow(inst, &back_policy).map_err(numerical)?;
    let flow_residual = dp_flow
        .y()
        .iter()
        .zip(back_flow.y())
        .chain(dp_flow.z().iter().zip(back_flow.z()))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    checks.push(CheckItem::new(
        "roundtrip_flow_policy_flow",
        flow_residual,
        TOL_ROUNDTRIP,
    ));

    // Odds-theorem agreement where the theorem applies.
    if is_last_success_instance(loaded) {
        if let Ok((_, win)) = odds_threshold(inst) {
            checks.push(CheckItem::new(
                "odds_theorem_agreement",
                win - w.root(),
                TOL_ODDS_AGREEMENT,
            ));
        }
    }

    Ok(checks)
}

#[derive(Deserialize)]
struct SolutionFileIn {
    value: f64,
    policy: PolicyDoc,
}

fn check_solution_file(inst: &Instance, path: &Path) -> Result<Vec<CheckItem>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let doc: SolutionFileIn =
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    if doc.policy.pi.len() != inst.n() || doc.policy.stop.len() != inst.n() {
        return Err(usage(format!(
            "{}: policy length does not match instance n = {}",
            path.display(),
            inst.n()
        )));
    }
    let pol = Policy::new(doc.policy.pi.clone()).map_err(usage)?;
    let mut checks = Vec::new();

    let realized = expected_reward(inst, &pol).map_err(usage)?;
    checks.push(CheckItem::new(
        "stored_value_matches_policy",
        doc.value - realized,
        TOL_SOLUTION_FILE,
    ));
    checks.push(CheckItem::new(
        "stored_value_is_optimal",
        doc.value - solve_dp(inst).root(),
        TOL_SOLUTION_FILE,
    ));
    let rendering_mismatches = doc
        .policy
        .stop
        .iter()
        .zip(&doc.policy.pi)
        .filter(|&(&stop, &pi)| stop != (pi < 0.5))
        .count();
    checks.push(CheckItem::new(
        "stop_region_consistent_with_pi",
        rendering_mismatches as f64,
        0.0,
    ));
    Ok(checks)
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct SimDoc {
    #[serde(flatten)]
    result: SimResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    z_score: Option<f64>,
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let loaded = read_instance(&args.input)?;
    let inst = &loaded.instance;
    let pol = if args.policy == "optimal" {
        let w = solve_dp(inst);
        policy_from_values(inst, &w)
            .map_err(numerical)?
            .to_policy()
    } else {
        let text = fs::read_to_string(&args.policy)
            .map_err(|e| usage(format!("cannot read {}: {e}", args.policy)))?;
        parse_policy_json(&text).map_err(|e| usage(format!("{}: {e}", args.policy)))?
    };
    if pol.len() != inst.n() {
        return Err(usage(format!(
            "policy length {} does not match instance n = {}",
            pol.len(),
            inst.n()
        )));
    }
    let result = simulate(inst, &pol, args.trials, args.seed, args.workers).map_err(usage)?;
    let (exact, z_score) = if args.compare_exact {
        let exact = expected_reward(inst, &pol).map_err(usage)?;
        let z = if result.stderr > 0.0 {
            (result.estimate - exact) / result.stderr
        } else {
            0.0
        };
        (Some(exact), Some(z))
    } else {
        (None, None)
    };
    let doc = SimDoc {
        result,
        exact,
        z_score,
    };
    emit(args.output.as_deref(), &to_pretty_json(&doc))
}

// ---------------------------------------------------------------------------
// export-lp
// ---------------------------------------------------------------------------

fn is_secretary_instance(inst: &Instance) -> bool {
    let n = inst.n();
    (0..n).all(|i| {
        (inst.p()[i] - 1.0 / (i as f64 + 1.0)).abs() <= 1e-12
            && (inst.rewards()[i] - (i as f64 + 1.0) / n as f64).abs() <= 1e-12
    })
}

fn cmd_export_lp(args: ExportArgs) -> Result<(), CliError> {
    let loaded = read_instance(&args.input)?;
    let inst = &loaded.instance;
    let prob = match args.formulation {
        Formulation::Ff => build_flow_lp(inst),
        Formulation::DualP => build_dual_lp(inst, DualForm::P),
        Formulation::DualP1 => build_dual_lp(inst, DualForm::P1),
        Formulation::SecretaryReduced => {
            if !is_secretary_instance(inst) {
                return Err(usage(
                    "the reduced formulation is only defined for secretary instances \
                     (p_i = 1/i, R_i = i/n)",
                ));
            }
            build_secretary_reduced_lp(inst.n()).map_err(usage)?
        }
    };
    let text = match args.format {
        ExportFormat::Mps => to_mps(&prob),
        ExportFormat::LpText => to_lp_text(&prob),
    };
    emit(args.output.as_deref(), &text)
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

fn cmd_gen(args: GenArgs) -> Result<(), CliError> {
    let file = if args.secretary {
        if args.variant.is_some() || args.p_list.is_some() {
            return Err(usage(
                "--secretary cannot be combined with --variant or --p-list",
            ));
        }
        let n = args.n.ok_or_else(|| usage("--secretary requires --n"))?;
        let inst = Instance::secretary(n).map_err(usage)?;
        InstanceFile::from_instance(&inst)
    } else {
        let kind = args
            .variant
            .ok_or_else(|| usage("either --secretary or --variant is required"))?;
        let spec = match kind {
            VariantKind::LastSuccess => VariantSpec::LastSuccess,
            VariantKind::MthLast => VariantSpec::MthLast {
                m: args.m.ok_or_else(|| usage("mth-last requires --m"))?,
            },
            VariantKind::AnyOfLastM => VariantSpec::AnyOfLastM {
                m: args.m.ok_or_else(|| usage("any-of-last-m requires --m"))?,
            },
            VariantKind::KOfLastL => VariantSpec::KOfLastL {
                k: args.k.ok_or_else(|| usage("k-of-last-l requires --k"))?,
                l: args.l.ok_or_else(|| usage("k-of-last-l requires --l"))?,
            },
        };
        let p = match (&args.p_list, args.seed) {
            (Some(list), None) => {
                let p: Vec<f64> = list
                    .split(',')
                    .map(|tok| tok.trim().parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| usage(format!("bad --p-list entry: {e}")))?;
                if let Some(n) = args.n {
                    if n != p.len() {
                        return Err(usage(format!(
                            "--n {n} does not match --p-list length {}",
                            p.len()
                        )));
                    }
                }
                p
            }
            (None, Some(seed)) => {
                let n = args.n.ok_or_else(|| usage("--seed requires --n"))?;
                seeded_probabilities(seed, n)
            }
            (Some(_), Some(_)) => {
                return Err(usage("--p-list and --seed are mutually exclusive"));
            }
            (None, None) => {
                return Err(usage("provide probabilities via --p-list or --seed"));
            }
        };
        let rewards = build_rewards(&p, spec).map_err(usage)?;
        let inst = Instance::new(p, rewards).map_err(usage)?;
        InstanceFile::from_instance(&inst)
    };
    emit(args.output.as_deref(), &to_pretty_json(&file))
}

//! `uc` — analyze, design, simulate, and verify master-worker verification
//! mechanisms against rational, possibly colluding workers.
//!
//! Exit codes: 0 success, 2 configuration error, 3 infeasible mechanism,
//! 4 verification failure. Diagnostic verbosity via `UC_LOG`
//! (`quiet` | `info` | `debug`).

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use uc_core::config::InstanceConfig;
use uc_core::games::{
    self, analyze_0n, classify_1v1n, feasibility_1n, min_pv_0n, payoff_matrix_1v1, solve_1v1,
    EquilibriumRow, RowKind,
};
use uc_core::majority::{majority_cheat_prob, majority_cheat_prob_iid, MajorityQuery};
use uc_core::mechanism::{
    design_contractor_tunable_n, design_contractor_tunable_s, design_contractor_tunable_wpc,
    design_seti, emit_certificate, Certificate, MechanismPlan,
};
use uc_core::oracle::{verify_unique, UniquenessReport, DEFAULT_GRID_STEP};
use uc_core::payoff::{
    GameKind, GroupPartition, PayoffParameters, RewardModel, Scenario, ScenarioConstraints,
    StrategyProfile, Tunable,
};
use uc_core::sim::{run_protocol, Deviation, SimConfig};

use output::{append_jsonl, fmt_prob, RunRecord};

#[derive(Parser)]
#[command(
    name = "uc",
    version,
    about = "Mechanism toolkit for master-worker computations with rational workers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the equilibria of a game for a payoff instance.
    Analyze(AnalyzeArgs),
    /// Pick the cost-optimal mechanism for a scenario and emit its
    /// certificate.
    Design(DesignArgs),
    /// Monte Carlo run of the master protocol for a designed plan.
    Simulate(SimulateArgs),
    /// Re-verify a certificate's uniqueness claim by brute force.
    Verify(VerifyArgs),
    /// Majority-cheating probability for a collusion structure.
    Majority(MajorityArgs),
    /// Run design/analyze/majority across a parameter grid, emitting CSV.
    Sweep(SweepArgs),
}

#[derive(clap::Args)]
struct AnalyzeArgs {
    #[arg(long, value_parser = parse_game)]
    game: GameKind,
    #[arg(long, value_parser = parse_model)]
    model: RewardModel,
    /// Worker count (odd); defaults to the config's group sizes, or 1.
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    config: PathBuf,
    /// Verification probability for the group game (defaults to the honesty
    /// bound plus the configured margin).
    #[arg(long)]
    pv: Option<f64>,
    /// Machine record (single JSON document).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Machine-readable rows, one JSON object per line.
    #[arg(long)]
    records: Option<PathBuf>,
}

#[derive(clap::Args)]
struct DesignArgs {
    #[arg(long, value_parser = parse_scenario)]
    scenario: Scenario,
    #[arg(long, value_parser = parse_tunable)]
    tunable: Option<Tunable>,
    /// Fixed worker count for tunable-wpc / tunable-s designs.
    #[arg(long)]
    n: Option<u64>,
    /// Largest acceptable wrong-acceptance probability (0 keeps the
    /// always-correct plans only).
    #[arg(long, default_value_t = 0.0)]
    pwrong_ceiling: f64,
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct SimulateArgs {
    /// Plan file produced by `design` (record or bare results).
    #[arg(long)]
    plan: PathBuf,
    /// Collusion structure, e.g. `1,1,3`; defaults to singletons.
    #[arg(long)]
    groups: Option<String>,
    /// Per-group cheating probabilities; defaults to the certificate's
    /// declared equilibrium.
    #[arg(long)]
    pc: Option<String>,
    /// Override the plan's verification probability.
    #[arg(long)]
    pv: Option<f64>,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    /// Root seed; required so every run is reproducible.
    #[arg(long)]
    seed: u64,
    /// Force one group's cheating probability, as `GROUP:PC`.
    #[arg(long)]
    deviate: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// Certificate file (a `design` record or a bare certificate).
    #[arg(long)]
    certificate: PathBuf,
    /// Partitions to check, e.g. `1|1,1,1|2,1`.
    #[arg(long)]
    partitions: String,
    #[arg(long, default_value_t = DEFAULT_GRID_STEP)]
    grid_step: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct MajorityArgs {
    /// Config with `group_sizes`; used with `--pc`.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Per-group cheating probabilities, e.g. `0.2,0.2,0.5`.
    #[arg(long)]
    pc: Option<String>,
    /// Worker count for the iid shortcut.
    #[arg(long)]
    n: Option<u64>,
    /// Common cheating probability for the iid shortcut.
    #[arg(long)]
    pc_iid: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepMode {
    Design,
    Analyze,
    Majority,
}

#[derive(clap::Args)]
struct SweepArgs {
    /// Parameter to sweep: one of mcv, mpw, wpc, wct, wba, mca, n, pv
    /// (design/analyze) or pc (majority).
    #[arg(long)]
    param: String,
    #[arg(long)]
    from: f64,
    #[arg(long)]
    to: f64,
    #[arg(long)]
    steps: u64,
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_enum)]
    mode: SweepMode,
    /// CSV summary path.
    #[arg(long)]
    out: PathBuf,
    /// Optional JSONL record per grid point.
    #[arg(long)]
    records: Option<PathBuf>,
    #[arg(long, value_parser = parse_game)]
    game: Option<GameKind>,
    #[arg(long, value_parser = parse_model)]
    model: Option<RewardModel>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    pv: Option<f64>,
    #[arg(long)]
    pc_iid: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pwrong_ceiling: f64,
}

struct CmdError {
    code: u8,
    msg: String,
}

type CmdResult<T> = Result<T, CmdError>;

impl From<uc_core::Error> for CmdError {
    fn from(e: uc_core::Error) -> Self {
        use uc_core::Error::*;
        let code = match &e {
            Infeasible(_) | EquilibriumNotGuaranteed(_) => 3,
            _ => 2,
        };
        CmdError {
            code,
            msg: e.to_string(),
        }
    }
}

fn config_error(msg: impl Into<String>) -> CmdError {
    CmdError {
        code: 2,
        msg: msg.into(),
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CmdError {
    CmdError {
        code: 2,
        msg: format!("{}: {e}", path.display()),
    }
}

fn parse_game(s: &str) -> Result<GameKind, String> {
    match s {
        "1v1" => Ok(GameKind::G1v1),
        "1v1n" => Ok(GameKind::G1v1n),
        "0n" => Ok(GameKind::G0n),
        "1n" => Ok(GameKind::G1n),
        _ => Err(format!("unknown game {s:?}; expected 1v1, 1v1n, 0n, or 1n")),
    }
}

fn parse_model(s: &str) -> Result<RewardModel, String> {
    match s {
        "rm" => Ok(RewardModel::Rm),
        "ra" => Ok(RewardModel::Ra),
        "rnone" => Ok(RewardModel::Rnone),
        _ => Err(format!(
            "unknown reward model {s:?}; expected rm, ra, or rnone"
        )),
    }
}

fn parse_scenario(s: &str) -> Result<Scenario, String> {
    match s {
        "seti" => Ok(Scenario::Seti),
        "contractor" => Ok(Scenario::Contractor),
        _ => Err(format!(
            "unknown scenario {s:?}; expected seti or contractor"
        )),
    }
}

fn parse_tunable(s: &str) -> Result<Tunable, String> {
    match s {
        "n" => Ok(Tunable::N),
        "wpc" => Ok(Tunable::Wpc),
        "s" => Ok(Tunable::S),
        "none" => Ok(Tunable::None),
        _ => Err(format!(
            "unknown tunable {s:?}; expected n, wpc, s, or none"
        )),
    }
}

fn parse_u32_list(s: &str) -> CmdResult<Vec<u32>> {
    s.split(',')
        .map(|t| t.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .map_err(|e| config_error(format!("bad group list {s:?}: {e}")))
}

fn parse_f64_list(s: &str) -> CmdResult<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| config_error(format!("bad probability list {s:?}: {e}")))
}

fn parse_deviate(s: &str) -> CmdResult<Deviation> {
    let (g, p) = s
        .split_once(':')
        .ok_or_else(|| config_error(format!("bad deviation {s:?}; expected GROUP:PC")))?;
    Ok(Deviation {
        group: g
            .trim()
            .parse()
            .map_err(|e| config_error(format!("bad deviation group: {e}")))?,
        forced_pc: p
            .trim()
            .parse()
            .map_err(|e| config_error(format!("bad deviation probability: {e}")))?,
    })
}

fn odd_n(n: u64) -> CmdResult<u64> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(config_error(format!("worker count must be odd, got {n}")));
    }
    Ok(n)
}

fn main() -> ExitCode {
    init_logging();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}

fn init_logging() {
    let level = match std::env::var("UC_LOG").as_deref() {
        Ok("debug") => log::LevelFilter::Debug,
        Ok("info") => log::LevelFilter::Info,
        _ => log::LevelFilter::Off,
    };
    env_logger::Builder::new().filter_level(level).init();
}

fn run(command: Command) -> CmdResult<u8> {
    match command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Design(args) => cmd_design(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Majority(args) => cmd_majority(args),
        Command::Sweep(args) => cmd_sweep(args),
    }
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

fn resolve_n(explicit: Option<u64>, cfg: &InstanceConfig) -> CmdResult<u64> {
    if let Some(n) = explicit {
        return odd_n(n);
    }
    if let Some(p) = cfg.partition()? {
        return Ok(p.total_workers());
    }
    Ok(1)
}

fn check_denominators(p: &PayoffParameters) -> CmdResult<()> {
    if p.wba + p.wpc <= uc_core::EQ_TOL || p.mca + p.mpw <= uc_core::EQ_TOL {
        return Err(config_error(
            "degenerate instance: wba + wpc and mca + mpw must be positive",
        ));
    }
    Ok(())
}

fn print_rows(rows: &[EquilibriumRow]) {
    println!(
        "{:<14} {:<24} {:<24} {:>12} {:>12} {:>12}",
        "kind", "pc", "pv", "p_wrong", "u_master", "u_worker"
    );
    for r in rows {
        println!(
            "{:<14} {:<24} {:<24} {:>12.6} {:>12.6} {:>12.6}",
            r.kind.as_str(),
            fmt_prob(&r.pc),
            fmt_prob(&r.pv),
            r.p_wrong,
            r.u_master,
            r.u_worker
        );
    }
}

fn cmd_analyze(args: AnalyzeArgs) -> CmdResult<u8> {
    let cfg = InstanceConfig::load(&args.config)?;
    let params = cfg.params();
    params.check()?;
    log::info!("analyze game={} model={}", args.game, args.model);

    let echo = json!({
        "instance": cfg,
        "game": args.game,
        "model": args.model,
        "n": args.n,
        "pv": args.pv,
    });

    let results = match args.game {
        GameKind::G1v1 => {
            check_denominators(&params)?;
            let rows = solve_1v1(&payoff_matrix_1v1(&params, args.model))?;
            print_rows(&rows);
            if let Some(path) = &args.records {
                append_jsonl(path, &rows).map_err(|e| io_error(path, e))?;
            }
            json!({ "rows": rows })
        }
        GameKind::G1v1n => {
            check_denominators(&params)?;
            let n = resolve_n(args.n, &cfg)?;
            let rows = classify_1v1n(&params, args.model, n);
            println!("n = {n}");
            print_rows(&rows);
            if let Some(path) = &args.records {
                append_jsonl(path, &rows).map_err(|e| io_error(path, e))?;
            }
            json!({ "n": n, "rows": rows })
        }
        GameKind::G0n => {
            let partition = match cfg.partition()? {
                Some(p) => p,
                None => GroupPartition::singletons(resolve_n(args.n, &cfg)?)?,
            };
            let bound = min_pv_0n(&params, args.model, partition.min_group_size())?;
            let pv = match args.pv {
                Some(v) => v,
                None => bound.bound + cfg.margin,
            };
            let profile = StrategyProfile::uniform(partition.len(), 0.0, pv)?;
            let differentials =
                games::differential_report(&params, args.model, &partition, &profile)?;
            let outcome = analyze_0n(&params, args.model, pv, &partition, cfg.margin)?;
            println!(
                "groups {:?}: honesty bound pv > {:.9} ({}), analyzed at pv = {}",
                partition.sizes(),
                bound.bound,
                if bound.feasible {
                    "feasible"
                } else {
                    "infeasible: bound >= 1"
                },
                pv
            );
            println!(
                "all-honest equilibrium: p_wrong = {}, u_master = {}, u_worker per group = {:?}",
                outcome.p_wrong, outcome.u_master, outcome.u_worker_per_group
            );
            json!({
                "partition": partition.sizes(),
                "pv": pv,
                "bound": bound,
                "differentials": differentials,
                "outcome": outcome,
            })
        }
        GameKind::G1n => {
            let verdict = feasibility_1n(&params, args.model);
            match &verdict {
                games::Feasibility1n::Feasible => {
                    println!("feasible: the master can hold the all-honest equilibrium")
                }
                games::Feasibility1n::Infeasible { nonzero_costs } => {
                    println!("infeasible: nonzero costs {nonzero_costs:?}")
                }
            }
            json!({ "feasibility": verdict })
        }
    };

    if let Some(path) = &args.out {
        RunRecord::new("analyze", echo, results)
            .write(path)
            .map_err(|e| io_error(path, e))?;
        log::info!("record written to {}", path.display());
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// design
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
struct DesignResults {
    plan: MechanismPlan,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    alternative: Option<MechanismPlan>,
    certificate: Certificate,
}

fn cmd_design(args: DesignArgs) -> CmdResult<u8> {
    let cfg = InstanceConfig::load(&args.config)?;
    let params = cfg.params();
    let tunable = args.tunable.or(cfg.tunable).unwrap_or(Tunable::None);
    let constraints = ScenarioConstraints::new(args.scenario, tunable, cfg.s, cfg.margin)?;

    let (plan, alternative) = match (args.scenario, tunable) {
        (Scenario::Seti, _) => (design_seti(&params, &constraints)?, None),
        (Scenario::Contractor, Tunable::N) => {
            (design_contractor_tunable_n(&params, &constraints)?, None)
        }
        (Scenario::Contractor, Tunable::Wpc) => {
            let n = odd_n(args.n.unwrap_or(1))?;
            (
                design_contractor_tunable_wpc(&params, &constraints, n)?,
                None,
            )
        }
        (Scenario::Contractor, Tunable::S) => {
            let n = odd_n(args.n.unwrap_or(1))?;
            let out = design_contractor_tunable_s(&params, &constraints, n, args.pwrong_ceiling)?;
            (out.chosen, out.alternative)
        }
        (Scenario::Contractor, Tunable::None) => {
            return Err(config_error(
                "contractor designs need --tunable n, wpc, or s",
            ))
        }
    };

    let certificate = emit_certificate(&plan, &params);
    println!(
        "plan: game={} model={} n={} pv={}",
        plan.game, plan.model, plan.n, plan.pv
    );
    println!(
        "predicted: p_wrong={} u_master={} u_worker={}",
        plan.predicted.p_wrong, plan.predicted.u_master, plan.predicted.u_worker
    );
    println!("rationale: {}", plan.rationale);
    if let Some(alt) = &alternative {
        println!(
            "alternative considered: game={} model={} p_wrong={} u_master={}",
            alt.game, alt.model, alt.predicted.p_wrong, alt.predicted.u_master
        );
    }

    if let Some(path) = &args.out {
        let echo = json!({
            "instance": cfg,
            "scenario": args.scenario,
            "tunable": tunable,
            "n": args.n,
            "pwrong_ceiling": args.pwrong_ceiling,
        });
        let results = DesignResults {
            plan,
            alternative,
            certificate,
        };
        RunRecord::new("design", echo, results)
            .write(path)
            .map_err(|e| io_error(path, e))?;
        log::info!("plan written to {}", path.display());
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// simulate / verify
// ---------------------------------------------------------------------------

fn load_design(path: &Path) -> CmdResult<DesignResults> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| config_error(format!("{}: {e}", path.display())))?;
    let payload = value.get("results").cloned().unwrap_or(value);
    serde_json::from_value(payload)
        .map_err(|e| config_error(format!("{}: not a design record: {e}", path.display())))
}

fn cmd_simulate(args: SimulateArgs) -> CmdResult<u8> {
    let design = load_design(&args.plan)?;
    let plan = design.plan;
    let certificate = design.certificate;

    let partition = match &args.groups {
        Some(s) => GroupPartition::new(parse_u32_list(s)?)?,
        None => GroupPartition::singletons(plan.n)?,
    };
    let pcs = match &args.pc {
        Some(s) => parse_f64_list(s)?,
        None => vec![certificate.declared_pc; partition.len()],
    };
    let pv = args.pv.unwrap_or(plan.pv);
    let strategy = StrategyProfile::new(pcs, pv)?;
    let deviation = args.deviate.as_deref().map(parse_deviate).transpose()?;

    let sim = SimConfig {
        params: certificate.params,
        plan,
        partition,
        strategy,
        trials: args.trials,
        seed: args.seed,
        deviation,
    };
    log::info!("simulate trials={} seed={}", sim.trials, sim.seed);
    let report = run_protocol(&sim)?;

    println!(
        "trials={} seed={}: p_wrong={} p_correct={}",
        report.trials, report.seed, report.empirical_p_wrong, report.empirical_p_correct_accept
    );
    println!(
        "u_master = {} +- {}",
        report.mean_u_master, report.u_master_radius
    );
    for (i, g) in report.worker_groups.iter().enumerate() {
        println!("group {i}: u = {} +- {}", g.mean_utility, g.radius);
    }

    if let Some(path) = &args.out {
        RunRecord::new("simulate", &sim, &report)
            .write(path)
            .map_err(|e| io_error(path, e))?;
    }
    Ok(0)
}

fn parse_partitions(s: &str) -> CmdResult<Vec<GroupPartition>> {
    s.split('|')
        .map(|part| Ok(GroupPartition::new(parse_u32_list(part)?)?))
        .collect()
}

fn cmd_verify(args: VerifyArgs) -> CmdResult<u8> {
    let text =
        std::fs::read_to_string(&args.certificate).map_err(|e| io_error(&args.certificate, e))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| config_error(format!("{}: {e}", args.certificate.display())))?;
    let certificate: Certificate = if let Ok(design) = serde_json::from_value::<DesignResults>(
        value.get("results").cloned().unwrap_or(value.clone()),
    ) {
        design.certificate
    } else {
        serde_json::from_value(value).map_err(|e| {
            config_error(format!(
                "{}: not a certificate: {e}",
                args.certificate.display()
            ))
        })?
    };

    let partitions = parse_partitions(&args.partitions)?;
    let mut all_ok = true;
    let mut reports: Vec<(Vec<u32>, UniquenessReport)> = Vec::new();
    for partition in &partitions {
        let report = verify_unique(&certificate, partition, args.grid_step)?;
        let status = if report.verified { "UNIQUE" } else { "FAILED" };
        println!(
            "partition {:?}: {status} ({} equilibria)",
            partition.sizes(),
            report.equilibria.len()
        );
        if let Some(w) = &report.counterexample {
            println!("  counterexample: pc={:?} pv={}", w.pc_per_group, w.pv);
        }
        all_ok &= report.verified;
        reports.push((partition.sizes().to_vec(), report));
    }

    if let Some(path) = &args.out {
        let echo = json!({
            "certificate": certificate,
            "partitions": args.partitions,
            "grid_step": args.grid_step,
        });
        RunRecord::new("verify", echo, &reports)
            .write(path)
            .map_err(|e| io_error(path, e))?;
    }
    Ok(if all_ok { 0 } else { 4 })
}

// ---------------------------------------------------------------------------
// majority
// ---------------------------------------------------------------------------

fn cmd_majority(args: MajorityArgs) -> CmdResult<u8> {
    let (echo, p_c) = match (&args.config, &args.pc, args.n, args.pc_iid) {
        (_, _, Some(n), Some(pc)) => {
            let p = majority_cheat_prob_iid(n, pc)?;
            (json!({ "n": n, "pc": pc }), p)
        }
        (Some(path), Some(pcs), _, _) => {
            let cfg = InstanceConfig::load(path)?;
            let partition = cfg
                .partition()?
                .ok_or_else(|| config_error("config has no group_sizes"))?;
            let pcs = parse_f64_list(pcs)?;
            let query = MajorityQuery::new(partition, pcs)?;
            let p = majority_cheat_prob(&query);
            (json!({ "query": query }), p)
        }
        _ => {
            return Err(config_error(
                "majority needs either --n with --pc-iid, or --config with --pc",
            ))
        }
    };
    println!("P_C = {p_c}");
    if let Some(path) = &args.out {
        RunRecord::new("majority", echo, json!({ "p_c": p_c }))
            .write(path)
            .map_err(|e| io_error(path, e))?;
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize)]
struct SweepRow {
    value: f64,
    game: String,
    model: String,
    /// Chosen worker count; JSONL records only, not a CSV column.
    n: Option<u64>,
    pv: String,
    p_wrong: String,
    u_master: String,
}

const PAYOFF_PARAMS: [&str; 6] = ["mcv", "mpw", "wpc", "wct", "wba", "mca"];

fn patch_payoff(cfg: &mut InstanceConfig, param: &str, v: f64) {
    match param {
        "mcv" => cfg.mcv = v,
        "mpw" => cfg.mpw = v,
        "wpc" => cfg.wpc = v,
        "wct" => cfg.wct = v,
        "wba" => cfg.wba = v,
        "mca" => cfg.mca = v,
        _ => unreachable!("checked payoff param"),
    }
}

fn cmd_sweep(args: SweepArgs) -> CmdResult<u8> {
    if args.steps == 0 {
        return Err(config_error("steps must be >= 1"));
    }
    if !args.from.is_finite() || !args.to.is_finite() || args.to < args.from {
        return Err(config_error("invalid sweep range"));
    }
    let base = InstanceConfig::load(&args.config)?;
    let param = args.param.as_str();
    let is_payoff = PAYOFF_PARAMS.contains(&param);
    match args.mode {
        SweepMode::Design | SweepMode::Analyze => {
            if !is_payoff && param != "n" && param != "pv" {
                return Err(config_error(format!(
                    "param {param:?} not sweepable in this mode (payoff names, n, or pv)"
                )));
            }
        }
        SweepMode::Majority => {
            if param != "pc" && param != "n" {
                return Err(config_error("majority sweeps take pc or n"));
            }
        }
    }

    let mut rows: Vec<SweepRow> = Vec::new();
    for step in 0..=args.steps {
        let value = args.from + (args.to - args.from) * step as f64 / args.steps as f64;
        let row = sweep_point(&args, &base, param, is_payoff, value)?;
        rows.push(row);
    }

    let mut writer = csv::Writer::from_path(&args.out)
        .map_err(|e| config_error(format!("{}: {e}", args.out.display())))?;
    writer
        .write_record(["value", "game", "model", "pv", "p_wrong", "u_master"])
        .and_then(|_| {
            rows.iter().try_for_each(|r| {
                writer.write_record([
                    format!("{}", r.value),
                    r.game.clone(),
                    r.model.clone(),
                    r.pv.clone(),
                    r.p_wrong.clone(),
                    r.u_master.clone(),
                ])
            })
        })
        .and_then(|_| writer.flush().map_err(Into::into))
        .map_err(|e| config_error(format!("{}: {e}", args.out.display())))?;

    if let Some(path) = &args.records {
        append_jsonl(path, &rows).map_err(|e| io_error(path, e))?;
    }
    println!("{} points -> {}", rows.len(), args.out.display());
    Ok(0)
}

fn sweep_point(
    args: &SweepArgs,
    base: &InstanceConfig,
    param: &str,
    is_payoff: bool,
    value: f64,
) -> CmdResult<SweepRow> {
    let mut cfg = base.clone();
    if is_payoff {
        patch_payoff(&mut cfg, param, value);
    }
    match args.mode {
        SweepMode::Design => {
            let scenario = cfg
                .scenario
                .ok_or_else(|| config_error("design sweeps need a scenario in the config"))?;
            let tunable = cfg.tunable.unwrap_or(Tunable::N);
            let constraints = ScenarioConstraints::new(scenario, tunable, cfg.s, cfg.margin)?;
            let n = if param == "n" {
                odd_n(value.round() as u64)?
            } else {
                args.n.unwrap_or(1)
            };
            let params = cfg.params();
            let designed = match (scenario, tunable) {
                (Scenario::Seti, _) => design_seti(&params, &constraints),
                (Scenario::Contractor, Tunable::N) => {
                    design_contractor_tunable_n(&params, &constraints)
                }
                (Scenario::Contractor, Tunable::Wpc) => {
                    design_contractor_tunable_wpc(&params, &constraints, n)
                }
                (Scenario::Contractor, Tunable::S) => {
                    design_contractor_tunable_s(&params, &constraints, n, args.pwrong_ceiling)
                        .map(|o| o.chosen)
                }
                (Scenario::Contractor, Tunable::None) => {
                    return Err(config_error(
                        "contractor sweeps need a tunable in the config",
                    ))
                }
            };
            match designed {
                Ok(plan) => Ok(SweepRow {
                    value,
                    game: plan.game.to_string(),
                    model: plan.model.to_string(),
                    n: Some(plan.n),
                    pv: format!("{}", plan.pv),
                    p_wrong: format!("{}", plan.predicted.p_wrong),
                    u_master: format!("{}", plan.predicted.u_master),
                }),
                Err(uc_core::Error::Infeasible(reason)) => {
                    log::debug!("value {value}: infeasible ({reason})");
                    Ok(SweepRow {
                        value,
                        game: "infeasible".into(),
                        model: String::new(),
                        n: None,
                        pv: String::new(),
                        p_wrong: String::new(),
                        u_master: String::new(),
                    })
                }
                Err(uc_core::Error::Validation(reason)) => {
                    log::debug!("value {value}: inadmissible ({reason})");
                    Ok(SweepRow {
                        value,
                        game: "invalid".into(),
                        model: String::new(),
                        n: None,
                        pv: String::new(),
                        p_wrong: String::new(),
                        u_master: String::new(),
                    })
                }
                Err(e) => Err(e.into()),
            }
        }
        SweepMode::Analyze => {
            let game = args
                .game
                .ok_or_else(|| config_error("analyze sweeps need --game"))?;
            let model = args
                .model
                .ok_or_else(|| config_error("analyze sweeps need --model"))?;
            let params = cfg.params();
            let n = if param == "n" {
                odd_n(value.round() as u64)?
            } else {
                args.n.map(odd_n).transpose()?.unwrap_or(1)
            };
            match game {
                GameKind::G0n => {
                    let partition = GroupPartition::singletons(n)?;
                    let pv = if param == "pv" {
                        value
                    } else {
                        args.pv.unwrap_or(1.0)
                    };
                    let outcome = analyze_0n(&params, model, pv, &partition, cfg.margin)?;
                    Ok(SweepRow {
                        value,
                        game: game.to_string(),
                        model: model.to_string(),
                        n: Some(n),
                        pv: format!("{pv}"),
                        p_wrong: format!("{}", outcome.p_wrong),
                        u_master: format!("{}", outcome.u_master),
                    })
                }
                GameKind::G1v1 | GameKind::G1v1n => {
                    check_denominators(&params)?;
                    let rows =
                        classify_1v1n(&params, model, if game == GameKind::G1v1 { 1 } else { n });
                    let row = rows
                        .iter()
                        .find(|r| r.kind == RowKind::FullyMixed)
                        .or_else(|| rows.first());
                    match row {
                        Some(r) => Ok(SweepRow {
                            value,
                            game: game.to_string(),
                            model: model.to_string(),
                            n: Some(if game == GameKind::G1v1 { 1 } else { n }),
                            pv: format!("{}", r.pv.eval_point()),
                            p_wrong: format!("{}", r.p_wrong),
                            u_master: format!("{}", r.u_master),
                        }),
                        None => Ok(SweepRow {
                            value,
                            game: game.to_string(),
                            model: model.to_string(),
                            n: Some(if game == GameKind::G1v1 { 1 } else { n }),
                            pv: String::new(),
                            p_wrong: String::new(),
                            u_master: String::new(),
                        }),
                    }
                }
                GameKind::G1n => Err(config_error(
                    "sweeping the master-in-game variant is not supported",
                )),
            }
        }
        SweepMode::Majority => {
            let (n, pc) = if param == "pc" {
                (odd_n(args.n.unwrap_or(1))?, value)
            } else {
                let pc = args
                    .pc_iid
                    .ok_or_else(|| config_error("majority n-sweeps need --pc-iid"))?;
                (odd_n(value.round() as u64)?, pc)
            };
            let p_c = majority_cheat_prob_iid(n, pc)?;
            Ok(SweepRow {
                value,
                game: "majority".into(),
                model: String::new(),
                n: Some(n),
                pv: String::new(),
                p_wrong: format!("{p_c}"),
                u_master: String::new(),
            })
        }
    }
}

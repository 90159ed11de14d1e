use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use coordination::io::{trajectory_csv, AbstractForm, IoError, PlanFile, ScenarioFile};
use coordination::oracle::{
    dp_optimal_cost, random_scenario, sample_feasible_trajectory, LatticeConfig, OracleError,
    RandomScenarioConfig,
};
use coordination::planner::{plan_exhaustive, plan_fixed_priority, plan_heuristic, validate, Violation};
use coordination::plot::plan_figures;
use coordination::priority::{Infeasibility, PriorityError};
use coordination::{PlanError, PriorityGraph, Scenario};

#[derive(Parser)]
#[command(name = "coordplan", version, about = "Plan vehicle crossings through an intersection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Turn a geometric scenario into obstacle rectangles.
    Compile {
        input: PathBuf,
        #[arg(long, default_value_t = 256)]
        grid: usize,
        /// Abstract scenario file to write; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Plan a trajectory.
    Plan {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        /// Priorities such as "1>2,2>3"; required with --mode fixed.
        #[arg(long)]
        graph: Option<String>,
        /// Plan file to write; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = 256)]
        grid: usize,
    },
    /// Draw a plan as SVG files.
    Plot {
        plan: PathBuf,
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 256)]
        grid: usize,
    },
    /// Compare the exhaustive planner with the lattice oracle and random samples.
    Verify {
        scenario: PathBuf,
        #[arg(long, default_value_t = 0.02)]
        grid_step: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 256)]
        grid: usize,
    },
    /// Check a plan file against a scenario.
    Validate {
        plan: PathBuf,
        scenario: PathBuf,
        #[arg(long, default_value_t = 256)]
        grid: usize,
    },
    /// Write a random rectangle scenario.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Fixed,
    Heuristic,
    Exhaustive,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Fixed => "fixed",
            Mode::Heuristic => "heuristic",
            Mode::Exhaustive => "exhaustive",
        }
    }
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: IoError },
    #[error("infeasible priority graph: {0}")]
    Infeasible(Infeasibility),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error("validation failed: {0}")]
    Invalid(Violation),
    #[error("verification failed")]
    Mismatch,
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Infeasible(_) | CliError::Plan(PlanError::Infeasible(_) | PlanError::NoFeasibleGraph) => 2,
            CliError::Plan(
                PlanError::Deadlock { .. }
                | PlanError::Horizon { .. }
                | PlanError::Priority(PriorityError::TooManyPairs { .. } | PriorityError::TooManyVehicles { .. }),
            )
            | CliError::Oracle(OracleError::TooManyVehicles { .. }) => 3,
            CliError::Invalid(_) | CliError::Mismatch => 4,
            _ => 1,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Write { path: path.to_path_buf(), source })
}

fn parse_scenario_file(path: &Path) -> Result<ScenarioFile, CliError> {
    ScenarioFile::from_json(&read(path)?).map_err(|source| CliError::Parse { path: path.to_path_buf(), source })
}

fn load_scenario(path: &Path, grid: usize) -> Result<Scenario, CliError> {
    parse_scenario_file(path)?
        .to_scenario(grid)
        .map_err(|source| CliError::Parse { path: path.to_path_buf(), source })
}

fn load_plan(path: &Path) -> Result<PlanFile, CliError> {
    PlanFile::from_json(&read(path)?).map_err(|source| CliError::Parse { path: path.to_path_buf(), source })
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn describe_pairs(scn: &Scenario) {
    if scn.obstacles().is_empty() {
        println!("no conflicting pairs");
    }
    for r in scn.obstacles() {
        println!(
            "pair {}: ({}, {}) x ({}, {})",
            r.pair(),
            r.first().lo,
            r.first().hi,
            r.second().lo,
            r.second().hi
        );
    }
}

fn cmd_compile(input: &Path, grid: usize, out: Option<&Path>) -> Result<(), CliError> {
    let file = parse_scenario_file(input)?;
    if !matches!(file, ScenarioFile::Geometric(_)) {
        return Err(CliError::Usage(format!("{}: compile needs a geometric scenario", input.display())));
    }
    let scn = file.to_scenario(grid).map_err(|source| CliError::Parse { path: input.to_path_buf(), source })?;
    let text = ScenarioFile::Abstract(AbstractForm::from_scenario(&scn)).to_json();
    emit(out, &text)?;
    if out.is_some() {
        describe_pairs(&scn);
    }
    Ok(())
}

fn cmd_plan(
    input: &Path,
    mode: Mode,
    graph: Option<&str>,
    out: Option<&Path>,
    csv: Option<&Path>,
    grid: usize,
) -> Result<(), CliError> {
    let scn = load_scenario(input, grid)?;
    let plan = match (mode, graph) {
        (Mode::Fixed, Some(lit)) => {
            let g = PriorityGraph::parse(scn.n(), lit).map_err(|e| CliError::Usage(e.to_string()))?;
            match plan_fixed_priority(&scn, &g) {
                Err(PlanError::Infeasible(w)) => return Err(CliError::Infeasible(w)),
                other => other?,
            }
        }
        (Mode::Fixed, None) => return Err(CliError::Usage("--mode fixed needs --graph".into())),
        (_, Some(_)) => return Err(CliError::Usage("--graph is only used with --mode fixed".into())),
        (Mode::Heuristic, None) => plan_heuristic(&scn)?,
        (Mode::Exhaustive, None) => plan_exhaustive(&scn)?,
    };
    let file = PlanFile::from_plan(mode.name(), &plan, &scn);
    emit(out, &file.to_json())?;
    if let Some(path) = csv {
        write(path, &trajectory_csv(&plan.trajectory))?;
    }
    if out.is_some() {
        println!("mode: {}", mode.name());
        println!("cost: {}", plan.cost);
        println!("graph: {}", plan.graph);
        let exits: Vec<String> = plan.exit_times.iter().map(|t| t.to_string()).collect();
        println!("exit times: {}", exits.join(", "));
    }
    Ok(())
}

fn cmd_plot(plan_path: &Path, scenario: &Path, out: &Path, grid: usize) -> Result<(), CliError> {
    let plan = load_plan(plan_path)?;
    let scn = load_scenario(scenario, grid)?;
    plan.check_matches(&scn)?;
    let traj = plan.trajectory()?;
    let graph = plan.graph()?;
    fs::create_dir_all(out).map_err(|source| CliError::Write { path: out.to_path_buf(), source })?;
    for (name, svg) in plan_figures(&scn, &traj, &graph) {
        let path = out.join(&name);
        write(&path, &svg)?;
        println!("{}", path.display());
    }
    Ok(())
}

const DOMINANCE_SAMPLES: u64 = 20;

fn cmd_verify(scenario: &Path, grid_step: f64, seed: u64, grid: usize) -> Result<(), CliError> {
    let scn = load_scenario(scenario, grid)?;
    let cfg = LatticeConfig::new(grid_step)?;
    let plan = plan_exhaustive(&scn)?;
    let dp = dp_optimal_cost(&scn, &cfg)?;
    let diff = (plan.cost - dp).abs();
    let tol = cfg.tolerance(scn.n());
    let oracle_ok = diff <= tol;
    println!("exhaustive cost: {}", plan.cost);
    println!("lattice cost:    {dp}");
    println!("difference:      {diff} (tolerance {tol})");
    println!("oracle: {}", if oracle_ok { "PASS" } else { "FAIL" });

    let mut worst = f64::INFINITY;
    for k in 0..DOMINANCE_SAMPLES {
        let psi = sample_feasible_trajectory(&scn, &plan.graph, seed.wrapping_add(k))?;
        let cost = psi.cost().map_err(PlanError::from)?;
        worst = worst.min(cost - plan.cost);
    }
    let dominance_ok = worst >= -1e-9;
    println!("sampled trajectories: {DOMINANCE_SAMPLES}, smallest cost margin {worst}");
    println!("dominance: {}", if dominance_ok { "PASS" } else { "FAIL" });
    if oracle_ok && dominance_ok {
        Ok(())
    } else {
        Err(CliError::Mismatch)
    }
}

fn cmd_validate(plan_path: &Path, scenario: &Path, grid: usize) -> Result<(), CliError> {
    let plan = load_plan(plan_path)?;
    let scn = load_scenario(scenario, grid)?;
    plan.check_matches(&scn)?;
    let report = validate(&plan.trajectory()?, &scn, Some(&plan.graph()?));
    match report.violation {
        None => {
            println!("valid");
            Ok(())
        }
        Some(v) => Err(CliError::Invalid(v)),
    }
}

fn cmd_generate(n: usize, seed: u64, out: Option<&Path>) -> Result<(), CliError> {
    let scn = random_scenario(n, seed, &RandomScenarioConfig::default())?;
    emit(out, &ScenarioFile::Abstract(AbstractForm::from_scenario(&scn)).to_json())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Compile { input, grid, out } => cmd_compile(&input, grid, out.as_deref()),
        Command::Plan { input, mode, graph, out, csv, grid } => {
            cmd_plan(&input, mode, graph.as_deref(), out.as_deref(), csv.as_deref(), grid)
        }
        Command::Plot { plan, scenario, out, grid } => cmd_plot(&plan, &scenario, &out, grid),
        Command::Verify { scenario, grid_step, seed, grid } => cmd_verify(&scenario, grid_step, seed, grid),
        Command::Validate { plan, scenario, grid } => cmd_validate(&plan, &scenario, grid),
        Command::Generate { n, seed, out } => cmd_generate(n, seed, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

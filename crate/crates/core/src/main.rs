use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ser_core::harness::{
    emit_svg_plot, parse_csv, random_policy_return, relative_score, run_experiment, welch_t_test,
    write_csv, write_run_outputs, ExperimentConfig, HarnessError, RunLabel, Summary, TrialResult,
};
use ser_core::oracle::{oracle_report, BehaviorPolicy};

#[derive(Parser)]
#[command(name = "ser", version, about = "Stratified experience replay experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded trials and write curves, summary, replay stats and a plot.
    Run(RunArgs),
    /// Print stationary-occupancy and sampling-weight tables for an environment.
    Oracle(OracleArgs),
    /// Merge finished runs into one plot and a relative-score table.
    Compare(CompareArgs),
}

#[derive(Args)]
struct RunArgs {
    /// key=value file applied before any flag.
    #[arg(long, env = "SER_CONFIG")]
    config: Option<PathBuf>,
    #[arg(long, env = "SER_ENV")]
    env: Option<String>,
    #[arg(long, env = "SER_SAMPLER")]
    sampler: Option<String>,
    #[arg(long, env = "SER_AGENT")]
    agent: Option<String>,
    #[arg(long, env = "SER_SEEDS")]
    seeds: Option<String>,
    #[arg(long, env = "SER_STEPS")]
    steps: Option<String>,
    #[arg(long, env = "SER_EVAL_EVERY")]
    eval_every: Option<String>,
    #[arg(long, env = "SER_EVAL_EPISODES")]
    eval_episodes: Option<String>,
    /// Replay capacity, or `auto` for one slot per env step.
    #[arg(long, env = "SER_CAPACITY")]
    capacity: Option<String>,
    #[arg(long, env = "SER_OUT")]
    out: Option<PathBuf>,
    /// Worker threads; defaults to all cores.
    #[arg(long, env = "SER_JOBS")]
    jobs: Option<usize>,
    /// Any other config key, e.g. `--set lr=0.0005`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", env = "SER_SET", value_delimiter = ',')]
    overrides: Vec<String>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, env = "SER_ENV")]
    env: String,
    /// Behaviour policy; only `uniform` is available.
    #[arg(long, env = "SER_POLICY", default_value = "uniform")]
    policy: String,
    #[arg(long, env = "SER_CONFIG")]
    config: Option<PathBuf>,
    #[arg(long = "set", value_name = "KEY=VALUE", env = "SER_SET", value_delimiter = ',')]
    overrides: Vec<String>,
}

#[derive(Args)]
struct CompareArgs {
    /// Run directories produced by `run`.
    #[arg(long = "in", env = "SER_IN", num_args = 1.., required = true, value_delimiter = ',')]
    inputs: Vec<PathBuf>,
    /// Output path; its stem names `<stem>.svg`, `<stem>.csv` and `<stem>_scores.csv`.
    #[arg(long, env = "SER_OUT")]
    out: PathBuf,
}

fn split_pair(pair: &str) -> Result<(&str, &str), HarnessError> {
    pair.split_once('=')
        .ok_or_else(|| HarnessError::Config(format!("expected KEY=VALUE, got `{pair}`")))
}

fn load_base(config: Option<&Path>, overrides: &[String]) -> Result<ExperimentConfig, HarnessError> {
    let mut cfg = ExperimentConfig::default();
    if let Some(path) = config {
        cfg.apply_text(&fs::read_to_string(path)?)?;
    }
    for pair in overrides {
        let (k, v) = split_pair(pair)?;
        cfg.set(k.trim(), v.trim())?;
    }
    Ok(cfg)
}

fn run(args: RunArgs) -> Result<(), HarnessError> {
    let mut cfg = load_base(args.config.as_deref(), &args.overrides)?;
    let flags = [
        ("env", args.env),
        ("sampler", args.sampler),
        ("agent", args.agent),
        ("seeds", args.seeds),
        ("steps", args.steps),
        ("eval_every", args.eval_every),
        ("eval_episodes", args.eval_episodes),
        ("capacity", args.capacity),
        ("out", args.out.map(|p| p.display().to_string())),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            cfg.set(key, &v)?;
        }
    }
    cfg.validate()?;
    let result = run_experiment(&cfg, args.jobs)?;
    write_run_outputs(&cfg, &result)?;
    let s = &result.summary;
    println!(
        "{}: {} seeds, final mean return {:.4} (sem {:.4}), mean AUC {:.4}, outputs in {}",
        RunLabel::of(&cfg),
        s.num_trials,
        s.mean.last().copied().unwrap_or(f64::NAN),
        s.sem.last().copied().unwrap_or(f64::NAN),
        s.mean_auc(),
        cfg.out_dir.display()
    );
    Ok(())
}

fn oracle(args: OracleArgs) -> Result<(), HarnessError> {
    let mut cfg = load_base(args.config.as_deref(), &args.overrides)?;
    cfg.set("env", &args.env)?;
    if args.policy != "uniform" {
        return Err(HarnessError::Config(format!(
            "unknown policy `{}` (expected uniform)",
            args.policy
        )));
    }
    let mdp = cfg.build_env()?;
    print!("{}", oracle_report(&mdp, &BehaviorPolicy::uniform(&mdp))?);
    Ok(())
}

struct LoadedRun {
    config: ExperimentConfig,
    trials: Vec<TrialResult>,
}

fn compare(args: CompareArgs) -> Result<(), HarnessError> {
    let mut runs = Vec::new();
    for dir in &args.inputs {
        let config = ExperimentConfig::from_text(&fs::read_to_string(dir.join("config.txt"))?)?;
        let trials = parse_csv(&dir.join("curves.csv"))?;
        runs.push(LoadedRun { config, trials });
    }
    let stem = args.out.with_extension("");
    if let Some(parent) = stem.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    let all: Vec<TrialResult> = runs.iter().flat_map(|r| r.trials.iter().cloned()).collect();
    write_csv(&all, fs::File::create(stem.with_extension("csv"))?)?;

    let series: Vec<(String, Summary)> = runs
        .iter()
        .map(|r| Ok((RunLabel::of(&r.config).to_string(), Summary::from_trials(&r.trials)?)))
        .collect::<Result<_, HarnessError>>()?;
    emit_svg_plot(&series, &stem.with_extension("svg"))?;

    // Pair stratified and uniform runs of the same env and agent.
    let mut by_label: BTreeMap<(String, String), BTreeMap<String, (&LoadedRun, Summary)>> = BTreeMap::new();
    for (run, (_, summary)) in runs.iter().zip(series) {
        let label = RunLabel::of(&run.config);
        by_label
            .entry((label.env, label.agent))
            .or_default()
            .insert(label.sampler, (run, summary));
    }
    let mut table = String::from("env,agent,stratified_auc,uniform_auc,random_return,relative_score,p_greater\n");
    for ((env, agent), samplers) in &by_label {
        let (Some((strat_run, strat)), Some((_, unif))) = (samplers.get("stratified"), samplers.get("uniform"))
        else {
            continue;
        };
        let mdp = strat_run.config.build_env()?;
        let random = random_policy_return(&mdp, strat_run.config.eval_episodes.max(100), 0)?;
        let score = relative_score(strat.mean_auc(), unif.mean_auc(), random)?;
        let p = welch_t_test(&strat.auc, &unif.auc).map(|w| w.p_greater).unwrap_or(f64::NAN);
        let row = format!(
            "{env},{agent},{},{},{},{},{}\n",
            strat.mean_auc(),
            unif.mean_auc(),
            random,
            score,
            p
        );
        print!("{row}");
        table.push_str(&row);
    }
    let mut scores_name = stem.file_name().unwrap_or_default().to_os_string();
    scores_name.push("_scores.csv");
    fs::write(stem.with_file_name(scores_name), table)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => run(a),
        Command::Oracle(a) => oracle(a),
        Command::Compare(a) => compare(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

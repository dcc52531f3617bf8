use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use fibqca::classical::{classical_step, find_cycles};
use fibqca::harness::scenarios::{echo_analytic_table, record_trajectory};
use fibqca::harness::{
    preset, preset_names, run_scenario, ExperimentConfig, MeasurementSet, Scenario, Table,
};
use fibqca::{build_basis, Error, NamedState, Propagator, StateVector};

#[derive(Parser)]
#[command(
    name = "fibqca",
    version,
    about = "Exact simulation of the PXP automaton on the Fibonacci chain"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Record measurements along trajectories of named states.
    Propagation(RunArgs),
    /// Two-site concurrence and its peak times.
    Concurrence(RunArgs),
    /// Entanglement-spectrum spacing ratios near a given time.
    #[command(name = "spectrum_stats", alias = "spectrum-stats")]
    SpectrumStats(RunArgs),
    /// Evolve every basis configuration and classify by wall count.
    Sweep(RunArgs),
    /// Logarithmic negativity of two regions.
    Negativity(RunArgs),
    /// Numeric and analytic Loschmidt echo of a glider mode.
    Loschmidt(RunArgs),
    /// Glider dispersion and sector quasienergies.
    Dispersion(RunArgs),
    /// Return probability to the initial configuration.
    Fidelity(RunArgs),
    /// Rate function of the echo and the entanglement growth.
    #[command(name = "rate_function", alias = "rate-function")]
    RateFunction(RunArgs),
    /// Run a named preset.
    Run {
        #[arg(long)]
        preset: String,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// List the presets.
    Presets,
    /// Evolve one named state and write measurements.
    Evolve {
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
        #[arg(long, default_value_t = 300)]
        steps: usize,
        #[arg(long, default_value = "A")]
        initial: String,
        #[arg(long, default_value = "q")]
        measure: String,
        #[arg(long, default_value_t = 1)]
        every: usize,
        /// CSV path; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the constrained basis.
    Basis {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the cycles of the classical automaton.
    Cycles {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Analytic Loschmidt echo against its Gaussian approximation.
    EchoAnalytic {
        /// Glider momentum in units of pi.
        #[arg(long, default_value_t = 0.0)]
        k: f64,
        #[arg(long, default_value_t = 0.5)]
        z_max: f64,
        #[arg(long, default_value_t = 101)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// JSON configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Start from a named preset.
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Args)]
struct Overrides {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    epsilon2: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// Comma-separated named states, or ALL.
    #[arg(long)]
    initial: Option<String>,
    #[arg(long)]
    measure: Option<String>,
    #[arg(long)]
    every: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
    /// Print the resolved configuration and exit.
    #[arg(long)]
    dry_run: bool,
}

impl Overrides {
    fn apply(&self, cfg: &mut ExperimentConfig) {
        if let Some(n) = self.n {
            cfg.n_sites = n;
        }
        if let Some(e) = self.epsilon {
            cfg.epsilon = e;
        }
        if let Some(e) = self.epsilon2 {
            cfg.epsilon2 = e;
        }
        if let Some(s) = self.steps {
            cfg.steps = s;
        }
        if let Some(i) = &self.initial {
            cfg.initial = split_list(i);
        }
        if let Some(m) = &self.measure {
            cfg.measure = vec![m.clone()];
        }
        if let Some(e) = self.every {
            cfg.every = e;
        }
        if let Some(o) = &self.out {
            cfg.output_dir = o.clone();
        }
        if self.threads.is_some() {
            cfg.threads = self.threads;
        }
    }
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',')
        .map(|x| x.trim().to_string())
        .filter(|x| !x.is_empty())
        .collect()
}

enum Failure {
    Config(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_config_error() {
            Failure::Config(e.to_string())
        } else {
            Failure::Runtime(e.to_string())
        }
    }
}

fn resolve(scenario: Scenario, args: &RunArgs) -> Result<ExperimentConfig, Failure> {
    let mut cfg = match (&args.config, &args.preset) {
        (Some(path), _) => {
            // the subcommand names the scenario; a `scenario` key in the file is ignored
            let mut cfg = ExperimentConfig::from_file(path)?;
            cfg.scenario = scenario;
            cfg
        }
        (None, Some(name)) => {
            let cfg = preset(name)?;
            if cfg.scenario != scenario {
                return Err(Failure::Config(format!(
                    "preset {name} runs scenario {}, not {scenario}",
                    cfg.scenario
                )));
            }
            cfg
        }
        (None, None) => ExperimentConfig::new(scenario),
    };
    args.overrides.apply(&mut cfg);
    Ok(cfg)
}

fn execute(cfg: ExperimentConfig, dry_run: bool) -> Result<(), Failure> {
    cfg.validate()?;
    if dry_run {
        println!("{}", cfg.to_json());
        return Ok(());
    }
    let report = run_scenario(&cfg)?;
    for f in &report.files {
        println!("{}", f.display());
    }
    println!("{}", report.manifest.display());
    Ok(())
}

fn emit(table: &Table, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)
                    .map_err(|e| Failure::Runtime(format!("{}: {e}", dir.display())))?;
            }
            table.write(path)?;
        }
        None => {
            let text = table.to_csv_string()?;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Runtime(e.to_string()))?;
        }
    }
    Ok(())
}

fn scenario_args(c: &Command) -> Option<(Scenario, &RunArgs)> {
    Some(match c {
        Command::Propagation(a) => (Scenario::Propagation, a),
        Command::Concurrence(a) => (Scenario::Concurrence, a),
        Command::SpectrumStats(a) => (Scenario::SpectrumStats, a),
        Command::Sweep(a) => (Scenario::Sweep, a),
        Command::Negativity(a) => (Scenario::Negativity, a),
        Command::Loschmidt(a) => (Scenario::Loschmidt, a),
        Command::Dispersion(a) => (Scenario::Dispersion, a),
        Command::Fidelity(a) => (Scenario::Fidelity, a),
        Command::RateFunction(a) => (Scenario::RateFunction, a),
        _ => return None,
    })
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some((scenario, args)) = scenario_args(&cli.command) {
        let cfg = resolve(scenario, args)?;
        return execute(cfg, args.overrides.dry_run);
    }
    match cli.command {
        Command::Run {
            preset: name,
            overrides,
        } => {
            let mut cfg = preset(&name)?;
            overrides.apply(&mut cfg);
            execute(cfg, overrides.dry_run)
        }
        Command::Presets => {
            for p in preset_names() {
                println!("{:<24} {}", p.name, p.description);
            }
            Ok(())
        }
        Command::Evolve {
            n,
            epsilon,
            steps,
            initial,
            measure,
            every,
            out,
        } => {
            if every == 0 {
                return Err(Failure::Config("`every` must be at least 1".into()));
            }
            let state: NamedState = initial.parse()?;
            let set = MeasurementSet::parse(&measure, n)?;
            let prop = Propagator::for_size(n)?;
            let psi = StateVector::from_config(prop.basis().clone(), state.config(n)?)?;
            let bound = set.bind(prop.basis())?;
            let (times, rows) = record_trajectory(&prop, psi, epsilon, steps, every, &bound)?;
            let mut table = Table::new(std::iter::once("t".to_string()).chain(set.header()));
            for (t, row) in times.iter().zip(&rows) {
                table.push_mixed(&[*t as u64], row);
            }
            emit(&table, out.as_ref())
        }
        Command::Basis { n, out } => {
            let basis = build_basis(n)?;
            let mut table = Table::new(["index", "bits", "wall_count"]);
            for (i, c) in basis.iter().enumerate() {
                table.push(vec![
                    i.to_string(),
                    c.to_bit_string(),
                    c.wall_count().to_string(),
                ]);
            }
            emit(&table, out.as_ref())
        }
        Command::Cycles { n, out } => {
            let basis = Arc::new(build_basis(n)?);
            let step = classical_step(&basis);
            let mut table = Table::new(["cycle_id", "length", "representative_bits"]);
            for (i, c) in find_cycles(&step).iter().enumerate() {
                table.push(vec![
                    i.to_string(),
                    c.len().to_string(),
                    basis.config(c.representative()).to_bit_string(),
                ]);
            }
            emit(&table, out.as_ref())
        }
        Command::EchoAnalytic {
            k,
            z_max,
            points,
            out,
        } => {
            if points < 2 || z_max.is_nan() || z_max <= 0.0 || !k.is_finite() {
                return Err(Failure::Config(
                    "need points >= 2, z_max > 0 and finite k".into(),
                ));
            }
            emit(
                &echo_analytic_table(k * std::f64::consts::PI, z_max, points),
                out.as_ref(),
            )
        }
        _ => unreachable!("scenario commands handled above"),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

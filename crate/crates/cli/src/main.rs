use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use substream::acceptance;
use substream::harness::bench::{execute_plan, write_csv, Plan};
use substream::harness::generate;
use substream::harness::instance::{Instance, InstanceFile, MatroidSpec};
use substream::harness::runner::{run, Algorithm, Reference, RunParams};
use substream::rng::CounterRng;

#[derive(Parser)]
#[command(name = "substream", version, about = "Streaming submodular maximization under matroid constraints")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance file.
    #[command(subcommand)]
    Gen(Gen),
    /// Run one algorithm on one instance and print a JSON report.
    Run {
        /// single-pass, multipass, dscg or two-player.
        algorithm: String,
        #[command(flatten)]
        args: RunArgs,
    },
    /// Execute a JSON plan and write one CSV row per run and seed.
    Bench {
        #[arg(long)]
        plan: PathBuf,
        /// Output CSV; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Fill elapsed_ms. Output is then no longer byte-identical between runs.
        #[arg(long)]
        with_timing: bool,
    },
    /// Run the acceptance suite; exits nonzero if any criterion fails.
    Verify {
        /// Only these criteria (1-12). All when omitted.
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
}

#[derive(Subcommand)]
enum Gen {
    /// Weighted coverage.
    Coverage {
        #[arg(long)]
        n: usize,
        /// Universe size; defaults to 2n.
        #[arg(long)]
        universe: Option<usize>,
        #[arg(long, default_value_t = 0.2)]
        density: f64,
        #[command(flatten)]
        common: GenArgs,
    },
    /// Undirected weighted cut (non-monotone).
    Cut {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[command(flatten)]
        common: GenArgs,
    },
    /// Layered hard instance.
    Hardness {
        /// Number of layers.
        #[arg(long)]
        p: usize,
        /// Copies per layer.
        #[arg(long)]
        n: usize,
        /// `path:E1,E2,..` or `random:LEFT:RIGHT:DENSITY`.
        #[arg(long)]
        graphs: String,
        /// Rounding base for the matching bounds.
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GenArgs {
    /// `uniform:K`, `partition:PARTS:MAXCAP` or `graphic:VERTICES`.
    #[arg(long, default_value = "partition:3:2")]
    matroid: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    instance: PathBuf,
    /// `id-asc`, `id-desc`, `singleton-desc`, `random`, `random:SEED` or a file of ids.
    #[arg(long, default_value = "id-asc")]
    order: String,
    #[arg(long)]
    epsilon: Option<f64>,
    /// monotone or nonmonotone; follows the objective when omitted.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long, conflicts_with = "exact_oracle")]
    samples: Option<usize>,
    #[arg(long)]
    exact_oracle: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    round_trials: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    /// `half`, `alternate`, `random` or a file of Alice's ids.
    #[arg(long)]
    split: Option<String>,
    #[arg(long)]
    h: Option<usize>,
    /// none, brute-force, greedy or auto.
    #[arg(long, default_value = "auto")]
    reference: String,
    /// Fill elapsed_ms.
    #[arg(long)]
    with_timing: bool,
}

impl RunArgs {
    fn params(&self) -> Result<RunParams> {
        let d = RunParams::default();
        let reference: Reference = serde_json::from_value(serde_json::Value::String(self.reference.clone()))
            .with_context(|| format!("unknown reference `{}`", self.reference))?;
        let mode = match &self.mode {
            Some(m) => Some(m.parse().map_err(|e| anyhow::anyhow!("{e}"))?),
            None => None,
        };
        Ok(RunParams {
            order: self.order.clone(),
            epsilon: self.epsilon,
            mode,
            samples: self.samples.unwrap_or(d.samples),
            exact_oracle: self.exact_oracle,
            seed: self.seed,
            round_trials: self.round_trials.unwrap_or(d.round_trials),
            delta: self.delta.unwrap_or(d.delta),
            split: self.split.clone().unwrap_or(d.split),
            h: self.h.unwrap_or(d.h),
            reference,
        })
    }
}

fn matroid_spec(spec: &str, n: usize, rng: &mut CounterRng) -> Result<MatroidSpec> {
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| s.parse::<usize>().with_context(|| format!("bad number `{s}` in matroid `{spec}`"));
    Ok(match parts.as_slice() {
        ["uniform", k] => MatroidSpec::Uniform { capacity: num(k)? },
        ["partition", p, c] => generate::partition(n, num(p)?, num(c)?, rng),
        ["graphic", v] => generate::graphic(n, num(v)?, rng)?,
        _ => bail!("unknown matroid `{spec}`; expected uniform:K, partition:PARTS:MAXCAP or graphic:VERTICES"),
    })
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn write_instance(file: &InstanceFile, output: Option<&Path>) -> Result<()> {
    // Loading catches inconsistent parameters before anything is written.
    Instance::from_file(file.clone())?;
    emit(&serde_json::to_string_pretty(file)?, output)
}

fn generate_instance(cmd: Gen) -> Result<()> {
    match cmd {
        Gen::Coverage { n, universe, density, common } => {
            check_density(density)?;
            let mut rng = CounterRng::new(common.seed);
            let matroid = matroid_spec(&common.matroid, n, &mut rng)?;
            let objective = generate::coverage(n, universe.unwrap_or(2 * n), density, &mut rng);
            let file = generate::file(format!("coverage-{}", common.seed), common.seed, n, matroid, objective);
            write_instance(&file, common.output.as_deref())
        }
        Gen::Cut { n, density, common } => {
            check_density(density)?;
            let mut rng = CounterRng::new(common.seed);
            let matroid = matroid_spec(&common.matroid, n, &mut rng)?;
            let objective = generate::cut(n, density, &mut rng);
            let file = generate::file(format!("cut-{}", common.seed), common.seed, n, matroid, objective);
            write_instance(&file, common.output.as_deref())
        }
        Gen::Hardness { p, n, graphs, epsilon, seed, output } => {
            let mut rng = CounterRng::new(seed);
            let graphs = generate::parse_graphs(&graphs, p, &mut rng)?;
            let file = generate::hardness(n, graphs, epsilon, seed, &mut rng)?;
            write_instance(&file, output.as_deref())
        }
    }
}

fn check_density(density: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&density) {
        bail!("density must lie in [0, 1], got {density}");
    }
    Ok(())
}

fn run_one(algorithm: &str, args: &RunArgs) -> Result<()> {
    let alg: Algorithm = algorithm.parse().map_err(|e| anyhow::anyhow!("{e}"))?;
    let inst = Instance::load(&args.instance).with_context(|| format!("loading {}", args.instance.display()))?;
    let report = run(alg, &inst, &args.params()?, args.with_timing)?;
    emit(&serde_json::to_string_pretty(&report)?, None)
}

fn bench(plan_path: &Path, output: Option<&Path>, timing: bool) -> Result<()> {
    let plan = Plan::load(plan_path).with_context(|| format!("loading plan {}", plan_path.display()))?;
    let base = plan_path.parent().unwrap_or(Path::new("."));
    let rows = execute_plan(&plan, base, timing);
    let failed = rows.iter().filter(|r| r.outcome.is_err()).count();
    match output {
        Some(path) => write_csv(&rows, File::create(path).with_context(|| format!("creating {}", path.display()))?)?,
        None => write_csv(&rows, io::stdout().lock())?,
    }
    if failed > 0 {
        eprintln!("{failed} of {} runs failed; see the error column", rows.len());
    }
    Ok(())
}

fn verify(only: &[usize]) -> Result<bool> {
    let reports = if only.is_empty() {
        acceptance::run_all()
    } else {
        only.iter()
            .map(|&id| acceptance::criterion(id).with_context(|| format!("no criterion {id}")))
            .collect::<Result<Vec<_>>>()?
    };
    let mut out = io::stdout().lock();
    for r in &reports {
        writeln!(out, "{r}")?;
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    writeln!(out, "{} of {} criteria passed", reports.len() - failed, reports.len())?;
    Ok(failed == 0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(g) => generate_instance(g).map(|_| true),
        Command::Run { algorithm, args } => run_one(&algorithm, &args).map(|_| true),
        Command::Bench { plan, output, with_timing } => bench(&plan, output.as_deref(), with_timing).map(|_| true),
        Command::Verify { only } => verify(&only),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

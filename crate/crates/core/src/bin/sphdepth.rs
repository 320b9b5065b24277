use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sphere_depth::experiments::{run, Experiment, ExperimentConfig, Format, KernelTag, ResultTable, ToolError};
use sphere_depth::io::{format_sample, parse_labels, parse_real_list, read_sample};
use sphere_depth::{
    deepest, depth, fit, misclassification_rate, sample_vmf, ClassifierDepth, DeepestOptions, DeltaSpec, UnitVector,
    VmfModel,
};

/// Distance-based depth on the unit hypersphere.
#[derive(Parser)]
#[command(name = "sphdepth", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Depth of one location with respect to a sample file.
    Depth {
        #[arg(long)]
        delta: DeltaSpec,
        /// Comma-separated coordinates of the location.
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
        #[arg(long)]
        input: PathBuf,
        /// Rescale inputs that are not unit vectors instead of rejecting them.
        #[arg(long)]
        normalize: bool,
    },
    /// Deepest point of a sample file.
    Deepest {
        #[arg(long)]
        delta: DeltaSpec,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        normalize: bool,
    },
    /// Draw a sample.
    #[command(subcommand)]
    Sample(SampleCommand),
    /// Breakdown lower bounds under vMF laws.
    Bdp {
        #[arg(long, value_delimiter = ',', default_value = "2,3,5,10")]
        q_list: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,2,5,10,50,100")]
        kappa_grid: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "arc,cos,chord")]
        deltas: Vec<KernelTag>,
        #[command(flatten)]
        output: Output,
    },
    /// Max-depth classification.
    Classify {
        #[arg(long)]
        train1: PathBuf,
        #[arg(long)]
        train2: PathBuf,
        /// arc, cos, chord, or the circle baselines atd and asd.
        #[arg(long)]
        delta: ClassifierDepth,
        /// Comma-separated coordinates of a single query.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "test")]
        query: Option<String>,
        /// Sample file of queries.
        #[arg(long, required_unless_present = "query")]
        test: Option<PathBuf>,
        /// True labels (1 or 2 per line) for --test; prints the error rate.
        #[arg(long, requires = "test")]
        labels: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        tie_seed: u64,
        #[arg(long)]
        normalize: bool,
    },
    /// Run one of the simulation studies.
    Simulate {
        experiment: Experiment,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long = "M")]
        replications: Option<usize>,
        /// Use the replication counts and grids of the published study.
        #[arg(long)]
        paper_scale: bool,
        #[arg(long, value_delimiter = ',')]
        q: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',')]
        kappa: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        kernels: Option<Vec<KernelTag>>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand)]
enum SampleCommand {
    /// von Mises-Fisher draws, written as a sample file.
    Vmf {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        kappa: f64,
        /// Modal direction; defaults to the last basis vector.
        #[arg(long, allow_hyphen_values = true)]
        mode: Option<String>,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Output {
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or svg; inferred from the --out extension when absent.
    #[arg(long)]
    format: Option<Format>,
}

impl Output {
    fn write(&self, table: &ResultTable) -> Result<(), ToolError> {
        let format = match (self.format, &self.out) {
            (Some(f), _) => f,
            (None, Some(p)) if p.extension().is_some_and(|e| e == "svg") => Format::Svg,
            _ => Format::Csv,
        };
        match &self.out {
            Some(path) => table.emit(format, path),
            None => {
                print!("{}", table.render(format)?);
                Ok(())
            }
        }
    }
}

fn point(list: &str, normalize: bool) -> Result<UnitVector, ToolError> {
    let xs = parse_real_list(list)?;
    Ok(if normalize {
        UnitVector::from_components(&xs)?
    } else {
        UnitVector::new(xs)?
    })
}

fn write_text(out: Option<&Path>, text: &str) -> Result<(), ToolError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| ToolError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn execute(command: Command) -> Result<(), ToolError> {
    match command {
        Command::Depth {
            delta,
            theta,
            input,
            normalize,
        } => {
            let sample = read_sample(&input, normalize)?;
            let d = depth(&delta, &point(&theta, normalize)?, &sample)?;
            println!("{:?}", d.value);
        }
        Command::Deepest { delta, input, normalize } => {
            let sample = read_sample(&input, normalize)?;
            let r = deepest(&delta, &sample, &DeepestOptions::default())?;
            let coords: Vec<String> = r.point.coords().iter().map(|x| format!("{x:?}")).collect();
            println!("point={}", coords.join(","));
            println!("depth={:?}", r.depth);
        }
        Command::Sample(SampleCommand::Vmf {
            q,
            kappa,
            mode,
            n,
            seed,
            out,
        }) => {
            let mode = match mode {
                Some(m) => point(&m, true)?,
                None => UnitVector::basis(q, q)?,
            };
            if mode.dim() != q {
                return Err(ToolError::Config(format!("--mode has {} coordinates, --q is {q}", mode.dim())));
            }
            let sample = sample_vmf(&VmfModel::new(mode, kappa)?, n, seed)?;
            write_text(out.as_deref(), &format_sample(&sample))?;
        }
        Command::Bdp {
            q_list,
            kappa_grid,
            deltas,
            output,
        } => {
            let config = ExperimentConfig {
                q: q_list,
                kappa: kappa_grid,
                kernels: deltas,
                output: output.out.clone(),
                ..ExperimentConfig::desk(Experiment::Bdp)
            };
            output.write(&run(&config)?)?;
        }
        Command::Classify {
            train1,
            train2,
            delta,
            query,
            test,
            labels,
            tie_seed,
            normalize,
        } => {
            let model = fit(delta, read_sample(&train1, normalize)?, read_sample(&train2, normalize)?, tie_seed)?;
            if let Some(q) = query {
                println!("{}", model.classify(&point(&q, normalize)?)?);
            } else if let Some(path) = test {
                let test = read_sample(&path, normalize)?;
                match labels {
                    Some(lp) => {
                        let text = fs::read_to_string(&lp).map_err(|e| ToolError::Data(format!("{}: {e}", lp.display())))?;
                        let truth = parse_labels(&text)?;
                        println!("{:?}", misclassification_rate(&model, &test, &truth)?);
                    }
                    None => {
                        for label in model.classify_all(&test)? {
                            println!("{label}");
                        }
                    }
                }
            }
        }
        Command::Simulate {
            experiment,
            seed,
            replications,
            paper_scale,
            q,
            n,
            kappa,
            kernels,
            output,
        } => {
            let mut config = if paper_scale {
                ExperimentConfig::paper(experiment)
            } else {
                ExperimentConfig::desk(experiment)
            };
            if let Some(s) = seed {
                config.seed = s;
            }
            if let Some(m) = replications {
                config.replications = m;
            }
            if let Some(q) = q {
                config.q = q;
            }
            if let Some(n) = n {
                config.n = n;
            }
            if let Some(k) = kappa {
                config.kappa = k;
            }
            if let Some(k) = kernels {
                config.kernels = k;
            }
            config.output = output.out.clone();
            output.write(&run(&config)?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sphdepth: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use stratcart::cart::{grow_tree, predict_batch, read_tree, write_tree, TreeParams};
use stratcart::corpus::{
    load_points, save_points, split_complement, synthesize, PointSchema, SynthSpec,
};
use stratcart::design::{population_priors, post_stratification_weights};
use stratcart::harness::{emit_results, emit_summary, run_experiment_with_jobs, summarize};
use stratcart::metrics::{confusion_matrix, kappa, mcr_class, mcr_total, ConfusionMatrix};
use stratcart::sampling::{load_sample, sample_head, sample_srs, sample_stratified, save_sample};
use stratcart::{ExperimentConfig, Sample};

#[derive(Parser)]
#[command(
    name = "stratcart",
    version,
    about = "Sampling-design experiments for CART classifiers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic labeled point file.
    Synth(SynthArgs),
    /// Draw a sample from a point file and write its indices and weights.
    Sample(SampleArgs),
    /// Grow a tree on a point file (optionally restricted to a sample).
    Train(TrainArgs),
    /// Classify a point file with a tree and report the confusion matrix and metrics.
    Eval(EvalArgs),
    /// Run the method x size x replicate grid.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct SynthArgs {
    /// Synthetic spec (TOML). Without it the built-in reference fixture is used.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Fixture size when no --spec is given.
    #[arg(long, default_value_t = 100_000)]
    total: usize,
    #[arg(long, default_value_t = 6)]
    dimensionality: usize,
    #[arg(long, default_value_t = 0.3)]
    overlap: f64,
    /// Also write the spec that was used.
    #[arg(long)]
    write_spec: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DesignArg {
    Head,
    Srs,
    Stratified,
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightArg {
    Unit,
    Poststrat,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    design: DesignArg,
    /// Sample size for head and srs.
    #[arg(short, long)]
    n: Option<usize>,
    /// Per-class target for stratified.
    #[arg(short, long)]
    s: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = WeightArg::Unit)]
    weights: WeightArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum PriorArg {
    /// Weighted class shares of the training sample.
    Sample,
    /// Class shares of the whole input file.
    Population,
}

#[derive(Args)]
struct TreeArgs {
    #[arg(long, default_value_t = TreeParams::default().cp)]
    cp: f64,
    #[arg(long, default_value_t = TreeParams::default().min_split)]
    min_split: usize,
    #[arg(long, default_value_t = TreeParams::default().min_bucket)]
    min_bucket: usize,
    #[arg(long, default_value_t = TreeParams::default().max_depth)]
    max_depth: usize,
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    data: PathBuf,
    /// Sample file (`index,weight`); the whole file is used when absent.
    #[arg(long)]
    sample: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = PriorArg::Sample)]
    priors: PriorArg,
    #[command(flatten)]
    tree: TreeArgs,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    tree: PathBuf,
    #[arg(long)]
    data: PathBuf,
    /// Score only records not in this sample (the training remainder).
    #[arg(long)]
    exclude: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Synth(a) => synth(a)?,
        Command::Sample(a) => sample(a)?,
        Command::Train(a) => train(a)?,
        Command::Eval(a) => eval(a)?,
        Command::Experiment(a) => return experiment(a),
    }
    Ok(ExitCode::SUCCESS)
}

fn synth(a: SynthArgs) -> Result<()> {
    let spec = match &a.spec {
        Some(path) => SynthSpec::load(path)?,
        None => SynthSpec::reference(a.total, a.dimensionality, a.overlap)?,
    };
    if let Some(path) = &a.write_spec {
        std::fs::write(path, spec.to_toml())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let data = synthesize(&spec, a.seed)?;
    save_points(&data, &a.out)?;
    log::info!("wrote {} points to {}", data.len(), a.out.display());
    Ok(())
}

fn sample(a: SampleArgs) -> Result<()> {
    let data = load_points(&a.input, &PointSchema::default())?;
    let need_n = || a.n.context("--n is required for this design");
    let s = match a.design {
        DesignArg::Head => sample_head(&data, need_n()?)?,
        DesignArg::Srs => sample_srs(&data, need_n()?, a.seed)?,
        DesignArg::Stratified => {
            let s = a.s.context("--s is required for the stratified design")?;
            let smp = sample_stratified(&data, s, a.seed)?;
            let hist = data.class_histogram();
            for (name, &n_h) in hist.classes().iter().zip(hist.counts()) {
                if n_h == 1 {
                    log::warn!("class {name:?} has a single point and is never sampled");
                }
            }
            smp
        }
    };
    let s = match a.weights {
        WeightArg::Unit => s,
        WeightArg::Poststrat => {
            let w = post_stratification_weights(&s, data.labels(), &data.class_histogram())?;
            s.with_weights(w.into_inner())?
        }
    };
    save_sample(&s, &a.out)?;
    Ok(())
}

fn train(a: TrainArgs) -> Result<()> {
    let data = load_points(&a.data, &PointSchema::default())?;
    let sample = match &a.sample {
        Some(path) => load_sample(path)?,
        None => Sample::from_indices((0..data.len()).collect(), None)?,
    };
    sample.validate(data.len())?;
    let mut params = TreeParams {
        min_split: a.tree.min_split,
        min_bucket: a.tree.min_bucket,
        max_depth: a.tree.max_depth,
        cp: a.tree.cp,
        priors: None,
    };
    if let PriorArg::Population = a.priors {
        params.priors = Some(population_priors(&data.class_histogram())?);
    }
    let training = data.select(sample.indices());
    let tree = grow_tree(&training, sample.weights(), &params)?;
    let file = File::create(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    let mut w = BufWriter::new(file);
    write_tree(&tree, &mut w)?;
    w.flush()?;
    log::info!("{} nodes, depth {}", tree.n_nodes(), tree.depth());
    Ok(())
}

fn eval(a: EvalArgs) -> Result<()> {
    let tree =
        read_tree(File::open(&a.tree).with_context(|| format!("opening {}", a.tree.display()))?)?;
    let data = load_points(
        &a.data,
        &PointSchema::with_universe(tree.classes().to_vec()),
    )?;
    let data = match &a.exclude {
        Some(path) => split_complement(&data, &load_sample(path)?)?,
        None => data,
    };
    let predicted = predict_batch(&tree, &data)?;
    let m = confusion_matrix(data.labels(), &predicted, tree.classes().len())?;
    match &a.out {
        Some(path) => write_report(&m, tree.classes(), File::create(path)?)?,
        None => write_report(&m, tree.classes(), io::stdout().lock())?,
    }
    Ok(())
}

/// Confusion matrix rows labeled by true class, a blank line, then the metrics.
fn write_report<W: Write>(m: &ConfusionMatrix, classes: &[String], mut out: W) -> Result<()> {
    {
        let mut wtr = csv::Writer::from_writer(&mut out);
        let mut header = vec!["truth".to_string()];
        header.extend(classes.iter().cloned());
        wtr.write_record(&header)?;
        for (i, name) in classes.iter().enumerate() {
            let mut row = vec![name.clone()];
            row.extend(m.row(i).iter().map(u64::to_string));
            wtr.write_record(&row)?;
        }
        wtr.flush()?;
    }
    writeln!(out)?;
    let fmt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    let k = kappa(m).ok();
    if k.is_none() {
        log::warn!("kappa is undefined for this matrix");
    }
    writeln!(out, "mcr_total,mcr_class,kappa")?;
    writeln!(
        out,
        "{},{},{}",
        fmt(mcr_total(m).ok()),
        fmt(mcr_class(m).ok()),
        fmt(k)
    )?;
    Ok(())
}

fn experiment(a: ExperimentArgs) -> Result<ExitCode> {
    let config = ExperimentConfig::load(&a.config)?;
    let result = run_experiment_with_jobs(&config, a.jobs)?;
    emit_results(&result, &a.out)?;
    if let Some(path) = &a.summary {
        emit_summary(&summarize(&result)?, path)?;
    }
    let failed = result.rows.iter().filter(|r| !r.cell.is_ok()).count();
    if failed > 0 {
        eprintln!("{failed} of {} cells failed", result.rows.len());
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

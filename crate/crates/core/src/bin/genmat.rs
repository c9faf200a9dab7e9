use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use genmat::convert::{self, Representation, DEFAULT_DENSE_CAP};
use genmat::datagen::{self, FanoutDistribution, DEFAULT_LAMBDA};
use genmat::io::{self as gio, WeightedTree};
use genmat::release::{self, metrics, Projection, ReleaseOptions, DEFAULT_REFERENCE_CAP};
use genmat::{propagate, ConsistentReleaser, Error, Result};

#[derive(Parser)]
#[command(name = "genmat", version, about = "Consistent differentially private release of hierarchical counts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic tree and Poisson leaf counts.
    Gen(GenArgs),
    /// Add Laplace noise to tree counts and project onto consistent values.
    Release(ReleaseArgs),
    /// Check the consistency bias of a release file.
    Verify(VerifyArgs),
    /// Write the adjacency, Laplacian, distance or ancestral matrix as CSV.
    Convert(ConvertArgs),
    /// Write child counts, subtree sizes and depths per node.
    Props(PropsArgs),
    /// Time matrix construction and projection on complete trees.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Complete,
    Random,
}

#[derive(clap::Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    /// Height of a complete tree.
    #[arg(long, default_value_t = 10)]
    height: u32,
    /// Fan-out of a complete tree.
    #[arg(long, default_value_t = 2)]
    fanout: usize,
    /// Poisson mean of the leaf counts.
    #[arg(long, default_value_t = DEFAULT_LAMBDA)]
    lambda: f64,
    /// Leaf count of a random fan-out tree.
    #[arg(long, default_value_t = 1000)]
    leaves: usize,
    /// Fan-out probabilities for 2, 3, 4, ... (random trees).
    #[arg(long, value_delimiter = ',')]
    proportions: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out_tree: PathBuf,
    #[arg(long)]
    out_counts: PathBuf,
}

#[derive(clap::Args)]
struct ReleaseArgs {
    #[arg(long)]
    tree: PathBuf,
    #[arg(long)]
    counts: PathBuf,
    #[arg(long)]
    epsilon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Release CSV; the summary goes next to it with a .json extension.
    #[arg(long)]
    out: PathBuf,
    /// Use the square-root free solve.
    #[arg(long)]
    no_sqrt: bool,
    /// Compare against the dense normal-equation projection (small trees).
    #[arg(long)]
    oracle: bool,
    /// Also report range-query RMSE over this many sampled ranges.
    #[arg(long)]
    range_queries: Option<usize>,
    #[arg(long, default_value_t = 0)]
    range_seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Column {
    True,
    Noisy,
    Consistent,
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(long)]
    release: PathBuf,
    #[arg(long)]
    tree: PathBuf,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Column::Consistent)]
    column: Column,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Adjacency,
    Laplacian,
    Distance,
    Ancestral,
}

#[derive(clap::Args)]
struct ConvertArgs {
    #[arg(long)]
    tree: PathBuf,
    #[arg(long, value_enum)]
    to: Target,
    #[arg(long)]
    out: PathBuf,
    /// Refuse trees with more nodes than this.
    #[arg(long, default_value_t = DEFAULT_DENSE_CAP)]
    cap: usize,
}

#[derive(clap::Args)]
struct PropsArgs {
    #[arg(long)]
    tree: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args)]
struct BenchArgs {
    #[arg(long, value_enum, default_value_t = Kind::Complete)]
    kind: Kind,
    #[arg(long, value_delimiter = ',', default_value = "16,18,20")]
    heights: Vec<u32>,
    #[arg(long, default_value_t = 1.0)]
    epsilon: f64,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Release(a) => run_release(a),
        Command::Verify(a) => verify(a),
        Command::Convert(a) => run_convert(a),
        Command::Props(a) => props(a),
        Command::Bench(a) => bench(a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn gen(a: GenArgs) -> Result<ExitCode> {
    let g = match a.kind {
        Kind::Complete => datagen::complete_tree(a.height, a.fanout, a.lambda, a.seed)?,
        Kind::Random => {
            let dist = match a.proportions {
                Some(p) => FanoutDistribution::new((2..2 + p.len()).collect(), p)?,
                None => FanoutDistribution::default(),
            };
            datagen::random_fanout_tree(a.leaves, &dist, a.lambda, a.seed)?
        }
    };
    gio::save_counts(&g.tree, &g.counts, &a.out_counts)?;
    let (n, m, h) = (g.tree.len(), g.tree.leaf_count(), g.tree.height());
    gio::save_tree(&WeightedTree::unit(g.tree), &a.out_tree)?;
    println!("nodes={n} leaves={m} height={h}");
    Ok(ExitCode::SUCCESS)
}

fn dense_cap() -> Result<usize> {
    match std::env::var("GENMAT_DENSE_CAP") {
        Ok(v) => v
            .parse()
            .map_err(|_| Error::InvalidParam(format!("GENMAT_DENSE_CAP=`{v}` is not a size"))),
        Err(_) => Ok(DEFAULT_REFERENCE_CAP),
    }
}

fn run_release(a: ReleaseArgs) -> Result<ExitCode> {
    let tree = Arc::new(gio::load_tree(&a.tree)?.tree);
    let counts = gio::load_counts(&a.counts, &tree)?;
    let releaser = ConsistentReleaser::new(tree.clone())?;
    let options = ReleaseOptions {
        projection: if a.no_sqrt { Projection::NoSqrt } else { Projection::Standard },
        range_queries: a.range_queries.map(|q| (q, a.range_seed)),
    };
    let report = release::release_counts(&releaser, &counts, a.epsilon, a.seed, &options)?;
    gio::save_release(&report, &tree, &a.out)?;
    println!(
        "nodes={} bias={:e} rmse_nq={} mse_theory_consistent={}",
        report.n, report.bias, report.rmse_nq, report.mse_theory_consistent
    );
    if let Some(rq) = report.rmse_rq {
        println!("rmse_rq={rq}");
    }
    if a.oracle {
        let cap = dense_cap()?;
        if tree.len() > cap {
            eprintln!("oracle check skipped: {} nodes exceed the dense cap {cap}", tree.len());
        } else {
            let dense = release::dense_projection(releaser.constraint(), &report.v_noisy, cap)?;
            let deviation = max_abs_diff(&dense, &report.v_consistent);
            let scale = 1.0 + report.v_noisy.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            println!("oracle_max_deviation={deviation:e}");
            if deviation > 1e-8 * scale {
                eprintln!("dense projection disagrees by {deviation:e}");
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn verify(a: VerifyArgs) -> Result<ExitCode> {
    let tree = Arc::new(gio::load_tree(&a.tree)?.tree);
    let cols = gio::load_release(&a.release, &tree)?;
    let values = match a.column {
        Column::True => cols.v_true,
        Column::Noisy => cols.v_noisy,
        Column::Consistent => cols.v_consistent,
    };
    let bias = metrics::bias(&values, &release::ConstraintMatrix::new(tree))?;
    println!("bias={bias:e}");
    Ok(if bias <= a.tol { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run_convert(a: ConvertArgs) -> Result<ExitCode> {
    let tree = gio::load_tree(&a.tree)?.tree;
    let to = match a.to {
        Target::Adjacency => Representation::Adjacency,
        Target::Laplacian => Representation::Laplacian,
        Target::Distance => Representation::Distance,
        Target::Ancestral => Representation::Ancestral,
    };
    let matrix = convert::convert(&tree, to, a.cap)?;
    let labels: Vec<String> = match to {
        Representation::Ancestral => tree.leaves().map(|i| tree.label(i).into_owned()).collect(),
        _ => tree.labels().map(|l| l.into_owned()).collect(),
    };
    gio::write_matrix(&matrix, &labels, BufWriter::new(File::create(&a.out)?))?;
    Ok(ExitCode::SUCCESS)
}

fn props(a: PropsArgs) -> Result<ExitCode> {
    let tree = gio::load_tree(&a.tree)?.tree;
    gio::write_properties(
        &tree,
        &propagate::child_counts(&tree),
        &propagate::subtree_sizes(&tree),
        &propagate::depths(&tree),
        BufWriter::new(File::create(&a.out)?),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    xs[xs.len() / 2]
}

fn bench(a: BenchArgs) -> Result<ExitCode> {
    if !matches!(a.kind, Kind::Complete) {
        return Err(Error::InvalidParam("bench supports --kind complete only".into()));
    }
    if a.repeats == 0 {
        return Err(Error::InvalidParam("--repeats must be at least 1".into()));
    }
    let mut out: Box<dyn Write> = match &a.out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    };
    writeln!(out, "height,n,construct_seconds,release_seconds")?;
    for &h in &a.heights {
        let g = datagen::complete_tree(h, 2, DEFAULT_LAMBDA, a.seed)?;
        let tree = Arc::new(g.tree);
        let v = release::build_tree_values(&g.counts.iter().map(|&c| c as f64).collect::<Vec<_>>(), &tree)?;
        let noisy = release::add_laplace_noise(&v, a.epsilon, &tree, a.seed)?;
        let (mut construct, mut project) = (Vec::new(), Vec::new());
        for _ in 0..a.repeats {
            let t0 = Instant::now();
            let releaser = ConsistentReleaser::new(tree.clone())?;
            let t1 = Instant::now();
            let out = releaser.release(&noisy)?;
            let t2 = Instant::now();
            std::hint::black_box(out);
            construct.push((t1 - t0).as_secs_f64());
            project.push((t2 - t1).as_secs_f64());
        }
        writeln!(out, "{h},{},{:.6},{:.6}", tree.len(), median(construct), median(project))?;
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

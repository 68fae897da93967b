use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use boruvka::{generate_graph, save_graph};
use clap::{Args, Parser, Subcommand};
use mstbench::{
    read_rows, run_bench, summarize_speedups, write_rows, Algorithm, BenchError, BenchPlan,
    GraphSource, PRESETS,
};

/// Generate graphs and benchmark the Boruvka MST implementations.
#[derive(Parser)]
#[command(name = "mstbench", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random connected graph with distinct weights to a file.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        avg_degree: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Time the selected algorithms and write one CSV row per trial.
    Run(RunArgs),
    /// Print median speedups from a CSV written by `run`.
    Summarize {
        #[arg(long)]
        csv: PathBuf,
    },
    /// List the built-in graph presets.
    Presets,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("input").required(true))]
struct RunArgs {
    /// Graph file in the `n m` / `src dest weight` text format.
    #[arg(long, group = "input")]
    graph: Option<PathBuf>,
    /// Built-in preset, e.g. Graph1M_9.
    #[arg(long, group = "input")]
    preset: Option<String>,
    #[arg(long, value_delimiter = ',', default_value = "seq,seq-opt,lock,cas")]
    algo: Vec<Algorithm>,
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16")]
    threads: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    /// Untimed runs before each configuration.
    #[arg(long, default_value_t = 1)]
    warmup: usize,
    /// Check every trial against a Kruskal tree.
    #[arg(long)]
    verify: bool,
    /// Use the unhardened lock protocol for `lock`. It is not mutually
    /// exclusive and may produce wrong trees; combine with --verify.
    #[arg(long)]
    faithful_lock: bool,
    #[arg(long)]
    csv: PathBuf,
}

fn run(args: RunArgs) -> Result<(), BenchError> {
    let source = match (args.graph, args.preset) {
        (Some(path), _) => GraphSource::File(path),
        (None, Some(name)) => GraphSource::preset(&name)?,
        (None, None) => unreachable!("clap requires one input"),
    };
    let plan = BenchPlan {
        source,
        algorithms: args.algo,
        thread_counts: args.threads,
        repetitions: args.reps,
        warmup: args.warmup,
        verify: args.verify,
        faithful_lock: args.faithful_lock,
    };
    let hw = std::thread::available_parallelism().map_or(1, |n| n.get());
    println!("hardware threads: {hw}");
    let parallel = plan.algorithms.iter().any(|a| a.is_parallel());
    if let Some(&t) = plan
        .thread_counts
        .iter()
        .filter(|&&t| parallel && t > hw)
        .max()
    {
        println!("note: {t} workers exceed the hardware threads, parallel timings will be oversubscribed");
    }
    let rows = run_bench(&plan)?;
    write_rows(&rows, BufWriter::new(File::create(&args.csv)?))?;
    println!("wrote {} rows to {}", rows.len(), args.csv.display());
    match summarize_speedups(&rows) {
        Ok(summary) => print!("{summary}"),
        Err(BenchError::MissingBaseline { .. }) => {}
        Err(e) => return Err(e),
    }
    Ok(())
}

fn execute(command: Command) -> Result<(), BenchError> {
    match command {
        Command::Generate {
            n,
            avg_degree,
            seed,
            out,
        } => {
            let g = generate_graph(n, avg_degree, seed)?;
            save_graph(&g, &out)?;
            println!("wrote n={} m={} to {}", g.n(), g.m(), out.display());
        }
        Command::Run(args) => run(args)?,
        Command::Summarize { csv } => {
            let rows = read_rows(BufReader::new(File::open(csv)?))?;
            print!("{}", summarize_speedups(&rows)?);
        }
        Command::Presets => {
            for p in PRESETS {
                println!(
                    "{:<12} n={:<8} d={} seed={}",
                    p.name, p.n, p.avg_degree, p.seed
                );
            }
        }
    }
    Ok(())
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
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

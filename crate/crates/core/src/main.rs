use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use holeforge::bench::{run_bench, write_csv};
use holeforge::driver::{base_program, fill_source, FillConfig, TraceKind};
use holeforge::synth::SearchBudget;

#[derive(Parser)]
#[command(name = "holeforge", version, about = "Fill typed holes from types and examples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize candidates for every hole in FILE.
    Fill(FillArgs),
    /// Compare constraint-threaded and naive generation over a corpus.
    Bench(BenchArgs),
}

#[derive(Args)]
struct BudgetArgs {
    /// Maximum nesting of applications.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    depth: Option<u64>,
    /// Maximum nesting of case expressions.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    case_depth: Option<u64>,
    /// Candidates kept per hole.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    max_candidates: Option<u64>,
    /// Evaluation steps per example check.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    fuel: Option<u64>,
    /// Load the bundled prelude (or $HOLEFORGE_PRELUDE) first.
    #[arg(long)]
    prelude: bool,
}

impl BudgetArgs {
    fn budget(&self) -> SearchBudget {
        let mut b = SearchBudget::default();
        if let Some(d) = self.depth {
            b.max_app_depth = d as usize;
        }
        if let Some(d) = self.case_depth {
            b.max_case_depth = d as usize;
        }
        if let Some(n) = self.max_candidates {
            b.max_candidates = n as usize;
        }
        if let Some(f) = self.fuel {
            b.fuel = f;
        }
        b
    }
}

#[derive(Args)]
struct FillArgs {
    file: PathBuf,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
    /// Print applied synthesis rules to stderr.
    #[arg(long, group = "trace")]
    trace_synth: bool,
    /// Print hole types, locals and constraints to stderr.
    #[arg(long, group = "trace")]
    trace_types: bool,
    /// Print per-row example verdicts to stderr.
    #[arg(long, group = "trace")]
    trace_eval: bool,
    /// Run goals one after another (the default).
    #[arg(long, conflicts_with = "parallel_goals")]
    seq: bool,
    /// Run goals concurrently; output order is unchanged.
    #[arg(long)]
    parallel_goals: bool,
}

#[derive(Args)]
struct BenchArgs {
    dir: PathBuf,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn fill(args: FillArgs) -> u8 {
    let name = args.file.display().to_string();
    let src = match std::fs::read_to_string(&args.file) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{name}: {e}");
            return 1;
        }
    };
    let base = match base_program(args.budget.prelude) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{e}");
            return 1;
        }
    };
    let trace = if args.trace_synth {
        TraceKind::Synth
    } else if args.trace_types {
        TraceKind::Types
    } else if args.trace_eval {
        TraceKind::Eval
    } else {
        TraceKind::Off
    };
    let cfg = FillConfig {
        budget: args.budget.budget(),
        trace,
        parallel_goals: args.parallel_goals && !args.seq,
        ..FillConfig::default()
    };
    let report = match fill_source(&base, &src, &cfg) {
        Ok(r) => r,
        Err(d) => {
            eprintln!("{}", d.render(&name));
            return 1;
        }
    };
    for g in &report.goals {
        for line in &g.trace {
            eprintln!("{}: {line}", g.name);
        }
    }
    if args.json {
        match serde_json::to_string_pretty(&report.to_json()) {
            Ok(s) => println!("{s}"),
            Err(e) => {
                eprintln!("{e}");
                return 1;
            }
        }
    } else {
        print!("{}", report.render_text());
    }
    report.exit_code() as u8
}

fn bench(args: BenchArgs) -> u8 {
    let base = match base_program(args.budget.prelude) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{e}");
            return 1;
        }
    };
    let outcome = match run_bench(&args.dir, &base, &args.budget.budget()) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("{e}");
            return 1;
        }
    };
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    let written = match &args.csv {
        Some(path) => std::fs::File::create(path)
            .map_err(|e| e.to_string())
            .and_then(|f| write_csv(&outcome.rows, f).map_err(|e| e.to_string())),
        None => write_csv(&outcome.rows, std::io::stdout().lock()).map_err(|e| e.to_string()),
    };
    match written {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            1
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let code = match cli.command {
        Command::Fill(a) => fill(a),
        Command::Bench(a) => bench(a),
    };
    ExitCode::from(code)
}

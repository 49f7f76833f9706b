use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use structcsp::generate::GenParams;
use structcsp::model::CostMonoid;
use structcsp::reduce::DEFAULT_TUPLE_BUDGET;
use structcsp_cli::{
    exit_code, run_bench, run_check, run_convert, run_decompose, run_generate, run_oracle,
    run_solve, ConvertMode, Family, GenerateOptions, GraphKind, OracleOp, SolveMode, SolveOptions,
    WeightsKind,
};

/// Structural decomposition toolkit for constraint optimization.
#[derive(Parser)]
#[command(name = "structcsp", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an instance and report acyclicity and width bounds.
    Check {
        instance: PathBuf,
        #[arg(long)]
        allow_reserved: bool,
    },
    /// Compute a decomposition and write it beside the instance.
    Decompose {
        instance: PathBuf,
        /// Graph to decompose.
        #[arg(long, value_enum, default_value_t = GraphArg::Primal)]
        graph: GraphArg,
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[arg(long)]
        allow_reserved: bool,
    },
    /// Compute an optimal solution.
    Solve {
        instance: PathBuf,
        #[command(flatten)]
        solve: SolveArgs,
        /// Also enumerate solutions, one JSON object per line.
        #[arg(long)]
        enumerate: bool,
        /// Stop enumeration after this many solutions.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Rewrite an instance and write the result plus its back-map.
    Convert {
        instance: PathBuf,
        #[arg(long, value_enum)]
        mode: ConvertArg,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Brute-force reference answers.
    Oracle {
        instance: PathBuf,
        #[arg(long, value_enum)]
        op: OracleArg,
        #[arg(long, value_parser = parse_monoid, default_value = "sum")]
        monoid: CostMonoid,
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long)]
        allow_reserved: bool,
    },
    /// Emit a deterministic random instance.
    Generate {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Chain length (chain family).
        #[arg(long, default_value_t = 3)]
        length: usize,
        #[arg(long, default_value_t = 5)]
        variables: usize,
        #[arg(long, default_value_t = 3)]
        domain_size: usize,
        #[arg(long, default_value_t = 4)]
        constraints: usize,
        #[arg(long, default_value_t = 3)]
        arity: usize,
        /// Percentage of candidate tuples kept per relation.
        #[arg(long, default_value_t = 50)]
        density: u32,
        /// Skip planting a guaranteed solution.
        #[arg(long)]
        no_plant: bool,
        #[arg(long, value_enum, default_value_t = WeightsArg::None)]
        weights: WeightsArg,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Time the solve pipeline over chain sizes; CSV on stdout.
    Bench {
        /// Comma-separated chain lengths.
        #[arg(long, value_delimiter = ',', default_values_t = vec![5000usize, 10000])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        repeat: usize,
        #[arg(long, default_value_t = 6)]
        domain_size: usize,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// Decomposition file (`.ghd.json`); computed heuristically if absent.
    #[arg(long)]
    decomposition: Option<PathBuf>,
    /// Tuple budget for rewritings; also via STRUCTCSP_BUDGET.
    #[arg(long, env = "STRUCTCSP_BUDGET", default_value_t = DEFAULT_TUPLE_BUDGET)]
    budget: u64,
    #[arg(long)]
    allow_reserved: bool,
    /// Do not read or write cached decompositions beside the instance.
    #[arg(long)]
    no_cache: bool,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Csop)]
    mode: ModeArg,
    #[arg(long, value_parser = parse_monoid, default_value = "sum")]
    monoid: CostMonoid,
    #[command(flatten)]
    common: CommonArgs,
}

fn parse_monoid(s: &str) -> Result<CostMonoid, String> {
    s.parse().map_err(|e: structcsp::Error| e.to_string())
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphArg {
    Primal,
    Incidence,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Csop,
    Wcsp,
    Maxcsp,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConvertArg {
    Td,
    Ghd,
    Wcsp,
    Maxcsp,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleArg {
    Solutions,
    Optimal,
    MinViolation,
    JoinTree,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Chain,
    Acyclic,
    TriangleCore,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightsArg {
    None,
    Unary,
    Tuple,
}

fn common_options(args: &CommonArgs) -> SolveOptions {
    SolveOptions {
        decomposition: args.decomposition.clone(),
        budget: args.budget,
        allow_reserved: args.allow_reserved,
        use_cache: !args.no_cache,
        ..SolveOptions::default()
    }
}

fn solve_options(args: &SolveArgs, enumerate: bool, limit: Option<usize>) -> SolveOptions {
    SolveOptions {
        mode: match args.mode {
            ModeArg::Csop => SolveMode::Csop,
            ModeArg::Wcsp => SolveMode::Wcsp,
            ModeArg::Maxcsp => SolveMode::MaxCsp,
        },
        monoid: args.monoid,
        enumerate,
        limit,
        ..common_options(&args.common)
    }
}

fn main() -> ExitCode {
    // Die quietly on a closed pipe, like other line-oriented tools.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }

    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check {
            instance,
            allow_reserved,
        } => run_check(&instance, allow_reserved),
        Command::Decompose {
            instance,
            graph,
            output,
            allow_reserved,
        } => run_decompose(
            &instance,
            match graph {
                GraphArg::Primal => GraphKind::Primal,
                GraphArg::Incidence => GraphKind::Incidence,
            },
            output.as_deref(),
            allow_reserved,
        ),
        Command::Solve {
            instance,
            solve,
            enumerate,
            limit,
        } => {
            let options = solve_options(&solve, enumerate, limit);
            run_solve(&instance, &options).map(|(outcome, report)| {
                eprintln!("{}", report.to_json());
                outcome
            })
        }
        Command::Convert {
            instance,
            mode,
            common,
            output,
        } => {
            let options = common_options(&common);
            run_convert(
                &instance,
                match mode {
                    ConvertArg::Td => ConvertMode::Td,
                    ConvertArg::Ghd => ConvertMode::Ghd,
                    ConvertArg::Wcsp => ConvertMode::Wcsp,
                    ConvertArg::Maxcsp => ConvertMode::MaxCsp,
                },
                &options,
                output.as_deref(),
            )
        }
        Command::Oracle {
            instance,
            op,
            monoid,
            limit,
            allow_reserved,
        } => run_oracle(
            &instance,
            match op {
                OracleArg::Solutions => OracleOp::Solutions,
                OracleArg::Optimal => OracleOp::Optimal,
                OracleArg::MinViolation => OracleOp::MinViolation,
                OracleArg::JoinTree => OracleOp::JoinTree,
            },
            &monoid,
            limit,
            allow_reserved,
        ),
        Command::Generate {
            family,
            seed,
            length,
            variables,
            domain_size,
            constraints,
            arity,
            density,
            no_plant,
            weights,
            output,
        } => run_generate(&GenerateOptions {
            family: match family {
                FamilyArg::Chain => Family::Chain,
                FamilyArg::Acyclic => Family::Acyclic,
                FamilyArg::TriangleCore => Family::TriangleCore,
                FamilyArg::Random => Family::Random,
            },
            seed,
            length,
            params: GenParams {
                variables,
                domain_size,
                constraints,
                max_arity: arity,
                density_percent: density,
                plant_solution: !no_plant,
            },
            weights: match weights {
                WeightsArg::None => WeightsKind::None,
                WeightsArg::Unary => WeightsKind::Unary,
                WeightsArg::Tuple => WeightsKind::Tuple,
            },
            output,
        }),
        Command::Bench {
            sizes,
            repeat,
            domain_size,
        } => run_bench(&sizes, repeat, domain_size),
    };

    match result {
        Ok(outcome) => ExitCode::from(outcome.code() as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err) as u8)
        }
    }
}

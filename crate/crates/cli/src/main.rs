//! Command-line front end: solve, evaluate, compare, oracle, gen.
//!
//! Exit codes are the same for every subcommand: 0 for success with a
//! feasible result, 1 for input or usage errors, 2 for a run that completed
//! but ended on an infeasible plan. All randomness flows from `--seed`;
//! identical invocations produce identical bytes.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use freshroute_core::evaluator::propagate_times;
use freshroute_core::generator::{generate, GenParams};
use freshroute_core::io::{emit_instance, emit_plan, parse_instance, parse_plan};
use freshroute_core::model::{Instance, RoutePlan};
use freshroute_core::oracle::enumerate_optimum;
use freshroute_core::report::{
    breakdown_csv, breakdown_text, export_route_geometry, render_comparison, trace_csv,
};
use freshroute_core::solver::{solve, GaConfig, SolveReport};

const EXIT_OK: u8 = 0;
const EXIT_INPUT: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "freshroute",
    version,
    about = "Delivery-route optimization toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the genetic solver on an instance and write plan, trace and
    /// summary files
    Solve(SolveArgs),
    /// Price a plan file against an instance
    Evaluate(EvaluateArgs),
    /// Compare two plans on the same instance
    Compare(CompareArgs),
    /// Enumerate every plan of a small instance and report the exact optimum
    Oracle(OracleArgs),
    /// Generate a random instance file
    Gen(GenArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file
    #[arg(short, long)]
    instance: PathBuf,
    /// Base RNG seed; restart r uses seed + r
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Breeding iterations
    #[arg(long, default_value_t = 100)]
    generations: usize,
    /// Population size
    #[arg(long, default_value_t = 10)]
    population: usize,
    /// Crossover probability
    #[arg(long, default_value_t = 0.7)]
    pc: f64,
    /// Mutation probability
    #[arg(long, default_value_t = 0.1)]
    pm: f64,
    /// Inversion probability
    #[arg(long, default_value_t = 0.1)]
    inversion: f64,
    /// Stop after this many generations without improvement
    #[arg(long, default_value_t = 50)]
    stall: usize,
    /// Independent seeded runs; the cheapest result is kept
    #[arg(long, default_value_t = 1)]
    restarts: u64,
    /// Where to write the best plan (default: instance path + .best.plan)
    #[arg(long)]
    out_plan: Option<PathBuf>,
    /// Where to write the convergence trace CSV
    #[arg(long)]
    out_trace: Option<PathBuf>,
    /// Where to write the cost summary
    #[arg(long)]
    out_summary: Option<PathBuf>,
    /// Also draw the best plan as SVG (needs a COORDS section)
    #[arg(long)]
    out_svg: Option<PathBuf>,
    /// Summary format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Print solver progress details
    #[arg(short, long)]
    verbose: bool,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(short, long)]
    instance: PathBuf,
    /// Plan file to price
    #[arg(short, long)]
    plan: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the per-stop schedule as CSV
    #[arg(long)]
    out_stops: Option<PathBuf>,
    /// Draw the plan as SVG (needs a COORDS section)
    #[arg(long)]
    out_svg: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(short, long)]
    instance: PathBuf,
    /// First plan (the baseline)
    #[arg(long)]
    plan_a: PathBuf,
    /// Second plan
    #[arg(long)]
    plan_b: PathBuf,
    /// Also write the comparison as CSV
    #[arg(long)]
    out_csv: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(short, long)]
    instance: PathBuf,
    /// Refuse instances with more plans than this
    #[arg(long, default_value_t = 10_000_000)]
    limit: u64,
    /// Where to write the optimum plan
    #[arg(long)]
    out_plan: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// Number of stores
    #[arg(long)]
    stores: usize,
    /// Number of vehicles
    #[arg(long, default_value_t = 2)]
    vehicles: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Window tightness in (0, 1]; higher means tighter windows
    #[arg(long, default_value_t = 0.5)]
    tightness: f64,
    /// Side of the square area the nodes are scattered over, km
    #[arg(long, default_value_t = 25.0)]
    area: f64,
    /// Output instance file
    #[arg(short, long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Keep exit codes stable: help/version are successes, anything
            // else is a usage error (clap itself would exit with 2).
            let _ = err.print();
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::from(EXIT_OK),
                _ => ExitCode::from(EXIT_INPUT),
            };
        }
    };
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Gen(args) => cmd_gen(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn load_instance(path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read instance file {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("cannot parse {}", path.display()))
}

fn load_plan(path: &Path, instance: &Instance) -> Result<RoutePlan> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read plan file {}", path.display()))?;
    parse_plan(&text, instance).with_context(|| format!("cannot parse {}", path.display()))
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content).with_context(|| format!("cannot write {}", path.display()))
}

fn derived_path(base: &Path, suffix: &str) -> PathBuf {
    let mut name = base.file_name().unwrap_or_default().to_os_string();
    name.push(suffix);
    base.with_file_name(name)
}

fn print_routes(routes: &[Vec<usize>]) {
    for (v, route) in routes.iter().enumerate() {
        let stops: Vec<String> = route.iter().map(|id| id.to_string()).collect();
        println!(
            "vehicle {}: {}",
            v + 1,
            if stops.is_empty() {
                "-".to_string()
            } else {
                stops.join(" ")
            }
        );
    }
}

/// Writes the SVG drawing of a plan, or explains why it cannot be drawn.
fn maybe_write_svg(instance: &Instance, plan: &RoutePlan, path: &Path) -> Result<()> {
    let timelines: Vec<_> = plan
        .routes
        .iter()
        .map(|r| propagate_times(instance, r))
        .collect();
    match export_route_geometry(instance, plan, &timelines).svg {
        Some(svg) => {
            write_file(path, &svg)?;
            println!("wrote {}", path.display());
        }
        None => eprintln!("instance has no COORDS section; geometry refused"),
    }
    Ok(())
}

fn cmd_solve(args: SolveArgs) -> Result<u8> {
    let instance = load_instance(&args.instance)?;
    if args.restarts == 0 {
        return Err(anyhow!("--restarts must be at least 1"));
    }

    let config = GaConfig {
        population_size: args.population,
        crossover_rate: args.pc,
        mutation_rate: args.pm,
        inversion_rate: args.inversion,
        max_generations: args.generations,
        stall_generations: args.stall,
        rng_seed: args.seed,
        elitism_count: 1,
    };

    // Independent restarts run concurrently; results are merged in seed
    // order so the outcome never depends on thread timing.
    let reports: Vec<SolveReport> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..args.restarts)
            .map(|r| {
                let config = GaConfig {
                    rng_seed: args.seed + r,
                    ..config.clone()
                };
                let instance = &instance;
                scope.spawn(move || solve(instance, &config))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("solver thread panicked"))
            .collect::<Vec<_>>()
    })
    .into_iter()
    .collect::<Result<_, _>>()?;

    let best = reports
        .iter()
        .min_by(|a, b| {
            (!a.best_cost.feasible, a.best_cost.total)
                .partial_cmp(&(!b.best_cost.feasible, b.best_cost.total))
                .expect("costs are finite")
        })
        .expect("at least one restart");

    let plan_path = args
        .out_plan
        .unwrap_or_else(|| derived_path(&args.instance, ".best.plan"));
    let trace_path = args
        .out_trace
        .unwrap_or_else(|| derived_path(&args.instance, ".trace.csv"));
    let summary_ext = match args.format {
        Format::Text => ".summary.txt",
        Format::Csv => ".summary.csv",
    };
    let summary_path = args
        .out_summary
        .unwrap_or_else(|| derived_path(&args.instance, summary_ext));

    write_file(&plan_path, &emit_plan(&best.best_plan))?;
    write_file(&trace_path, &trace_csv(best))?;
    let summary = match args.format {
        Format::Text => breakdown_text(&instance, &best.best_plan, &best.best_cost),
        Format::Csv => breakdown_csv(&best.best_cost),
    };
    write_file(&summary_path, &summary)?;

    if args.verbose {
        println!(
            "instance {} ({} stores, {} vehicles)",
            instance.name,
            instance.store_count(),
            instance.fleet.vehicle_count
        );
        for (r, report) in reports.iter().enumerate() {
            println!(
                "seed {}: total {:.1}, converged at generation {}, ran {} generations",
                args.seed + r as u64,
                report.best_cost.total,
                report.converged_at,
                report.generations_run
            );
        }
    }

    print_routes(&best.best_plan.routes);
    println!(
        "total cost {:.1} {} ({})",
        best.best_cost.total,
        instance.currency,
        if best.best_cost.feasible {
            "feasible"
        } else {
            "INFEASIBLE"
        }
    );
    if let Some(svg_path) = &args.out_svg {
        maybe_write_svg(&instance, &best.best_plan, svg_path)?;
    }
    println!(
        "wrote {} {} {}",
        plan_path.display(),
        trace_path.display(),
        summary_path.display()
    );

    Ok(if best.best_cost.feasible {
        EXIT_OK
    } else {
        EXIT_INFEASIBLE
    })
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<u8> {
    let instance = load_instance(&args.instance)?;
    let plan = load_plan(&args.plan, &instance)?;

    // An incomplete or duplicated visit assignment is an input error, not a
    // priceable plan.
    let structural: Vec<String> = freshroute_core::check_constraints(&instance, &plan)
        .iter()
        .filter(|v| v.is_structural())
        .map(|v| v.to_string())
        .collect();
    if !structural.is_empty() {
        return Err(anyhow!(
            "plan is not a valid visit assignment:\n{}",
            structural.join("\n")
        ));
    }

    let cost = freshroute_core::evaluate(&instance, &plan);
    match args.format {
        Format::Text => print!("{}", breakdown_text(&instance, &plan, &cost)),
        Format::Csv => print!("{}", breakdown_csv(&cost)),
    }

    if let Some(stops_path) = &args.out_stops {
        let timelines: Vec<_> = plan
            .routes
            .iter()
            .map(|r| propagate_times(&instance, r))
            .collect();
        let geometry = export_route_geometry(&instance, &plan, &timelines);
        write_file(stops_path, &geometry.stops_csv)?;
        println!("wrote {}", stops_path.display());
    }
    if let Some(svg_path) = &args.out_svg {
        maybe_write_svg(&instance, &plan, svg_path)?;
    }

    Ok(if cost.feasible {
        EXIT_OK
    } else {
        EXIT_INFEASIBLE
    })
}

fn cmd_compare(args: CompareArgs) -> Result<u8> {
    let instance = load_instance(&args.instance)?;
    let plan_a = load_plan(&args.plan_a, &instance)?;
    let plan_b = load_plan(&args.plan_b, &instance)?;
    for (label, plan) in [("A", &plan_a), ("B", &plan_b)] {
        let structural: Vec<String> = freshroute_core::check_constraints(&instance, plan)
            .iter()
            .filter(|v| v.is_structural())
            .map(|v| v.to_string())
            .collect();
        if !structural.is_empty() {
            return Err(anyhow!(
                "plan {label} is not a valid visit assignment:\n{}",
                structural.join("\n")
            ));
        }
    }

    let comparison = render_comparison(&instance, &plan_a, &plan_b);
    print!("{}", comparison.text);
    if let Some(path) = args.out_csv {
        write_file(&path, &comparison.csv)?;
        println!("wrote {}", path.display());
    }
    Ok(EXIT_OK)
}

fn cmd_oracle(args: OracleArgs) -> Result<u8> {
    let instance = load_instance(&args.instance)?;
    let result = enumerate_optimum(&instance, args.limit)?;

    println!("plans enumerated: {}", result.plans_enumerated);
    print_routes(&result.optimum_plan.routes);
    println!(
        "optimum cost {:.1} {} ({})",
        result.optimum_cost.total,
        instance.currency,
        if result.optimum_is_feasible {
            "feasible"
        } else {
            "INFEASIBLE"
        }
    );
    if let Some(path) = args.out_plan {
        write_file(&path, &emit_plan(&result.optimum_plan))?;
        println!("wrote {}", path.display());
    }
    Ok(if result.optimum_is_feasible {
        EXIT_OK
    } else {
        EXIT_INFEASIBLE
    })
}

fn cmd_gen(args: GenArgs) -> Result<u8> {
    let params = GenParams {
        store_count: args.stores,
        vehicle_count: args.vehicles,
        seed: args.seed,
        window_tightness: args.tightness,
        area_km: args.area,
    };
    let instance = generate(&params)?;
    write_file(&args.out, &emit_instance(&instance))?;
    println!(
        "wrote {} ({} stores, {} vehicles, seed {})",
        args.out.display(),
        args.stores,
        args.vehicles,
        args.seed
    );
    Ok(EXIT_OK)
}

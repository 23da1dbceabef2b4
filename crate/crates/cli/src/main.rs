//! `paracut`: parametric global minimum cuts from the command line.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use paracut::{
    approx_cuts, lower_envelope, megiddo_maximize, megiddo_next_breakpoint, oracle_envelope, oracle_pmax, oracle_pnb, parse_graph,
    pmax::check_domain, pmax_newton, pmax_scaling_1d_traced, pnb_deterministic, pnb_randomized, pnb_via_pmax, ray_envelope_to,
    run_bench, sw_mincut, ApproxMode, BenchAlgorithm, BenchConfig, BreakpointResult, Cut, CutCatalog, Error, MaxResult, ParamGraph,
    PiecewiseLinearConcave, Rational, RayGraph, RayProblem,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "paracut", version, about = "Exact parametric global minimum cuts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimum cut at a parameter point.
    Mincut {
        file: PathBuf,
        /// Comma-separated rationals, one per parameter.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long, value_enum, default_value_t = MincutAlg::Sw)]
        algorithm: MincutAlg,
    },
    /// Z at a parameter point, and optionally the cost of one cut.
    Eval {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        /// Vertices (1-based, comma-separated) on one side of the cut.
        #[arg(long)]
        cut: Option<String>,
    },
    /// First breakpoint of Z after `--from` in direction `--dir`.
    NextBreakpoint {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        /// Comma-separated integers.
        #[arg(long, allow_hyphen_values = true)]
        dir: String,
        #[arg(long, value_enum, default_value_t = NbAlg::Det)]
        algorithm: NbAlg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "1/100")]
        eta: String,
    },
    /// Maximize Z on the segment `from + λ·dir`, `λ ∈ [lo, hi]`.
    Maximize {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        dir: String,
        #[arg(long, allow_hyphen_values = true)]
        lo: String,
        #[arg(long, allow_hyphen_values = true)]
        hi: String,
        #[arg(long, value_enum, default_value_t = MaxAlg::Newton)]
        algorithm: MaxAlg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Z along a segment, as exact pieces or sampled CSV.
    Envelope {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        dir: String,
        #[arg(long, allow_hyphen_values = true)]
        lo: String,
        #[arg(long, allow_hyphen_values = true)]
        hi: String,
        #[arg(long, value_enum, default_value_t = EnvAlg::Det)]
        algorithm: EnvAlg,
        #[arg(long, default_value_t = 101)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// All cuts within a factor `alpha` of the minimum at a point.
    ApproxCuts {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long)]
        alpha: String,
        /// Defaults to bruteforce up to the oracle size cap.
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Time the solvers on generated instances; prints CSV.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [50, 100, 200])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        edges_per_vertex: usize,
        #[arg(long, default_value_t = 1)]
        instances: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Any of nb-det, nb-rand, nb-newton, nb-megiddo, max-newton,
        /// max-scaling, max-megiddo.
        #[arg(long, value_delimiter = ',', default_values = ["nb-det", "nb-megiddo"])]
        algorithms: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MincutAlg {
    Sw,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum NbAlg {
    Det,
    Rand,
    Newton,
    Megiddo,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum MaxAlg {
    Newton,
    Scaling,
    Megiddo,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum EnvAlg {
    Det,
    Oracle,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Bruteforce,
    Randomized,
}

enum Failure {
    Core(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> Outcome<T> {
    Err(Failure::Usage(msg.into()))
}

fn load(path: &PathBuf) -> Outcome<ParamGraph> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(parse_graph(&text)?)
}

fn rational(s: &str) -> Outcome<Rational> {
    Ok(s.parse::<Rational>().map_err(Error::from)?)
}

fn rationals(s: &str) -> Outcome<Vec<Rational>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(rational).collect()
}

fn integers(s: &str) -> Outcome<Vec<i64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .replace('\u{2212}', "-")
                .parse::<i64>()
                .map_err(|_| Failure::Usage(format!("direction entries must be integers, got `{t}`")))
        })
        .collect()
}

fn ray_of(g: &ParamGraph, from: &str, dir: &str) -> Outcome<RayGraph> {
    let mu0 = rationals(from)?;
    let nu = integers(dir)?;
    if nu.iter().all(|&x| x == 0) {
        return usage("direction must be nonzero");
    }
    Ok(g.restrict_to_ray(&mu0, &nu)?)
}

fn mincut(g: &ParamGraph, at: &str, alg: MincutAlg) -> Outcome<Value> {
    let mu = rationals(at)?;
    let (cut, value) = match alg {
        MincutAlg::Sw => sw_mincut(g, &mu)?,
        MincutAlg::Oracle => {
            let ray = g.restrict_to_ray(&mu, &vec![0; g.dim()])?;
            let catalog = CutCatalog::build(&ray)?;
            let zero = Rational::zero();
            let value = catalog.min_at(&zero);
            (catalog.attaining(&zero, &value).remove(0), value)
        }
    };
    Ok(json!({ "value": value, "cut": cut }))
}

fn eval(g: &ParamGraph, at: &str, cut: Option<&str>) -> Outcome<Value> {
    let mu = rationals(at)?;
    let (_, z) = sw_mincut(g, &mu)?;
    let mut out = json!({ "at": mu, "z": z });
    if let Some(side) = cut {
        let vertices = integers(side)?;
        let mut zero_based = Vec::with_capacity(vertices.len());
        for v in vertices {
            if v < 1 || v as usize > g.n_original() {
                return Err(Error::VertexOutOfRange {
                    vertex: v.max(0) as usize,
                    n: g.n_original(),
                }
                .into());
            }
            zero_based.push(v as usize - 1);
        }
        let c = Cut::new(g.n_original(), zero_based)?;
        out["cut"] = json!(c);
        out["cut_cost"] = json!(g.cut_cost_at(&c, &mu)?);
    }
    Ok(out)
}

fn breakpoint_json(r: &BreakpointResult, alg: &str, trials: Option<u64>) -> Value {
    json!({
        "found": r.is_found(),
        "lambda_nb": r.lambda_nb,
        "mu_nb": r.mu_nb,
        "witness_cut": r.witness,
        "slope_before": r.slope_before,
        "slope_after": r.slope_after,
        "algorithm": alg,
        "trials": trials,
    })
}

fn next_breakpoint(g: &ParamGraph, from: &str, dir: &str, alg: NbAlg, seed: u64, eta: &str) -> Outcome<Value> {
    let p = RayProblem::new(ray_of(g, from, dir)?, None)?;
    Ok(match alg {
        NbAlg::Det => breakpoint_json(&pnb_deterministic(&p)?, "det", None),
        NbAlg::Rand => {
            let r = pnb_randomized(&p, seed, &rational(eta)?)?;
            breakpoint_json(&r, "rand", Some(r.trials))
        }
        NbAlg::Newton => breakpoint_json(&pnb_via_pmax(&p)?, "newton", None),
        NbAlg::Megiddo => breakpoint_json(&megiddo_next_breakpoint(&p)?, "megiddo", None),
        NbAlg::Oracle => breakpoint_json(&oracle_pnb(&p)?, "oracle", None),
    })
}

fn maximize(g: &ParamGraph, from: &str, dir: &str, lo: &str, hi: &str, alg: MaxAlg, seed: u64) -> Outcome<Value> {
    let ray = ray_of(g, from, dir)?;
    let (lo, hi) = (rational(lo)?, rational(hi)?);
    let r: MaxResult = match alg {
        MaxAlg::Newton => pmax_newton(&ray, &lo, &hi)?,
        MaxAlg::Scaling => pmax_scaling_1d_traced(&ray, &lo, &hi, seed)?.0,
        MaxAlg::Megiddo => megiddo_maximize(&ray, &lo, &hi)?,
        MaxAlg::Oracle => oracle_pmax(&ray, &lo, &hi)?,
    };
    Ok(serde_json::to_value(&r).expect("serializable"))
}

/// Exact envelope of `Z` on `[lo, hi]` along the ray.
fn envelope_of(ray: &RayGraph, lo: &Rational, hi: &Rational, alg: EnvAlg) -> Outcome<PiecewiseLinearConcave> {
    check_domain(ray, lo, hi)?;
    Ok(match alg {
        EnvAlg::Oracle => oracle_envelope(ray, lo, hi)?,
        EnvAlg::Det => {
            let width = hi - lo;
            let p = RayProblem::new(ray.shifted(lo), Some(width.clone()))?;
            let local = ray_envelope_to(&p, &width)?;
            let back = -lo.clone();
            let lines: Vec<_> = local.pieces().iter().map(|piece| piece.line.shifted(&back)).collect();
            lower_envelope(&lines, lo, hi)?
        }
    })
}

fn approx(g: &ParamGraph, at: &str, alpha: &str, mode: Option<Mode>, seed: u64) -> Outcome<Value> {
    let mu = rationals(at)?;
    let mode = match mode {
        Some(Mode::Bruteforce) => ApproxMode::Bruteforce,
        Some(Mode::Randomized) => ApproxMode::Randomized,
        None => ApproxMode::for_size(g.live_vertices().len()),
    };
    let cuts = approx_cuts(g, &mu, &rational(alpha)?, seed, mode)?;
    Ok(Value::Array(cuts.iter().map(|(c, v)| json!({ "cut": c, "cost": v })).collect()))
}

fn bench(sizes: Vec<usize>, edges_per_vertex: usize, instances: usize, seed: u64, names: &[String], format: Format) -> Outcome<String> {
    if format != Format::Csv {
        return usage("bench only writes CSV");
    }
    let mut algorithms = Vec::new();
    for name in names {
        match BenchAlgorithm::from_name(name.trim()) {
            Some(a) => algorithms.push(a),
            None => return usage(format!("unknown bench algorithm `{name}`")),
        }
    }
    if sizes.iter().any(|&n| n < 2) {
        return usage("bench sizes must be at least 2");
    }
    let cfg = BenchConfig {
        sizes,
        edges_per_vertex,
        instances,
        seed,
        algorithms,
        ..BenchConfig::default()
    };
    Ok(run_bench(&cfg)?.to_csv())
}

fn pretty(v: Value) -> String {
    serde_json::to_string_pretty(&v).expect("serializable") + "\n"
}

fn run(cli: Cli) -> Outcome<String> {
    match cli.command {
        Command::Mincut { file, at, algorithm } => mincut(&load(&file)?, &at, algorithm).map(pretty),
        Command::Eval { file, at, cut } => eval(&load(&file)?, &at, cut.as_deref()).map(pretty),
        Command::NextBreakpoint {
            file,
            from,
            dir,
            algorithm,
            seed,
            eta,
        } => next_breakpoint(&load(&file)?, &from, &dir, algorithm, seed, &eta).map(pretty),
        Command::Maximize {
            file,
            from,
            dir,
            lo,
            hi,
            algorithm,
            seed,
        } => maximize(&load(&file)?, &from, &dir, &lo, &hi, algorithm, seed).map(pretty),
        Command::Envelope {
            file,
            from,
            dir,
            lo,
            hi,
            algorithm,
            samples,
            format,
        } => {
            let ray = ray_of(&load(&file)?, &from, &dir)?;
            let env = envelope_of(&ray, &rational(&lo)?, &rational(&hi)?, algorithm)?;
            Ok(match format {
                Format::Json => pretty(serde_json::to_value(&env).expect("serializable")),
                Format::Csv => env.sample_csv(samples),
            })
        }
        Command::ApproxCuts { file, at, alpha, mode, seed } => approx(&load(&file)?, &at, &alpha, mode, seed).map(pretty),
        Command::Bench {
            sizes,
            edges_per_vertex,
            instances,
            seed,
            algorithms,
            format,
        } => bench(sizes, edges_per_vertex, instances, seed, &algorithms, format),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

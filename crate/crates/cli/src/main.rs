//! Command-line front end.
//!
//! Exit codes: 0 success, 2 invalid input, 3 refused for exceeding a cap or
//! budget, 1 anything else.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use infcount::alignment::{self, ScoringParams};
use infcount::counting;
use infcount::inference::{self, DEFAULT_OBSERVATION_CAP};
use infcount::model::{self, parse_rational, FactorModel, HmmTables, ParameterPoint};
use infcount::polytope::bounds;
use infcount::records::Record;
use infcount::svg::polygon_svg;
use infcount::{Error, Rational};

#[derive(Parser)]
#[command(name = "infcount", version, about = "Count and evaluate inference functions of graphical models exactly")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a model and print its JSON.
    Model {
        #[command(subcommand)]
        action: ModelAction,
    },
    /// Best explanation of one observation.
    Viterbi {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        obs: String,
        /// Comma-separated log-parameters, each `p/q` or an integer.
        #[arg(long, allow_hyphen_values = true)]
        logparams: String,
    },
    /// Newton polytope of one observation, with witnesses.
    Np {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        obs: String,
    },
    /// Count inference functions (exactly, or a sampled lower bound).
    Count {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Write the summed polytope in vertex-list format.
        #[arg(long)]
        emit_polytope: Option<PathBuf>,
        /// Refuse models with more observations than this.
        #[arg(long, default_value_t = DEFAULT_OBSERVATION_CAP)]
        cap: u128,
        /// Sample this many random parameter points instead of counting.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Upper bounds on the number of vertices / inference functions.
    Bound {
        /// Number of non-parallel edge directions.
        #[arg(long)]
        m: Option<u64>,
        /// Model complexity.
        #[arg(long = "M")]
        big_m: u64,
        #[arg(long)]
        d: u64,
    },
    /// Chambers of the lower-bound hyperplane arrangement.
    Arrangement {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: u64,
        /// Also compute the maximum number of extreme rays per chamber.
        #[arg(long)]
        rays: bool,
    },
    /// Monte Carlo probability that random integer vectors form a primitive set.
    Primprob {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        m: usize,
        #[arg(long = "box")]
        bx: u64,
        #[arg(long)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Two-parameter sequence alignment.
    Align {
        #[command(subcommand)]
        action: AlignAction,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Family {
    Hmm,
    Lowerbound,
    Alignment,
}

#[derive(Subcommand)]
enum ModelAction {
    Build(BuildArgs),
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Chain length (hmm, lowerbound).
    #[arg(long)]
    n: Option<usize>,
    /// Hidden alphabet size (hmm).
    #[arg(long, default_value_t = 2)]
    l: usize,
    /// Observed alphabet size (hmm).
    #[arg(long, default_value_t = 2)]
    lobs: usize,
    /// Parameter count (lowerbound).
    #[arg(long)]
    d: Option<usize>,
    /// Sequence lengths (alignment).
    #[arg(long)]
    n1: Option<usize>,
    #[arg(long)]
    n2: Option<usize>,
    /// Sequence alphabet as one character per symbol (alignment).
    #[arg(long, default_value = "01")]
    alphabet: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum AlignAction {
    /// Vertex list of the alignment polygon.
    Polygon {
        #[arg(long)]
        s1: String,
        #[arg(long)]
        s2: String,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Optimal alignment for given penalties.
    Best {
        #[arg(long)]
        s1: String,
        #[arg(long)]
        s2: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
    },
    /// Exhaustive inference-function count over binary pairs of length n.
    Count {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Slope families guaranteed at length n.
    Slopes {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Io(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Lib(Error::CapExceeded { .. } | Error::OutOfBudget(_)) => 3,
            Failure::Lib(Error::BoundViolated(_)) | Failure::Io(_) => 1,
            Failure::Lib(_) | Failure::Usage(_) => 2,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Lib(e) => write!(f, "{e}"),
            Failure::Io(e) | Failure::Usage(e) => f.write_str(e),
        }
    }
}

type Out = Result<(), Failure>;

fn read_model(path: &PathBuf) -> Result<FactorModel, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(FactorModel::from_json(&text)?)
}

fn write_file(path: &PathBuf, contents: &str) -> Out {
    fs::write(path, contents).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("missing --{flag}")))
}

fn build(args: BuildArgs) -> Out {
    let m = match args.family {
        Family::Hmm => {
            model::build_homogeneous_hmm(need(args.n, "n")?, args.l, args.lobs, &HmmTables::identity(args.l, args.lobs))?
        }
        Family::Lowerbound => model::build_lowerbound_hmm(need(args.d, "d")?, need(args.n, "n")?)?,
        Family::Alignment => {
            let alphabet: Vec<String> = args.alphabet.chars().map(String::from).collect();
            model::build_alignment_model(need(args.n1, "n1")?, need(args.n2, "n2")?, &alphabet)?
        }
    };
    let json = m.to_json()?;
    match args.out {
        Some(p) => write_file(&p, &(json + "\n")),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

fn jobs_pool<T: Send>(jobs: usize, f: impl FnOnce() -> Result<T, Error> + Send) -> Result<T, Failure> {
    if jobs == 0 {
        return Err(Failure::Usage("--jobs must be at least 1".into()));
    }
    Ok(counting::with_jobs(jobs, f)??)
}

fn fmt_f64(q: &Rational) -> String {
    use num_traits::ToPrimitive;
    format!("{:.6}", q.to_f64().unwrap_or(f64::NAN))
}

fn run(cli: Cli) -> Out {
    match cli.command {
        Command::Model { action: ModelAction::Build(args) } => build(args),
        Command::Viterbi { model, obs, logparams } => {
            let m = read_model(&model)?;
            let tau = m.parse_observation(&obs)?;
            let v: ParameterPoint = logparams.parse()?;
            let (h, score) = inference::viterbi(&m, &tau, &v)?;
            println!("{}", h.render(&m));
            println!("score={score}");
            Ok(())
        }
        Command::Np { model, obs } => {
            let m = read_model(&model)?;
            let tau = m.parse_observation(&obs)?;
            let p = inference::observation_polytope(&m, &tau)?;
            print!("{}", p.polytope().to_text());
            for (i, v) in p.polytope().vertices().iter().enumerate() {
                if let Some(w) = p.witness(v) {
                    println!("witness {i} {}", m.format_hidden(w));
                }
            }
            Ok(())
        }
        Command::Count { model, jobs, emit_polytope, cap, samples, seed } => {
            let m = read_model(&model)?;
            let start = Instant::now();
            if let Some(s) = samples {
                let found = jobs_pool(jobs, || counting::sample_inference_functions(&m, s, seed, cap))?;
                println!("seed={seed}");
                println!("{}", Record::new().push("model", &m.name).push("samples", s).push("seed", seed).push("distinct", found));
            } else {
                let r = jobs_pool(jobs, || counting::count_inference_functions(&m, cap))?;
                println!("count={}", r.count);
                println!("{}", r.record());
                if let Some(path) = emit_polytope {
                    write_file(&path, &r.polytope.to_text())?;
                }
            }
            eprintln!("wall_time={:.3}s", start.elapsed().as_secs_f64());
            Ok(())
        }
        Command::Bound { m, big_m, d } => {
            println!("{}", bounds(m, big_m, d)?);
            Ok(())
        }
        Command::Arrangement { d, n, rays } => {
            let mut r = counting::arrangement_chambers(d, n)?;
            if rays {
                r.max_extreme_rays = Some(counting::extreme_rays_check(d, n)?);
            }
            println!("{}", r.record());
            Ok(())
        }
        Command::Primprob { d, m, bx, samples, seed, jobs } => {
            let p = jobs_pool(jobs, || counting::primitive_probability(d, m, bx, samples, seed))?;
            let (lo, hi) = counting::zeta_reference(d, m)?;
            println!("seed={seed}");
            let rec = Record::new()
                .push("d", d)
                .push("m", m)
                .push("box", bx)
                .push("samples", samples)
                .push("seed", seed)
                .push("hits", p.numer())
                .push("p", fmt_f64(&p))
                .push("zeta_lo", fmt_f64(&lo))
                .push("zeta_hi", fmt_f64(&hi));
            println!("{rec}");
            Ok(())
        }
        Command::Align { action } => align(action),
    }
}

fn align(action: AlignAction) -> Out {
    match action {
        AlignAction::Polygon { s1, s2, svg } => {
            let p = alignment::alignment_polygon(s1.as_bytes(), s2.as_bytes())?;
            print!("{}", p.to_text());
            if let Some(path) = svg {
                write_file(&path, &polygon_svg(&p.vertices, &format!("{s1} vs {s2}")))?;
            }
            Ok(())
        }
        AlignAction::Best { s1, s2, alpha, beta } => {
            let params = ScoringParams::new(parse_rational(&alpha)?, parse_rational(&beta)?);
            let (a, score) = alignment::optimal_alignment(s1.as_bytes(), s2.as_bytes(), &params)?;
            println!("{}", a.top());
            println!("{}", a.bottom());
            let [x, y, z] = a.counts();
            println!("{}", Record::new().push("x", x).push("y", y).push("z", z).push("score", score));
            Ok(())
        }
        AlignAction::Count { n, jobs, svg } => {
            let c = jobs_pool(jobs, || alignment::count_alignment_inference_functions(n))?;
            let rec = Record::new()
                .push("n", c.n)
                .push("pairs", c.pairs_evaluated)
                .push("distinct", c.distinct_polygons)
                .push("count", c.count)
                .push("meaningful", c.meaningful)
                .push("meaningful_alpha_le_beta", c.meaningful_alpha_le_beta)
                .push("slope_families", c.slope_families)
                .push("fif", bounds(None, n as u64, 2)?.fif_bound);
            println!("{rec}");
            if let Some(path) = svg {
                write_file(&path, &polygon_svg(&c.polygon, &format!("summed alignment polygon, n={n}")))?;
            }
            Ok(())
        }
        AlignAction::Slopes { n } => {
            for (u, v) in alignment::slope_family_slopes(n) {
                let f = alignment::slope_family(u, v, n)?;
                let (p, q) = f.edge();
                let rec = Record::new()
                    .push("u", u)
                    .push("v", v)
                    .push("a", f.a)
                    .push("b", f.b)
                    .push("s1", String::from_utf8_lossy(&f.s1))
                    .push("s2", String::from_utf8_lossy(&f.s2))
                    .push("edge", format!("({},{})-({},{})", p[0], p[1], q[0], q[1]));
                println!("{rec}");
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    // exit quietly when a downstream reader such as `head` closes the pipe
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}

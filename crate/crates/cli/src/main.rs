//! `forestbn`: forest matrices, route weights and graph bottleneck checks
//! for weighted multidigraphs.

use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use forest_bottleneck::format::{matrix_json, matrix_tsv, string_value, GraphFile};
use forest_bottleneck::generate::{generate, GraphKind, WeightRange};
use forest_bottleneck::routes::RouteMethod;
use forest_bottleneck::scalar::parse_rational;
use forest_bottleneck::{
    check_triple, choose_epsilon, enumerate_in_forests, forest_matrices, oracle_matrices,
    proximity, route_decomposition, route_matrix, route_matrix_closed_form, verify_all_triples,
    verify_undirected, Epsilon, Error, Rational, Scalar, ScalarMode, Verification,
    WeightedMultiDigraph, DEFAULT_FOREST_CAP,
};
use serde_json::{json, Value};

const ORACLE_CAP_VAR: &str = "FOREST_ORACLE_CAP";

#[derive(Parser)]
#[command(name = "forestbn", version, about = "Spanning forest matrices and graph bottleneck checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Forest matrix F and its total weight f.
    Forest(GraphArgs),
    /// Relative forest accessibility matrix Q = F/f.
    Proximity(GraphArgs),
    /// List every spanning in-forest with its weight.
    Enumerate(GraphArgs),
    /// Route weights of the loop-augmented companion graph.
    Routes {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        series: SeriesArgs,
    },
    /// Route weights around one triple of vertices.
    Decompose {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        series: SeriesArgs,
        #[command(flatten)]
        triple: TripleArgs,
    },
    /// Check one triple against the bottleneck inequality.
    Bottleneck {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        triple: TripleArgs,
    },
    /// Check all ordered triples and cross-check F against enumeration.
    Verify(GraphArgs),
    /// Print a generated graph file.
    Gen {
        kind: Kind,
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `k` for constant weight k, or `low..high` for p/q with p, q uniform in the range.
        #[arg(long, default_value = "1")]
        weights: String,
        #[arg(long, value_enum, default_value_t = OutputFormat::Tsv)]
        format: OutputFormat,
    },
}

#[derive(Args)]
struct GraphArgs {
    /// Graph file, or `-` for stdin.
    #[arg(long)]
    input: String,
    /// Exact rationals or 64-bit floats. Defaults to exact up to 12 vertices.
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Tsv)]
    format: OutputFormat,
    /// Treat every line as an undirected edge.
    #[arg(long)]
    undirected: bool,
}

#[derive(Args)]
struct SeriesArgs {
    /// Defaults to 1/(2·max diagonal of L).
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 100_000)]
    max_terms: usize,
}

#[derive(Args)]
struct TripleArgs {
    #[arg(short = 'i', value_parser = clap::value_parser!(u64).range(1..))]
    i: u64,
    #[arg(short = 'j', value_parser = clap::value_parser!(u64).range(1..))]
    j: u64,
    #[arg(short = 'k', value_parser = clap::value_parser!(u64).range(1..))]
    k: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum OutputFormat {
    Tsv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Path,
    Cycle,
    Complete,
    Random,
}

struct Failure {
    exit: u8,
    code: &'static str,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { exit: 1, code: "input", message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (exit, code) = match e {
            Error::NotConverged { .. } => (2, "not-converged"),
            Error::InstanceTooLarge { .. } => (2, "too-large"),
            Error::InconsistentWithTheorem { .. } => (3, "inconsistent"),
            Error::Parse { .. } => (1, "parse"),
            _ => (1, "input"),
        };
        Failure { exit, code, message: e.to_string() }
    }
}

type Outcome = Result<String, Failure>;

struct Loaded {
    file: GraphFile,
    graph: WeightedMultiDigraph,
    mode: ScalarMode,
    format: OutputFormat,
}

fn load(args: &GraphArgs) -> Result<Loaded, Failure> {
    let text = if args.input == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::input(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(&args.input)
            .map_err(|e| Failure::input(format!("{}: {e}", args.input)))?
    };
    let mut file = GraphFile::parse(&text)?;
    if args.undirected {
        file.directed = false;
    }
    let graph = file.to_graph()?;
    let mode = match args.mode {
        Some(Mode::Exact) => ScalarMode::Exact,
        Some(Mode::Float) => ScalarMode::Float,
        None => ScalarMode::default_for_order(graph.vertex_count()),
    };
    Ok(Loaded { file, graph, mode, format: args.format })
}

fn oracle_cap() -> Result<u128, Failure> {
    match std::env::var(ORACLE_CAP_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::input(format!("{ORACLE_CAP_VAR}={v} is not a non-negative integer"))),
        Err(_) => Ok(DEFAULT_FOREST_CAP),
    }
}

fn vertex(v: u64, graph: &WeightedMultiDigraph) -> Result<usize, Failure> {
    let index = (v - 1) as usize;
    graph.check_vertex(index)?;
    Ok(index)
}

fn triple(t: &TripleArgs, graph: &WeightedMultiDigraph) -> Result<(usize, usize, usize), Failure> {
    Ok((vertex(t.i, graph)?, vertex(t.j, graph)?, vertex(t.k, graph)?))
}

fn epsilon(arg: &Option<String>, graph: &WeightedMultiDigraph) -> Result<Epsilon, Failure> {
    match arg {
        None => Ok(choose_epsilon(graph)),
        Some(text) => {
            let value = parse_rational(text).map_err(|e| Failure::input(format!("--epsilon: {e}")))?;
            Ok(Epsilon::new(value, graph)?)
        }
    }
}

fn json_out(value: Value) -> String {
    let mut s = serde_json::to_string_pretty(&value).expect("json values serialize");
    s.push('\n');
    s
}

/// Calls `$f::<T>` with the scalar type selected by `$mode`.
macro_rules! with_scalar {
    ($mode:expr, $f:ident ( $($arg:expr),* )) => {
        match $mode {
            ScalarMode::Exact => $f::<Rational>($($arg),*),
            ScalarMode::Float => $f::<f64>($($arg),*),
        }
    };
}

fn forest<T: Scalar>(g: &Loaded) -> Outcome {
    let fm = forest_matrices::<T>(&g.graph);
    Ok(match g.format {
        OutputFormat::Tsv => format!("# f={}\n{}", fm.f, matrix_tsv(&fm.forests)),
        OutputFormat::Json => json_out(json!({
            "f": string_value(&fm.f),
            "F": matrix_json(&fm.forests),
            "Q": matrix_json(&fm.proximity),
        })),
    })
}

fn proximity_cmd<T: Scalar>(g: &Loaded) -> Outcome {
    let q = proximity::<T>(&g.graph);
    Ok(match g.format {
        OutputFormat::Tsv => matrix_tsv(&q),
        OutputFormat::Json => json_out(json!({ "Q": matrix_json(&q) })),
    })
}

fn enumerate(g: &Loaded) -> Outcome {
    let forests = enumerate_in_forests(&g.graph, oracle_cap()?)?;
    let mut total = Rational::from_integer(0.into());
    let mut count = 0u64;
    let mut lines = String::new();
    let mut records = Vec::new();
    for forest in forests {
        let choices: Vec<String> = forest
            .choice
            .iter()
            .map(|c| c.map_or_else(|| "root".to_string(), |a| (a + 1).to_string()))
            .collect();
        match g.format {
            OutputFormat::Tsv => {
                let _ = writeln!(lines, "{}\t{}", choices.join(" "), forest.weight);
            }
            OutputFormat::Json => records.push(json!({
                "choice": forest.choice.iter().map(|c| c.map(|a| a + 1)).collect::<Vec<_>>(),
                "weight": string_value(&forest.weight),
            })),
        }
        total += forest.weight;
        count += 1;
    }
    Ok(match g.format {
        OutputFormat::Tsv => format!("{lines}# forests={count} f={total}\n"),
        OutputFormat::Json => json_out(json!({
            "forests": records,
            "count": count,
            "f": string_value(&total),
        })),
    })
}

fn routes<T: Scalar>(g: &Loaded, series: &SeriesArgs) -> Outcome {
    let eps = epsilon(&series.epsilon, &g.graph)?;
    let (r, header, extra) = if T::MODE == ScalarMode::Exact {
        let r = route_matrix_closed_form::<T>(&g.graph, &eps)?;
        (r, format!("# epsilon={eps} method=closed-form"), json!({ "method": "closed-form" }))
    } else {
        let rm = route_matrix::<T>(&g.graph, &eps, series.tol, series.max_terms)?;
        let header = format!(
            "# epsilon={eps} method=series terms={} tail_bound={:e}",
            rm.terms_used, rm.tail_bound
        );
        let extra = json!({ "method": "series", "terms": rm.terms_used, "tail_bound": rm.tail_bound });
        (rm.routes, header, extra)
    };
    Ok(match g.format {
        OutputFormat::Tsv => format!("{header}\n{}", matrix_tsv(&r)),
        OutputFormat::Json => {
            let mut v = json!({ "epsilon": string_value(&eps), "R": matrix_json(&r) });
            v.as_object_mut().unwrap().extend(extra.as_object().unwrap().clone());
            json_out(v)
        }
    })
}

fn decompose<T: Scalar>(g: &Loaded, series: &SeriesArgs, t: &TripleArgs) -> Outcome {
    let eps = epsilon(&series.epsilon, &g.graph)?;
    let (i, j, k) = triple(t, &g.graph)?;
    let (method, tolerance) = if T::MODE == ScalarMode::Exact {
        (RouteMethod::ClosedForm, 0.0)
    } else {
        (RouteMethod::Series { tolerance: series.tol, max_terms: series.max_terms }, 1e-9)
    };
    let d = route_decomposition::<T>(&g.graph, &eps, method, i, j, k)?;
    let fields: Vec<(&str, String)> = vec![
        ("triple", format!("{},{},{}", i + 1, j + 1, k + 1)),
        ("epsilon", eps.to_string()),
        ("r_ij", d.r_ij.to_string()),
        ("r_jj", d.r_jj.to_string()),
        ("r_jk", d.r_jk.to_string()),
        ("r_ik", d.r_ik.to_string()),
        ("r_ij1", d.r_ij1.to_string()),
        ("r_ijk", d.r_ijk.to_string()),
        ("r_i_notj_k", d.r_i_notj_k.to_string()),
        ("relation", d.relation().to_string()),
        ("degenerate", d.degenerate.to_string()),
        ("identities", d.identities_hold(tolerance).to_string()),
    ];
    Ok(match g.format {
        OutputFormat::Tsv => fields.iter().map(|(key, v)| format!("{key}={v}\n")).collect(),
        OutputFormat::Json => json_out(Value::Object(
            fields.into_iter().map(|(key, v)| (key.to_string(), Value::String(v))).collect(),
        )),
    })
}

fn bottleneck<T: Scalar>(g: &Loaded, t: &TripleArgs) -> Outcome {
    let (i, j, k) = triple(t, &g.graph)?;
    let fm = forest_matrices::<T>(&g.graph);
    let r = check_triple(&fm, &g.graph, i, j, k)?;
    Ok(match g.format {
        OutputFormat::Tsv => {
            format!("{} separator={} lhs={} rhs={}\n", r.relation, r.separator, r.lhs, r.rhs)
        }
        OutputFormat::Json => json_out(json!({
            "triple": [i + 1, j + 1, k + 1],
            "relation": r.relation.to_string(),
            "separator": r.separator,
            "lhs": string_value(&r.lhs),
            "rhs": string_value(&r.rhs),
            "consistent": r.consistent,
        })),
    })
}

fn verify<T: Scalar>(g: &Loaded) -> Outcome {
    let v: Verification<T> = if g.file.directed {
        verify_all_triples::<T>(&g.graph)?
    } else {
        verify_undirected::<T>(g.file.n, &g.file.arcs)?
    };
    let oracle = match oracle_matrices(&g.graph, oracle_cap()?) {
        Ok(o) => {
            let f = &v.forests.forests;
            let n = g.graph.vertex_count();
            let agrees = |a: &T, b: &Rational| match a.to_rational() {
                Some(x) if T::MODE == ScalarMode::Exact => x == *b,
                _ => T::classify_equal(a, &T::from_rational(b)),
            };
            let matches = agrees(&v.forests.f, &o.f)
                && (0..n).all(|i| (0..n).all(|j| agrees(&f[(i, j)], &o.forests[(i, j)])));
            if !matches {
                return Err(Failure {
                    exit: 3,
                    code: "oracle-mismatch",
                    message: "forest matrix disagrees with in-forest enumeration".into(),
                });
            }
            "match"
        }
        Err(Error::InstanceTooLarge { .. }) => "skipped",
        Err(e) => return Err(e.into()),
    };
    let bad: Vec<_> = v.reports.iter().filter(|r| !r.consistent).collect();
    if let Some(r) = bad.first() {
        let [i, j, k] = r.triple;
        return Err(Failure {
            exit: 3,
            code: "inconsistent",
            message: format!(
                "{} inconsistent triples, first ({},{},{}): {} separator={} lhs={} rhs={}",
                bad.len(), i + 1, j + 1, k + 1, r.relation, r.separator, r.lhs, r.rhs
            ),
        });
    }
    let s = &v.summary;
    Ok(match g.format {
        OutputFormat::Tsv => format!("{s}\noracle={oracle}\n"),
        OutputFormat::Json => json_out(json!({
            "triples": s.triples,
            "equal": s.equal,
            "strict": s.strict,
            "degenerate": s.degenerate,
            "inconsistent": s.inconsistent,
            "oracle": oracle,
        })),
    })
}

fn gen(kind: Kind, n: usize, seed: u64, weights: &str, format: OutputFormat) -> Outcome {
    let kind = match kind {
        Kind::Path => GraphKind::Path,
        Kind::Cycle => GraphKind::Cycle,
        Kind::Complete => GraphKind::Complete,
        Kind::Random => GraphKind::Random,
    };
    let weights: WeightRange = weights.parse()?;
    let file = generate(kind, n, seed, weights)?;
    Ok(match format {
        OutputFormat::Tsv => file.to_text(),
        OutputFormat::Json => file.to_json() + "\n",
    })
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Forest(a) => {
            let g = load(&a)?;
            with_scalar!(g.mode, forest(&g))
        }
        Command::Proximity(a) => {
            let g = load(&a)?;
            with_scalar!(g.mode, proximity_cmd(&g))
        }
        Command::Enumerate(a) => enumerate(&load(&a)?),
        Command::Routes { graph, series } => {
            let g = load(&graph)?;
            with_scalar!(g.mode, routes(&g, &series))
        }
        Command::Decompose { graph, series, triple } => {
            let g = load(&graph)?;
            with_scalar!(g.mode, decompose(&g, &series, &triple))
        }
        Command::Bottleneck { graph, triple } => {
            let g = load(&graph)?;
            with_scalar!(g.mode, bottleneck(&g, &triple))
        }
        Command::Verify(a) => {
            let g = load(&a)?;
            with_scalar!(g.mode, verify(&g))
        }
        Command::Gen { kind, n, seed, weights, format } => gen(kind, n, seed, &weights, format),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let rendered = e.render().to_string();
            let message = rendered.trim_start_matches("error: ").trim_end();
            eprintln!("error:usage: {message}");
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error:{}: {}", f.code, f.message);
            ExitCode::from(f.exit)
        }
    }
}

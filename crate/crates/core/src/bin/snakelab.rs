use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use snakelab::adversary::{enumerate_snake_support, theorem2_report, verify_lemma8};
use snakelab::analysis::{
    chunk_mixing_check, classify_goodness, goodness_rate, hitting_probability, is_sparse, sparse_implies_hitting_check,
    sparse_tail_experiment, CheckVerdict,
};
use snakelab::families::Family;
use snakelab::graph::VertexTransitiveGraph;
use snakelab::group::FiniteGroup;
use snakelab::harness::{emit_plot_data, parse_method, parse_sizes, selftest, snakes_to_text, ExperimentConfig, Table};
use snakelab::mixing::{build_chunk_distribution, er_generator_experiment, tv_chain_bound_check, JointTable, Maximization};
use snakelab::rng::{child_seed, task_rng};
use snakelab::snake::{f_table, ChunkModel, SnakeParams};
use snakelab::solvers::{enumerate_local_minima, make_instance, query_complexity_experiment, verify_local_min, InstanceSpec, SolverKind};
use snakelab::{Error, Result};

#[derive(Parser)]
#[command(name = "snakelab", version, about = "Snake instances and query-complexity checks on vertex-transitive graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build, validate and serialize a graph.
    Graph(GraphCmd),
    /// Chunk distributions, E-R generator trials, tv-chain checks.
    Mix(MixCmd),
    /// Sample snakes.
    Snake(SnakeCmd),
    /// Goodness, sparseness, hitting, mixing and tail suites.
    Verify(VerifyCmd),
    /// Run a solver on fresh snake instances.
    Solve(SolveCmd),
    /// Exact adversary pipeline on an enumerated ensemble.
    Adversary(AdversaryCmd),
    /// Query counts across a family of sizes.
    Sweep(SweepCmd),
    /// Property suite over small instances.
    Selftest(SelftestCmd),
}

#[derive(Args, Clone, Default)]
struct Setup {
    /// TOML experiment config; flags given on the command line win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// cycle, hypercube, torus, torusD, complete, petersen, random_cayley, cayley.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    dim: Option<usize>,
    /// Group spec, e.g. `symmetric(4)` or `power(cyclic(2),5)`.
    #[arg(long)]
    group: Option<String>,
    /// Generators separated by `;`.
    #[arg(long)]
    gens: Option<String>,
    /// uniform_ball, uniform_all, lazy_walk, subproduct.
    #[arg(long)]
    method: Option<String>,
    /// Chunk length (defaults to the diameter).
    #[arg(long)]
    s: Option<usize>,
    /// Subproduct elements separated by `;`.
    #[arg(long)]
    elements: Option<String>,
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long = "c-ell")]
    c_ell: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

impl Setup {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut c = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        let g = &mut c.graph;
        set(&mut g.family, self.family.clone());
        opt(&mut g.n, self.n);
        opt(&mut g.dim, self.dim);
        opt(&mut g.group, self.group.clone());
        opt(&mut g.gens, self.gens.clone());
        set(&mut c.chunks.method, self.method.clone());
        opt(&mut c.chunks.s, self.s);
        opt(&mut c.chunks.elements, self.elements.clone());
        opt(&mut c.snake.ell, self.ell);
        set(&mut c.snake.c_ell, self.c_ell);
        opt(&mut c.snake.eps, self.eps);
        set(&mut c.run.trials, self.trials);
        set(&mut c.run.seed, self.seed);
        if c.graph.family.is_empty() {
            return Err(Error::Argument("no graph given (use --family or --config)".into()));
        }
        Ok(c)
    }
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

fn opt<T>(slot: &mut Option<T>, v: Option<T>) {
    if v.is_some() {
        *slot = v;
    }
}

struct Instance {
    config: ExperimentConfig,
    graph: VertexTransitiveGraph,
}

impl Instance {
    fn new(setup: &Setup) -> Result<Instance> {
        let config = setup.config()?;
        let graph = config.family()?.build()?;
        Ok(Instance { config, graph })
    }

    fn model(&self) -> Result<(ChunkModel<'_>, SnakeParams)> {
        let params = self.config.params_for(&self.graph)?;
        let method = parse_method(&self.config.chunks.method, &self.graph, self.config.chunks.elements.as_deref())?;
        let chunk = build_chunk_distribution(&self.graph, params.s, method)?;
        let params = params.with_delta(chunk.delta);
        Ok((ChunkModel::new(&self.graph, chunk)?, params))
    }
}

#[derive(Args)]
struct GraphCmd {
    #[command(flatten)]
    setup: Setup,
    /// Validate an existing graph file instead of building one.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MixMode {
    Chunk,
    Er,
    TvChain,
}

#[derive(Args)]
struct MixCmd {
    #[command(flatten)]
    setup: Setup,
    #[arg(long, value_enum, default_value = "chunk")]
    mode: MixMode,
    /// Pointwise δ for E-R trials.
    #[arg(long, default_value_t = 0.25)]
    delta: f64,
    /// Random joint pairs for the tv chain.
    #[arg(long, default_value_t = 10_000)]
    pairs: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SnakeCmd {
    #[command(flatten)]
    setup: Setup,
    #[arg(long, default_value_t = 1)]
    count: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    All,
    Goodness,
    Sparse,
    Hitting,
    Mixing,
    Tail,
}

#[derive(Args)]
struct VerifyCmd {
    #[command(flatten)]
    setup: Setup,
    #[arg(long, value_enum, default_value = "all")]
    suite: Suite,
    /// Snakes sampled for the goodness rate.
    #[arg(long, default_value_t = 20)]
    snakes: u64,
}

#[derive(Args)]
struct SolveCmd {
    #[command(flatten)]
    setup: Setup,
    #[arg(long, default_value = "aldous")]
    solver: String,
    /// Aldous sample count (default ⌈√(N·degree)⌉).
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args)]
struct AdversaryCmd {
    #[command(flatten)]
    setup: Setup,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepCmd {
    #[command(flatten)]
    setup: Setup,
    /// `start:stop:step` or a comma list of size parameters.
    #[arg(long)]
    sizes: String,
    #[arg(long, default_value = "aldous")]
    solver: String,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SelftestCmd {
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value = "selftest_out")]
    out: PathBuf,
}

/// Outcome of a command: whether every verification passed.
type Outcome = Result<bool>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Graph(c) => run_graph(c),
        Command::Mix(c) => run_mix(c),
        Command::Snake(c) => run_snake(c),
        Command::Verify(c) => run_verify(c),
        Command::Solve(c) => run_solve(c),
        Command::Adversary(c) => run_adversary(c),
        Command::Sweep(c) => run_sweep(c),
        Command::Selftest(c) => run_selftest(c),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Argument(_) | Error::Parse(_) | Error::Unsupported(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn write_out(path: &Path, content: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, content)?;
    Ok(())
}

fn run_graph(c: GraphCmd) -> Outcome {
    let graph = match &c.input {
        Some(p) => VertexTransitiveGraph::from_text(&fs::read_to_string(p)?)?,
        None => c.setup.config()?.family()?.build()?,
    };
    let report = graph.verify_vertex_transitive();
    println!(
        "N={} d={} degree={} base={} cayley={} vertex_transitive={}",
        graph.vertex_count(),
        graph.diameter(),
        graph.degree(),
        graph.base(),
        graph.is_cayley(),
        report.passed()
    );
    for f in report.failures().take(5) {
        println!("sigma_{} fails: edge {:?}", f.x, f.offending_edge);
    }
    if let Some(out) = &c.out {
        write_out(out, &graph.to_text())?;
    }
    Ok(report.passed())
}

fn run_mix(c: MixCmd) -> Outcome {
    match c.mode {
        MixMode::Chunk => {
            let inst = Instance::new(&c.setup)?;
            let (model, _) = inst.model()?;
            let d = model.chunk();
            println!("method={} s={} support={} delta={} pointwise_delta={}", d.method.name(), d.radius, model.support_size(), d.delta, d.pointwise_delta);
            if let Some(out) = &c.out {
                write_out(out, &d.dist.to_csv(d.delta))?;
            }
            Ok(true)
        }
        MixMode::Er => {
            let spec = c.setup.group.as_deref().ok_or_else(|| Error::Argument("er mode needs --group".into()))?;
            let group = FiniteGroup::build(&spec.parse()?)?;
            let s = c.setup.s.ok_or_else(|| Error::Argument("er mode needs --s".into()))?;
            let trials = c.setup.trials.unwrap_or(200);
            let e = er_generator_experiment(&group, s, c.delta, trials, c.setup.seed.unwrap_or(0))?;
            println!(
                "trials={} passes={} fraction={} std_err={} lambda={} floor={}",
                e.trials,
                e.passes,
                e.fraction(),
                e.std_err(),
                e.lambda,
                e.floor_text()
            );
            Ok(e.predicted_floor.map_or(true, |f| e.fraction() >= f - 3.0 * e.std_err()))
        }
        MixMode::TvChain => {
            let seed = c.setup.seed.unwrap_or(0);
            let mut rng = task_rng(seed, "cli_tv_chain", 0);
            let (mut exhaustive, mut held, mut partial_inconclusive) = (0u64, 0u64, 0u64);
            for i in 0..c.pairs {
                use rand::Rng;
                let coords = rng.gen_range(2..=3);
                let shape: Vec<usize> = (0..coords).map(|_| rng.gen_range(2..=8)).collect();
                let x = JointTable::random(shape.clone(), &mut rng);
                let y = JointTable::random(shape, &mut rng);
                let r = tv_chain_bound_check(&x, &y)?;
                match r.maximization {
                    Maximization::Exhaustive => {
                        exhaustive += 1;
                        held += u64::from(r.holds);
                    }
                    Maximization::SingletonHistories => partial_inconclusive += u64::from(!r.holds),
                }
                if !r.holds && i < 10 {
                    println!("pair {i}: lhs={} rhs={} {}", r.lhs, r.rhs, r.verdict());
                }
            }
            println!("pairs={} exhaustive={} held={} partial_inconclusive={}", c.pairs, exhaustive, held, partial_inconclusive);
            Ok(held == exhaustive)
        }
    }
}

fn run_snake(c: SnakeCmd) -> Outcome {
    let inst = Instance::new(&c.setup)?;
    let (model, params) = inst.model()?;
    let seed = inst.config.run.seed;
    let mut snakes = Vec::new();
    let mut ok = true;
    for i in 0..c.count {
        let mut rng = task_rng(seed, "cli_snake", i);
        let x = model.sample_snake(inst.graph.base(), &params, &mut rng)?;
        if inst.graph.vertex_count() <= 1 << 16 {
            let f = f_table(&inst.graph, &x)?;
            ok &= enumerate_local_minima(&inst.graph, |v| f[v as usize])? == vec![x.endpoint()];
        }
        snakes.push(x);
    }
    let text = snakes_to_text(&snakes);
    match &c.out {
        Some(out) => write_out(out, &text)?,
        None => print!("{text}"),
    }
    eprintln!("s={} ell={} L={} delta={} unique_minimum={}", params.s, params.ell, params.length(), params.delta, ok);
    Ok(ok)
}

fn run_verify(c: VerifyCmd) -> Outcome {
    let inst = Instance::new(&c.setup)?;
    let (model, params) = inst.model()?;
    let budget = inst.config.budget()?;
    let seed = inst.config.run.seed;
    let trials = inst.config.run.trials;
    let x = model.sample_snake(inst.graph.base(), &params, &mut task_rng(seed, "cli_verify", 0))?;
    let want = |s: Suite| c.suite == Suite::All || c.suite == s;
    let mut ok = true;
    println!("N={} s={} ell={} L={} delta={} eps={}", inst.graph.vertex_count(), params.s, params.ell, params.length(), params.delta, params.eps);
    if want(Suite::Goodness) {
        let g = classify_goodness(&model, &x, &params, trials, child_seed(seed, "cli_goodness", 0), &budget)?;
        println!(
            "goodness: consistency={} (exact={}, std_err={}) hitting_max={} good={}",
            g.consistency.value, g.consistency.exact, g.consistency.std_err, g.hitting_max, g.is_good
        );
        let rate = goodness_rate(&model, &params, c.snakes, trials.min(2000), child_seed(seed, "cli_rate", 0), &budget)?;
        let floor = |f: Option<f64>| f.map_or("not applicable".to_string(), |v| v.to_string());
        println!(
            "goodness_rate: fraction={} std_err={} mean_consistency={} consistency_floor={} markov_floor={}",
            rate.fraction(),
            rate.std_err(),
            rate.mean_consistency,
            floor(rate.consistency_floor),
            floor(rate.markov_floor)
        );
    }
    if want(Suite::Sparse) || want(Suite::Hitting) {
        let sp = is_sparse(&model, &x, params.eps);
        let eps = params.eps.max(sp.min_eps(params.ell));
        let r = sparse_implies_hitting_check(&model, &x, eps, trials, child_seed(seed, "cli_sparse", 0), &budget)?;
        println!(
            "sparse: max_score={} eps={} sparse={} eps_floor={} hitting_max={} bound={} realized_bound={} verdict={:?}",
            r.sparse.max_score, r.eps, r.sparse.sparse, r.eps_floor, r.hitting_max, r.bound, r.realized_bound, r.verdict
        );
        ok &= r.verdict != CheckVerdict::Violated;
        ok &= r.hitting_max <= r.realized_bound + 3.0 * r.hitting_std_err + 1e-9;
        if want(Suite::Hitting) {
            let h = hitting_probability(&model, &x, trials, child_seed(seed, "cli_hitting", 0), &budget)?;
            println!("hitting: max={} argmax={} exact={}", h.max, h.argmax, h.exact);
        }
    }
    if want(Suite::Mixing) {
        for t in params.s..=params.length() {
            let r = chunk_mixing_check(&model, &params, t, trials, child_seed(seed, "cli_mixing", t as u64), &budget)?;
            println!("mixing: t={} max_tv={} delta={} method={:?} holds={}", t, r.max_tv, r.delta, r.method, r.holds);
            ok &= r.holds;
        }
    }
    if want(Suite::Tail) {
        let eps = params.eps;
        let r = sparse_tail_experiment(&model, params.ell, eps, trials, child_seed(seed, "cli_tail", 0))?;
        let ceiling = r.ceiling.map_or("not applicable".to_string(), |v| v.to_string());
        println!("tail: frequency={} std_err={} threshold={} ceiling={}", r.frequency(), r.std_err(), r.threshold, ceiling);
        if let Some(cap) = r.ceiling {
            ok &= r.frequency() <= cap + 3.0 * r.std_err();
        }
    }
    Ok(ok)
}

fn run_solve(c: SolveCmd) -> Outcome {
    let inst = Instance::new(&c.setup)?;
    let (model, params) = inst.model()?;
    let solver = SolverKind::parse(&c.solver, c.samples)?;
    let seed = inst.config.run.seed;
    let trials = inst.config.run.trials.min(100_000);
    let mut ok = true;
    let mut queries = Vec::new();
    println!("trial,queries,answer,x_L,local_min");
    for t in 0..trials {
        let mut rng = task_rng(seed, "cli_solve", t);
        let x = model.sample_snake(inst.graph.base(), &params, &mut rng)?;
        let mut oracle = make_instance(&inst.graph, &x)?;
        let r = solver.run(&inst.graph, &mut oracle, &mut rng)?;
        let local = verify_local_min(&inst.graph, |v| oracle.raw(v), r.vertex);
        ok &= local && r.vertex == x.endpoint();
        println!("{t},{},{},{},{local}", r.queries, r.vertex, x.endpoint());
        queries.push(r.queries as f64);
    }
    eprintln!("solver={} median_queries={}", solver.name(), snakelab::stats::median(&queries));
    Ok(ok)
}

fn run_adversary(c: AdversaryCmd) -> Outcome {
    let inst = Instance::new(&c.setup)?;
    let (model, params) = inst.model()?;
    let budget = inst.config.budget()?;
    let ens = enumerate_snake_support(&model, inst.graph.base(), &params, &budget)?;
    let report = theorem2_report(&model, &ens, &budget)?;
    let text = report.to_text();
    print!("{text}");
    if let Some(dir) = &c.out {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("report.txt"), &text)?;
        fs::write(dir.join("pairs.csv"), report.pairs_csv())?;
        fs::write(dir.join("scores.csv"), report.scores_csv())?;
    }
    let lemma_ok = report.subset.is_empty() || verify_lemma8(&ens.probs, &report.relation, report.lemma_r, &report.subset);
    let confirmed = report.rls_confirmed().unwrap_or(true) && report.qls_confirmed().unwrap_or(true);
    Ok(report.max_w_asymmetry < 1e-12 && lemma_ok && confirmed)
}

fn run_sweep(c: SweepCmd) -> Outcome {
    let sizes = parse_sizes(&c.sizes)?;
    let mut setup = c.setup.clone();
    setup.n = setup.n.or(sizes.first().copied());
    let config = setup.config()?;
    let first = config.family()?;
    let families: Vec<Family> = sizes.iter().map(|&n| first.resized(n)).collect::<Result<_>>()?;
    let method_name = config.chunks.method.as_str();
    let method = match method_name {
        "uniform_ball" => snakelab::mixing::ChunkMethod::UniformBall,
        "uniform_all" => snakelab::mixing::ChunkMethod::UniformAll,
        "lazy_walk" => snakelab::mixing::ChunkMethod::LazyWalk,
        other => return Err(Error::Argument(format!("sweeps do not support chunk method `{other}`"))),
    };
    let spec = InstanceSpec {
        method,
        s: config.chunks.s,
        c_ell: config.snake.c_ell,
        ell: config.snake.ell,
    };
    let solver = SolverKind::parse(&c.solver, c.samples)?;
    let trials = c.setup.trials.unwrap_or(50);
    let table = query_complexity_experiment(&families, &spec, solver, trials, config.run.seed)?;
    let summary = table.summary_csv();
    print!("{summary}");
    if let Some(dir) = &c.out {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("sweep_trials.csv"), table.trials_csv())?;
        fs::write(dir.join("sweep_summary.csv"), &summary)?;
        let plot = emit_plot_data(&Table::from_csv(&summary)?, &["N", "queries_median", "lower_bound_rls"])?;
        fs::write(dir.join("sweep_plot.dat"), plot)?;
    }
    if let Some(why) = &table.truncated {
        eprintln!("sweep stopped early: {why}");
    }
    if table.summary.len() >= 2 {
        eprintln!("loglog_slope={}", table.loglog_slope());
    }
    Ok(table.trials.iter().all(|r| r.answer_correct))
}

fn run_selftest(c: SelftestCmd) -> Outcome {
    let report = selftest(c.seed, &c.out)?;
    print!("{}", report.to_text());
    Ok(report.passed())
}

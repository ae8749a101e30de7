//! Query-counting oracles, local-search solvers, and query-count sweeps.

use std::fmt::Debug;
use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{arg, Error, Result};
use crate::families::Family;
use crate::graph::VertexTransitiveGraph;
use crate::mixing::{build_chunk_distribution, ChunkMethod};
use crate::rng::task_rng;
use crate::snake::{f_table, ChunkModel, Snake, SnakeParams};
use crate::stats;

/// Black-box access to a vertex function, counting queries.
#[derive(Debug, Clone)]
pub struct CountingOracle<V> {
    values: Vec<V>,
    seen: Vec<bool>,
    memoize: bool,
    count: u64,
    asks: u64,
    log: Vec<u32>,
}

impl<V: Copy + Ord + Debug> CountingOracle<V> {
    /// Oracle over a full value table, memoized.
    pub fn new(values: Vec<V>) -> Self {
        let n = values.len();
        CountingOracle { values, seen: vec![false; n], memoize: true, count: 0, asks: 0, log: Vec::new() }
    }

    /// Every ask is charged, repeats included.
    pub fn without_memo(mut self) -> Self {
        self.memoize = false;
        self
    }

    pub fn memoized(&self) -> bool {
        self.memoize
    }

    pub fn vertex_count(&self) -> usize {
        self.values.len()
    }

    pub fn ask(&mut self, v: u32) -> V {
        self.asks += 1;
        let seen = &mut self.seen[v as usize];
        if !*seen || !self.memoize {
            *seen = true;
            self.count += 1;
            self.log.push(v);
        }
        self.values[v as usize]
    }

    /// Charged queries: distinct vertices when memoized, all asks otherwise.
    pub fn count(&self) -> u64 {
        self.count
    }

    /// All asks, including memoized repeats.
    pub fn asks(&self) -> u64 {
        self.asks
    }

    /// Charged queries in order.
    pub fn log(&self) -> &[u32] {
        &self.log
    }

    /// Uncounted access, for post-hoc verification.
    pub fn raw(&self, v: u32) -> V {
        self.values[v as usize]
    }

    pub fn raw_values(&self) -> &[V] {
        &self.values
    }
}

/// Oracle for `f_X`.
pub fn make_instance(graph: &VertexTransitiveGraph, x: &Snake) -> Result<CountingOracle<u32>> {
    Ok(CountingOracle::new(f_table(graph, x)?))
}

/// Oracle for `g_{X,b}`: `(f_X(v), −1)` off `x_L` and `(0, b)` at `x_L`. The
/// snake is not part of the oracle.
pub fn make_decision_instance(graph: &VertexTransitiveGraph, x: &Snake, b: u8) -> Result<CountingOracle<(i64, i64)>> {
    if b > 1 {
        return arg(format!("decision bit must be 0 or 1, got {b}"));
    }
    let end = x.endpoint() as usize;
    let values = f_table(graph, x)?
        .into_iter()
        .enumerate()
        .map(|(v, f)| if v == end { (0, i64::from(b)) } else { (i64::from(f), -1) })
        .collect();
    Ok(CountingOracle::new(values))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub vertex: u32,
    pub queries: u64,
    /// Vertices visited by the descent, start first.
    pub trace: Vec<u32>,
}

/// Move to the strictly smallest neighbor (smallest id on ties) until none is smaller.
pub fn steepest_descent<V: Copy + Ord + Debug>(graph: &VertexTransitiveGraph, oracle: &mut CountingOracle<V>, start: u32) -> Result<SolveResult> {
    graph.check_vertex(start)?;
    let mut cur = start;
    let mut val = oracle.ask(cur);
    let mut trace = vec![cur];
    loop {
        let mut best: Option<(u32, V)> = None;
        for &w in graph.neighbors(cur) {
            let vw = oracle.ask(w);
            if vw < val && best.map_or(true, |(_, b)| vw < b) {
                best = Some((w, vw));
            }
        }
        match best {
            Some((w, vw)) => {
                cur = w;
                val = vw;
                trace.push(w);
            }
            None => break,
        }
    }
    Ok(SolveResult { vertex: cur, queries: oracle.count(), trace })
}

/// `⌈√(N·degree)⌉`.
pub fn default_sample_count(graph: &VertexTransitiveGraph) -> usize {
    ((graph.vertex_count() * graph.degree()) as f64).sqrt().ceil() as usize
}

/// Query `T` distinct uniform vertices (all of them when `T ≥ N`), then descend
/// from the best one (smallest value, then smallest id).
pub fn aldous_solver<V: Copy + Ord + Debug>(graph: &VertexTransitiveGraph, oracle: &mut CountingOracle<V>, t: usize, rng: &mut impl Rng) -> Result<SolveResult> {
    if t == 0 {
        return arg("sample count T must be >= 1");
    }
    let n = graph.vertex_count();
    let mut best: Option<(V, u32)> = None;
    for v in rand::seq::index::sample(rng, n, t.min(n)).into_iter() {
        let v = v as u32;
        let val = oracle.ask(v);
        if best.map_or(true, |b| (val, v) < b) {
            best = Some((val, v));
        }
    }
    steepest_descent(graph, oracle, best.unwrap().1)
}

/// `f(v) ≤ f(w)` for every neighbor `w`.
pub fn verify_local_min<V: PartialOrd>(graph: &VertexTransitiveGraph, f: impl Fn(u32) -> V, v: u32) -> bool {
    let fv = f(v);
    graph.neighbors(v).iter().all(|&w| fv <= f(w))
}

/// All local minima, ascending.
pub fn enumerate_local_minima<V: PartialOrd>(graph: &VertexTransitiveGraph, f: impl Fn(u32) -> V) -> Result<Vec<u32>> {
    let n = graph.vertex_count();
    if n > crate::snake::TABLE_VERTEX_CAP {
        return Err(Error::SizeLimit { what: "local-minimum scan".into(), needed: n as u128, cap: crate::snake::TABLE_VERTEX_CAP as u128 });
    }
    Ok((0..n as u32).filter(|&v| verify_local_min(graph, &f, v)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerBound {
    /// `√N / (d·log₂N)`.
    pub rls: f64,
    /// `N^{1/4} / √(d·log₂N)`.
    pub qls: f64,
}

pub fn lower_bound_formula(n: f64, d: f64) -> Result<LowerBound> {
    if n < 2.0 || d < 1.0 {
        return arg(format!("need N >= 2 and d >= 1, got N = {n}, d = {d}"));
    }
    let dl = d * n.log2();
    Ok(LowerBound { rls: n.sqrt() / dl, qls: n.powf(0.25) / dl.sqrt() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    /// Steepest descent from one uniform start.
    Descent,
    /// Sampling then descent; `None` means `⌈√(N·degree)⌉` samples.
    Aldous(Option<usize>),
}

impl SolverKind {
    pub fn name(&self) -> &'static str {
        match self {
            SolverKind::Descent => "descent",
            SolverKind::Aldous(_) => "aldous",
        }
    }

    pub fn parse(text: &str, samples: Option<usize>) -> Result<SolverKind> {
        match text {
            "descent" => Ok(SolverKind::Descent),
            "aldous" => Ok(SolverKind::Aldous(samples)),
            other => arg(format!("unknown solver `{other}` (descent, aldous)")),
        }
    }

    pub fn run<V: Copy + Ord + Debug>(&self, graph: &VertexTransitiveGraph, oracle: &mut CountingOracle<V>, rng: &mut impl Rng) -> Result<SolveResult> {
        match self {
            SolverKind::Descent => {
                let start = rng.gen_range(0..graph.vertex_count() as u32);
                steepest_descent(graph, oracle, start)
            }
            SolverKind::Aldous(t) => aldous_solver(graph, oracle, t.unwrap_or_else(|| default_sample_count(graph)), rng),
        }
    }
}

/// How hard instances are drawn in experiments.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceSpec {
    /// `uniform_ball`, `uniform_all` or `lazy_walk`.
    pub method: ChunkMethod,
    /// Chunk length; the diameter when `None`.
    pub s: Option<usize>,
    pub c_ell: f64,
    /// Overrides the `ℓ` formula.
    pub ell: Option<usize>,
}

impl Default for InstanceSpec {
    fn default() -> Self {
        InstanceSpec { method: ChunkMethod::UniformAll, s: None, c_ell: 1.0, ell: None }
    }
}

impl InstanceSpec {
    pub fn params_for(&self, graph: &VertexTransitiveGraph) -> Result<SnakeParams> {
        let s = self.s.unwrap_or_else(|| graph.diameter()).max(1);
        match self.ell {
            Some(ell) => {
                let mut p = SnakeParams::new(s, ell)?;
                p.c_ell = self.c_ell;
                Ok(p)
            }
            None => SnakeParams::from_formula(graph.vertex_count(), s, self.c_ell),
        }
    }

    pub fn model<'g>(&self, graph: &'g VertexTransitiveGraph) -> Result<(ChunkModel<'g>, SnakeParams)> {
        let params = self.params_for(graph)?;
        if matches!(self.method, ChunkMethod::Subproduct(_)) {
            return Err(Error::Unsupported("experiments draw chunks from uniform_ball, uniform_all or lazy_walk".into()));
        }
        let chunk = build_chunk_distribution(graph, params.s, self.method.clone())?;
        let params = params.with_delta(chunk.delta);
        Ok((ChunkModel::new(graph, chunk)?, params))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRow {
    pub family: String,
    pub param: String,
    pub n: usize,
    pub d: usize,
    pub degree: usize,
    pub solver: &'static str,
    pub seed: u64,
    pub trial: u64,
    pub queries: u64,
    pub answer_correct: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SizeSummary {
    pub family: String,
    pub param: String,
    pub n: usize,
    pub d: usize,
    pub degree: usize,
    pub solver: &'static str,
    pub trials: u64,
    pub queries_median: f64,
    pub queries_mean: f64,
    pub queries_max: u64,
    pub bound: LowerBound,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExperimentTable {
    pub trials: Vec<TrialRow>,
    pub summary: Vec<SizeSummary>,
    /// Why the sweep stopped early, if it did.
    pub truncated: Option<String>,
}

pub const TRIAL_HEADER: &str = "family,param,N,d,degree,solver,seed,trial,queries,answer_correct";
pub const SUMMARY_HEADER: &str = "family,param,N,d,degree,solver,trials,queries_median,queries_mean,queries_max,lower_bound_rls,lower_bound_qls";

impl ExperimentTable {
    pub fn trials_csv(&self) -> String {
        let mut out = format!("{TRIAL_HEADER}\n");
        for r in &self.trials {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                r.family, r.param, r.n, r.d, r.degree, r.solver, r.seed, r.trial, r.queries, r.answer_correct
            )
            .unwrap();
        }
        out
    }

    pub fn summary_csv(&self) -> String {
        let mut out = format!("{SUMMARY_HEADER}\n");
        for r in &self.summary {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                r.family, r.param, r.n, r.d, r.degree, r.solver, r.trials, r.queries_median, r.queries_mean, r.queries_max, r.bound.rls, r.bound.qls
            )
            .unwrap();
        }
        out
    }

    /// Log-log least-squares slope of median queries against `N`.
    pub fn loglog_slope(&self) -> f64 {
        let x: Vec<f64> = self.summary.iter().map(|r| (r.n as f64).ln()).collect();
        let y: Vec<f64> = self.summary.iter().map(|r| r.queries_median.ln()).collect();
        stats::ols_slope(&x, &y)
    }
}

/// Run `solver` on `trials` fresh snake instances per family member. All
/// randomness derives from `seed`, the size index and the trial index.
pub fn query_complexity_experiment(families: &[Family], spec: &InstanceSpec, solver: SolverKind, trials: u64, seed: u64) -> Result<ExperimentTable> {
    if trials == 0 {
        return arg("trials must be >= 1");
    }
    let mut table = ExperimentTable::default();
    for (size_index, family) in families.iter().enumerate() {
        let graph = match family.build() {
            Ok(g) => g,
            Err(e @ Error::SizeLimit { .. }) => {
                table.truncated = Some(e.to_string());
                break;
            }
            Err(e) => return Err(e),
        };
        let (model, params) = spec.model(&graph)?;
        let (family_name, param) = family.name_and_param();
        let size_seed = crate::rng::child_seed(seed, "sweep_size", size_index as u64);
        let outcomes: Vec<(u64, bool)> = (0..trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = task_rng(size_seed, "sweep_trial", t);
                let x = model.sample_snake(graph.base(), &params, &mut rng)?;
                let mut oracle = make_instance(&graph, &x)?;
                let r = solver.run(&graph, &mut oracle, &mut rng)?;
                let correct = r.vertex == x.endpoint() && verify_local_min(&graph, |v| oracle.raw(v), r.vertex);
                Ok((r.queries, correct))
            })
            .collect::<Result<_>>()?;
        let (n, d, degree) = (graph.vertex_count(), graph.diameter(), graph.degree());
        for (t, &(queries, answer_correct)) in outcomes.iter().enumerate() {
            table.trials.push(TrialRow {
                family: family_name.clone(),
                param: param.clone(),
                n,
                d,
                degree,
                solver: solver.name(),
                seed,
                trial: t as u64,
                queries,
                answer_correct,
            });
        }
        let q: Vec<f64> = outcomes.iter().map(|o| o.0 as f64).collect();
        table.summary.push(SizeSummary {
            family: family_name,
            param,
            n,
            d,
            degree,
            solver: solver.name(),
            trials,
            queries_median: stats::median(&q),
            queries_mean: stats::mean(&q),
            queries_max: outcomes.iter().map(|o| o.0).max().unwrap(),
            bound: lower_bound_formula(n as f64, d.max(1) as f64)?,
        });
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    fn raw(vertices: &[u32]) -> Snake {
        Snake { vertices: vertices.to_vec(), seeds: vec![], s: 1 }
    }

    #[test]
    fn oracle_counting() {
        let c6 = families::cycle(6).unwrap();
        let x = raw(&[0, 1, 2]);
        let mut o = make_instance(&c6, &x).unwrap();
        assert_eq!(o.count(), 0);
        assert_eq!(o.ask(2), 0);
        assert_eq!(o.count(), 1);
        o.ask(2);
        assert_eq!((o.count(), o.asks()), (1, 2));
        let mut d = make_decision_instance(&c6, &x, 1).unwrap();
        assert_eq!(d.ask(2), (0, 1));
        assert_eq!(d.ask(1), (1, -1));
        assert!(make_decision_instance(&c6, &x, 2).is_err());
        let mut plain = make_instance(&c6, &x).unwrap().without_memo();
        plain.ask(0);
        plain.ask(0);
        assert_eq!(plain.count(), 2);
    }

    #[test]
    fn descent_on_c6() {
        let c6 = families::cycle(6).unwrap();
        let x = raw(&[0, 1, 2]);
        let mut o = make_instance(&c6, &x).unwrap();
        let r = steepest_descent(&c6, &mut o, 4).unwrap();
        assert_eq!(r.trace, vec![4, 5, 0, 1, 2]);
        assert_eq!(r.vertex, 2);
        // the closed neighbourhoods of the trace cover all six vertices
        assert_eq!(r.queries, 6);
        let mut o = make_instance(&c6, &x).unwrap();
        let r = steepest_descent(&c6, &mut o, 2).unwrap();
        assert_eq!((r.vertex, r.queries), (2, 3));
    }

    #[test]
    fn aldous_exhaustive_sample() {
        let t = families::torus(5, 2).unwrap();
        let x = raw(&[0, 1, 2, 7]);
        let mut o = make_instance(&t, &x).unwrap();
        let r = aldous_solver(&t, &mut o, 25, &mut task_rng(0, "t", 0)).unwrap();
        assert_eq!(r.vertex, 7);
        assert_eq!(r.queries, 25);
        assert!(aldous_solver(&t, &mut o, 0, &mut task_rng(0, "t", 0)).is_err());
    }

    #[test]
    fn minima_and_formula() {
        let c6 = families::cycle(6).unwrap();
        assert_eq!(enumerate_local_minima(&c6, |_| 0).unwrap().len(), 6);
        let f = f_table(&c6, &raw(&[0, 1, 2])).unwrap();
        assert_eq!(enumerate_local_minima(&c6, |v| f[v as usize]).unwrap(), vec![2]);
        assert!(!verify_local_min(&c6, |v| f[v as usize], 1));
        let b = lower_bound_formula(1024.0, 10.0).unwrap();
        assert!((b.rls - 0.32).abs() < 1e-12);
        assert!((lower_bound_formula(4.0, 1.0).unwrap().rls - 1.0).abs() < 1e-12);
        assert!(lower_bound_formula(1.0, 1.0).is_err());
    }

    #[test]
    fn single_size_single_trial() {
        let t = query_complexity_experiment(&[Family::Torus { n: 6, dim: 2 }], &InstanceSpec::default(), SolverKind::Aldous(None), 1, 3).unwrap();
        assert_eq!((t.trials.len(), t.summary.len()), (1, 1));
        assert!(t.trials[0].answer_correct);
        assert_eq!(t.trials_csv().lines().next().unwrap(), TRIAL_HEADER);
    }
}

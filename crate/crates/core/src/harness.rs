//! Experiment configuration, plot-data emission, and the deterministic selftest.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::adversary::{enumerate_snake_support, theorem2_report};
use crate::analysis::{
    chunk_mixing_check, flick_outcome_exact, flick_outcome_mc, hitting_exact, hitting_mc, sparse_implies_hitting_check,
    sparse_scores_pull, sparse_scores_push, CheckVerdict,
};
use crate::budget::Budget;
use crate::error::{arg, Error, Result};
use crate::families::{self, Family};
use crate::graph::VertexTransitiveGraph;
use crate::mixing::{
    build_chunk_distribution, er_generator_experiment, subproduct_distribution, tv_chain_bound_check, ChunkMethod, JointTable,
    Maximization,
};
use crate::rng::task_rng;
use crate::snake::{f_table, ChunkModel, Snake, SnakeParams};
use crate::solvers::{enumerate_local_minima, query_complexity_experiment, verify_local_min, InstanceSpec, SolverKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct GraphSection {
    pub family: String,
    pub n: Option<usize>,
    pub dim: Option<usize>,
    pub group: Option<String>,
    pub gens: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChunkSection {
    pub method: String,
    pub s: Option<usize>,
    /// Subproduct elements, `;`-separated, in group element notation.
    pub elements: Option<String>,
}

impl Default for ChunkSection {
    fn default() -> Self {
        ChunkSection { method: "uniform_ball".into(), s: None, elements: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SnakeSection {
    pub c_ell: f64,
    pub ell: Option<usize>,
    pub eps: Option<f64>,
    pub consist_threshold: f64,
    pub good_prob_threshold: f64,
}

impl Default for SnakeSection {
    fn default() -> Self {
        SnakeSection { c_ell: 200.0, ell: None, eps: None, consist_threshold: 0.9, good_prob_threshold: 0.9 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSection {
    pub trials: u64,
    pub seed: u64,
    pub out: Option<String>,
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection { trials: 10_000, seed: 0, out: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct BudgetSection {
    pub ensemble: Option<u64>,
    pub tail: Option<u64>,
    pub dp: Option<u64>,
}

/// Sectioned `key = value` experiment description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub graph: GraphSection,
    #[serde(default)]
    pub chunks: ChunkSection,
    #[serde(default)]
    pub snake: SnakeSection,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub budget: BudgetSection,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Internal(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        ExperimentConfig::from_toml(&fs::read_to_string(path)?)
    }

    pub fn family(&self) -> Result<Family> {
        let g = &self.graph;
        Family::parse(&g.family, g.n, g.dim, g.group.as_deref(), g.gens.as_deref(), self.run.seed)
    }

    /// Environment budget with this config's caps applied on top.
    pub fn budget(&self) -> Result<Budget> {
        let mut b = Budget::from_env()?;
        if let Some(v) = self.budget.ensemble {
            b.ensemble = v;
        }
        if let Some(v) = self.budget.tail {
            b.tail = v;
        }
        if let Some(v) = self.budget.dp {
            b.dp = v;
        }
        Ok(b)
    }

    pub fn params_for(&self, graph: &VertexTransitiveGraph) -> Result<SnakeParams> {
        let s = self.chunks.s.unwrap_or_else(|| graph.diameter());
        let mut p = match self.snake.ell {
            Some(ell) => SnakeParams::new(s, ell)?,
            None => SnakeParams::from_formula(graph.vertex_count(), s, self.snake.c_ell)?,
        };
        p.c_ell = self.snake.c_ell;
        p.consist_threshold = self.snake.consist_threshold;
        p.good_prob_threshold = self.snake.good_prob_threshold;
        if let Some(eps) = self.snake.eps {
            p.eps = eps;
        }
        Ok(p)
    }
}

/// `uniform_ball`, `uniform_all`, `lazy_walk`, or `subproduct` with elements.
pub fn parse_method(name: &str, graph: &VertexTransitiveGraph, elements: Option<&str>) -> Result<ChunkMethod> {
    match name {
        "uniform_ball" => Ok(ChunkMethod::UniformBall),
        "uniform_all" => Ok(ChunkMethod::UniformAll),
        "lazy_walk" => Ok(ChunkMethod::LazyWalk),
        "subproduct" => {
            let group = graph.group().ok_or_else(|| Error::Unsupported("subproduct chunks need a Cayley graph".into()))?;
            let list = elements.ok_or_else(|| Error::Argument("subproduct needs elements".into()))?;
            let elems = list
                .split(';')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| group.parse_element(t))
                .collect::<Result<_>>()?;
            Ok(ChunkMethod::Subproduct(elems))
        }
        other => arg(format!("unknown chunk method `{other}` (uniform_ball, uniform_all, lazy_walk, subproduct)")),
    }
}

/// Parse `start:stop:step` (inclusive) or a comma list.
pub fn parse_sizes(text: &str) -> Result<Vec<usize>> {
    let bad = || Error::Argument(format!("bad size list `{text}`"));
    if text.contains(':') {
        let parts: Vec<usize> = text.split(':').map(|p| p.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?;
        let (start, stop, step) = match parts[..] {
            [a, b] => (a, b, 1),
            [a, b, c] => (a, b, c),
            _ => return Err(bad()),
        };
        if step == 0 || stop < start {
            return Err(bad());
        }
        Ok((start..=stop).step_by(step).collect())
    } else {
        text.split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect()
    }
}

/// A header plus string rows, as used for CSV and plot data.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    /// Parse comma-separated text with a header line.
    pub fn from_csv(text: &str) -> Result<Table> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#'));
        let headers: Vec<String> = lines
            .next()
            .ok_or_else(|| Error::Parse("empty table".into()))?
            .split(',')
            .map(str::to_string)
            .collect();
        let rows: Vec<Vec<String>> = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != headers.len()) {
            return Err(Error::Parse(format!("row {} has {} fields, header has {}", i + 1, r.len(), headers.len())));
        }
        Ok(Table { headers, rows })
    }

    pub fn column(&self, name: &str) -> Result<usize> {
        self.headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Argument(format!("unknown column `{name}`")))
    }
}

/// Whitespace-separated numeric columns under a `#` header line.
pub fn emit_plot_data(table: &Table, columns: &[&str]) -> Result<String> {
    if columns.is_empty() {
        return arg("no plot columns selected");
    }
    if table.rows.is_empty() {
        return arg("table has no rows");
    }
    let idx: Vec<usize> = columns.iter().map(|c| table.column(c)).collect::<Result<_>>()?;
    let mut out = format!("# {}\n", columns.join(" "));
    for row in &table.rows {
        let cells: Vec<&str> = idx.iter().map(|&i| row[i].as_str()).collect();
        if let Some(c) = cells.iter().find(|c| c.parse::<f64>().is_err()) {
            return Err(Error::Parse(format!("non-numeric plot value `{c}`")));
        }
        writeln!(out, "{}", cells.join(" ")).unwrap();
    }
    Ok(out)
}

/// One selftest check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SelftestReport {
    pub checks: Vec<CheckLine>,
    pub files: Vec<PathBuf>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            writeln!(out, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail).unwrap();
        }
        writeln!(out, "{} of {} checks passed", self.checks.iter().filter(|c| c.passed).count(), self.checks.len()).unwrap();
        out
    }

    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(CheckLine { name: name.into(), passed, detail: detail.into() });
    }
}

fn write_file(report: &mut SelftestReport, dir: &Path, name: &str, content: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, content)?;
    report.files.push(path);
    Ok(())
}

/// A fast property suite over small instances. Every output file is a pure
/// function of `seed`.
pub fn selftest(seed: u64, out_dir: &Path) -> Result<SelftestReport> {
    fs::create_dir_all(out_dir)?;
    let budget = Budget::default();
    let mut rep = SelftestReport::default();

    // graphs
    let presets: Vec<VertexTransitiveGraph> = vec![
        families::cycle(8)?,
        families::hypercube(3)?,
        families::torus(4, 2)?,
        families::complete(5)?,
        families::petersen(),
    ];
    let mut graph_text = String::new();
    for g in &presets {
        let ok = g.verify_vertex_transitive().passed() && g.diameter() == g.diameter_all_pairs();
        let back = VertexTransitiveGraph::from_text(&g.to_text())?;
        rep.check(&format!("graph {}", g.label()), ok && back.to_text() == g.to_text(), format!("N={} d={} degree={}", g.vertex_count(), g.diameter(), g.degree()));
        graph_text.push_str(&g.to_text());
    }
    write_file(&mut rep, out_dir, "graphs.txt", &graph_text)?;

    // distributions
    let q3 = families::hypercube(3)?;
    let ball = build_chunk_distribution(&q3, 2, ChunkMethod::UniformBall)?;
    rep.check("chunk q3 ball", (ball.delta - 0.125).abs() < 1e-12, format!("delta={}", ball.delta));
    write_file(&mut rep, out_dir, "q3_ball.csv", &ball.dist.to_csv(ball.delta))?;
    let z4 = crate::group::FiniteGroup::build(&crate::group::GroupSpec::Cyclic(4))?;
    let sub = subproduct_distribution(&z4, &[crate::group::GroupElement(1), crate::group::GroupElement(1)]);
    rep.check("subproduct z4", sub.weights() == [0.25, 0.5, 0.25, 0.0], format!("{:?}", sub.weights()));
    let er_group = crate::group::FiniteGroup::build(&"power(cyclic(2),4)".parse()?)?;
    let er = er_generator_experiment(&er_group, 12, 0.5, 100, crate::rng::child_seed(seed, "selftest_er", 0))?;
    rep.check(
        "er generators z2^4",
        er.predicted_floor.map_or(true, |f| er.fraction() >= f - 3.0 * er.std_err()),
        format!("fraction={} lambda={} floor={}", er.fraction(), er.lambda, er.floor_text()),
    );
    let mut rng = task_rng(seed, "selftest_tv", 0);
    let mut tv_ok = 0;
    for i in 0..500 {
        let shape = if i % 2 == 0 { vec![3, 4] } else { vec![2, 3, 2] };
        let x = JointTable::random(shape.clone(), &mut rng);
        let y = JointTable::random(shape, &mut rng);
        let r = tv_chain_bound_check(&x, &y)?;
        if r.holds && r.maximization == Maximization::Exhaustive {
            tv_ok += 1;
        }
    }
    rep.check("tv chain", tv_ok == 500, format!("{tv_ok}/500 exhaustive cases hold"));

    // snakes
    let c8 = families::cycle(8)?;
    let c8_ball = build_chunk_distribution(&c8, 2, ChunkMethod::UniformBall)?;
    let c8_model = ChunkModel::new(&c8, c8_ball)?;
    let params = SnakeParams::new(2, 2)?.with_delta(c8_model.delta());
    let mut rng = task_rng(seed, "selftest_snakes", 0);
    let mut snake_text = String::new();
    let (mut unique, mut prefix, mut pushes) = (true, true, true);
    for _ in 0..200 {
        let x = c8_model.sample_snake(0, &params, &mut rng)?;
        let f = f_table(&c8, &x)?;
        unique &= enumerate_local_minima(&c8, |v| f[v as usize])? == vec![x.endpoint()];
        let (j, y) = c8_model.flick(&x, &mut rng);
        prefix &= y.head(j) == x.head(j);
        pushes &= sparse_scores_pull(&c8_model, &x) == sparse_scores_push(&c8_model, &x);
        snake_text.push_str(&x.to_text());
    }
    write_file(&mut rep, out_dir, "c8_snakes.txt", &snake_text)?;
    rep.check("unique minimum c8", unique, "200 snakes");
    rep.check("flick prefix c8", prefix, "200 flicks");
    rep.check("score paths agree c8", pushes, "pull and push forms identical");
    let x = c8_model.sample_snake(0, &params, &mut rng)?;
    let exact = flick_outcome_exact(&c8_model, &x, &budget)?;
    let (good, _, _) = flick_outcome_mc(&c8_model, &x, 20_000, crate::rng::child_seed(seed, "selftest_mc", 0));
    let est = crate::stats::Estimate::new(good, 20_000);
    rep.check(
        "consistency exact vs mc",
        (est.mean() - exact.consistent_distinct).abs() <= 3.0 * est.std_err().max(1e-3),
        format!("exact={} mc={}", exact.consistent_distinct, est.mean()),
    );
    let he = hitting_exact(&c8_model, &x, &budget)?;
    let hm = hitting_mc(&c8_model, &x, 20_000, crate::rng::child_seed(seed, "selftest_hit", 0))?;
    let worst = he.per_vertex.iter().zip(&hm.per_vertex).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    rep.check("hitting exact vs mc", worst <= 0.02, format!("max gap={worst}"));
    let mut mixing_ok = true;
    let mut mixing_csv = String::from("graph,t,max_tv,delta\n");
    for (g, name) in [(&q3, "q3"), (&c8, "c8")] {
        let m = ChunkModel::new(g, build_chunk_distribution(g, 2, ChunkMethod::UniformBall)?)?;
        for t in 2..=params.length() {
            let r = chunk_mixing_check(&m, &params, t, 0, 0, &budget)?;
            mixing_ok &= r.holds;
            writeln!(mixing_csv, "{name},{t},{},{}", r.max_tv, r.delta).unwrap();
        }
    }
    write_file(&mut rep, out_dir, "mixing.csv", &mixing_csv)?;
    rep.check("chunk mixing", mixing_ok, "q3 and c8, s=2, all t");
    let s_check = sparse_implies_hitting_check(&c8_model, &x, 1.0, 0, 0, &budget)?;
    rep.check("sparse implies hitting c8", s_check.verdict == CheckVerdict::Holds, format!("hit={} bound={}", s_check.hitting_max, s_check.bound));

    // adversary
    let ens = enumerate_snake_support(&c8_model, 0, &params, &budget)?;
    let t2 = theorem2_report(&c8_model, &ens, &budget)?;
    rep.check("w symmetry c8", t2.max_w_asymmetry < 1e-12, format!("max asymmetry={}", t2.max_w_asymmetry));
    rep.check(
        "lemma8 subset c8",
        t2.subset.is_empty() || crate::adversary::verify_lemma8(&ens.probs, &t2.relation, t2.lemma_r, &t2.subset),
        format!("|U|={} sum_R={}", t2.subset.len(), t2.sum_r),
    );
    write_file(&mut rep, out_dir, "adversary_report.txt", &t2.to_text())?;
    write_file(&mut rep, out_dir, "adversary_pairs.csv", &t2.pairs_csv())?;
    write_file(&mut rep, out_dir, "adversary_scores.csv", &t2.scores_csv())?;

    // solvers
    let sizes: Vec<Family> = [6, 8, 10, 12].iter().map(|&n| Family::Torus { n, dim: 2 }).collect();
    let table = query_complexity_experiment(&sizes, &InstanceSpec::default(), SolverKind::Aldous(None), 20, seed)?;
    let correct = table.trials.iter().all(|r| r.answer_correct);
    rep.check("aldous sweep", correct, format!("{} trials, all answers are x_L", table.trials.len()));
    let ceiling_ok = table.trials.iter().all(|r| r.queries <= (r.n * (1 + r.degree)) as u64);
    rep.check("query ceiling", ceiling_ok, "queries <= N(1+degree)");
    write_file(&mut rep, out_dir, "sweep_trials.csv", &table.trials_csv())?;
    write_file(&mut rep, out_dir, "sweep_summary.csv", &table.summary_csv())?;
    let plot = emit_plot_data(&Table::from_csv(&table.summary_csv())?, &["N", "queries_median", "lower_bound_rls"])?;
    write_file(&mut rep, out_dir, "sweep_plot.dat", &plot)?;
    let desc = descent_local_min_check(&q3, seed)?;
    rep.check("descent outputs are local minima", desc, "100 random value functions on q3");

    let text = rep.to_text();
    write_file(&mut rep, out_dir, "report.txt", &text)?;
    Ok(rep)
}

fn descent_local_min_check(graph: &VertexTransitiveGraph, seed: u64) -> Result<bool> {
    use rand::Rng;
    let mut rng = task_rng(seed, "selftest_descent", 0);
    for _ in 0..100 {
        let values: Vec<u32> = (0..graph.vertex_count()).map(|_| rng.gen_range(0..5)).collect();
        let mut o = crate::solvers::CountingOracle::new(values.clone());
        let start = rng.gen_range(0..graph.vertex_count() as u32);
        let r = crate::solvers::steepest_descent(graph, &mut o, start)?;
        if !verify_local_min(graph, |v| values[v as usize], r.vertex) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Snakes serialized one after another, as written by the CLI.
pub fn snakes_to_text(snakes: &[Snake]) -> String {
    snakes.iter().map(Snake::to_text).collect()
}

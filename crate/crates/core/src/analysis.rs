//! Snake properties: consistency, sparseness, hitting, chunk mixing,
//! goodness, and the tail bound on sums of `P` at uniform vertices.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;

use crate::budget::Budget;
use crate::error::{arg, Error, Result};
use crate::graph::GraphKind;
use crate::rng::task_rng;
use crate::snake::{is_consistent_seq, last_visits, ChunkModel, Snake, SnakeParams};
use crate::stats::Estimate;

/// Outcome split of a flick `(j, Y)` relative to `X`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FlickOutcome {
    /// Consistent with `x_L ≠ y_L`.
    pub consistent_distinct: f64,
    /// Consistent with `x_L = y_L`.
    pub consistent_same_end: f64,
    /// At least one disagreement.
    pub inconsistent: f64,
}

impl FlickOutcome {
    fn add(&mut self, consistent: bool, same_end: bool, w: f64) {
        match (consistent, same_end) {
            (false, _) => self.inconsistent += w,
            (true, true) => self.consistent_same_end += w,
            (true, false) => self.consistent_distinct += w,
        }
    }
}

/// A probability together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbEstimate {
    pub value: f64,
    /// Zero in exact mode.
    pub std_err: f64,
    pub exact: bool,
    pub trials: u64,
}

impl ProbEstimate {
    fn exact(value: f64) -> Self {
        ProbEstimate { value, std_err: 0.0, exact: true, trials: 0 }
    }

    fn from_counts(successes: u64, trials: u64) -> Self {
        let e = Estimate::new(successes, trials);
        ProbEstimate { value: e.mean(), std_err: e.std_err(), exact: false, trials }
    }
}

/// Number of tail seed tuples over all flick points.
pub fn tail_tuple_count(support: usize, ell: usize) -> u128 {
    (1..=ell).map(|c| (support as u128).saturating_pow((ell - c + 1) as u32)).fold(0u128, u128::saturating_add)
}

/// Exact flick outcome law by enumerating every tail seed tuple.
pub fn flick_outcome_exact(model: &ChunkModel, x: &Snake, budget: &Budget) -> Result<FlickOutcome> {
    let ell = x.ell();
    let needed = tail_tuple_count(model.support_size(), ell);
    if needed > budget.tail as u128 {
        return Err(Error::SizeLimit { what: "tail seed tuples".into(), needed, cap: budget.tail as u128 });
    }
    let visits = last_visits(x);
    let s = model.s();
    let mut out = FlickOutcome::default();
    for c in 1..=ell {
        let mut part = FlickOutcome::default();
        let mut buf = x.vertices[..=c * s].to_vec();
        enumerate_tails(model, &mut buf, ell + 1 - c, 1.0, &mut |y, w| {
            part.add(is_consistent_seq(&visits, y), y[y.len() - 1] == x.endpoint(), w);
        });
        out.consistent_distinct += part.consistent_distinct / ell as f64;
        out.consistent_same_end += part.consistent_same_end / ell as f64;
        out.inconsistent += part.inconsistent / ell as f64;
    }
    Ok(out)
}

fn enumerate_tails(model: &ChunkModel, buf: &mut Vec<u32>, remaining: usize, w: f64, f: &mut impl FnMut(&[u32], f64)) {
    if remaining == 0 {
        f(buf, w);
        return;
    }
    let graph = model.graph();
    let x = *buf.last().unwrap();
    let base = buf.len();
    for i in 0..model.support_size() {
        buf.extend(model.path(i).iter().map(|&u| graph.apply(x, u)));
        enumerate_tails(model, buf, remaining - 1, w * model.weight(i), f);
        buf.truncate(base);
    }
}

/// Flick outcome frequencies over `trials` independent flicks.
pub fn flick_outcome_mc(model: &ChunkModel, x: &Snake, trials: u64, seed: u64) -> (u64, u64, u64) {
    let visits = last_visits(x);
    let counts: Vec<(u64, u64, u64)> = (0..trials.div_ceil(MC_BATCH))
        .into_par_iter()
        .map(|b| {
            let mut rng = task_rng(seed, "flick_outcome", b);
            let mut c = (0, 0, 0);
            for _ in (b * MC_BATCH)..((b + 1) * MC_BATCH).min(trials) {
                let (_, y) = model.flick(x, &mut rng);
                match (is_consistent_seq(&visits, &y.vertices), y.endpoint() == x.endpoint()) {
                    (false, _) => c.2 += 1,
                    (true, true) => c.1 += 1,
                    (true, false) => c.0 += 1,
                }
            }
            c
        })
        .collect();
    counts.into_iter().fold((0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2))
}

const MC_BATCH: u64 = 1024;

/// `Pr_{j,Y}[X, Y consistent ∧ x_L ≠ y_L]`; exact when the tail enumeration fits the budget.
pub fn consistency_probability(model: &ChunkModel, x: &Snake, trials: u64, seed: u64, budget: &Budget) -> Result<ProbEstimate> {
    match flick_outcome_exact(model, x, budget) {
        Ok(o) => Ok(ProbEstimate::exact(o.consistent_distinct)),
        Err(Error::SizeLimit { .. }) => {
            if trials == 0 {
                return arg("trials must be >= 1");
            }
            let (good, _, _) = flick_outcome_mc(model, x, trials, seed);
            Ok(ProbEstimate::from_counts(good, trials))
        }
        Err(e) => Err(e),
    }
}

/// Sparse scores `Σ_{k=1..ℓ} P(σ⁻¹_{x_sk}(v))` for every `v`, evaluating each
/// preimage directly (`x⁻¹·v` through group arithmetic on Cayley graphs).
pub fn sparse_scores_pull(model: &ChunkModel, x: &Snake) -> Vec<f64> {
    let graph = model.graph();
    let n = graph.vertex_count();
    let starts: Vec<u32> = (1..=x.ell()).map(|k| x.chunk_start(k)).collect();
    match graph.kind() {
        GraphKind::Cayley { group, .. } => {
            let inv: Vec<u32> = starts.iter().map(|&w| group.inv(w)).collect();
            (0..n as u32)
                .map(|v| inv.iter().fold(0.0, |acc, &wi| acc + model.p(group.mul(wi, v))))
                .collect()
        }
        GraphKind::Explicit { .. } => (0..n as u32)
            .map(|v| starts.iter().fold(0.0, |acc, &w| acc + model.p(graph.apply_inverse(w, v))))
            .collect(),
    }
}

/// Same scores, pushing the nonzero entries of `P` forward through each `σ_{x_sk}`.
pub fn sparse_scores_push(model: &ChunkModel, x: &Snake) -> Vec<f64> {
    let graph = model.graph();
    let support: Vec<u32> = (0..graph.vertex_count() as u32).filter(|&u| model.p(u) > 0.0).collect();
    let mut score = vec![0.0; graph.vertex_count()];
    for k in 1..=x.ell() {
        let w = x.chunk_start(k);
        for &u in &support {
            score[graph.apply(w, u) as usize] += model.p(u);
        }
    }
    score
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparseReport {
    pub max_score: f64,
    pub argmax: u32,
    /// `ε·ℓ`.
    pub threshold: f64,
    pub sparse: bool,
}

impl SparseReport {
    /// Smallest ε for which the snake is ε-sparse.
    pub fn min_eps(&self, ell: usize) -> f64 {
        self.max_score / ell as f64
    }
}

pub fn is_sparse(model: &ChunkModel, x: &Snake, eps: f64) -> SparseReport {
    let scores = sparse_scores_pull(model, x);
    let (argmax, max_score) = argmax(&scores);
    let threshold = eps * x.ell() as f64;
    SparseReport { max_score, argmax, threshold, sparse: max_score <= threshold + 1e-12 }
}

fn argmax(values: &[f64]) -> (u32, f64) {
    let mut best = (0u32, f64::NEG_INFINITY);
    for (i, &v) in values.iter().enumerate() {
        if v > best.1 {
            best = (i as u32, v);
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq)]
pub struct HittingTable {
    /// `Pr_{j,Y}[v ∈ Y_{j+1→L}]` per vertex (Monte Carlo frequencies when not exact).
    pub per_vertex: Vec<f64>,
    pub max: f64,
    pub argmax: u32,
    pub exact: bool,
    /// Standard error at the maximizing vertex in Monte Carlo mode.
    pub std_err: Option<f64>,
}

/// Exact hitting probabilities. For each flick point and each vertex within
/// reach, a sparse measure over chunk endpoints carries the mass that has not
/// yet met the vertex; a chunk from endpoint `w` meets `v` with probability
/// `P(σ_w⁻¹(v))`.
pub fn hitting_exact(model: &ChunkModel, x: &Snake, budget: &Budget) -> Result<HittingTable> {
    let graph = model.graph();
    let n = graph.vertex_count();
    let ell = x.ell();
    let s = model.s();
    let work = n as u128 * model.support_size() as u128 * ell as u128;
    if work > budget.dp as u128 {
        return Err(Error::SizeLimit { what: "hitting DP work N*|support|*ell".into(), needed: work, cap: budget.dp as u128 });
    }
    let mut per_vertex = vec![0.0; n];
    for c in 1..=ell {
        let w0 = x.chunk_start(c);
        let chunks = ell + 1 - c;
        let candidates = graph.ball(w0, chunks * s);
        let hits: Vec<f64> = candidates.par_iter().map(|&v| hit_probability(model, w0, chunks, v)).collect();
        for (&v, h) in candidates.iter().zip(hits) {
            per_vertex[v as usize] += h / ell as f64;
        }
    }
    let (argmax, max) = argmax(&per_vertex);
    Ok(HittingTable { per_vertex, max, argmax, exact: true, std_err: None })
}

/// Probability that `chunks` fresh chunks started at `w0` visit `v`.
fn hit_probability(model: &ChunkModel, w0: u32, chunks: usize, v: u32) -> f64 {
    let graph = model.graph();
    let mut alive: BTreeMap<u32, f64> = BTreeMap::from([(w0, 1.0)]);
    let mut hit = 0.0;
    for step in 0..chunks {
        let last = step + 1 == chunks;
        let mut next: BTreeMap<u32, f64> = BTreeMap::new();
        for (&w, &m) in &alive {
            let u = graph.apply_inverse(w, v);
            hit += m * model.p(u);
            if last {
                continue;
            }
            let covered = model.covering(u);
            let mut ci = 0;
            for i in 0..model.support_size() {
                if ci < covered.len() && covered[ci] as usize == i {
                    ci += 1;
                    continue;
                }
                let end = graph.apply(w, model.seeds()[i]);
                *next.entry(end).or_insert(0.0) += m * model.weight(i);
            }
        }
        alive = next;
    }
    hit
}

/// Monte Carlo hitting frequencies over `trials` flicks.
pub fn hitting_mc(model: &ChunkModel, x: &Snake, trials: u64, seed: u64) -> Result<HittingTable> {
    if trials == 0 {
        return arg("trials must be >= 1");
    }
    let n = model.graph().vertex_count();
    let batches: Vec<Vec<u64>> = (0..trials.div_ceil(MC_BATCH))
        .into_par_iter()
        .map(|b| {
            let mut rng = task_rng(seed, "hitting", b);
            let mut counts = vec![0u64; n];
            let mut stamp = vec![u64::MAX; n];
            for t in (b * MC_BATCH)..((b + 1) * MC_BATCH).min(trials) {
                let (j, y) = model.flick(x, &mut rng);
                for &v in &y.vertices[j + 1..] {
                    if stamp[v as usize] != t {
                        stamp[v as usize] = t;
                        counts[v as usize] += 1;
                    }
                }
            }
            counts
        })
        .collect();
    let mut counts = vec![0u64; n];
    for b in batches {
        for (c, x) in counts.iter_mut().zip(b) {
            *c += x;
        }
    }
    let per_vertex: Vec<f64> = counts.iter().map(|&c| c as f64 / trials as f64).collect();
    let (argmax, max) = argmax(&per_vertex);
    Ok(HittingTable { per_vertex, max, argmax, exact: false, std_err: Some(Estimate::new(counts[argmax as usize], trials).std_err()) })
}

/// Exact when the DP fits the budget, Monte Carlo otherwise.
pub fn hitting_probability(model: &ChunkModel, x: &Snake, trials: u64, seed: u64, budget: &Budget) -> Result<HittingTable> {
    match hitting_exact(model, x, budget) {
        Err(Error::SizeLimit { .. }) => hitting_mc(model, x, trials, seed),
        r => r,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckVerdict {
    Holds,
    Violated,
    PreconditionUnmet,
    NotSparse,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparseHittingReport {
    pub eps: f64,
    pub sparse: SparseReport,
    /// `2(L−s)/N`.
    pub eps_floor: f64,
    pub hitting_max: f64,
    pub hitting_exact: bool,
    pub hitting_std_err: f64,
    /// `2ε`.
    pub bound: f64,
    /// `(1/ℓ)·max score + (L−s)(δ + 1/N)`, valid for any δ.
    pub realized_bound: f64,
    pub verdict: CheckVerdict,
}

pub fn sparse_implies_hitting_check(model: &ChunkModel, x: &Snake, eps: f64, trials: u64, seed: u64, budget: &Budget) -> Result<SparseHittingReport> {
    let n = model.graph().vertex_count() as f64;
    let (l, s, ell) = (x.length() as f64, model.s() as f64, x.ell() as f64);
    let sparse = is_sparse(model, x, eps);
    let eps_floor = 2.0 * (l - s) / n;
    let hit = hitting_probability(model, x, trials, seed, budget)?;
    let hitting_std_err = hit.std_err.unwrap_or(0.0);
    let bound = 2.0 * eps;
    let realized_bound = sparse.max_score / ell + (l - s) * (model.delta() + 1.0 / n);
    let verdict = if !sparse.sparse {
        CheckVerdict::NotSparse
    } else if eps < eps_floor {
        CheckVerdict::PreconditionUnmet
    } else if hit.max <= bound + 3.0 * hitting_std_err + 1e-12 {
        CheckVerdict::Holds
    } else {
        CheckVerdict::Violated
    };
    Ok(SparseHittingReport {
        eps,
        sparse,
        eps_floor,
        hitting_max: hit.max,
        hitting_exact: hit.exact,
        hitting_std_err,
        bound,
        realized_bound,
        verdict,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MixingMethod {
    /// Every start vertex computed exactly.
    AllStarts,
    /// One start computed exactly; left translation carries it to all others.
    Translated,
    /// Empirical law from the base vertex.
    MonteCarlo { trials: u64, std_err: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixingReport {
    pub t: usize,
    pub max_tv: f64,
    pub delta: f64,
    pub method: MixingMethod,
    pub holds: bool,
}

/// Exact law of `x_t` given `x_0 = start`: chunk-endpoint convolution, then
/// the within-chunk position map.
pub fn position_law(model: &ChunkModel, start: u32, t: usize) -> Vec<f64> {
    let graph = model.graph();
    let n = graph.vertex_count();
    let s = model.s();
    let k = (t - 1) / s;
    let r = t - s * k;
    let mut mu = vec![0.0; n];
    mu[start as usize] = 1.0;
    for _ in 0..k {
        let mut next = vec![0.0; n];
        for (w, &m) in mu.iter().enumerate() {
            if m > 0.0 {
                for (i, &g) in model.seeds().iter().enumerate() {
                    next[graph.apply(w as u32, g) as usize] += m * model.weight(i);
                }
            }
        }
        mu = next;
    }
    let mut nu = vec![0.0; n];
    for i in 0..model.support_size() {
        nu[model.path(i)[r - 1] as usize] += model.weight(i);
    }
    let nu_support: Vec<(u32, f64)> = nu.iter().enumerate().filter(|(_, &p)| p > 0.0).map(|(u, &p)| (u as u32, p)).collect();
    let mut law = vec![0.0; n];
    for (w, &m) in mu.iter().enumerate() {
        if m > 0.0 {
            for &(u, p) in &nu_support {
                law[graph.apply(w as u32, u) as usize] += m * p;
            }
        }
    }
    law
}

/// Max over start vertices of tv(law of `x_t`, uniform), for `s ≤ t ≤ L`.
pub fn chunk_mixing_check(model: &ChunkModel, params: &SnakeParams, t: usize, trials: u64, seed: u64, budget: &Budget) -> Result<MixingReport> {
    model.check_params(params)?;
    let s = model.s();
    if t < s || t > params.length() {
        return arg(format!("t = {t} outside [s, L] = [{s}, {}]", params.length()));
    }
    let graph = model.graph();
    let n = graph.vertex_count();
    let per_start = n as u128 * (model.support_size() as u128) * (t / s + 1) as u128;
    let delta = model.delta();
    let (max_tv, method) = if per_start * n as u128 <= budget.dp as u128 {
        let tvs: Vec<f64> = (0..n as u32)
            .into_par_iter()
            .map(|x| crate::mixing::tv_to_uniform(&position_law(model, x, t)))
            .collect();
        (tvs.into_iter().fold(0.0, f64::max), MixingMethod::AllStarts)
    } else if graph.is_cayley() && per_start <= budget.dp as u128 {
        (crate::mixing::tv_to_uniform(&position_law(model, graph.base(), t)), MixingMethod::Translated)
    } else {
        if trials == 0 {
            return arg("trials must be >= 1");
        }
        let mut rng = task_rng(seed, "mixing", t as u64);
        let mut counts = vec![0u64; n];
        for _ in 0..trials {
            let snake = model.sample_snake(graph.base(), params, &mut rng)?;
            counts[snake.vertices[t] as usize] += 1;
        }
        let law: Vec<f64> = counts.iter().map(|&c| c as f64 / trials as f64).collect();
        let std_err = 0.5 * (n as f64 / trials as f64).sqrt();
        (crate::mixing::tv_to_uniform(&law), MixingMethod::MonteCarlo { trials, std_err })
    };
    let slack = match method {
        MixingMethod::MonteCarlo { std_err, .. } => 3.0 * std_err,
        _ => 1e-9,
    };
    Ok(MixingReport { t, max_tv, delta, method, holds: max_tv <= delta + slack })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Goodness {
    pub consistency: ProbEstimate,
    pub hitting_max: f64,
    pub hitting_exact: bool,
    pub is_good: bool,
}

/// `(consistency ≥ threshold) ∧ (hitting max ≤ ε)`.
pub fn classify_goodness(model: &ChunkModel, x: &Snake, params: &SnakeParams, trials: u64, seed: u64, budget: &Budget) -> Result<Goodness> {
    let consistency = consistency_probability(model, x, trials, crate::rng::child_seed(seed, "consistency", 0), budget)?;
    let hit = hitting_probability(model, x, trials, crate::rng::child_seed(seed, "hitting", 0), budget)?;
    let is_good = consistency.value >= params.consist_threshold && hit.max <= params.eps;
    Ok(Goodness { consistency, hitting_max: hit.max, hitting_exact: hit.exact, is_good })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoodnessRate {
    pub good: u64,
    pub trials: u64,
    pub mean_consistency: f64,
    /// `2(L−s)²/N`.
    pub regime_value: f64,
    /// `0.9999 − 2/N`, when `2(L−s)²/N ≤ 10⁻⁴`.
    pub consistency_floor: Option<f64>,
    /// `0.999 − 20/N`, under the same condition.
    pub markov_floor: Option<f64>,
}

impl GoodnessRate {
    pub fn fraction(&self) -> f64 {
        self.good as f64 / self.trials as f64
    }

    pub fn std_err(&self) -> f64 {
        Estimate::new(self.good, self.trials).std_err()
    }
}

pub fn goodness_rate(model: &ChunkModel, params: &SnakeParams, snake_trials: u64, mc_trials: u64, seed: u64, budget: &Budget) -> Result<GoodnessRate> {
    if snake_trials == 0 {
        return arg("snake_trials must be >= 1");
    }
    model.check_params(params)?;
    let base = model.graph().base();
    let results: Vec<Goodness> = (0..snake_trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = task_rng(seed, "goodness_snake", i);
            let x = model.sample_snake(base, params, &mut rng)?;
            classify_goodness(model, &x, params, mc_trials, crate::rng::child_seed(seed, "goodness_eval", i), budget)
        })
        .collect::<Result<_>>()?;
    let good = results.iter().filter(|g| g.is_good).count() as u64;
    let mean_consistency = results.iter().map(|g| g.consistency.value).fold(0.0, |a, b| a + b) / snake_trials as f64;
    let n = model.graph().vertex_count() as f64;
    let ls = (params.length() - params.s) as f64;
    let regime_value = 2.0 * ls * ls / n;
    let applies = regime_value <= 1e-4;
    Ok(GoodnessRate {
        good,
        trials: snake_trials,
        mean_consistency,
        regime_value,
        consistency_floor: applies.then(|| 0.9999 - 2.0 / n),
        markov_floor: applies.then(|| 0.999 - 20.0 / n),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailReport {
    pub exceed: u64,
    pub trials: u64,
    pub threshold: f64,
    /// `2^{−ℓε}` when `s/N ≤ ε²/6`.
    pub ceiling: Option<f64>,
    pub precondition: bool,
}

impl TailReport {
    pub fn frequency(&self) -> f64 {
        self.exceed as f64 / self.trials as f64
    }

    pub fn std_err(&self) -> f64 {
        Estimate::new(self.exceed, self.trials).std_err()
    }
}

/// Frequency of `Σ_{i=1..ℓ} P(u_i) > 2ℓε` for independent uniform `u_i`.
pub fn sparse_tail_experiment(model: &ChunkModel, ell: usize, eps: f64, trials: u64, seed: u64) -> Result<TailReport> {
    if trials == 0 || ell == 0 {
        return arg("trials and ell must be >= 1");
    }
    let n = model.graph().vertex_count();
    let threshold = 2.0 * ell as f64 * eps;
    let exceed = (0..trials.div_ceil(MC_BATCH))
        .into_par_iter()
        .map(|b| {
            let mut rng = task_rng(seed, "sparse_tail", b);
            let mut c = 0u64;
            for _ in (b * MC_BATCH)..((b + 1) * MC_BATCH).min(trials) {
                let sum: f64 = (0..ell).map(|_| model.p(rng.gen_range(0..n as u32))).sum();
                c += u64::from(sum > threshold);
            }
            c
        })
        .sum();
    let precondition = model.s() as f64 / n as f64 <= eps * eps / 6.0;
    Ok(TailReport { exceed, trials, threshold, ceiling: precondition.then(|| (-(ell as f64) * eps).exp2()), precondition })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::mixing::{build_chunk_distribution, ChunkDistribution, ChunkMethod};

    #[test]
    fn stationary_support() {
        let c6 = families::cycle(6).unwrap();
        let model = ChunkModel::new(&c6, ChunkDistribution::point_mass(&c6, 2)).unwrap();
        let params = SnakeParams::new(2, 2).unwrap();
        let x = model.sample_snake(0, &params, &mut task_rng(0, "t", 0)).unwrap();
        let b = Budget::default();
        assert_eq!(consistency_probability(&model, &x, 10, 0, &b).unwrap().value, 0.0);
        let sp = is_sparse(&model, &x, 1.0);
        assert_eq!((sp.max_score, sp.sparse), (2.0, true));
        assert!(!is_sparse(&model, &x, 0.99).sparse);
        let g = classify_goodness(&model, &x, &params, 10, 0, &b).unwrap();
        assert!(!g.is_good);
        let h = hitting_exact(&model, &x, &b).unwrap();
        assert_eq!(h.per_vertex[0], 1.0);
    }

    #[test]
    fn mixing_at_t_equal_s_is_delta() {
        let q3 = families::hypercube(3).unwrap();
        let d = build_chunk_distribution(&q3, 2, ChunkMethod::UniformBall).unwrap();
        let model = ChunkModel::new(&q3, d.clone()).unwrap();
        let params = SnakeParams::new(2, 2).unwrap();
        let r = chunk_mixing_check(&model, &params, 2, 0, 0, &Budget::default()).unwrap();
        assert!((r.max_tv - d.delta).abs() < 1e-12);
        assert!(chunk_mixing_check(&model, &params, 1, 0, 0, &Budget::default()).is_err());
    }

    #[test]
    fn tail_trivial_cases() {
        let t = families::torus(6, 2).unwrap();
        let d = build_chunk_distribution(&t, 6, ChunkMethod::UniformAll).unwrap();
        let model = ChunkModel::new(&t, d).unwrap();
        let r = sparse_tail_experiment(&model, 3, 1.0, 5000, 1).unwrap();
        assert_eq!(r.exceed, 0);
        let r = sparse_tail_experiment(&model, 3, 0.1, 100, 1).unwrap();
        assert!(!r.precondition && r.ceiling.is_none());
    }
}

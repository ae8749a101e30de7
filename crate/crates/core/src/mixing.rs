//! Exact vertex distributions, total variation, random subproducts, chunk
//! distributions `D_s`, and the total-variation chain bound.

use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{arg, Error, Result};
use crate::graph::VertexTransitiveGraph;
use crate::group::{FiniteGroup, GroupElement};
use crate::rng::task_rng;

/// Tolerance on the total mass of a distribution.
pub const MASS_TOL: f64 = 1e-9;
/// Slack for pointwise comparisons against exact thresholds.
const POINT_SLACK: f64 = 1e-12;

/// Probability vector indexed by vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexDistribution {
    weights: Vec<f64>,
}

impl VertexDistribution {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return arg("distribution over an empty set");
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return arg(format!("negative or non-finite weight {w}"));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > MASS_TOL {
            return arg(format!("weights sum to {sum}, not 1"));
        }
        Ok(VertexDistribution { weights })
    }

    pub fn uniform(n: usize) -> Self {
        VertexDistribution { weights: vec![1.0 / n as f64; n] }
    }

    pub fn point(n: usize, v: u32) -> Self {
        let mut weights = vec![0.0; n];
        weights[v as usize] = 1.0;
        VertexDistribution { weights }
    }

    /// Uniform on the given vertex set.
    pub fn uniform_on(n: usize, set: &[u32]) -> Result<Self> {
        if set.is_empty() {
            return arg("uniform distribution on an empty set");
        }
        let mut weights = vec![0.0; n];
        let w = 1.0 / set.len() as f64;
        for &v in set {
            weights[v as usize] = w;
        }
        Ok(VertexDistribution { weights })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn get(&self, v: u32) -> f64 {
        self.weights[v as usize]
    }

    pub fn support(&self) -> Vec<u32> {
        (0..self.weights.len() as u32).filter(|&v| self.weights[v as usize] > 0.0).collect()
    }

    pub fn sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Largest pointwise deviation `max_g |N·D(g) − 1|`: the smallest δ for
    /// which the distribution is δ-uniform.
    pub fn pointwise_deviation(&self) -> f64 {
        let n = self.weights.len() as f64;
        self.weights.iter().map(|w| (n * w - 1.0).abs()).fold(0.0, f64::max)
    }

    /// `vertex,weight` rows followed by a `# sum=<s> delta=<d>` trailer.
    pub fn to_csv(&self, delta: f64) -> String {
        let mut out = String::from("vertex,weight\n");
        for (v, w) in self.weights.iter().enumerate() {
            writeln!(out, "{v},{w}").unwrap();
        }
        writeln!(out, "# sum={} delta={}", self.sum(), delta).unwrap();
        out
    }
}

/// `(1/2) Σ |D1(ω) − D2(ω)|`.
pub fn tv_distance(a: &VertexDistribution, b: &VertexDistribution) -> Result<f64> {
    tv_slices(a.weights(), b.weights())
}

pub(crate) fn tv_slices(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return arg(format!("dimension mismatch: {} vs {}", a.len(), b.len()));
    }
    Ok(0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>())
}

/// tv distance to the uniform distribution on the same index set.
pub fn tv_to_uniform(weights: &[f64]) -> f64 {
    let u = 1.0 / weights.len() as f64;
    0.5 * weights.iter().map(|w| (w - u).abs()).sum::<f64>()
}

/// Exact law of `g_1^{a_1}···g_s^{a_s}` under fair independent bits.
pub fn subproduct_distribution(group: &FiniteGroup, gens: &[GroupElement]) -> VertexDistribution {
    let n = group.order();
    let mut d = vec![0.0; n];
    d[group.identity().id()] = 1.0;
    let mut next = vec![0.0; n];
    for g in gens {
        next.iter_mut().for_each(|x| *x = 0.0);
        for (h, &w) in d.iter().enumerate() {
            if w > 0.0 {
                next[h] += 0.5 * w;
                next[group.mul(h as u32, g.0) as usize] += 0.5 * w;
            }
        }
        std::mem::swap(&mut d, &mut next);
    }
    VertexDistribution { weights: d }
}

/// `(1−δ)/|G| ≤ D(g) ≤ (1+δ)/|G|` for every `g`.
pub fn is_delta_uniform(d: &VertexDistribution, delta: f64) -> bool {
    let n = d.len() as f64;
    d.weights()
        .iter()
        .all(|&w| w >= (1.0 - delta) / n - POINT_SLACK && w <= (1.0 + delta) / n + POINT_SLACK)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErExperiment {
    pub trials: u64,
    pub passes: u64,
    /// `s − 2·log₂|G| − 2·log₂(1/δ)`.
    pub lambda: f64,
    /// `1 − 2^{−λ}`, or `None` when `λ ≤ 0` and the bound is vacuous.
    pub predicted_floor: Option<f64>,
}

impl ErExperiment {
    pub fn fraction(&self) -> f64 {
        self.passes as f64 / self.trials as f64
    }

    pub fn std_err(&self) -> f64 {
        let p = self.fraction();
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    pub fn floor_text(&self) -> String {
        match self.predicted_floor {
            Some(f) => format!("{f}"),
            None => "vacuous (<= 0)".to_string(),
        }
    }
}

pub fn er_lambda(order: usize, s: usize, delta: f64) -> f64 {
    s as f64 - 2.0 * (order as f64).log2() - 2.0 * (1.0 / delta).log2()
}

/// Draw `trials` sequences of `s` uniform elements and count the δ-uniform ones.
pub fn er_generator_experiment(group: &FiniteGroup, s: usize, delta: f64, trials: u64, seed: u64) -> Result<ErExperiment> {
    if trials == 0 {
        return arg("trials must be >= 1");
    }
    let passes = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = task_rng(seed, "er_generators", t);
            let gens: Vec<GroupElement> = (0..s).map(|_| GroupElement(rng.gen_range(0..group.order() as u32))).collect();
            u64::from(is_delta_uniform(&subproduct_distribution(group, &gens), delta))
        })
        .sum();
    let lambda = er_lambda(group.order(), s, delta);
    let predicted_floor = (lambda > 0.0).then(|| 1.0 - (-lambda).exp2());
    Ok(ErExperiment { trials, passes, lambda, predicted_floor })
}

/// How `D_s` is realized.
#[derive(Debug, Clone, PartialEq)]
pub enum ChunkMethod {
    /// Uniform on the ball `B(s)`.
    UniformBall,
    /// Random subproduct of the listed elements (each a generator, an inverse
    /// generator, or the identity, at most `s` of them).
    Subproduct(Vec<GroupElement>),
    /// `s` steps of the lazy walk: hold with probability 1/2, else move to a
    /// uniform neighbor.
    LazyWalk,
    /// Uniform on all vertices; requires `s` to equal the diameter.
    UniformAll,
}

impl ChunkMethod {
    pub fn name(&self) -> &'static str {
        match self {
            ChunkMethod::UniformBall => "uniform_ball",
            ChunkMethod::Subproduct(_) => "subproduct",
            ChunkMethod::LazyWalk => "lazy_walk",
            ChunkMethod::UniformAll => "uniform_all",
        }
    }
}

/// `D_s`: a distribution on `B(s)` with its realized distance to uniform.
#[derive(Debug, Clone, PartialEq)]
pub struct ChunkDistribution {
    pub dist: VertexDistribution,
    pub radius: usize,
    /// Exact tv distance to uniform over all vertices.
    pub delta: f64,
    /// Smallest pointwise δ (E-R sense); tv is at most half of it.
    pub pointwise_delta: f64,
    pub method: ChunkMethod,
}

impl ChunkDistribution {
    pub fn recompute_delta(&self) -> f64 {
        tv_to_uniform(self.dist.weights())
    }

    /// A point mass at the base vertex, for degenerate checks.
    pub fn point_mass(graph: &VertexTransitiveGraph, radius: usize) -> Self {
        let dist = VertexDistribution::point(graph.vertex_count(), graph.base());
        let delta = tv_to_uniform(dist.weights());
        ChunkDistribution { pointwise_delta: dist.pointwise_deviation(), dist, radius, delta, method: ChunkMethod::UniformBall }
    }
}

/// Exact `steps`-step law of the lazy walk from `start`.
pub fn lazy_walk_distribution(graph: &VertexTransitiveGraph, start: u32, steps: usize) -> VertexDistribution {
    let n = graph.vertex_count();
    let deg = graph.degree() as f64;
    let mut d = vec![0.0; n];
    d[start as usize] = 1.0;
    let mut next = vec![0.0; n];
    for _ in 0..steps {
        next.iter_mut().for_each(|x| *x = 0.0);
        for (v, &w) in d.iter().enumerate() {
            if w > 0.0 {
                next[v] += 0.5 * w;
                let share = 0.5 * w / deg;
                for &u in graph.neighbors(v as u32) {
                    next[u as usize] += share;
                }
            }
        }
        std::mem::swap(&mut d, &mut next);
    }
    VertexDistribution { weights: d }
}

pub fn build_chunk_distribution(graph: &VertexTransitiveGraph, s: usize, method: ChunkMethod) -> Result<ChunkDistribution> {
    let n = graph.vertex_count();
    let dist = match &method {
        ChunkMethod::UniformBall => VertexDistribution::uniform_on(n, &graph.ball(graph.base(), s))?,
        ChunkMethod::LazyWalk => lazy_walk_distribution(graph, graph.base(), s),
        ChunkMethod::UniformAll => {
            if s != graph.diameter() {
                return arg(format!("uniform_all needs s = diameter = {}, got {s}", graph.diameter()));
            }
            VertexDistribution::uniform(n)
        }
        ChunkMethod::Subproduct(gens) => {
            let group = graph
                .group()
                .ok_or_else(|| Error::Unsupported("subproduct chunks need a Cayley graph".into()))?;
            if gens.len() > s {
                return arg(format!("{} subproduct elements exceed chunk length {s}", gens.len()));
            }
            if let Some(g) = gens.iter().find(|g| g.id() >= n || graph.base_distance(g.0) > 1) {
                return arg(format!("subproduct element {} is not a generator, inverse or identity", g.0));
            }
            subproduct_distribution(group, gens)
        }
    };
    if let Some(v) = dist.support().into_iter().find(|&v| graph.base_distance(v) as usize > s) {
        return Err(Error::Internal(format!("D_s puts mass on {v} outside B({s})")));
    }
    let delta = tv_to_uniform(dist.weights());
    Ok(ChunkDistribution { pointwise_delta: dist.pointwise_deviation(), dist, radius: s, delta, method })
}

/// Joint law of finitely many finite coordinates, row-major with the first
/// coordinate most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct JointTable {
    shape: Vec<usize>,
    probs: Vec<f64>,
}

impl JointTable {
    pub fn new(shape: Vec<usize>, probs: Vec<f64>) -> Result<Self> {
        if shape.is_empty() || shape.iter().any(|&k| k == 0) {
            return arg("joint shape needs at least one coordinate, each with an outcome");
        }
        let total: u128 = shape.iter().map(|&k| k as u128).product();
        if total > 1_000_000 {
            return Err(Error::SizeLimit { what: "joint outcome count".into(), needed: total, cap: 1_000_000 });
        }
        if probs.len() as u128 != total {
            return arg(format!("joint table has {} entries, shape needs {total}", probs.len()));
        }
        VertexDistribution::new(probs.clone())?;
        Ok(JointTable { shape, probs })
    }

    /// Random joint with independent uniform(0,1] cell weights, normalized.
    pub fn random(shape: Vec<usize>, rng: &mut impl Rng) -> Self {
        let total: usize = shape.iter().product();
        let raw: Vec<f64> = (0..total).map(|_| 1.0 - rng.gen::<f64>()).collect();
        let sum: f64 = raw.iter().sum();
        JointTable { shape, probs: raw.into_iter().map(|x| x / sum).collect() }
    }

    /// Product measure of the given marginals.
    pub fn product(marginals: &[Vec<f64>]) -> Result<Self> {
        let mut probs = vec![1.0];
        for m in marginals {
            probs = probs.iter().flat_map(|p| m.iter().map(move |q| p * q)).collect();
        }
        JointTable::new(marginals.iter().map(Vec::len).collect(), probs)
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Marginal over the first `k` coordinates.
    fn prefix_marginal(&self, k: usize) -> Vec<f64> {
        let keep: usize = self.shape[..k].iter().product();
        let tail = self.probs.len() / keep;
        (0..keep).map(|i| self.probs[i * tail..(i + 1) * tail].iter().sum()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Maximization {
    /// All event tuples `A_1,…,A_{i−1}`.
    Exhaustive,
    /// Only singleton histories `A_j = {a_j}`.
    SingletonHistories,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TvChainReport {
    pub lhs: f64,
    pub rhs: f64,
    pub first_marginal_tv: f64,
    /// `Δ_i` for `i = 2..n`.
    pub deltas: Vec<f64>,
    pub maximization: Maximization,
    pub holds: bool,
}

impl TvChainReport {
    pub fn verdict(&self) -> &'static str {
        match (self.holds, self.maximization) {
            (true, Maximization::Exhaustive) => "holds",
            (true, Maximization::SingletonHistories) => "holds (partial maximization)",
            (false, Maximization::Exhaustive) => "violated",
            (false, Maximization::SingletonHistories) => "inconclusive (partial maximization)",
        }
    }
}

/// Compare `‖X − Y‖` against `‖X_1 − Y_1‖ + Σ_{i≥2} Δ_i`. Conditioning events of
/// probability zero under either law are skipped.
pub fn tv_chain_bound_check(x: &JointTable, y: &JointTable) -> Result<TvChainReport> {
    if x.shape != y.shape {
        return arg(format!("shape mismatch: {:?} vs {:?}", x.shape, y.shape));
    }
    let n = x.shape.len();
    let maximization = if n <= 3 && x.shape.iter().all(|&k| k <= 8) {
        Maximization::Exhaustive
    } else {
        Maximization::SingletonHistories
    };
    let lhs = tv_slices(&x.probs, &y.probs)?;
    let first_marginal_tv = tv_slices(&x.prefix_marginal(1), &y.prefix_marginal(1))?;
    let mut deltas = Vec::with_capacity(n.saturating_sub(1));
    for i in 1..n {
        let mx = x.prefix_marginal(i + 1);
        let my = y.prefix_marginal(i + 1);
        let mut best = 0.0f64;
        max_conditional_tv(&mx, &my, &x.shape[..=i], maximization, &mut best);
        deltas.push(best);
    }
    let rhs = first_marginal_tv + deltas.iter().sum::<f64>();
    Ok(TvChainReport { lhs, rhs, first_marginal_tv, deltas, maximization, holds: lhs <= rhs + 1e-9 })
}

/// Recursively fold history coordinates over their events, then take the
/// conditional tv of the last coordinate.
fn max_conditional_tv(tx: &[f64], ty: &[f64], dims: &[usize], mode: Maximization, best: &mut f64) {
    if dims.len() == 1 {
        let (sx, sy): (f64, f64) = (tx.iter().sum(), ty.iter().sum());
        if sx <= 0.0 || sy <= 0.0 {
            return;
        }
        let tv = 0.5 * tx.iter().zip(ty).map(|(a, b)| (a / sx - b / sy).abs()).sum::<f64>();
        *best = best.max(tv);
        return;
    }
    let k = dims[0];
    let rest: usize = dims[1..].iter().product();
    match mode {
        Maximization::SingletonHistories => {
            for a in 0..k {
                max_conditional_tv(&tx[a * rest..(a + 1) * rest], &ty[a * rest..(a + 1) * rest], &dims[1..], mode, best);
            }
        }
        Maximization::Exhaustive => {
            let masks = 1usize << k;
            let mut fx = vec![0.0; masks * rest];
            let mut fy = vec![0.0; masks * rest];
            for mask in 1..masks {
                let low = mask.trailing_zeros() as usize;
                let prev = mask & (mask - 1);
                for r in 0..rest {
                    fx[mask * rest + r] = fx[prev * rest + r] + tx[low * rest + r];
                    fy[mask * rest + r] = fy[prev * rest + r] + ty[low * rest + r];
                }
                max_conditional_tv(&fx[mask * rest..(mask + 1) * rest], &fy[mask * rest..(mask + 1) * rest], &dims[1..], mode, best);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use rand::SeedableRng;

    fn d(w: &[f64]) -> VertexDistribution {
        VertexDistribution::new(w.to_vec()).unwrap()
    }

    #[test]
    fn tv_examples() {
        let u = VertexDistribution::uniform(4);
        assert_eq!(tv_distance(&u, &u).unwrap(), 0.0);
        assert_eq!(tv_distance(&VertexDistribution::point(4, 0), &VertexDistribution::point(4, 1)).unwrap(), 1.0);
        assert!((tv_distance(&u, &d(&[0.5, 0.5, 0.0, 0.0])).unwrap() - 0.5).abs() < 1e-15);
        assert!(tv_distance(&u, &VertexDistribution::uniform(3)).is_err());
    }

    #[test]
    fn distribution_validation() {
        assert!(VertexDistribution::new(vec![0.5, 0.4]).is_err());
        assert!(VertexDistribution::new(vec![1.5, -0.5]).is_err());
        assert!(VertexDistribution::new(vec![]).is_err());
    }

    #[test]
    fn subproduct_examples() {
        let z2 = FiniteGroup::build(&"cyclic(2)".parse().unwrap()).unwrap();
        assert_eq!(subproduct_distribution(&z2, &[GroupElement(1)]).weights(), &[0.5, 0.5]);
        let v4 = FiniteGroup::build(&"power(cyclic(2),2)".parse().unwrap()).unwrap();
        let e = subproduct_distribution(&v4, &[GroupElement(1), GroupElement(2)]);
        assert_eq!(e.weights(), &[0.25; 4]);
        let z4 = FiniteGroup::build(&"cyclic(4)".parse().unwrap()).unwrap();
        // subproducts of (1,1): 0, 1, 1, 2
        let s = subproduct_distribution(&z4, &[GroupElement(1), GroupElement(1)]);
        assert_eq!(s.weights(), &[0.25, 0.5, 0.25, 0.0]);
        assert!(!is_delta_uniform(&s, 0.5));
        assert!(is_delta_uniform(&VertexDistribution::uniform(4), 0.0));
        assert!(!is_delta_uniform(&VertexDistribution::point(4, 0), 0.5));
    }

    #[test]
    fn er_small_cases() {
        let z2 = FiniteGroup::build(&"cyclic(2)".parse().unwrap()).unwrap();
        let e = er_generator_experiment(&z2, 1, 0.0, 2000, 5).unwrap();
        assert!(e.predicted_floor.is_none());
        assert_eq!(e.floor_text(), "vacuous (<= 0)");
        assert!((e.fraction() - 0.5).abs() < 4.0 * 0.5 / (2000f64).sqrt());
        let q6 = FiniteGroup::build(&"power(cyclic(2),6)".parse().unwrap()).unwrap();
        assert!((er_lambda(q6.order(), 19, 0.25) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn chunk_distribution_examples() {
        let c6 = families::cycle(6).unwrap();
        let all = build_chunk_distribution(&c6, 3, ChunkMethod::UniformAll).unwrap();
        assert_eq!(all.delta, 0.0);
        let ball = build_chunk_distribution(&c6, 3, ChunkMethod::UniformBall).unwrap();
        assert!(ball.delta.abs() < 1e-15);
        let q3 = families::hypercube(3).unwrap();
        let b2 = build_chunk_distribution(&q3, 2, ChunkMethod::UniformBall).unwrap();
        assert_eq!(b2.dist.support().len(), 7);
        assert!((b2.delta - 0.125).abs() < 1e-15);
        assert!((b2.recompute_delta() - b2.delta).abs() < 1e-15);
        assert!(build_chunk_distribution(&q3, 2, ChunkMethod::UniformAll).is_err());
        assert!(matches!(
            build_chunk_distribution(&families::petersen(), 2, ChunkMethod::Subproduct(vec![])),
            Err(Error::Unsupported(_))
        ));
        let sub = build_chunk_distribution(&q3, 3, ChunkMethod::Subproduct(vec![GroupElement(1), GroupElement(2), GroupElement(4)])).unwrap();
        assert!(sub.delta.abs() < 1e-15);
        assert!(build_chunk_distribution(&q3, 3, ChunkMethod::Subproduct(vec![GroupElement(3)])).is_err());
        let lazy = build_chunk_distribution(&q3, 2, ChunkMethod::LazyWalk).unwrap();
        assert!((lazy.dist.sum() - 1.0).abs() < 1e-12);
        assert!(lazy.dist.support().iter().all(|&v| q3.base_distance(v) <= 2));
    }

    #[test]
    fn csv_trailer() {
        let u = VertexDistribution::uniform(2);
        assert_eq!(u.to_csv(0.0), "vertex,weight\n0,0.5\n1,0.5\n# sum=1 delta=0\n");
    }

    #[test]
    fn tv_chain_basic() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let x = JointTable::random(vec![3, 4], &mut rng);
        let r = tv_chain_bound_check(&x, &x).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert!(r.holds);
        let a = JointTable::product(&[vec![0.5, 0.5], vec![0.2, 0.8], vec![0.1, 0.9]]).unwrap();
        let b = JointTable::product(&[vec![0.6, 0.4], vec![0.3, 0.7], vec![0.1, 0.9]]).unwrap();
        let r = tv_chain_bound_check(&a, &b).unwrap();
        assert!(r.lhs <= 0.1 + 0.1 + 1e-12);
        assert!(r.holds);
        // conditional laws of coordinate 3 are identical for product measures
        assert!(r.deltas[1].abs() < 1e-12);
        assert!(tv_chain_bound_check(&a, &JointTable::random(vec![2, 2, 3], &mut rng)).is_err());
        let big = JointTable::random(vec![2, 2, 2, 2], &mut rng);
        let big2 = JointTable::random(vec![2, 2, 2, 2], &mut rng);
        let r = tv_chain_bound_check(&big, &big2).unwrap();
        assert_eq!(r.maximization, Maximization::SingletonHistories);
        assert!(r.holds);
    }

    #[test]
    fn exhaustive_dominates_singletons() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let x = JointTable::random(vec![3, 3, 2], &mut rng);
            let y = JointTable::random(vec![3, 3, 2], &mut rng);
            let ex = tv_chain_bound_check(&x, &y).unwrap();
            for i in 1..3 {
                let mut single = 0.0;
                max_conditional_tv(&x.prefix_marginal(i + 1), &y.prefix_marginal(i + 1), &x.shape[..=i], Maximization::SingletonHistories, &mut single);
                assert!(single <= ex.deltas[i - 1] + 1e-15);
            }
        }
    }
}

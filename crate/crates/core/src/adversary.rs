//! Exact relational and quantum adversary quantities on fully enumerated
//! snake ensembles.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::analysis::hitting_exact;
use crate::budget::Budget;
use crate::error::{arg, Error, Result};
use crate::snake::{is_consistent_with, last_visits, ChunkModel, Snake, SnakeParams};

/// Every snake of `D_{x_0,L}` with its probability, sorted by vertex sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct SnakeEnsemble {
    pub snakes: Vec<Snake>,
    pub probs: Vec<f64>,
    /// Seed tuples whose vertex sequence coincided with an earlier tuple.
    pub merges: u64,
    pub params: SnakeParams,
    /// For each snake, the probability of its tail seeds from chunk `c` on,
    /// indexed `c = 1..=ℓ` (entry 0 unused). Summed over merged tuples.
    seed_tails: Vec<Vec<f64>>,
}

impl SnakeEnsemble {
    pub fn len(&self) -> usize {
        self.snakes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snakes.is_empty()
    }

    fn ell(&self) -> usize {
        self.params.ell
    }
}

pub fn enumerate_snake_support(model: &ChunkModel, x0: u32, params: &SnakeParams, budget: &Budget) -> Result<SnakeEnsemble> {
    model.check_params(params)?;
    model.graph().check_vertex(x0)?;
    let m = model.support_size();
    let chunks = params.ell + 1;
    let needed = (m as u128).saturating_pow(chunks as u32);
    if needed > budget.ensemble as u128 {
        return Err(Error::SizeLimit { what: "snake ensemble seed tuples".into(), needed, cap: budget.ensemble as u128 });
    }
    let mut raw: Vec<(Snake, f64, Vec<f64>)> = Vec::with_capacity(needed as usize);
    let mut idx = vec![0usize; chunks];
    'tuples: loop {
        let snake = model.assemble(x0, &idx);
        let mut tails = vec![1.0; chunks + 1];
        for c in (0..chunks).rev() {
            tails[c] = tails[c + 1] * model.weight(idx[c]);
        }
        let p = tails[0];
        tails.truncate(chunks);
        raw.push((snake, p, tails));
        // odometer, last chunk fastest
        let mut k = chunks;
        loop {
            if k == 0 {
                break 'tuples;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < m {
                break;
            }
            idx[k] = 0;
        }
    }
    raw.sort_by(|a, b| a.0.vertices.cmp(&b.0.vertices));
    let mut snakes: Vec<Snake> = Vec::with_capacity(raw.len());
    let mut probs: Vec<f64> = Vec::with_capacity(raw.len());
    let mut seed_tails: Vec<Vec<f64>> = Vec::with_capacity(raw.len());
    let mut merges = 0;
    for (snake, p, tails) in raw {
        if snakes.last().is_some_and(|last| last.vertices == snake.vertices) {
            merges += 1;
            *probs.last_mut().unwrap() += p;
            for (a, b) in seed_tails.last_mut().unwrap().iter_mut().zip(&tails) {
                *a += b;
            }
        } else {
            snakes.push(snake);
            probs.push(p);
            seed_tails.push(tails);
        }
    }
    Ok(SnakeEnsemble { snakes, probs, merges, params: params.clone(), seed_tails })
}

/// Symmetric nonnegative matrix stored as sorted sparse rows.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseSym {
    pub rows: Vec<Vec<(u32, f64)>>,
}

impl SparseSym {
    pub fn from_dense(m: &[Vec<f64>]) -> Self {
        SparseSym {
            rows: m
                .iter()
                .map(|r| r.iter().enumerate().filter(|(_, &x)| x != 0.0).map(|(j, &x)| (j as u32, x)).collect())
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let row = &self.rows[i];
        match row.binary_search_by_key(&(j as u32), |e| e.0) {
            Ok(k) => row[k].1,
            Err(_) => 0.0,
        }
    }

    pub fn total(&self) -> f64 {
        self.rows.iter().map(|r| r.iter().fold(0.0, |a, e| a + e.1)).fold(0.0, |a, b| a + b)
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.rows[i].iter().fold(0.0, |a, e| a + e.1)
    }

    /// Zero every row and column outside `keep`.
    pub fn restrict(&self, keep: &[bool]) -> SparseSym {
        SparseSym {
            rows: self
                .rows
                .iter()
                .enumerate()
                .map(|(i, r)| if keep[i] { r.iter().copied().filter(|e| keep[e.0 as usize]).collect() } else { Vec::new() })
                .collect(),
        }
    }

    /// Largest `|M(i,j) − M(j,i)|`.
    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, r) in self.rows.iter().enumerate() {
            for &(j, x) in r {
                worst = worst.max((x - self.get(j as usize, i)).abs());
            }
        }
        worst
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WMatrix {
    /// `w(X,Y)`, conditioning on vertex-sequence prefixes.
    pub w: SparseSym,
    /// `max |w(X,Y) − w(Y,X)|`, both orders evaluated independently.
    pub max_asymmetry: f64,
    /// Entries where conditioning on seed tuples gives a different value.
    pub seed_route_discrepancies: u64,
    pub max_route_gap: f64,
}

/// `w(X,Y) = p(X)·(1/ℓ)·Σ_j Pr_Z[Z = Y | Z_{0→j} = X_{0→j}]`.
pub fn w_matrix(ens: &SnakeEnsemble, budget: &Budget) -> Result<WMatrix> {
    let n = ens.len();
    let ell = ens.ell();
    let s = ens.params.s;
    // group[c][i]: prefix class of snake i through position c·s; snakes are
    // sorted, so each class is a contiguous range.
    let mut group = vec![vec![0u32; n]; ell + 1];
    let mut mass: Vec<Vec<f64>> = vec![Vec::new(); ell + 1];
    for c in 1..=ell {
        let len = c * s + 1;
        let mut g = 0u32;
        mass[c].push(0.0);
        for i in 0..n {
            if i > 0 && ens.snakes[i].vertices[..len] != ens.snakes[i - 1].vertices[..len] {
                g += 1;
                mass[c].push(0.0);
            }
            group[c][i] = g;
            mass[c][g as usize] += ens.probs[i];
        }
    }
    let mut blocks: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        if i == 0 || group[1][i] != group[1][i - 1] {
            blocks.push((i, i + 1));
        } else {
            blocks.last_mut().unwrap().1 = i + 1;
        }
    }
    let pairs: u128 = blocks.iter().map(|&(a, b)| ((b - a) as u128).pow(2)).sum();
    if pairs > budget.dp as u128 {
        return Err(Error::SizeLimit { what: "w matrix pairs".into(), needed: pairs, cap: budget.dp as u128 });
    }
    let value = |i: usize, j: usize| -> f64 {
        let mut acc = 0.0;
        for c in 1..=ell {
            if group[c][i] == group[c][j] {
                acc += ens.probs[j] / mass[c][group[c][i] as usize];
            }
        }
        ens.probs[i] * acc / ell as f64
    };
    let seed_value = |i: usize, j: usize| -> f64 {
        let mut acc = 0.0;
        for c in 1..=ell {
            if group[c][i] == group[c][j] {
                acc += ens.seed_tails[j][c];
            }
        }
        ens.probs[i] * acc / ell as f64
    };
    let block_of: Vec<usize> = blocks.iter().enumerate().flat_map(|(b, &(lo, hi))| std::iter::repeat(b).take(hi - lo)).collect();
    let rows: Vec<(Vec<(u32, f64)>, f64, u64, f64)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let (lo, hi) = blocks[block_of[i]];
            let mut row = Vec::new();
            let (mut asym, mut disc, mut gap) = (0.0f64, 0u64, 0.0f64);
            for j in lo..hi {
                let x = value(i, j);
                if x > 0.0 {
                    row.push((j as u32, x));
                }
                asym = asym.max((x - value(j, i)).abs());
                let g = (x - seed_value(i, j)).abs();
                if g > 1e-12 * x.max(1e-300) {
                    disc += 1;
                }
                gap = gap.max(g);
            }
            (row, asym, disc, gap)
        })
        .collect();
    let mut w = SparseSym { rows: Vec::with_capacity(n) };
    let (mut max_asymmetry, mut seed_route_discrepancies, mut max_route_gap) = (0.0f64, 0u64, 0.0f64);
    for (row, a, d, g) in rows {
        w.rows.push(row);
        max_asymmetry = max_asymmetry.max(a);
        seed_route_discrepancies += d;
        max_route_gap = max_route_gap.max(g);
    }
    Ok(WMatrix { w, max_asymmetry, seed_route_discrepancies, max_route_gap })
}

/// `R(A_X, B_Y) = w(X,Y)` when `X, Y` are consistent with `x_L ≠ y_L`, else 0;
/// rows and columns outside `keep` are dropped.
pub fn relation_r(ens: &SnakeEnsemble, w: &SparseSym, keep: Option<&[bool]>) -> SparseSym {
    let visits: Vec<Vec<(u32, u32)>> = ens.snakes.par_iter().map(last_visits).collect();
    let rows = (0..ens.len())
        .into_par_iter()
        .map(|i| {
            if keep.is_some_and(|k| !k[i]) {
                return Vec::new();
            }
            let x = &ens.snakes[i];
            w.rows[i]
                .iter()
                .copied()
                .filter(|&(j, _)| {
                    let y = &ens.snakes[j as usize];
                    keep.map_or(true, |k| k[j as usize]) && x.endpoint() != y.endpoint() && is_consistent_with(&visits[i], y)
                })
                .collect()
        })
        .collect();
    SparseSym { rows }
}

/// Exact per-snake consistency `Σ_Y R(X,Y) / p(X)` from the unfiltered relation.
pub fn consistency_from_relation(ens: &SnakeEnsemble, r: &SparseSym) -> Vec<f64> {
    (0..ens.len()).map(|i| r.row_sum(i) / ens.probs[i]).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdversaryScores {
    /// `M(A_X) = Σ_Y R(A_X, B_Y)`; `M(B_Y)` coincides because `R` is symmetric
    /// and both sides range over the same snakes.
    pub m_a: Vec<f64>,
    /// Per snake, `(v, M(A_X, v))` for every vertex where the value is
    /// positive, ascending in `v`.
    pub m_a_v: Vec<Vec<(u32, f64)>>,
    /// Per snake, `min_v M(A_X)/M(A_X,v)` over vertices with `M(A_X,v) > 0`.
    pub min_v_ratio: Vec<Option<f64>>,
    pub m_max: Option<f64>,
    pub m_geom: Option<f64>,
}

impl AdversaryScores {
    pub fn undefined(&self) -> bool {
        self.m_max.is_none()
    }

    fn m_v(&self, x: usize, v: u32) -> f64 {
        let row = &self.m_a_v[x];
        match row.binary_search_by_key(&v, |e| e.0) {
            Ok(k) => row[k].1,
            Err(_) => 0.0,
        }
    }
}

fn distinct_sorted(x: &Snake) -> Vec<u32> {
    let mut v = x.vertices.clone();
    v.sort_unstable();
    v.dedup();
    v
}

/// Vertices in exactly one of two sorted sets.
fn symmetric_difference(a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            out.push(b[j]);
            j += 1;
        } else {
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn adversary_scores(ens: &SnakeEnsemble, r: &SparseSym) -> AdversaryScores {
    let sets: Vec<Vec<u32>> = ens.snakes.par_iter().map(distinct_sorted).collect();
    let m_a: Vec<f64> = (0..r.len()).map(|i| r.row_sum(i)).collect();
    let m_a_v: Vec<Vec<(u32, f64)>> = (0..r.len())
        .into_par_iter()
        .map(|i| {
            // mass of related snakes containing each vertex
            let mut containing: Vec<(u32, f64)> = Vec::new();
            for &(j, x) in &r.rows[i] {
                containing.extend(sets[j as usize].iter().map(|&v| (v, x)));
            }
            containing.sort_by_key(|e| e.0);
            let mut merged: Vec<(u32, f64)> = Vec::new();
            for (v, x) in containing {
                match merged.last_mut() {
                    Some(last) if last.0 == v => last.1 += x,
                    _ => merged.push((v, x)),
                }
            }
            let mut out: Vec<(u32, f64)> = Vec::new();
            let (mut a, mut b) = (0, 0);
            let own = &sets[i];
            while a < own.len() || b < merged.len() {
                let take_own = b == merged.len() || (a < own.len() && own[a] <= merged[b].0);
                let take_m = a == own.len() || (b < merged.len() && merged[b].0 <= own[a]);
                let (v, inside, mass) = match (take_own, take_m) {
                    (true, true) => (own[a], true, merged[b].1),
                    (true, false) => (own[a], true, 0.0),
                    _ => (merged[b].0, false, merged[b].1),
                };
                let value = if inside { m_a[i] - mass } else { mass };
                if value > 1e-300 {
                    out.push((v, value));
                }
                if take_own {
                    a += 1;
                }
                if take_m {
                    b += 1;
                }
            }
            out
        })
        .collect();
    let min_v_ratio: Vec<Option<f64>> = (0..r.len())
        .map(|i| m_a_v[i].iter().map(|&(_, x)| m_a[i] / x).reduce(f64::min))
        .collect();
    let mut scores = AdversaryScores { m_a, m_a_v, min_v_ratio, m_max: None, m_geom: None };
    let minima: Vec<(f64, f64)> = (0..r.len())
        .into_par_iter()
        .map(|i| {
            let (mut best_max, mut best_geom) = (f64::INFINITY, f64::INFINITY);
            for &(j, x) in &r.rows[i] {
                if x <= 0.0 {
                    continue;
                }
                let j = j as usize;
                for v in symmetric_difference(&sets[i], &sets[j]) {
                    let ra = scores.m_a[i] / scores.m_v(i, v);
                    let rb = scores.m_a[j] / scores.m_v(j, v);
                    best_max = best_max.min(ra.max(rb));
                    best_geom = best_geom.min((ra * rb).sqrt());
                }
            }
            (best_max, best_geom)
        })
        .collect();
    let m_max = minima.iter().map(|m| m.0).fold(f64::INFINITY, f64::min);
    let m_geom = minima.iter().map(|m| m.1).fold(f64::INFINITY, f64::min);
    if m_max.is_finite() {
        scores.m_max = Some(m_max);
        scores.m_geom = Some(m_geom);
    }
    scores
}

/// A nonempty `U` with `Σ_{j∈U} R(i,j) ≥ r·p(i)/2` for every `i ∈ U`, found by
/// deleting all violators at once until none remain. Indices with `p = 0` are
/// never members.
pub fn lemma8_subset(p: &[f64], r: &SparseSym, rr: f64) -> Result<Vec<u32>> {
    if p.len() != r.len() {
        return arg(format!("{} weights for a {}-row relation", p.len(), r.len()));
    }
    let mut keep: Vec<bool> = p.iter().map(|&x| x > 0.0).collect();
    loop {
        let violators: Vec<usize> = (0..p.len())
            .filter(|&i| keep[i] && inside_sum(r, i, &keep) < rr * p[i] / 2.0)
            .collect();
        if violators.is_empty() {
            break;
        }
        for i in violators {
            keep[i] = false;
        }
    }
    let u: Vec<u32> = (0..p.len() as u32).filter(|&i| keep[i as usize]).collect();
    if u.is_empty() {
        let psum: f64 = p.iter().sum();
        let total = r.total();
        return Err(Error::Internal(format!(
            "pruning emptied the set (sum p = {psum}, sum R = {total}, r = {rr}, hypotheses {})",
            if psum <= 1.0 + 1e-9 && total >= rr { "hold" } else { "fail" }
        )));
    }
    if !verify_lemma8(p, r, rr, &u) {
        return Err(Error::Internal("pruned set fails post-verification".into()));
    }
    Ok(u)
}

fn inside_sum(r: &SparseSym, i: usize, keep: &[bool]) -> f64 {
    r.rows[i].iter().filter(|e| keep[e.0 as usize]).map(|e| e.1).fold(0.0, |a, b| a + b)
}

/// Independent check of the subset inequality.
pub fn verify_lemma8(p: &[f64], r: &SparseSym, rr: f64, u: &[u32]) -> bool {
    let mut keep = vec![false; p.len()];
    for &i in u {
        keep[i as usize] = true;
    }
    !u.is_empty() && u.iter().all(|&i| inside_sum(r, i as usize, &keep) >= rr * p[i as usize] / 2.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem2Report {
    pub snakes: usize,
    pub merges: u64,
    /// Exact hitting maximum over the ensemble.
    pub eps: f64,
    pub good_fraction: f64,
    pub min_consistency: f64,
    pub sum_r: f64,
    /// `0.6` when `ΣR ≥ 0.6`, else `ΣR`.
    pub lemma_r: f64,
    pub subset: Vec<u32>,
    /// `M(A_X) ≥ 0.3·p(X)` on the subset (only meaningful when `ΣR ≥ 0.6`).
    pub subset_mass_ok: bool,
    pub m_max: Option<f64>,
    pub m_geom: Option<f64>,
    pub rls_target: f64,
    pub qls_target: f64,
    /// Failing hypothesis clauses; empty when all hold.
    pub unmet: Vec<String>,
    pub max_w_asymmetry: f64,
    pub seed_route_discrepancies: u64,
    pub scores: AdversaryScores,
    pub relation: SparseSym,
    pub w: SparseSym,
    pub consistency: Vec<f64>,
    pub hitting: Vec<f64>,
}

impl Theorem2Report {
    pub fn hypotheses_met(&self) -> bool {
        self.unmet.is_empty()
    }

    pub fn rls_confirmed(&self) -> Option<bool> {
        self.hypotheses_met().then(|| self.m_max.is_some_and(|m| m >= self.rls_target))
    }

    pub fn qls_confirmed(&self) -> Option<bool> {
        self.hypotheses_met().then(|| self.m_geom.is_some_and(|m| m >= self.qls_target))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let opt = |x: Option<f64>| x.map_or("undefined".to_string(), |v| v.to_string());
        let yn = |x: Option<bool>| x.map_or("not applicable".to_string(), |b| b.to_string());
        writeln!(out, "snakes = {}", self.snakes).unwrap();
        writeln!(out, "merges = {}", self.merges).unwrap();
        writeln!(out, "eps = {}", self.eps).unwrap();
        writeln!(out, "good_fraction = {}", self.good_fraction).unwrap();
        writeln!(out, "min_consistency = {}", self.min_consistency).unwrap();
        writeln!(out, "sum_R = {}", self.sum_r).unwrap();
        writeln!(out, "lemma_r = {}", self.lemma_r).unwrap();
        writeln!(out, "subset_size = {}", self.subset.len()).unwrap();
        writeln!(out, "subset_mass_ok = {}", self.subset_mass_ok).unwrap();
        writeln!(out, "m_max = {}", opt(self.m_max)).unwrap();
        writeln!(out, "m_geom = {}", opt(self.m_geom)).unwrap();
        writeln!(out, "rls_target = {}", self.rls_target).unwrap();
        writeln!(out, "qls_target = {}", self.qls_target).unwrap();
        writeln!(out, "rls_confirmed = {}", yn(self.rls_confirmed())).unwrap();
        writeln!(out, "qls_confirmed = {}", yn(self.qls_confirmed())).unwrap();
        writeln!(out, "max_w_asymmetry = {}", self.max_w_asymmetry).unwrap();
        writeln!(out, "seed_route_discrepancies = {}", self.seed_route_discrepancies).unwrap();
        if self.unmet.is_empty() {
            writeln!(out, "hypotheses = met").unwrap();
        } else {
            writeln!(out, "hypotheses = not applicable: {}", self.unmet.join("; ")).unwrap();
        }
        out
    }

    /// `X_index,Y_index,w,R` for every nonzero `w`.
    pub fn pairs_csv(&self) -> String {
        let mut out = String::from("X_index,Y_index,w,R\n");
        for (i, row) in self.w.rows.iter().enumerate() {
            for &(j, x) in row {
                writeln!(out, "{i},{j},{x},{}", self.relation.get(i, j as usize)).unwrap();
            }
        }
        out
    }

    /// `X_index,M_A,min_v_ratio` for every subset member.
    pub fn scores_csv(&self) -> String {
        let mut out = String::from("X_index,M_A,min_v_ratio\n");
        for &i in &self.subset {
            let i = i as usize;
            let ratio = self.scores.min_v_ratio[i].map_or(String::from("inf"), |r| r.to_string());
            writeln!(out, "{i},{},{ratio}", self.scores.m_a[i]).unwrap();
        }
        out
    }
}

/// Full pipeline on an enumerated ensemble: exact hitting and consistency,
/// goodness, `R` on good snakes, the pruned subset and the scores on it.
pub fn theorem2_report(model: &ChunkModel, ens: &SnakeEnsemble, budget: &Budget) -> Result<Theorem2Report> {
    let wm = w_matrix(ens, budget)?;
    let r_all = relation_r(ens, &wm.w, None);
    let consistency = consistency_from_relation(ens, &r_all);
    let hitting: Vec<f64> = ens
        .snakes
        .iter()
        .map(|x| hitting_exact(model, x, budget).map(|h| h.max))
        .collect::<Result<_>>()?;
    let eps = hitting.iter().copied().fold(0.0, f64::max);
    let threshold = ens.params.consist_threshold;
    let good: Vec<bool> = consistency.iter().zip(&hitting).map(|(&c, &h)| c >= threshold && h <= eps).collect();
    let good_fraction: f64 = ens.probs.iter().zip(&good).filter(|(_, &g)| g).map(|(p, _)| p).fold(0.0, |a, b| a + b);
    let min_consistency = consistency.iter().copied().fold(f64::INFINITY, f64::min);
    let r_good = r_all.restrict(&good);
    let sum_r = r_good.total();
    let mut unmet = Vec::new();
    if good_fraction < ens.params.good_prob_threshold {
        unmet.push(format!("good fraction {good_fraction} < {}", ens.params.good_prob_threshold));
    }
    if eps <= 0.0 {
        unmet.push("no vertex is ever hit (eps = 0)".into());
    }
    let lemma_r = if sum_r >= 0.6 {
        0.6
    } else {
        unmet.push(format!("sum R = {sum_r} < 0.6"));
        sum_r
    };
    let p_good: Vec<f64> = ens.probs.iter().zip(&good).map(|(&p, &g)| if g { p } else { 0.0 }).collect();
    let subset = if lemma_r > 0.0 { lemma8_subset(&p_good, &r_good, lemma_r)? } else { Vec::new() };
    let mut in_u = vec![false; ens.len()];
    for &i in &subset {
        in_u[i as usize] = true;
    }
    let r_u = r_good.restrict(&in_u);
    let scores = adversary_scores(ens, &r_u);
    let subset_mass_ok = subset.iter().all(|&i| scores.m_a[i as usize] >= 0.3 * ens.probs[i as usize] * (1.0 - 1e-12));
    let rls_target = if eps > 0.0 { 0.3 / eps } else { f64::INFINITY };
    Ok(Theorem2Report {
        snakes: ens.len(),
        merges: ens.merges,
        eps,
        good_fraction,
        min_consistency,
        sum_r,
        lemma_r,
        subset,
        subset_mass_ok,
        m_max: scores.m_max,
        m_geom: scores.m_geom,
        rls_target,
        qls_target: rls_target.sqrt(),
        unmet,
        max_w_asymmetry: wm.max_asymmetry,
        seed_route_discrepancies: wm.seed_route_discrepancies,
        scores,
        relation: r_good,
        w: wm.w,
        consistency,
        hitting,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::mixing::{build_chunk_distribution, ChunkDistribution, ChunkMethod};

    #[test]
    fn point_mass_ensemble() {
        let c6 = families::cycle(6).unwrap();
        let model = ChunkModel::new(&c6, ChunkDistribution::point_mass(&c6, 2)).unwrap();
        let ens = enumerate_snake_support(&model, 0, &SnakeParams::new(2, 2).unwrap(), &Budget::default()).unwrap();
        assert_eq!((ens.len(), ens.probs[0]), (1, 1.0));
        let w = w_matrix(&ens, &Budget::default()).unwrap();
        assert_eq!(w.w.get(0, 0), 1.0);
        let scores = adversary_scores(&ens, &relation_r(&ens, &w.w, None));
        assert!(scores.undefined());
    }

    #[test]
    fn c8_ensemble_basics() {
        let c8 = families::cycle(8).unwrap();
        let d = build_chunk_distribution(&c8, 2, ChunkMethod::UniformBall).unwrap();
        let model = ChunkModel::new(&c8, d).unwrap();
        let ens = enumerate_snake_support(&model, 0, &SnakeParams::new(2, 1).unwrap(), &Budget::default()).unwrap();
        assert_eq!(ens.len(), 25);
        assert!((ens.probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(ens.merges, 0);
        let w = w_matrix(&ens, &Budget::default()).unwrap();
        assert!(w.max_asymmetry < 1e-12);
        assert_eq!(w.seed_route_discrepancies, 0);
        // each row of w sums to p(X)
        for i in 0..ens.len() {
            assert!((w.w.row_sum(i) - ens.probs[i]).abs() < 1e-12);
        }
        let small = Budget { ensemble: 10, ..Budget::default() };
        assert!(matches!(
            enumerate_snake_support(&model, 0, &SnakeParams::new(2, 1).unwrap(), &small),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn lemma8_examples() {
        let m = 4;
        let p = vec![0.25; m];
        let r = SparseSym::from_dense(&vec![vec![1.0 / 16.0; m]; m]);
        assert_eq!(lemma8_subset(&p, &r, 1.0).unwrap(), vec![0, 1, 2, 3]);
        let one = SparseSym::from_dense(&[vec![0.7]]);
        assert_eq!(lemma8_subset(&[1.0], &one, 0.7).unwrap(), vec![0]);
        let mut dense = vec![vec![0.0; 5]; 5];
        dense[1][3] = 0.4;
        dense[3][1] = 0.4;
        dense[0][2] = 0.01;
        dense[2][0] = 0.01;
        let heavy = SparseSym::from_dense(&dense);
        let p = vec![0.2; 5];
        let u = lemma8_subset(&p, &heavy, 0.8).unwrap();
        assert_eq!(u, vec![1, 3]);
        assert!(verify_lemma8(&p, &heavy, 0.8, &u));
        assert!(lemma8_subset(&p, &SparseSym::from_dense(&vec![vec![0.0; 5]; 5]), 0.5).is_err());
    }

    #[test]
    fn symmetric_difference_sorted() {
        assert_eq!(symmetric_difference(&[1, 2, 5], &[2, 3]), vec![1, 3, 5]);
        assert_eq!(symmetric_difference(&[], &[4]), vec![4]);
    }
}

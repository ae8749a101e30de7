//! Chunked snakes: sampling, flicks, the instance function `f_X`, and
//! disagreements between two snakes.

use std::fmt::Write as _;

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use crate::error::{arg, Error, Result};
use crate::graph::VertexTransitiveGraph;
use crate::mixing::{ChunkDistribution, ChunkMethod};

/// Largest vertex count for which whole-function tables are built.
pub const TABLE_VERTEX_CAP: usize = 1_000_000;

const NOT_VISITED: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq)]
pub struct SnakeParams {
    pub s: usize,
    /// Number of tail chunks; the snake has `ell + 1` chunks.
    pub ell: usize,
    /// Realized tv distance of `D_s` to uniform.
    pub delta: f64,
    pub eps: f64,
    pub c_ell: f64,
    pub consist_threshold: f64,
    pub good_prob_threshold: f64,
}

impl SnakeParams {
    pub fn new(s: usize, ell: usize) -> Result<Self> {
        if s == 0 || ell == 0 {
            return arg(format!("need s >= 1 and ell >= 1, got s = {s}, ell = {ell}"));
        }
        Ok(SnakeParams {
            s,
            ell,
            delta: 0.0,
            eps: 1.0,
            c_ell: 200.0,
            consist_threshold: 0.9,
            good_prob_threshold: 0.9,
        })
    }

    /// `ℓ = max(1, floor(√N / (c_ell·s)))`.
    pub fn from_formula(n: usize, s: usize, c_ell: f64) -> Result<Self> {
        if !(c_ell > 0.0) {
            return arg("c_ell must be positive");
        }
        let ell = ((n as f64).sqrt() / (c_ell * s as f64)).floor().max(1.0) as usize;
        let mut p = SnakeParams::new(s, ell)?;
        p.c_ell = c_ell;
        Ok(p)
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    /// `L = (ℓ+1)·s`.
    pub fn length(&self) -> usize {
        (self.ell + 1) * self.s
    }
}

/// A snake `(x_0, …, x_L)` with the chunk seeds it was built from.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Snake {
    pub vertices: Vec<u32>,
    pub seeds: Vec<u32>,
    pub s: usize,
}

impl Snake {
    /// `L`.
    pub fn length(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn ell(&self) -> usize {
        self.seeds.len() - 1
    }

    pub fn start(&self) -> u32 {
        self.vertices[0]
    }

    pub fn endpoint(&self) -> u32 {
        *self.vertices.last().unwrap()
    }

    /// `x_{sk}`.
    pub fn chunk_start(&self, k: usize) -> u32 {
        self.vertices[self.s * k]
    }

    /// `X_{0→j}`.
    pub fn head(&self, j: usize) -> &[u32] {
        &self.vertices[..=j]
    }

    /// `snake v1 L=<L> s=<s>` followed by the vertex line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "snake v1 L={} s={}", self.length(), self.s).unwrap();
        let line: Vec<String> = self.vertices.iter().map(u32::to_string).collect();
        writeln!(out, "{}", line.join(" ")).unwrap();
        out
    }

    /// Parse the text form; chunk seeds are recovered from the vertices and
    /// the chunk structure is checked against the model's paths.
    pub fn from_text(text: &str, model: &ChunkModel) -> Result<Snake> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty snake file".into()))?;
        let mut fields = header.split_whitespace();
        if fields.next() != Some("snake") || fields.next() != Some("v1") {
            return Err(Error::Parse(format!("bad snake header `{header}`")));
        }
        let mut length = None;
        let mut s = None;
        for f in fields {
            let (k, v) = f.split_once('=').ok_or_else(|| Error::Parse(format!("bad header field `{f}`")))?;
            let v: usize = v.parse().map_err(|_| Error::Parse(format!("bad header value `{f}`")))?;
            match k {
                "L" => length = Some(v),
                "s" => s = Some(v),
                _ => return Err(Error::Parse(format!("unknown header field `{k}`"))),
            }
        }
        let (length, s) = length.zip(s).ok_or_else(|| Error::Parse("header needs L and s".into()))?;
        let vertices: Vec<u32> = lines
            .next()
            .ok_or_else(|| Error::Parse("missing vertex line".into()))?
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad vertex `{t}`"))))
            .collect::<Result<_>>()?;
        if vertices.len() != length + 1 {
            return Err(Error::Parse(format!("expected {} vertices, found {}", length + 1, vertices.len())));
        }
        if s != model.s() || s == 0 || length % s != 0 || length < 2 * s {
            return arg(format!("snake with L = {length}, s = {s} does not fit a model with s = {}", model.s()));
        }
        for &v in &vertices {
            model.graph().check_vertex(v)?;
        }
        let graph = model.graph();
        let chunks = length / s;
        let mut seed_idx = Vec::with_capacity(chunks);
        for k in 0..chunks {
            let g = graph.apply_inverse(vertices[s * k], vertices[s * (k + 1)]);
            let i = model.seed_index(g).ok_or_else(|| Error::Validation(format!("chunk {k} ends outside the support of D_s")))?;
            seed_idx.push(i);
        }
        let snake = model.assemble(vertices[0], &seed_idx);
        if snake.vertices != vertices {
            return Err(Error::Validation("vertex sequence is not a chunked snake of this model".into()));
        }
        Ok(snake)
    }
}

/// `D_s` together with the fixed paths `S(g)` of its support, the sampler,
/// the table `P(x)` and, per vertex, the support paths through it.
#[derive(Debug, Clone)]
pub struct ChunkModel<'g> {
    graph: &'g VertexTransitiveGraph,
    chunk: ChunkDistribution,
    s: usize,
    seeds: Vec<u32>,
    weights: Vec<f64>,
    paths: Vec<u32>,
    sampler: WeightedIndex<f64>,
    seed_lookup: Vec<u32>,
    p_table: Vec<f64>,
    cover_offsets: Vec<u32>,
    cover_items: Vec<u32>,
}

impl<'g> ChunkModel<'g> {
    /// Cayley graphs accept any chunk distribution of radius `s`. Other
    /// vertex-transitive graphs need `s = diameter` and `uniform_all`.
    pub fn new(graph: &'g VertexTransitiveGraph, chunk: ChunkDistribution) -> Result<Self> {
        let s = chunk.radius;
        if s == 0 {
            return arg("chunk length s must be >= 1");
        }
        if chunk.dist.len() != graph.vertex_count() {
            return arg("chunk distribution is over a different vertex set");
        }
        if !graph.is_cayley() && (s != graph.diameter() || chunk.method != ChunkMethod::UniformAll) {
            return Err(Error::Unsupported(format!(
                "non-Cayley graphs need s = diameter = {} with uniform_all chunks",
                graph.diameter()
            )));
        }
        let seeds = chunk.dist.support();
        let weights: Vec<f64> = seeds.iter().map(|&g| chunk.dist.get(g)).collect();
        let mut paths = Vec::with_capacity(seeds.len() * s);
        for &g in &seeds {
            paths.extend(graph.extended_shortest_path(g, s)?.vertices);
        }
        let sampler = WeightedIndex::new(&weights).map_err(|e| Error::Internal(format!("sampler: {e}")))?;
        let n = graph.vertex_count();
        let mut seed_lookup = vec![NOT_VISITED; n];
        for (i, &g) in seeds.iter().enumerate() {
            seed_lookup[g as usize] = i as u32;
        }
        // Per vertex, the seeds whose path visits it (each seed listed once).
        let mut lists: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut p_table = vec![0.0; n];
        for (i, path) in paths.chunks(s).enumerate() {
            let mut distinct: Vec<u32> = path.to_vec();
            distinct.sort_unstable();
            distinct.dedup();
            for u in distinct {
                lists[u as usize].push(i as u32);
                p_table[u as usize] += weights[i];
            }
        }
        let mut cover_offsets = Vec::with_capacity(n + 1);
        let mut cover_items = Vec::new();
        cover_offsets.push(0);
        for l in lists {
            cover_items.extend(l);
            cover_offsets.push(cover_items.len() as u32);
        }
        Ok(ChunkModel { graph, chunk, s, seeds, weights, paths, sampler, seed_lookup, p_table, cover_offsets, cover_items })
    }

    pub fn graph(&self) -> &'g VertexTransitiveGraph {
        self.graph
    }

    pub fn chunk(&self) -> &ChunkDistribution {
        &self.chunk
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn delta(&self) -> f64 {
        self.chunk.delta
    }

    /// Support of `D_s`, ascending.
    pub fn seeds(&self) -> &[u32] {
        &self.seeds
    }

    pub fn support_size(&self) -> usize {
        self.seeds.len()
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `S(g)` for the `i`-th support element.
    pub fn path(&self, i: usize) -> &[u32] {
        &self.paths[i * self.s..(i + 1) * self.s]
    }

    pub fn seed_index(&self, g: u32) -> Option<usize> {
        match self.seed_lookup.get(g as usize) {
            Some(&i) if i != NOT_VISITED => Some(i as usize),
            _ => None,
        }
    }

    /// `P(x) = Pr_{g∼D_s}[x ∈ S(g)]`.
    pub fn p(&self, x: u32) -> f64 {
        self.p_table[x as usize]
    }

    pub fn p_table(&self) -> &[f64] {
        &self.p_table
    }

    /// Support indices whose path passes through `u`.
    pub fn covering(&self, u: u32) -> &[u32] {
        &self.cover_items[self.cover_offsets[u as usize] as usize..self.cover_offsets[u as usize + 1] as usize]
    }

    pub fn sample_seed(&self, rng: &mut impl Rng) -> usize {
        self.sampler.sample(rng)
    }

    pub fn check_params(&self, params: &SnakeParams) -> Result<()> {
        if params.s != self.s {
            return arg(format!("params have s = {}, D_s has radius {}", params.s, self.s));
        }
        if params.ell == 0 {
            return arg("ell must be >= 1");
        }
        Ok(())
    }

    /// Translate the chunk paths of the given support indices, starting at `x0`.
    pub fn assemble(&self, x0: u32, seed_indices: &[usize]) -> Snake {
        let mut vertices = Vec::with_capacity(seed_indices.len() * self.s + 1);
        vertices.push(x0);
        self.extend(&mut vertices, seed_indices);
        Snake { vertices, seeds: seed_indices.iter().map(|&i| self.seeds[i]).collect(), s: self.s }
    }

    fn extend(&self, vertices: &mut Vec<u32>, seed_indices: &[usize]) {
        for &i in seed_indices {
            let x = *vertices.last().unwrap();
            vertices.extend(self.path(i).iter().map(|&u| self.graph.apply(x, u)));
        }
    }

    /// Support indices of a snake's chunk seeds.
    pub fn seed_indices(&self, snake: &Snake) -> Vec<usize> {
        snake.seeds.iter().map(|&g| self.seed_index(g).expect("snake seed in support")).collect()
    }

    pub fn sample_snake(&self, x0: u32, params: &SnakeParams, rng: &mut impl Rng) -> Result<Snake> {
        self.check_params(params)?;
        self.graph.check_vertex(x0)?;
        let idx: Vec<usize> = (0..=params.ell).map(|_| self.sample_seed(rng)).collect();
        Ok(self.assemble(x0, &idx))
    }

    /// Draw `j` uniformly from `{s, 2s, …, ℓs}` and resample every chunk from
    /// index `j/s` on.
    pub fn flick(&self, x: &Snake, rng: &mut impl Rng) -> (usize, Snake) {
        let c = rng.gen_range(1..=x.ell());
        let y = self.resample_from(x, c, rng);
        (c * self.s, y)
    }

    /// Keep chunks `0..c` of `x`, draw fresh seeds for chunks `c..=ℓ`.
    pub fn resample_from(&self, x: &Snake, c: usize, rng: &mut impl Rng) -> Snake {
        let fresh: Vec<usize> = (c..=x.ell()).map(|_| self.sample_seed(rng)).collect();
        self.with_tail(x, c, &fresh)
    }

    /// `x`'s first `c` chunks followed by the given tail seed indices.
    pub fn with_tail(&self, x: &Snake, c: usize, tail: &[usize]) -> Snake {
        let mut vertices = x.vertices[..=c * self.s].to_vec();
        self.extend(&mut vertices, tail);
        let mut seeds = x.seeds[..c].to_vec();
        seeds.extend(tail.iter().map(|&i| self.seeds[i]));
        Snake { vertices, seeds, s: self.s }
    }
}

/// `f_X(v)`: `L − max{i : x_i = v}` on the snake, `L + Δ(x_0, v)` off it.
pub fn f_value(graph: &VertexTransitiveGraph, x: &Snake, v: u32) -> u32 {
    let l = x.length() as u32;
    match x.vertices.iter().rposition(|&u| u == v) {
        Some(i) => l - i as u32,
        None => l + graph.distance(x.start(), v),
    }
}

/// `f_X` on every vertex.
pub fn f_table(graph: &VertexTransitiveGraph, x: &Snake) -> Result<Vec<u32>> {
    let n = graph.vertex_count();
    if n > TABLE_VERTEX_CAP {
        return Err(Error::SizeLimit { what: "f_X table".into(), needed: n as u128, cap: TABLE_VERTEX_CAP as u128 });
    }
    let l = x.length() as u32;
    let mut last = vec![NOT_VISITED; n];
    for (i, &v) in x.vertices.iter().enumerate() {
        last[v as usize] = i as u32;
    }
    Ok((0..n as u32)
        .map(|v| match last[v as usize] {
            NOT_VISITED => l + graph.distance(x.start(), v),
            i => l - i,
        })
        .collect())
}

/// Whether `v` is one of the snake's vertices.
pub fn set_indicator(x: &Snake, v: u32) -> bool {
    x.vertices.contains(&v)
}

/// `(v, last index of v)` for every vertex on the snake, sorted by `v`.
pub fn last_visits(x: &Snake) -> Vec<(u32, u32)> {
    last_visits_of(&x.vertices)
}

/// [`last_visits`] for a bare vertex sequence.
pub fn last_visits_of(vertices: &[u32]) -> Vec<(u32, u32)> {
    let mut pairs: Vec<(u32, u32)> = vertices.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
    pairs.sort_unstable();
    let mut out: Vec<(u32, u32)> = Vec::with_capacity(pairs.len());
    for (v, i) in pairs {
        match out.last_mut() {
            Some(last) if last.0 == v => last.1 = i,
            _ => out.push((v, i)),
        }
    }
    out
}

/// Shared vertices with different last-visit indices, from two sorted lists.
fn merge_disagreements(a: &[(u32, u32)], b: &[(u32, u32)], stop_at_first: bool) -> Vec<u32> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                if a[i].1 != b[j].1 {
                    out.push(a[i].0);
                    if stop_at_first {
                        break;
                    }
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// No shared vertex takes different `f` values. Both snakes must have the same length.
pub fn is_consistent(x: &Snake, y: &Snake) -> bool {
    merge_disagreements(&last_visits(x), &last_visits(y), true).is_empty()
}

/// Same as [`is_consistent`] with `x`'s sorted last-visit list precomputed.
pub fn is_consistent_with(x_visits: &[(u32, u32)], y: &Snake) -> bool {
    merge_disagreements(x_visits, &last_visits(y), true).is_empty()
}

/// Consistent and with distinct endpoints: the event counted by consistency.
pub fn consistent_distinct_ends(x_visits: &[(u32, u32)], x: &Snake, y: &Snake) -> bool {
    x.endpoint() != y.endpoint() && is_consistent_with(x_visits, y)
}

/// Consistency of a snake (given by its sorted last visits) with a bare sequence.
pub fn is_consistent_seq(x_visits: &[(u32, u32)], y: &[u32]) -> bool {
    merge_disagreements(x_visits, &last_visits_of(y), true).is_empty()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisagreementReport {
    pub vertices: Vec<u32>,
    /// Over the union of both vertex sets: when the snakes are consistent,
    /// `f_X(v) ≠ f_Y(v)` exactly when `set_X(v) ≠ set_Y(v)`. Off both snakes
    /// the two functions agree outright.
    pub equivalence_holds: bool,
}

impl DisagreementReport {
    pub fn consistent(&self) -> bool {
        self.vertices.is_empty()
    }
}

pub fn find_disagreements(graph: &VertexTransitiveGraph, x: &Snake, y: &Snake) -> Result<DisagreementReport> {
    if x.length() != y.length() {
        return arg(format!("snake lengths differ: {} vs {}", x.length(), y.length()));
    }
    if x.start() != y.start() {
        return arg("snakes start at different vertices");
    }
    let vertices = merge_disagreements(&last_visits(x), &last_visits(y), false);
    let equivalence_holds = if vertices.is_empty() {
        let mut union: Vec<u32> = x.vertices.iter().chain(&y.vertices).copied().collect();
        union.sort_unstable();
        union.dedup();
        union.into_iter().all(|v| {
            (f_value(graph, x, v) != f_value(graph, y, v)) == (set_indicator(x, v) != set_indicator(y, v))
        })
    } else {
        true
    };
    Ok(DisagreementReport { vertices, equivalence_holds })
}

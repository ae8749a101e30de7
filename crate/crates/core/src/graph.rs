//! Vertex-transitive graphs: Cayley graphs and explicit graphs carrying an
//! automorphism family `σ_x` with `σ_x(v_0) = x`.
//!
//! Shortest paths from the base vertex are fixed once: BFS with sorted
//! neighbor lists, each vertex's parent being its smallest-id neighbor one
//! step closer to `v_0`.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{arg, Error, Result};
use crate::group::{FiniteGroup, GroupElement, GroupSpec};

/// Cap on vertex count for the exact subroutines.
pub const VERTEX_CAP: usize = 1 << 20;
/// Explicit graphs store one permutation per vertex, so they are kept small.
pub const EXPLICIT_CAP: usize = 1 << 12;

#[derive(Debug, Clone)]
pub enum GraphKind {
    Cayley {
        group: Arc<FiniteGroup>,
        generators: Vec<GroupElement>,
    },
    Explicit {
        /// `sigma[x * n + v] = σ_x(v)`.
        sigma: Vec<u32>,
        sigma_inv: Vec<u32>,
    },
}

#[derive(Debug, Clone)]
pub struct VertexTransitiveGraph {
    n: usize,
    degree: usize,
    adjacency: Vec<u32>,
    base: u32,
    kind: GraphKind,
    base_dist: Vec<u32>,
    parent: Vec<u32>,
    diameter: usize,
    label: String,
}

/// `(g_1, …, g_len)`: a fixed shortest path from `v_0` padded with its target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedPath {
    pub target: u32,
    pub vertices: Vec<u32>,
}

impl ExtendedPath {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AutomorphismCheck {
    pub x: u32,
    pub is_permutation: bool,
    pub edge_preserving: bool,
    pub sends_base_to_x: bool,
    pub offending_edge: Option<(u32, u32)>,
}

impl AutomorphismCheck {
    pub fn passed(&self) -> bool {
        self.is_permutation && self.edge_preserving && self.sends_base_to_x
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransitivityReport {
    pub entries: Vec<AutomorphismCheck>,
}

impl TransitivityReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(AutomorphismCheck::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AutomorphismCheck> {
        self.entries.iter().filter(|e| !e.passed())
    }
}

impl VertexTransitiveGraph {
    /// Cayley graph `C(G, Γ)` with edges `g ~ gγ` for `γ ∈ Γ ∪ Γ⁻¹`.
    pub fn cayley(group: Arc<FiniteGroup>, generators: &[GroupElement]) -> Result<Self> {
        if generators.is_empty() {
            return arg("generator set is empty");
        }
        let n = group.order();
        if n > VERTEX_CAP {
            return Err(Error::SizeLimit { what: "Cayley graph".into(), needed: n as u128, cap: VERTEX_CAP as u128 });
        }
        let mut gens = generators.to_vec();
        gens.sort();
        gens.dedup();
        for &g in &gens {
            group.element(g.id())?;
            if g == group.identity() {
                return arg("identity cannot be a generator");
            }
        }
        let mut steps: Vec<u32> = gens.iter().flat_map(|g| [g.0, group.inv(g.0)]).collect();
        steps.sort();
        steps.dedup();
        let degree = steps.len();
        let mut adjacency = Vec::with_capacity(n * degree);
        let mut row = Vec::with_capacity(degree);
        for v in 0..n as u32 {
            row.clear();
            row.extend(steps.iter().map(|&g| group.mul(v, g)));
            row.sort_unstable();
            adjacency.extend_from_slice(&row);
        }
        let label = format!("cayley({})", group.spec());
        Self::finish(n, degree, adjacency, 0, GraphKind::Cayley { group, generators: gens }, label)
    }

    /// Explicit graph with a supplied automorphism family; accepted only if
    /// every `σ_x` passes validation.
    pub fn explicit(adjacency: Vec<Vec<u32>>, base: u32, sigma: Vec<Vec<u32>>) -> Result<Self> {
        let n = adjacency.len();
        if n == 0 {
            return arg("graph has no vertices");
        }
        if n > EXPLICIT_CAP {
            return Err(Error::SizeLimit { what: "explicit graph".into(), needed: n as u128, cap: EXPLICIT_CAP as u128 });
        }
        if base as usize >= n {
            return arg("base vertex out of range");
        }
        if sigma.len() != n || sigma.iter().any(|p| p.len() != n) {
            return arg("automorphism family must hold one length-N permutation per vertex");
        }
        let degree = adjacency[0].len();
        let mut flat = Vec::with_capacity(n * degree);
        for (v, nbrs) in adjacency.iter().enumerate() {
            let mut row = nbrs.clone();
            row.sort_unstable();
            row.dedup();
            if row.len() != degree || row.len() != nbrs.len() {
                return Err(Error::Validation(format!("vertex {v} breaks regularity or repeats a neighbor")));
            }
            if row.iter().any(|&u| u as usize >= n || u as usize == v) {
                return Err(Error::Validation(format!("vertex {v} has an invalid neighbor")));
            }
            flat.extend_from_slice(&row);
        }
        for v in 0..n {
            for &u in &flat[v * degree..(v + 1) * degree] {
                if flat[u as usize * degree..(u as usize + 1) * degree].binary_search(&(v as u32)).is_err() {
                    return Err(Error::Validation(format!("edge ({v},{u}) is not symmetric")));
                }
            }
        }
        let perms: Vec<u32> = sigma.into_iter().flatten().collect();
        let mut inv = vec![0u32; n * n];
        let kind_probe = GraphKind::Explicit { sigma: perms.clone(), sigma_inv: Vec::new() };
        let report = verify_family(n, degree, &flat, base, &kind_probe);
        if let Some(bad) = report.failures().next() {
            let why = if !bad.is_permutation {
                "is not a permutation".to_string()
            } else if !bad.sends_base_to_x {
                format!("does not send v_0 = {base} to {}", bad.x)
            } else {
                let (u, v) = bad.offending_edge.unwrap();
                format!("maps edge ({u},{v}) to a non-edge")
            };
            return Err(Error::Validation(format!("σ_{} {}", bad.x, why)));
        }
        for x in 0..n {
            for v in 0..n {
                inv[x * n + perms[x * n + v] as usize] = v as u32;
            }
        }
        Self::finish(n, degree, flat, base, GraphKind::Explicit { sigma: perms, sigma_inv: inv }, "explicit".into())
    }

    fn finish(n: usize, degree: usize, adjacency: Vec<u32>, base: u32, kind: GraphKind, label: String) -> Result<Self> {
        let base_dist = bfs(n, degree, &adjacency, base);
        let reached = base_dist.iter().filter(|&&d| d != u32::MAX).count();
        if reached != n {
            return Err(Error::Disconnected { reached, total: n });
        }
        let parent: Vec<u32> = (0..n)
            .map(|v| {
                if v as u32 == base {
                    return base;
                }
                let d = base_dist[v];
                *adjacency[v * degree..(v + 1) * degree]
                    .iter()
                    .find(|&&u| base_dist[u as usize] + 1 == d)
                    .expect("BFS layer structure")
            })
            .collect();
        let diameter = *base_dist.iter().max().unwrap() as usize;
        Ok(VertexTransitiveGraph { n, degree, adjacency, base, kind, base_dist, parent, diameter, label })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn kind(&self) -> &GraphKind {
        &self.kind
    }

    pub fn is_cayley(&self) -> bool {
        matches!(self.kind, GraphKind::Cayley { .. })
    }

    pub fn group(&self) -> Option<&FiniteGroup> {
        match &self.kind {
            GraphKind::Cayley { group, .. } => Some(group),
            GraphKind::Explicit { .. } => None,
        }
    }

    #[inline]
    pub fn neighbors(&self, v: u32) -> &[u32] {
        let v = v as usize;
        &self.adjacency[v * self.degree..(v + 1) * self.degree]
    }

    pub fn is_edge(&self, u: u32, v: u32) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn check_vertex(&self, v: u32) -> Result<()> {
        if (v as usize) < self.n {
            Ok(())
        } else {
            arg(format!("vertex {v} out of range (N = {})", self.n))
        }
    }

    /// `σ_x(v)`: left multiplication for Cayley graphs, the stored permutation otherwise.
    #[inline]
    pub fn apply(&self, x: u32, v: u32) -> u32 {
        match &self.kind {
            GraphKind::Cayley { group, .. } => group.mul(x, v),
            GraphKind::Explicit { sigma, .. } => sigma[x as usize * self.n + v as usize],
        }
    }

    /// `σ_x⁻¹(v)`.
    #[inline]
    pub fn apply_inverse(&self, x: u32, v: u32) -> u32 {
        match &self.kind {
            GraphKind::Cayley { group, .. } => group.mul(group.inv(x), v),
            GraphKind::Explicit { sigma_inv, .. } => sigma_inv[x as usize * self.n + v as usize],
        }
    }

    /// Distance from the base vertex.
    #[inline]
    pub fn base_distance(&self, v: u32) -> u32 {
        self.base_dist[v as usize]
    }

    /// `Δ(u, v)`, read off the base BFS through `σ_u⁻¹`.
    pub fn distance(&self, u: u32, v: u32) -> u32 {
        self.base_dist[self.apply_inverse(u, v) as usize]
    }

    /// Fresh BFS from `source`.
    pub fn all_distances(&self, source: u32) -> Vec<u32> {
        bfs(self.n, self.degree, &self.adjacency, source)
    }

    pub fn diameter(&self) -> usize {
        self.diameter
    }

    /// Brute-force maximum over all sources.
    pub fn diameter_all_pairs(&self) -> usize {
        (0..self.n as u32)
            .map(|s| *self.all_distances(s).iter().max().unwrap() as usize)
            .max()
            .unwrap()
    }

    /// Sorted vertex set `{v : Δ(center, v) ≤ radius}`.
    pub fn ball(&self, center: u32, radius: usize) -> Vec<u32> {
        let mut out: Vec<u32> = (0..self.n as u32)
            .filter(|&u| self.base_dist[u as usize] as usize <= radius)
            .map(|u| self.apply(center, u))
            .collect();
        out.sort_unstable();
        out
    }

    /// The fixed shortest path `(v_0, …, target)`.
    pub fn shortest_path(&self, target: u32) -> Vec<u32> {
        let mut path = vec![target];
        let mut v = target;
        while v != self.base {
            v = self.parent[v as usize];
            path.push(v);
        }
        path.reverse();
        path
    }

    /// `S(target) = (g_1, …, g_length)` with `g_i = target` for `i ≥ Δ(v_0, target)`.
    pub fn extended_shortest_path(&self, target: u32, length: usize) -> Result<ExtendedPath> {
        self.check_vertex(target)?;
        let r = self.base_dist[target as usize] as usize;
        if length < r {
            return arg(format!("length {length} is shorter than Δ(v_0, {target}) = {r}"));
        }
        let path = self.shortest_path(target);
        let mut vertices: Vec<u32> = path[1..].to_vec();
        vertices.resize(length, target);
        Ok(ExtendedPath { target, vertices })
    }

    pub fn verify_vertex_transitive(&self) -> TransitivityReport {
        verify_family(self.n, self.degree, &self.adjacency, self.base, &self.kind)
    }

    /// Line-oriented text serialization.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "vt-graph v1 N={} d={} base={}", self.n, self.diameter, self.base).unwrap();
        if let GraphKind::Cayley { group, generators } = &self.kind {
            let gens: Vec<String> = generators.iter().map(|g| g.0.to_string()).collect();
            writeln!(out, "cayley group={} gens={}", group.spec(), gens.join(",")).unwrap();
        } else {
            writeln!(out, "explicit").unwrap();
        }
        for v in 0..self.n as u32 {
            let nb: Vec<String> = self.neighbors(v).iter().map(|u| u.to_string()).collect();
            writeln!(out, "{v}: {}", nb.join(" ")).unwrap();
        }
        if let GraphKind::Explicit { sigma, .. } = &self.kind {
            for x in 0..self.n {
                let p: Vec<String> = sigma[x * self.n..(x + 1) * self.n].iter().map(|u| u.to_string()).collect();
                writeln!(out, "sigma {x}: {}", p.join(" ")).unwrap();
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let perr = |m: &str| Error::Parse(format!("graph file: {m}"));
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| perr("empty input"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 5 || fields[0] != "vt-graph" || fields[1] != "v1" {
            return Err(perr("bad header"));
        }
        let kv = |f: &str, key: &str| -> Result<usize> {
            f.strip_prefix(key)
                .and_then(|r| r.parse().ok())
                .ok_or_else(|| perr(&format!("bad header field `{f}`")))
        };
        let n = kv(fields[2], "N=")?;
        let d = kv(fields[3], "d=")?;
        let base = kv(fields[4], "base=")? as u32;
        let kind_line = lines.next().ok_or_else(|| perr("missing kind line"))?;
        let mut adjacency = Vec::with_capacity(n);
        let mut sigma = Vec::new();
        for line in lines {
            if line.is_empty() {
                continue;
            }
            let (tag, rest) = line.split_once(':').ok_or_else(|| perr("missing `:`"))?;
            let ids: Vec<u32> = rest
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| perr("bad vertex id")))
                .collect::<Result<_>>()?;
            if let Some(x) = tag.strip_prefix("sigma ") {
                if x.trim().parse::<usize>().ok() != Some(sigma.len()) {
                    return Err(perr("sigma lines out of order"));
                }
                sigma.push(ids);
            } else {
                if tag.trim().parse::<usize>().ok() != Some(adjacency.len()) {
                    return Err(perr("vertex lines out of order"));
                }
                adjacency.push(ids);
            }
        }
        if adjacency.len() != n {
            return Err(perr("vertex count does not match header"));
        }
        let graph = if let Some(rest) = kind_line.strip_prefix("cayley ") {
            let (g, gens) = rest.split_once(" gens=").ok_or_else(|| perr("bad cayley line"))?;
            let spec: GroupSpec = g.strip_prefix("group=").ok_or_else(|| perr("bad cayley line"))?.parse()?;
            let group = Arc::new(FiniteGroup::build(&spec)?);
            let gens: Vec<GroupElement> = gens
                .split(',')
                .map(|t| t.parse().map(GroupElement).map_err(|_| perr("bad generator id")))
                .collect::<Result<_>>()?;
            let g = Self::cayley(group, &gens)?;
            for (v, row) in adjacency.iter().enumerate() {
                if g.neighbors(v as u32) != row.as_slice() {
                    return Err(Error::Validation(format!("adjacency of vertex {v} disagrees with the Cayley structure")));
                }
            }
            g
        } else if kind_line == "explicit" {
            Self::explicit(adjacency, base, sigma)?
        } else {
            return Err(perr("unknown graph kind"));
        };
        if graph.base != base || graph.diameter != d {
            return Err(Error::Validation("header does not match the rebuilt graph".into()));
        }
        Ok(graph)
    }
}

fn bfs(n: usize, degree: usize, adjacency: &[u32], source: u32) -> Vec<u32> {
    let mut dist = vec![u32::MAX; n];
    let mut queue = VecDeque::new();
    dist[source as usize] = 0;
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        let dv = dist[v as usize];
        for &u in &adjacency[v as usize * degree..(v as usize + 1) * degree] {
            if dist[u as usize] == u32::MAX {
                dist[u as usize] = dv + 1;
                queue.push_back(u);
            }
        }
    }
    dist
}

fn verify_family(n: usize, degree: usize, adjacency: &[u32], base: u32, kind: &GraphKind) -> TransitivityReport {
    let map = |x: usize, v: usize| -> u32 {
        match kind {
            GraphKind::Cayley { group, .. } => group.mul(x as u32, v as u32),
            GraphKind::Explicit { sigma, .. } => sigma[x * n + v],
        }
    };
    let is_edge = |u: u32, v: u32| {
        (u as usize) < n && adjacency[u as usize * degree..(u as usize + 1) * degree].binary_search(&v).is_ok()
    };
    let entries = (0..n)
        .map(|x| {
            let mut seen = vec![false; n];
            let mut is_permutation = true;
            for v in 0..n {
                let w = map(x, v) as usize;
                if w >= n || seen[w] {
                    is_permutation = false;
                    break;
                }
                seen[w] = true;
            }
            let mut offending_edge = None;
            if is_permutation {
                'outer: for u in 0..n {
                    for &v in &adjacency[u * degree..(u + 1) * degree] {
                        if !is_edge(map(x, u), map(x, v as usize)) {
                            offending_edge = Some((u as u32, v));
                            break 'outer;
                        }
                    }
                }
            }
            AutomorphismCheck {
                x: x as u32,
                is_permutation,
                edge_preserving: is_permutation && offending_edge.is_none(),
                sends_base_to_x: is_permutation && map(x, base as usize) == x as u32,
                offending_edge,
            }
        })
        .collect();
    TransitivityReport { entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    #[test]
    fn presets_have_expected_shape() {
        let c6 = families::cycle(6).unwrap();
        assert_eq!((c6.vertex_count(), c6.degree(), c6.diameter()), (6, 2, 3));
        let q3 = families::hypercube(3).unwrap();
        assert_eq!((q3.vertex_count(), q3.degree(), q3.diameter()), (8, 3, 3));
        let t5 = families::torus(5, 2).unwrap();
        assert_eq!((t5.vertex_count(), t5.degree(), t5.diameter()), (25, 4, 4));
    }

    #[test]
    fn distances() {
        let c6 = families::cycle(6).unwrap();
        assert_eq!(c6.distance(0, 3), 3);
        let q3 = families::hypercube(3).unwrap();
        assert_eq!(q3.distance(0, 7), 3);
        for v in 0..8 {
            assert_eq!(q3.distance(v, v), 0);
        }
    }

    #[test]
    fn balls() {
        let q3 = families::hypercube(3).unwrap();
        assert_eq!(q3.ball(0, 0), vec![0]);
        assert_eq!(q3.ball(0, 1), vec![0, 1, 2, 4]);
        let c6 = families::cycle(6).unwrap();
        assert_eq!(c6.ball(0, 3).len(), 6);
    }

    #[test]
    fn extended_paths_follow_tie_break() {
        let c6 = families::cycle(6).unwrap();
        assert_eq!(c6.extended_shortest_path(2, 3).unwrap().vertices, vec![1, 2, 2]);
        assert_eq!(c6.extended_shortest_path(0, 4).unwrap().vertices, vec![0; 4]);
        assert!(matches!(c6.extended_shortest_path(3, 2), Err(Error::Argument(_))));
        let q3 = families::hypercube(3).unwrap();
        let g = q3.group().unwrap();
        let target = g.parse_element("(1,1,0)").unwrap().0;
        let p = q3.extended_shortest_path(target, 3).unwrap();
        let names: Vec<String> = p.vertices.iter().map(|&v| g.format_element(GroupElement(v))).collect();
        assert_eq!(names, ["(1,0,0)", "(1,1,0)", "(1,1,0)"]);
    }

    #[test]
    fn cayley_left_translation() {
        let c6 = families::cycle(6).unwrap();
        assert_eq!(c6.apply(2, 3), 5);
        for x in 0..6 {
            assert_eq!(c6.apply(x, c6.base()), x);
            for u in 0..6 {
                for &v in c6.neighbors(u) {
                    assert!(c6.is_edge(c6.apply(x, u), c6.apply(x, v)));
                }
            }
        }
        assert!(c6.verify_vertex_transitive().passed());
    }

    fn cycle_lists(n: u32) -> Vec<Vec<u32>> {
        (0..n).map(|v| vec![(v + n - 1) % n, (v + 1) % n]).collect()
    }

    #[test]
    fn explicit_rotations_accepted() {
        let sigma: Vec<Vec<u32>> = (0..6).map(|x| (0..6).map(|v| (v + x) % 6).collect()).collect();
        let g = VertexTransitiveGraph::explicit(cycle_lists(6), 0, sigma).unwrap();
        assert_eq!(g.diameter(), 3);
        assert!(g.verify_vertex_transitive().passed());
        let q3 = families::hypercube(3).unwrap();
        let lists: Vec<Vec<u32>> = (0..8).map(|v| q3.neighbors(v).to_vec()).collect();
        let xor: Vec<Vec<u32>> = (0..8).map(|x| (0..8).map(|v| v ^ x).collect()).collect();
        assert!(VertexTransitiveGraph::explicit(lists, 0, xor).is_ok());
    }

    #[test]
    fn explicit_bad_family_rejected() {
        let mut sigma: Vec<Vec<u32>> = (0..6).map(|x| (0..6).map(|v| (v + x) % 6).collect()).collect();
        sigma[1] = (0..6).collect();
        match VertexTransitiveGraph::explicit(cycle_lists(6), 0, sigma) {
            Err(Error::Validation(m)) => assert!(m.contains("σ_1"), "{m}"),
            other => panic!("unexpected {other:?}"),
        }
        // σ_2 swaps 0 and 2, fixes everything else: (0,1) maps to (2,1) fine, (5,0) maps to (5,2) non-edge
        let mut sigma: Vec<Vec<u32>> = (0..6).map(|x| (0..6).map(|v| (v + x) % 6).collect()).collect();
        sigma[2] = vec![2, 1, 0, 3, 4, 5];
        match VertexTransitiveGraph::explicit(cycle_lists(6), 0, sigma) {
            Err(Error::Validation(m)) => assert!(m.contains("σ_2") && m.contains("edge"), "{m}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn report_lists_failure() {
        let lists = cycle_lists(6);
        let flat: Vec<u32> = lists.into_iter().flat_map(|mut r| {
            r.sort();
            r
        }).collect();
        let mut sigma: Vec<u32> = (0..6).flat_map(|x| (0..6).map(move |v| (v + x) % 6)).collect();
        for v in 0..6 {
            sigma[6 + v] = v as u32;
        }
        let report = verify_family(6, 2, &flat, 0, &GraphKind::Explicit { sigma, sigma_inv: vec![] });
        assert!(!report.passed());
        let bad: Vec<u32> = report.failures().map(|e| e.x).collect();
        assert_eq!(bad, vec![1]);
        assert!(!report.entries[1].sends_base_to_x);
    }

    #[test]
    fn disconnected_and_bad_generators() {
        let z6 = Arc::new(FiniteGroup::build(&GroupSpec::Cyclic(6)).unwrap());
        assert!(matches!(
            VertexTransitiveGraph::cayley(z6.clone(), &[GroupElement(2)]),
            Err(Error::Disconnected { reached: 3, total: 6 })
        ));
        assert!(VertexTransitiveGraph::cayley(z6.clone(), &[]).is_err());
        assert!(VertexTransitiveGraph::cayley(z6, &[GroupElement(0)]).is_err());
    }

    #[test]
    fn diameter_matches_all_pairs() {
        for g in [
            families::cycle(7).unwrap(),
            families::hypercube(4).unwrap(),
            families::torus(4, 3).unwrap(),
            families::petersen(),
            families::complete(9).unwrap(),
        ] {
            assert_eq!(g.diameter(), g.diameter_all_pairs(), "{}", g.label());
            assert_eq!(g.ball(g.base(), g.diameter()).len(), g.vertex_count());
        }
    }

    #[test]
    fn text_round_trip() {
        for g in [families::hypercube(3).unwrap(), families::petersen(), families::torus(3, 2).unwrap()] {
            let text = g.to_text();
            let back = VertexTransitiveGraph::from_text(&text).unwrap();
            assert_eq!(back.to_text(), text);
        }
        let text = families::cycle(6).unwrap().to_text();
        assert!(text.starts_with("vt-graph v1 N=6 d=3 base=0\n"));
        assert!(VertexTransitiveGraph::from_text(&text.replace("0: 1 5", "0: 1 4")).is_err());
    }
}

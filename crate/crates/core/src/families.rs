//! Preset graph families.

use std::sync::Arc;

use rand::Rng;

use crate::error::{arg, Error, Result};
use crate::graph::VertexTransitiveGraph;
use crate::group::{FiniteGroup, GroupElement, GroupSpec};

/// Cycle `C_n = Cayley(Z_n, {1})`.
pub fn cycle(n: usize) -> Result<VertexTransitiveGraph> {
    if n < 3 {
        return arg("cycle needs n >= 3");
    }
    let g = Arc::new(FiniteGroup::build(&GroupSpec::Cyclic(n))?);
    Ok(VertexTransitiveGraph::cayley(g, &[GroupElement(1)])?.with_label(format!("cycle({n})")))
}

/// Hypercube `Q_n = Cayley(Z_2^n, standard basis)`.
pub fn hypercube(n: usize) -> Result<VertexTransitiveGraph> {
    let g = Arc::new(FiniteGroup::build(&GroupSpec::Power(Box::new(GroupSpec::Cyclic(2)), n))?);
    let gens: Vec<GroupElement> = (0..n).map(|i| GroupElement(1 << i)).collect();
    Ok(VertexTransitiveGraph::cayley(g, &gens)?.with_label(format!("hypercube({n})")))
}

/// Torus `Z_n^dim` with unit steps along each axis.
pub fn torus(n: usize, dim: usize) -> Result<VertexTransitiveGraph> {
    if n < 2 {
        return arg("torus needs n >= 2");
    }
    let g = Arc::new(FiniteGroup::build(&GroupSpec::Power(Box::new(GroupSpec::Cyclic(n)), dim))?);
    let gens: Vec<GroupElement> = (0..dim)
        .map(|i| {
            let mut c = vec![0; dim];
            c[i] = 1;
            g.from_coordinates(&c)
        })
        .collect::<Result<_>>()?;
    Ok(VertexTransitiveGraph::cayley(g, &gens)?.with_label(format!("torus({n},{dim})")))
}

/// Complete graph `K_n = Cayley(Z_n, Z_n ∖ {0})`.
pub fn complete(n: usize) -> Result<VertexTransitiveGraph> {
    if n < 2 {
        return arg("complete graph needs n >= 2");
    }
    let g = Arc::new(FiniteGroup::build(&GroupSpec::Cyclic(n))?);
    let gens: Vec<GroupElement> = (1..n as u32).map(GroupElement).collect();
    Ok(VertexTransitiveGraph::cayley(g, &gens)?.with_label(format!("complete({n})")))
}

/// Cayley graph of an arbitrary group spec with generators in element notation.
pub fn cayley(spec: &GroupSpec, generators: &[&str]) -> Result<VertexTransitiveGraph> {
    let g = Arc::new(FiniteGroup::build(spec)?);
    let gens: Vec<GroupElement> = generators.iter().map(|t| g.parse_element(t)).collect::<Result<_>>()?;
    VertexTransitiveGraph::cayley(g, &gens)
}

/// Cayley graph on a random sequence of `count` group elements. Returns the
/// graph and the drawn sequence (identity draws stay in the sequence but are
/// not generators).
pub fn random_cayley(spec: &GroupSpec, count: usize, rng: &mut impl Rng) -> Result<(VertexTransitiveGraph, Vec<GroupElement>)> {
    let g = Arc::new(FiniteGroup::build(spec)?);
    let seq: Vec<GroupElement> = (0..count).map(|_| GroupElement(rng.gen_range(0..g.order() as u32))).collect();
    let gens: Vec<GroupElement> = seq.iter().copied().filter(|&e| e != g.identity()).collect();
    if gens.is_empty() {
        return Err(Error::Validation("random sequence holds only the identity".into()));
    }
    let graph = VertexTransitiveGraph::cayley(g, &gens)?.with_label(format!("random_cayley({spec},{count})"));
    Ok((graph, seq))
}

/// The Petersen graph: vertex-transitive but not a Cayley graph. Vertices are
/// the 2-subsets of `{0,…,4}` in lexicographic order, adjacent when disjoint.
/// `σ_x` is induced by the lexicographically first permutation of `{0,…,4}`
/// carrying `{0,1}` to `x`.
pub fn petersen() -> VertexTransitiveGraph {
    let pairs: Vec<(u32, u32)> = (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect();
    let index = |a: u32, b: u32| -> u32 {
        let (a, b) = (a.min(b), a.max(b));
        pairs.iter().position(|&p| p == (a, b)).unwrap() as u32
    };
    let adjacency: Vec<Vec<u32>> = pairs
        .iter()
        .map(|&(a, b)| {
            pairs
                .iter()
                .filter(|&&(c, d)| c != a && c != b && d != a && d != b)
                .map(|&(c, d)| index(c, d))
                .collect()
        })
        .collect();
    let perms = all_permutations(5);
    let sigma: Vec<Vec<u32>> = pairs
        .iter()
        .map(|&(a, b)| {
            let pi = perms
                .iter()
                .find(|p| index(p[0], p[1]) == index(a, b))
                .unwrap();
            pairs.iter().map(|&(c, d)| index(pi[c as usize], pi[d as usize])).collect()
        })
        .collect();
    VertexTransitiveGraph::explicit(adjacency, 0, sigma)
        .expect("Petersen automorphisms are valid")
        .with_label("petersen")
}

fn all_permutations(k: u32) -> Vec<Vec<u32>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..k {
        for rest in all_permutations(k - 1) {
            let mut p = vec![first];
            p.extend(rest.into_iter().map(|x| if x >= first { x + 1 } else { x }));
            out.push(p);
        }
    }
    out
}

/// A named, parameterized graph family as used by the harness.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Cycle(usize),
    Hypercube(usize),
    Torus { n: usize, dim: usize },
    Complete(usize),
    Petersen,
    RandomCayley { group: GroupSpec, count: usize, seed: u64 },
    Cayley { group: GroupSpec, generators: Vec<String> },
}

impl Family {
    pub fn build(&self) -> Result<VertexTransitiveGraph> {
        match self {
            Family::Cycle(n) => cycle(*n),
            Family::Hypercube(n) => hypercube(*n),
            Family::Torus { n, dim } => torus(*n, *dim),
            Family::Complete(n) => complete(*n),
            Family::Petersen => Ok(petersen()),
            Family::RandomCayley { group, count, seed } => {
                let mut rng = crate::rng::task_rng(*seed, "random_cayley", 0);
                random_cayley(group, *count, &mut rng).map(|(g, _)| g)
            }
            Family::Cayley { group, generators } => {
                let gens: Vec<&str> = generators.iter().map(String::as_str).collect();
                cayley(group, &gens)
            }
        }
    }

    /// Family name and its size parameter, as written into experiment tables.
    pub fn name_and_param(&self) -> (String, String) {
        match self {
            Family::Cycle(n) => ("cycle".into(), n.to_string()),
            Family::Hypercube(n) => ("hypercube".into(), n.to_string()),
            Family::Torus { n, dim } => (format!("torus{dim}"), n.to_string()),
            Family::Complete(n) => ("complete".into(), n.to_string()),
            Family::Petersen => ("petersen".into(), "10".into()),
            Family::RandomCayley { group, count, .. } => (format!("random_cayley:{group}"), count.to_string()),
            Family::Cayley { group, .. } => (format!("cayley:{group}"), String::new()),
        }
    }

    /// Family of the same kind at a different size parameter, for sweeps.
    pub fn resized(&self, param: usize) -> Result<Family> {
        Ok(match self {
            Family::Cycle(_) => Family::Cycle(param),
            Family::Hypercube(_) => Family::Hypercube(param),
            Family::Torus { dim, .. } => Family::Torus { n: param, dim: *dim },
            Family::Complete(_) => Family::Complete(param),
            Family::RandomCayley { group, seed, .. } => Family::RandomCayley { group: group.clone(), count: param, seed: *seed },
            Family::Petersen | Family::Cayley { .. } => {
                return Err(Error::Unsupported("family has no size parameter".into()))
            }
        })
    }

    /// Parse a family name plus its parameters (`n`, `dim`, `group`, `count`, `gens`, `seed`).
    pub fn parse(name: &str, n: Option<usize>, dim: Option<usize>, group: Option<&str>, gens: Option<&str>, seed: u64) -> Result<Family> {
        let need_n = || n.ok_or_else(|| Error::Argument(format!("family `{name}` needs --n")));
        Ok(match name {
            "cycle" => Family::Cycle(need_n()?),
            "hypercube" => Family::Hypercube(need_n()?),
            "torus" => Family::Torus { n: need_n()?, dim: dim.unwrap_or(2) },
            "complete" => Family::Complete(need_n()?),
            "petersen" => Family::Petersen,
            t if t.starts_with("torus") => {
                let dim = t[5..].parse().map_err(|_| Error::Argument(format!("bad family `{t}`")))?;
                Family::Torus { n: need_n()?, dim }
            }
            "random_cayley" => Family::RandomCayley {
                group: group.ok_or_else(|| Error::Argument("random_cayley needs a group".into()))?.parse()?,
                count: need_n()?,
                seed,
            },
            "cayley" => Family::Cayley {
                group: group.ok_or_else(|| Error::Argument("cayley needs a group".into()))?.parse()?,
                generators: gens
                    .ok_or_else(|| Error::Argument("cayley needs generators".into()))?
                    .split(';')
                    .map(|s| s.trim().to_string())
                    .collect(),
            },
            other => return Err(Error::Argument(format!("unknown family `{other}`"))),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn petersen_is_vertex_transitive_and_not_cayley_shaped() {
        let p = petersen();
        assert_eq!((p.vertex_count(), p.degree(), p.diameter()), (10, 3, 2));
        assert!(p.verify_vertex_transitive().passed());
        assert!(!p.is_cayley());
    }

    #[test]
    fn family_parse_and_resize() {
        let f = Family::parse("torus2", Some(5), None, None, None, 0).unwrap();
        assert_eq!(f, Family::Torus { n: 5, dim: 2 });
        assert_eq!(f.resized(7).unwrap(), Family::Torus { n: 7, dim: 2 });
        assert_eq!(f.build().unwrap().vertex_count(), 25);
        let c = Family::parse("cayley", None, None, Some("symmetric(3)"), Some("[1 0 2];[0 2 1]"), 0).unwrap();
        let g = c.build().unwrap();
        assert_eq!((g.vertex_count(), g.degree()), (6, 2));
        assert!(Family::parse("nope", Some(3), None, None, None, 0).is_err());
    }

    #[test]
    fn random_cayley_is_reproducible() {
        let f = Family::RandomCayley { group: "power(cyclic(2),5)".parse().unwrap(), count: 12, seed: 4 };
        let a = f.build().unwrap().to_text();
        let b = f.build().unwrap().to_text();
        assert_eq!(a, b);
    }
}

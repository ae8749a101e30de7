//! Finite groups with enumerable elements.
//!
//! Elements are canonical indices `0..order`. The identity is always index 0.
//! Direct powers number their elements in mixed radix with the *first*
//! coordinate least significant, so in `power(cyclic(2),3)` the tuple
//! `(1,0,1)` is element `1 + 4 = 5`. Permutation groups number elements in
//! discovery order of a breadth-first product closure from the sorted
//! generator list.
//!
//! Permutations act on the left: the product `a·b` is the composition
//! `x ↦ a(b(x))`, i.e. `b` is applied first. Under this convention the
//! transposition product `(0 1)·(1 2)` is the 3-cycle `0→1→2→0`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{arg, Error, Result};

/// Groups up to this order get a fully materialized multiplication table.
pub const TABLE_CAP: usize = 4096;
/// Default bound on the number of elements any construction may produce.
pub const DEFAULT_ELEMENT_CAP: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement(pub u32);

impl GroupElement {
    pub fn id(self) -> usize {
        self.0 as usize
    }
}

/// Specification of a group in the config grammar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    Power(Box<GroupSpec>, usize),
    Symmetric(usize),
    /// Closure of the listed permutations, each given as its image vector.
    Permutations(Vec<Vec<u32>>),
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic({n})"),
            GroupSpec::Power(base, d) => write!(f, "power({base},{d})"),
            GroupSpec::Symmetric(k) => write!(f, "symmetric({k})"),
            GroupSpec::Permutations(gens) => {
                write!(f, "perms(")?;
                for (i, g) in gens.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", format_perm(g))?;
                }
                write!(f, ")")
            }
        }
    }
}

fn format_perm(p: &[u32]) -> String {
    let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(" "))
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = SpecParser { src: s.as_bytes(), pos: 0 };
        let spec = p.spec()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(Error::Parse(format!("trailing input in group spec `{s}`")));
        }
        Ok(spec)
    }
}

struct SpecParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl SpecParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "expected `{}` at offset {} in group spec",
                c as char, self.pos
            )))
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse(format!("expected a number at offset {start}")))
    }

    fn spec(&mut self) -> Result<GroupSpec> {
        let name = self.ident();
        self.expect(b'(')?;
        let spec = match name.as_str() {
            "cyclic" => GroupSpec::Cyclic(self.number()?),
            "symmetric" => GroupSpec::Symmetric(self.number()?),
            "power" => {
                let base = self.spec()?;
                self.expect(b',')?;
                GroupSpec::Power(Box::new(base), self.number()?)
            }
            "perms" => {
                let mut gens = Vec::new();
                loop {
                    self.expect(b'[')?;
                    let mut perm = Vec::new();
                    while self.peek() != Some(b']') {
                        perm.push(self.number()? as u32);
                        if self.peek() == Some(b',') {
                            self.pos += 1;
                        }
                    }
                    self.expect(b']')?;
                    gens.push(perm);
                    if self.peek() == Some(b',') {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                GroupSpec::Permutations(gens)
            }
            other => return Err(Error::Parse(format!("unknown group constructor `{other}`"))),
        };
        self.expect(b')')?;
        Ok(spec)
    }
}

#[derive(Debug, Clone)]
enum Arith {
    Cyclic {
        n: usize,
    },
    Power {
        base: Box<FiniteGroup>,
        dim: usize,
    },
    Permutation {
        degree: usize,
        /// Image vectors, `order * degree` entries.
        images: Vec<u32>,
        index: HashMap<Vec<u32>, u32>,
    },
}

/// A finite group with exact arithmetic on element indices.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    spec: GroupSpec,
    order: usize,
    arith: Arith,
    table: Option<Vec<u32>>,
    inverses: Vec<u32>,
}

impl FiniteGroup {
    pub fn build(spec: &GroupSpec) -> Result<Self> {
        Self::build_with_cap(spec, DEFAULT_ELEMENT_CAP)
    }

    pub fn build_with_cap(spec: &GroupSpec, cap: usize) -> Result<Self> {
        let arith = match spec {
            GroupSpec::Cyclic(n) => {
                if *n == 0 {
                    return arg("cyclic(n) needs n >= 1");
                }
                check_cap("cyclic group", *n as u128, cap)?;
                Arith::Cyclic { n: *n }
            }
            GroupSpec::Power(base, dim) => {
                if *dim == 0 {
                    return arg("power(base, d) needs d >= 1");
                }
                let base = FiniteGroup::build_with_cap(base, cap)?;
                let order = (base.order as u128).checked_pow(*dim as u32).unwrap_or(u128::MAX);
                check_cap("direct power", order, cap)?;
                Arith::Power { base: Box::new(base), dim: *dim }
            }
            GroupSpec::Symmetric(k) => {
                if *k == 0 {
                    return arg("symmetric(k) needs k >= 1");
                }
                let gens: Vec<Vec<u32>> = (0..k.saturating_sub(1))
                    .map(|i| {
                        let mut p: Vec<u32> = (0..*k as u32).collect();
                        p.swap(i, i + 1);
                        p
                    })
                    .collect();
                permutation_closure(*k, &gens, cap)?
            }
            GroupSpec::Permutations(gens) => {
                if gens.is_empty() {
                    return arg("permutation closure needs at least one generator");
                }
                let degree = gens[0].len();
                for g in gens {
                    if g.len() != degree {
                        return arg("generators act on sets of different sizes");
                    }
                    if !is_permutation(g) {
                        return arg(format!("{} is not a permutation", format_perm(g)));
                    }
                }
                permutation_closure(degree, gens, cap)?
            }
        };
        let order = match &arith {
            Arith::Cyclic { n } => *n,
            Arith::Power { base, dim } => base.order.pow(*dim as u32),
            Arith::Permutation { index, .. } => index.len(),
        };
        let mut group = FiniteGroup {
            spec: spec.clone(),
            order,
            arith,
            table: None,
            inverses: Vec::new(),
        };
        group.inverses = (0..order as u32).map(|a| group.inv_structural(a)).collect();
        if order <= TABLE_CAP {
            let mut table = Vec::with_capacity(order * order);
            for a in 0..order as u32 {
                for b in 0..order as u32 {
                    table.push(group.mul_structural(a, b));
                }
            }
            group.table = Some(table);
        }
        Ok(group)
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(0)
    }

    pub fn has_table(&self) -> bool {
        self.table.is_some()
    }

    pub fn element(&self, id: usize) -> Result<GroupElement> {
        if id < self.order {
            Ok(GroupElement(id as u32))
        } else {
            arg(format!("element id {id} out of range for group of order {}", self.order))
        }
    }

    fn check(&self, a: GroupElement) -> Result<()> {
        self.element(a.id()).map(|_| ())
    }

    pub fn multiply(&self, a: GroupElement, b: GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(GroupElement(self.mul(a.0, b.0)))
    }

    pub fn invert(&self, a: GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        Ok(GroupElement(self.inv(a.0)))
    }

    /// Unchecked product on raw ids.
    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.table {
            Some(t) => t[a as usize * self.order + b as usize],
            None => self.mul_structural(a, b),
        }
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inverses[a as usize]
    }

    fn mul_structural(&self, a: u32, b: u32) -> u32 {
        match &self.arith {
            Arith::Cyclic { n } => ((a as u64 + b as u64) % *n as u64) as u32,
            Arith::Power { base, dim } => {
                let r = base.order as u64;
                let (mut x, mut y) = (a as u64, b as u64);
                let mut out = 0u64;
                let mut place = 1u64;
                for _ in 0..*dim {
                    let c = base.mul((x % r) as u32, (y % r) as u32) as u64;
                    out += c * place;
                    place *= r;
                    x /= r;
                    y /= r;
                }
                out as u32
            }
            Arith::Permutation { degree, images, index } => {
                let pa = &images[a as usize * degree..(a as usize + 1) * degree];
                let pb = &images[b as usize * degree..(b as usize + 1) * degree];
                let prod: Vec<u32> = pb.iter().map(|&x| pa[x as usize]).collect();
                index[&prod]
            }
        }
    }

    fn inv_structural(&self, a: u32) -> u32 {
        match &self.arith {
            Arith::Cyclic { n } => ((*n as u64 - a as u64 % *n as u64) % *n as u64) as u32,
            Arith::Power { base, dim } => {
                let coords: Vec<usize> = self.coordinates(GroupElement(a)).unwrap_or_default();
                let inv: Vec<usize> = coords.iter().map(|&c| base.inv(c as u32) as usize).collect();
                debug_assert_eq!(inv.len(), *dim);
                self.compose_coordinates(&inv)
            }
            Arith::Permutation { degree, images, index } => {
                let pa = &images[a as usize * degree..(a as usize + 1) * degree];
                let mut inv = vec![0u32; *degree];
                for (i, &x) in pa.iter().enumerate() {
                    inv[x as usize] = i as u32;
                }
                index[&inv]
            }
        }
    }

    fn compose_coordinates(&self, coords: &[usize]) -> u32 {
        let Arith::Power { base, .. } = &self.arith else {
            unreachable!()
        };
        let mut id = 0usize;
        for &c in coords.iter().rev() {
            id = id * base.order + c;
        }
        id as u32
    }

    /// Coordinates (as base-group ids) of an element of a direct power.
    pub fn coordinates(&self, a: GroupElement) -> Option<Vec<usize>> {
        match &self.arith {
            Arith::Power { base, dim } => {
                let mut x = a.id();
                Some(
                    (0..*dim)
                        .map(|_| {
                            let c = x % base.order;
                            x /= base.order;
                            c
                        })
                        .collect(),
                )
            }
            _ => None,
        }
    }

    pub fn from_coordinates(&self, coords: &[usize]) -> Result<GroupElement> {
        match &self.arith {
            Arith::Power { base, dim } => {
                if coords.len() != *dim || coords.iter().any(|&c| c >= base.order) {
                    return arg(format!("bad coordinates {coords:?} for {}", self.spec));
                }
                Ok(GroupElement(self.compose_coordinates(coords)))
            }
            _ => Err(Error::Unsupported(format!("{} has no coordinates", self.spec))),
        }
    }

    /// Image vector of an element of a permutation group.
    pub fn permutation(&self, a: GroupElement) -> Option<Vec<u32>> {
        match &self.arith {
            Arith::Permutation { degree, images, .. } => {
                Some(images[a.id() * degree..(a.id() + 1) * degree].to_vec())
            }
            _ => None,
        }
    }

    pub fn from_permutation(&self, perm: &[u32]) -> Result<GroupElement> {
        match &self.arith {
            Arith::Permutation { index, .. } => index
                .get(perm)
                .map(|&id| GroupElement(id))
                .ok_or_else(|| Error::Argument(format!("{} is not in the group", format_perm(perm)))),
            _ => Err(Error::Unsupported(format!("{} is not a permutation group", self.spec))),
        }
    }

    /// Human-readable element notation: `3`, `(1,0,1)` or `[1 0 2]`.
    pub fn format_element(&self, a: GroupElement) -> String {
        match &self.arith {
            Arith::Cyclic { .. } => a.0.to_string(),
            Arith::Power { .. } => {
                let c: Vec<String> = self.coordinates(a).unwrap().iter().map(|x| x.to_string()).collect();
                format!("({})", c.join(","))
            }
            Arith::Permutation { .. } => format_perm(&self.permutation(a).unwrap()),
        }
    }

    /// Parse element notation; `#<id>` is accepted for every group.
    pub fn parse_element(&self, text: &str) -> Result<GroupElement> {
        let t = text.trim();
        let parse_list = |inner: &str| -> Result<Vec<usize>> {
            inner
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|p| !p.is_empty())
                .map(|p| p.parse::<usize>().map_err(|_| Error::Parse(format!("bad element `{text}`"))))
                .collect()
        };
        if let Some(id) = t.strip_prefix('#') {
            let id = id.parse().map_err(|_| Error::Parse(format!("bad element id `{text}`")))?;
            return self.element(id);
        }
        if let Some(inner) = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            return self.from_coordinates(&parse_list(inner)?);
        }
        if let Some(inner) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let p: Vec<u32> = parse_list(inner)?.into_iter().map(|x| x as u32).collect();
            return self.from_permutation(&p);
        }
        match &self.arith {
            Arith::Cyclic { .. } => {
                let id = t.parse().map_err(|_| Error::Parse(format!("bad element `{text}`")))?;
                self.element(id)
            }
            _ => Err(Error::Parse(format!("bad element `{text}` for {}", self.spec))),
        }
    }
}

fn check_cap(what: &str, needed: u128, cap: usize) -> Result<()> {
    if needed > cap as u128 {
        Err(Error::SizeLimit { what: what.to_string(), needed, cap: cap as u128 })
    } else {
        Ok(())
    }
}

fn is_permutation(p: &[u32]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&x| {
        let ok = (x as usize) < p.len() && !seen[x as usize];
        if ok {
            seen[x as usize] = true;
        }
        ok
    })
}

/// Breadth-first closure: discovery order from the identity, right-multiplying
/// each discovered element by the sorted generators.
fn permutation_closure(degree: usize, gens: &[Vec<u32>], cap: usize) -> Result<Arith> {
    let mut sorted = gens.to_vec();
    sorted.sort();
    sorted.dedup();
    let identity: Vec<u32> = (0..degree as u32).collect();
    let mut images = identity.clone();
    let mut index = HashMap::new();
    index.insert(identity, 0u32);
    let mut next = 0usize;
    while next < index.len() {
        let current = images[next * degree..(next + 1) * degree].to_vec();
        for g in &sorted {
            let prod: Vec<u32> = g.iter().map(|&x| current[x as usize]).collect();
            if !index.contains_key(&prod) {
                if index.len() >= cap {
                    return Err(Error::SizeLimit {
                        what: "permutation closure".into(),
                        needed: index.len() as u128 + 1,
                        cap: cap as u128,
                    });
                }
                images.extend_from_slice(&prod);
                index.insert(prod, index.len() as u32);
            }
        }
        next += 1;
    }
    Ok(Arith::Permutation { degree, images, index })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn build(s: &str) -> FiniteGroup {
        FiniteGroup::build(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(build("cyclic(4)").order(), 4);
        assert_eq!(build("power(cyclic(2),3)").order(), 8);
        assert_eq!(build("symmetric(4)").order(), 24);
        assert_eq!(build("symmetric(1)").order(), 1);
    }

    #[test]
    fn cyclic_arithmetic() {
        let z4 = build("cyclic(4)");
        let p = z4.multiply(GroupElement(1), GroupElement(3)).unwrap();
        assert_eq!(p, GroupElement(0));
        let z6 = build("cyclic(6)");
        assert_eq!(z6.invert(GroupElement(2)).unwrap(), GroupElement(4));
    }

    #[test]
    fn power_is_coordinatewise_xor() {
        let q = build("power(cyclic(2),3)");
        let a = q.parse_element("(1,0,1)").unwrap();
        let b = q.parse_element("(1,1,0)").unwrap();
        let c = q.multiply(a, b).unwrap();
        assert_eq!(q.format_element(c), "(0,1,1)");
        for x in 0..8 {
            assert_eq!(q.inv(x), x);
        }
    }

    #[test]
    fn left_action_convention_on_s3() {
        let s3 = build("perms([1,0,2],[0,2,1])");
        assert_eq!(s3.order(), 6);
        let t01 = s3.from_permutation(&[1, 0, 2]).unwrap();
        let t12 = s3.from_permutation(&[0, 2, 1]).unwrap();
        // apply (1 2) first, then (0 1): 0→1, 1→2, 2→0
        let c = s3.multiply(t01, t12).unwrap();
        assert_eq!(s3.permutation(c).unwrap(), vec![1, 2, 0]);
        let ci = s3.invert(c).unwrap();
        assert_eq!(s3.permutation(ci).unwrap(), vec![2, 0, 1]);
        assert_eq!(s3.multiply(c, ci).unwrap(), s3.identity());
    }

    #[test]
    fn errors() {
        let z4 = build("cyclic(4)");
        assert!(matches!(z4.multiply(GroupElement(4), GroupElement(0)), Err(Error::Argument(_))));
        assert!(FiniteGroup::build(&GroupSpec::Permutations(vec![])).is_err());
        assert!(matches!(
            FiniteGroup::build_with_cap(&GroupSpec::Symmetric(6), 100),
            Err(Error::SizeLimit { .. })
        ));
        assert!(matches!(
            FiniteGroup::build_with_cap(&"power(cyclic(2),30)".parse().unwrap(), 1 << 20),
            Err(Error::SizeLimit { .. })
        ));
        assert!(FiniteGroup::build(&GroupSpec::Permutations(vec![vec![0, 0, 1]])).is_err());
    }

    #[test]
    fn symmetric_closure_orders() {
        let mut fact = 1;
        for k in 1..=6 {
            fact *= k;
            assert_eq!(build(&format!("symmetric({k})")).order(), fact);
            // closure of a transposition and a long cycle also generates S_k
            if k >= 2 {
                let mut t: Vec<u32> = (0..k as u32).collect();
                t.swap(0, 1);
                let cyc: Vec<u32> = (0..k as u32).map(|i| (i + 1) % k as u32).collect();
                let g = FiniteGroup::build(&GroupSpec::Permutations(vec![t, cyc])).unwrap();
                assert_eq!(g.order(), fact);
            }
        }
    }

    #[test]
    fn table_and_structural_agree_above_cap() {
        // order 5040 > TABLE_CAP: structural path only
        let s7 = build("symmetric(7)");
        assert!(!s7.has_table());
        let s5 = build("symmetric(5)");
        assert!(s5.has_table());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let (a, b) = (rng.gen_range(0..120u32), rng.gen_range(0..120u32));
            assert_eq!(s5.mul(a, b), s5.mul_structural(a, b));
        }
    }

    #[test]
    fn group_axioms_on_presets() {
        let specs = [
            "cyclic(1)",
            "cyclic(12)",
            "power(cyclic(3),4)",
            "power(cyclic(2),13)",
            "symmetric(4)",
            "symmetric(7)",
            "power(symmetric(3),2)",
        ];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for s in specs {
            let g = build(s);
            let n = g.order() as u32;
            for a in 0..n.min(1000) {
                assert_eq!(g.mul(0, a), a);
                assert_eq!(g.mul(a, 0), a);
                assert_eq!(g.mul(a, g.inv(a)), 0);
                assert_eq!(g.inv(g.inv(a)), a);
            }
            for _ in 0..1000 {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)), "{s}");
            }
            if g.has_table() && n <= 64 {
                for a in 0..n {
                    let mut row: Vec<u32> = (0..n).map(|b| g.mul(a, b)).collect();
                    let mut col: Vec<u32> = (0..n).map(|b| g.mul(b, a)).collect();
                    row.sort();
                    col.sort();
                    assert_eq!(row, (0..n).collect::<Vec<_>>());
                    assert_eq!(col, (0..n).collect::<Vec<_>>());
                }
            }
        }
    }

    #[test]
    fn spec_round_trip() {
        for s in ["cyclic(6)", "power(cyclic(2),3)", "symmetric(4)", "perms([1 0 2],[0 2 1])", "power(power(cyclic(3),2),2)"] {
            let spec: GroupSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("cyclic(".parse::<GroupSpec>().is_err());
        assert!("foo(3)".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn element_notation() {
        let g = build("power(cyclic(5),2)");
        let e = g.parse_element("(3,4)").unwrap();
        assert_eq!(e.id(), 3 + 4 * 5);
        assert_eq!(g.format_element(e), "(3,4)");
        assert_eq!(g.parse_element("#23").unwrap(), e);
        assert!(g.parse_element("(5,0)").is_err());
    }
}

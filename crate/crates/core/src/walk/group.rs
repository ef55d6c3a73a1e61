use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{DegreeHint, LazyGraph, VertexId};

/// Generator symbols: `g1, g2, …, gm` or countably many.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Generators {
    Finite(usize),
    Countable,
}

impl Generators {
    pub fn allows(self, k: u32) -> bool {
        match self {
            Generators::Finite(m) => k >= 1 && (k as usize) <= m,
            Generators::Countable => k >= 1,
        }
    }
}

impl fmt::Display for Generators {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generators::Finite(m) => write!(f, "{m}"),
            Generators::Countable => f.write_str("inf"),
        }
    }
}

/// A reduced word in the free group. Letter `k > 0` is `gₖ`, `-k` is `gₖ⁻¹`.
/// Written as `e` for the identity and otherwise as a concatenation of
/// `g{k}` and `G{k}` (inverse) tokens, e.g. `g1G2g1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupWord(Vec<i32>);

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord(Vec::new())
    }

    /// Freely reduces `letters`. Zero letters are rejected.
    pub fn new(letters: Vec<i32>) -> Result<Self> {
        if letters.contains(&0) {
            return Err(Error::Parse {
                kind: "group word",
                input: format!("{letters:?}"),
            });
        }
        let mut w = GroupWord::identity();
        w.push_all(&letters);
        Ok(w)
    }

    pub fn generator(k: u32) -> Self {
        GroupWord(vec![k as i32])
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|p| p[0] != -p[1]) && !self.0.contains(&0)
    }

    pub fn inverse(&self) -> Self {
        GroupWord(self.0.iter().rev().map(|l| -l).collect())
    }

    /// Right multiplication in place. Returns how many letters of `self`
    /// survived the cancellation.
    pub fn push_all(&mut self, letters: &[i32]) -> usize {
        let mut i = 0;
        while i < letters.len() && self.0.last() == Some(&-letters[i]) {
            self.0.pop();
            i += 1;
        }
        let kept = self.0.len();
        for &l in &letters[i..] {
            if self.0.last() == Some(&-l) {
                self.0.pop();
            } else {
                self.0.push(l);
            }
        }
        kept
    }

    pub fn mul(&self, other: &GroupWord) -> GroupWord {
        let mut w = self.clone();
        w.push_all(&other.0);
        w
    }

    pub fn prefix(&self, k: usize) -> Option<GroupWord> {
        (k <= self.0.len()).then(|| GroupWord(self.0[..k].to_vec()))
    }

    /// `|u⁻¹v|` for reduced words.
    pub fn distance(&self, other: &GroupWord) -> usize {
        let common = self.0.iter().zip(&other.0).take_while(|(a, b)| a == b).count();
        self.0.len() + other.0.len() - 2 * common
    }

    pub fn max_generator(&self) -> u32 {
        self.0.iter().map(|l| l.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn vertex(&self) -> VertexId {
        VertexId::new(self.to_string())
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for &l in &self.0 {
            write!(f, "{}{}", if l > 0 { 'g' } else { 'G' }, l.unsigned_abs())?;
        }
        Ok(())
    }
}

impl FromStr for GroupWord {
    type Err = Error;

    /// Accepts unreduced input and reduces it.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            kind: "group word",
            input: s.to_string(),
        };
        if s == "e" {
            return Ok(GroupWord::identity());
        }
        let mut letters = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let sign = match rest.as_bytes()[0] {
                b'g' => 1,
                b'G' => -1,
                _ => return Err(bad()),
            };
            let digits = rest[1..].bytes().take_while(u8::is_ascii_digit).count();
            if digits == 0 || rest.as_bytes()[1] == b'0' {
                return Err(bad());
            }
            let k: i32 = rest[1..=digits].parse().map_err(|_| bad())?;
            letters.push(sign * k);
            rest = &rest[1 + digits..];
        }
        GroupWord::new(letters)
    }
}

impl Serialize for GroupWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Order of letters inside a length class: `g1 < G1 < g2 < G2 < …`.
fn letter_rank(l: i32) -> (u32, bool) {
    (l.unsigned_abs(), l < 0)
}

/// Reduced words of length `1..=r` over letters of index `≤ m` that use at
/// least one letter of index `≥ from`, in length-then-lex order.
fn words_up_to(r: u32, m: u32, from: u32) -> Vec<Vec<i32>> {
    let mut letters: Vec<i32> = (1..=m as i32).flat_map(|k| [k, -k]).collect();
    letters.sort_by_key(|&l| letter_rank(l));
    let mut out = Vec::new();
    let mut layer: Vec<Vec<i32>> = vec![Vec::new()];
    for _ in 0..r {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &letters {
                if w.last() != Some(&-l) {
                    let mut x = w.clone();
                    x.push(l);
                    next.push(x);
                }
            }
        }
        out.extend(
            next.iter()
                .filter(|w| w.iter().any(|l| l.unsigned_abs() >= from))
                .cloned(),
        );
        layer = next;
    }
    out
}

/// The Cayley graph of the free group with respect to `A^r`: `x ~ y` iff
/// `1 ≤ |x⁻¹y| ≤ r`. Vertices are reduced words, rooted at the identity.
#[derive(Debug, Clone, Copy)]
pub struct FreeGroupCayley {
    pub generators: Generators,
    pub r: u32,
}

impl FreeGroupCayley {
    pub fn new(generators: Generators, r: u32) -> Result<Self> {
        if r < 1 {
            return Err(Error::InvalidParams(format!("free group step length r = {r} must be at least 1")));
        }
        if generators == Generators::Finite(0) {
            return Err(Error::InvalidParams("free group needs at least one generator".into()));
        }
        Ok(FreeGroupCayley { generators, r })
    }

    pub fn parse(&self, v: &VertexId) -> Option<GroupWord> {
        let w: GroupWord = v.as_str().parse().ok()?;
        (w.vertex() == *v && w.letters().iter().all(|l| self.generators.allows(l.unsigned_abs())))
            .then_some(w)
    }

    /// `⌈|u⁻¹v| / r⌉`.
    pub fn word_distance(&self, u: &GroupWord, v: &GroupWord) -> u64 {
        (u.distance(v) as u64).div_ceil(u64::from(self.r))
    }
}

impl LazyGraph for FreeGroupCayley {
    fn name(&self) -> String {
        format!("free:r={},m={}", self.r, self.generators)
    }

    fn root(&self) -> VertexId {
        GroupWord::identity().vertex()
    }

    fn contains(&self, v: &VertexId) -> bool {
        self.parse(v).is_some()
    }

    /// Translates `v·w` for `w ∈ A^r`, length-then-lex. With countably many
    /// generators the stream proceeds in stages, stage `n` adding the words
    /// whose largest generator index is `n`.
    fn neighbors(&self, v: &VertexId, limit: usize) -> Vec<VertexId> {
        let Some(x) = self.parse(v) else { return Vec::new() };
        let mut out = Vec::new();
        let stages: Box<dyn Iterator<Item = (u32, u32)>> = match self.generators {
            Generators::Finite(m) => Box::new(std::iter::once((m as u32, 1))),
            Generators::Countable => Box::new((1..).map(|n| (n, n))),
        };
        for (m, from) in stages {
            for w in words_up_to(self.r, m, from) {
                if out.len() >= limit {
                    return out;
                }
                let mut y = x.clone();
                y.push_all(&w);
                out.push(y.vertex());
            }
            if out.len() >= limit {
                break;
            }
        }
        out
    }

    fn is_adjacent(&self, u: &VertexId, v: &VertexId) -> bool {
        match (self.parse(u), self.parse(v)) {
            (Some(a), Some(b)) => (1..=self.r as usize).contains(&a.distance(&b)),
            _ => false,
        }
    }

    fn degree_hint(&self, v: &VertexId) -> DegreeHint {
        if !self.contains(v) {
            return DegreeHint::Unknown;
        }
        match self.generators {
            Generators::Countable => DegreeHint::Infinite,
            Generators::Finite(m) => {
                let (a, b) = (2 * m as u64, 2 * m as u64 - 1);
                let total = (0..self.r).map(|l| a * b.pow(l)).sum::<u64>();
                DegreeHint::Finite(total as usize)
            }
        }
    }

    fn exact_metric(&self, u: &VertexId, v: &VertexId) -> Option<u64> {
        Some(self.word_distance(&self.parse(u)?, &self.parse(v)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> VertexId {
        VertexId::new(s)
    }

    #[test]
    fn parse_and_reduce() {
        let x: GroupWord = "g1g2G2g3".parse().unwrap();
        assert_eq!(x.to_string(), "g1g3");
        assert!("g0".parse::<GroupWord>().is_err());
        assert!("g".parse::<GroupWord>().is_err());
        assert!("x1".parse::<GroupWord>().is_err());
        assert_eq!("g1G1".parse::<GroupWord>().unwrap().to_string(), "e");
    }

    #[test]
    fn adjacency_examples() {
        let one = FreeGroupCayley::new(Generators::Finite(2), 1).unwrap();
        assert!(one.is_adjacent(&w("g1"), &w("g1g2")));
        assert!(!one.is_adjacent(&w("g1"), &w("g1g2g1")));
        assert!(!one.is_adjacent(&w("g1"), &w("g1")));
        let two = FreeGroupCayley::new(Generators::Finite(2), 2).unwrap();
        assert!(two.is_adjacent(&w("e"), &w("g1g2")));
        assert!(FreeGroupCayley::new(Generators::Finite(2), 0).is_err());
    }

    #[test]
    fn neighbor_stream_matches_degree() {
        for r in 1..=3 {
            let g = FreeGroupCayley::new(Generators::Finite(2), r).unwrap();
            let DegreeHint::Finite(d) = g.degree_hint(&w("g1")) else { panic!() };
            let ns = g.neighbors(&w("g1"), usize::MAX);
            assert_eq!(ns.len(), d);
            let set: std::collections::BTreeSet<_> = ns.iter().collect();
            assert_eq!(set.len(), d);
            assert!(ns.iter().all(|n| g.is_adjacent(&w("g1"), n)));
        }
        let c = FreeGroupCayley::new(Generators::Countable, 1).unwrap();
        assert_eq!(
            c.neighbors(&w("e"), 6),
            ["g1", "G1", "g2", "G2", "g3", "G3"].map(w).to_vec()
        );
    }
}

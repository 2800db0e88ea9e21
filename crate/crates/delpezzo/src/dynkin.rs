// SPDX-License-Identifier: Apache-2.0

//! ADE Dynkin types as multisets of components.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DynkinError {
    #[error("cannot parse Dynkin type {0:?}")]
    Syntax(String),
    #[error("invalid component {0}{1}")]
    InvalidComponent(char, usize),
}

/// Component family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    D,
    E,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::D => 'D',
            Family::E => 'E',
        }
    }
}

/// One simple component, e.g. D5.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Component {
    pub family: Family,
    pub rank: usize,
}

impl Component {
    pub fn new(family: Family, rank: usize) -> Result<Self, DynkinError> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
        };
        if ok {
            Ok(Self { family, rank })
        } else {
            Err(DynkinError::InvalidComponent(family.letter(), rank))
        }
    }

    /// Number of positive roots.
    pub fn positive_roots(&self) -> usize {
        let n = self.rank;
        match (self.family, n) {
            (Family::A, _) => n * (n + 1) / 2,
            (Family::D, _) => n * (n - 1),
            (Family::E, 6) => 36,
            (Family::E, 7) => 63,
            _ => 120,
        }
    }

    /// Edges of the diagram on nodes 0..rank in a parent-first order.
    ///
    /// A: chain. D_n: chain 0..n-2 with node n-1 on n-3. E_n: chain 0..n-2
    /// with node n-1 on node 2.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.rank;
        let mut e: Vec<(usize, usize)> = match self.family {
            Family::A => (1..n).map(|i| (i - 1, i)).collect(),
            _ => (1..n - 1).map(|i| (i - 1, i)).collect(),
        };
        match self.family {
            Family::A => {}
            Family::D => e.push((n - 3, n - 1)),
            Family::E => e.push((2, n - 1)),
        }
        e
    }

    /// Sort key: E before D before A, larger rank first.
    fn key(&self) -> (std::cmp::Reverse<Family>, std::cmp::Reverse<usize>) {
        (std::cmp::Reverse(self.family), std::cmp::Reverse(self.rank))
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

/// Multiset of components in canonical order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DynkinType {
    components: Vec<Component>,
}

impl DynkinType {
    pub fn new(mut components: Vec<Component>) -> Self {
        components.sort_by_key(|c| c.key());
        Self { components }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn rank(&self) -> usize {
        self.components.iter().map(|c| c.rank).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn positive_roots(&self) -> usize {
        self.components.iter().map(|c| c.positive_roots()).sum()
    }

    /// Union of two types.
    pub fn plus(&self, other: &Self) -> Self {
        let mut c = self.components.clone();
        c.extend_from_slice(&other.components);
        Self::new(c)
    }

    /// All types of total rank <= `max_rank` (excluding the empty type).
    pub fn all_up_to_rank(max_rank: usize) -> Vec<DynkinType> {
        let mut pool = Vec::new();
        for r in 1..=max_rank {
            pool.push(Component { family: Family::A, rank: r });
        }
        for r in 4..=max_rank {
            pool.push(Component { family: Family::D, rank: r });
        }
        for r in 6..=max_rank.min(8) {
            pool.push(Component { family: Family::E, rank: r });
        }
        let mut out = Vec::new();
        fn rec(pool: &[Component], start: usize, left: usize, cur: &mut Vec<Component>, out: &mut Vec<DynkinType>) {
            if !cur.is_empty() {
                out.push(DynkinType::new(cur.clone()));
            }
            for i in start..pool.len() {
                if pool[i].rank <= left {
                    cur.push(pool[i]);
                    rec(pool, i, left - pool[i].rank, cur, out);
                    cur.pop();
                }
            }
        }
        rec(&pool, 0, max_rank, &mut Vec::new(), &mut out);
        out.sort();
        out
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.components.len() {
            let c = self.components[i];
            let mut m = 1;
            while i + m < self.components.len() && self.components[i + m] == c {
                m += 1;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            if m > 1 {
                write!(f, "{m}")?;
            }
            write!(f, "{c}")?;
            i += m;
        }
        Ok(())
    }
}

/// Parses one summand like `2A_2`, `A2`, `E_6`; returns multiplicity and component.
pub(crate) fn parse_summand(s: &str) -> Option<(usize, Family, usize, &str)> {
    let s = s.trim();
    let digits = s.chars().take_while(|c| c.is_ascii_digit()).count();
    let mult = if digits == 0 { 1 } else { s[..digits].parse().ok()? };
    let rest = &s[digits..];
    let mut chars = rest.chars();
    let family = match chars.next()? {
        'A' => Family::A,
        'D' => Family::D,
        'E' => Family::E,
        _ => return None,
    };
    let rest = chars.as_str().trim_start_matches('_');
    let rest = rest.trim_start_matches('{');
    let rd = rest.chars().take_while(|c| c.is_ascii_digit()).count();
    if rd == 0 {
        return None;
    }
    let rank = rest[..rd].parse().ok()?;
    let tail = rest[rd..].trim_start_matches('}');
    Some((mult, family, rank, tail))
}

impl FromStr for DynkinType {
    type Err = DynkinError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "0" || t.is_empty() {
            return Ok(Self::empty());
        }
        let mut comps = Vec::new();
        for part in t.split('+') {
            let (mult, fam, rank, tail) = parse_summand(part).ok_or_else(|| DynkinError::Syntax(s.to_string()))?;
            if !tail.trim().is_empty() || mult == 0 {
                return Err(DynkinError::Syntax(s.to_string()));
            }
            let c = Component::new(fam, rank)?;
            comps.extend(std::iter::repeat(c).take(mult));
        }
        Ok(Self::new(comps))
    }
}

impl Serialize for DynkinType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for DynkinType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Identifies the type of a Dynkin diagram given as adjacency lists.
pub fn identify(adj: &[Vec<usize>]) -> Option<DynkinType> {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut stack = vec![start];
        let mut nodes = Vec::new();
        seen[start] = true;
        while let Some(v) = stack.pop() {
            nodes.push(v);
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        let m = nodes.len();
        let edges: usize = nodes.iter().map(|&v| adj[v].len()).sum::<usize>() / 2;
        if edges + 1 != m {
            return None;
        }
        let branch: Vec<usize> = nodes.iter().copied().filter(|&v| adj[v].len() >= 3).collect();
        let comp = match branch.len() {
            0 => Component::new(Family::A, m).ok()?,
            1 if adj[branch[0]].len() == 3 => {
                let c = branch[0];
                let mut arms: Vec<usize> = adj[c]
                    .iter()
                    .map(|&w| {
                        let (mut prev, mut cur, mut len) = (c, w, 1);
                        while let Some(&nx) = adj[cur].iter().find(|&&x| x != prev) {
                            if adj[cur].len() > 2 {
                                return usize::MAX;
                            }
                            prev = cur;
                            cur = nx;
                            len += 1;
                        }
                        len
                    })
                    .collect();
                arms.sort();
                match (arms[0], arms[1], arms[2]) {
                    (1, 1, k) if k < usize::MAX => Component::new(Family::D, k + 3).ok()?,
                    (1, 2, 2) => Component::new(Family::E, 6).ok()?,
                    (1, 2, 3) => Component::new(Family::E, 7).ok()?,
                    (1, 2, 4) => Component::new(Family::E, 8).ok()?,
                    _ => return None,
                }
            }
            _ => return None,
        };
        comps.push(comp);
    }
    Some(DynkinType::new(comps))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        for (src, want) in [
            ("A4+A1", "A4+A1"),
            ("A_1+A_4", "A4+A1"),
            ("2A_2 + A_1", "2A2+A1"),
            ("A2+A2+A1", "2A2+A1"),
            ("D_4+A_2", "D4+A2"),
            ("A2+E6", "E6+A2"),
            ("0", "0"),
        ] {
            assert_eq!(src.parse::<DynkinType>().unwrap().to_string(), want);
        }
        assert!("E5".parse::<DynkinType>().is_err());
        assert!("D3".parse::<DynkinType>().is_err());
        assert!("B2".parse::<DynkinType>().is_err());
    }

    #[test]
    fn identify_roundtrip() {
        for t in DynkinType::all_up_to_rank(8) {
            let mut adj: Vec<Vec<usize>> = Vec::new();
            for c in t.components() {
                let off = adj.len();
                adj.extend((0..c.rank).map(|_| Vec::new()));
                for (a, b) in c.edges() {
                    adj[off + a].push(off + b);
                    adj[off + b].push(off + a);
                }
            }
            assert_eq!(identify(&adj), Some(t.clone()), "{t}");
        }
    }

    #[test]
    fn type_counts() {
        // Root-system types of rank <= 8 (with A, D>=4, E6..8 components).
        assert_eq!(DynkinType::all_up_to_rank(1).len(), 1);
        assert_eq!(DynkinType::all_up_to_rank(2).len(), 3);
        assert_eq!(DynkinType::all_up_to_rank(3).len(), 6);
    }
}

// SPDX-License-Identifier: Apache-2.0

//! Embeddings of Dynkin types into E_{9-d} as positive simple systems,
//! conjugacy-class invariants and the blow-down reduction criterion.
//!
//! Every root sublattice has a unique simple system inside the positive
//! roots (first nonzero coordinate positive), so searching positive roots
//! with pairwise products in {0, 1} enumerates sublattices without the
//! |W(type)| blow-up of ordered simple systems.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::dynkin::{identify, Component, DynkinType, Family};
use crate::exec::{par_map, Strategy};
use crate::lattice::{LatticeError, LatticeVector, QuadraticSpace};
use crate::weyl::reflect_unchecked;

type Bits = u128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmbeddingError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("invalid simple system: {0}")]
    Invalid(String),
}

/// Precomputed root data of E_{9-d}.
pub struct RootData {
    space: QuadraticSpace,
    /// Positive roots, sorted.
    pos: Vec<LatticeVector>,
    index: HashMap<LatticeVector, usize>,
    adj: Vec<Bits>,
    orth: Vec<Bits>,
    sum: Vec<Vec<u8>>,
    exc: Vec<LatticeVector>,
    /// exc_dot[e][r] = exc[e] . pos[r]
    exc_dot: Vec<Vec<i8>>,
    /// Simple roots of E (indices into `pos`).
    simple: Vec<usize>,
    /// Per exceptional vector e: positive roots lying in <k, e>^perp, tested by
    /// carrying e to e_n with simple reflections and checking the image lies in
    /// the standard E_{8-d}; by explicit kernel membership off the orbit of e_n.
    factors: Vec<Bits>,
}

const NONE: u8 = u8::MAX;

fn bit(i: usize) -> Bits {
    1u128 << i
}

fn above(i: usize) -> Bits {
    if i >= 127 {
        0
    } else {
        !0u128 << (i + 1)
    }
}

fn iter_bits(mut b: Bits) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if b == 0 {
            None
        } else {
            let i = b.trailing_zeros() as usize;
            b &= b - 1;
            Some(i)
        }
    })
}

impl RootData {
    /// Cached root data for degree `d` (1..=8).
    pub fn for_degree(d: u32) -> Result<&'static RootData, EmbeddingError> {
        static CACHE: [OnceLock<RootData>; 8] = [const { OnceLock::new() }; 8];
        let space = QuadraticSpace::for_degree(d)?;
        Ok(CACHE[(d - 1) as usize].get_or_init(|| RootData::build(space)))
    }

    fn build(space: QuadraticSpace) -> RootData {
        let all = space.enumerate_roots().expect("n <= 8");
        let pos: Vec<LatticeVector> = all.into_iter().filter(|r| r.is_positive()).collect();
        let m = pos.len();
        assert!(m <= 128);
        let index: HashMap<_, _> = pos.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        let mut adj = vec![0; m];
        let mut orth = vec![0; m];
        let mut sum = vec![vec![NONE; m]; m];
        for i in 0..m {
            for j in 0..m {
                match pos[i].dot(&pos[j]) {
                    0 => orth[i] |= bit(j),
                    1 => {
                        adj[i] |= bit(j);
                        if let Some(&k) = index.get(&pos[i].add(&pos[j])) {
                            sum[i][j] = k as u8;
                        }
                    }
                    _ => {}
                }
            }
        }
        let simple: Vec<usize> = (0..m)
            .filter(|&k| !(0..m).any(|i| (0..m).any(|j| sum[i][j] as usize == k)))
            .collect();
        let exc = space.enumerate_exceptional().expect("n <= 8");
        let exc_dot = exc
            .iter()
            .map(|e| pos.iter().map(|r| e.dot(r) as i8).collect())
            .collect();
        // BFS from e_n over exceptional vectors by simple reflections.
        let last = space.basis(space.n());
        let mut parent: HashMap<LatticeVector, Option<(LatticeVector, usize)>> = HashMap::new();
        parent.insert(last.clone(), None);
        let mut q = VecDeque::from([last]);
        while let Some(v) = q.pop_front() {
            for &s in &simple {
                let w = reflect_unchecked(&pos[s], &v);
                if !parent.contains_key(&w) {
                    parent.insert(w.clone(), Some((v.clone(), s)));
                    q.push_back(w);
                }
            }
        }
        let n = space.n();
        let k = space.canonical();
        let factors = exc
            .iter()
            .map(|e| {
                let Some(_) = parent.get(e) else {
                    return (0..m).filter(|&r| kernel_contains(&space, e, &pos[r])).fold(0, |b, r| b | bit(r));
                };
                let mut path = Vec::new();
                let mut cur = e.clone();
                while let Some(Some((prev, s))) = parent.get(&cur) {
                    path.push(*s);
                    cur = prev.clone();
                }
                (0..m)
                    .filter(|&r| {
                        let v = path.iter().fold(pos[r].clone(), |v, &p| reflect_unchecked(&pos[p], &v));
                        v.coords()[n] == 0 && v.dot(&k) == 0
                    })
                    .fold(0, |b, r| b | bit(r))
            })
            .collect();
        RootData { space, pos, index, adj, orth, sum, exc, exc_dot, simple, factors }
    }

    pub fn space(&self) -> &QuadraticSpace {
        &self.space
    }

    pub fn positive_roots(&self) -> &[LatticeVector] {
        &self.pos
    }

    pub fn exceptional(&self) -> &[LatticeVector] {
        &self.exc
    }

    /// Type of E_{9-d} as a root system (empty for d = 8).
    pub fn root_type(&self) -> DynkinType {
        self.type_of_closed(((1u128 << self.pos.len()) - 1) & if self.pos.is_empty() { 0 } else { !0 })
    }

    /// Dynkin type of the root system formed by a closed set of positive roots.
    fn type_of_closed(&self, set: Bits) -> DynkinType {
        let mut nonsimple: Bits = 0;
        for i in iter_bits(set) {
            for j in iter_bits(set & self.adj[i]) {
                let k = self.sum[i][j];
                if k != NONE {
                    nonsimple |= bit(k as usize);
                }
            }
        }
        let simple: Vec<usize> = iter_bits(set & !nonsimple).collect();
        self.type_of_simple(&simple).expect("closed root set yields a Dynkin diagram")
    }

    fn type_of_simple(&self, s: &[usize]) -> Option<DynkinType> {
        let adj: Vec<Vec<usize>> = s
            .iter()
            .map(|&a| (0..s.len()).filter(|&j| self.adj[a] & bit(s[j]) != 0).collect())
            .collect();
        identify(&adj)
    }

    /// Positive roots of the sublattice spanned by a positive simple system.
    fn span_positive(&self, s: &[usize]) -> Bits {
        let mut set: Bits = s.iter().fold(0, |b, &i| b | bit(i));
        let mut frontier: Vec<usize> = s.to_vec();
        while let Some(r) = frontier.pop() {
            for &a in s {
                if self.adj[r] & bit(a) != 0 {
                    let k = self.sum[r][a];
                    if k != NONE && set & bit(k as usize) == 0 {
                        set |= bit(k as usize);
                        frontier.push(k as usize);
                    }
                }
            }
        }
        set
    }
}

/// An ordered simple system realizing a Dynkin type inside E_{9-d}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SimpleSystem {
    #[serde(skip)]
    space: QuadraticSpace,
    dynkin: DynkinType,
    roots: Vec<LatticeVector>,
}

impl SimpleSystem {
    /// Validates a root list against the declared type.
    pub fn new(space: QuadraticSpace, dynkin: DynkinType, roots: Vec<LatticeVector>) -> Result<Self, EmbeddingError> {
        let s = Self { space, dynkin, roots };
        s.validate()?;
        Ok(s)
    }

    pub fn space(&self) -> &QuadraticSpace {
        &self.space
    }

    pub fn dynkin(&self) -> &DynkinType {
        &self.dynkin
    }

    pub fn roots(&self) -> &[LatticeVector] {
        &self.roots
    }

    /// Re-checks root norms, orthogonality to k, the {0,1} Gram pattern and
    /// that the intersection graph has the declared type.
    pub fn validate(&self) -> Result<(), EmbeddingError> {
        let k = self.space.canonical();
        let n = self.roots.len();
        if n != self.dynkin.rank() {
            return Err(EmbeddingError::Invalid(format!("{} roots for rank {}", n, self.dynkin.rank())));
        }
        let mut adj = vec![Vec::new(); n];
        for (i, r) in self.roots.iter().enumerate() {
            if self.space.inner_product(r, r)? != -2 || r.dot(&k) != 0 {
                return Err(EmbeddingError::Invalid(format!("{r} is not a root of E")));
            }
            for j in 0..i {
                match r.dot(&self.roots[j]) {
                    0 => {}
                    1 => {
                        adj[i].push(j);
                        adj[j].push(i);
                    }
                    x => return Err(EmbeddingError::Invalid(format!("product {x} between roots {j} and {i}"))),
                }
            }
        }
        match identify(&adj) {
            Some(t) if t == self.dynkin => Ok(()),
            other => Err(EmbeddingError::Invalid(format!(
                "diagram is {}, declared {}",
                other.map(|t| t.to_string()).unwrap_or_else(|| "not ADE".into()),
                self.dynkin
            ))),
        }
    }

    /// Canonical key: roots sign-normalized to be positive, then sorted.
    pub fn canonical_key(&self) -> Vec<LatticeVector> {
        let mut v: Vec<_> = self
            .roots
            .iter()
            .map(|r| if r.is_positive() { r.clone() } else { r.neg() })
            .collect();
        v.sort();
        v
    }
}

/// Node of the target diagram in search order.
struct Node {
    /// Earlier node adjacent to this one (None for the first node of a component).
    parent: Option<usize>,
    /// Must have a larger root index than this earlier node.
    greater_than: Vec<usize>,
}

fn plan(t: &DynkinType) -> Vec<Node> {
    // Search big components first; they prune hardest.
    let mut comps: Vec<Component> = t.components().to_vec();
    comps.sort_by(|a, b| b.rank.cmp(&a.rank).then(b.family.cmp(&a.family)));
    let mut nodes: Vec<Node> = Vec::new();
    let mut prev_first: Option<(Component, usize)> = None;
    for c in comps {
        let off = nodes.len();
        let edges = c.edges();
        for i in 0..c.rank {
            let parent = edges.iter().find(|&&(a, b)| b == i && a < i).map(|&(a, _)| off + a);
            nodes.push(Node { parent, greater_than: Vec::new() });
        }
        // Diagram automorphisms: fix an order on symmetric leaves.
        let n = c.rank;
        let pairs: Vec<(usize, usize)> = match (c.family, n) {
            (Family::A, n) if n >= 2 => vec![(0, n - 1)],
            (Family::D, 4) => vec![(0, 2), (2, 3)],
            (Family::D, n) => vec![(n - 2, n - 1)],
            (Family::E, 6) => vec![(0, 4)],
            _ => vec![],
        };
        for (a, b) in pairs {
            nodes[off + b].greater_than.push(off + a);
        }
        // Identical components: increasing first root.
        if let Some((pc, pf)) = prev_first {
            if pc == c {
                nodes[off].greater_than.push(pf);
            }
        }
        prev_first = Some((c, off));
    }
    nodes
}

impl RootData {
    fn search(&self, nodes: &[Node], forced: Option<(usize, usize)>, chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, limit: usize) {
        if out.len() >= limit {
            return;
        }
        let i = chosen.len();
        if i == nodes.len() {
            out.push(chosen.clone());
            return;
        }
        let node = &nodes[i];
        let mut cand: Bits = if self.pos.len() == 128 { !0 } else { (1u128 << self.pos.len()) - 1 };
        for (j, &s) in chosen.iter().enumerate() {
            if Some(j) == node.parent {
                cand &= self.adj[s];
            } else {
                cand &= self.orth[s];
            }
        }
        for &g in &node.greater_than {
            cand &= above(chosen[g]);
        }
        if let Some((pos, r)) = forced {
            if pos == i {
                cand &= bit(r);
            }
        }
        for r in iter_bits(cand) {
            chosen.push(r);
            self.search(nodes, forced, chosen, out, limit);
            chosen.pop();
            if out.len() >= limit {
                return;
            }
        }
    }

    fn run(&self, t: &DynkinType, forced: Option<(usize, usize)>, limit: usize, strategy: Strategy) -> Vec<Vec<usize>> {
        if t.rank() > self.pos.len() || (t.is_empty()) {
            return if t.is_empty() { vec![vec![]] } else { vec![] };
        }
        let nodes = plan(t);
        let firsts: Vec<usize> = match forced {
            Some((0, r)) => vec![r],
            _ => (0..self.pos.len()).collect(),
        };
        let chunks = par_map(strategy, &firsts, |&r| {
            let mut out = Vec::new();
            let mut chosen = vec![r];
            self.search(&nodes, forced, &mut chosen, &mut out, limit);
            out
        });
        let mut out: Vec<Vec<usize>> = chunks.into_iter().flatten().collect();
        out.truncate(limit);
        out
    }

    /// Whether the type embeds at all.
    pub fn embeds(&self, t: &DynkinType) -> bool {
        !self.run(t, None, 1, Strategy::Sequential).is_empty()
    }

    /// All sublattices of type `t`, one positive simple system each (as
    /// indices into the positive roots, in diagram order).
    pub fn embeddings_idx(&self, t: &DynkinType, strategy: Strategy) -> Vec<Vec<usize>> {
        self.run(t, None, usize::MAX, strategy)
    }

    /// Sublattices of type `t` containing the first simple root of E: every
    /// W-orbit meets this set when E is irreducible.
    fn embeddings_through_simple(&self, t: &DynkinType, strategy: Strategy) -> Vec<Vec<usize>> {
        let r0 = self.simple[0];
        let mut set: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut reps = Vec::new();
        for pos in 0..t.rank() {
            for s in self.run(t, Some((pos, r0)), usize::MAX, strategy) {
                let mut key = s.clone();
                key.sort();
                if set.insert(key) {
                    reps.push(s);
                }
            }
        }
        reps
    }

    fn to_system(&self, t: &DynkinType, idx: &[usize]) -> SimpleSystem {
        SimpleSystem {
            space: self.space,
            dynkin: t.clone(),
            roots: idx.iter().map(|&i| self.pos[i].clone()).collect(),
        }
    }

    fn indices_of(&self, s: &SimpleSystem) -> Result<Vec<usize>, EmbeddingError> {
        s.roots
            .iter()
            .map(|r| {
                let p = if r.is_positive() { r.clone() } else { r.neg() };
                self.index.get(&p).copied().ok_or_else(|| EmbeddingError::Invalid(format!("{r} is not a root")))
            })
            .collect()
    }

    /// Class invariant of the sublattice spanned by `idx`.
    fn invariant_idx(&self, idx: &[usize]) -> ClassInvariant {
        let perp = idx.iter().fold(if self.pos.len() == 128 { !0 } else { (1u128 << self.pos.len()) - 1 }, |b, &s| b & self.orth[s]);
        let span = self.span_positive(idx);
        let mut exc_orth = 0;
        let mut patterns = Vec::with_capacity(self.exc.len());
        for row in &self.exc_dot {
            if idx.iter().all(|&s| row[s] == 0) {
                exc_orth += 1;
            }
            let mut counts = [0u16; 4];
            for r in iter_bits(span) {
                counts[(row[r].unsigned_abs() as usize).min(3)] += 1;
            }
            patterns.push(counts);
        }
        patterns.sort();
        ClassInvariant { perp: self.type_of_closed(perp), exceptional_orthogonal: exc_orth, patterns }
    }

    fn reduction_orthogonal_idx(&self, idx: &[usize]) -> bool {
        self.exc_dot.iter().any(|row| idx.iter().all(|&s| row[s] == 0))
    }

    fn reduction_factorization_idx(&self, idx: &[usize]) -> bool {
        let span = idx.iter().fold(0, |b, &s| b | bit(s));
        self.factors.iter().any(|f| span & !f == 0)
    }
}

/// Membership of `r` in <k, e>^perp via an explicit Z-basis of that lattice.
fn kernel_contains(space: &QuadraticSpace, e: &LatticeVector, r: &LatticeVector) -> bool {
    let basis = kernel_basis(space, e);
    // Solve r = sum c_i b_i over Q by elimination, then check exactness.
    let m = basis.len();
    let dim = space.rank();
    let mut rows: Vec<Vec<i128>> = (0..dim)
        .map(|j| {
            let mut row: Vec<i128> = basis.iter().map(|b| b.coords()[j] as i128).collect();
            row.push(r.coords()[j] as i128);
            row
        })
        .collect();
    let mut rank = 0;
    for col in 0..m {
        let Some(p) = (rank..dim).find(|&i| rows[i][col] != 0) else { continue };
        rows.swap(rank, p);
        for i in 0..dim {
            if i != rank && rows[i][col] != 0 {
                let (a, b) = (rows[rank][col], rows[i][col]);
                for j in 0..=m {
                    rows[i][j] = rows[i][j] * a - rows[rank][j] * b;
                }
            }
        }
        rank += 1;
    }
    (rank..dim).all(|i| rows[i][m] == 0) && (0..rank).all(|i| {
        let lead = rows[i].iter().take(m).find(|x| **x != 0).copied().unwrap_or(1);
        rows[i][m] % lead == 0
    })
}

/// Z-basis of {v : v.k = 0, v.e = 0} by unimodular column reduction.
fn kernel_basis(space: &QuadraticSpace, e: &LatticeVector) -> Vec<LatticeVector> {
    let dim = space.rank();
    let k = space.canonical();
    // Functionals as coefficient rows: v -> v.w = w0 v0 - sum wi vi.
    let func = |w: &LatticeVector| -> Vec<i64> {
        w.coords().iter().enumerate().map(|(i, &c)| if i == 0 { c } else { -c }).collect()
    };
    let mut m = [func(&k), func(e)];
    let mut u: Vec<Vec<i64>> = (0..dim).map(|i| (0..dim).map(|j| i64::from(i == j)).collect()).collect();
    let mut pivot_cols = 0;
    for row in 0..2 {
        // Euclid on columns pivot_cols.. of this row.
        loop {
            let nz: Vec<usize> = (pivot_cols..dim).filter(|&j| m[row][j] != 0).collect();
            if nz.len() <= 1 {
                if let Some(&j) = nz.first() {
                    swap_cols(&mut m, &mut u, pivot_cols, j);
                    pivot_cols += 1;
                }
                break;
            }
            let &jmin = nz.iter().min_by_key(|&&j| m[row][j].abs()).unwrap();
            for &j in &nz {
                if j != jmin {
                    let q = m[row][j] / m[row][jmin];
                    for r in 0..2 {
                        m[r][j] -= q * m[r][jmin];
                    }
                    for r in 0..dim {
                        u[r][j] -= q * u[r][jmin];
                    }
                }
            }
        }
    }
    (pivot_cols..dim)
        .map(|j| LatticeVector::from((0..dim).map(|r| u[r][j]).collect::<Vec<_>>()))
        .collect()
}

fn swap_cols(m: &mut [Vec<i64>; 2], u: &mut [Vec<i64>], a: usize, b: usize) {
    for r in m.iter_mut() {
        r.swap(a, b);
    }
    for r in u.iter_mut() {
        r.swap(a, b);
    }
}

/// Invariant tuple used to separate W-classes of embeddings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ClassInvariant {
    /// Type of the root system of the orthogonal complement in E.
    pub perp: DynkinType,
    /// Number of exceptional vectors orthogonal to the sublattice.
    pub exceptional_orthogonal: usize,
    /// Sorted per-exceptional-vector counts of |v.r| = 0,1,2,>=3 over positive roots r of the sublattice.
    #[serde(skip)]
    pub patterns: Vec<[u16; 4]>,
}

/// One embedding class with its size and a representative.
#[derive(Clone, Debug, Serialize)]
pub struct EmbeddingClass {
    pub invariant: ClassInvariant,
    pub representative: SimpleSystem,
    /// Number of sublattices found in the class (restricted search if `complete` is false).
    pub count: usize,
    pub reducible: bool,
}

/// All embeddings of `t` into E_{9-d}, one canonical simple system per sublattice.
pub fn enumerate_embeddings(t: &DynkinType, space: &QuadraticSpace) -> Result<Vec<SimpleSystem>, EmbeddingError> {
    enumerate_embeddings_with(t, space, Strategy::default())
}

/// [`enumerate_embeddings`] with an explicit execution strategy.
pub fn enumerate_embeddings_with(t: &DynkinType, space: &QuadraticSpace, strategy: Strategy) -> Result<Vec<SimpleSystem>, EmbeddingError> {
    let data = RootData::for_degree(space.degree() as u32)?;
    Ok(data.embeddings_idx(t, strategy).iter().map(|idx| data.to_system(t, idx)).collect())
}

/// Reduction criterion via an exceptional vector orthogonal to every root.
pub fn reduction_criterion(s: &SimpleSystem) -> Result<bool, EmbeddingError> {
    let data = RootData::for_degree(s.space.degree() as u32)?;
    Ok(data.reduction_orthogonal_idx(&data.indices_of(s)?))
}

/// Reduction criterion via factorization through <k, e>^perp: each e is
/// carried to e_n by simple reflections and the image of the system is
/// tested for lying in the standard E_{8-d}.
pub fn reduction_criterion_factorization(s: &SimpleSystem) -> Result<bool, EmbeddingError> {
    let data = RootData::for_degree(s.space.degree() as u32)?;
    Ok(data.reduction_factorization_idx(&data.indices_of(s)?))
}

/// Separation invariant of an embedding.
pub fn class_invariant(s: &SimpleSystem) -> Result<ClassInvariant, EmbeddingError> {
    let data = RootData::for_degree(s.space.degree() as u32)?;
    Ok(data.invariant_idx(&data.indices_of(s)?))
}

/// Groups the embeddings of `t` into classes by invariant.
///
/// With `complete = false` and E irreducible, only sublattices through a fixed
/// simple root are scanned; every class is still represented.
pub fn embedding_classes(t: &DynkinType, d: u32, complete: bool, strategy: Strategy) -> Result<Vec<EmbeddingClass>, EmbeddingError> {
    let data = RootData::for_degree(d)?;
    let irreducible = data.root_type().components().len() == 1;
    let idxs = if complete || !irreducible {
        data.embeddings_idx(t, strategy)
    } else {
        data.embeddings_through_simple(t, strategy)
    };
    let inv = par_map(strategy, &idxs, |idx| data.invariant_idx(idx));
    let mut classes: BTreeMap<ClassInvariant, (usize, usize)> = BTreeMap::new();
    for (i, v) in inv.into_iter().enumerate() {
        classes.entry(v).or_insert((i, 0)).1 += 1;
    }
    Ok(classes
        .into_iter()
        .map(|(invariant, (rep, count))| EmbeddingClass {
            invariant,
            representative: data.to_system(t, &idxs[rep]),
            count,
            reducible: data.reduction_orthogonal_idx(&idxs[rep]),
        })
        .collect())
}

/// Types with at least two embedding classes in E_{9-d}.
pub fn uniqueness_exceptions(space: &QuadraticSpace) -> Result<Vec<DynkinType>, EmbeddingError> {
    uniqueness_exceptions_with(space, Strategy::default())
}

pub fn uniqueness_exceptions_with(space: &QuadraticSpace, strategy: Strategy) -> Result<Vec<DynkinType>, EmbeddingError> {
    let d = space.degree() as u32;
    let data = RootData::for_degree(d)?;
    let types = DynkinType::all_up_to_rank(data.root_type().rank());
    let mut out = Vec::new();
    for t in types {
        if !data.embeds(&t) {
            continue;
        }
        if embedding_classes(&t, d, false, strategy)?.len() >= 2 {
            out.push(t);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ty(s: &str) -> DynkinType {
        s.parse().unwrap()
    }

    #[test]
    fn root_types() {
        let want = ["0", "A1", "A2+A1", "A4", "D5", "E6", "E7", "E8"];
        for d in 1..=8u32 {
            let data = RootData::for_degree(d).unwrap();
            assert_eq!(data.root_type().to_string(), want[(8 - d) as usize], "d={d}");
        }
    }

    #[test]
    fn a6_embeds_only_from_e7() {
        let s3 = QuadraticSpace::for_degree(3).unwrap();
        let s2 = QuadraticSpace::for_degree(2).unwrap();
        assert!(enumerate_embeddings(&ty("A6"), &s3).unwrap().is_empty());
        assert!(!enumerate_embeddings(&ty("A6"), &s2).unwrap().is_empty());
    }

    #[test]
    fn a2_has_no_embedding_in_e2() {
        let s = QuadraticSpace::for_degree(7).unwrap();
        assert!(enumerate_embeddings(&ty("A2"), &s).unwrap().is_empty());
        assert_eq!(enumerate_embeddings(&ty("A1"), &s).unwrap().len(), 1);
    }

    #[test]
    fn empty_system_reduces() {
        for d in 1..=8 {
            let s = SimpleSystem::new(QuadraticSpace::for_degree(d).unwrap(), DynkinType::empty(), vec![]).unwrap();
            assert!(reduction_criterion(&s).unwrap());
            assert!(reduction_criterion_factorization(&s).unwrap());
        }
    }

    #[test]
    fn sublattice_counts_are_unique_sets() {
        let s = QuadraticSpace::for_degree(1).unwrap();
        let v = enumerate_embeddings(&ty("A2"), &s).unwrap();
        // 240 * 56 / 12 root pairs with product -1 per A2 (six roots, ordered pairs of simple-like roots).
        assert_eq!(v.len(), 1120);
        let keys: BTreeSet<_> = v.iter().map(|x| x.canonical_key()).collect();
        assert_eq!(keys.len(), v.len());
    }

    #[test]
    fn kernel_basis_is_kernel() {
        let s = QuadraticSpace::for_degree(7).unwrap();
        for e in s.enumerate_exceptional().unwrap() {
            let b = kernel_basis(&s, &e);
            assert_eq!(b.len(), s.rank() - 2);
            for v in &b {
                assert_eq!(v.dot(&s.canonical()), 0);
                assert_eq!(v.dot(&e), 0);
            }
        }
    }
}

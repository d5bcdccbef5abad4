use serde::Serialize;

use super::{Elem, FiniteAlgebra, Homomorphism, Operations, Tuples};

/// An equivalence relation on `0..n` in canonical form: `labels[a]` is the
/// least element of the block of `a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Congruence {
    labels: Vec<Elem>,
}

impl Congruence {
    pub fn identity(n: usize) -> Self {
        Congruence {
            labels: (0..n).collect(),
        }
    }

    pub fn total(n: usize) -> Self {
        Congruence { labels: vec![0; n] }
    }

    /// Canonicalises an arbitrary block labelling (`a ~ b` iff `labels[a] == labels[b]`).
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut first: std::collections::HashMap<usize, Elem> = Default::default();
        let labels = labels
            .iter()
            .enumerate()
            .map(|(a, l)| *first.entry(*l).or_insert(a))
            .collect();
        Congruence { labels }
    }

    /// Kernel of a map.
    pub fn kernel(h: &Homomorphism) -> Self {
        Congruence::from_labels(h.map())
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Elem] {
        &self.labels
    }

    pub fn related(&self, a: Elem, b: Elem) -> bool {
        self.labels[a] == self.labels[b]
    }

    pub fn representative(&self, a: Elem) -> Elem {
        self.labels[a]
    }

    pub fn num_blocks(&self) -> usize {
        self.labels.iter().enumerate().filter(|(a, l)| a == *l).count()
    }

    /// Blocks ordered by their least element, each sorted.
    pub fn blocks(&self) -> Vec<Vec<Elem>> {
        let mut blocks: Vec<Vec<Elem>> = Vec::new();
        let mut index = vec![usize::MAX; self.labels.len()];
        for (a, &l) in self.labels.iter().enumerate() {
            if index[l] == usize::MAX {
                index[l] = blocks.len();
                blocks.push(Vec::new());
            }
            blocks[index[l]].push(a);
        }
        blocks
    }

    pub fn is_identity(&self) -> bool {
        self.labels.iter().enumerate().all(|(a, &l)| a == l)
    }

    pub fn is_total(&self) -> bool {
        self.labels.iter().all(|&l| l == 0)
    }

    /// `self ⊆ other` as relations.
    pub fn is_below(&self, other: &Congruence) -> bool {
        self.labels
            .iter()
            .enumerate()
            .all(|(a, &l)| other.labels[a] == other.labels[l])
    }

    /// Intersection of two equivalence relations.
    pub fn meet(&self, other: &Congruence) -> Congruence {
        let pairs: Vec<_> = self.labels.iter().zip(&other.labels).collect();
        let mut ids: std::collections::HashMap<(&Elem, &Elem), usize> = Default::default();
        let labels: Vec<usize> = pairs
            .iter()
            .map(|p| {
                let next = ids.len();
                *ids.entry(*p).or_insert(next)
            })
            .collect();
        Congruence::from_labels(&labels)
    }

    /// True when the relation is compatible with every operation of `algebra`.
    pub fn is_compatible(&self, algebra: &impl Operations) -> bool {
        let n = algebra.size();
        let mut reps = Vec::new();
        for (sym, s) in algebra.signature().symbols().iter().enumerate() {
            for args in Tuples::new(n, s.arity) {
                reps.clear();
                reps.extend(args.iter().map(|&a| self.labels[a]));
                if !self.related(algebra.apply(sym, &args), algebra.apply(sym, &reps)) {
                    return false;
                }
            }
        }
        true
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }

    /// Merges the classes, keeping the smaller root. Returns true on change.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// Least congruence of `algebra` containing `pairs`.
///
/// Union-find over the pairs, then repeated passes that merge `f(ā)` with
/// `f(ā[i := rep(a_i)])` for every operation, tuple and position until no
/// class changes. Replacing one argument at a time by its representative is
/// enough to generate compatibility with all related argument tuples.
pub fn congruence_closure(algebra: &impl Operations, pairs: &[(Elem, Elem)]) -> Congruence {
    let n = algebra.size();
    let mut uf = UnionFind::new(n);
    for &(a, b) in pairs {
        uf.union(a, b);
    }
    let mut args = Vec::new();
    loop {
        let mut changed = false;
        for (sym, s) in algebra.signature().symbols().iter().enumerate() {
            if s.arity == 0 {
                continue;
            }
            for tuple in Tuples::new(n, s.arity) {
                let value = algebra.apply(sym, &tuple);
                for i in 0..s.arity {
                    let rep = uf.find(tuple[i]);
                    if rep == tuple[i] {
                        continue;
                    }
                    args.clear();
                    args.extend_from_slice(&tuple);
                    args[i] = rep;
                    let other = algebra.apply(sym, &args);
                    changed |= uf.union(value, other);
                }
            }
        }
        if !changed {
            break;
        }
    }
    let labels: Vec<_> = (0..n).map(|a| uf.find(a)).collect();
    Congruence::from_labels(&labels)
}

/// The quotient algebra together with the canonical projection. Blocks are
/// numbered in the order of their least elements.
pub fn quotient(algebra: &FiniteAlgebra, theta: &Congruence) -> (FiniteAlgebra, Homomorphism) {
    let blocks = theta.blocks();
    let mut block_of = vec![0; algebra.size()];
    for (i, block) in blocks.iter().enumerate() {
        for &a in block {
            block_of[a] = i;
        }
    }
    let mut reps = Vec::new();
    let q = FiniteAlgebra::from_fn(algebra.signature_arc().clone(), blocks.len(), |sym, t| {
        reps.clear();
        reps.extend(t.iter().map(|&b| blocks[b][0]));
        block_of[algebra.apply(sym, &reps)]
    })
    .expect("quotient of a well-formed algebra is well-formed");
    (q, Homomorphism::new(block_of))
}

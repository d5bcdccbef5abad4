use serde::Serialize;

use super::{Elem, FiniteAlgebra, Signature, Tuples};
use crate::Result;

/// A total map between universes, `map[a]` being the image of `a`.
///
/// Whether it preserves a language is a property checked against a source,
/// a target and a signature; see [`is_homomorphism`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Homomorphism {
    map: Vec<Elem>,
}

impl Homomorphism {
    pub fn new(map: Vec<Elem>) -> Self {
        Homomorphism { map }
    }

    pub fn identity(n: usize) -> Self {
        Homomorphism { map: (0..n).collect() }
    }

    pub fn map(&self) -> &[Elem] {
        &self.map
    }

    pub fn into_map(self) -> Vec<Elem> {
        self.map
    }

    pub fn apply(&self, a: Elem) -> Elem {
        self.map[a]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Homomorphism) -> Homomorphism {
        Homomorphism {
            map: self.map.iter().map(|&a| other.map[a]).collect(),
        }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.map.iter().all(|b| seen.insert(*b))
    }

    pub fn is_surjective_onto(&self, n: usize) -> bool {
        let mut hit = vec![false; n];
        for &b in &self.map {
            hit[b] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// Sorted, duplicate-free image.
    pub fn image(&self) -> Vec<Elem> {
        let mut img = self.map.clone();
        img.sort_unstable();
        img.dedup();
        img
    }
}

/// Monomorphisms in a quasivariety are exactly the injective homomorphisms.
pub fn is_embedding(h: &Homomorphism) -> bool {
    h.is_injective()
}

/// Checks that `map` preserves every operation of `language`.
pub fn is_homomorphism(
    source: &FiniteAlgebra,
    target: &FiniteAlgebra,
    language: &Signature,
    map: &[Elem],
) -> Result<bool> {
    if map.len() != source.size() || map.iter().any(|&b| b >= target.size()) {
        return Ok(false);
    }
    let src = language.embed_into(source.signature())?;
    let tgt = language.embed_into(target.signature())?;
    let mut image = Vec::new();
    for ((sym, &i), &j) in language.symbols().iter().zip(&src).zip(&tgt) {
        for (k, args) in Tuples::new(source.size(), sym.arity).enumerate() {
            image.clear();
            image.extend(args.iter().map(|&a| map[a]));
            if map[source.table(i)[k]] != target.apply(j, &image) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All `language`-homomorphisms `source → target` in lexicographic order of
/// their maps.
pub fn enumerate_homomorphisms(
    source: &FiniteAlgebra,
    target: &FiniteAlgebra,
    language: &Signature,
) -> Result<Vec<Homomorphism>> {
    HomSearch::new(source, target, language)?.all()
}

const UNSET: Elem = usize::MAX;

struct CompiledOp<'a> {
    arity: usize,
    source: &'a [Elem],
    target: &'a [Elem],
}

/// Backtracking search for homomorphisms with constant propagation.
///
/// Nullary symbols pin their values first; afterwards any table entry whose
/// arguments are all mapped forces the image of its value. Branching is on the
/// least unmapped element with candidate images in increasing order, which
/// yields solutions in lexicographic order.
pub struct HomSearch<'a> {
    source_size: usize,
    target_size: usize,
    ops: Vec<CompiledOp<'a>>,
    injective: bool,
    pins: Vec<(Elem, Elem)>,
}

impl<'a> HomSearch<'a> {
    pub fn new(source: &'a FiniteAlgebra, target: &'a FiniteAlgebra, language: &Signature) -> Result<Self> {
        let src = language.embed_into(source.signature())?;
        let tgt = language.embed_into(target.signature())?;
        let ops = language
            .symbols()
            .iter()
            .zip(src.iter().zip(&tgt))
            .map(|(s, (&i, &j))| CompiledOp {
                arity: s.arity,
                source: source.table(i),
                target: target.table(j),
            })
            .collect();
        Ok(HomSearch {
            source_size: source.size(),
            target_size: target.size(),
            ops,
            injective: false,
            pins: Vec::new(),
        })
    }

    /// Only report injective maps.
    pub fn injective(mut self, yes: bool) -> Self {
        self.injective = yes;
        self
    }

    /// Require `a ↦ b`.
    pub fn pin(mut self, a: Elem, b: Elem) -> Self {
        self.pins.push((a, b));
        self
    }

    pub fn all(&self) -> Result<Vec<Homomorphism>> {
        let mut out = Vec::new();
        self.for_each(|h| {
            out.push(Homomorphism::new(h.to_vec()));
            true
        });
        Ok(out)
    }

    pub fn first(&self) -> Option<Homomorphism> {
        let mut out = None;
        self.for_each(|h| {
            out = Some(Homomorphism::new(h.to_vec()));
            false
        });
        out
    }

    pub fn count(&self) -> usize {
        let mut n = 0;
        self.for_each(|_| {
            n += 1;
            true
        });
        n
    }

    /// Calls `visit` on each solution until it returns false.
    pub fn for_each(&self, mut visit: impl FnMut(&[Elem]) -> bool) {
        if self.source_size == 0 || (self.injective && self.target_size < self.source_size) {
            return;
        }
        let mut state = State {
            map: vec![UNSET; self.source_size],
            used: vec![0; self.target_size],
            trail: Vec::new(),
        };
        for &(a, b) in &self.pins {
            if a >= self.source_size || b >= self.target_size || !self.assign(&mut state, a, b) {
                return;
            }
        }
        if !self.propagate(&mut state) {
            return;
        }
        self.search(&mut state, &mut visit);
    }

    fn search(&self, state: &mut State, visit: &mut impl FnMut(&[Elem]) -> bool) -> bool {
        let Some(next) = state.map.iter().position(|&b| b == UNSET) else {
            return visit(&state.map);
        };
        for b in 0..self.target_size {
            let mark = state.trail.len();
            if self.assign(state, next, b) && self.propagate(state) && !self.search(state, visit) {
                state.undo(mark);
                return false;
            }
            state.undo(mark);
        }
        true
    }

    fn assign(&self, state: &mut State, a: Elem, b: Elem) -> bool {
        match state.map[a] {
            UNSET => {
                if self.injective && state.used[b] > 0 {
                    return false;
                }
                state.map[a] = b;
                state.used[b] += 1;
                state.trail.push(a);
                true
            }
            current => current == b,
        }
    }

    fn propagate(&self, state: &mut State) -> bool {
        let n = self.source_size;
        let mut image = Vec::new();
        loop {
            let mut changed = false;
            for op in &self.ops {
                for (k, args) in Tuples::new(n, op.arity).enumerate() {
                    image.clear();
                    for &a in &args {
                        let b = state.map[a];
                        if b == UNSET {
                            break;
                        }
                        image.push(b);
                    }
                    if image.len() < op.arity {
                        continue;
                    }
                    let forced = op.target[super::encode_tuple(&image, self.target_size)];
                    let value = op.source[k];
                    if state.map[value] == UNSET {
                        if !self.assign(state, value, forced) {
                            return false;
                        }
                        changed = true;
                    } else if state.map[value] != forced {
                        return false;
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }
}

struct State {
    map: Vec<Elem>,
    used: Vec<usize>,
    trail: Vec<Elem>,
}

impl State {
    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let a = self.trail.pop().unwrap();
            self.used[self.map[a]] -= 1;
            self.map[a] = UNSET;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::advance_tuple;
    use crate::fixtures;

    /// Filters all |B|^|A| maps by preservation.
    fn naive(a: &FiniteAlgebra, b: &FiniteAlgebra, lang: &Signature) -> Vec<Homomorphism> {
        let mut map = vec![0; a.size()];
        let mut out = Vec::new();
        loop {
            if is_homomorphism(a, b, lang, &map).unwrap() {
                out.push(Homomorphism::new(map.clone()));
            }
            if !advance_tuple(&mut map, b.size()) {
                return out;
            }
        }
    }

    #[test]
    fn chain3_to_chain2() {
        let homs = enumerate_homomorphisms(&fixtures::chain3(), &fixtures::chain2(), &fixtures::bdl()).unwrap();
        let maps: Vec<_> = homs.iter().map(|h| h.map().to_vec()).collect();
        assert_eq!(maps, vec![vec![0, 0, 1], vec![0, 1, 1]]);
        assert_eq!(homs, naive(&fixtures::chain3(), &fixtures::chain2(), &fixtures::bdl()));
    }

    #[test]
    fn diamond_to_chain2() {
        let homs = enumerate_homomorphisms(&fixtures::diamond(), &fixtures::chain2(), &fixtures::bdl()).unwrap();
        let maps: Vec<_> = homs.iter().map(|h| h.map().to_vec()).collect();
        assert_eq!(maps, vec![vec![0, 0, 1, 1], vec![0, 1, 0, 1]]);
    }

    #[test]
    fn identity_is_found() {
        for a in [fixtures::chain3(), fixtures::diamond(), fixtures::four_ba()] {
            let homs = enumerate_homomorphisms(&a, &a, a.signature()).unwrap();
            assert!(homs.contains(&Homomorphism::identity(a.size())));
        }
    }

    #[test]
    fn embeddings() {
        assert!(is_embedding(&Homomorphism::identity(2)));
        assert!(!is_embedding(&Homomorphism::new(vec![0, 0, 1])));
        let h = Homomorphism::new(vec![0, 1, 3]);
        assert!(is_embedding(&h));
        assert!(is_homomorphism(&fixtures::chain3(), &fixtures::diamond(), &fixtures::bdl(), h.map()).unwrap());
        let inj = HomSearch::new(&fixtures::chain3(), &fixtures::diamond(), &fixtures::bdl())
            .unwrap()
            .injective(true)
            .all()
            .unwrap();
        assert_eq!(inj.len(), 2);
    }

    #[test]
    fn pins_restrict_search() {
        let (c3, c2) = (fixtures::chain3(), fixtures::chain2());
        let search = HomSearch::new(&c3, &c2, &fixtures::bdl()).unwrap().pin(1, 1);
        assert_eq!(search.all().unwrap(), vec![Homomorphism::new(vec![0, 1, 1])]);
    }

    #[test]
    fn language_must_be_shared() {
        let err = enumerate_homomorphisms(&fixtures::chain2(), &fixtures::chain2(), &fixtures::ba());
        assert!(err.is_err());
    }

    #[test]
    fn agrees_with_naive_filter_on_small_fixtures() {
        let small = fixtures::small_bdl_algebras();
        for a in &small {
            for b in &small {
                let fast = enumerate_homomorphisms(a, b, &fixtures::bdl()).unwrap();
                assert_eq!(fast, naive(a, b, &fixtures::bdl()));
            }
        }
        let meet_only = fixtures::bms();
        for a in &small {
            for b in &small {
                let fast = enumerate_homomorphisms(a, b, &meet_only).unwrap();
                assert_eq!(fast, naive(a, b, &meet_only));
            }
        }
    }
}

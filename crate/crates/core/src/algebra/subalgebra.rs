use std::collections::{BTreeSet, HashSet};

use super::{advance_tuple, Elem, FiniteAlgebra, Homomorphism, Operations};
use crate::{Error, Result};

/// Least subuniverse containing `seed` and the values of all constants.
pub fn generated_subalgebra(algebra: &impl Operations, seed: &[Elem]) -> Vec<Elem> {
    let mut set: BTreeSet<Elem> = seed.iter().copied().collect();
    close(algebra, &mut set, usize::MAX);
    set.into_iter().collect()
}

/// Closes `set` under all operations; stops early once it grows past `limit`.
fn close(algebra: &impl Operations, set: &mut BTreeSet<Elem>, limit: usize) {
    let sig = algebra.signature();
    for (sym, s) in sig.symbols().iter().enumerate() {
        if s.arity == 0 {
            set.insert(algebra.apply(sym, &[]));
        }
    }
    let members: Vec<Elem> = set.iter().copied().collect();
    close_from(algebra, set, members, 0, limit);
}

/// Continues closing `set`, whose listing `members` is already closed up to
/// position `done`.
fn close_from(
    algebra: &impl Operations,
    set: &mut BTreeSet<Elem>,
    mut members: Vec<Elem>,
    mut done: usize,
    limit: usize,
) {
    let sig = algebra.signature();
    while done < members.len() && members.len() <= limit {
        let known = members.len();
        for (sym, s) in sig.symbols().iter().enumerate() {
            if s.arity == 0 {
                continue;
            }
            let mut pos = vec![0; s.arity];
            let mut args = vec![0; s.arity];
            loop {
                if pos.iter().any(|&p| p >= done) {
                    for (a, &p) in args.iter_mut().zip(&pos) {
                        *a = members[p];
                    }
                    let v = algebra.apply(sym, &args);
                    if set.insert(v) {
                        members.push(v);
                        if members.len() > limit {
                            return;
                        }
                    }
                }
                if !advance_tuple(&mut pos, known) {
                    break;
                }
            }
        }
        done = known;
    }
}

/// The subalgebra on a closed subset, with elements renumbered in increasing
/// order, and its inclusion map.
pub fn subalgebra(algebra: &FiniteAlgebra, subset: &[Elem]) -> Result<(FiniteAlgebra, Homomorphism)> {
    let mut elems = subset.to_vec();
    elems.sort_unstable();
    elems.dedup();
    let mut position = vec![usize::MAX; algebra.size()];
    for (i, &e) in elems.iter().enumerate() {
        if e >= algebra.size() {
            return Err(Error::Precondition(format!("element {} outside the universe", e)));
        }
        position[e] = i;
    }
    let mut closed = true;
    let mut args = Vec::new();
    let sub = FiniteAlgebra::from_fn(algebra.signature_arc().clone(), elems.len(), |sym, t| {
        args.clear();
        args.extend(t.iter().map(|&i| elems[i]));
        let v = position[algebra.apply(sym, &args)];
        if v == usize::MAX {
            closed = false;
            0
        } else {
            v
        }
    })?;
    if !closed {
        return Err(Error::Precondition("subset is not closed under the operations".into()));
    }
    Ok((sub, Homomorphism::new(elems)))
}

/// All subuniverses containing `seed` with at most `max_size` elements,
/// ordered by size and then lexicographically.
pub fn subuniverses(algebra: &impl Operations, seed: &[Elem], max_size: usize) -> Vec<Vec<Elem>> {
    let mut start: BTreeSet<Elem> = seed.iter().copied().collect();
    close(algebra, &mut start, max_size);
    if start.len() > max_size {
        return Vec::new();
    }
    let mut seen: HashSet<Vec<Elem>> = HashSet::new();
    let mut stack = vec![start];
    let mut out = Vec::new();
    while let Some(set) = stack.pop() {
        let key: Vec<Elem> = set.iter().copied().collect();
        if !seen.insert(key.clone()) {
            continue;
        }
        if !key.is_empty() {
            out.push(key);
        }
        if set.len() == max_size {
            continue;
        }
        for e in 0..algebra.size() {
            if set.contains(&e) {
                continue;
            }
            let mut next = set.clone();
            next.insert(e);
            let mut members: Vec<Elem> = set.iter().copied().collect();
            members.push(e);
            close_from(algebra, &mut next, members, set.len(), max_size);
            if next.len() <= max_size {
                let k: Vec<Elem> = next.iter().copied().collect();
                if !seen.contains(&k) {
                    stack.push(next);
                }
            }
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{direct_product, is_homomorphism};
    use crate::fixtures;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(generated_subalgebra(&fixtures::diamond(), &[1]), vec![0, 1, 3]);
        assert_eq!(generated_subalgebra(&fixtures::four_ba(), &[1]), vec![0, 1, 2, 3]);
        let c3 = fixtures::chain3();
        assert_eq!(generated_subalgebra(&c3, &[0, 1, 2]), vec![0, 1, 2]);
        assert_eq!(generated_subalgebra(&c3, &[]), vec![0, 2]);
    }

    #[test]
    fn subalgebra_inclusion_is_hom() {
        let d = fixtures::diamond();
        let (sub, inc) = subalgebra(&d, &[0, 2, 3]).unwrap();
        assert_eq!(sub, fixtures::chain3());
        assert!(is_homomorphism(&sub, &d, d.signature(), inc.map()).unwrap());
        assert!(subalgebra(&d, &[1, 2]).is_err());
    }

    #[test]
    fn subuniverses_of_boolean_cube() {
        let two = fixtures::two_ba();
        let cube = direct_product(&[&two, &two, &two]).unwrap();
        let subs = subuniverses(&cube, &[], 8);
        // Boolean subalgebras of 2^3 correspond to partitions of a 3-element set.
        assert_eq!(subs.len(), 5);
        assert_eq!(subs[0], vec![0, 7]);
        assert_eq!(subuniverses(&cube, &[1], 4).len(), 1);
    }

    proptest! {
        #[test]
        fn monotone_and_idempotent(seed_a in proptest::collection::vec(0usize..8, 0..4),
                                   extra in proptest::collection::vec(0usize..8, 0..3)) {
            let c2 = fixtures::chain2();
            let a = direct_product(&[&c2, &c2, &c2]).unwrap();
            let small = generated_subalgebra(&a, &seed_a);
            prop_assert_eq!(generated_subalgebra(&a, &small), small.clone());
            let mut bigger_seed = seed_a.clone();
            bigger_seed.extend(extra);
            let big = generated_subalgebra(&a, &bigger_seed);
            prop_assert!(small.iter().all(|e| big.contains(e)));
        }
    }
}

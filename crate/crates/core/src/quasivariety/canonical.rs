use std::collections::BTreeMap;

use crate::algebra::{Elem, FiniteAlgebra, Tuples};

/// Colour refinement: each element's colour is replaced by the rank of its
/// old colour together with the sorted multiset of coloured table rows it
/// takes part in, until the number of colours stops growing.
fn refine(a: &FiniteAlgebra, rows: &[Vec<(usize, Vec<Elem>)>], colours: &mut Vec<usize>) {
    let n = a.size();
    loop {
        let before = colours.iter().max().map_or(0, |m| m + 1);
        let mut keys: Vec<(usize, Vec<Vec<usize>>)> = Vec::with_capacity(n);
        for x in 0..n {
            let mut rows_x: Vec<Vec<usize>> = rows[x]
                .iter()
                .map(|(sym, t)| {
                    let mut r = Vec::with_capacity(t.len() + 1);
                    r.push(*sym);
                    r.extend(t.iter().map(|&e| colours[e]));
                    r
                })
                .collect();
            rows_x.sort_unstable();
            keys.push((colours[x], rows_x));
        }
        let ranks = rank(&keys);
        *colours = ranks;
        let after = colours.iter().max().map_or(0, |m| m + 1);
        if after == before {
            return;
        }
    }
}

fn rank<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let distinct: BTreeMap<K, usize> = keys.iter().map(|k| (k.clone(), 0)).collect();
    let index: BTreeMap<&K, usize> = distinct.keys().enumerate().map(|(i, k)| (k, i)).collect();
    keys.iter().map(|k| index[k]).collect()
}

/// For every element the rows `(symbol, position, args.., value)` mentioning it.
fn incidence(a: &FiniteAlgebra) -> Vec<Vec<(usize, Vec<Elem>)>> {
    let n = a.size();
    let mut rows = vec![Vec::new(); n];
    for (sym, s) in a.signature().symbols().iter().enumerate() {
        for (k, args) in Tuples::new(n, s.arity).enumerate() {
            let value = a.table(sym)[k];
            let mut row = args.clone();
            row.push(value);
            for (pos, &e) in row.iter().enumerate() {
                rows[e].push((sym * (s.arity + 2) + pos, row.clone()));
            }
        }
    }
    rows
}

/// An isomorphic copy of `a` that is equal for all isomorphic inputs.
///
/// Individualisation-refinement: refine colours, split the first non-singleton
/// class by individualising each of its members in turn, and keep the least
/// relabelled table over all discrete leaves.
pub fn canonical_form(a: &FiniteAlgebra) -> FiniteAlgebra {
    let rows = incidence(a);
    let mut colours = vec![0; a.size()];
    refine(a, &rows, &mut colours);
    let mut best: Option<(Vec<Elem>, Vec<Elem>)> = None;
    search(a, &rows, colours, &mut best);
    let (_, perm) = best.expect("at least one leaf");
    a.relabel(&perm)
}

fn search(
    a: &FiniteAlgebra,
    rows: &[Vec<(usize, Vec<Elem>)>],
    colours: Vec<usize>,
    best: &mut Option<(Vec<Elem>, Vec<Elem>)>,
) {
    let n = a.size();
    let mut counts = vec![0; n];
    for &c in &colours {
        counts[c] += 1;
    }
    let Some(cell) = (0..n).find(|&c| counts[c] > 1) else {
        let key = a.relabel(&colours).table_key();
        if best.as_ref().is_none_or(|(k, _)| key < *k) {
            *best = Some((key, colours));
        }
        return;
    };
    for x in (0..n).filter(|&x| colours[x] == cell) {
        let mut split: Vec<(usize, usize)> = colours.iter().map(|&c| (c, 0)).collect();
        split[x].1 = 1;
        let mut next = rank(&split);
        refine(a, rows, &mut next);
        search(a, rows, next, best);
    }
}

pub fn is_isomorphic(a: &FiniteAlgebra, b: &FiniteAlgebra) -> bool {
    a.size() == b.size() && *a.signature() == *b.signature() && {
        let b = b.with_signature(a.signature_arc().clone()).expect("equal signatures");
        canonical_form(a).table_key() == canonical_form(&b).table_key()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    #[test]
    fn distinguishes_small_lattices() {
        assert!(!is_isomorphic(&fixtures::chain4(), &fixtures::diamond()));
        assert!(is_isomorphic(
            &fixtures::diamond(),
            &fixtures::diamond().relabel(&[0, 2, 1, 3])
        ));
        assert!(!is_isomorphic(&fixtures::min_monoid(), &fixtures::z2_monoid()));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn invariant_under_relabelling(perm in Just((0..4).collect::<Vec<usize>>()).prop_shuffle(), which in 0usize..4) {
            let a = [fixtures::diamond(), fixtures::chain4(), fixtures::four_ba(), fixtures::four_bai()][which].clone();
            prop_assert_eq!(canonical_form(&a), canonical_form(&a.relabel(&perm)));
        }

        #[test]
        fn symmetric_products(perm in Just((0..8).collect::<Vec<usize>>()).prop_shuffle()) {
            let z = fixtures::z2_monoid();
            let cube = crate::algebra::direct_product(&[&z, &z, &z]).unwrap();
            prop_assert_eq!(canonical_form(&cube), canonical_form(&cube.relabel(&perm)));
        }
    }
}

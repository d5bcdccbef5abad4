use std::collections::HashMap;
use std::sync::Arc;

use itertools::Itertools;

use super::PartialOperation;
use crate::algebra::{direct_product, reduct, Elem, FiniteAlgebra, Signature, Tuples};
use crate::logic::{Equation, PpFormula, Term};
use crate::{Error, Result};

const MAX_DEPTH: usize = 3;
const MAX_WIDTH: usize = 4;
const MAX_WITNESSES: usize = 2;
const MAX_TERMS: usize = 2048;
const MAX_BITS: usize = 1 << 22;

struct Case {
    size: usize,
    offset: usize,
    op: PartialOperation,
}

struct Space {
    cases: Vec<Case>,
    arity: usize,
    witnesses: usize,
    bits: usize,
}

impl Space {
    fn words(&self) -> usize {
        self.bits.div_ceil(64)
    }

    /// Does the conjunction with assignment set `set` define every graph?
    fn defines(&self, set: &[u64]) -> bool {
        let bit = |i: usize| set[i / 64] >> (i % 64) & 1 == 1;
        self.cases.iter().all(|c| {
            let block = c.size.pow(self.witnesses as u32);
            Tuples::new(c.size, self.arity).enumerate().all(|(k, _)| {
                let expected = c.op.graph()[k];
                (0..c.size).all(|y| {
                    let start = c.offset + (k * c.size + y) * block;
                    (start..start + block).any(bit) == (expected == Some(y))
                })
            })
        })
    }
}

/// Searches for a pp formula of `language` defining the given partial
/// operations, each paired with the algebra it lives on.
///
/// Candidates are tested against the given graphs and the product graphs on
/// all pairwise products. Enumeration order: number of witnesses (0 to 2),
/// then number of equations (1 to `width`), then equations in order of their
/// terms. Terms are ordered by depth, then size, then printed form, and only
/// the first term with a given value vector over the test algebras is kept.
pub fn bounded_pp_definability_search(
    graphs: &[(FiniteAlgebra, PartialOperation)],
    language: &Arc<Signature>,
    depth: usize,
    width: usize,
) -> Result<Option<PpFormula>> {
    if depth > MAX_DEPTH || width > MAX_WIDTH {
        return Err(Error::Precondition(format!(
            "definability search caps: depth ≤ {}, width ≤ {}",
            MAX_DEPTH, MAX_WIDTH
        )));
    }
    let Some(arity) = graphs.first().map(|(_, f)| f.arity()) else {
        return Err(Error::Precondition("no graphs to define".into()));
    };
    let mut tests: Vec<(FiniteAlgebra, PartialOperation)> = Vec::new();
    for (a, f) in graphs {
        if f.arity() != arity || f.size() != a.size() {
            return Err(Error::Precondition(
                "graphs must share one arity and match their algebras".into(),
            ));
        }
        tests.push((reduct(a, language)?, f.clone()));
    }
    for i in 0..graphs.len() {
        for j in i..graphs.len() {
            let (a, f) = (&tests[i].0, &tests[i].1);
            let (b, g) = (&tests[j].0, &tests[j].1);
            let p = direct_product(&[a, b])?;
            let nb = b.size();
            let op = PartialOperation::from_fn(arity, p.size(), |t| {
                let left: Vec<Elem> = t.iter().map(|&e| e / nb).collect();
                let right: Vec<Elem> = t.iter().map(|&e| e % nb).collect();
                Some(f.get(&left)? * nb + g.get(&right)?)
            })?;
            tests.push((p, op));
        }
    }
    for witnesses in 0..=MAX_WITNESSES {
        if let Some(f) = search_with(&tests, language, arity, witnesses, depth, width)? {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

fn var_names(arity: usize, witnesses: usize) -> Vec<String> {
    let mut v: Vec<String> = (1..=arity).map(|i| format!("x{}", i)).collect();
    v.push("y".into());
    v.extend((1..=witnesses).map(|i| format!("z{}", i)));
    v
}

fn term_size(t: &Term) -> usize {
    match t {
        Term::Var(_) => 1,
        Term::App(_, args) => 1 + args.iter().map(term_size).sum::<usize>(),
    }
}

fn search_with(
    tests: &[(FiniteAlgebra, PartialOperation)],
    language: &Arc<Signature>,
    arity: usize,
    witnesses: usize,
    depth: usize,
    width: usize,
) -> Result<Option<PpFormula>> {
    let names = var_names(arity, witnesses);
    let nv = names.len();
    let mut cases = Vec::new();
    let mut bits = 0;
    for (a, f) in tests {
        cases.push(Case {
            size: a.size(),
            offset: bits,
            op: f.clone(),
        });
        bits += a.size().pow(nv as u32);
        if bits > MAX_BITS {
            return Err(Error::ProductCapExceeded {
                size: bits,
                cap: MAX_BITS,
            });
        }
    }
    let space = Space {
        cases,
        arity,
        witnesses,
        bits,
    };

    // Value of every term at every assignment of every test algebra.
    let mut terms: Vec<Term> = Vec::new();
    let mut values: Vec<Vec<Elem>> = Vec::new();
    let mut level_of: Vec<usize> = Vec::new();
    let mut seen: HashMap<Vec<Elem>, usize> = HashMap::new();
    let mut level0: Vec<(Term, Vec<Elem>)> = Vec::new();
    for (v, name) in names.iter().enumerate() {
        let vals = tests
            .iter()
            .flat_map(|(a, _)| Tuples::new(a.size(), nv).map(move |t| t[v]))
            .collect();
        level0.push((Term::var(name.clone()), vals));
    }
    for (sym, s) in language.symbols().iter().enumerate() {
        if s.arity == 0 {
            let vals = tests
                .iter()
                .flat_map(|(a, _)| std::iter::repeat_n(a.apply(sym, &[]), a.size().pow(nv as u32)))
                .collect();
            level0.push((Term::constant(s.name.clone()), vals));
        }
    }
    let mut push_level = |candidates: Vec<(Term, Vec<Elem>)>,
                          level: usize,
                          terms: &mut Vec<Term>,
                          values: &mut Vec<Vec<Elem>>,
                          level_of: &mut Vec<usize>|
     -> Result<()> {
        let mut candidates = candidates;
        candidates.sort_by_cached_key(|(t, _)| (term_size(t), t.to_string()));
        for (t, v) in candidates {
            if !seen.contains_key(&v) {
                seen.insert(v.clone(), terms.len());
                terms.push(t);
                values.push(v);
                level_of.push(level);
                if terms.len() > MAX_TERMS {
                    return Err(Error::Precondition(format!("more than {} distinct terms", MAX_TERMS)));
                }
            }
        }
        Ok(())
    };
    push_level(level0, 0, &mut terms, &mut values, &mut level_of)?;
    for level in 1..=depth {
        let known = terms.len();
        let mut candidates = Vec::new();
        for (sym, s) in language.symbols().iter().enumerate() {
            if s.arity == 0 {
                continue;
            }
            for args in Tuples::new(known, s.arity) {
                if args.iter().all(|&a| level_of[a] + 1 < level) {
                    continue;
                }
                let mut vals = Vec::with_capacity(bits);
                for (a, _) in tests {
                    let span = a.size().pow(nv as u32);
                    let start = vals.len();
                    for k in 0..span {
                        let row: Vec<Elem> = args.iter().map(|&t| values[t][start + k]).collect();
                        vals.push(a.apply(sym, &row));
                    }
                }
                let term = Term::app(s.name.clone(), args.iter().map(|&t| terms[t].clone()).collect());
                candidates.push((term, vals));
            }
        }
        push_level(candidates, level, &mut terms, &mut values, &mut level_of)?;
    }

    // Atoms: equations between distinct terms, keeping the first of each
    // satisfaction set and dropping those true everywhere.
    let words = space.words();
    let full: Vec<u64> = (0..words)
        .map(|w| {
            if (w + 1) * 64 <= bits {
                u64::MAX
            } else {
                (1u64 << (bits - w * 64)) - 1
            }
        })
        .collect();
    let mut atoms: Vec<(Equation, Vec<u64>)> = Vec::new();
    let mut atom_seen: HashMap<Vec<u64>, ()> = HashMap::new();
    for j in 0..terms.len() {
        for i in 0..j {
            let mut set = vec![0u64; words];
            for (k, (x, y)) in values[i].iter().zip(&values[j]).enumerate() {
                if x == y {
                    set[k / 64] |= 1 << (k % 64);
                }
            }
            if set == full || atom_seen.insert(set.clone(), ()).is_some() {
                continue;
            }
            atoms.push((Equation::new(terms[i].clone(), terms[j].clone()), set));
        }
    }

    let bound: Vec<String> = names[arity + 1..].to_vec();
    let mut set = vec![0u64; words];
    for w in 1..=width {
        for combo in (0..atoms.len()).combinations(w) {
            set.copy_from_slice(&atoms[combo[0]].1);
            for &c in &combo[1..] {
                for (s, a) in set.iter_mut().zip(&atoms[c].1) {
                    *s &= a;
                }
            }
            if space.defines(&set) {
                let body = combo.iter().map(|&c| atoms[c].0.clone()).collect();
                return Ok(Some(PpFormula::new(bound, body)?));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::implicit::{induced_or_error, ImplicitOpSpec};

    fn reproduces(
        graphs: &[(FiniteAlgebra, PartialOperation)],
        language: &Arc<Signature>,
        formula: &PpFormula,
    ) -> bool {
        let spec = ImplicitOpSpec::new("found", graphs[0].1.arity(), language.clone(), formula.clone()).unwrap();
        graphs
            .iter()
            .all(|(a, f)| induced_or_error(&reduct(a, language).unwrap(), &spec).ok().as_ref() == Some(f))
    }

    fn complement_graph() -> Vec<(FiniteAlgebra, PartialOperation)> {
        let two = fixtures::two_ba();
        let op = PartialOperation::new(1, 2, vec![Some(1), Some(0)]).unwrap();
        vec![(two, op)]
    }

    #[test]
    fn complement_is_term_defined_in_ba() {
        let graphs = complement_graph();
        let f = bounded_pp_definability_search(&graphs, &fixtures::ba(), 1, 1)
            .unwrap()
            .unwrap();
        assert_eq!(f.to_string(), "exists [] . y = not(x1)");
        assert!(reproduces(&graphs, &fixtures::ba(), &f));
    }

    #[test]
    fn complement_is_pp_defined_in_bdl() {
        let graphs = complement_graph();
        let bdl = fixtures::bdl();
        assert_eq!(bounded_pp_definability_search(&graphs, &bdl, 1, 1).unwrap(), None);
        let f = bounded_pp_definability_search(&graphs, &bdl, 1, 2).unwrap().unwrap();
        assert!(f.bound_vars.is_empty() && f.body.len() == 2);
        assert!(reproduces(&graphs, &bdl, &f));
        let c3 = fixtures::chain3();
        let spec = ImplicitOpSpec::new("found", 1, bdl, f).unwrap();
        assert_eq!(
            induced_or_error(&c3, &spec).unwrap(),
            induced_or_error(&c3, &fixtures::compl()).unwrap()
        );
    }

    #[test]
    fn swap_on_unbounded_chain_is_not_definable() {
        let a = fixtures::chain2_lat();
        let op = PartialOperation::new(1, 2, vec![Some(1), Some(0)]).unwrap();
        assert_eq!(
            bounded_pp_definability_search(&[(a, op)], &fixtures::lat(), 1, 2).unwrap(),
            None
        );
    }

    #[test]
    fn caps_are_enforced() {
        let graphs = complement_graph();
        assert!(bounded_pp_definability_search(&graphs, &fixtures::ba(), 4, 1).is_err());
        assert!(bounded_pp_definability_search(&[], &fixtures::ba(), 1, 1).is_err());
    }
}

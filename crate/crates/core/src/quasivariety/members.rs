use std::collections::HashSet;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use super::{canonical_form, Body, Quasivariety};
use crate::algebra::{
    subuniverses, Elem, FiniteAlgebra, HomSearch, Homomorphism, Operations, ProductView, Signature, Tuples,
};
use crate::logic::{CompiledEquation, Quasiequation};
use crate::{Limits, Result};

/// The subalgebra of an operations view on a sorted subuniverse.
fn restrict(view: &impl Operations, signature: &std::sync::Arc<Signature>, elems: &[Elem]) -> FiniteAlgebra {
    let mut args = Vec::new();
    FiniteAlgebra::from_fn(signature.clone(), elems.len(), |sym, t| {
        args.clear();
        args.extend(t.iter().map(|&i| elems[i]));
        let v = view.apply(sym, &args);
        elems.binary_search(&v).expect("closed subset")
    })
    .expect("restriction to a subuniverse is well-formed")
}

/// Members of size exactly `n`, one per isomorphism type, in order of discovery.
///
/// Generated presentations: every `n`-element member embeds into a product of
/// `n - 1` generators (each added homomorphism must split a class of the
/// kernel partition), so the `n`-element subuniverses of those products are
/// enumerated. Axiomatic presentations use a finite model search.
pub fn enumerate_members(k: &Quasivariety, n: usize, limits: &Limits) -> Result<Vec<FiniteAlgebra>> {
    limits.check_bound(n)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let sig = k.signature_arc();
    let candidates = match k.body() {
        Body::Generated(gens) => {
            if n == 1 {
                vec![FiniteAlgebra::trivial(sig.clone())]
            } else {
                let mut out = Vec::new();
                for multiset in (0..gens.len()).combinations_with_replacement(n - 1) {
                    let factors: Vec<&FiniteAlgebra> = multiset.iter().map(|&g| &gens[g]).collect();
                    let view = ProductView::new(factors, limits.product_cap)?;
                    for s in subuniverses(&view, &[], n) {
                        if s.len() == n {
                            out.push(restrict(&view, sig, &s));
                        }
                    }
                }
                out
            }
        }
        Body::Axiomatic(axioms) => mace(sig, axioms, n)?,
    };
    let mut seen = HashSet::new();
    Ok(candidates
        .into_iter()
        .filter(|a| seen.insert(canonical_form(a).table_key()))
        .collect())
}

/// Members of every size from 1 to `n`.
pub fn members_up_to(k: &Quasivariety, n: usize, limits: &Limits) -> Result<Vec<FiniteAlgebra>> {
    limits.check_bound(n)?;
    let mut out = Vec::new();
    for m in 1..=n {
        out.extend(enumerate_members(k, m, limits)?);
    }
    Ok(out)
}

const UNSET: Elem = usize::MAX;

struct Cell {
    sym: usize,
    index: usize,
    max_arg: usize,
}

/// Backtracking over operation tables with least-number symmetry breaking:
/// a cell whose arguments are at most `m` may take values up to
/// `max(m, largest value used so far) + 1`. Every quasiequation is checked
/// under all assignments whose evaluation is already defined.
fn mace(sig: &std::sync::Arc<Signature>, axioms: &[Quasiequation], n: usize) -> Result<Vec<FiniteAlgebra>> {
    let compiled = axioms
        .iter()
        .map(|q| {
            let vars = q.vars();
            let premises = q
                .premises
                .iter()
                .map(|e| CompiledEquation::new(e, sig, &vars))
                .collect::<Result<Vec<_>>>()?;
            Ok((premises, CompiledEquation::new(&q.conclusion, sig, &vars)?, vars.len()))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut cells = Vec::new();
    for (sym, s) in sig.symbols().iter().enumerate() {
        for (index, t) in Tuples::new(n, s.arity).enumerate() {
            cells.push(Cell {
                sym,
                index,
                max_arg: t.iter().copied().max().unwrap_or(0),
            });
        }
    }
    cells.sort_by_key(|c| (sig.symbols()[c.sym].arity != 0, c.max_arg, c.sym, c.index));
    let mut tables: Vec<Vec<Elem>> = sig
        .symbols()
        .iter()
        .map(|s| vec![UNSET; n.pow(s.arity as u32)])
        .collect();
    let mut out = Vec::new();
    mace_step(sig, &compiled, n, &cells, 0, None, &mut tables, &mut out);
    Ok(out)
}

type CompiledAxiom = (Vec<CompiledEquation>, CompiledEquation, usize);

#[allow(clippy::too_many_arguments)]
fn mace_step(
    sig: &std::sync::Arc<Signature>,
    axioms: &[CompiledAxiom],
    n: usize,
    cells: &[Cell],
    at: usize,
    max_used: Option<Elem>,
    tables: &mut Vec<Vec<Elem>>,
    out: &mut Vec<FiniteAlgebra>,
) {
    if at == cells.len() {
        out.push(FiniteAlgebra::new(sig.clone(), n, tables.clone()).expect("complete tables"));
        return;
    }
    let cell = &cells[at];
    let introduced = if sig.symbols()[cell.sym].arity == 0 {
        max_used
    } else {
        Some(max_used.map_or(cell.max_arg, |m| m.max(cell.max_arg)))
    };
    let limit = introduced.map_or(0, |m| m + 1).min(n - 1);
    for v in 0..=limit {
        tables[cell.sym][cell.index] = v;
        if consistent(axioms, n, tables) {
            let used = Some(max_used.map_or(v, |m| m.max(v)));
            mace_step(sig, axioms, n, cells, at + 1, used, tables, out);
        }
    }
    tables[cell.sym][cell.index] = UNSET;
}

fn consistent(axioms: &[CompiledAxiom], n: usize, tables: &[Vec<Elem>]) -> bool {
    let lookup = |sym: usize, args: &[Elem]| {
        let v = tables[sym][args.iter().fold(0, |acc, &a| acc * n + a)];
        (v != UNSET).then_some(v)
    };
    axioms.iter().all(|(premises, conclusion, nvars)| {
        Tuples::new(n, *nvars).all(|env| {
            let premises_hold = premises.iter().all(|p| {
                matches!((p.left.eval_partial(&lookup, &env), p.right.eval_partial(&lookup, &env)), (Some(a), Some(b)) if a == b)
            });
            if !premises_hold {
                return true;
            }
            match (
                conclusion.left.eval_partial(&lookup, &env),
                conclusion.right.eval_partial(&lookup, &env),
            ) {
                (Some(a), Some(b)) => a == b,
                _ => true,
            }
        })
    })
}

/// A member of the quasivariety extending a given algebra.
#[derive(Clone, Debug)]
pub(crate) struct ExtensionHit {
    pub algebra: FiniteAlgebra,
    pub embedding: Homomorphism,
}

/// Searches for a member `B` of `k` with `|B| ≤ bound` and an embedding
/// `e: a → B` such that `accept(B, e)`.
///
/// Every such `B` embeds into a product of `bound - 1` generators, so its
/// restriction to `a` is given by `bound - 1` homomorphisms `a → G` that are
/// jointly injective. For every such family the closed supersets of the image
/// of `a` are searched. The result is the least hit by size, then by family,
/// then by its sorted elements.
pub(crate) fn search_extensions(
    k: &Quasivariety,
    a: &FiniteAlgebra,
    bound: usize,
    limits: &Limits,
    accept: &(dyn Fn(&FiniteAlgebra, &Homomorphism) -> bool + Sync),
) -> Result<Option<ExtensionHit>> {
    let visit = |b: FiniteAlgebra, e: Homomorphism| {
        accept(&b, &e).then_some(ExtensionHit {
            algebra: b,
            embedding: e,
        })
    };
    let hits = visit_extensions(k, a, bound, limits, true, &visit)?;
    Ok(hits
        .into_iter()
        .min_by(|x, y| (x.0, x.1, &x.2).cmp(&(y.0, y.1, &y.2)))
        .map(|h| h.3))
}

/// Every value `visit` returns over the extensions `a → B` searched by
/// [`search_extensions`], starting with `a` itself, in a fixed order.
pub(crate) fn all_extensions<T: Send>(
    k: &Quasivariety,
    a: &FiniteAlgebra,
    bound: usize,
    limits: &Limits,
    visit: &(dyn Fn(FiniteAlgebra, Homomorphism) -> Option<T> + Sync),
) -> Result<Vec<T>> {
    let mut out: Vec<T> = Vec::new();
    if a.size() <= bound {
        out.extend(visit(k.normalize(a)?, Homomorphism::identity(a.size())));
    }
    out.extend(
        visit_extensions(k, a, bound, limits, false, visit)?
            .into_iter()
            .map(|h| h.3),
    );
    Ok(out)
}

type Hit<T> = (usize, usize, Vec<Elem>, T);

/// Runs `visit` on the closed supersets of the image of `a` in every product
/// of `bound - 1` generators, stopping at the first value per product when
/// `first_only` is set.
fn visit_extensions<T: Send>(
    k: &Quasivariety,
    a: &FiniteAlgebra,
    bound: usize,
    limits: &Limits,
    first_only: bool,
    visit: &(dyn Fn(FiniteAlgebra, Homomorphism) -> Option<T> + Sync),
) -> Result<Vec<Hit<T>>> {
    limits.check_bound(bound)?;
    let a = k.normalize(a)?;
    let gens = k.generators()?;
    let sig = k.signature_arc();
    if a.size() > bound {
        return Ok(Vec::new());
    }
    if bound == 1 {
        let id = Homomorphism::identity(a.size());
        return Ok(visit(a.clone(), id).map(|t| (1, 0, vec![0], t)).into_iter().collect());
    }
    let mut columns: Vec<(usize, Homomorphism)> = Vec::new();
    for (gi, g) in gens.iter().enumerate() {
        for h in HomSearch::new(&a, g, sig)?.all()? {
            columns.push((gi, h));
        }
    }
    let seeds: Vec<Vec<usize>> = (0..columns.len())
        .combinations_with_replacement(bound - 1)
        .filter(|seed| {
            let mut seen = HashSet::new();
            (0..a.size()).all(|x| seen.insert(seed.iter().map(|&c| columns[c].1.apply(x)).collect::<Vec<_>>()))
        })
        .collect();
    let hits: Vec<Vec<Hit<T>>> = seeds
        .par_iter()
        .enumerate()
        .map(|(si, seed)| -> Result<_> {
            let factors: Vec<&FiniteAlgebra> = seed.iter().map(|&c| &gens[columns[c].0]).collect();
            let view = ProductView::new(factors, limits.product_cap)?;
            let image: Vec<Elem> = (0..a.size())
                .map(|x| {
                    let coords: Vec<Elem> = seed.iter().map(|&c| columns[c].1.apply(x)).collect();
                    view.encode(&coords)
                })
                .collect();
            let mut found = Vec::new();
            for s in subuniverses(&view, &image, bound) {
                let b = restrict(&view, sig, &s);
                let e = Homomorphism::new(
                    image
                        .iter()
                        .map(|v| s.binary_search(v).expect("contains image"))
                        .collect(),
                );
                if let Some(t) = visit(b, e) {
                    found.push((s.len(), si, s, t));
                    if first_only {
                        break;
                    }
                }
            }
            Ok(found)
        })
        .collect::<Result<_>>()?;
    Ok(hits.into_iter().flatten().collect())
}

/// An amalgam of a span `B ← A → C`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Amalgam {
    pub algebra: FiniteAlgebra,
    pub left: Homomorphism,
    pub right: Homomorphism,
}

/// Looks for `D ∈ K` with `|D| ≤ bound` and embeddings `f': B → D`,
/// `g': C → D` with `f' ∘ f = g' ∘ g`, trying members in order of size.
#[allow(clippy::too_many_arguments)]
pub fn bounded_amalgamation(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    c: &FiniteAlgebra,
    f: &Homomorphism,
    g: &Homomorphism,
    k: &Quasivariety,
    bound: usize,
    limits: &Limits,
) -> Result<Option<Amalgam>> {
    limits.check_bound(bound)?;
    let (b, c) = (k.normalize(b)?, k.normalize(c)?);
    if f.map().len() != a.size() || g.map().len() != a.size() {
        return Err(crate::Error::Precondition("span maps must be defined on A".into()));
    }
    let sig = k.signature();
    for m in b.size().max(c.size())..=bound {
        for d in enumerate_members(k, m, limits)? {
            for left in HomSearch::new(&b, &d, sig)?.injective(true).all()? {
                let mut search = HomSearch::new(&c, &d, sig)?.injective(true);
                for x in 0..a.size() {
                    search = search.pin(g.apply(x), left.apply(f.apply(x)));
                }
                if let Some(right) = search.first() {
                    return Ok(Some(Amalgam {
                        algebra: d,
                        left,
                        right,
                    }));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::is_homomorphism;
    use crate::fixtures;
    use crate::quasivariety::{is_isomorphic, is_member};

    #[test]
    fn dl_members() {
        let limits = Limits::default();
        let dl = fixtures::dl();
        assert_eq!(enumerate_members(&dl, 1, &limits).unwrap().len(), 1);
        let two = enumerate_members(&dl, 2, &limits).unwrap();
        assert_eq!(two, vec![fixtures::chain2()]);
        assert_eq!(enumerate_members(&dl, 3, &limits).unwrap(), vec![fixtures::chain3()]);
        let four = enumerate_members(&dl, 4, &limits).unwrap();
        assert_eq!(four.len(), 2);
        assert!(four.iter().any(|a| is_isomorphic(a, &fixtures::chain4())));
        assert!(four.iter().any(|a| is_isomorphic(a, &fixtures::diamond())));
        assert!(enumerate_members(&dl, 9, &limits).is_err());
    }

    /// Every BDL-structure on `n` elements with bot = 0, filtered by membership.
    fn semilattice(t: &[Elem], n: usize) -> bool {
        let op = |a: usize, b: usize| t[a * n + b];
        (0..n).all(|a| {
            op(a, a) == a && (0..n).all(|b| op(a, b) == op(b, a) && (0..n).all(|c| op(op(a, b), c) == op(a, op(b, c))))
        })
    }

    fn brute_force_dl(n: usize) -> usize {
        let k = fixtures::dl();
        let sig = fixtures::bdl();
        let cells = n * n;
        let mut keys = HashSet::new();
        let mut meet = vec![0; cells];
        loop {
            let mut join = vec![0; cells];
            while semilattice(&meet, n) {
                for top in (0..n).filter(|_| semilattice(&join, n)) {
                    let a = FiniteAlgebra::new(sig.clone(), n, vec![meet.clone(), join.clone(), vec![0], vec![top]])
                        .unwrap();
                    if is_member(&a, &k).unwrap() {
                        keys.insert(canonical_form(&a).table_key());
                    }
                }
                if !crate::algebra::advance_tuple(&mut join, n) {
                    break;
                }
            }
            if !crate::algebra::advance_tuple(&mut meet, n) {
                break;
            }
        }
        keys.len()
    }

    #[test]
    fn generated_enumeration_matches_brute_force() {
        let limits = Limits::default();
        for n in 1..=3 {
            assert_eq!(
                enumerate_members(&fixtures::dl(), n, &limits).unwrap().len(),
                brute_force_dl(n),
                "n = {n}"
            );
        }
    }

    #[test]
    fn axiomatic_enumeration_matches_generated() {
        let limits = Limits::default();
        for n in 1..=4 {
            let by_axioms = enumerate_members(&fixtures::dl_axioms(), n, &limits).unwrap();
            let by_gens = enumerate_members(&fixtures::dl(), n, &limits).unwrap();
            assert_eq!(by_axioms.len(), by_gens.len(), "n = {n}");
            for a in &by_axioms {
                assert!(by_gens.iter().any(|b| is_isomorphic(a, b)));
            }
        }
    }

    #[test]
    fn boolean_members_are_powers_of_two() {
        let limits = Limits::default();
        let sizes: Vec<usize> = members_up_to(&fixtures::boolean(), 4, &limits)
            .unwrap()
            .iter()
            .map(FiniteAlgebra::size)
            .collect();
        assert_eq!(sizes, vec![1, 2, 4]);
        let monoids = members_up_to(&fixtures::monoids(), 2, &limits).unwrap();
        assert_eq!(monoids.len(), 3);
    }

    #[test]
    fn amalgamation_examples() {
        let limits = Limits::default();
        let dl = fixtures::dl();
        let (c2, c3) = (fixtures::chain2(), fixtures::chain3());
        let id = Homomorphism::identity(2);
        let am = bounded_amalgamation(&c2, &c2, &c2, &id, &id, &dl, 4, &limits)
            .unwrap()
            .unwrap();
        assert_eq!(am.algebra, c2);
        let f = Homomorphism::new(vec![0, 2]);
        let am = bounded_amalgamation(&c2, &c3, &c3, &f, &f, &dl, 4, &limits)
            .unwrap()
            .unwrap();
        assert!(am.algebra.size() <= 4);
        assert_eq!(f.then(&am.left), f.then(&am.right));
        assert!(is_homomorphism(&c3, &am.algebra, c3.signature(), am.left.map()).unwrap());
        assert!(bounded_amalgamation(&c2, &c3, &c3, &f, &f, &dl, 1, &limits)
            .unwrap()
            .is_none());
    }

    #[test]
    fn extension_search_finds_complement() {
        let limits = Limits::default();
        let dl = fixtures::dl();
        let c3 = fixtures::chain3();
        let has_complement = |b: &FiniteAlgebra, e: &Homomorphism| {
            let m = e.apply(1);
            (0..b.size()).any(|y| b.apply(0, &[m, y]) == 0 && b.apply(1, &[m, y]) == b.size() - 1)
        };
        let hit = search_extensions(&dl, &c3, 4, &limits, &has_complement)
            .unwrap()
            .unwrap();
        assert!(is_isomorphic(&hit.algebra, &fixtures::diamond()));
        assert!(is_homomorphism(&c3, &hit.algebra, c3.signature(), hit.embedding.map()).unwrap());
        assert!(search_extensions(&dl, &c3, 3, &limits, &has_complement)
            .unwrap()
            .is_none());
    }
}

//! Implicit operations defined by primitive positive formulas.
//!
//! An [`ImplicitOpSpec`] is a pp formula `∃z1..zm φ(z1..zm, x1..xn, y)`. On
//! every algebra it induces the partial operation sending `ā` to the unique
//! `b` with `φ(ā, b)`, provided such `b` exists and is unique.

mod definability;

use std::sync::Arc;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{direct_product, Elem, FiniteAlgebra, HomSearch, Homomorphism, Signature, Tuples};
use crate::logic::{parse_pp_formula, CompiledPp, PpFormula};
use crate::quasivariety::{is_member, members_up_to, search_extensions, Quasivariety};
use crate::verdict::{Certificate, Instance, Verdict};
use crate::{Error, Limits, Result};

pub use definability::bounded_pp_definability_search;

/// A pp-defined implicit operation with arguments `x1..xn`, result `y` and
/// witnesses `z1..zm`.
#[derive(Clone, Debug, PartialEq)]
pub struct ImplicitOpSpec {
    name: String,
    arity: usize,
    signature: Arc<Signature>,
    formula: PpFormula,
}

impl ImplicitOpSpec {
    pub fn new(name: impl Into<String>, arity: usize, signature: Arc<Signature>, formula: PpFormula) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidFormula(
                "implicit operations need at least one argument".into(),
            ));
        }
        for (i, z) in formula.bound_vars.iter().enumerate() {
            if *z != format!("z{}", i + 1) {
                return Err(Error::InvalidFormula(format!(
                    "witness variables must be z1..zm in order, found `{}`",
                    z
                )));
            }
        }
        let allowed = free_order(arity);
        if let Some(v) = formula.free_vars().into_iter().find(|v| !allowed.contains(v)) {
            return Err(Error::UnboundVariable(v));
        }
        CompiledPp::new(&formula, &signature, &allowed)?;
        Ok(ImplicitOpSpec {
            name: name.into(),
            arity,
            signature,
            formula,
        })
    }

    pub fn parse(name: impl Into<String>, arity: usize, signature: Arc<Signature>, text: &str) -> Result<Self> {
        let formula = parse_pp_formula(text, &signature)?;
        ImplicitOpSpec::new(name, arity, signature, formula)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn witness_count(&self) -> usize {
        self.formula.bound_vars.len()
    }

    pub fn formula(&self) -> &PpFormula {
        &self.formula
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    /// The same formula under another name.
    pub fn renamed(&self, name: impl Into<String>) -> Self {
        ImplicitOpSpec {
            name: name.into(),
            ..self.clone()
        }
    }

    fn compile(&self, sig: &Signature) -> Result<CompiledPp> {
        CompiledPp::new(&self.formula, sig, &free_order(self.arity))
    }
}

fn free_order(arity: usize) -> Vec<String> {
    let mut vars: Vec<String> = (1..=arity).map(|i| format!("x{}", i)).collect();
    vars.push("y".into());
    vars
}

/// A partial `arity`-ary operation on `{0, .., size-1}`, indexed like a table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartialOperation {
    arity: usize,
    size: usize,
    graph: Vec<Option<Elem>>,
}

impl PartialOperation {
    pub fn new(arity: usize, size: usize, graph: Vec<Option<Elem>>) -> Result<Self> {
        if graph.len() != size.pow(arity as u32) {
            return Err(Error::Precondition(format!(
                "graph of length {} for arity {} on {} elements",
                graph.len(),
                arity,
                size
            )));
        }
        if graph.iter().flatten().any(|&v| v >= size) {
            return Err(Error::Precondition("graph value outside the universe".into()));
        }
        Ok(PartialOperation { arity, size, graph })
    }

    /// The partial operation `f(ā) = values(ā)`.
    pub fn from_fn(arity: usize, size: usize, values: impl Fn(&[Elem]) -> Option<Elem>) -> Result<Self> {
        PartialOperation::new(arity, size, Tuples::new(size, arity).map(|t| values(&t)).collect())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn graph(&self) -> &[Option<Elem>] {
        &self.graph
    }

    pub fn get(&self, tuple: &[Elem]) -> Option<Elem> {
        self.graph[crate::algebra::encode_tuple(tuple, self.size)]
    }

    pub fn is_total(&self) -> bool {
        self.graph.iter().all(Option::is_some)
    }

    /// Defined tuples with their values, in lexicographic order.
    pub fn domain(&self) -> impl Iterator<Item = (Vec<Elem>, Elem)> + '_ {
        Tuples::new(self.size, self.arity)
            .zip(&self.graph)
            .filter_map(|(t, v)| v.map(|v| (t, v)))
    }

    /// The first tuple outside the domain.
    pub fn first_undefined(&self) -> Option<Vec<Elem>> {
        Tuples::new(self.size, self.arity)
            .zip(&self.graph)
            .find(|(_, v)| v.is_none())
            .map(|(t, _)| t)
    }
}

/// Two distinct values satisfy the defining formula at one tuple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FunctionalityViolation {
    pub tuple: Vec<Elem>,
    pub first: Elem,
    pub second: Elem,
}

/// `f^A`: the partial operation induced on `algebra`, which must interpret
/// every symbol of the formula.
pub fn induced_partial_op(
    algebra: &FiniteAlgebra,
    spec: &ImplicitOpSpec,
) -> Result<std::result::Result<PartialOperation, FunctionalityViolation>> {
    let compiled = spec.compile(algebra.signature())?;
    let n = algebra.size();
    let mut graph = Vec::with_capacity(n.pow(spec.arity as u32));
    let mut free = vec![0; spec.arity + 1];
    for t in Tuples::new(n, spec.arity) {
        free[..spec.arity].copy_from_slice(&t);
        let mut value = None;
        for b in 0..n {
            free[spec.arity] = b;
            if compiled.holds(algebra, &free) {
                if let Some(first) = value {
                    return Ok(Err(FunctionalityViolation {
                        tuple: t,
                        first,
                        second: b,
                    }));
                }
                value = Some(b);
            }
        }
        graph.push(value);
    }
    Ok(Ok(PartialOperation {
        arity: spec.arity,
        size: n,
        graph,
    }))
}

/// Like [`induced_partial_op`], with functionality violations as errors.
pub fn induced_or_error(algebra: &FiniteAlgebra, spec: &ImplicitOpSpec) -> Result<PartialOperation> {
    induced_partial_op(algebra, spec)?.map_err(|v| Error::NotFunctional {
        op: spec.name.clone(),
        tuple: v.tuple,
        first: v.first,
        second: v.second,
    })
}

/// A family of partial operations, one on each algebra of a class.
pub trait PartialOpFamily: Sync {
    fn name(&self) -> &str;
    fn arity(&self) -> usize;
    fn on(&self, algebra: &FiniteAlgebra) -> Result<PartialOperation>;
}

impl PartialOpFamily for ImplicitOpSpec {
    fn name(&self) -> &str {
        &self.name
    }

    fn arity(&self) -> usize {
        self.arity
    }

    fn on(&self, algebra: &FiniteAlgebra) -> Result<PartialOperation> {
        induced_or_error(algebra, self)
    }
}

/// A family given by an arbitrary rule, used for operations that are not
/// (or not known to be) pp-definable.
pub struct GraphFamily<F> {
    name: String,
    arity: usize,
    rule: F,
}

impl<F: Fn(&FiniteAlgebra) -> PartialOperation + Sync> GraphFamily<F> {
    pub fn new(name: impl Into<String>, arity: usize, rule: F) -> Self {
        GraphFamily {
            name: name.into(),
            arity,
            rule,
        }
    }
}

impl<F: Fn(&FiniteAlgebra) -> PartialOperation + Sync> PartialOpFamily for GraphFamily<F> {
    fn name(&self) -> &str {
        &self.name
    }

    fn arity(&self) -> usize {
        self.arity
    }

    fn on(&self, algebra: &FiniteAlgebra) -> Result<PartialOperation> {
        let op = (self.rule)(algebra);
        if op.arity != self.arity || op.size != algebra.size() {
            return Err(Error::Precondition(format!(
                "graph of `{}` has the wrong shape",
                self.name
            )));
        }
        Ok(op)
    }
}

/// Products of between 1 and `factors` generators, one per multiset, in
/// order of the number of factors.
pub fn generator_products(k: &Quasivariety, factors: usize, limits: &Limits) -> Result<Vec<FiniteAlgebra>> {
    let gens = k.generators()?;
    let mut out = Vec::new();
    for m in 1..=factors {
        for multiset in (0..gens.len()).combinations_with_replacement(m) {
            let parts: Vec<&FiniteAlgebra> = multiset.iter().map(|&g| &gens[g]).collect();
            let size = parts.iter().try_fold(1usize, |acc, p| acc.checked_mul(p.size()));
            match size {
                Some(s) if s <= limits.product_cap => out.push(direct_product(&parts)?),
                _ => {
                    return Err(Error::ProductCapExceeded {
                        size: size.unwrap_or(usize::MAX),
                        cap: limits.product_cap,
                    })
                }
            }
        }
    }
    Ok(out)
}

/// The first tuple at which `h` fails to commute with the partial operations
/// (`ā ∈ dom f^A` must give `h(ā) ∈ dom f^B` and `h(f(ā)) = f(h(ā))`).
pub fn preservation_failure(fa: &PartialOperation, fb: &PartialOperation, h: &Homomorphism) -> Option<Vec<Elem>> {
    fa.domain().find_map(|(t, v)| {
        let image: Vec<Elem> = t.iter().map(|&a| h.apply(a)).collect();
        (fb.get(&image) != Some(h.apply(v))).then_some(t)
    })
}

/// Checks that every homomorphism between products of at most `factors`
/// generators preserves the family.
pub fn check_preservation(
    family: &dyn PartialOpFamily,
    k: &Quasivariety,
    factors: usize,
    limits: &Limits,
) -> Result<Verdict> {
    let algebras = generator_products(k, factors, limits)?;
    let ops = algebras.iter().map(|a| family.on(a)).collect::<Result<Vec<_>>>()?;
    let sig = k.signature();
    let pairs: Vec<(usize, usize)> = (0..algebras.len())
        .flat_map(|i| (0..algebras.len()).map(move |j| (i, j)))
        .collect();
    let instances = pairs
        .par_iter()
        .map(|&(i, j)| -> Result<Instance> {
            let (a, b) = (&algebras[i], &algebras[j]);
            let mut failure = None;
            let mut count = 0;
            HomSearch::new(a, b, sig)?.for_each(|map| {
                count += 1;
                let h = Homomorphism::new(map.to_vec());
                match preservation_failure(&ops[i], &ops[j], &h) {
                    Some(t) => {
                        failure = Some((h, t));
                        false
                    }
                    None => true,
                }
            });
            let name = format!("P{} -> P{}", i, j);
            Ok(match failure {
                Some((map, tuple)) => Instance::fails(
                    name,
                    Certificate::NotPreserved {
                        source: a.clone(),
                        target: b.clone(),
                        map,
                        symbol: family.name().to_string(),
                        tuple,
                    },
                ),
                None => Instance::holds(name).with_detail("homomorphisms", count),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut verdict = Verdict::new(format!("homomorphisms preserve {}", family.name())).with_bound("factors", factors);
    for (i, a) in algebras.iter().enumerate() {
        verdict.note(format!("P{}: product of size {}", i, a.size()));
    }
    for instance in instances {
        verdict.push(instance);
    }
    Ok(verdict)
}

/// An extension `B ⊇ A` in the class together with `f^B`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtensionWitness {
    pub algebra: FiniteAlgebra,
    pub embedding: Homomorphism,
    pub operation: PartialOperation,
}

fn member_precondition(algebra: &FiniteAlgebra, k: &Quasivariety) -> Result<FiniteAlgebra> {
    let a = k.normalize(algebra)?;
    if !is_member(&a, k)? {
        return Err(Error::Precondition(format!(
            "algebra is not a member of `{}`",
            k.name()
        )));
    }
    Ok(a)
}

fn extension_search(
    spec: &ImplicitOpSpec,
    k: &Quasivariety,
    a: FiniteAlgebra,
    bound: usize,
    limits: &Limits,
    good: &(dyn Fn(&PartialOperation, &Homomorphism) -> bool + Sync),
) -> Result<Option<ExtensionWitness>> {
    let fa = induced_or_error(&a, spec)?;
    let id = Homomorphism::identity(a.size());
    if good(&fa, &id) {
        return Ok((a.size() <= bound).then_some(ExtensionWitness {
            algebra: a,
            embedding: id,
            operation: fa,
        }));
    }
    let accept = |b: &FiniteAlgebra, e: &Homomorphism| {
        induced_partial_op(b, spec)
            .ok()
            .and_then(|r| r.ok())
            .is_some_and(|fb| good(&fb, e))
    };
    Ok(search_extensions(k, &a, bound, limits, &accept)?.map(|hit| {
        let operation = induced_or_error(&hit.algebra, spec).expect("accepted extensions are functional");
        ExtensionWitness {
            algebra: hit.algebra,
            embedding: hit.embedding,
            operation,
        }
    }))
}

/// Searches for `B ∈ K` with `|B| ≤ bound` and an embedding `A → B` whose
/// image of `tuple` lies in the domain of `f^B`. `None` means nothing was
/// found within the bound.
pub fn check_extendable(
    spec: &ImplicitOpSpec,
    k: &Quasivariety,
    algebra: &FiniteAlgebra,
    tuple: &[Elem],
    bound: usize,
    limits: &Limits,
) -> Result<Option<ExtensionWitness>> {
    limits.check_bound(bound)?;
    let a = member_precondition(algebra, k)?;
    if tuple.len() != spec.arity || tuple.iter().any(|&e| e >= a.size()) {
        return Err(Error::Precondition(format!(
            "`{}` expects {} argument(s) in the universe",
            spec.name, spec.arity
        )));
    }
    let good = |f: &PartialOperation, e: &Homomorphism| {
        let image: Vec<Elem> = tuple.iter().map(|&x| e.apply(x)).collect();
        f.get(&image).is_some()
    };
    extension_search(spec, k, a, bound, limits, &good)
}

/// Searches for `B ∈ K` with `|B| ≤ bound` extending `A` on which `f^B` is total.
pub fn check_totalizable(
    spec: &ImplicitOpSpec,
    k: &Quasivariety,
    algebra: &FiniteAlgebra,
    bound: usize,
    limits: &Limits,
) -> Result<Option<ExtensionWitness>> {
    limits.check_bound(bound)?;
    let a = member_precondition(algebra, k)?;
    extension_search(spec, k, a, bound, limits, &|f, _| f.is_total())
}

/// Runs [`check_totalizable`] for every member of size at most `bound`.
pub fn check_totalizable_members(
    spec: &ImplicitOpSpec,
    k: &Quasivariety,
    bound: usize,
    ext_bound: usize,
    limits: &Limits,
) -> Result<Verdict> {
    limits.check_bound(ext_bound)?;
    let members = members_up_to(k, bound, limits)?;
    let mut verdict = Verdict::new(format!("{} is totalizable in {}", spec.name, k.name()))
        .with_bound("max_size", bound)
        .with_bound("ext_bound", ext_bound);
    let results = members
        .par_iter()
        .map(|a| check_totalizable(spec, k, a, ext_bound, limits))
        .collect::<Result<Vec<_>>>()?;
    for (i, (a, r)) in members.iter().zip(results).enumerate() {
        let name = format!("A{} (size {})", i, a.size());
        verdict.push(match r {
            Some(w) => Instance::holds(name).with_certificate(Certificate::Extension {
                algebra: a.clone(),
                extension: w.algebra,
                embedding: w.embedding,
            }),
            None => {
                let f = induced_or_error(a, spec)?;
                let tuple = f.first_undefined().unwrap_or_default();
                Instance::unknown(name).with_certificate(Certificate::NoExtension {
                    algebra: a.clone(),
                    op: spec.name.clone(),
                    tuple,
                })
            }
        });
    }
    Ok(verdict)
}

/// Checks that at every defined tuple of every member of size at most
/// `bound` the witness tuple is unique.
pub fn check_unique_witnesses(
    spec: &ImplicitOpSpec,
    k: &Quasivariety,
    bound: usize,
    limits: &Limits,
) -> Result<Verdict> {
    let members = members_up_to(k, bound, limits)?;
    let mut verdict =
        Verdict::new(format!("{} has unique witnesses in {}", spec.name, k.name())).with_bound("max_size", bound);
    if spec.witness_count() == 0 {
        verdict.note("no witness variables: uniqueness is vacuous");
    }
    for (i, a) in members.iter().enumerate() {
        let name = format!("A{} (size {})", i, a.size());
        let f = induced_or_error(a, spec)?;
        let compiled = spec.compile(a.signature())?;
        let mut failure = None;
        for (t, v) in f.domain() {
            let mut free = t.clone();
            free.push(v);
            let mut found: Vec<Vec<Elem>> = Vec::new();
            compiled.for_each_witness(a, &free, |w| {
                found.push(w.to_vec());
                found.len() < 2
            });
            if found.len() == 2 {
                failure = Some(Certificate::Witnesses {
                    algebra: a.clone(),
                    op: spec.name.clone(),
                    tuple: t,
                    value: v,
                    second: found.pop().unwrap(),
                    first: found.pop().unwrap(),
                });
                break;
            }
        }
        verdict.push(match failure {
            Some(c) => Instance::fails(name, c),
            None => Instance::holds(name),
        });
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::reduct;
    use crate::fixtures;
    use crate::quasivariety::is_isomorphic;

    /// All `b` with `φ(ā, b)` by direct evaluation of the formula under every
    /// assignment, without the compiled search.
    fn brute_values(a: &FiniteAlgebra, spec: &ImplicitOpSpec, tuple: &[Elem]) -> Vec<Elem> {
        use crate::logic::{eval_term, Assignment};
        let m = spec.witness_count();
        (0..a.size())
            .filter(|&b| {
                Tuples::new(a.size(), m).any(|z| {
                    let mut env = Assignment::new();
                    for (i, &x) in tuple.iter().enumerate() {
                        env.insert(format!("x{}", i + 1), x);
                    }
                    env.insert("y".into(), b);
                    for (i, &w) in z.iter().enumerate() {
                        env.insert(format!("z{}", i + 1), w);
                    }
                    spec.formula()
                        .body
                        .iter()
                        .all(|e| eval_term(a, &e.left, &env).unwrap() == eval_term(a, &e.right, &env).unwrap())
                })
            })
            .collect()
    }

    #[test]
    fn induced_examples_match_brute_force() {
        let cases = [
            (fixtures::chain3(), fixtures::compl()),
            (
                reduct(&fixtures::four_ba(), &fixtures::bdl()).unwrap(),
                fixtures::compl(),
            ),
            (fixtures::min_monoid(), fixtures::inv()),
            (fixtures::z2_monoid(), fixtures::inv()),
            (fixtures::diamond(), fixtures::jcp()),
        ];
        for (a, s) in cases {
            let f = induced_partial_op(&a, &s).unwrap().unwrap();
            for t in Tuples::new(a.size(), s.arity()) {
                let values = brute_values(&a, &s, &t);
                assert!(values.len() <= 1);
                assert_eq!(f.get(&t), values.first().copied());
            }
        }
        let c3 = induced_partial_op(&fixtures::chain3(), &fixtures::compl())
            .unwrap()
            .unwrap();
        assert_eq!(c3.graph(), &[Some(2), None, Some(0)]);
        let d = induced_partial_op(&fixtures::diamond(), &fixtures::compl())
            .unwrap()
            .unwrap();
        assert_eq!(d.graph(), &[Some(3), Some(2), Some(1), Some(0)]);
        let m = induced_partial_op(&fixtures::min_monoid(), &fixtures::inv())
            .unwrap()
            .unwrap();
        assert_eq!(m.graph(), &[None, Some(1)]);
    }

    #[test]
    fn functionality_violation_is_reported() {
        let any = ImplicitOpSpec::parse("any", 1, fixtures::bdl(), "exists [] . meet(x1, y) = meet(x1, y)").unwrap();
        let v = induced_partial_op(&fixtures::chain2(), &any).unwrap().unwrap_err();
        assert_eq!((v.tuple, v.first, v.second), (vec![0], 0, 1));
        assert!(matches!(
            induced_or_error(&fixtures::chain2(), &any),
            Err(Error::NotFunctional { .. })
        ));
    }

    #[test]
    fn spec_validation() {
        let sig = fixtures::bdl();
        assert!(ImplicitOpSpec::parse("f", 0, sig.clone(), "exists [] . y = bot").is_err());
        assert!(ImplicitOpSpec::parse("f", 1, sig.clone(), "exists [w] . y = w").is_err());
        assert!(ImplicitOpSpec::parse("f", 1, sig.clone(), "exists [z2] . y = z2").is_err());
        assert!(ImplicitOpSpec::parse("f", 1, sig.clone(), "exists [] . y = x2").is_err());
        assert!(ImplicitOpSpec::parse("f", 1, sig, "exists [] . y = not(x1)").is_err());
        assert_eq!(fixtures::padded_compl().witness_count(), 1);
    }

    #[test]
    fn preservation_examples() {
        let limits = Limits::default();
        assert!(check_preservation(&fixtures::compl(), &fixtures::dl(), 2, &limits)
            .unwrap()
            .holds());
        assert!(check_preservation(&fixtures::inv(), &fixtures::monoids(), 2, &limits)
            .unwrap()
            .holds());
    }

    /// Least upper bounds in a meet-semilattice, read off the order.
    fn lub() -> GraphFamily<impl Fn(&FiniteAlgebra) -> PartialOperation + Sync> {
        GraphFamily::new("lub", 2, |a: &FiniteAlgebra| {
            let n = a.size();
            let leq = |x: usize, y: usize| a.apply(0, &[x, y]) == x;
            PartialOperation::from_fn(2, n, |t| {
                let ub: Vec<usize> = (0..n).filter(|&u| leq(t[0], u) && leq(t[1], u)).collect();
                ub.iter().copied().find(|&u| ub.iter().all(|&v| leq(u, v)))
            })
            .unwrap()
        })
    }

    #[test]
    fn lub_is_not_preserved() {
        let limits = Limits::default();
        let verdict = check_preservation(&lub(), &fixtures::vee_q(), 2, &limits).unwrap();
        let Some(Certificate::NotPreserved {
            source,
            target,
            map,
            tuple,
            ..
        }) = verdict.first_failure().and_then(|i| i.certificate.clone())
        else {
            panic!("expected a preservation failure");
        };
        assert!(crate::algebra::is_homomorphism(&source, &target, source.signature(), map.map()).unwrap());
        let (fa, fb) = (lub().on(&source).unwrap(), lub().on(&target).unwrap());
        assert_eq!(preservation_failure(&fa, &fb, &map), Some(tuple));

        let v = fixtures::vee();
        let square = direct_product(&[&v, &v]).unwrap();
        let h = Homomorphism::new((0..9).map(|x| usize::from(x == 4)).collect());
        assert!(crate::algebra::is_homomorphism(&square, &v, v.signature(), h.map()).unwrap());
        let fs = lub().on(&square).unwrap();
        assert_eq!(fs.get(&[3, 1]), Some(4));
        assert!(preservation_failure(&fs, &lub().on(&v).unwrap(), &h).is_some());
    }

    #[test]
    fn extendability_examples() {
        let limits = Limits::default();
        let (dl, c3, compl) = (fixtures::dl(), fixtures::chain3(), fixtures::compl());
        let w = check_extendable(&compl, &dl, &c3, &[1], 4, &limits).unwrap().unwrap();
        assert!(is_isomorphic(&w.algebra, &fixtures::diamond()));
        let m = w.embedding.apply(1);
        assert!(m != 0 && m != 3 && w.operation.get(&[m]).is_some());
        assert_eq!(check_extendable(&compl, &dl, &c3, &[1], 3, &limits).unwrap(), None);
        let w = check_extendable(&compl, &dl, &c3, &[0], 1, &limits).unwrap();
        assert_eq!(w, None);
        let w = check_extendable(&compl, &dl, &c3, &[0], 3, &limits).unwrap().unwrap();
        assert_eq!((w.algebra, w.embedding), (c3.clone(), Homomorphism::identity(3)));
    }

    #[test]
    fn extension_agrees_with_original_graph() {
        let limits = Limits::default();
        let (dl, compl) = (fixtures::dl(), fixtures::compl());
        for a in members_up_to(&dl, 3, &limits).unwrap() {
            let fa = induced_or_error(&a, &compl).unwrap();
            let w = check_totalizable(&compl, &dl, &a, 4, &limits).unwrap().unwrap();
            assert!(w.operation.is_total());
            assert_eq!(induced_or_error(&w.algebra, &compl).unwrap(), w.operation);
            assert!(preservation_failure(&fa, &w.operation, &w.embedding).is_none());
        }
    }

    #[test]
    fn totalizable_examples() {
        let limits = Limits::default();
        let (dl, compl) = (fixtures::dl(), fixtures::compl());
        let w = check_totalizable(&compl, &dl, &fixtures::chain3(), 4, &limits)
            .unwrap()
            .unwrap();
        assert!(is_isomorphic(&w.algebra, &fixtures::diamond()));
        let w = check_totalizable(&compl, &dl, &fixtures::chain2(), 4, &limits)
            .unwrap()
            .unwrap();
        assert_eq!(w.algebra, fixtures::chain2());
        assert_eq!(
            check_totalizable(&compl, &dl, &fixtures::chain2(), 1, &limits).unwrap(),
            None
        );
        assert!(check_totalizable(&compl, &dl, &fixtures::small_bdl_algebras()[3], 4, &limits).is_err());
    }

    #[test]
    fn unique_witness_examples() {
        let limits = Limits::default();
        assert!(check_unique_witnesses(&fixtures::compl(), &fixtures::dl(), 4, &limits)
            .unwrap()
            .holds());
        assert!(
            check_unique_witnesses(&fixtures::inv(), &fixtures::monoids(), 3, &limits)
                .unwrap()
                .holds()
        );
        let v = check_unique_witnesses(&fixtures::padded_compl(), &fixtures::dl(), 2, &limits).unwrap();
        let Some(Certificate::Witnesses {
            algebra, first, second, ..
        }) = v.first_failure().and_then(|i| i.certificate.clone())
        else {
            panic!("expected two witnesses");
        };
        assert!(algebra.size() >= 2);
        assert_ne!(first, second);
    }

    #[test]
    fn unique_witnesses_monotone_in_bound() {
        let limits = Limits::default();
        let s = fixtures::jcp();
        let verdicts: Vec<bool> = (1..=4)
            .map(|b| check_unique_witnesses(&s, &fixtures::dl(), b, &limits).unwrap().holds())
            .collect();
        for w in verdicts.windows(2) {
            assert!(w[0] || !w[1]);
        }
    }
}

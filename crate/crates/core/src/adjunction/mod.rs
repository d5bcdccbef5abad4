//! Expansions of quasivarieties and the free extension adjunction `F ⊣ U`.
//!
//! `U` forgets the operations of the expanded class; `F(A)` is the
//! subalgebra of `∏ G` over all pairs (generator `G` of the expanded class,
//! base-language homomorphism `h: A → G`) generated by the tuples `(h(a))`.
//! The unit sends `a` to its tuple, and the counit is the homomorphism
//! extending the identity on generators.

use std::collections::HashSet;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{
    generated_subalgebra, is_homomorphism, reduct, subalgebra, subuniverses, Elem, FiniteAlgebra, GeneratedAlgebra,
    HomSearch, Homomorphism, Signature, Tuples,
};
use crate::implicit::{induced_or_error, ImplicitOpSpec, PartialOpFamily, PartialOperation};
use crate::quasivariety::{
    all_extensions, canonical_form, members_up_to, membership, search_extensions, Membership, Quasivariety,
};
use crate::verdict::{Certificate, Instance, Verdict};
use crate::{Error, Limits, Result};

/// `M` expands `K`: the signature of `K` is contained in that of `M`.
#[derive(Clone, Debug)]
pub struct ExpansionSpec {
    name: String,
    base: Quasivariety,
    expanded: Quasivariety,
}

impl ExpansionSpec {
    pub fn new(name: impl Into<String>, base: Quasivariety, expanded: Quasivariety) -> Result<Self> {
        if !base.signature().is_subsignature_of(expanded.signature()) {
            return Err(Error::SignatureMismatch(format!(
                "`{}` is not contained in the signature of `{}`",
                base.signature().name(),
                expanded.name()
            )));
        }
        Ok(ExpansionSpec {
            name: name.into(),
            base,
            expanded,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base(&self) -> &Quasivariety {
        &self.base
    }

    pub fn expanded(&self) -> &Quasivariety {
        &self.expanded
    }

    /// `U(B)`: the base-language reduct.
    pub fn forget(&self, b: &FiniteAlgebra) -> Result<FiniteAlgebra> {
        reduct(b, self.base.signature_arc())
    }
}

/// `K` expanded by a family of pp-defined operations, one new symbol each.
#[derive(Clone, Debug)]
pub struct PpExpansionSpec {
    name: String,
    base: Quasivariety,
    ops: Vec<(String, ImplicitOpSpec)>,
    signature: Arc<Signature>,
}

impl PpExpansionSpec {
    pub fn new(name: impl Into<String>, base: Quasivariety, ops: Vec<(String, ImplicitOpSpec)>) -> Result<Self> {
        let name = name.into();
        for (symbol, op) in &ops {
            if !op.signature().is_subsignature_of(base.signature()) {
                return Err(Error::SignatureMismatch(format!(
                    "`{}` is defined over `{}`, not over the base language",
                    op.name(),
                    op.signature().name()
                )));
            }
            if base.signature().index_of(symbol).is_some() {
                return Err(Error::DuplicateSymbol(symbol.clone()));
            }
        }
        let signature = Arc::new(
            base.signature()
                .extended(name.clone(), ops.iter().map(|(s, op)| (s.clone(), op.arity())))?,
        );
        Ok(PpExpansionSpec {
            name,
            base,
            ops,
            signature,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base(&self) -> &Quasivariety {
        &self.base
    }

    pub fn ops(&self) -> &[(String, ImplicitOpSpec)] {
        &self.ops
    }

    /// `L_F`: the base language plus one symbol per operation.
    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }
}

/// Checks that the reduct of every member of `M` of size at most `bound` is in `K`.
pub fn check_expansion(e: &ExpansionSpec, bound: usize, limits: &Limits) -> Result<Verdict> {
    let members = members_up_to(&e.expanded, bound, limits)?;
    let mut verdict = Verdict::new(format!("reducts of {} lie in {}", e.expanded.name(), e.base.name()))
        .with_bound("max_size", bound);
    for (i, b) in members.iter().enumerate() {
        let name = format!("B{} (size {})", i, b.size());
        let r = e.forget(b)?;
        let m = membership(&r, &e.base)?;
        verdict.push(if m.member {
            Instance::holds(name)
        } else {
            Instance::fails(
                name,
                Certificate::NotMember {
                    algebra: r,
                    presentation: e.base.name().to_string(),
                    certificate: m.certificate,
                },
            )
        });
    }
    Ok(verdict)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Expansion {
    /// `A[L_F]`.
    Expanded { algebra: FiniteAlgebra },
    /// The first operation and tuple outside its domain.
    UndefinedAt { symbol: String, tuple: Vec<Elem> },
}

fn induced_ops(a: &FiniteAlgebra, p: &PpExpansionSpec) -> Result<Vec<PartialOperation>> {
    p.ops.iter().map(|(_, op)| induced_or_error(a, op)).collect()
}

/// `A[L_F]` when every operation of the family is total on `A`.
pub fn expand_algebra(algebra: &FiniteAlgebra, p: &PpExpansionSpec) -> Result<Expansion> {
    let a = p.base.normalize(algebra)?;
    if !membership(&a, &p.base)?.member {
        return Err(Error::Precondition(format!(
            "algebra is not a member of `{}`",
            p.base.name()
        )));
    }
    expand_unchecked(&a, p)
}

fn expand_unchecked(a: &FiniteAlgebra, p: &PpExpansionSpec) -> Result<Expansion> {
    let ops = induced_ops(a, p)?;
    let mut tables = Vec::with_capacity(ops.len());
    for ((symbol, _), f) in p.ops.iter().zip(&ops) {
        if let Some(tuple) = f.first_undefined() {
            return Ok(Expansion::UndefinedAt {
                symbol: symbol.clone(),
                tuple,
            });
        }
        tables.push(f.graph().iter().map(|v| v.expect("total")).collect());
    }
    Ok(Expansion::Expanded {
        algebra: a.expanded(p.signature.clone(), tables)?,
    })
}

/// Why an algebra over `L_F` is not in the pp expansion.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum NonMembership {
    /// The base reduct is not in `K`.
    ReductNotInBase { certificate: Membership },
    /// A table entry differs from the value the defining formula forces on
    /// the reduct. Embeddings preserve pp formulas, so no extension can fix it.
    DisagreesWithInduced {
        symbol: String,
        tuple: Vec<Elem>,
        table_value: Elem,
        induced_value: Elem,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PpMembership {
    /// In `K[L_F]`.
    InClass,
    /// In `S(K[L_F])`: embeds into the expanded member `extension`.
    InClosure {
        extension: FiniteAlgebra,
        embedding: Homomorphism,
    },
    No(NonMembership),
    UnknownWithinBound,
}

/// The first tuple where an `L_F` table differs from the induced operation:
/// `(symbol index, tuple, table value, induced value)`.
pub(crate) fn first_mismatch(
    b: &FiniteAlgebra,
    reduct_ops: &[PartialOperation],
    p: &PpExpansionSpec,
) -> Option<(usize, Vec<Elem>, Elem, Option<Elem>)> {
    for (i, ((symbol, op), f)) in p.ops.iter().zip(reduct_ops).enumerate() {
        let sym = b.signature().index_of(symbol).expect("L_F symbol");
        for t in Tuples::new(b.size(), op.arity()) {
            let table = b.apply(sym, &t);
            let induced = f.get(&t);
            if induced != Some(table) {
                return Some((i, t, table, induced));
            }
        }
    }
    None
}

/// Decides membership of an `L_F`-algebra in `K[L_F]` and searches for an
/// expanded extension (of size at most `bound`) when it is not.
pub fn pp_expansion_membership(
    b: &FiniteAlgebra,
    p: &PpExpansionSpec,
    bound: usize,
    limits: &Limits,
) -> Result<PpMembership> {
    limits.check_bound(bound)?;
    let b = normalize_to(b, &p.signature)?;
    let r = reduct(&b, p.base.signature_arc())?;
    let m = membership(&r, &p.base)?;
    if !m.member {
        return Ok(PpMembership::No(NonMembership::ReductNotInBase { certificate: m }));
    }
    let ops = induced_ops(&r, p)?;
    let Some((i, tuple, table_value, induced)) = first_mismatch(&b, &ops, p) else {
        return Ok(PpMembership::InClass);
    };
    if let Some(induced_value) = induced {
        return Ok(PpMembership::No(NonMembership::DisagreesWithInduced {
            symbol: p.ops[i].0.clone(),
            tuple,
            table_value,
            induced_value,
        }));
    }
    let accept = |c: &FiniteAlgebra, e: &Homomorphism| {
        let Ok(fs) = induced_ops(c, p) else {
            return false;
        };
        p.ops.iter().zip(&fs).all(|((symbol, op), f)| {
            let sym = b.signature().index_of(symbol).expect("L_F symbol");
            f.is_total()
                && Tuples::new(b.size(), op.arity()).all(|t| {
                    let image: Vec<Elem> = t.iter().map(|&x| e.apply(x)).collect();
                    f.get(&image) == Some(e.apply(b.apply(sym, &t)))
                })
        })
    };
    match search_extensions(&p.base, &r, bound, limits, &accept)? {
        Some(hit) => match expand_unchecked(&hit.algebra, p)? {
            Expansion::Expanded { algebra } => Ok(PpMembership::InClosure {
                extension: algebra,
                embedding: hit.embedding,
            }),
            Expansion::UndefinedAt { .. } => unreachable!("accepted extensions are total"),
        },
        None => Ok(PpMembership::UnknownWithinBound),
    }
}

fn normalize_to(a: &FiniteAlgebra, sig: &Arc<Signature>) -> Result<FiniteAlgebra> {
    if *a.signature() != **sig {
        return Err(Error::SignatureMismatch(format!(
            "algebra over `{}`, expected `{}`",
            a.signature().name(),
            sig.name()
        )));
    }
    a.with_signature(sig.clone())
}

/// An algebra of `S(K[L_F])` found inside an expanded member.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosureMember {
    pub algebra: FiniteAlgebra,
    pub extension: FiniteAlgebra,
    pub embedding: Homomorphism,
}

/// Members of `S(K[L_F])` of size at most `bound` that embed into `C[L_F]`
/// for some `C ∈ K` with `|C| ≤ ext_bound`, one per isomorphism type.
///
/// For a generated `K` every base member `A` of size at most `bound` is
/// extended to each `C` on which the family is total, and kept when its image
/// is closed under the expanded operations. Values defined on `A` are
/// preserved by every embedding, so an `A` that is already expandable needs
/// no search. Otherwise the subalgebras of the
/// expandable members up to `ext_bound` are listed.
pub fn pp_closure_members(
    p: &PpExpansionSpec,
    bound: usize,
    ext_bound: usize,
    limits: &Limits,
) -> Result<Vec<ClosureMember>> {
    limits.check_bound(bound)?;
    limits.check_bound(ext_bound)?;
    let found = if p.base.generators().is_ok() {
        closure_members_by_extension(p, bound, ext_bound, limits)?
    } else {
        closure_members_by_enumeration(p, bound, ext_bound, limits)?
    };
    let mut seen = HashSet::new();
    Ok(found
        .into_iter()
        .filter(|m| seen.insert(canonical_form(&m.algebra).table_key()))
        .collect())
}

fn closure_members_by_extension(
    p: &PpExpansionSpec,
    bound: usize,
    ext_bound: usize,
    limits: &Limits,
) -> Result<Vec<ClosureMember>> {
    let visit = |c: FiniteAlgebra, e: Homomorphism| -> Option<ClosureMember> {
        let Ok(Expansion::Expanded { algebra: full }) = expand_unchecked(&c, p) else {
            return None;
        };
        let mut image = e.map().to_vec();
        image.sort_unstable();
        if generated_subalgebra(&full, &image) != image {
            return None;
        }
        let (b, incl) = subalgebra(&full, &image).ok()?;
        Some(ClosureMember {
            algebra: b,
            extension: full,
            embedding: incl,
        })
    };
    let mut out = Vec::new();
    for a in members_up_to(&p.base, bound, limits)? {
        if let Expansion::Expanded { algebra } = expand_unchecked(&a, p)? {
            let embedding = Homomorphism::identity(a.size());
            out.push(ClosureMember {
                extension: algebra.clone(),
                algebra,
                embedding,
            });
            continue;
        }
        let mut seen = HashSet::new();
        for m in all_extensions(&p.base, &a, ext_bound, limits, &visit)? {
            if seen.insert(canonical_form(&m.algebra).table_key()) {
                out.push(m);
            }
        }
    }
    Ok(out)
}

fn closure_members_by_enumeration(
    p: &PpExpansionSpec,
    bound: usize,
    ext_bound: usize,
    limits: &Limits,
) -> Result<Vec<ClosureMember>> {
    let candidates = members_up_to(&p.base, ext_bound, limits)?;
    let expanded = candidates
        .par_iter()
        .map(|c| expand_unchecked(c, p))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for e in expanded {
        let Expansion::Expanded { algebra: c } = e else {
            continue;
        };
        for s in subuniverses(&c, &[], bound) {
            let (b, incl) = subalgebra(&c, &s)?;
            out.push(ClosureMember {
                algebra: b,
                extension: c.clone(),
                embedding: incl,
            });
        }
    }
    Ok(out)
}

/// `F(A)` with the unit `η_A` and the index of the product it lives in.
#[derive(Clone, Debug)]
pub struct FreeExtension {
    source: FiniteAlgebra,
    index: Vec<(usize, Homomorphism)>,
    generated: GeneratedAlgebra,
    unit: Homomorphism,
}

impl FreeExtension {
    pub fn algebra(&self) -> &FiniteAlgebra {
        self.generated.algebra()
    }

    /// `η_A`.
    pub fn unit(&self) -> &Homomorphism {
        &self.unit
    }

    pub fn source(&self) -> &FiniteAlgebra {
        &self.source
    }

    /// The product index: (generator of `M`, homomorphism `A → U(G)`).
    pub fn index(&self) -> &[(usize, Homomorphism)] {
        &self.index
    }

    /// No base homomorphism into any generator: `F(A)` is trivial.
    pub fn is_degenerate(&self) -> bool {
        self.index.is_empty()
    }

    pub fn tuples(&self) -> &[Vec<Elem>] {
        self.generated.tuples()
    }

    /// The homomorphism `F(A) → B` extending `g: A → U(B)` along the unit.
    pub fn lift(&self, target: &FiniteAlgebra, g: &Homomorphism) -> Result<Option<Homomorphism>> {
        self.generated.lift(target, g.map())
    }
}

fn base_member(a: &FiniteAlgebra, k: &Quasivariety) -> Result<FiniteAlgebra> {
    let a = k.normalize(a)?;
    if !membership(&a, k)?.member {
        return Err(Error::Precondition(format!(
            "algebra is not a member of `{}`",
            k.name()
        )));
    }
    Ok(a)
}

/// `F(A)` and `η_A` for `A ∈ K`.
pub fn free_extension(algebra: &FiniteAlgebra, e: &ExpansionSpec, limits: &Limits) -> Result<FreeExtension> {
    let a = base_member(algebra, &e.base)?;
    free_extension_unchecked(a, e, limits)
}

fn free_extension_unchecked(a: FiniteAlgebra, e: &ExpansionSpec, limits: &Limits) -> Result<FreeExtension> {
    let gens = e.expanded.generators()?;
    let mut index = Vec::new();
    for (gi, g) in gens.iter().enumerate() {
        for h in HomSearch::new(&a, g, e.base.signature())?.all()? {
            index.push((gi, h));
        }
    }
    let factors: Vec<&FiniteAlgebra> = index.iter().map(|(gi, _)| &gens[*gi]).collect();
    let columns: Vec<Vec<Elem>> = (0..a.size())
        .map(|x| index.iter().map(|(_, h)| h.apply(x)).collect())
        .collect();
    let generated = GeneratedAlgebra::generate(
        e.expanded.signature_arc().clone(),
        &factors,
        &columns,
        limits.product_cap,
    )?;
    let unit = Homomorphism::new(generated.generators().to_vec());
    Ok(FreeExtension {
        source: a,
        index,
        generated,
        unit,
    })
}

/// `ε_B: F(U(B)) → B` for `B ∈ M`.
#[derive(Clone, Debug)]
pub struct Counit {
    pub free: FreeExtension,
    pub map: Homomorphism,
}

pub fn counit(b: &FiniteAlgebra, e: &ExpansionSpec, limits: &Limits) -> Result<Counit> {
    let b = e.expanded.normalize(b)?;
    if !membership(&b, &e.expanded)?.member {
        return Err(Error::Precondition(format!(
            "algebra is not a member of `{}`",
            e.expanded.name()
        )));
    }
    counit_unchecked(&b, e, limits)
}

fn counit_unchecked(b: &FiniteAlgebra, e: &ExpansionSpec, limits: &Limits) -> Result<Counit> {
    let free = free_extension_unchecked(e.forget(b)?.with_signature(e.base.signature_arc().clone())?, e, limits)?;
    let map = free
        .lift(b, &Homomorphism::identity(b.size()))?
        .ok_or_else(|| Error::Precondition("identity does not extend along the unit".into()))?;
    Ok(Counit { free, map })
}

/// `F(h): F(A) → F(A')` for a base homomorphism `h: A → A'`.
pub fn free_extension_map(h: &Homomorphism, fa: &FreeExtension, fb: &FreeExtension) -> Result<Homomorphism> {
    if h.map().len() != fa.source.size() {
        return Err(Error::Precondition(
            "map is not defined on the source of the free extension".into(),
        ));
    }
    fa.lift(fb.algebra(), &h.then(&fb.unit))?
        .ok_or_else(|| Error::Precondition("map is not a homomorphism".into()))
}

/// Verifies that `(free, unit)` is a reflection of `A` into `M` against every
/// member of size at most `bound`: every base homomorphism `g: A → U(B)`
/// has exactly one homomorphism `ĝ: free → B` with `ĝ ∘ unit = g`.
pub fn verify_reflection(
    a: &FiniteAlgebra,
    free: &FiniteAlgebra,
    unit: &Homomorphism,
    e: &ExpansionSpec,
    bound: usize,
    limits: &Limits,
) -> Result<Verdict> {
    let members = members_up_to(&e.expanded, bound, limits)?;
    let mut verdict = Verdict::new(format!("F is left adjoint to U for {}", e.name)).with_bound("max_size", bound);
    for (i, b) in members.iter().enumerate() {
        let name = format!("B{} (size {})", i, b.size());
        let mut failure = None;
        let mut checked = 0;
        for g in HomSearch::new(a, b, e.base.signature())?.all()? {
            checked += 1;
            let mut search = HomSearch::new(free, b, e.expanded.signature())?;
            for x in 0..a.size() {
                search = search.pin(unit.apply(x), g.apply(x));
            }
            let lifts = search.count();
            if lifts != 1 {
                failure = Some(Certificate::Lifts {
                    target: b.clone(),
                    map: g,
                    lifts,
                });
                break;
            }
        }
        verdict.push(match failure {
            Some(c) => Instance::fails(name, c),
            None => Instance::holds(name).with_detail("maps", checked),
        });
    }
    Ok(verdict)
}

/// [`verify_reflection`] for the computed `F(A)`.
pub fn universal_property_check(
    algebra: &FiniteAlgebra,
    e: &ExpansionSpec,
    bound: usize,
    limits: &Limits,
) -> Result<Verdict> {
    let f = free_extension(algebra, e, limits)?;
    verify_reflection(f.source(), f.algebra(), f.unit(), e, bound, limits)
}

fn first_collision(h: &Homomorphism) -> Option<[Elem; 2]> {
    let map = h.map();
    (0..map.len()).find_map(|j| (0..j).find(|&i| map[i] == map[j]).map(|i| [i, j]))
}

/// `η_A` is injective for every `A ∈ K` of size at most `bound`.
pub fn check_unit_mono(e: &ExpansionSpec, bound: usize, limits: &Limits) -> Result<Verdict> {
    let members = members_up_to(&e.base, bound, limits)?;
    let frees = members
        .par_iter()
        .map(|a| free_extension_unchecked(a.clone(), e, limits))
        .collect::<Result<Vec<_>>>()?;
    let mut verdict = Verdict::new(format!("unit of {} is a monomorphism", e.name)).with_bound("max_size", bound);
    for (i, (a, f)) in members.iter().zip(frees).enumerate() {
        let name = format!("A{} (size {})", i, a.size());
        verdict.push(match first_collision(f.unit()) {
            Some(pair) => Instance::fails(
                name,
                Certificate::NotInjective {
                    source: a.clone(),
                    target: f.algebra().clone(),
                    map: f.unit().clone(),
                    pair,
                },
            ),
            None => Instance::holds(name).with_detail("free_size", f.algebra().size()),
        });
    }
    Ok(verdict)
}

/// `ε_B` is bijective for every `B ∈ M` of size at most `bound`.
pub fn check_counit_iso(e: &ExpansionSpec, bound: usize, limits: &Limits) -> Result<Verdict> {
    let members = members_up_to(&e.expanded, bound, limits)?;
    let counits = members
        .par_iter()
        .map(|b| counit_unchecked(b, e, limits))
        .collect::<Result<Vec<_>>>()?;
    let mut verdict = Verdict::new(format!("counit of {} is an isomorphism", e.name)).with_bound("max_size", bound);
    for (i, (b, c)) in members.iter().zip(counits).enumerate() {
        let name = format!("B{} (size {})", i, b.size());
        let source = c.free.algebra().clone();
        let instance = if let Some(pair) = first_collision(&c.map) {
            Instance::fails(
                name,
                Certificate::NotInjective {
                    source,
                    target: b.clone(),
                    map: c.map,
                    pair,
                },
            )
        } else if let Some(missing) = (0..b.size()).find(|y| !c.map.map().contains(y)) {
            Instance::fails(
                name,
                Certificate::NotSurjective {
                    source,
                    target: b.clone(),
                    map: c.map,
                    missing,
                },
            )
        } else {
            Instance::holds(name).with_detail("free_size", source.size())
        };
        verdict.push(instance);
    }
    Ok(verdict)
}

/// The first operation of `language` (by name) and tuple where `map` fails
/// to be a homomorphism.
pub(crate) fn first_unpreserved(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    language: &Signature,
    map: &Homomorphism,
) -> Option<(String, Vec<Elem>)> {
    for s in language.symbols() {
        let (i, j) = (a.signature().index_of(&s.name)?, b.signature().index_of(&s.name)?);
        for t in Tuples::new(a.size(), s.arity) {
            let image: Vec<Elem> = t.iter().map(|&x| map.apply(x)).collect();
            if map.apply(a.apply(i, &t)) != b.apply(j, &image) {
                return Some((s.name.clone(), t));
            }
        }
    }
    None
}

/// Whether the family given by `p` is preserved by `h` in the sense of
/// [`crate::implicit::preservation_failure`].
pub fn preserves_family(p: &PpExpansionSpec, a: &FiniteAlgebra, b: &FiniteAlgebra, h: &Homomorphism) -> Result<bool> {
    for (_, op) in &p.ops {
        let (fa, fb) = (op.on(a)?, op.on(b)?);
        if crate::implicit::preservation_failure(&fa, &fb, h).is_some() {
            return Ok(false);
        }
    }
    is_homomorphism(a, b, p.base.signature(), h.map())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{enumerate_homomorphisms, is_embedding};
    use crate::fixtures;
    use crate::quasivariety::is_isomorphic;

    fn limits() -> Limits {
        Limits::default()
    }

    #[test]
    fn expansion_checks() {
        assert!(check_expansion(&fixtures::dl_to_ba(), 4, &limits()).unwrap().holds());
        assert!(
            check_expansion(&fixtures::trivial_expansion(fixtures::dl()), 4, &limits())
                .unwrap()
                .holds()
        );
        assert!(matches!(
            ExpansionSpec::new("bad", fixtures::boolean(), fixtures::dl()),
            Err(Error::SignatureMismatch(_))
        ));
    }

    #[test]
    fn expand_examples() {
        let p = fixtures::dl_compl();
        let Expansion::Expanded { algebra } = expand_algebra(&fixtures::diamond(), &p).unwrap() else {
            panic!("diamond expands");
        };
        assert_eq!(algebra, fixtures::four_ba());
        assert_eq!(
            expand_algebra(&fixtures::chain3(), &p).unwrap(),
            Expansion::UndefinedAt {
                symbol: "not".into(),
                tuple: vec![1]
            }
        );
        let Expansion::Expanded { algebra } = expand_algebra(&fixtures::chain2(), &p).unwrap() else {
            panic!("chain2 expands");
        };
        assert_eq!(algebra, fixtures::two_ba());
        let again = expand_algebra(&reduct(&algebra, &fixtures::bdl()).unwrap(), &p).unwrap();
        assert_eq!(again, Expansion::Expanded { algebra });
    }

    #[test]
    fn functionality_errors_propagate() {
        let any = ImplicitOpSpec::parse("any", 1, fixtures::bdl(), "exists [] . y = y").unwrap();
        let p = PpExpansionSpec::new("any", fixtures::dl(), vec![("g".into(), any)]).unwrap();
        assert!(matches!(
            expand_algebra(&fixtures::chain2(), &p),
            Err(Error::NotFunctional { .. })
        ));
        assert!(PpExpansionSpec::new("dup", fixtures::dl(), vec![("meet".into(), fixtures::compl())]).is_err());
    }

    #[test]
    fn pp_membership_examples() {
        let p = fixtures::dl_compl();
        assert_eq!(
            pp_expansion_membership(&fixtures::four_ba(), &p, 4, &limits()).unwrap(),
            PpMembership::InClass
        );
        assert_eq!(
            pp_expansion_membership(&fixtures::two_ba(), &p, 4, &limits()).unwrap(),
            PpMembership::InClass
        );
        let mut tables = fixtures::four_ba().tables().to_vec();
        tables[4][1] = 1;
        let broken = FiniteAlgebra::new(fixtures::ba(), 4, tables).unwrap();
        assert_eq!(
            pp_expansion_membership(&broken, &p, 4, &limits()).unwrap(),
            PpMembership::No(NonMembership::DisagreesWithInduced {
                symbol: "not".into(),
                tuple: vec![1],
                table_value: 1,
                induced_value: 2
            })
        );
    }

    #[test]
    fn pp_membership_closure() {
        let p = fixtures::dl_jcp();
        let c3 = fixtures::chain3();
        let join = c3.table(1).to_vec();
        let b = c3.expanded(p.signature().clone(), vec![join]).unwrap();
        let PpMembership::InClosure { extension, embedding } = pp_expansion_membership(&b, &p, 4, &limits()).unwrap()
        else {
            panic!("chain3 with join embeds into the expanded diamond");
        };
        assert!(is_isomorphic(
            &reduct(&extension, &fixtures::bdl()).unwrap(),
            &fixtures::diamond()
        ));
        assert!(is_homomorphism(&b, &extension, p.signature(), embedding.map()).unwrap() && is_embedding(&embedding));
        assert_eq!(
            pp_expansion_membership(&b, &p, 3, &limits()).unwrap(),
            PpMembership::UnknownWithinBound
        );
    }

    #[test]
    fn free_extension_examples() {
        let e = fixtures::dl_to_ba();
        let f = free_extension(&fixtures::chain3(), &e, &limits()).unwrap();
        assert_eq!(f.algebra().size(), 4);
        assert_eq!(f.index().len(), 2);
        let images: Vec<&Vec<Elem>> = f.unit().map().iter().map(|&x| &f.tuples()[x]).collect();
        assert_eq!(images, [&vec![0, 0], &vec![0, 1], &vec![1, 1]]);
        assert!(is_isomorphic(f.algebra(), &fixtures::four_ba()));

        let f = free_extension(&fixtures::diamond(), &e, &limits()).unwrap();
        assert_eq!(f.algebra().size(), 4);
        assert!(f.unit().is_surjective_onto(4) && f.unit().is_injective());

        let f = free_extension(
            &fixtures::bms_reduct(&fixtures::diamond()),
            &fixtures::bms_to_dl(),
            &limits(),
        )
        .unwrap();
        assert_eq!(f.index().len(), 3);
        assert_eq!(f.algebra().size(), 5);
        assert!(f.unit().is_injective());
    }

    #[test]
    fn degenerate_free_extension() {
        let one_point = FiniteAlgebra::new(fixtures::bdl(), 1, vec![vec![0], vec![0], vec![0], vec![0]]).unwrap();
        let f = free_extension(&one_point, &fixtures::dl_to_ba(), &limits()).unwrap();
        assert!(f.is_degenerate());
        assert_eq!(f.algebra().size(), 1);
    }

    #[test]
    fn counit_examples() {
        let e = fixtures::dl_to_ba();
        for b in [fixtures::two_ba(), fixtures::four_ba()] {
            let c = counit(&b, &e, &limits()).unwrap();
            assert!(c.map.is_injective() && c.map.is_surjective_onto(b.size()));
        }
        let c = counit(&fixtures::diamond(), &fixtures::bms_to_dl(), &limits()).unwrap();
        assert_eq!(c.free.algebra().size(), 5);
        assert!(!c.map.is_injective() && c.map.is_surjective_onto(4));
        let ab = c
            .free
            .algebra()
            .apply(1, &[c.free.unit().apply(1), c.free.unit().apply(2)]);
        assert_ne!(ab, c.free.unit().apply(3));
        assert_eq!(c.map.apply(ab), 3);
    }

    #[test]
    fn universal_property_examples() {
        let e = fixtures::dl_to_ba();
        assert!(universal_property_check(&fixtures::chain3(), &e, 4, &limits())
            .unwrap()
            .holds());
        assert!(universal_property_check(&fixtures::chain2(), &e, 2, &limits())
            .unwrap()
            .holds());
    }

    #[test]
    fn truncated_free_extension_fails_reflection() {
        let e = fixtures::dl_to_ba();
        let c3 = fixtures::chain3();
        let f = free_extension(&c3, &e, &limits()).unwrap();
        let (gi, h) = &f.index()[0];
        let g = &e.expanded().generators().unwrap()[*gi];
        let columns: Vec<Vec<Elem>> = (0..3).map(|x| vec![h.apply(x)]).collect();
        let truncated = GeneratedAlgebra::generate(fixtures::ba(), &[g], &columns, 100).unwrap();
        let unit = Homomorphism::new(truncated.generators().to_vec());
        let v = verify_reflection(&c3, truncated.algebra(), &unit, &e, 4, &limits()).unwrap();
        let Some(Certificate::Lifts { lifts, .. }) = v.first_failure().and_then(|i| i.certificate.clone()) else {
            panic!("expected a lifting failure");
        };
        assert_eq!(lifts, 0);
    }

    #[test]
    fn unit_and_counit_checks() {
        let l = limits();
        let (ba, bms, id) = (
            fixtures::dl_to_ba(),
            fixtures::bms_to_dl(),
            fixtures::trivial_expansion(fixtures::dl()),
        );
        assert!(check_unit_mono(&ba, 4, &l).unwrap().holds());
        assert!(check_unit_mono(&id, 4, &l).unwrap().holds());
        assert!(check_unit_mono(&bms, 4, &l).unwrap().holds());
        assert!(check_counit_iso(&ba, 4, &l).unwrap().holds());
        assert!(check_counit_iso(&id, 4, &l).unwrap().holds());
        let v = check_counit_iso(&bms, 4, &l).unwrap();
        let failure = v.first_failure().unwrap();
        let Some(Certificate::NotInjective { target, .. }) = &failure.certificate else {
            panic!("expected a collapsed pair");
        };
        assert!(is_isomorphic(target, &fixtures::diamond()));
    }

    #[test]
    fn triangle_identities() {
        let l = limits();
        for e in [fixtures::dl_to_ba(), fixtures::bms_to_dl()] {
            for a in members_up_to(e.base(), 3, &l).unwrap() {
                let f = free_extension(&a, &e, &l).unwrap();
                let eps = counit_unchecked(f.algebra(), &e, &l).unwrap();
                let u_fa = e
                    .forget(f.algebra())
                    .unwrap()
                    .with_signature(e.base().signature_arc().clone())
                    .unwrap();
                let f_u_fa = free_extension_unchecked(u_fa, &e, &l).unwrap();
                let f_eta = free_extension_map(f.unit(), &f, &f_u_fa).unwrap();
                assert_eq!(f_eta.then(&eps.map), Homomorphism::identity(f.algebra().size()));
            }
            for b in members_up_to(e.expanded(), 4, &l).unwrap() {
                let c = counit_unchecked(&b, &e, &l).unwrap();
                assert_eq!(c.free.unit().then(&c.map), Homomorphism::identity(b.size()));
            }
        }
    }

    #[test]
    fn naturality_of_unit() {
        let l = limits();
        let e = fixtures::dl_to_ba();
        let members = members_up_to(e.base(), 3, &l).unwrap();
        for a in &members {
            for b in &members {
                let (fa, fb) = (free_extension(a, &e, &l).unwrap(), free_extension(b, &e, &l).unwrap());
                for h in enumerate_homomorphisms(a, b, e.base().signature()).unwrap() {
                    let fh = free_extension_map(&h, &fa, &fb).unwrap();
                    assert_eq!(fa.unit().then(&fh), h.then(fb.unit()));
                }
            }
        }
    }

    #[test]
    fn free_extensions_are_members() {
        let l = limits();
        for e in [fixtures::dl_to_ba(), fixtures::bms_to_dl()] {
            for a in members_up_to(e.base(), 4, &l).unwrap() {
                let f = free_extension(&a, &e, &l).unwrap();
                assert!(membership(f.algebra(), e.expanded()).unwrap().member);
            }
        }
    }

    #[test]
    fn closure_members_agree_across_searches() {
        let keys = |v: Vec<ClosureMember>| -> HashSet<_> {
            v.iter().map(|m| canonical_form(&m.algebra).table_key()).collect()
        };
        for p in [fixtures::dl_compl(), fixtures::dl_jcp(), fixtures::dl_bare()] {
            for (bound, ext) in [(3, 4), (4, 5), (4, 6)] {
                let fast = closure_members_by_extension(&p, bound, ext, &limits()).unwrap();
                let slow = closure_members_by_enumeration(&p, bound, ext, &limits()).unwrap();
                assert_eq!(keys(fast), keys(slow), "{} at {}/{}", p.name(), bound, ext);
            }
        }
    }

    #[test]
    fn closure_members_of_jcp_include_chain3() {
        let members = pp_closure_members(&fixtures::dl_jcp(), 3, 4, &limits()).unwrap();
        assert!(members
            .iter()
            .any(|m| is_isomorphic(&reduct(&m.algebra, &fixtures::bdl()).unwrap(), &fixtures::chain3())));
        assert!(preserves_family(
            &fixtures::dl_compl(),
            &fixtures::chain2(),
            &fixtures::diamond(),
            &Homomorphism::new(vec![0, 3])
        )
        .unwrap());
    }
}

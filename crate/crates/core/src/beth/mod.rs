//! Simplicity of pp expansions, Beth companions and the checks around them.
//!
//! All checks are bounded: they quantify over members up to a size bound and
//! report per-instance verdicts.

use std::sync::Arc;

use serde::Serialize;

use crate::adjunction::{
    check_counit_iso, check_unit_mono, first_mismatch, pp_closure_members, ExpansionSpec, PpExpansionSpec,
};
use crate::algebra::{
    generated_subalgebra, is_homomorphism, reduct, Elem, FiniteAlgebra, GeneratedAlgebra, HomSearch, Homomorphism,
    Signature,
};
use crate::implicit::{check_totalizable_members, check_unique_witnesses, induced_or_error, ImplicitOpSpec};
use crate::logic::{parse_term, Compiled, Term};
use crate::quasivariety::{is_member, members_up_to, Quasivariety};
use crate::verdict::{Certificate, Instance, Status, Verdict};
use crate::{Error, Limits, Result};

/// Interprets each symbol of `source` by a term of `target` in `x1..xn`.
#[derive(Clone, Debug, PartialEq)]
pub struct TermTranslation {
    name: String,
    source: Arc<Signature>,
    target: Arc<Signature>,
    terms: Vec<Term>,
}

fn arg_vars(arity: usize) -> Vec<String> {
    (1..=arity).map(|i| format!("x{}", i)).collect()
}

impl TermTranslation {
    /// `map` must list every symbol of `source` exactly once.
    pub fn new(
        name: impl Into<String>,
        source: Arc<Signature>,
        target: Arc<Signature>,
        map: Vec<(String, Term)>,
    ) -> Result<Self> {
        let mut terms: Vec<Option<Term>> = vec![None; source.len()];
        for (symbol, term) in map {
            let i = source
                .index_of(&symbol)
                .ok_or_else(|| Error::UnknownSymbol(symbol.clone()))?;
            if terms[i].is_some() {
                return Err(Error::DuplicateSymbol(symbol));
            }
            Compiled::new(&term, &target, &arg_vars(source.symbols()[i].arity))?;
            terms[i] = Some(term);
        }
        let terms = terms
            .into_iter()
            .zip(source.symbols())
            .map(|(t, s)| t.ok_or_else(|| Error::Precondition(format!("no term for `{}`", s.name))))
            .collect::<Result<_>>()?;
        Ok(TermTranslation {
            name: name.into(),
            source,
            target,
            terms,
        })
    }

    pub fn parse(
        name: impl Into<String>,
        source: Arc<Signature>,
        target: Arc<Signature>,
        map: &[(&str, &str)],
    ) -> Result<Self> {
        let map = map
            .iter()
            .map(|(s, t)| Ok((s.to_string(), parse_term(t, &target)?)))
            .collect::<Result<_>>()?;
        TermTranslation::new(name, source, target, map)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Arc<Signature> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Signature> {
        &self.target
    }

    pub fn term(&self, symbol: &str) -> Option<&Term> {
        self.source.index_of(symbol).map(|i| &self.terms[i])
    }

    /// The same translation with one term replaced.
    pub fn with_term(&self, symbol: &str, term: Term) -> Result<Self> {
        let map = self
            .source
            .symbols()
            .iter()
            .zip(&self.terms)
            .map(|(s, t)| (s.name.clone(), if s.name == symbol { term.clone() } else { t.clone() }))
            .collect();
        TermTranslation::new(self.name.clone(), self.source.clone(), self.target.clone(), map)
    }

    /// Every symbol of `base` is sent to itself applied to `x1..xn`.
    pub fn is_faithful(&self, base: &Signature) -> bool {
        base.symbols().iter().all(|s| {
            self.term(&s.name).is_some_and(|t| {
                *t == Term::app(s.name.clone(), arg_vars(s.arity).into_iter().map(Term::var).collect())
            })
        })
    }

    /// The algebra over `source` obtained by evaluating the terms in `b`.
    pub fn apply(&self, b: &FiniteAlgebra) -> Result<FiniteAlgebra> {
        if *b.signature() != *self.target {
            return Err(Error::SignatureMismatch(format!(
                "`{}` translates algebras over `{}`, found `{}`",
                self.name,
                self.target.name(),
                b.signature().name()
            )));
        }
        let compiled = self
            .source
            .symbols()
            .iter()
            .zip(&self.terms)
            .map(|(s, t)| Compiled::new(t, b.signature(), &arg_vars(s.arity)))
            .collect::<Result<Vec<_>>>()?;
        FiniteAlgebra::from_fn(self.source.clone(), b.size(), |sym, args| compiled[sym].eval(b, args))
    }
}

/// Checks that `S(K[L_F]) = K[L_F]` on algebras of size at most `bound`
/// found inside expanded members of size at most `ext_bound`.
pub fn check_simple(p: &PpExpansionSpec, bound: usize, ext_bound: usize, limits: &Limits) -> Result<Verdict> {
    let members = pp_closure_members(p, bound, ext_bound, limits)?;
    let mut verdict = Verdict::new(format!("{} is a simple pp expansion", p.name()))
        .with_bound("max_size", bound)
        .with_bound("ext_bound", ext_bound);
    if p.ops().is_empty() {
        verdict.note("empty family: the expansion is the base class itself");
    }
    for (i, m) in members.into_iter().enumerate() {
        let name = format!("B{} (size {})", i, m.algebra.size());
        let r = reduct(&m.algebra, p.base().signature_arc())?;
        let ops = p
            .ops()
            .iter()
            .map(|(_, op)| induced_or_error(&r, op))
            .collect::<Result<Vec<_>>>()?;
        verdict.push(match first_mismatch(&m.algebra, &ops, p) {
            Some((k, tuple, table_value, induced_value)) => Instance::fails(
                name,
                Certificate::NotExpandable {
                    algebra: m.algebra,
                    extension: m.extension,
                    embedding: m.embedding,
                    symbol: p.ops()[k].0.clone(),
                    tuple,
                    table_value,
                    induced_value,
                },
            ),
            None => Instance::holds(name),
        });
    }
    Ok(verdict)
}

/// The first defined tuple whose value lies outside the subuniverse generated
/// by its arguments.
pub fn interpolation_failure(a: &FiniteAlgebra, s: &ImplicitOpSpec) -> Result<Option<Certificate>> {
    let f = induced_or_error(a, s)?;
    for (t, v) in f.domain() {
        let generated = generated_subalgebra(a, &t);
        if generated.binary_search(&v).is_err() {
            return Ok(Some(Certificate::NotInterpolated {
                algebra: a.clone(),
                op: s.name().to_string(),
                tuple: t,
                value: v,
                generated,
            }));
        }
    }
    Ok(None)
}

/// Checks that `f(ā)` is the value of a term at `ā` for every defined tuple:
/// term values at `ā` are exactly the subuniverse generated by `ā`.
/// `algebra` is assumed to be a member of the expanded class.
pub fn check_interpolation_criterion(algebra: &FiniteAlgebra, s: &ImplicitOpSpec) -> Result<Verdict> {
    let mut verdict = Verdict::new(format!("{} is interpolated by terms", s.name()));
    let name = format!("algebra (size {})", algebra.size());
    verdict.push(match interpolation_failure(algebra, s)? {
        Some(c) => Instance::fails(name, c),
        None => Instance::holds(name),
    });
    Ok(verdict)
}

pub const BETH_FAMILY_NOTE: &str =
    "relative to the supplied operations only: the criterion quantifies over all implicit operations, which cannot be enumerated";

/// Runs the interpolation criterion for every operation in `ops` on every
/// member of the pp expansion up to `bound`.
pub fn check_beth_companion(
    p: &PpExpansionSpec,
    ops: &[ImplicitOpSpec],
    bound: usize,
    ext_bound: usize,
    limits: &Limits,
) -> Result<Verdict> {
    let members = pp_closure_members(p, bound, ext_bound, limits)?;
    let mut verdict = Verdict::new(format!("{} is a Beth companion", p.name()))
        .with_bound("max_size", bound)
        .with_bound("ext_bound", ext_bound);
    verdict.note(BETH_FAMILY_NOTE);
    if ops.is_empty() {
        verdict.note("vacuous: no operations supplied");
    }
    for (i, m) in members.iter().enumerate() {
        for s in ops {
            let name = format!("B{} (size {}) / {}", i, m.algebra.size(), s.name());
            verdict.push(match interpolation_failure(&m.algebra, s)? {
                Some(c) => Instance::fails(name, c),
                None => Instance::holds(name),
            });
        }
    }
    Ok(verdict)
}

/// `h[A]` is the equalizer of `first, second: B → codomain`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegularWitness {
    pub codomain: FiniteAlgebra,
    pub first: Homomorphism,
    pub second: Homomorphism,
}

impl RegularWitness {
    pub fn equalizer(&self) -> Vec<Elem> {
        (0..self.first.map().len())
            .filter(|&b| self.first.apply(b) == self.second.apply(b))
            .collect()
    }

    pub fn certificate(&self) -> Certificate {
        Certificate::Equalizer {
            codomain: self.codomain.clone(),
            first: self.first.clone(),
            second: self.second.clone(),
        }
    }
}

/// Searches for `C ∈ M` with `|C| ≤ bound` and `g1, g2: B → C` whose
/// equalizer is `h[A]`. Pairs of maps into generators that agree on `h[A]`
/// are collected until they separate every other element; `C` is the
/// subalgebra of their product generated by both images. When that `C` is
/// too large, members of `M` are searched directly.
pub fn check_regular_mono(
    h: &Homomorphism,
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    m: &Quasivariety,
    bound: usize,
    limits: &Limits,
) -> Result<Option<RegularWitness>> {
    limits.check_bound(bound)?;
    let (a, b) = (m.normalize(a)?, m.normalize(b)?);
    if h.map().len() != a.size() || !is_homomorphism(&a, &b, m.signature(), h.map())? || !h.is_injective() {
        return Err(Error::Precondition("map is not an embedding".into()));
    }
    if !is_member(&a, m)? || !is_member(&b, m)? {
        return Err(Error::Precondition(format!(
            "both algebras must be members of `{}`",
            m.name()
        )));
    }
    let image = h.image();
    if image.len() == b.size() {
        let id = Homomorphism::identity(b.size());
        return Ok(Some(RegularWitness {
            codomain: b,
            first: id.clone(),
            second: id,
        }));
    }
    let gens = m.generators()?;
    let mut pairs: Vec<(usize, Homomorphism, Homomorphism)> = Vec::new();
    for (gi, g) in gens.iter().enumerate() {
        let homs = HomSearch::new(&b, g, m.signature())?.all()?;
        for (i, p) in homs.iter().enumerate() {
            for q in &homs[i + 1..] {
                if image.iter().all(|&x| p.apply(x) == q.apply(x)) {
                    pairs.push((gi, p.clone(), q.clone()));
                }
            }
        }
    }
    let mut chosen: Vec<usize> = Vec::new();
    let mut separated = true;
    for x in (0..b.size()).filter(|x| image.binary_search(x).is_err()) {
        if chosen.iter().any(|&c| pairs[c].1.apply(x) != pairs[c].2.apply(x)) {
            continue;
        }
        match (0..pairs.len()).find(|&c| pairs[c].1.apply(x) != pairs[c].2.apply(x)) {
            Some(c) => chosen.push(c),
            None => {
                separated = false;
                break;
            }
        }
    }
    if !separated {
        return Ok(None);
    }
    let factors: Vec<&FiniteAlgebra> = chosen.iter().map(|&c| &gens[pairs[c].0]).collect();
    let mut columns: Vec<Vec<Elem>> = (0..b.size())
        .map(|x| chosen.iter().map(|&c| pairs[c].1.apply(x)).collect())
        .collect();
    columns.extend((0..b.size()).map(|x| chosen.iter().map(|&c| pairs[c].2.apply(x)).collect()));
    let generated = GeneratedAlgebra::generate(m.signature_arc().clone(), &factors, &columns, limits.product_cap)?;
    if generated.algebra().size() <= bound {
        let ids = generated.generators();
        return Ok(Some(RegularWitness {
            codomain: generated.algebra().clone(),
            first: Homomorphism::new(ids[..b.size()].to_vec()),
            second: Homomorphism::new(ids[b.size()..].to_vec()),
        }));
    }
    for c in members_up_to(m, bound, limits)? {
        let homs = HomSearch::new(&b, &c, m.signature())?.all()?;
        for (i, p) in homs.iter().enumerate() {
            for q in &homs[i + 1..] {
                let w = RegularWitness {
                    codomain: c.clone(),
                    first: p.clone(),
                    second: q.clone(),
                };
                if w.equalizer() == image {
                    return Ok(Some(w));
                }
            }
        }
    }
    Ok(None)
}

/// Full-subcategory part of mono-reflectivity: every base homomorphism
/// between members of `M` preserves the extra operations.
pub fn check_fullness(e: &ExpansionSpec, bound: usize, limits: &Limits) -> Result<Verdict> {
    let members = members_up_to(e.expanded(), bound, limits)?;
    let mut verdict = Verdict::new(format!("forgetful functor of {} is full", e.name())).with_bound("max_size", bound);
    for (i, a) in members.iter().enumerate() {
        for (j, b) in members.iter().enumerate() {
            let name = format!("B{} -> B{}", i, j);
            let mut failure = None;
            HomSearch::new(a, b, e.base().signature())?.for_each(|map| {
                let h = Homomorphism::new(map.to_vec());
                match crate::adjunction::first_unpreserved(a, b, e.expanded().signature(), &h) {
                    Some((symbol, tuple)) => {
                        failure = Some(Certificate::NotPreserved {
                            source: a.clone(),
                            target: b.clone(),
                            map: h,
                            symbol,
                            tuple,
                        });
                        false
                    }
                    None => true,
                }
            });
            verdict.push(match failure {
                Some(c) => Instance::fails(name, c),
                None => Instance::holds(name),
            });
        }
    }
    Ok(verdict)
}

fn merge(claim: String, parts: Vec<(&str, Verdict)>) -> Verdict {
    let mut out = Verdict::new(claim);
    for (prefix, v) in parts {
        out.bounds.extend(v.bounds);
        out.notes.extend(v.notes);
        for mut i in v.instances {
            i.name = format!("{}: {}", prefix, i.name);
            out.push(i);
        }
    }
    out
}

/// Unit componentwise mono and counit iso, as one verdict.
pub fn check_unit_and_counit(e: &ExpansionSpec, bound: usize, limits: &Limits) -> Result<Verdict> {
    Ok(merge(
        format!("unit of {} is mono and counit iso", e.name()),
        vec![
            ("unit", check_unit_mono(e, bound, limits)?),
            ("counit", check_counit_iso(e, bound, limits)?),
        ],
    ))
}

/// `M` is a mono-reflective subcategory of `K` through `U`: `U` is full, the
/// unit is mono and the counit iso.
pub fn check_mono_reflective(e: &ExpansionSpec, bound: usize, limits: &Limits) -> Result<Verdict> {
    Ok(merge(
        format!("{} is mono-reflective", e.name()),
        vec![
            ("fullness", check_fullness(e, bound, limits)?),
            ("unit", check_unit_mono(e, bound, limits)?),
            ("counit", check_counit_iso(e, bound, limits)?),
        ],
    ))
}

/// Conditions (i)-(iv) of a faithful term equivalence between `M1` and `M2`
/// relative to `K`: `ρ(A) ∈ M2`, `τ(B) ∈ M1`, `τρ(A) = A`, `ρτ(B) = B`.
/// `tau` translates the symbols of `M1` into terms of `M2`, `rho` the other way.
pub fn check_faithful_term_equivalence(
    m1: &Quasivariety,
    m2: &Quasivariety,
    tau: &TermTranslation,
    rho: &TermTranslation,
    k: &Quasivariety,
    bound: usize,
    limits: &Limits,
) -> Result<Verdict> {
    let shapes = [
        (
            *tau.source == *m1.signature_arc().as_ref(),
            "τ must translate the symbols of M1",
        ),
        (
            *tau.target == *m2.signature_arc().as_ref(),
            "τ must produce terms of M2",
        ),
        (
            *rho.source == *m2.signature_arc().as_ref(),
            "ρ must translate the symbols of M2",
        ),
        (
            *rho.target == *m1.signature_arc().as_ref(),
            "ρ must produce terms of M1",
        ),
    ];
    if let Some((_, msg)) = shapes.iter().find(|(ok, _)| !ok) {
        return Err(Error::SignatureMismatch(msg.to_string()));
    }
    if !tau.is_faithful(k.signature()) || !rho.is_faithful(k.signature()) {
        return Err(Error::Precondition(format!(
            "translations must fix the symbols of `{}`",
            k.signature().name()
        )));
    }
    let mut verdict = Verdict::new(format!(
        "{} and {} are faithfully term equivalent",
        m1.name(),
        m2.name()
    ))
    .with_bound("max_size", bound);
    let check = |condition: &str, algebra: &FiniteAlgebra, result: FiniteAlgebra, ok: bool, name: String| {
        if ok {
            Instance::holds(name)
        } else {
            Instance::fails(
                name,
                Certificate::Translation {
                    condition: condition.to_string(),
                    algebra: algebra.clone(),
                    result,
                },
            )
        }
    };
    let first = members_up_to(m1, bound, limits)?;
    let second = members_up_to(m2, bound, limits)?;
    let mut inner = Vec::new();
    for (i, a) in first.iter().enumerate() {
        let ra = rho.apply(a)?;
        let member = is_member(&ra, m2)?;
        inner.push(check("rho(A) in M2", a, ra.clone(), member, format!("(i) A{}", i)));
        let tra = tau.apply(&ra)?;
        let back = tra == *a;
        inner.push(check("tau(rho(A)) = A", a, tra, back, format!("(iii) A{}", i)));
    }
    for (i, b) in second.iter().enumerate() {
        let tb = tau.apply(b)?;
        let member = is_member(&tb, m1)?;
        inner.push(check("tau(B) in M1", b, tb.clone(), member, format!("(ii) B{}", i)));
        let rtb = rho.apply(&tb)?;
        let back = rtb == *b;
        inner.push(check("rho(tau(B)) = B", b, rtb, back, format!("(iv) B{}", i)));
    }
    inner.sort_by_key(|i| {
        let tag = i.name.split(' ').next().unwrap_or("").to_string();
        (["(i)", "(ii)", "(iii)", "(iv)"].iter().position(|t| *t == tag), 0)
    });
    for i in inner {
        verdict.push(i);
    }
    Ok(verdict)
}

/// Results of the three equivalent conditions of the main theorem.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MainTheoremReport {
    /// (i) simple pp expansion; needs the operation family.
    pub simple: Option<Verdict>,
    /// (ii) unit mono and counit iso; needs the expanded class.
    pub adjunction: Option<Verdict>,
    /// (iii) mono-reflective; needs the expanded class.
    pub mono_reflective: Option<Verdict>,
}

impl MainTheoremReport {
    pub fn statuses(&self) -> Vec<(&'static str, Option<Status>)> {
        vec![
            ("(i) simple pp expansion", self.simple.as_ref().map(Verdict::status)),
            (
                "(ii) unit mono and counit iso",
                self.adjunction.as_ref().map(Verdict::status),
            ),
            (
                "(iii) mono-reflective",
                self.mono_reflective.as_ref().map(Verdict::status),
            ),
        ]
    }

    /// All conditions that were evaluated have the same status.
    pub fn consistent(&self) -> bool {
        let evaluated: Vec<Status> = self.statuses().into_iter().filter_map(|(_, s)| s).collect();
        evaluated.windows(2).all(|w| w[0] == w[1])
    }

    /// The common status of the evaluated conditions, when consistent.
    pub fn common_status(&self) -> Option<Status> {
        let first = self.statuses().into_iter().find_map(|(_, s)| s)?;
        self.consistent().then_some(first)
    }

    /// One instance recording agreement, with each condition's status.
    pub fn verdict(&self) -> Verdict {
        let mut v = Verdict::new("conditions of the main theorem agree");
        for part in [&self.simple, &self.adjunction, &self.mono_reflective]
            .into_iter()
            .flatten()
        {
            for (k, b) in &part.bounds {
                v.bounds.insert(k.clone(), *b);
            }
        }
        let mut instance = if self.consistent() {
            Instance::holds("consistency")
        } else {
            Instance::fails(
                "consistency",
                Certificate::Disagreement {
                    verdicts: self
                        .statuses()
                        .into_iter()
                        .filter_map(|(k, s)| s.map(|s| (k.to_string(), s)))
                        .collect(),
                },
            )
        };
        for (k, s) in self.statuses() {
            instance = instance.with_detail(k, s.map_or("not applicable".to_string(), |s| s.to_string()));
        }
        v.push(instance);
        v
    }
}

/// Runs (i) when a family is given and (ii), (iii) when an expansion is
/// given, all at the same bounds.
pub fn cross_validate_main_theorem(
    e: Option<&ExpansionSpec>,
    p: Option<&PpExpansionSpec>,
    bound: usize,
    ext_bound: usize,
    limits: &Limits,
) -> Result<MainTheoremReport> {
    if e.is_none() && p.is_none() {
        return Err(Error::Precondition(
            "an expansion or an operation family is required".into(),
        ));
    }
    if let (Some(e), Some(p)) = (e, p) {
        if *e.base().signature() != *p.base().signature() {
            return Err(Error::SignatureMismatch(
                "expansion and family have different base languages".into(),
            ));
        }
    }
    Ok(MainTheoremReport {
        simple: p.map(|p| check_simple(p, bound, ext_bound, limits)).transpose()?,
        adjunction: e.map(|e| check_unit_and_counit(e, bound, limits)).transpose()?,
        mono_reflective: e.map(|e| check_mono_reflective(e, bound, limits)).transpose()?,
    })
}

/// Simplicity (through conditions (ii) and (iii)) agrees for two faithfully
/// term equivalent expansions of `K`.
#[allow(clippy::too_many_arguments)]
pub fn check_simplicity_transfer(
    m1: &Quasivariety,
    m2: &Quasivariety,
    tau: &TermTranslation,
    rho: &TermTranslation,
    k: &Quasivariety,
    bound: usize,
    limits: &Limits,
) -> Result<Verdict> {
    let equivalence = check_faithful_term_equivalence(m1, m2, tau, rho, k, bound, limits)?;
    if !equivalence.holds() {
        return Err(Error::Precondition(format!(
            "{} and {} are not faithfully term equivalent at bound {}",
            m1.name(),
            m2.name(),
            bound
        )));
    }
    let mut statuses = Vec::new();
    for m in [m1, m2] {
        let e = ExpansionSpec::new(format!("{}_to_{}", k.name(), m.name()), k.clone(), m.clone())?;
        let report = cross_validate_main_theorem(Some(&e), None, bound, bound, limits)?;
        let status = report
            .common_status()
            .ok_or_else(|| Error::Precondition(format!("conditions disagree for {}", m.name())))?;
        statuses.push((m.name().to_string(), status));
    }
    let mut verdict = Verdict::new(format!("simplicity transfers between {} and {}", m1.name(), m2.name()))
        .with_bound("max_size", bound);
    let instance = if statuses[0].1 == statuses[1].1 {
        Instance::holds("agreement")
    } else {
        Instance::fails(
            "agreement",
            Certificate::Disagreement {
                verdicts: statuses.iter().cloned().collect(),
            },
        )
    };
    verdict.push(
        statuses
            .iter()
            .fold(instance, |i, (name, s)| i.with_detail(name, s.to_string())),
    );
    Ok(verdict)
}

/// Sub-verdicts of the unique-witness harness.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HarnessReport {
    pub unique_witnesses: Vec<Verdict>,
    pub totalizable: Vec<Verdict>,
    pub beth_companion: Verdict,
    pub simple: Verdict,
}

impl HarnessReport {
    pub fn premises_hold(&self) -> bool {
        self.unique_witnesses.iter().all(Verdict::holds)
            && self.totalizable.iter().all(Verdict::holds)
            && self.beth_companion.holds()
    }

    /// Premises established imply simplicity; otherwise nothing is asserted.
    pub fn verdict(&self) -> Verdict {
        let mut v = Verdict::new("unique witnesses, totalizability and interpolation imply simplicity");
        v.bounds = self.simple.bounds.clone();
        let premises = self.premises_hold();
        let instance = if !premises {
            v.note("premises not established");
            Instance::holds("implication")
        } else if self.simple.holds() {
            Instance::holds("implication")
        } else {
            Instance::fails(
                "implication",
                Certificate::Disagreement {
                    verdicts: [
                        ("premises".to_string(), Status::Holds),
                        ("simple".to_string(), self.simple.status()),
                    ]
                    .into_iter()
                    .collect(),
                },
            )
        };
        v.push(
            instance
                .with_detail("premises", premises)
                .with_detail("simple", self.simple.status().to_string()),
        );
        v
    }
}

/// For a family with unique witnesses that is totalizable on every member of
/// size at most `bound` and passes the interpolation criterion, simplicity
/// must hold as well.
pub fn harness_extpp_bang_implies_simple(
    p: &PpExpansionSpec,
    bound: usize,
    ext_bound: usize,
    limits: &Limits,
) -> Result<HarnessReport> {
    let k = p.base();
    let ops: Vec<ImplicitOpSpec> = p.ops().iter().map(|(_, op)| op.clone()).collect();
    let unique_witnesses = ops
        .iter()
        .map(|op| check_unique_witnesses(op, k, bound, limits))
        .collect::<Result<_>>()?;
    let totalizable = ops
        .iter()
        .map(|op| check_totalizable_members(op, k, bound, ext_bound, limits))
        .collect::<Result<_>>()?;
    Ok(HarnessReport {
        unique_witnesses,
        totalizable,
        beth_companion: check_beth_companion(p, &ops, bound, ext_bound, limits)?,
        simple: check_simple(p, bound, ext_bound, limits)?,
    })
}

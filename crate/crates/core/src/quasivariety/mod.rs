//! Quasivarieties given by quasiequations or by finitely many finite
//! generators: membership, relative congruences, free algebras, member
//! enumeration and bounded amalgamation.
//!
//! For a generated presentation `K = Q(G1, .., Gk)` a finite algebra is a
//! member exactly when it lies in `ISP(G1, .., Gk)`, that is, when the
//! homomorphisms into the generators separate its points.

mod canonical;
mod members;

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{
    congruence_closure, quotient, Congruence, Elem, FiniteAlgebra, GeneratedAlgebra, HomSearch, Homomorphism,
    Signature, Tuples,
};
use crate::logic::{first_violation, Assignment, CompiledEquation, Quasiequation};
use crate::verdict::{Certificate, Instance, Verdict};
use crate::{Error, Limits, Result};

pub use canonical::{canonical_form, is_isomorphic};
pub(crate) use members::{all_extensions, search_extensions};
pub use members::{bounded_amalgamation, enumerate_members, members_up_to, Amalgam};

#[derive(Clone, Debug)]
pub enum Body {
    Axiomatic(Vec<Quasiequation>),
    Generated(Vec<FiniteAlgebra>),
}

/// A named quasivariety presentation.
#[derive(Clone, Debug)]
pub struct Quasivariety {
    name: String,
    signature: Arc<Signature>,
    body: Body,
}

impl Quasivariety {
    /// `Q(generators)`; all generators must share one signature.
    pub fn generated(name: impl Into<String>, generators: Vec<FiniteAlgebra>) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::Precondition("a generated quasivariety needs at least one generator".into()))?;
        let signature = first.signature_arc().clone();
        let generators = generators
            .iter()
            .map(|g| {
                if *g.signature() != *signature {
                    return Err(Error::SignatureMismatch(format!(
                        "generator over `{}`, expected `{}`",
                        g.signature().name(),
                        signature.name()
                    )));
                }
                g.with_signature(signature.clone())
            })
            .collect::<Result<_>>()?;
        Ok(Quasivariety {
            name: name.into(),
            signature,
            body: Body::Generated(generators),
        })
    }

    pub fn axiomatic(name: impl Into<String>, signature: Arc<Signature>, axioms: Vec<Quasiequation>) -> Result<Self> {
        for q in &axioms {
            let vars = q.vars();
            for e in q.premises.iter().chain([&q.conclusion]) {
                CompiledEquation::new(e, &signature, &vars)?;
            }
        }
        Ok(Quasivariety {
            name: name.into(),
            signature,
            body: Body::Axiomatic(axioms),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn signature_arc(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn body(&self) -> &Body {
        &self.body
    }

    pub fn is_generated(&self) -> bool {
        matches!(self.body, Body::Generated(_))
    }

    pub fn generators(&self) -> Result<&[FiniteAlgebra]> {
        match &self.body {
            Body::Generated(g) => Ok(g),
            Body::Axiomatic(_) => Err(Error::NotGenerated(self.name.clone())),
        }
    }

    /// `algebra` presented over this presentation's symbol order.
    pub(crate) fn normalize(&self, algebra: &FiniteAlgebra) -> Result<FiniteAlgebra> {
        if *algebra.signature() != *self.signature {
            return Err(Error::SignatureMismatch(format!(
                "algebra over `{}`, quasivariety `{}` over `{}`",
                algebra.signature().name(),
                self.name,
                self.signature.name()
            )));
        }
        algebra.with_signature(self.signature.clone())
    }
}

/// A homomorphism into the `generator`-th generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorMap {
    pub generator: usize,
    pub map: Homomorphism,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MembershipCertificate {
    /// Jointly injective homomorphisms into generators.
    SeparatingFamily {
        homs: Vec<GeneratorMap>,
    },
    /// Two elements identified by every homomorphism into a generator.
    InseparablePair {
        pair: [Elem; 2],
    },
    AxiomsHold {
        axioms: usize,
    },
    AxiomViolated {
        index: usize,
        axiom: Quasiequation,
        assignment: Assignment,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Membership {
    pub member: bool,
    pub certificate: MembershipCertificate,
}

pub fn membership(algebra: &FiniteAlgebra, k: &Quasivariety) -> Result<Membership> {
    let a = k.normalize(algebra)?;
    match &k.body {
        Body::Axiomatic(axioms) => {
            for (index, q) in axioms.iter().enumerate() {
                if let Some(assignment) = crate::logic::check_quasiequation(&a, q)? {
                    return Ok(Membership {
                        member: false,
                        certificate: MembershipCertificate::AxiomViolated {
                            index,
                            axiom: q.clone(),
                            assignment,
                        },
                    });
                }
            }
            Ok(Membership {
                member: true,
                certificate: MembershipCertificate::AxiomsHold { axioms: axioms.len() },
            })
        }
        Body::Generated(gens) => {
            let n = a.size();
            let mut partition = Congruence::total(n);
            let mut homs = Vec::new();
            for (gi, g) in gens.iter().enumerate() {
                if partition.is_identity() {
                    break;
                }
                HomSearch::new(&a, g, &k.signature)?.for_each(|map| {
                    let h = Homomorphism::new(map.to_vec());
                    let refined = partition.meet(&Congruence::kernel(&h));
                    if refined != partition {
                        partition = refined;
                        homs.push(GeneratorMap { generator: gi, map: h });
                    }
                    !partition.is_identity()
                });
            }
            if partition.is_identity() {
                return Ok(Membership {
                    member: true,
                    certificate: MembershipCertificate::SeparatingFamily { homs },
                });
            }
            let labels = partition.labels();
            let b = (0..n).find(|&b| labels[b] != b).expect("non-identity partition");
            Ok(Membership {
                member: false,
                certificate: MembershipCertificate::InseparablePair { pair: [labels[b], b] },
            })
        }
    }
}

pub fn is_member(algebra: &FiniteAlgebra, k: &Quasivariety) -> Result<bool> {
    Ok(membership(algebra, k)?.member)
}

/// `Cg_K^A(pairs)`: the least congruence `θ` containing `pairs` with `A/θ ∈ K`.
pub fn relative_congruence(algebra: &FiniteAlgebra, pairs: &[(Elem, Elem)], k: &Quasivariety) -> Result<Congruence> {
    let a = k.normalize(algebra)?;
    if let Some(&(x, y)) = pairs.iter().find(|&&(x, y)| x >= a.size() || y >= a.size()) {
        return Err(Error::Precondition(format!("pair ({}, {}) outside the universe", x, y)));
    }
    match &k.body {
        Body::Generated(gens) => {
            let mut theta = Congruence::total(a.size());
            for g in gens {
                HomSearch::new(&a, g, &k.signature)?.for_each(|map| {
                    if pairs.iter().all(|&(x, y)| map[x] == map[y]) {
                        theta = theta.meet(&Congruence::kernel(&Homomorphism::new(map.to_vec())));
                    }
                    true
                });
            }
            Ok(theta)
        }
        Body::Axiomatic(axioms) => {
            let compiled = axioms
                .iter()
                .map(|q| {
                    let vars = q.vars();
                    let premises = q
                        .premises
                        .iter()
                        .map(|e| CompiledEquation::new(e, &k.signature, &vars))
                        .collect::<Result<Vec<_>>>()?;
                    let conclusion = CompiledEquation::new(&q.conclusion, &k.signature, &vars)?;
                    Ok((premises, conclusion, vars.len()))
                })
                .collect::<Result<Vec<_>>>()?;
            let mut generators = pairs.to_vec();
            loop {
                let theta = congruence_closure(&a, &generators);
                let (q, _) = quotient(&a, &theta);
                let blocks = theta.blocks();
                let violation = compiled.iter().find_map(|(premises, conclusion, nvars)| {
                    first_violation(&q, premises, conclusion, *nvars).map(|env| {
                        let c = conclusion.left.eval(&q, &env);
                        let d = conclusion.right.eval(&q, &env);
                        (blocks[c][0], blocks[d][0])
                    })
                });
                match violation {
                    Some(pair) => generators.push(pair),
                    None => return Ok(theta),
                }
            }
        }
    }
}

/// The free algebra of a generated quasivariety over a finite set of names.
#[derive(Clone, Debug)]
pub struct FreeAlgebra {
    names: Vec<String>,
    generated: GeneratedAlgebra,
}

impl FreeAlgebra {
    pub fn algebra(&self) -> &FiniteAlgebra {
        self.generated.algebra()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Element of the free generator called `name`.
    pub fn generator(&self, name: &str) -> Option<Elem> {
        let i = self.names.iter().position(|n| n == name)?;
        Some(self.generated.generators()[i])
    }

    /// Free generators in the order of `names`.
    pub fn generator_elements(&self) -> &[Elem] {
        self.generated.generators()
    }

    /// Coordinates of each element in the product of generator copies.
    pub fn tuples(&self) -> &[Vec<Elem>] {
        self.generated.tuples()
    }

    /// The homomorphism into `target` sending the free generators to `images`.
    pub fn lift(&self, target: &FiniteAlgebra, images: &[Elem]) -> Result<Option<Homomorphism>> {
        self.generated.lift(target, images)
    }
}

/// `T_K(names)`, built as the subalgebra of `∏ G` over all assignments of the
/// names into each generator `G`, generated by the coordinate tuples.
pub fn free_algebra(k: &Quasivariety, names: &[String], limits: &Limits) -> Result<FreeAlgebra> {
    let gens = k.generators()?;
    for (i, n) in names.iter().enumerate() {
        if names[..i].contains(n) {
            return Err(Error::Precondition(format!("generator name `{}` repeated", n)));
        }
    }
    let mut factors = Vec::new();
    let mut columns = Vec::new();
    for g in gens {
        for assignment in Tuples::new(g.size(), names.len()) {
            factors.push(g);
            columns.push(assignment);
        }
    }
    let generators: Vec<Vec<Elem>> = (0..names.len())
        .map(|i| columns.iter().map(|c| c[i]).collect())
        .collect();
    let generated = GeneratedAlgebra::generate(k.signature.clone(), &factors, &generators, limits.product_cap)?;
    Ok(FreeAlgebra {
        names: names.to_vec(),
        generated,
    })
}

/// Every assignment of the free generators into a member of size at most
/// `bound` extends to exactly one homomorphism, and `lift` returns it.
pub fn verify_free_universal_property(
    free: &FreeAlgebra,
    k: &Quasivariety,
    bound: usize,
    limits: &Limits,
) -> Result<Verdict> {
    let f = free.algebra();
    let gens = free.generator_elements();
    let mut verdict = Verdict::new(format!("free algebra of {} on {} generator(s)", k.name(), gens.len()))
        .with_bound("max_size", bound);
    for (i, b) in members_up_to(k, bound, limits)?.iter().enumerate() {
        let name = format!("B{} (size {})", i, b.size());
        let mut failure = None;
        let mut checked = 0;
        for images in Tuples::new(b.size(), gens.len()) {
            checked += 1;
            let search = gens
                .iter()
                .zip(&images)
                .fold(HomSearch::new(f, b, &k.signature)?, |s, (&g, &v)| s.pin(g, v));
            let lifts = search.count();
            let lifted = free.lift(b, &images)?;
            if lifts != 1 || lifted.is_none_or(|h| search.first() != Some(h)) {
                failure = Some(Certificate::Lifts {
                    target: b.clone(),
                    map: Homomorphism::new(images),
                    lifts,
                });
                break;
            }
        }
        verdict.push(match failure {
            Some(c) => Instance::fails(name, c),
            None => Instance::holds(name).with_detail("assignments", checked),
        });
    }
    Ok(verdict)
}

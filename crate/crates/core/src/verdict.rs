//! Bound-relative verdicts with replayable certificates.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{Elem, FiniteAlgebra, Homomorphism};
use crate::quasivariety::MembershipCertificate;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    Fails,
    /// Nothing was found within the search bounds.
    Unknown,
}

impl Status {
    /// Fails dominates Unknown, which dominates Holds.
    pub fn combine(self, other: Status) -> Status {
        match (self, other) {
            (Status::Fails, _) | (_, Status::Fails) => Status::Fails,
            (Status::Unknown, _) | (_, Status::Unknown) => Status::Unknown,
            _ => Status::Holds,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::Unknown => "unknown-within-bound",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Evidence attached to an instance. Every variant carries the full algebras
/// and maps involved so the claim can be re-checked independently.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `map` identifies two distinct elements.
    NotInjective {
        source: FiniteAlgebra,
        target: FiniteAlgebra,
        map: Homomorphism,
        pair: [Elem; 2],
    },
    /// `missing` is not in the image of `map`.
    NotSurjective {
        source: FiniteAlgebra,
        target: FiniteAlgebra,
        map: Homomorphism,
        missing: Elem,
    },
    /// An algebra fails membership in a presentation.
    NotMember {
        algebra: FiniteAlgebra,
        presentation: String,
        certificate: MembershipCertificate,
    },
    /// `algebra` embeds into the expanded member `extension` but is not itself
    /// the expansion of its reduct.
    NotExpandable {
        algebra: FiniteAlgebra,
        extension: FiniteAlgebra,
        embedding: Homomorphism,
        symbol: String,
        tuple: Vec<Elem>,
        table_value: Elem,
        induced_value: Option<Elem>,
    },
    /// The value of an implicit operation lies outside the subuniverse
    /// generated by its arguments.
    NotInterpolated {
        algebra: FiniteAlgebra,
        op: String,
        tuple: Vec<Elem>,
        value: Elem,
        generated: Vec<Elem>,
    },
    /// A base-language homomorphism does not preserve an operation.
    NotPreserved {
        source: FiniteAlgebra,
        target: FiniteAlgebra,
        map: Homomorphism,
        symbol: String,
        tuple: Vec<Elem>,
    },
    /// Two distinct witness tuples for the same defined tuple.
    Witnesses {
        algebra: FiniteAlgebra,
        op: String,
        tuple: Vec<Elem>,
        value: Elem,
        first: Vec<Elem>,
        second: Vec<Elem>,
    },
    /// A tuple that never enters the domain within the bound.
    NoExtension {
        algebra: FiniteAlgebra,
        op: String,
        tuple: Vec<Elem>,
    },
    /// An extension in which the requested tuples are defined.
    Extension {
        algebra: FiniteAlgebra,
        extension: FiniteAlgebra,
        embedding: Homomorphism,
    },
    /// A pair of maps whose equalizer is the image of an embedding.
    Equalizer {
        codomain: FiniteAlgebra,
        first: Homomorphism,
        second: Homomorphism,
    },
    /// A term translation does not round-trip or leaves the target class.
    Translation {
        condition: String,
        algebra: FiniteAlgebra,
        result: FiniteAlgebra,
    },
    /// A homomorphism into a member does not lift uniquely.
    Lifts {
        target: FiniteAlgebra,
        map: Homomorphism,
        lifts: usize,
    },
    /// Checks that should agree do not.
    Disagreement { verdicts: BTreeMap<String, Status> },
}

/// A scalar fact recorded for an instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Detail {
    Bool(bool),
    Count(usize),
    Text(String),
    Elems(Vec<Elem>),
}

impl From<bool> for Detail {
    fn from(b: bool) -> Self {
        Detail::Bool(b)
    }
}

impl From<usize> for Detail {
    fn from(n: usize) -> Self {
        Detail::Count(n)
    }
}

impl From<&str> for Detail {
    fn from(s: &str) -> Self {
        Detail::Text(s.to_string())
    }
}

impl From<String> for Detail {
    fn from(s: String) -> Self {
        Detail::Text(s)
    }
}

impl From<Vec<Elem>> for Detail {
    fn from(v: Vec<Elem>) -> Self {
        Detail::Elems(v)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Instance {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Detail>,
}

impl Instance {
    pub fn new(name: impl Into<String>, status: Status) -> Self {
        Instance {
            name: name.into(),
            status,
            certificate: None,
            details: BTreeMap::new(),
        }
    }

    pub fn holds(name: impl Into<String>) -> Self {
        Instance::new(name, Status::Holds)
    }

    pub fn fails(name: impl Into<String>, certificate: Certificate) -> Self {
        Instance::new(name, Status::Fails).with_certificate(certificate)
    }

    pub fn unknown(name: impl Into<String>) -> Self {
        Instance::new(name, Status::Unknown)
    }

    pub fn with_certificate(mut self, certificate: Certificate) -> Self {
        self.certificate = Some(certificate);
        self
    }

    pub fn with_detail(mut self, key: &str, value: impl Into<Detail>) -> Self {
        self.details.insert(key.to_string(), value.into());
        self
    }
}

/// The outcome of a bounded check: one entry per examined instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub claim: String,
    pub bounds: BTreeMap<String, usize>,
    pub instances: Vec<Instance>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn new(claim: impl Into<String>) -> Self {
        Verdict {
            claim: claim.into(),
            bounds: BTreeMap::new(),
            instances: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn with_bound(mut self, key: &str, value: usize) -> Self {
        self.bounds.insert(key.to_string(), value);
        self
    }

    pub fn push(&mut self, instance: Instance) {
        self.instances.push(instance);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Combined status; a verdict without instances holds vacuously.
    pub fn status(&self) -> Status {
        self.instances
            .iter()
            .fold(Status::Holds, |acc, i| acc.combine(i.status))
    }

    pub fn holds(&self) -> bool {
        self.status() == Status::Holds
    }

    pub fn is_vacuous(&self) -> bool {
        self.instances.is_empty()
    }

    /// The first failing instance, if any.
    pub fn first_failure(&self) -> Option<&Instance> {
        self.instances.iter().find(|i| i.status == Status::Fails)
    }
}

//! Finite algebras over explicit signatures.
//!
//! The universe of an algebra of size `n` is always `0..n`. An operation of
//! arity `k` is stored as a flat row-major table of length `n^k` in which the
//! last argument varies fastest, so `f(a0, .., ak-1)` lives at index
//! `((a0 * n + a1) * n + ..) * n + ak-1`. Nullary operations have a table of
//! length one.

mod congruence;
mod hom;
mod product;
mod subalgebra;

use std::fmt;
use std::sync::Arc;

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::{Error, Result};

pub use congruence::{congruence_closure, quotient, Congruence};
pub use hom::{enumerate_homomorphisms, is_embedding, is_homomorphism, HomSearch, Homomorphism};
pub use product::{direct_product, GeneratedAlgebra, ProductView, Step};
pub use subalgebra::{generated_subalgebra, subalgebra, subuniverses};

/// An element of a finite universe.
pub type Elem = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

/// A named list of operation symbols.
///
/// Two signatures compare equal when they contain the same symbols with the
/// same arities; the name and the order of declaration are labels only.
#[derive(Clone, Debug, Serialize)]
pub struct Signature {
    name: String,
    symbols: Vec<Symbol>,
}

impl Signature {
    pub fn new<S: Into<String>>(
        name: impl Into<String>,
        symbols: impl IntoIterator<Item = (S, usize)>,
    ) -> Result<Self> {
        let mut out: Vec<Symbol> = Vec::new();
        for (sym, arity) in symbols {
            let sym = sym.into();
            if out.iter().any(|s| s.name == sym) {
                return Err(Error::DuplicateSymbol(sym));
            }
            out.push(Symbol { name: sym, arity });
        }
        Ok(Signature {
            name: name.into(),
            symbols: out,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    pub fn symbol(&self, name: &str) -> Option<&Symbol> {
        self.symbols.iter().find(|s| s.name == name)
    }

    /// True when every symbol of `self` occurs in `other` with the same arity.
    pub fn is_subsignature_of(&self, other: &Signature) -> bool {
        self.symbols
            .iter()
            .all(|s| other.symbol(&s.name).is_some_and(|o| o.arity == s.arity))
    }

    /// A new signature with `extra` symbols appended.
    pub fn extended<S: Into<String>>(
        &self,
        name: impl Into<String>,
        extra: impl IntoIterator<Item = (S, usize)>,
    ) -> Result<Signature> {
        let base = self.symbols.iter().map(|s| (s.name.clone(), s.arity));
        let extra = extra.into_iter().map(|(s, a)| (s.into(), a));
        Signature::new(name, base.chain(extra))
    }

    /// Maps each symbol of `self` to its index in `other`.
    pub(crate) fn embed_into(&self, other: &Signature) -> Result<Vec<usize>> {
        self.symbols
            .iter()
            .map(|s| match other.index_of(&s.name) {
                Some(i) if other.symbols[i].arity == s.arity => Ok(i),
                Some(i) => Err(Error::ArityMismatch {
                    symbol: s.name.clone(),
                    expected: s.arity,
                    found: other.symbols[i].arity,
                }),
                None => Err(Error::UnknownSymbol(s.name.clone())),
            })
            .collect()
    }
}

impl PartialEq for Signature {
    fn eq(&self, other: &Self) -> bool {
        self.symbols.len() == other.symbols.len() && self.is_subsignature_of(other)
    }
}

impl Eq for Signature {}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "signature {} {{", self.name)?;
        for (i, s) in self.symbols.iter().enumerate() {
            let sep = if i + 1 == self.symbols.len() { "" } else { ";" };
            write!(f, " {}/{}{}", s.name, s.arity, sep)?;
        }
        write!(f, " }}")
    }
}

/// Read access to the operations of an algebra, possibly computed on demand.
pub trait Operations {
    fn signature(&self) -> &Signature;
    fn size(&self) -> usize;
    fn apply(&self, symbol: usize, args: &[Elem]) -> Elem;
}

#[derive(Clone, Debug)]
pub struct FiniteAlgebra {
    signature: Arc<Signature>,
    size: usize,
    tables: Vec<Vec<Elem>>,
}

impl FiniteAlgebra {
    /// Builds an algebra from flat row-major tables given in signature order.
    pub fn new(signature: Arc<Signature>, size: usize, tables: Vec<Vec<Elem>>) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptyUniverse);
        }
        if tables.len() != signature.len() {
            return Err(Error::SignatureMismatch(format!(
                "{} tables supplied for {} symbols",
                tables.len(),
                signature.len()
            )));
        }
        for (sym, table) in signature.symbols().iter().zip(&tables) {
            let expected = table_len(size, sym.arity).ok_or_else(|| Error::InvalidTable {
                symbol: sym.name.clone(),
                message: "table too large".into(),
            })?;
            if table.len() != expected {
                return Err(Error::InvalidTable {
                    symbol: sym.name.clone(),
                    message: format!("expected {} entries, found {}", expected, table.len()),
                });
            }
            if let Some(bad) = table.iter().find(|&&v| v >= size) {
                return Err(Error::InvalidTable {
                    symbol: sym.name.clone(),
                    message: format!("entry {} outside universe 0..{}", bad, size),
                });
            }
        }
        Ok(FiniteAlgebra {
            signature,
            size,
            tables,
        })
    }

    /// Builds an algebra by evaluating `op(symbol_index, args)` on every tuple.
    pub fn from_fn(signature: Arc<Signature>, size: usize, mut op: impl FnMut(usize, &[Elem]) -> Elem) -> Result<Self> {
        let tables = signature
            .symbols()
            .iter()
            .enumerate()
            .map(|(i, s)| Tuples::new(size, s.arity).map(|t| op(i, &t)).collect())
            .collect();
        FiniteAlgebra::new(signature, size, tables)
    }

    /// The one-element algebra over `signature`.
    pub fn trivial(signature: Arc<Signature>) -> Self {
        let tables = signature.symbols().iter().map(|_| vec![0]).collect();
        FiniteAlgebra {
            signature,
            size: 1,
            tables,
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn signature_arc(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn tables(&self) -> &[Vec<Elem>] {
        &self.tables
    }

    pub fn table(&self, symbol: usize) -> &[Elem] {
        &self.tables[symbol]
    }

    pub fn table_by_name(&self, name: &str) -> Option<&[Elem]> {
        self.signature.index_of(name).map(|i| self.tables[i].as_slice())
    }

    pub fn apply(&self, symbol: usize, args: &[Elem]) -> Elem {
        self.tables[symbol][encode_tuple(args, self.size)]
    }

    pub fn apply_named(&self, name: &str, args: &[Elem]) -> Option<Elem> {
        let i = self.signature.index_of(name)?;
        (self.signature.symbols()[i].arity == args.len()).then(|| self.apply(i, args))
    }

    /// Value of a nullary symbol.
    pub fn constant(&self, name: &str) -> Option<Elem> {
        self.apply_named(name, &[])
    }

    /// The isomorphic copy in which element `a` is renamed `perm[a]`.
    pub fn relabel(&self, perm: &[Elem]) -> FiniteAlgebra {
        let mut inverse = vec![0; self.size];
        for (a, &p) in perm.iter().enumerate() {
            inverse[p] = a;
        }
        let mut args = Vec::new();
        FiniteAlgebra::from_fn(self.signature.clone(), self.size, |sym, t| {
            args.clear();
            args.extend(t.iter().map(|&x| inverse[x]));
            perm[self.apply(sym, &args)]
        })
        .expect("relabelling preserves well-formedness")
    }

    /// The same algebra presented over a renamed but equal signature.
    pub fn with_signature(&self, signature: Arc<Signature>) -> Result<FiniteAlgebra> {
        let idx = signature.embed_into(&self.signature)?;
        if signature.len() != self.signature.len() {
            return Err(Error::SignatureMismatch(format!(
                "`{}` and `{}` differ",
                signature.name(),
                self.signature.name()
            )));
        }
        let tables = idx.iter().map(|&i| self.tables[i].clone()).collect();
        FiniteAlgebra::new(signature, self.size, tables)
    }

    /// Appends extra operations given as flat tables.
    pub fn expanded(&self, signature: Arc<Signature>, extra: Vec<Vec<Elem>>) -> Result<FiniteAlgebra> {
        let idx = self.signature.embed_into(&signature)?;
        if idx.iter().enumerate().any(|(i, &j)| i != j) {
            return Err(Error::SignatureMismatch(
                "expanded signature must extend the original in order".into(),
            ));
        }
        let mut tables = self.tables.clone();
        tables.extend(extra);
        FiniteAlgebra::new(signature, self.size, tables)
    }

    /// Flat table encoding used for lexicographic comparisons and hashing.
    pub fn table_key(&self) -> Vec<Elem> {
        self.tables.iter().flatten().copied().collect()
    }
}

/// `L`-reduct: the same universe with only the operations named in `language`.
pub fn reduct(algebra: &FiniteAlgebra, language: &Arc<Signature>) -> Result<FiniteAlgebra> {
    let idx = language.embed_into(algebra.signature())?;
    let tables = idx.iter().map(|&i| algebra.tables[i].clone()).collect();
    FiniteAlgebra::new(language.clone(), algebra.size, tables)
}

impl Operations for FiniteAlgebra {
    fn signature(&self) -> &Signature {
        &self.signature
    }

    fn size(&self) -> usize {
        self.size
    }

    fn apply(&self, symbol: usize, args: &[Elem]) -> Elem {
        FiniteAlgebra::apply(self, symbol, args)
    }
}

impl PartialEq for FiniteAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size
            && *self.signature == *other.signature
            && self
                .signature
                .symbols()
                .iter()
                .zip(&self.tables)
                .all(|(s, t)| other.table_by_name(&s.name) == Some(t.as_slice()))
    }
}

impl Eq for FiniteAlgebra {}

impl Serialize for FiniteAlgebra {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        struct Ops<'a>(&'a FiniteAlgebra);
        impl Serialize for Ops<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(self.0.tables.len()))?;
                for (s, t) in self.0.signature.symbols().iter().zip(&self.0.tables) {
                    map.serialize_entry(&s.name, t)?;
                }
                map.end()
            }
        }
        let mut st = serializer.serialize_struct("FiniteAlgebra", 3)?;
        st.serialize_field("signature", self.signature.name())?;
        st.serialize_field("size", &self.size)?;
        st.serialize_field("ops", &Ops(self))?;
        st.end()
    }
}

impl fmt::Display for FiniteAlgebra {
    /// Workspace syntax without the leading `algebra NAME : SIG` header.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{{")?;
        writeln!(f, "  universe {}", self.size)?;
        for (s, t) in self.signature.symbols().iter().zip(&self.tables) {
            write!(f, "  op {} = ", s.name)?;
            write_nested(f, t, self.size, s.arity)?;
            writeln!(f)?;
        }
        write!(f, "}}")
    }
}

fn write_nested(f: &mut fmt::Formatter<'_>, table: &[Elem], n: usize, arity: usize) -> fmt::Result {
    if arity == 0 {
        return write!(f, "{}", table[0]);
    }
    let stride = table.len() / n;
    write!(f, "[")?;
    for i in 0..n {
        if i > 0 {
            write!(f, ",")?;
        }
        write_nested(f, &table[i * stride..(i + 1) * stride], n, arity - 1)?;
    }
    write!(f, "]")
}

pub(crate) fn table_len(n: usize, arity: usize) -> Option<usize> {
    n.checked_pow(u32::try_from(arity).ok()?)
}

pub(crate) fn encode_tuple(args: &[Elem], n: usize) -> usize {
    args.iter().fold(0, |acc, &a| acc * n + a)
}

/// Advances `tuple` to its lexicographic successor over `0..n` (last position
/// fastest). Returns false after the last tuple.
pub fn advance_tuple(tuple: &mut [Elem], n: usize) -> bool {
    for slot in tuple.iter_mut().rev() {
        *slot += 1;
        if *slot < n {
            return true;
        }
        *slot = 0;
    }
    false
}

/// All tuples of length `arity` over `0..n` in lexicographic order.
#[derive(Clone, Debug)]
pub struct Tuples {
    n: usize,
    next: Option<Vec<Elem>>,
}

impl Tuples {
    pub fn new(n: usize, arity: usize) -> Self {
        let next = (n > 0 || arity == 0).then(|| vec![0; arity]);
        Tuples { n, next }
    }
}

impl Iterator for Tuples {
    type Item = Vec<Elem>;

    fn next(&mut self) -> Option<Vec<Elem>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if advance_tuple(&mut succ, self.n) {
            self.next = Some(succ);
        }
        Some(current)
    }
}

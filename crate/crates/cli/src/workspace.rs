//! Loading and cross-referencing workspace files.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use bethkit::adjunction::{ExpansionSpec, PpExpansionSpec};
use bethkit::algebra::{FiniteAlgebra, Signature};
use bethkit::beth::TermTranslation;
use bethkit::implicit::ImplicitOpSpec;
use bethkit::logic::{parse_workspace, Decl, DeclKind, ExpansionBody, Pos, QuasivarietyBody};
use bethkit::quasivariety::Quasivariety;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WorkspaceError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Syntax(bethkit::Error),
    #[error("duplicate name `{name}`: defined at {first} and again at {second}")]
    Duplicate { name: String, first: Pos, second: Pos },
    #[error("{pos}: table for `{symbol}` in `{algebra}`: {message}")]
    Arity {
        pos: Pos,
        algebra: String,
        symbol: String,
        message: String,
    },
    #[error("{pos}: {message}")]
    Resolution { pos: Pos, message: String },
}

fn resolution(pos: Pos, message: impl Into<String>) -> WorkspaceError {
    WorkspaceError::Resolution {
        pos,
        message: message.into(),
    }
}

/// An expansion declared either by a pp family or by a target class.
#[derive(Clone, Debug)]
pub enum ExpansionDef {
    Pp(PpExpansionSpec),
    Target(ExpansionSpec),
}

/// All named objects of a workspace file.
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    pub signatures: BTreeMap<String, Arc<Signature>>,
    pub algebras: BTreeMap<String, FiniteAlgebra>,
    pub quasivarieties: BTreeMap<String, Quasivariety>,
    pub ppops: BTreeMap<String, ImplicitOpSpec>,
    pub expansions: BTreeMap<String, ExpansionDef>,
    pub translations: BTreeMap<String, TermTranslation>,
}

pub fn load_workspace(path: &Path) -> Result<Workspace, WorkspaceError> {
    let text = std::fs::read_to_string(path).map_err(|e| WorkspaceError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_and_resolve(&text)
}

/// Parses `text` and resolves every reference. Declarations may refer to
/// objects of another kind declared later in the file.
pub fn parse_and_resolve(text: &str) -> Result<Workspace, WorkspaceError> {
    let decls = parse_workspace(text).map_err(WorkspaceError::Syntax)?;
    let mut seen: BTreeMap<&str, Pos> = BTreeMap::new();
    for d in &decls {
        if let Some(first) = seen.insert(d.name(), d.pos) {
            return Err(WorkspaceError::Duplicate {
                name: d.name().to_string(),
                first,
                second: d.pos,
            });
        }
    }
    let mut ws = Workspace::default();
    let of_kind = |rank: usize| decls.iter().filter(move |d| kind_rank(d) == rank);
    for d in of_kind(0) {
        ws.add_signature(d)?;
    }
    for d in of_kind(1) {
        ws.add_algebra(d)?;
    }
    for d in of_kind(2) {
        ws.add_ppop(d)?;
    }
    for d in of_kind(3) {
        ws.add_quasivariety(d)?;
    }
    for d in of_kind(4) {
        ws.add_expansion(d)?;
    }
    for d in of_kind(5) {
        ws.add_translation(d)?;
    }
    Ok(ws)
}

fn kind_rank(d: &Decl) -> usize {
    match d.kind {
        DeclKind::Signature { .. } => 0,
        DeclKind::Algebra { .. } => 1,
        DeclKind::PpOp { .. } => 2,
        DeclKind::Quasivariety { .. } => 3,
        DeclKind::Expansion { .. } => 4,
        DeclKind::Translation { .. } => 5,
    }
}

impl Workspace {
    pub fn len(&self) -> usize {
        self.signatures.len()
            + self.algebras.len()
            + self.quasivarieties.len()
            + self.ppops.len()
            + self.expansions.len()
            + self.translations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn signature(&self, name: &str, pos: Pos) -> Result<Arc<Signature>, WorkspaceError> {
        self.signatures
            .get(name)
            .cloned()
            .ok_or_else(|| resolution(pos, format!("unknown signature `{}`", name)))
    }

    fn quasivariety(&self, name: &str, pos: Pos) -> Result<Quasivariety, WorkspaceError> {
        self.quasivarieties
            .get(name)
            .cloned()
            .ok_or_else(|| resolution(pos, format!("unknown quasivariety `{}`", name)))
    }

    fn add_signature(&mut self, d: &Decl) -> Result<(), WorkspaceError> {
        let DeclKind::Signature { name, symbols } = &d.kind else {
            unreachable!()
        };
        let sig = Signature::new(name.clone(), symbols.iter().map(|(s, a, _)| (s.clone(), *a)))
            .map_err(|e| resolution(d.pos, e.to_string()))?;
        self.signatures.insert(name.clone(), Arc::new(sig));
        Ok(())
    }

    fn add_algebra(&mut self, d: &Decl) -> Result<(), WorkspaceError> {
        let DeclKind::Algebra {
            name,
            signature,
            size,
            ops,
        } = &d.kind
        else {
            unreachable!()
        };
        let sig = self.signature(signature, d.pos)?;
        let mut tables: Vec<Option<Vec<usize>>> = vec![None; sig.len()];
        for (symbol, raw, pos) in ops {
            let i = sig
                .index_of(symbol)
                .ok_or_else(|| resolution(*pos, format!("`{}` is not a symbol of `{}`", symbol, sig.name())))?;
            if tables[i].is_some() {
                return Err(resolution(*pos, format!("table for `{}` given twice", symbol)));
            }
            let arity = sig.symbols()[i].arity;
            let flat = raw.flatten(arity, *size).map_err(|message| WorkspaceError::Arity {
                pos: *pos,
                algebra: name.clone(),
                symbol: symbol.clone(),
                message: format!("{} (arity {}, universe {})", message, arity, size),
            })?;
            tables[i] = Some(flat);
        }
        let tables = tables
            .into_iter()
            .zip(sig.symbols())
            .map(|(t, s)| t.ok_or_else(|| resolution(d.pos, format!("`{}` has no table for `{}`", name, s.name))))
            .collect::<Result<Vec<_>, _>>()?;
        let algebra = FiniteAlgebra::new(sig, *size, tables).map_err(|e| match e {
            bethkit::Error::InvalidTable { symbol, message } => WorkspaceError::Arity {
                pos: d.pos,
                algebra: name.clone(),
                symbol,
                message,
            },
            other => resolution(d.pos, other.to_string()),
        })?;
        self.algebras.insert(name.clone(), algebra);
        Ok(())
    }

    fn add_ppop(&mut self, d: &Decl) -> Result<(), WorkspaceError> {
        let DeclKind::PpOp {
            name,
            arity,
            signature,
            formula,
        } = &d.kind
        else {
            unreachable!()
        };
        let sig = self.signature(signature, d.pos)?;
        let formula = formula
            .clone()
            .resolve(&sig)
            .map_err(|e| resolution(d.pos, e.to_string()))?;
        let spec =
            ImplicitOpSpec::new(name.clone(), *arity, sig, formula).map_err(|e| resolution(d.pos, e.to_string()))?;
        self.ppops.insert(name.clone(), spec);
        Ok(())
    }

    fn add_quasivariety(&mut self, d: &Decl) -> Result<(), WorkspaceError> {
        let DeclKind::Quasivariety { name, signature, body } = &d.kind else {
            unreachable!()
        };
        let sig = self.signature(signature, d.pos)?;
        let k = match body {
            QuasivarietyBody::Generated(names) => {
                let mut gens = Vec::new();
                for (g, pos) in names {
                    let a = self
                        .algebras
                        .get(g)
                        .ok_or_else(|| resolution(*pos, format!("unknown algebra `{}`", g)))?;
                    if a.signature().name() != sig.name() {
                        return Err(resolution(
                            *pos,
                            format!("`{}` is over `{}`, expected `{}`", g, a.signature().name(), sig.name()),
                        ));
                    }
                    gens.push(a.clone());
                }
                Quasivariety::generated(name.clone(), gens)
            }
            QuasivarietyBody::Axioms(axioms) => {
                let mut resolved = Vec::new();
                for ax in axioms {
                    resolved.push(
                        ax.axiom
                            .clone()
                            .resolve(&sig)
                            .map_err(|e| resolution(ax.pos, e.to_string()))?,
                    );
                }
                Quasivariety::axiomatic(name.clone(), sig, resolved)
            }
        }
        .map_err(|e| resolution(d.pos, e.to_string()))?;
        self.quasivarieties.insert(name.clone(), k);
        Ok(())
    }

    fn add_expansion(&mut self, d: &Decl) -> Result<(), WorkspaceError> {
        let DeclKind::Expansion { name, base, body } = &d.kind else {
            unreachable!()
        };
        let k = self.quasivariety(base, d.pos)?;
        let def = match body {
            ExpansionBody::PpOps(ops) => {
                let mut family = Vec::new();
                for (symbol, op, pos) in ops {
                    let spec = self
                        .ppops
                        .get(op)
                        .ok_or_else(|| resolution(*pos, format!("unknown ppop `{}`", op)))?;
                    family.push((symbol.clone(), spec.clone()));
                }
                ExpansionDef::Pp(
                    PpExpansionSpec::new(name.clone(), k, family).map_err(|e| resolution(d.pos, e.to_string()))?,
                )
            }
            ExpansionBody::Target(target) => {
                let m = self.quasivariety(target, d.pos)?;
                ExpansionDef::Target(
                    ExpansionSpec::new(name.clone(), k, m).map_err(|e| resolution(d.pos, e.to_string()))?,
                )
            }
        };
        self.expansions.insert(name.clone(), def);
        Ok(())
    }

    fn add_translation(&mut self, d: &Decl) -> Result<(), WorkspaceError> {
        let DeclKind::Translation {
            name,
            source,
            target,
            map,
        } = &d.kind
        else {
            unreachable!()
        };
        let s = self.signature(source, d.pos)?;
        let t = self.signature(target, d.pos)?;
        let mut terms = Vec::new();
        for (symbol, term, pos) in map {
            terms.push((
                symbol.clone(),
                term.clone().resolve(&t).map_err(|e| resolution(*pos, e.to_string()))?,
            ));
        }
        let tr = TermTranslation::new(name.clone(), s, t, terms).map_err(|e| resolution(d.pos, e.to_string()))?;
        self.translations.insert(name.clone(), tr);
        Ok(())
    }
}

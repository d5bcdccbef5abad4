use std::fmt;

use serde::Serialize;

use crate::algebra::{Elem, Operations, Signature};
use crate::{Error, Result};

/// A term tree. Constants are applications with no arguments.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn app(symbol: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(symbol.into(), args)
    }

    pub fn constant(symbol: impl Into<String>) -> Term {
        Term::App(symbol.into(), Vec::new())
    }

    /// Appends variables not yet in `out`, in order of first occurrence.
    pub fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) if args.is_empty() => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// Turns bare identifiers naming nullary symbols of `sig` into constants and
    /// checks that every application matches the signature.
    pub fn resolve(self, sig: &Signature) -> Result<Term> {
        match self {
            Term::Var(v) => match sig.symbol(&v) {
                Some(s) if s.arity == 0 => Ok(Term::App(v, Vec::new())),
                Some(s) => Err(Error::ArityMismatch {
                    symbol: v,
                    expected: s.arity,
                    found: 0,
                }),
                None => Ok(Term::Var(v)),
            },
            Term::App(f, args) => {
                let s = sig.symbol(&f).ok_or_else(|| Error::UnknownSymbol(f.clone()))?;
                if s.arity != args.len() {
                    return Err(Error::ArityMismatch {
                        symbol: f,
                        expected: s.arity,
                        found: args.len(),
                    });
                }
                let args = args.into_iter().map(|a| a.resolve(sig)).collect::<Result<_>>()?;
                Ok(Term::App(f, args))
            }
        }
    }

    /// Replaces variables by terms.
    pub fn substitute(&self, subst: &impl Fn(&str) -> Option<Term>) -> Term {
        match self {
            Term::Var(v) => subst(v).unwrap_or_else(|| self.clone()),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.substitute(subst)).collect()),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{}", v),
            Term::App(s, args) if args.is_empty() => write!(f, "{}", s),
            Term::App(s, args) => {
                write!(f, "{}(", s)?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}", a)?;
                }
                write!(f, ")")
            }
        }
    }
}

impl Serialize for Term {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Equation {
    pub left: Term,
    pub right: Term,
}

impl Equation {
    pub fn new(left: Term, right: Term) -> Self {
        Equation { left, right }
    }

    pub fn collect_vars(&self, out: &mut Vec<String>) {
        self.left.collect_vars(out);
        self.right.collect_vars(out);
    }

    pub fn resolve(self, sig: &Signature) -> Result<Equation> {
        Ok(Equation {
            left: self.left.resolve(sig)?,
            right: self.right.resolve(sig)?,
        })
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.left, self.right)
    }
}

/// `premises[0] & .. & premises[k-1] => conclusion`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quasiequation {
    pub premises: Vec<Equation>,
    pub conclusion: Equation,
}

impl Quasiequation {
    pub fn equation(conclusion: Equation) -> Self {
        Quasiequation {
            premises: Vec::new(),
            conclusion,
        }
    }

    /// Variables in order of first occurrence, premises first.
    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        for p in &self.premises {
            p.collect_vars(&mut out);
        }
        self.conclusion.collect_vars(&mut out);
        out
    }

    pub fn resolve(self, sig: &Signature) -> Result<Quasiequation> {
        Ok(Quasiequation {
            premises: self
                .premises
                .into_iter()
                .map(|e| e.resolve(sig))
                .collect::<Result<_>>()?,
            conclusion: self.conclusion.resolve(sig)?,
        })
    }
}

impl fmt::Display for Quasiequation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.premises.iter().enumerate() {
            let sep = if i + 1 == self.premises.len() { " => " } else { " & " };
            write!(f, "{}{}", p, sep)?;
        }
        write!(f, "{}", self.conclusion)
    }
}

impl Serialize for Quasiequation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `exists bound_vars . body[0] & .. & body[k-1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PpFormula {
    pub bound_vars: Vec<String>,
    pub body: Vec<Equation>,
}

impl PpFormula {
    pub fn new(bound_vars: Vec<String>, body: Vec<Equation>) -> Result<Self> {
        if body.is_empty() {
            return Err(Error::InvalidFormula("empty conjunction".into()));
        }
        for (i, v) in bound_vars.iter().enumerate() {
            if bound_vars[..i].contains(v) {
                return Err(Error::InvalidFormula(format!("variable `{}` bound twice", v)));
            }
        }
        Ok(PpFormula { bound_vars, body })
    }

    /// Free variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<String> {
        let mut all = Vec::new();
        for e in &self.body {
            e.collect_vars(&mut all);
        }
        all.retain(|v| !self.bound_vars.contains(v));
        all
    }

    pub fn resolve(self, sig: &Signature) -> Result<PpFormula> {
        let body = self.body.into_iter().map(|e| e.resolve(sig)).collect::<Result<_>>()?;
        PpFormula::new(self.bound_vars, body)
    }
}

impl fmt::Display for PpFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exists [{}] . ", self.bound_vars.join(", "))?;
        for (i, e) in self.body.iter().enumerate() {
            if i > 0 {
                write!(f, " & ")?;
            }
            write!(f, "{}", e)?;
        }
        Ok(())
    }
}

impl Serialize for PpFormula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A term with variables replaced by slots and symbols by signature indices.
#[derive(Clone, Debug)]
pub(crate) enum Compiled {
    Var(usize),
    App(usize, Vec<Compiled>),
}

impl Compiled {
    pub(crate) fn new(term: &Term, sig: &Signature, vars: &[String]) -> Result<Compiled> {
        match term {
            Term::Var(v) => vars
                .iter()
                .position(|w| w == v)
                .map(Compiled::Var)
                .ok_or_else(|| Error::UnboundVariable(v.clone())),
            Term::App(f, args) => {
                let i = sig.index_of(f).ok_or_else(|| Error::UnknownSymbol(f.clone()))?;
                let arity = sig.symbols()[i].arity;
                if arity != args.len() {
                    return Err(Error::ArityMismatch {
                        symbol: f.clone(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                let args = args
                    .iter()
                    .map(|a| Compiled::new(a, sig, vars))
                    .collect::<Result<_>>()?;
                Ok(Compiled::App(i, args))
            }
        }
    }

    pub(crate) fn eval(&self, algebra: &impl Operations, env: &[Elem]) -> Elem {
        match self {
            Compiled::Var(i) => env[*i],
            Compiled::App(f, args) => {
                let vals: Vec<Elem> = args.iter().map(|a| a.eval(algebra, env)).collect();
                algebra.apply(*f, &vals)
            }
        }
    }

    /// Evaluation over partially filled tables; `None` when an undefined cell is hit.
    pub(crate) fn eval_partial(&self, lookup: &impl Fn(usize, &[Elem]) -> Option<Elem>, env: &[Elem]) -> Option<Elem> {
        match self {
            Compiled::Var(i) => Some(env[*i]),
            Compiled::App(f, args) => {
                let vals = args
                    .iter()
                    .map(|a| a.eval_partial(lookup, env))
                    .collect::<Option<Vec<Elem>>>()?;
                lookup(*f, &vals)
            }
        }
    }
}

pub(crate) struct CompiledEquation {
    pub(crate) left: Compiled,
    pub(crate) right: Compiled,
}

impl CompiledEquation {
    pub(crate) fn new(eq: &Equation, sig: &Signature, vars: &[String]) -> Result<Self> {
        Ok(CompiledEquation {
            left: Compiled::new(&eq.left, sig, vars)?,
            right: Compiled::new(&eq.right, sig, vars)?,
        })
    }

    pub(crate) fn holds(&self, algebra: &impl Operations, env: &[Elem]) -> bool {
        self.left.eval(algebra, env) == self.right.eval(algebra, env)
    }
}

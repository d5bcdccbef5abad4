//! Terms, equations, quasiequations and primitive positive formulas, and
//! their evaluation on finite algebras.

mod parse;
mod term;

use std::collections::BTreeMap;

use crate::algebra::{advance_tuple, Elem, Operations, Signature};
use crate::{Error, Result};

pub use parse::{
    parse_equation, parse_pp_formula, parse_quasiequation, parse_term, parse_workspace, AxiomDecl, Decl, DeclKind,
    ExpansionBody, Pos, QuasivarietyBody, RawTable,
};
pub(crate) use term::{Compiled, CompiledEquation};
pub use term::{Equation, PpFormula, Quasiequation, Term};

/// Values for the variables of a formula.
pub type Assignment = BTreeMap<String, Elem>;

pub fn eval_term(algebra: &impl Operations, term: &Term, assignment: &Assignment) -> Result<Elem> {
    let vars: Vec<String> = assignment.keys().cloned().collect();
    let env: Vec<Elem> = assignment.values().copied().collect();
    let compiled = Compiled::new(term, algebra.signature(), &vars)?;
    if env.iter().any(|&e| e >= algebra.size()) {
        return Err(Error::Precondition("assignment value outside the universe".into()));
    }
    Ok(compiled.eval(algebra, &env))
}

/// A pp formula compiled against a signature with a fixed order of free
/// variables; bound variables occupy the slots after the free ones.
pub(crate) struct CompiledPp {
    free: usize,
    bound: usize,
    body: Vec<CompiledEquation>,
}

impl CompiledPp {
    pub(crate) fn new(formula: &PpFormula, sig: &Signature, free_order: &[String]) -> Result<Self> {
        for v in formula.free_vars() {
            if !free_order.contains(&v) {
                return Err(Error::UnboundVariable(v));
            }
        }
        if let Some(v) = formula.bound_vars.iter().find(|v| free_order.contains(v)) {
            return Err(Error::InvalidFormula(format!("bound variable `{}` is also free", v)));
        }
        let mut slots: Vec<String> = free_order.to_vec();
        slots.extend(formula.bound_vars.iter().cloned());
        let body = formula
            .body
            .iter()
            .map(|e| CompiledEquation::new(e, sig, &slots))
            .collect::<Result<_>>()?;
        Ok(CompiledPp {
            free: free_order.len(),
            bound: formula.bound_vars.len(),
            body,
        })
    }

    /// Calls `visit` with every witness tuple (lexicographic order) until it
    /// returns false.
    pub(crate) fn for_each_witness(
        &self,
        algebra: &impl Operations,
        free_values: &[Elem],
        mut visit: impl FnMut(&[Elem]) -> bool,
    ) {
        debug_assert_eq!(free_values.len(), self.free);
        let mut env = free_values.to_vec();
        env.resize(self.free + self.bound, 0);
        loop {
            if self.body.iter().all(|e| e.holds(algebra, &env)) && !visit(&env[self.free..]) {
                return;
            }
            if !advance_tuple(&mut env[self.free..], algebra.size()) {
                return;
            }
        }
    }

    pub(crate) fn first_witness(&self, algebra: &impl Operations, free_values: &[Elem]) -> Option<Vec<Elem>> {
        let mut out = None;
        self.for_each_witness(algebra, free_values, |w| {
            out = Some(w.to_vec());
            false
        });
        out
    }

    pub(crate) fn holds(&self, algebra: &impl Operations, free_values: &[Elem]) -> bool {
        self.first_witness(algebra, free_values).is_some()
    }
}

/// Decides `A ⊨ φ(σ)`. On success returns the lexicographically least witness
/// tuple for the bound variables (empty when none are bound).
pub fn satisfies_pp(
    algebra: &impl Operations,
    formula: &PpFormula,
    assignment: &Assignment,
) -> Result<Option<Vec<Elem>>> {
    let free: Vec<String> = assignment.keys().cloned().collect();
    let values: Vec<Elem> = assignment.values().copied().collect();
    let compiled = CompiledPp::new(formula, algebra.signature(), &free)?;
    Ok(compiled.first_witness(algebra, &values))
}

/// Checks a quasiequation under all assignments to its variables (in order of
/// first occurrence). Returns the lexicographically least counterexample.
pub fn check_quasiequation(algebra: &impl Operations, q: &Quasiequation) -> Result<Option<Assignment>> {
    let vars = q.vars();
    let premises = q
        .premises
        .iter()
        .map(|e| CompiledEquation::new(e, algebra.signature(), &vars))
        .collect::<Result<Vec<_>>>()?;
    let conclusion = CompiledEquation::new(&q.conclusion, algebra.signature(), &vars)?;
    Ok(first_violation(algebra, &premises, &conclusion, vars.len()).map(|env| vars.into_iter().zip(env).collect()))
}

pub(crate) fn first_violation(
    algebra: &impl Operations,
    premises: &[CompiledEquation],
    conclusion: &CompiledEquation,
    nvars: usize,
) -> Option<Vec<Elem>> {
    let mut env = vec![0; nvars];
    loop {
        if premises.iter().all(|p| p.holds(algebra, &env)) && !conclusion.holds(algebra, &env) {
            return Some(env);
        }
        if !advance_tuple(&mut env, algebra.size()) {
            return None;
        }
    }
}

use std::collections::HashMap;

use super::{Elem, FiniteAlgebra, Homomorphism, Operations, Signature};
use crate::{Error, Result};

/// Direct product of finitely many algebras over one signature.
///
/// Elements are encoded lexicographically with the last factor varying
/// fastest: `(e0, .., ek-1)` is `((e0 * n1 + e1) * n2 + ..)`.
pub fn direct_product(factors: &[&FiniteAlgebra]) -> Result<FiniteAlgebra> {
    let view = ProductView::new(factors.to_vec(), usize::MAX)?;
    let sig = factors[0].signature_arc().clone();
    FiniteAlgebra::from_fn(sig, view.size(), |sym, args| view.apply(sym, args))
}

/// A product whose operations are computed on demand from its factors.
#[derive(Clone, Debug)]
pub struct ProductView<'a> {
    factors: Vec<&'a FiniteAlgebra>,
    size: usize,
}

impl<'a> ProductView<'a> {
    pub fn new(factors: Vec<&'a FiniteAlgebra>, cap: usize) -> Result<Self> {
        let first = factors
            .first()
            .ok_or_else(|| Error::SignatureMismatch("empty product".into()))?;
        for f in &factors {
            if f.signature() != first.signature() {
                return Err(Error::SignatureMismatch(format!(
                    "factors over `{}` and `{}`",
                    first.signature().name(),
                    f.signature().name()
                )));
            }
        }
        let size = factors
            .iter()
            .try_fold(1usize, |acc, f| acc.checked_mul(f.size()))
            .filter(|&s| s <= cap)
            .ok_or(Error::ProductCapExceeded {
                size: factors.iter().fold(1usize, |acc, f| acc.saturating_mul(f.size())),
                cap,
            })?;
        Ok(ProductView { factors, size })
    }

    pub fn factors(&self) -> &[&'a FiniteAlgebra] {
        &self.factors
    }

    pub fn encode(&self, coords: &[Elem]) -> Elem {
        self.factors
            .iter()
            .zip(coords)
            .fold(0, |acc, (f, &c)| acc * f.size() + c)
    }

    pub fn decode(&self, mut e: Elem) -> Vec<Elem> {
        let mut out = vec![0; self.factors.len()];
        for (slot, f) in out.iter_mut().zip(&self.factors).rev() {
            *slot = e % f.size();
            e /= f.size();
        }
        out
    }

    /// Coordinate projection onto factor `i`.
    pub fn projection(&self, i: usize) -> Homomorphism {
        Homomorphism::new((0..self.size).map(|e| self.decode(e)[i]).collect())
    }
}

impl Operations for ProductView<'_> {
    fn signature(&self) -> &Signature {
        self.factors[0].signature()
    }

    fn size(&self) -> usize {
        self.size
    }

    fn apply(&self, symbol: usize, args: &[Elem]) -> Elem {
        let mut rest = [0; 8];
        let mut heap;
        let rest: &mut [Elem] = if args.len() <= rest.len() {
            let r = &mut rest[..args.len()];
            r.copy_from_slice(args);
            r
        } else {
            heap = args.to_vec();
            &mut heap
        };
        let mut column = [0; 8];
        let mut column_heap;
        let column: &mut [Elem] = if args.len() <= column.len() {
            &mut column[..args.len()]
        } else {
            column_heap = vec![0; args.len()];
            &mut column_heap
        };
        let mut out = 0;
        let mut stride = 1;
        for f in self.factors.iter().rev() {
            let n = f.size();
            for (c, r) in column.iter_mut().zip(rest.iter_mut()) {
                *c = *r % n;
                *r /= n;
            }
            out += f.apply(symbol, column) * stride;
            stride *= n;
        }
        out
    }
}

/// How an element of a generated algebra was first produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    /// The `i`-th generator.
    Generator(usize),
    /// An operation (by signature index) applied to earlier elements.
    Apply(usize, Vec<Elem>),
}

/// A subalgebra of a product generated by explicit tuples, keeping for each
/// element one producing step so maps defined on generators can be extended.
#[derive(Clone, Debug)]
pub struct GeneratedAlgebra {
    algebra: FiniteAlgebra,
    tuples: Vec<Vec<Elem>>,
    generators: Vec<Elem>,
    steps: Vec<Step>,
    order: Vec<Elem>,
}

impl GeneratedAlgebra {
    /// Generates the subalgebra of `factors[0] × .. × factors[k-1]` spanned by
    /// `generators` (each a coordinate tuple). Elements are numbered in
    /// lexicographic order of their tuples. `cap` bounds the product size.
    pub fn generate(
        signature: std::sync::Arc<Signature>,
        factors: &[&FiniteAlgebra],
        generators: &[Vec<Elem>],
        cap: usize,
    ) -> Result<GeneratedAlgebra> {
        for f in factors {
            if *f.signature() != *signature {
                return Err(Error::SignatureMismatch(format!(
                    "factor over `{}`, expected `{}`",
                    f.signature().name(),
                    signature.name()
                )));
            }
        }
        let product_size = factors.iter().fold(1usize, |acc, f| acc.saturating_mul(f.size()));
        if product_size > cap {
            return Err(Error::ProductCapExceeded {
                size: product_size,
                cap,
            });
        }
        let idx = signature.embed_into(factors.first().map_or(&signature, |f| f.signature()))?;
        let mut tuples: Vec<Vec<Elem>> = Vec::new();
        let mut index: HashMap<Vec<Elem>, usize> = HashMap::new();
        let mut steps = Vec::new();
        let mut gen_ids = Vec::new();
        let mut insert = |t: Vec<Elem>, step: Step, tuples: &mut Vec<Vec<Elem>>, steps: &mut Vec<Step>| {
            if let Some(&i) = index.get(&t) {
                return (i, false);
            }
            let i = tuples.len();
            index.insert(t.clone(), i);
            tuples.push(t);
            steps.push(step);
            (i, true)
        };
        for (g, t) in generators.iter().enumerate() {
            if t.len() != factors.len() || t.iter().zip(factors).any(|(&c, f)| c >= f.size()) {
                return Err(Error::Precondition(format!("generator {} is not a product tuple", g)));
            }
            gen_ids.push(insert(t.clone(), Step::Generator(g), &mut tuples, &mut steps).0);
        }
        // Semi-naive closure: each round only applies operations to tuples of
        // arguments that involve at least one element found in the previous round.
        let mut done = 0;
        let mut first_round = true;
        loop {
            let known = tuples.len();
            for (sym, s) in signature.symbols().iter().enumerate() {
                if s.arity == 0 {
                    if !first_round {
                        continue;
                    }
                    let t: Vec<Elem> = factors.iter().map(|f| f.apply(idx[sym], &[])).collect();
                    insert(t, Step::Apply(sym, vec![]), &mut tuples, &mut steps);
                    continue;
                }
                if known == 0 {
                    continue;
                }
                let mut args = vec![0; s.arity];
                loop {
                    if args.iter().any(|&a| a >= done) {
                        let t: Vec<Elem> = (0..factors.len())
                            .map(|i| {
                                let column: Vec<Elem> = args.iter().map(|&a| tuples[a][i]).collect();
                                factors[i].apply(idx[sym], &column)
                            })
                            .collect();
                        insert(t, Step::Apply(sym, args.clone()), &mut tuples, &mut steps);
                    }
                    if !super::advance_tuple(&mut args, known) {
                        break;
                    }
                }
            }
            first_round = false;
            if tuples.len() == known {
                break;
            }
            done = known;
        }
        // Renumber in lexicographic order of tuples.
        let mut sorted: Vec<usize> = (0..tuples.len()).collect();
        sorted.sort_by(|&a, &b| tuples[a].cmp(&tuples[b]));
        let mut rank = vec![0; tuples.len()];
        for (r, &i) in sorted.iter().enumerate() {
            rank[i] = r;
        }
        let order: Vec<Elem> = (0..tuples.len()).map(|i| rank[i]).collect();
        let mut new_steps = vec![Step::Generator(0); tuples.len()];
        for (i, step) in steps.into_iter().enumerate() {
            new_steps[rank[i]] = match step {
                Step::Apply(sym, args) => Step::Apply(sym, args.into_iter().map(|a| rank[a]).collect()),
                g => g,
            };
        }
        let new_tuples: Vec<Vec<Elem>> = sorted.iter().map(|&i| tuples[i].clone()).collect();
        let lookup: HashMap<&Vec<Elem>, usize> = new_tuples.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let size = new_tuples.len();
        if size == 0 {
            return Err(Error::EmptyUniverse);
        }
        let algebra = FiniteAlgebra::from_fn(signature.clone(), size, |sym, args| {
            let t: Vec<Elem> = (0..factors.len())
                .map(|i| {
                    let column: Vec<Elem> = args.iter().map(|&a| new_tuples[a][i]).collect();
                    factors[i].apply(idx[sym], &column)
                })
                .collect();
            lookup[&t]
        })?;
        Ok(GeneratedAlgebra {
            algebra,
            tuples: new_tuples,
            generators: gen_ids.into_iter().map(|g| rank[g]).collect(),
            steps: new_steps,
            order,
        })
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    pub fn into_algebra(self) -> FiniteAlgebra {
        self.algebra
    }

    /// Coordinate tuple of each element.
    pub fn tuples(&self) -> &[Vec<Elem>] {
        &self.tuples
    }

    /// Element index of each generator tuple (duplicates allowed).
    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn step(&self, e: Elem) -> &Step {
        &self.steps[e]
    }

    /// Extends `images` (one per generator) along the generation steps to a
    /// map into `target`, which must interpret every symbol of the algebra's
    /// signature. Returns `None` when the generator images are inconsistent or
    /// the extension is not a homomorphism.
    pub fn lift(&self, target: &FiniteAlgebra, images: &[Elem]) -> Result<Option<Homomorphism>> {
        let sig = self.algebra.signature();
        let idx = sig.embed_into(target.signature())?;
        let mut map = vec![usize::MAX; self.algebra.size()];
        for (g, &e) in self.generators.iter().enumerate() {
            let img = images[g];
            if map[e] != usize::MAX && map[e] != img {
                return Ok(None);
            }
            map[e] = img;
        }
        for &e in &self.order {
            if let Step::Apply(sym, args) = &self.steps[e] {
                let vals: Vec<Elem> = args.iter().map(|&a| map[a]).collect();
                map[e] = target.apply(idx[*sym], &vals);
            }
        }
        let ok = super::is_homomorphism(&self.algebra, target, sig, &map)?;
        Ok(ok.then(|| Homomorphism::new(map)))
    }
}

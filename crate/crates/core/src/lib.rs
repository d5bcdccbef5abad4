//! Finite-model workbench for quasivarieties.
//!
//! The crate works with finite algebras over explicit signatures and builds
//! the machinery needed to study pp expansions of quasivarieties at desk
//! scale: homomorphism enumeration, congruence generation, relative
//! congruences, free algebras, pp-defined partial operations, the free
//! extension functor with its unit and counit, and bounded checkers for
//! simplicity of pp expansions and Beth companions.
//!
//! Every "for all members of K" statement is evaluated over the members of
//! bounded size only. Results carry the bounds they were computed with.

pub mod adjunction;
pub mod algebra;
pub mod beth;
mod error;
pub mod fixtures;
pub mod implicit;
pub mod logic;
pub mod quasivariety;
pub mod verdict;

pub use error::{Error, Result};

/// Hard limits guarding the exhaustive searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest algebra size any member enumeration or extension search may reach.
    pub size_cap: usize,
    /// Largest cartesian product (number of tuples) a product construction may range over.
    pub product_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            size_cap: 8,
            product_cap: 1_000_000,
        }
    }
}

impl Limits {
    pub(crate) fn check_bound(&self, bound: usize) -> Result<()> {
        if bound > self.size_cap {
            Err(Error::BoundExceedsCap {
                bound,
                cap: self.size_cap,
            })
        } else {
            Ok(())
        }
    }
}

/// Text attached to every report produced from bounded searches.
pub const FINITE_SCALE_DISCLAIMER: &str = "finite-scale semantics: membership in the quasivariety generated by finitely many finite algebras is tested as ISP membership (ultraproducts of finitely many finite algebras add nothing); every universally quantified claim is checked only over members up to the stated size bound";

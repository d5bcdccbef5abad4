//! Standard small signatures, algebras, quasivarieties and operations used in
//! examples, tests and the bundled workspace.
//!
//! Element conventions: chains are `0 < 1 < .. < n-1`; the four-element
//! Boolean lattice is the square of the two-element chain, so `1` and `2` are
//! its atoms and `3` is the top.

use std::sync::Arc;

use crate::adjunction::{ExpansionSpec, PpExpansionSpec};
use crate::algebra::{reduct, FiniteAlgebra, Signature};
use crate::beth::TermTranslation;
use crate::implicit::ImplicitOpSpec;
use crate::logic::{parse_quasiequation, Quasiequation};
use crate::quasivariety::Quasivariety;

/// Bounded lattices: `meet/2, join/2, bot/0, top/0`.
pub fn bdl() -> Arc<Signature> {
    Arc::new(Signature::new("BDL", [("meet", 2), ("join", 2), ("bot", 0), ("top", 0)]).unwrap())
}

/// Boolean algebras with complement: BDL plus `not/1`.
pub fn ba() -> Arc<Signature> {
    Arc::new(bdl().extended("BA", [("not", 1)]).unwrap())
}

/// Boolean algebras with implication: BDL plus `imp/2`.
pub fn bai() -> Arc<Signature> {
    Arc::new(bdl().extended("BAI", [("imp", 2)]).unwrap())
}

/// Bounded meet-semilattices: `meet/2, bot/0, top/0`.
pub fn bms() -> Arc<Signature> {
    Arc::new(Signature::new("BMS", [("meet", 2), ("bot", 0), ("top", 0)]).unwrap())
}

/// Lattices without bounds: `meet/2, join/2`.
pub fn lat() -> Arc<Signature> {
    Arc::new(Signature::new("LAT", [("meet", 2), ("join", 2)]).unwrap())
}

/// Meet-semilattices: `meet/2`.
pub fn msl() -> Arc<Signature> {
    Arc::new(Signature::new("MSL", [("meet", 2)]).unwrap())
}

/// Monoids: `mul/2, e/0`.
pub fn mon() -> Arc<Signature> {
    Arc::new(Signature::new("Mon", [("mul", 2), ("e", 0)]).unwrap())
}

/// The bounded chain `0 < 1 < .. < n-1`.
pub fn chain(n: usize) -> FiniteAlgebra {
    FiniteAlgebra::from_fn(bdl(), n, |sym, a| match sym {
        0 => a[0].min(a[1]),
        1 => a[0].max(a[1]),
        2 => 0,
        _ => n - 1,
    })
    .unwrap()
}

pub fn chain2() -> FiniteAlgebra {
    chain(2)
}

/// `0 < m < 1` encoded as `0 < 1 < 2`.
pub fn chain3() -> FiniteAlgebra {
    chain(3)
}

pub fn chain4() -> FiniteAlgebra {
    chain(4)
}

/// `{0, a, b, 1}` encoded as `0, 1, 2, 3` with atoms `1` and `2`.
pub fn diamond() -> FiniteAlgebra {
    FiniteAlgebra::from_fn(bdl(), 4, |sym, a| match sym {
        0 => a[0] & a[1],
        1 => a[0] | a[1],
        2 => 0,
        _ => 3,
    })
    .unwrap()
}

pub fn two_ba() -> FiniteAlgebra {
    chain2().expanded(ba(), vec![vec![1, 0]]).unwrap()
}

pub fn four_ba() -> FiniteAlgebra {
    diamond().expanded(ba(), vec![vec![3, 2, 1, 0]]).unwrap()
}

fn with_imp(a: &FiniteAlgebra, top: usize) -> FiniteAlgebra {
    let n = a.size();
    let imp = (0..n * n).map(|i| (top - i / n) | (i % n)).collect();
    a.expanded(bai(), vec![imp]).unwrap()
}

pub fn two_bai() -> FiniteAlgebra {
    with_imp(&chain2(), 1)
}

pub fn four_bai() -> FiniteAlgebra {
    with_imp(&diamond(), 3)
}

/// Bounded meet-semilattice reduct.
pub fn bms_reduct(a: &FiniteAlgebra) -> FiniteAlgebra {
    reduct(a, &bms()).unwrap()
}

/// `{0, 1, 2}` with `1` and `2` incomparable above `0`: a meet-semilattice
/// that is not a lattice.
pub fn vee() -> FiniteAlgebra {
    FiniteAlgebra::from_fn(msl(), 3, |_, a| if a[0] == a[1] { a[0] } else { 0 }).unwrap()
}

/// `({0, 1}, min, 1)`.
pub fn min_monoid() -> FiniteAlgebra {
    FiniteAlgebra::from_fn(mon(), 2, |sym, a| if sym == 0 { a[0].min(a[1]) } else { 1 }).unwrap()
}

/// The cyclic group of order two as a monoid.
pub fn z2_monoid() -> FiniteAlgebra {
    FiniteAlgebra::from_fn(mon(), 2, |sym, a| if sym == 0 { a[0] ^ a[1] } else { 0 }).unwrap()
}

/// Two-element lattice without bounds.
pub fn chain2_lat() -> FiniteAlgebra {
    reduct(&chain2(), &lat()).unwrap()
}

/// Assorted BDL-structures of size at most 3, lattices and non-lattices.
pub fn small_bdl_algebras() -> Vec<FiniteAlgebra> {
    let sig = bdl();
    let mk = |n: usize, f: &dyn Fn(usize, &[usize]) -> usize| FiniteAlgebra::from_fn(sig.clone(), n, f).unwrap();
    vec![
        FiniteAlgebra::trivial(sig.clone()),
        chain2(),
        chain3(),
        mk(2, &|s, a| {
            [
                a.first().copied().unwrap_or(0),
                a.iter().copied().max().unwrap_or(0),
                0,
                1,
            ][s]
        }),
        mk(2, &|_, _| 0),
        mk(3, &|s, a| match s {
            0 => a[0].min(a[1]),
            1 => a[0].max(a[1]),
            2 => 2,
            _ => 0,
        }),
        mk(3, &|s, a| match s {
            0 => a[0].min(a[1]),
            1 => (a[0] + a[1]) % 3,
            2 => 0,
            _ => 1,
        }),
    ]
}

/// Axioms of bounded distributive lattices as quasiequations.
pub const DL_AXIOMS: [&str; 13] = [
    "meet(x, x) = x",
    "join(x, x) = x",
    "meet(x, y) = meet(y, x)",
    "join(x, y) = join(y, x)",
    "meet(x, meet(y, z)) = meet(meet(x, y), z)",
    "join(x, join(y, z)) = join(join(x, y), z)",
    "meet(x, join(x, y)) = x",
    "join(x, meet(x, y)) = x",
    "meet(x, join(y, z)) = join(meet(x, y), meet(x, z))",
    "meet(x, bot) = bot",
    "join(x, bot) = x",
    "meet(x, top) = x",
    "join(x, top) = top",
];

pub fn dl_axiom_list() -> Vec<Quasiequation> {
    let sig = bdl();
    DL_AXIOMS
        .iter()
        .map(|t| parse_quasiequation(t, &sig).unwrap())
        .collect()
}

/// Bounded distributive lattices, generated by the two-element chain.
pub fn dl() -> Quasivariety {
    Quasivariety::generated("DL", vec![chain2()]).unwrap()
}

/// Bounded distributive lattices, by axioms.
pub fn dl_axioms() -> Quasivariety {
    Quasivariety::axiomatic("DLax", bdl(), dl_axiom_list()).unwrap()
}

/// Boolean algebras with complement.
pub fn boolean() -> Quasivariety {
    Quasivariety::generated("BA", vec![two_ba()]).unwrap()
}

/// Boolean algebras with implication.
pub fn boolean_imp() -> Quasivariety {
    Quasivariety::generated("BAI", vec![two_bai()]).unwrap()
}

/// Bounded meet-semilattices.
pub fn bms_q() -> Quasivariety {
    Quasivariety::generated("BMSL", vec![bms_reduct(&chain2())]).unwrap()
}

/// Meet-semilattices generated by [`vee`].
pub fn vee_q() -> Quasivariety {
    Quasivariety::generated("SL", vec![vee()]).unwrap()
}

pub fn monoids() -> Quasivariety {
    Quasivariety::generated("Mon2", vec![min_monoid(), z2_monoid()]).unwrap()
}

/// `compl(x1; y) := meet(x1, y) = bot & join(x1, y) = top`.
pub fn compl() -> ImplicitOpSpec {
    ImplicitOpSpec::parse("compl", 1, bdl(), "exists [] . meet(x1, y) = bot & join(x1, y) = top").unwrap()
}

/// `compl` with a useless witness variable.
pub fn padded_compl() -> ImplicitOpSpec {
    ImplicitOpSpec::parse(
        "padded_compl",
        1,
        bdl(),
        "exists [z1] . z1 = z1 & meet(x1, y) = bot & join(x1, y) = top",
    )
    .unwrap()
}

/// Join of a pair whose first component has a complement.
pub fn jcp() -> ImplicitOpSpec {
    ImplicitOpSpec::parse(
        "jcp",
        2,
        bdl(),
        "exists [z1] . y = join(x1, x2) & meet(x1, z1) = bot & join(x1, z1) = top",
    )
    .unwrap()
}

/// `inv(x1; y) := mul(x1, y) = e & mul(y, x1) = e`.
pub fn inv() -> ImplicitOpSpec {
    ImplicitOpSpec::parse("inv", 1, mon(), "exists [] . mul(x1, y) = e & mul(y, x1) = e").unwrap()
}

pub fn dl_to_ba() -> ExpansionSpec {
    ExpansionSpec::new("DL_to_BA", dl(), boolean()).unwrap()
}

pub fn dl_to_bai() -> ExpansionSpec {
    ExpansionSpec::new("DL_to_BAI", dl(), boolean_imp()).unwrap()
}

pub fn bms_to_dl() -> ExpansionSpec {
    ExpansionSpec::new("BMSL_to_DL", bms_q(), dl()).unwrap()
}

pub fn trivial_expansion(k: Quasivariety) -> ExpansionSpec {
    let name = format!("{}_id", k.name());
    ExpansionSpec::new(name, k.clone(), k).unwrap()
}

/// DL expanded by `not := compl`.
pub fn dl_compl() -> PpExpansionSpec {
    PpExpansionSpec::new("DL_compl", dl(), vec![("not".into(), compl())]).unwrap()
}

/// DL expanded by `g := jcp`.
pub fn dl_jcp() -> PpExpansionSpec {
    PpExpansionSpec::new("DL_jcp", dl(), vec![("g".into(), jcp())]).unwrap()
}

/// DL with the empty family.
pub fn dl_bare() -> PpExpansionSpec {
    PpExpansionSpec::new("DL_bare", dl(), vec![]).unwrap()
}

/// `not := imp(x1, bot)`, from the complement language into the implication language.
pub fn not_via_imp() -> TermTranslation {
    TermTranslation::parse(
        "not_via_imp",
        ba(),
        bai(),
        &[
            ("meet", "meet(x1, x2)"),
            ("join", "join(x1, x2)"),
            ("bot", "bot"),
            ("top", "top"),
            ("not", "imp(x1, bot)"),
        ],
    )
    .unwrap()
}

/// `imp := join(not(x1), x2)`, from the implication language into the complement language.
pub fn imp_via_not() -> TermTranslation {
    TermTranslation::parse(
        "imp_via_not",
        bai(),
        ba(),
        &[
            ("meet", "meet(x1, x2)"),
            ("join", "join(x1, x2)"),
            ("bot", "bot"),
            ("top", "top"),
            ("imp", "join(not(x1), x2)"),
        ],
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::direct_product;
    use crate::logic::check_quasiequation;

    #[test]
    fn lattice_fixtures_satisfy_axioms() {
        for a in [chain2(), chain3(), chain4(), diamond()] {
            for q in dl_axiom_list() {
                assert_eq!(check_quasiequation(&a, &q).unwrap(), None, "{q}");
            }
        }
        let c2 = chain2();
        assert_eq!(direct_product(&[&c2, &c2]).unwrap(), diamond());
    }

    #[test]
    fn implication_tables() {
        assert_eq!(two_bai().table_by_name("imp").unwrap(), &[1, 1, 0, 1]);
        let four = four_bai();
        assert_eq!(four.apply_named("imp", &[1, 0]), Some(2));
        assert_eq!(four.apply_named("imp", &[1, 1]), Some(3));
    }

    #[test]
    fn vee_is_semilattice_but_not_lattice() {
        let v = vee();
        assert_eq!(v.table(0), &[0, 0, 0, 0, 1, 0, 0, 0, 2]);
    }
}

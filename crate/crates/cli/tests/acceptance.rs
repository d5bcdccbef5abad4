//! Acceptance suite: one PASS/FAIL line per criterion, each with a pinned
//! runtime limit. Exits non-zero when any criterion fails.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use bethkit::adjunction::{counit, free_extension};
use bethkit::algebra::{
    congruence_closure, direct_product, enumerate_homomorphisms, generated_subalgebra, reduct, subalgebra,
    subuniverses, Congruence, Elem, FiniteAlgebra, Operations, Tuples,
};
use bethkit::beth::{
    check_beth_companion, check_faithful_term_equivalence, check_interpolation_criterion, check_simplicity_transfer,
    cross_validate_main_theorem, harness_extpp_bang_implies_simple,
};
use bethkit::fixtures;
use bethkit::logic::{eval_term, parse_pp_formula, parse_term, satisfies_pp, Assignment, PpFormula};
use bethkit::quasivariety::{
    free_algebra, is_isomorphic, is_member, members_up_to, relative_congruence, verify_free_universal_property,
};
use bethkit::verdict::{Certificate, Status};
use bethkit::Limits;

type Outcome = Result<String, String>;

/// Number, title, runtime limit in seconds, check.
type Criterion = (usize, &'static str, u64, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn limits() -> Limits {
    Limits::default()
}

/// Closes `seed` under the operations of `a` by repeated application.
fn naive_closure(a: &impl Operations, seed: &[Elem]) -> BTreeSet<Elem> {
    let mut set: BTreeSet<Elem> = seed.iter().copied().collect();
    loop {
        let current: Vec<Elem> = set.iter().copied().collect();
        let mut grew = false;
        for (s, sym) in a.signature().symbols().iter().enumerate() {
            for args in Tuples::new(current.len(), sym.arity) {
                let args: Vec<Elem> = args.iter().map(|&i| current[i]).collect();
                grew |= set.insert(a.apply(s, &args));
            }
        }
        if !grew {
            return set;
        }
    }
}

/// All maps `a -> b` preserving every operation of `a`, by brute force.
fn naive_homs(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Vec<Vec<Elem>> {
    Tuples::new(b.size(), a.size())
        .filter(|m| {
            a.signature().symbols().iter().all(|sym| {
                let (i, j) = (
                    a.signature().index_of(&sym.name).unwrap(),
                    b.signature().index_of(&sym.name).unwrap(),
                );
                Tuples::new(a.size(), sym.arity).all(|t| {
                    let image: Vec<Elem> = t.iter().map(|&x| m[x]).collect();
                    m[a.apply(i, &t)] == b.apply(j, &image)
                })
            })
        })
        .collect()
}

/// The subalgebra of `∏ target` over `homs` generated by the images of `a`,
/// computed by naive closure. Returns its size and the map `a -> product`.
fn hom_product_closure(a: &FiniteAlgebra, target: &FiniteAlgebra, homs: &[Vec<Elem>]) -> (usize, Vec<Elem>) {
    let factors: Vec<&FiniteAlgebra> = vec![target; homs.len()];
    let product = direct_product(&factors).unwrap();
    let n = target.size();
    let encode = |x: Elem| homs.iter().fold(0, |acc, h| acc * n + h[x]);
    let images: Vec<Elem> = (0..a.size()).map(encode).collect();
    (naive_closure(&product, &images).len(), images)
}

fn criterion_1() -> Outcome {
    let (c3, e) = (fixtures::chain3(), fixtures::dl_to_ba());
    let f = ok(free_extension(&c3, &e, &limits()))?;
    ensure!(f.algebra().size() == 4, "|F(Chain3)| = {}", f.algebra().size());
    ensure!(f.unit().is_injective(), "unit is not injective");
    let two = ok(reduct(&fixtures::two_ba(), &fixtures::bdl()))?;
    let homs = naive_homs(&c3, &two);
    ensure!(homs.len() == 2, "oracle found {} reduct homomorphisms", homs.len());
    let (size, images) = hom_product_closure(&c3, &fixtures::two_ba(), &homs);
    ensure!(size == 4, "oracle closure in TwoBA^2 has {} elements", size);
    ensure!(
        images.iter().collect::<BTreeSet<_>>().len() == 3,
        "oracle unit is not injective"
    );
    let (out, code) = run_cli(&["reflect", "--algebra", "Chain3", "--expansion", "DL_to_BA"], None)?;
    let report: serde_json::Value = serde_json::from_slice(&out).map_err(|e| e.to_string())?;
    let details = &report["instances"][0]["details"];
    ensure!(code == Some(0), "reflect exited with {:?}", code);
    ensure!(
        details["free_size"] == 4 && details["unit_injective"] == true,
        "reflect reports {}",
        details
    );
    Ok(format!("|F| = {}, unit injective, oracle and CLI agree", size))
}

fn criterion_2() -> Outcome {
    let l = limits();
    for b in [fixtures::two_ba(), fixtures::four_ba()] {
        let c = ok(counit(&b, &fixtures::dl_to_ba(), &l))?;
        ensure!(
            c.map.is_injective() && c.map.is_surjective_onto(b.size()),
            "counit at size {} is not bijective",
            b.size()
        );
    }
    let d = fixtures::diamond();
    let c = ok(counit(&d, &fixtures::bms_to_dl(), &l))?;
    let n = c.free.algebra().size();
    ensure!(n == 5, "|F(U(Diamond))| = {}", n);
    ensure!(!c.map.is_injective(), "counit at Diamond is injective");
    let u = fixtures::bms_reduct(&d);
    let target = fixtures::bms_reduct(&fixtures::chain2());
    let homs = naive_homs(&u, &target);
    let (size, _) = hom_product_closure(&u, &fixtures::chain2(), &homs);
    ensure!(size == 5, "oracle closure has {} elements", size);
    Ok(format!(
        "bijective on TwoBA, FourBA; Diamond: |F| = {}, not injective",
        n
    ))
}

fn criterion_3() -> Outcome {
    let l = limits();
    let suite = [
        (
            "DL + compl",
            Some(fixtures::dl_to_ba()),
            Some(fixtures::dl_compl()),
            Status::Holds,
        ),
        ("BMSL -> DL", Some(fixtures::bms_to_dl()), None, Status::Fails),
        (
            "DL trivial",
            Some(fixtures::trivial_expansion(fixtures::dl())),
            Some(fixtures::dl_bare()),
            Status::Holds,
        ),
        (
            "BA trivial",
            Some(fixtures::trivial_expansion(fixtures::boolean())),
            None,
            Status::Holds,
        ),
        (
            "BMSL trivial",
            Some(fixtures::trivial_expansion(fixtures::bms_q())),
            None,
            Status::Holds,
        ),
    ];
    for (name, e, p, expected) in &suite {
        let r = ok(cross_validate_main_theorem(e.as_ref(), p.as_ref(), 4, 6, &l))?;
        ensure!(r.consistent(), "{}: conditions disagree: {:?}", name, r.statuses());
        ensure!(
            r.common_status() == Some(*expected),
            "{}: status {:?}",
            name,
            r.common_status()
        );
    }
    Ok(format!("{} expansions, all three conditions agree", suite.len()))
}

/// Partitions of `0..n` as label vectors (restricted growth strings).
fn partitions(n: usize) -> Vec<Vec<Elem>> {
    fn go(i: usize, n: usize, labels: &mut Vec<Elem>, out: &mut Vec<Vec<Elem>>) {
        if i == n {
            out.push(labels.clone());
            return;
        }
        let max = labels.iter().copied().max().map_or(0, |m| m + 1);
        for l in 0..=max {
            labels.push(l);
            go(i + 1, n, labels, out);
            labels.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), &mut out);
    out
}

fn criterion_4() -> Outcome {
    let l = limits();
    let (generated, axiomatic) = (fixtures::dl(), fixtures::dl_axioms());
    let mut checked = 0;
    for a in ok(members_up_to(&generated, 4, &l))? {
        let relative: Vec<Congruence> = partitions(a.size())
            .iter()
            .map(|p| Congruence::from_labels(p))
            .filter(|t| t.is_compatible(&a) && is_member(&bethkit::algebra::quotient(&a, t).0, &generated).unwrap())
            .collect();
        for x in 0..a.size() {
            for y in x + 1..a.size() {
                let g = ok(relative_congruence(&a, &[(x, y)], &generated))?;
                let ax = ok(relative_congruence(&a, &[(x, y)], &axiomatic))?;
                ensure!(
                    g == ax,
                    "generated and axiomatic differ at size {} on ({}, {})",
                    a.size(),
                    x,
                    y
                );
                ensure!(
                    congruence_closure(&a, &[(x, y)]).is_below(&g),
                    "closure not contained at ({}, {})",
                    x,
                    y
                );
                let brute = relative
                    .iter()
                    .filter(|t| t.related(x, y))
                    .fold(Congruence::total(a.size()), |acc, t| acc.meet(t));
                ensure!(
                    g == brute,
                    "brute-force intersection differs at size {} on ({}, {})",
                    a.size(),
                    x,
                    y
                );
                checked += 1;
            }
        }
    }
    Ok(format!("{} (algebra, pair) cases agree", checked))
}

fn criterion_5() -> Outcome {
    let l = limits();
    let cases = [
        (fixtures::dl(), 2, 6),
        (fixtures::boolean(), 1, 4),
        (fixtures::boolean(), 2, 16),
    ];
    for (k, n, expected) in &cases {
        let names: Vec<String> = (1..=*n).map(|i| format!("x{}", i)).collect();
        let f = ok(free_algebra(k, &names, &l))?;
        ensure!(
            f.algebra().size() == *expected,
            "|T_{}({})| = {}",
            k.name(),
            n,
            f.algebra().size()
        );
        ensure!(
            ok(verify_free_universal_property(&f, k, 4, &l))?.holds(),
            "universal property fails for {}",
            k.name()
        );
        for b in ok(members_up_to(k, 4, &l))? {
            let homs = ok(enumerate_homomorphisms(f.algebra(), &b, b.signature()))?;
            for images in Tuples::new(b.size(), *n) {
                let lifts = homs
                    .iter()
                    .filter(|h| {
                        f.generator_elements()
                            .iter()
                            .zip(&images)
                            .all(|(&g, &v)| h.apply(g) == v)
                    })
                    .count();
                ensure!(
                    lifts == 1,
                    "{} lifts of {:?} into a member of size {}",
                    lifts,
                    images,
                    b.size()
                );
            }
        }
    }
    Ok("|T_DL(2)| = 6, |T_BA(1)| = 4, |T_BA(2)| = 16, unique lifts".into())
}

/// Values of all terms of depth at most `depth` in `x1..xn` at `args`.
fn term_values(a: &impl Operations, args: &[Elem], depth: usize) -> BTreeSet<Elem> {
    let mut values: BTreeSet<Elem> = args.iter().copied().collect();
    for (s, sym) in a.signature().symbols().iter().enumerate() {
        if sym.arity == 0 {
            values.insert(a.apply(s, &[]));
        }
    }
    for _ in 0..depth {
        let current: Vec<Elem> = values.iter().copied().collect();
        for (s, sym) in a.signature().symbols().iter().enumerate() {
            for t in Tuples::new(current.len(), sym.arity) {
                let t: Vec<Elem> = t.iter().map(|&i| current[i]).collect();
                values.insert(a.apply(s, &t));
            }
        }
    }
    values
}

fn criterion_6() -> Outcome {
    let compl = fixtures::compl();
    let two = fixtures::two_ba();
    let mut algebras: Vec<FiniteAlgebra> = Vec::new();
    for k in 0..=4 {
        let power = match k {
            0 => FiniteAlgebra::trivial(fixtures::ba()),
            _ => ok(direct_product(&vec![&two; k]))?,
        };
        for s in subuniverses(&power, &[], 16) {
            let (sub, _) = ok(subalgebra(&power, &s))?;
            if !algebras.iter().any(|b| is_isomorphic(b, &sub)) {
                algebras.push(sub);
            }
        }
    }
    ensure!(algebras.iter().all(|a| a.size() <= 16), "algebra over size 16");
    let sizes: BTreeSet<usize> = algebras.iter().map(FiniteAlgebra::size).collect();
    ensure!(sizes == [1, 2, 4, 8, 16].into_iter().collect(), "sizes {:?}", sizes);
    for a in &algebras {
        ensure!(
            ok(check_interpolation_criterion(a, &compl))?.holds(),
            "compl fails on a Boolean algebra of size {}",
            a.size()
        );
        for x in 0..a.size() {
            let generated: BTreeSet<Elem> = generated_subalgebra(a, &[x]).into_iter().collect();
            ensure!(
                generated == term_values(a, &[x], 4),
                "generated subalgebra differs from depth-4 terms at {}",
                x
            );
        }
    }
    let d = fixtures::diamond();
    let v = ok(check_interpolation_criterion(&d, &compl))?;
    let Some(Certificate::NotInterpolated {
        tuple,
        value,
        generated,
        ..
    }) = v.first_failure().and_then(|i| i.certificate.clone())
    else {
        return Err("Diamond passes the criterion".into());
    };
    ensure!(
        tuple == vec![1] && value == 2,
        "certificate compl({:?}) = {}",
        tuple,
        value
    );
    ensure!(generated == vec![0, 1, 3], "generated {:?}", generated);
    let terms = term_values(&d, &[1], 4);
    ensure!(
        !terms.contains(&2) && terms == [0, 1, 3].into_iter().collect(),
        "depth-4 terms {:?}",
        terms
    );
    let beth = ok(check_beth_companion(&fixtures::dl_bare(), &[compl], 4, 6, &limits()))?;
    ensure!(
        beth.status() == Status::Fails,
        "trivial DL expansion passes the criterion"
    );
    Ok(format!(
        "{} Boolean algebras pass; Diamond: compl(a) = b outside {{0, a, 1}}",
        algebras.len()
    ))
}

fn full_expansion(a: &FiniteAlgebra, f: &PpFormula, assignment: &Assignment) -> bool {
    Tuples::new(a.size(), f.bound_vars.len()).any(|w| {
        let mut full = assignment.clone();
        full.extend(f.bound_vars.iter().cloned().zip(w));
        f.body
            .iter()
            .all(|eq| eval_term(a, &eq.left, &full).unwrap() == eval_term(a, &eq.right, &full).unwrap())
    })
}

fn all_bdl_structures(n: usize) -> Vec<FiniteAlgebra> {
    let sig = fixtures::bdl();
    let mut out = Vec::new();
    for meet in Tuples::new(n, n * n) {
        for join in Tuples::new(n, n * n) {
            for (bot, top) in (0..n).flat_map(|b| (0..n).map(move |t| (b, t))) {
                out.push(
                    FiniteAlgebra::new(sig.clone(), n, vec![meet.clone(), join.clone(), vec![bot], vec![top]]).unwrap(),
                );
            }
        }
    }
    out
}

fn criterion_7() -> Outcome {
    let l = limits();
    let bdl = fixtures::bdl();
    let mut formulas: Vec<PpFormula> = [fixtures::compl(), fixtures::padded_compl(), fixtures::jcp()]
        .iter()
        .map(|s| s.formula().clone())
        .collect();
    for text in [
        "exists [z1, z2] . meet(z1, z2) = x1 & join(z1, z2) = y",
        "exists [z1, z2, z3] . meet(z1, x1) = z2 & join(z2, z3) = y & meet(z3, z3) = bot",
        "exists [z1] . meet(x1, z1) = bot & join(x1, z1) = top & y = join(z1, bot)",
        "exists [] . join(x1, y) = y",
    ] {
        formulas.push(ok(parse_pp_formula(text, &bdl))?);
    }
    ensure!(
        formulas.iter().all(|f| f.bound_vars.len() <= 3),
        "formula with more than 3 bound variables"
    );
    let mut algebras = all_bdl_structures(1);
    algebras.extend(all_bdl_structures(2));
    algebras.extend(fixtures::small_bdl_algebras());
    algebras.extend(ok(members_up_to(&fixtures::dl(), 4, &l))?);
    algebras.push(fixtures::diamond());
    let mut cases = 0usize;
    for f in &formulas {
        let free = f.free_vars();
        for a in &algebras {
            for values in Tuples::new(a.size(), free.len()) {
                let assignment: Assignment = free.iter().cloned().zip(values).collect();
                let fast = ok(satisfies_pp(a, f, &assignment))?;
                let slow = full_expansion(a, f, &assignment);
                ensure!(fast.is_some() == slow, "disagreement on {} at {:?}", f, assignment);
                if let Some(w) = fast {
                    let mut full = assignment.clone();
                    full.extend(f.bound_vars.iter().cloned().zip(w));
                    ensure!(
                        f.body.iter().all(|eq| eval_term(a, &eq.left, &full).unwrap() == eval_term(a, &eq.right, &full).unwrap()),
                        "witness does not satisfy {}",
                        f
                    );
                }
                cases += 1;
            }
        }
    }
    Ok(format!(
        "{} formulas, {} algebras, {} cases, 100% agreement",
        formulas.len(),
        algebras.len(),
        cases
    ))
}

fn criterion_8() -> Outcome {
    let r = ok(harness_extpp_bang_implies_simple(
        &fixtures::dl_compl(),
        4,
        8,
        &limits(),
    ))?;
    ensure!(r.unique_witnesses.iter().all(|v| v.holds()), "unique witnesses fail");
    ensure!(
        r.unique_witnesses
            .iter()
            .all(|v| v.notes.iter().any(|n| n.contains("vacuous"))),
        "unique witnesses not vacuous for m = 0"
    );
    ensure!(
        r.totalizable.iter().all(|v| v.holds()),
        "totalizability fails: {:?}",
        r.totalizable.iter().map(|v| v.status()).collect::<Vec<_>>()
    );
    ensure!(r.beth_companion.holds(), "interpolation fails");
    ensure!(r.simple.holds(), "simplicity fails");
    ensure!(r.premises_hold() && r.verdict().holds(), "implication contradicted");
    Ok("unique witnesses (vacuous), totalizable, Beth companion, simple".into())
}

fn criterion_9() -> Outcome {
    let l = limits();
    let (m1, m2, k) = (fixtures::boolean(), fixtures::boolean_imp(), fixtures::dl());
    let (tau, rho) = (fixtures::not_via_imp(), fixtures::imp_via_not());
    let v = ok(check_faithful_term_equivalence(&m1, &m2, &tau, &rho, &k, 4, &l))?;
    ensure!(v.holds(), "conditions (i)-(iv) fail");
    for tag in ["(i)", "(ii)", "(iii)", "(iv)"] {
        ensure!(
            v.instances.iter().any(|i| i.name.starts_with(&format!("{} ", tag))),
            "no instance for {}",
            tag
        );
    }
    ensure!(
        ok(check_simplicity_transfer(&m1, &m2, &tau, &rho, &k, 4, &l))?.holds(),
        "simplicity verdicts differ"
    );
    let s1 = ok(cross_validate_main_theorem(Some(&fixtures::dl_to_ba()), None, 4, 6, &l))?.common_status();
    let s2 = ok(cross_validate_main_theorem(
        Some(&fixtures::dl_to_bai()),
        None,
        4,
        6,
        &l,
    ))?
    .common_status();
    ensure!(s1.is_some() && s1 == s2, "simplicity {:?} vs {:?}", s1, s2);
    let bad = ok(rho.with_term("imp", ok(parse_term("meet(x1, x2)", &fixtures::ba()))?))?;
    let v = ok(check_faithful_term_equivalence(&m1, &m2, &tau, &bad, &k, 4, &l))?;
    let cert = v
        .instances
        .iter()
        .filter(|i| i.name.starts_with("(iii)") && i.status == Status::Fails)
        .find_map(|i| i.certificate.clone());
    let Some(Certificate::Translation { algebra, result, .. }) = cert else {
        return Err("mutated rho passes the round trip".into());
    };
    let replay = ok(tau.apply(&ok(bad.apply(&algebra))?))?;
    ensure!(replay == result && result != algebra, "certificate does not replay");
    Ok(format!(
        "(i)-(iv) hold, simplicity {:?} on both sides, mutation caught at size {}",
        s1.unwrap(),
        algebra.size()
    ))
}

const DETERMINISM_SUITE: &[&[&str]] = &[
    &["membership", "--algebra", "Diamond", "--in", "DL"],
    &["membership", "--algebra", "DiamondBMS", "--in", "BMSL"],
    &["cg", "--algebra", "Chain3", "--in", "DL", "--pairs", "(0,2)"],
    &["free", "--in", "Bool", "--vars", "x,y"],
    &["expand", "--algebra", "Chain3", "--expansion", "DL_compl"],
    &["reflect", "--algebra", "Chain3", "--expansion", "DL_to_BA"],
    &["unit", "--expansion", "BMS_to_DL"],
    &["counit", "--expansion", "BMS_to_DL", "--algebra", "Diamond"],
    &["check-simple", "--expansion", "DL_jcp"],
    &["check-beth", "--expansion", "DL_bare", "--ops", "compl"],
    &[
        "check-regular",
        "--source",
        "TwoBA",
        "--target",
        "FourBA",
        "--map",
        "0,3",
        "--in",
        "Bool",
    ],
    &["check-extendable", "--op", "compl", "--in", "DL"],
    &["check-unique-witnesses", "--op", "jcp", "--in", "DL"],
    &[
        "term-equiv",
        "--left",
        "Bool",
        "--right",
        "BoolImp",
        "--tau",
        "not_via_imp",
        "--rho",
        "imp_mutated",
        "--base",
        "DL",
    ],
    &["cross-validate", "--expansion", "DL_to_BA", "--family", "DL_compl"],
    &[
        "amalgamate",
        "--base",
        "Chain2",
        "--left",
        "Chain3",
        "--right",
        "Chain3",
        "--f",
        "0,2",
        "--g",
        "0,2",
        "--in",
        "DL",
    ],
    &["enumerate", "--in", "DL"],
];

fn run_cli(args: &[&str], jobs: Option<&str>) -> Result<(Vec<u8>, Option<i32>), String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bethkit"));
    cmd.args(args).args(["--format", "json"]);
    if let Some(j) = jobs {
        cmd.args(["--jobs", j]);
    }
    let out = cmd.output().map_err(|e| e.to_string())?;
    Ok((out.stdout, out.status.code()))
}

fn criterion_10() -> Outcome {
    let mut bytes = 0;
    for args in DETERMINISM_SUITE {
        let mut runs = Vec::new();
        for jobs in [None, None, Some("1"), Some("4")] {
            runs.push(run_cli(args, jobs)?);
        }
        let (first, code) = &runs[0];
        ensure!(
            matches!(code, Some(0..=2)),
            "`{}` exited with {:?}",
            args.join(" "),
            code
        );
        ensure!(
            runs.iter().all(|r| r == &runs[0]),
            "`{}` differs between runs",
            args.join(" ")
        );
        let parsed: serde_json::Value = serde_json::from_slice(first).map_err(|e| e.to_string())?;
        let mut again = serde_json::to_vec_pretty(&parsed).map_err(|e| e.to_string())?;
        again.push(b'\n');
        ensure!(&again == first, "`{}` is not canonical JSON", args.join(" "));
        bytes += first.len();
    }
    Ok(format!(
        "{} reports, {} bytes, byte-identical across runs and job counts",
        DETERMINISM_SUITE.len(),
        bytes
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "Booleanization of Chain3", 1, criterion_1),
        (2, "counit dichotomy", 1, criterion_2),
        (3, "main-theorem consistency", 120, criterion_3),
        (4, "relative congruence oracle", 60, criterion_4),
        (5, "free algebra cardinalities", 10, criterion_5),
        (6, "interpolation criterion", 30, criterion_6),
        (7, "pp evaluation oracle", 10, criterion_7),
        (8, "unique-witness harness", 60, criterion_8),
        (9, "term-equivalence suite", 60, criterion_9),
        (10, "determinism", 120, criterion_10),
    ];
    let mut failed = 0;
    for (n, title, limit, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let limit = Duration::from_secs(limit);
        let line = match outcome {
            Ok(msg) if elapsed <= limit => format!("PASS {:>2} {}: {} [{:.2?} / {:?}]", n, title, msg, elapsed, limit),
            Ok(msg) => format!(
                "FAIL {:>2} {}: {} but took {:.2?} (limit {:?})",
                n, title, msg, elapsed, limit
            ),
            Err(msg) => format!("FAIL {:>2} {}: {} [{:.2?}]", n, title, msg, elapsed),
        };
        if line.starts_with("FAIL") {
            failed += 1;
        }
        println!("{}", line);
    }
    println!("acceptance: {} of {} criteria pass", 10 - failed, 10);
    if failed > 0 {
        std::process::exit(1);
    }
}

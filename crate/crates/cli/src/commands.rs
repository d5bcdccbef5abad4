//! Command-line grammar and dispatch to the library checks.

use std::collections::BTreeMap;
use std::path::PathBuf;

use bethkit::adjunction::{
    check_counit_iso, check_unit_mono, counit, expand_algebra, free_extension, verify_reflection, Expansion,
    ExpansionSpec, PpExpansionSpec,
};
use bethkit::algebra::{congruence_closure, quotient, Elem, FiniteAlgebra, Homomorphism};
use bethkit::beth::{
    check_beth_companion, check_faithful_term_equivalence, check_regular_mono, check_simple, check_simplicity_transfer,
    cross_validate_main_theorem, TermTranslation,
};
use bethkit::implicit::{
    check_extendable, check_totalizable, check_totalizable_members, check_unique_witnesses, ImplicitOpSpec,
};
use bethkit::quasivariety::{
    bounded_amalgamation, enumerate_members, free_algebra, members_up_to, membership, relative_congruence,
    verify_free_universal_property, Quasivariety,
};
use bethkit::verdict::{Certificate, Instance, Status, Verdict};
use bethkit::Limits;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::report::{computed, value, Report, ReportInstance};
use crate::workspace::{load_workspace, parse_and_resolve, ExpansionDef, Workspace, WorkspaceError};

/// The workspace used when `--workspace` is not given.
pub const DESK_WORKSPACE: &str = include_str!("../fixtures/desk.qv");

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Workspace(#[from] WorkspaceError),
    #[error("{0}")]
    Core(#[from] bethkit::Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {message}")]
    Io { path: String, message: String },
}

fn usage(message: impl Into<String>) -> CliError {
    CliError::Usage(message.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "bethkit",
    version,
    about = "Bounded checks for pp expansions of finite quasivarieties"
)]
pub struct Cli {
    /// Workspace file; the bundled desk workspace when omitted.
    #[arg(long, short = 'w', global = true)]
    pub workspace: Option<PathBuf>,
    /// Member enumeration bound.
    #[arg(long, global = true, default_value_t = 4)]
    pub max_size: usize,
    /// Extension search bound.
    #[arg(long, global = true, default_value_t = 6)]
    pub ext_bound: usize,
    /// Largest product any construction may range over.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub product_cap: usize,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads for the parallel searches.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct AlgebraIn {
    #[arg(long)]
    pub algebra: String,
    #[arg(long = "in")]
    pub class: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Membership of an algebra in a quasivariety.
    Membership(AlgebraIn),
    /// Congruence generated by pairs, relative to a class when `--in` is given.
    Cg {
        #[arg(long)]
        algebra: String,
        #[arg(long = "in")]
        class: Option<String>,
        /// Pairs such as "(0,2),(1,3)".
        #[arg(long)]
        pairs: String,
    },
    /// Free algebra of a generated quasivariety.
    Free {
        #[arg(long = "in")]
        class: String,
        /// Generator names, comma separated.
        #[arg(long, default_value = "x")]
        vars: String,
    },
    /// Expansion of an algebra by a pp family.
    Expand {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        expansion: String,
    },
    /// Free extension of an algebra with its unit and universal property.
    Reflect {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        expansion: String,
    },
    /// Injectivity of the unit, on one algebra or on all members.
    Unit {
        #[arg(long)]
        expansion: String,
        #[arg(long)]
        algebra: Option<String>,
    },
    /// Bijectivity of the counit, on one algebra or on all members.
    Counit {
        #[arg(long)]
        expansion: String,
        #[arg(long)]
        algebra: Option<String>,
    },
    /// Simplicity of a pp expansion.
    CheckSimple {
        #[arg(long)]
        expansion: String,
    },
    /// Interpolation criterion for a family of operations.
    CheckBeth {
        #[arg(long)]
        expansion: String,
        /// Operations to test, comma separated; the family's own by default.
        #[arg(long)]
        ops: Option<String>,
    },
    /// Searches for a pair of maps whose equalizer is the image of an embedding.
    CheckRegular {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        /// Images of the source elements, such as "0,3".
        #[arg(long)]
        map: String,
        #[arg(long = "in")]
        class: String,
    },
    /// Extendability of one tuple, totalizability of one algebra, or of all members.
    CheckExtendable {
        #[arg(long)]
        op: String,
        #[arg(long = "in")]
        class: String,
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long)]
        tuple: Option<String>,
    },
    /// Uniqueness of witnesses on all members.
    CheckUniqueWitnesses {
        #[arg(long)]
        op: String,
        #[arg(long = "in")]
        class: String,
    },
    /// Faithful term equivalence of two expansions of a base class.
    TermEquiv {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        tau: String,
        #[arg(long)]
        rho: String,
        #[arg(long)]
        base: String,
    },
    /// Agreement of the three equivalent characterisations of simplicity.
    CrossValidate {
        /// An expansion of either kind.
        #[arg(long)]
        expansion: Option<String>,
        /// A pp family, when `--expansion` names a target class.
        #[arg(long)]
        family: Option<String>,
    },
    /// Bounded amalgamation of a span of embeddings.
    Amalgamate {
        #[arg(long)]
        base: String,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long = "in")]
        class: String,
    },
    /// Members up to isomorphism.
    Enumerate {
        #[arg(long = "in")]
        class: String,
        /// Exactly this size instead of all sizes up to `--max-size`.
        #[arg(long)]
        size: Option<usize>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Membership(_) => "membership",
            Command::Cg { .. } => "cg",
            Command::Free { .. } => "free",
            Command::Expand { .. } => "expand",
            Command::Reflect { .. } => "reflect",
            Command::Unit { .. } => "unit",
            Command::Counit { .. } => "counit",
            Command::CheckSimple { .. } => "check-simple",
            Command::CheckBeth { .. } => "check-beth",
            Command::CheckRegular { .. } => "check-regular",
            Command::CheckExtendable { .. } => "check-extendable",
            Command::CheckUniqueWitnesses { .. } => "check-unique-witnesses",
            Command::TermEquiv { .. } => "term-equiv",
            Command::CrossValidate { .. } => "cross-validate",
            Command::Amalgamate { .. } => "amalgamate",
            Command::Enumerate { .. } => "enumerate",
        }
    }
}

/// Loads the workspace named by `cli` or the bundled one.
pub fn workspace_for(cli: &Cli) -> Result<Workspace, CliError> {
    Ok(match &cli.workspace {
        Some(path) => load_workspace(path)?,
        None => parse_and_resolve(DESK_WORKSPACE)?,
    })
}

struct Ctx<'a> {
    ws: &'a Workspace,
    limits: Limits,
    max: usize,
    ext: usize,
}

impl Ctx<'_> {
    fn algebra(&self, name: &str) -> Result<&FiniteAlgebra, CliError> {
        self.ws
            .algebras
            .get(name)
            .ok_or_else(|| usage(format!("unknown algebra `{}`", name)))
    }

    fn class(&self, name: &str) -> Result<&Quasivariety, CliError> {
        self.ws
            .quasivarieties
            .get(name)
            .ok_or_else(|| usage(format!("unknown quasivariety `{}`", name)))
    }

    fn op(&self, name: &str) -> Result<&ImplicitOpSpec, CliError> {
        self.ws
            .ppops
            .get(name)
            .ok_or_else(|| usage(format!("unknown ppop `{}`", name)))
    }

    fn translation(&self, name: &str) -> Result<&TermTranslation, CliError> {
        self.ws
            .translations
            .get(name)
            .ok_or_else(|| usage(format!("unknown translation `{}`", name)))
    }

    fn expansion(&self, name: &str) -> Result<&ExpansionDef, CliError> {
        self.ws
            .expansions
            .get(name)
            .ok_or_else(|| usage(format!("unknown expansion `{}`", name)))
    }

    fn target_expansion(&self, name: &str) -> Result<&ExpansionSpec, CliError> {
        match self.expansion(name)? {
            ExpansionDef::Target(e) => Ok(e),
            ExpansionDef::Pp(_) => Err(usage(format!(
                "`{}` is a pp expansion; this command needs `K -> M`",
                name
            ))),
        }
    }

    fn pp_expansion(&self, name: &str) -> Result<&PpExpansionSpec, CliError> {
        match self.expansion(name)? {
            ExpansionDef::Pp(p) => Ok(p),
            ExpansionDef::Target(_) => Err(usage(format!(
                "`{}` is not a pp expansion; this command needs `K + {{..}}`",
                name
            ))),
        }
    }

    fn bound(&self) -> BTreeMap<String, usize> {
        [("max_size".to_string(), self.max)].into_iter().collect()
    }

    fn ext_bound(&self) -> BTreeMap<String, usize> {
        [("ext_bound".to_string(), self.ext)].into_iter().collect()
    }
}

fn parse_list(text: &str) -> Result<Vec<Elem>, CliError> {
    let inner = text.trim().trim_start_matches(['[', '(']).trim_end_matches([']', ')']);
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| usage(format!("expected a number, found `{}`", s.trim())))
        })
        .collect()
}

fn parse_pairs(text: &str) -> Result<Vec<(Elem, Elem)>, CliError> {
    let mut out = Vec::new();
    for chunk in text.split(')') {
        let chunk = chunk.trim().trim_start_matches(',').trim();
        if chunk.is_empty() {
            continue;
        }
        let nums = parse_list(chunk.trim_start_matches('('))?;
        match nums[..] {
            [a, b] => out.push((a, b)),
            _ => return Err(usage(format!("expected a pair, found `{}`", chunk))),
        }
    }
    if out.is_empty() {
        return Err(usage("no pairs given"));
    }
    Ok(out)
}

fn check_elems(a: &FiniteAlgebra, elems: &[Elem], what: &str) -> Result<(), CliError> {
    match elems.iter().find(|&&e| e >= a.size()) {
        Some(e) => Err(usage(format!(
            "{} mentions {} outside a universe of size {}",
            what,
            e,
            a.size()
        ))),
        None => Ok(()),
    }
}

fn names(list: &str) -> Vec<String> {
    list.split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

fn blocks(theta: &bethkit::algebra::Congruence) -> Value {
    value(&theta.blocks())
}

fn witness_instance(name: &str, found: Option<Value>, bound: BTreeMap<String, usize>) -> ReportInstance {
    match found {
        Some(w) => computed(name, vec![("witness", w)], bound),
        None => ReportInstance {
            name: name.to_string(),
            verdict: Status::Unknown.to_string(),
            certificate: None,
            bound,
            details: BTreeMap::new(),
        },
    }
}

/// Runs one command and returns its report.
pub fn run(cli: &Cli) -> Result<Report, CliError> {
    if cli.max_size == 0 {
        return Err(usage("--max-size must be at least 1"));
    }
    let ws = workspace_for(cli)?;
    let ctx = Ctx {
        ws: &ws,
        limits: Limits {
            product_cap: cli.product_cap,
            ..Limits::default()
        },
        max: cli.max_size,
        ext: cli.ext_bound,
    };
    let mut params: BTreeMap<String, Value> = BTreeMap::new();
    params.insert("max_size".into(), json!(cli.max_size));
    params.insert("ext_bound".into(), json!(cli.ext_bound));
    params.insert("product_cap".into(), json!(cli.product_cap));
    params.insert("size_cap".into(), json!(ctx.limits.size_cap));
    let mut set = |k: &str, v: &str| {
        params.insert(k.to_string(), json!(v));
    };
    match &cli.command {
        Command::Membership(AlgebraIn { algebra, class }) => {
            set("algebra", algebra);
            set("in", class);
        }
        Command::Cg { algebra, class, pairs } => {
            set("algebra", algebra);
            set("pairs", pairs);
            if let Some(c) = class {
                set("in", c);
            }
        }
        Command::Free { class, vars } => {
            set("in", class);
            set("vars", vars);
        }
        Command::Expand { algebra, expansion } | Command::Reflect { algebra, expansion } => {
            set("algebra", algebra);
            set("expansion", expansion);
        }
        Command::Unit { expansion, algebra } | Command::Counit { expansion, algebra } => {
            set("expansion", expansion);
            if let Some(a) = algebra {
                set("algebra", a);
            }
        }
        Command::CheckSimple { expansion } => set("expansion", expansion),
        Command::CheckBeth { expansion, ops } => {
            set("expansion", expansion);
            if let Some(o) = ops {
                set("ops", o);
            }
        }
        Command::CheckRegular {
            source,
            target,
            map,
            class,
        } => {
            set("source", source);
            set("target", target);
            set("map", map);
            set("in", class);
        }
        Command::CheckExtendable {
            op,
            class,
            algebra,
            tuple,
        } => {
            set("op", op);
            set("in", class);
            if let Some(a) = algebra {
                set("algebra", a);
            }
            if let Some(t) = tuple {
                set("tuple", t);
            }
        }
        Command::CheckUniqueWitnesses { op, class } => {
            set("op", op);
            set("in", class);
        }
        Command::TermEquiv {
            left,
            right,
            tau,
            rho,
            base,
        } => {
            set("left", left);
            set("right", right);
            set("tau", tau);
            set("rho", rho);
            set("base", base);
        }
        Command::CrossValidate { expansion, family } => {
            if let Some(e) = expansion {
                set("expansion", e);
            }
            if let Some(f) = family {
                set("family", f);
            }
        }
        Command::Amalgamate {
            base,
            left,
            right,
            f,
            g,
            class,
        } => {
            set("base", base);
            set("left", left);
            set("right", right);
            set("f", f);
            set("g", g);
            set("in", class);
        }
        Command::Enumerate { class, size } => {
            set("in", class);
            if let Some(n) = size {
                params.insert("size".into(), json!(n));
            }
        }
    }
    let mut report = Report::new(cli.command.name(), params);
    dispatch(&cli.command, &ctx, &mut report)?;
    Ok(report)
}

fn dispatch(command: &Command, ctx: &Ctx, report: &mut Report) -> Result<(), CliError> {
    let limits = &ctx.limits;
    match command {
        Command::Membership(AlgebraIn { algebra, class }) => {
            let (a, k) = (ctx.algebra(algebra)?, ctx.class(class)?);
            let m = membership(a, k)?;
            let name = format!("{} in {}", algebra, class);
            let mut v = Verdict::new(format!("{} is a member of {}", algebra, class));
            v.push(if m.member {
                Instance::holds(name)
            } else {
                Instance::fails(
                    name,
                    Certificate::NotMember {
                        algebra: a.clone(),
                        presentation: class.clone(),
                        certificate: m.certificate.clone(),
                    },
                )
            });
            report.add_verdict(None, &v);
            if m.member {
                report.instances[0]
                    .details
                    .insert("evidence".into(), value(&m.certificate));
            }
        }
        Command::Cg { algebra, class, pairs } => {
            let a = ctx.algebra(algebra)?;
            let pairs = parse_pairs(pairs)?;
            let flat: Vec<Elem> = pairs.iter().flat_map(|&(x, y)| [x, y]).collect();
            check_elems(a, &flat, "--pairs")?;
            let theta = match class {
                Some(c) => relative_congruence(a, &pairs, ctx.class(c)?)?,
                None => congruence_closure(a, &pairs),
            };
            let (q, _) = quotient(a, &theta);
            report
                .summary
                .claims
                .push(format!("congruence of {} generated by the pairs", algebra));
            report.push(computed(
                "congruence",
                vec![
                    ("blocks", blocks(&theta)),
                    ("identity", json!(theta.is_identity())),
                    ("total", json!(theta.is_total())),
                    ("quotient_size", json!(q.size())),
                    ("quotient", value(&q)),
                ],
                BTreeMap::new(),
            ));
        }
        Command::Free { class, vars } => {
            let k = ctx.class(class)?;
            let vars = names(vars);
            let f = free_algebra(k, &vars, limits)?;
            report
                .summary
                .claims
                .push(format!("free algebra of {} over {}", class, vars.join(", ")));
            report.push(computed(
                "free algebra",
                vec![
                    ("size", json!(f.algebra().size())),
                    ("generators", value(&f.generator_elements())),
                    ("algebra", value(f.algebra())),
                ],
                BTreeMap::new(),
            ));
            report.add_verdict(
                Some("universal property"),
                &verify_free_universal_property(&f, k, ctx.max, limits)?,
            );
        }
        Command::Expand { algebra, expansion } => {
            let (a, p) = (ctx.algebra(algebra)?, ctx.pp_expansion(expansion)?);
            report
                .summary
                .claims
                .push(format!("{} expands along {}", algebra, expansion));
            report.push(match expand_algebra(a, p)? {
                Expansion::Expanded { algebra: b } => {
                    computed("expansion", vec![("algebra", value(&b))], BTreeMap::new())
                }
                undefined @ Expansion::UndefinedAt { .. } => ReportInstance {
                    name: "expansion".into(),
                    verdict: Status::Fails.to_string(),
                    certificate: Some(value(&undefined)),
                    bound: BTreeMap::new(),
                    details: BTreeMap::new(),
                },
            });
        }
        Command::Reflect { algebra, expansion } => {
            let (a, e) = (ctx.algebra(algebra)?, ctx.target_expansion(expansion)?);
            let f = free_extension(a, e, limits)?;
            report
                .summary
                .claims
                .push(format!("free extension of {} along {}", algebra, expansion));
            report.push(computed(
                "free extension",
                vec![
                    ("free_size", json!(f.algebra().size())),
                    ("unit_injective", json!(f.unit().is_injective())),
                    ("unit", value(f.unit())),
                    ("algebra", value(f.algebra())),
                ],
                BTreeMap::new(),
            ));
            let base = f.source().clone();
            let v = verify_reflection(&base, f.algebra(), f.unit(), e, ctx.max, limits)?;
            report.add_verdict(Some("universal property"), &v);
        }
        Command::Unit { expansion, algebra } => {
            let e = ctx.target_expansion(expansion)?;
            match algebra {
                None => report.add_verdict(None, &check_unit_mono(e, ctx.max, limits)?),
                Some(name) => {
                    let a = ctx.algebra(name)?;
                    let f = free_extension(a, e, limits)?;
                    let mut v = Verdict::new(format!("unit of {} is injective", name));
                    let map = f.unit();
                    let pair = (0..map.map().len())
                        .flat_map(|x| (x + 1..map.map().len()).map(move |y| (x, y)))
                        .find(|&(x, y)| map.apply(x) == map.apply(y));
                    v.push(match pair {
                        None => Instance::holds(name.as_str()).with_detail("free_size", f.algebra().size()),
                        Some((x, y)) => Instance::fails(
                            name.as_str(),
                            Certificate::NotInjective {
                                source: f.source().clone(),
                                target: f.algebra().clone(),
                                map: map.clone(),
                                pair: [x, y],
                            },
                        ),
                    });
                    report.add_verdict(None, &v);
                }
            }
        }
        Command::Counit { expansion, algebra } => {
            let e = ctx.target_expansion(expansion)?;
            match algebra {
                None => report.add_verdict(None, &check_counit_iso(e, ctx.max, limits)?),
                Some(name) => {
                    let b = ctx.algebra(name)?;
                    let c = counit(b, e, limits)?;
                    let map = &c.map;
                    let n = map.map().len();
                    let mut v = Verdict::new(format!("counit at {} is bijective", name));
                    let pair = (0..n)
                        .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
                        .find(|&(x, y)| map.apply(x) == map.apply(y));
                    let missing = (0..b.size()).find(|y| !map.map().contains(y));
                    let instance = match (pair, missing) {
                        (Some((x, y)), _) => Instance::fails(
                            name.as_str(),
                            Certificate::NotInjective {
                                source: c.free.algebra().clone(),
                                target: b.clone(),
                                map: map.clone(),
                                pair: [x, y],
                            },
                        ),
                        (None, Some(m)) => Instance::fails(
                            name.as_str(),
                            Certificate::NotSurjective {
                                source: c.free.algebra().clone(),
                                target: b.clone(),
                                map: map.clone(),
                                missing: m,
                            },
                        ),
                        (None, None) => Instance::holds(name.as_str()),
                    };
                    v.push(instance.with_detail("free_size", c.free.algebra().size()));
                    report.add_verdict(None, &v);
                }
            }
        }
        Command::CheckSimple { expansion } => {
            let p = ctx.pp_expansion(expansion)?;
            report.add_verdict(None, &check_simple(p, ctx.max, ctx.ext, limits)?);
        }
        Command::CheckBeth { expansion, ops } => {
            let p = ctx.pp_expansion(expansion)?;
            let ops: Vec<ImplicitOpSpec> = match ops {
                Some(list) => names(list)
                    .iter()
                    .map(|o| ctx.op(o).cloned())
                    .collect::<Result<_, _>>()?,
                None => p.ops().iter().map(|(_, op)| op.clone()).collect(),
            };
            report.add_verdict(None, &check_beth_companion(p, &ops, ctx.max, ctx.ext, limits)?);
        }
        Command::CheckRegular {
            source,
            target,
            map,
            class,
        } => {
            let (a, b, m) = (ctx.algebra(source)?, ctx.algebra(target)?, ctx.class(class)?);
            let images = parse_list(map)?;
            check_elems(b, &images, "--map")?;
            if images.len() != a.size() {
                return Err(usage(format!(
                    "--map has {} entries, `{}` has {} elements",
                    images.len(),
                    source,
                    a.size()
                )));
            }
            let h = Homomorphism::new(images);
            let w = check_regular_mono(&h, a, b, m, ctx.max, limits)?;
            report
                .summary
                .claims
                .push(format!("image of {} in {} is an equalizer", source, target));
            report.push(witness_instance(
                "equalizer",
                w.map(|w| value(&w.certificate())),
                ctx.bound(),
            ));
        }
        Command::CheckExtendable {
            op,
            class,
            algebra,
            tuple,
        } => {
            let (s, k) = (ctx.op(op)?, ctx.class(class)?);
            match (algebra, tuple) {
                (None, Some(_)) => return Err(usage("--tuple needs --algebra")),
                (None, None) => report.add_verdict(None, &check_totalizable_members(s, k, ctx.max, ctx.ext, limits)?),
                (Some(name), t) => {
                    let a = ctx.algebra(name)?;
                    let found = match t {
                        Some(t) => {
                            let t = parse_list(t)?;
                            check_elems(a, &t, "--tuple")?;
                            if t.len() != s.arity() {
                                return Err(usage(format!("`{}` takes {} argument(s)", op, s.arity())));
                            }
                            report
                                .summary
                                .claims
                                .push(format!("{} is defined at the tuple in an extension of {}", op, name));
                            check_extendable(s, k, a, &t, ctx.ext, limits)?
                        }
                        None => {
                            report
                                .summary
                                .claims
                                .push(format!("{} is total in an extension of {}", op, name));
                            check_totalizable(s, k, a, ctx.ext, limits)?
                        }
                    };
                    report.push(witness_instance(name, found.map(|w| value(&w)), ctx.ext_bound()));
                }
            }
        }
        Command::CheckUniqueWitnesses { op, class } => {
            let (s, k) = (ctx.op(op)?, ctx.class(class)?);
            report.add_verdict(None, &check_unique_witnesses(s, k, ctx.max, limits)?);
        }
        Command::TermEquiv {
            left,
            right,
            tau,
            rho,
            base,
        } => {
            let (m1, m2, k) = (ctx.class(left)?, ctx.class(right)?, ctx.class(base)?);
            let (t, r) = (ctx.translation(tau)?, ctx.translation(rho)?);
            let v = check_faithful_term_equivalence(m1, m2, t, r, k, ctx.max, limits)?;
            report.add_verdict(Some("equivalence"), &v);
            if v.holds() {
                report.add_verdict(
                    Some("transfer"),
                    &check_simplicity_transfer(m1, m2, t, r, k, ctx.max, limits)?,
                );
            }
        }
        Command::CrossValidate { expansion, family } => {
            let mut e = None;
            let mut p = None;
            if let Some(name) = expansion {
                match ctx.expansion(name)? {
                    ExpansionDef::Target(x) => e = Some(x),
                    ExpansionDef::Pp(x) => p = Some(x),
                }
            }
            if let Some(name) = family {
                if p.is_some() {
                    return Err(usage("two pp families given"));
                }
                p = Some(ctx.pp_expansion(name)?);
            }
            let r = cross_validate_main_theorem(e, p, ctx.max, ctx.ext, limits)?;
            let v = r.verdict();
            report.add_verdict(None, &v);
            for (key, part) in [
                ("simple", &r.simple),
                ("adjunction", &r.adjunction),
                ("mono_reflective", &r.mono_reflective),
            ] {
                if let Some(part) = part {
                    let failing: Vec<Value> = part
                        .instances
                        .iter()
                        .filter(|i| i.status != Status::Holds)
                        .map(|i| json!({"name": i.name, "verdict": i.status.to_string(), "certificate": i.certificate}))
                        .collect();
                    report.instances[0].details.insert(
                        key.to_string(),
                        json!({"claim": part.claim, "verdict": part.status().to_string(), "instances": part.instances.len(), "not_holding": failing}),
                    );
                }
            }
        }
        Command::Amalgamate {
            base,
            left,
            right,
            f,
            g,
            class,
        } => {
            let (a, b, c, k) = (
                ctx.algebra(base)?,
                ctx.algebra(left)?,
                ctx.algebra(right)?,
                ctx.class(class)?,
            );
            let (f, g) = (parse_list(f)?, parse_list(g)?);
            check_elems(b, &f, "--f")?;
            check_elems(c, &g, "--g")?;
            if f.len() != a.size() || g.len() != a.size() {
                return Err(usage(format!("maps must have {} entries", a.size())));
            }
            let am = bounded_amalgamation(
                a,
                b,
                c,
                &Homomorphism::new(f),
                &Homomorphism::new(g),
                k,
                ctx.max,
                limits,
            )?;
            report.summary.claims.push(format!(
                "the span {} <- {} -> {} amalgamates in {}",
                left, base, right, class
            ));
            report.push(witness_instance("amalgam", am.map(|w| value(&w)), ctx.bound()));
        }
        Command::Enumerate { class, size } => {
            let k = ctx.class(class)?;
            let members = match size {
                Some(n) => enumerate_members(k, *n, limits)?,
                None => members_up_to(k, ctx.max, limits)?,
            };
            report
                .summary
                .claims
                .push(format!("members of {} up to isomorphism", class));
            let bound = match size {
                Some(n) => [("size".to_string(), *n)].into_iter().collect(),
                None => ctx.bound(),
            };
            for (i, m) in members.iter().enumerate() {
                report.push(computed(
                    &format!("M{} (size {})", i, m.size()),
                    vec![("algebra", value(m))],
                    bound.clone(),
                ));
            }
        }
    }
    Ok(())
}

/// Writes the report in the requested format, and the JSON file if asked.
pub fn emit(cli: &Cli, report: &Report) -> Result<String, CliError> {
    if let Some(path) = &cli.report {
        std::fs::write(path, report.to_json()).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
    }
    Ok(match cli.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    })
}

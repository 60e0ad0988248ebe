//! `cspforge`: command-line front end for the reductions, relaxations and
//! property suites of the `cspforge` library.
//!
//! Every command is a thin wrapper around one library call. Exit status 0
//! means accept / feasible / found (or a successful construction), 1 means
//! reject / infeasible / none, and 2 means a usage or input error.

mod input;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde_json::json;

use cspforge::datalog::{
    compose_ddatalog, compose_interpretations, compose_union_gadgets, evaluate_program, Reduction,
};
use cspforge::gadgets::{
    apply_gadget, apply_projective_gadget, apply_universal_gadget, compile_gadget, compile_projective_gadget, reify,
    reify_to_label_cover,
};
use cspforge::harness::{run_suite, RunOptions, Suite};
use cspforge::labelcover::{
    arc_consistency_reduce, enforce_arc_consistency, k_consistency_reduce, k_consistency_test, sigma_k,
    uncovered_tuples,
};
use cspforge::minions::{check_arc_adjunction, find_minion_homomorphism, omega, polymorphism_minion};
use cspforge::relax::{
    affine_system, lambda_conv_with, lp_feasible, sherali_adams_system, solve_group_system, tensor_test, GroupSystem,
    Modulus, Normalization,
};
use cspforge::structures::{
    catalog::bottom, find_homomorphism, find_isomorphism, is_hom_equivalent, Structure,
};
use cspforge::text::{group_system_to_json, homomorphism_to_json, linear_system_to_json, Document};
use cspforge::{Error, Result};

use input::{AnyGadget, Composable};
use output::*;

#[derive(Parser)]
#[command(name = "cspforge", version, about = "Structured reductions between constraint satisfaction problems")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by all commands.
#[derive(Args)]
struct Common {
    /// Template structure `A` (FILE or FILE:NAME).
    #[arg(long, global = true)]
    template: Option<String>,
    /// Instance: a structure, label cover instance or system export.
    #[arg(long, global = true)]
    instance: Option<String>,
    /// Level of the consistency test or relaxation.
    #[arg(short = 'k', global = true)]
    k: Option<usize>,
    /// Modulus of an affine system: a positive integer or `Z`.
    #[arg(long, global = true)]
    modulus: Option<String>,
    /// Truncation arity of minions.
    #[arg(long, global = true, default_value_t = 3)]
    max_arity: usize,
    /// Seed of the random corpora; defaults to $CSPFORGE_SEED, then 0.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormalizationArg {
    One,
    Zero,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a homomorphism from the instance to the template.
    Hom,
    /// Search for an isomorphism between the instance and the template.
    Iso,
    /// Decide homomorphic equivalence of the instance and the template.
    Homeq,
    /// Evaluate a Datalog program; accepts when the output is nonempty.
    Eval {
        #[arg(long)]
        program: String,
    },
    /// Apply a Datalog interpretation to the instance.
    Interp {
        #[arg(long)]
        interpretation: String,
    },
    /// Apply a union gadget to the instance.
    Union {
        #[arg(long)]
        union: String,
    },
    /// Compose two interpretations, two union gadgets, or one of each.
    Compose {
        #[arg(long)]
        first: String,
        #[arg(long)]
        second: String,
    },
    /// Apply a gadget replacement (general or projective) to the instance.
    Gadget {
        #[arg(long)]
        gadget: String,
    },
    /// Reify the instance; with a template, produce its label cover instance.
    Reify,
    /// Compile a gadget into a Datalog interpretation and a union gadget.
    CompileGadget {
        #[arg(long)]
        gadget: String,
    },
    /// Apply the universal gadget of the template to a label cover instance.
    Universal,
    /// The label cover instance of partial homomorphisms on at most k elements.
    SigmaK,
    /// Enforce arc consistency on a label cover instance.
    AcEnforce,
    /// The k-consistency test of the instance against the template.
    KconsTest,
    /// The k-consistency reduction with output template `--target`.
    KconsReduce {
        /// Output template `B` (default: the trivial false template).
        #[arg(long)]
        target: Option<String>,
    },
    /// The arc-consistency reduction with output template `--target`.
    AcReduce {
        #[arg(long)]
        target: Option<String>,
    },
    /// Export the k-th level Sherali–Adams system.
    Sa,
    /// Export the convex relaxation system of a label cover instance.
    LambdaConv {
        #[arg(long, value_enum, default_value_t = NormalizationArg::One)]
        normalization: NormalizationArg,
    },
    /// Decide feasibility of an exported linear system exactly.
    LpCheck,
    /// Export the k-th level affine system over the given modulus.
    Affine,
    /// Solve an exported integer system over Z or Z_n.
    Zsolve,
    /// The polymorphism minion of the template (to `--target`).
    Pol {
        #[arg(long)]
        target: Option<String>,
    },
    /// The ω construction applied to the polymorphism minion.
    Omega {
        #[arg(long)]
        target: Option<String>,
    },
    /// Search for a minion homomorphism between two specified minions.
    MinionHom {
        /// Source minion: proj, pol(FILE), pol(FILE,FILE) or omega(SPEC).
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Check both sides of the arc-consistency adjunction for Pol(template).
    AdjunctionCheck {
        #[arg(long)]
        target: Option<String>,
    },
    /// The k-th tensor test of a minion (default Pol(template)).
    Tensor {
        #[arg(long)]
        minion: Option<String>,
    },
    /// Run a property suite over a seeded random corpus.
    Verify {
        suite: String,
        /// Number of cases (the suite's default when absent).
        #[arg(long)]
        cases: Option<usize>,
        /// Run only this case.
        #[arg(long)]
        case: Option<usize>,
        /// Worker threads (available parallelism when absent).
        #[arg(long)]
        threads: Option<usize>,
    },
}

impl Common {
    fn template(&self) -> Result<(String, Structure)> {
        input::structure(self.template.as_deref().ok_or_else(|| missing("--template"))?)
    }

    fn instance_arg(&self) -> Result<&str> {
        self.instance.as_deref().ok_or_else(|| missing("--instance"))
    }

    fn instance(&self) -> Result<(String, Structure)> {
        input::structure(self.instance_arg()?)
    }

    fn k(&self) -> Result<usize> {
        match self.k {
            Some(k) if k >= 1 => Ok(k),
            Some(_) => Err(Error::Usage("-k must be at least 1".into())),
            None => Err(missing("-k")),
        }
    }

    fn modulus(&self) -> Result<Option<Modulus>> {
        self.modulus.as_deref().map(str::parse).transpose()
    }

    fn seed(&self) -> Result<u64> {
        if let Some(s) = self.seed {
            return Ok(s);
        }
        match std::env::var("CSPFORGE_SEED") {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| Error::Usage(format!("CSPFORGE_SEED must be an unsigned integer, got `{v}`"))),
            Err(_) => Ok(0),
        }
    }
}

fn missing(flag: &str) -> Error {
    Error::Usage(format!("this command needs {flag}"))
}

fn optional_target(arg: &Option<String>) -> Result<Option<(String, Structure)>> {
    arg.as_deref().map(input::structure).transpose()
}

fn run(command: &Command, c: &Common) -> Result<Report> {
    match command {
        Command::Hom => {
            let (xn, x) = c.instance()?;
            let (an, a) = c.template()?;
            Ok(match find_homomorphism(&x, &a)? {
                Some(h) => Report::new("hom", format!("homomorphism {xn} -> {an} found"))
                    .verdict(true)
                    .body(homomorphism_text(&h, &x, &a))
                    .payload(json!({ "map": homomorphism_to_json(&h, &x, &a) })),
                None => Report::new("hom", format!("no homomorphism {xn} -> {an}")).verdict(false),
            })
        }
        Command::Iso => {
            let (xn, x) = c.instance()?;
            let (an, a) = c.template()?;
            Ok(match find_isomorphism(&x, &a)? {
                Some(h) => Report::new("iso", format!("{xn} and {an} are isomorphic"))
                    .verdict(true)
                    .body(homomorphism_text(&h, &x, &a))
                    .payload(json!({ "map": homomorphism_to_json(&h, &x, &a) })),
                None => Report::new("iso", format!("{xn} and {an} are not isomorphic")).verdict(false),
            })
        }
        Command::Homeq => {
            let (xn, x) = c.instance()?;
            let (an, a) = c.template()?;
            let eq = is_hom_equivalent(&x, &a)?;
            let verb = if eq { "are" } else { "are not" };
            Ok(Report::new("homeq", format!("{xn} and {an} {verb} homomorphically equivalent")).verdict(eq))
        }
        Command::Eval { program } => {
            let (pn, p) = input::program(program)?;
            let (_, x) = c.instance()?;
            let derived = evaluate_program(&p, &x)?;
            let idb = &p.idbs()[p.output()];
            let tuples: Vec<Vec<&str>> = derived
                .iter()
                .map(|t| t.iter().zip(&idb.arity).map(|(&e, &ty)| x.element_name(ty, e)).collect())
                .collect();
            let body: String = tuples.iter().map(|t| format!("{}({})\n", idb.name, t.join(","))).collect();
            Ok(Report::new("eval", format!("{pn} derives {} {} tuples", derived.len(), idb.name))
                .verdict(!derived.is_empty())
                .body(body)
                .payload(json!({ "idb": idb.name, "tuples": tuples })))
        }
        Command::Interp { interpretation } => {
            let (fname, f) = input::interpretation(interpretation)?;
            let (xn, x) = c.instance()?;
            structure_report("interp", &format!("{fname}({xn})"), &f.apply(&x)?)
        }
        Command::Union { union } => {
            let (un, u) = input::union(union)?;
            let (xn, x) = c.instance()?;
            structure_report("union", &format!("{un}({xn})"), &u.apply(&x)?)
        }
        Command::Compose { first, second } => compose(first, second),
        Command::Gadget { gadget } => {
            let (gn, g) = input::gadget(gadget)?;
            let (xn, x) = c.instance()?;
            let out = match &g {
                AnyGadget::General(g) => apply_gadget(g, &x)?,
                AnyGadget::Projective(g) => apply_projective_gadget(g, &x)?,
            };
            structure_report("gadget", &format!("{gn}({xn})"), &out)
        }
        Command::Reify => {
            let (xn, x) = c.instance()?;
            match &c.template {
                None => structure_report("reify", &format!("reified_{xn}"), &reify(&x)),
                Some(_) => {
                    let (_, a) = c.template()?;
                    label_cover_report("reify", &format!("reified_{xn}"), &reify_to_label_cover(&a, &x)?)
                }
            }
        }
        Command::CompileGadget { gadget } => {
            let (gn, g) = input::gadget(gadget)?;
            let r = match &g {
                AnyGadget::General(g) => compile_gadget(g)?,
                AnyGadget::Projective(g) => compile_projective_gadget(g)?,
            };
            Ok(reduction_report("compile-gadget", &gn, r))
        }
        Command::Universal => {
            let (bn, b) = c.template()?;
            let (sn, s) = input::label_cover(c.instance_arg()?)?;
            structure_report("universal", &format!("pi_{bn}_{sn}"), &apply_universal_gadget(&b, &s))
        }
        Command::SigmaK => {
            let (an, a) = c.template()?;
            let (xn, x) = c.instance()?;
            let k = c.k()?;
            let s = sigma_k(&a, &x, k)?;
            let mut r = label_cover_report("sigma-k", &format!("sigma{k}_{an}_{xn}"), &s)?;
            let ignored = uncovered_tuples(&x, k);
            if ignored > 0 {
                r = r.note(format!("{ignored} tuples with more than {k} distinct elements are ignored"));
            }
            Ok(r)
        }
        Command::AcEnforce => {
            let (sn, s) = input::label_cover(c.instance_arg()?)?;
            let e = enforce_arc_consistency(&s);
            let ok = !e.has_empty_type();
            let mut r = label_cover_report("ac-enforce", &format!("{sn}_ac"), &e)?;
            r.summary = if ok {
                "arc consistency leaves every label set nonempty".into()
            } else {
                "arc consistency empties a label set".into()
            };
            Ok(r.verdict(ok))
        }
        Command::KconsTest => {
            let (an, a) = c.template()?;
            let (xn, x) = c.instance()?;
            let k = c.k()?;
            let ok = k_consistency_test(&a, k, &x)?;
            let word = if ok { "accepts" } else { "rejects" };
            let mut r = Report::new("kcons-test", format!("{k}-consistency test against {an} {word} {xn}")).verdict(ok);
            let ignored = uncovered_tuples(&x, k);
            if ignored > 0 {
                r = r.note(format!("{ignored} tuples with more than {k} distinct elements are ignored"));
            }
            Ok(r)
        }
        Command::KconsReduce { target } | Command::AcReduce { target } => {
            let arc = matches!(command, Command::AcReduce { .. });
            let (an, a) = c.template()?;
            let (xn, x) = c.instance()?;
            let (bn, b) = optional_target(target)?.unwrap_or_else(|| ("bottom".into(), bottom()));
            let (kind, name, out) = if arc {
                ("ac-reduce", format!("kappa_arc_{xn}"), arc_consistency_reduce(&a, &b, &x)?)
            } else {
                let k = c.k()?;
                ("kcons-reduce", format!("kappa{k}_{xn}"), k_consistency_reduce(&a, &b, k, &x)?)
            };
            let mut r = structure_report(kind, &name, &out)?;
            r.summary = format!("{name}: reduction of {xn} against {an} with output template {bn}");
            let sig = b.signature();
            let has_false = (0..sig.symbol_count()).any(|s| sig.arity(s).is_empty() && !b.holds(s));
            if !has_false {
                r = r.note(format!(
                    "{bn} has no always-false nullary symbol, so empty label sets do not force rejection"
                ));
            }
            Ok(r)
        }
        Command::Sa => {
            let (an, a) = c.template()?;
            let (xn, x) = c.instance()?;
            let k = c.k()?;
            let s = sherali_adams_system(&a, k, &x)?;
            Ok(Report::new(
                "sa",
                format!("# level-{k} Sherali-Adams system of {xn} against {an}: {} variables, {} rows", s.variables().len(), s.rows().len()),
            )
            .body(s.to_string())
            .payload(json!({ "system": linear_system_to_json(&s) })))
        }
        Command::LambdaConv { normalization } => {
            let (sn, s) = input::label_cover(c.instance_arg()?)?;
            let norm = match normalization {
                NormalizationArg::One => Normalization::One,
                NormalizationArg::Zero => Normalization::Zero,
            };
            let sys = lambda_conv_with(&s, norm);
            Ok(Report::new(
                "lambda-conv",
                format!("# convex relaxation of {sn}: {} variables, {} rows", sys.variables().len(), sys.rows().len()),
            )
            .body(sys.to_string())
            .payload(json!({ "system": linear_system_to_json(&sys) })))
        }
        Command::LpCheck => {
            let sys = input::linear_system(c.instance_arg()?)?;
            Ok(match lp_feasible(&sys) {
                Some(x) => {
                    debug_assert!(sys.check(&x));
                    let names = sys.variables();
                    let values: Vec<(String, String)> = x
                        .iter()
                        .enumerate()
                        .filter(|(_, v)| !v.is_zero())
                        .map(|(i, v)| (names[i].name.clone(), v.to_string()))
                        .collect();
                    let body: String = values.iter().map(|(n, v)| format!("{n} = {v}\n")).collect();
                    Report::new("lp-check", "feasible (nonzero values of a solution follow)")
                        .verdict(true)
                        .body(body)
                        .payload(json!({ "solution": values.into_iter().map(|(n, v)| (n, json!(v))).collect::<serde_json::Map<_, _>>() }))
                }
                None => Report::new("lp-check", "infeasible").verdict(false),
            })
        }
        Command::Affine => {
            let (an, a) = c.template()?;
            let (xn, x) = c.instance()?;
            let k = c.k()?;
            let m = c.modulus()?.ok_or_else(|| missing("--modulus"))?;
            let s = affine_system(&a, k, &x, m)?;
            Ok(Report::new(
                "affine",
                format!("# level-{k} affine system of {xn} against {an} over {m}: {} variables, {} rows", s.variables().len(), s.rows().len()),
            )
            .body(s.to_string())
            .payload(json!({ "system": group_system_to_json(&s) })))
        }
        Command::Zsolve => {
            let mut sys = input::group_system(c.instance_arg()?)?;
            if let Some(m) = c.modulus()? {
                if m != sys.modulus() {
                    sys = with_modulus(&sys, m)?;
                }
            }
            Ok(match solve_group_system(&sys) {
                Some(x) => {
                    let pairs: Vec<(String, String)> =
                        sys.variables().iter().cloned().zip(x.iter().map(|v| v.to_string())).collect();
                    let body: String = pairs.iter().map(|(n, v)| format!("{n} = {v}\n")).collect();
                    Report::new("zsolve", format!("solvable over {}", sys.modulus()))
                        .verdict(true)
                        .body(body)
                        .payload(json!({ "solution": pairs.into_iter().map(|(n, v)| (n, json!(v))).collect::<serde_json::Map<_, _>>() }))
                }
                None => Report::new("zsolve", format!("unsolvable over {}", sys.modulus())).verdict(false),
            })
        }
        Command::Pol { target } | Command::Omega { target } => {
            let (_, a) = c.template()?;
            let b = optional_target(target)?.map(|(_, b)| b);
            let pol = polymorphism_minion(&a, b.as_ref().unwrap_or(&a), c.max_arity)?;
            let (kind, m) = match command {
                Command::Omega { .. } => ("omega", omega(&pol)),
                _ => ("pol", pol),
            };
            Ok(Report::new(kind, format!("{} at arities 1..={}", m.name(), m.max_arity()))
                .body(minion_text(&m))
                .payload(minion_payload(&m)))
        }
        Command::MinionHom { from, to } => {
            let m = input::minion(from, c.max_arity)?;
            let n = input::minion(to, c.max_arity)?;
            let note = format!("certificate concerns arities up to {} only", c.max_arity);
            Ok(match find_minion_homomorphism(&m, &n)? {
                Some(h) => {
                    debug_assert!(h.is_homomorphism(&m, &n));
                    Report::new("minion-hom", format!("minion homomorphism {} -> {} found", m.name(), n.name()))
                        .verdict(true)
                        .body(minion_map_text(&h, &m, &n))
                        .payload(json!({ "maps": h.maps, "truncation": c.max_arity }))
                }
                None => Report::new("minion-hom", format!("no minion homomorphism {} -> {}", m.name(), n.name()))
                    .verdict(false)
                    .payload(json!({ "truncation": c.max_arity })),
            }
            .note(note))
        }
        Command::AdjunctionCheck { target } => {
            let (sn, s) = input::label_cover(c.instance_arg()?)?;
            let (_, a) = c.template()?;
            let b = optional_target(target)?.map(|(_, b)| b);
            let m = polymorphism_minion(&a, b.as_ref().unwrap_or(&a), c.max_arity)?;
            let r = check_arc_adjunction(&s, &m)?;
            let side = |v: bool| if v { "yes" } else { "no" };
            Ok(Report::new(
                "adjunction-check",
                format!("adjunction sides {} for {sn} and {}", if r.agree() { "agree" } else { "DISAGREE" }, m.name()),
            )
            .verdict(r.agree())
            .body(format!(
                "arc-consistent reduct maps to the minion: {}\ninstance maps to omega of the minion: {}\n",
                side(r.left),
                side(r.right)
            ))
            .payload(json!({ "left": r.left, "right": r.right })))
        }
        Command::Tensor { minion } => {
            let (an, a) = c.template()?;
            let (xn, x) = c.instance()?;
            let k = c.k()?;
            let m = match minion {
                Some(spec) => input::minion(spec, c.max_arity)?,
                None => polymorphism_minion(&a, &a, c.max_arity)?,
            };
            let ok = tensor_test(&a, &m, k, &x)?;
            let word = if ok { "accepts" } else { "rejects" };
            Ok(Report::new("tensor", format!("level-{k} tensor test of {} over {an} {word} {xn}", m.name())).verdict(ok))
        }
        Command::Verify { suite, cases, case, threads } => {
            let suite: Suite = suite.parse()?;
            let options = RunOptions { cases: *cases, only: *case, threads: *threads };
            let report = run_suite(suite, c.seed()?, &options);
            let payload = serde_json::to_value(&report).unwrap_or_default();
            let ok = report.passed();
            Ok(Report::new("verify", report.to_string().trim_end().to_string()).verdict(ok).payload(payload))
        }
    }
}

/// The same rows read over another modulus.
fn with_modulus(sys: &GroupSystem, m: Modulus) -> Result<GroupSystem> {
    let mut out = GroupSystem::new(m);
    for v in sys.variables() {
        out.add_variable(v.clone());
    }
    for r in sys.rows() {
        out.add_row(r.coeffs.clone(), r.rhs.clone())?;
    }
    Ok(out)
}

fn structure_report(kind: &'static str, name: &str, s: &Structure) -> Result<Report> {
    Ok(Report::new(kind, format!("# {name}: {} elements, {} tuples", s.element_count(), s.tuple_count()))
        .body(structures_text(&[(name, s)]))
        .payload(structure_payload(name, s)))
}

fn label_cover_report(kind: &'static str, name: &str, l: &cspforge::labelcover::LabelCoverInstance) -> Result<Report> {
    Ok(Report::new(
        kind,
        format!("# {name}: {} variables, {} constraints", l.variables().len(), l.constraints().len()),
    )
    .body(label_cover_text(name, l))
    .payload(label_cover_payload(name, l)))
}

fn reduction_report(kind: &'static str, name: &str, r: Reduction) -> Report {
    let mut doc = Document::new();
    let (i, u) = (format!("{name}_interp"), format!("{name}_union"));
    doc.interpretations.push((i.clone(), r.interpretation));
    doc.unions.push((u.clone(), r.union));
    let text = document_text(doc);
    Report::new(kind, format!("# {name}: interpretation {i} followed by union {u}"))
        .body(text.clone())
        .payload(json!({ "interpretation": i, "union": u, "document": text }))
}

fn compose(first: &str, second: &str) -> Result<Report> {
    let (n1, a) = input::composable(first)?;
    let (n2, b) = input::composable(second)?;
    let name = format!("{n2}_after_{n1}");
    let mut doc = Document::new();
    match (a, b) {
        (Composable::Interpretation(a), Composable::Interpretation(b)) => {
            doc.interpretations.push((name.clone(), compose_interpretations(&a, &b)?));
        }
        (Composable::Union(a), Composable::Union(b)) => {
            doc.unions.push((name.clone(), compose_union_gadgets(&a, &b)?));
        }
        (a, b) => {
            let lift = |c: Composable| match c {
                Composable::Interpretation(i) => Reduction::from_interpretation(i),
                Composable::Union(u) => Reduction::from_union(u),
            };
            return Ok(reduction_report("compose", &name, compose_ddatalog(&lift(a), &lift(b))?));
        }
    }
    let text = document_text(doc);
    Ok(Report::new("compose", format!("# {name}")).body(text.clone()).payload(json!({ "name": name, "document": text })))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let c = &cli.common;
    let result = run(&cli.command, c).and_then(|report| {
        let seed = c.seed()?;
        let rendered = match c.format {
            Format::Text => report.text(),
            Format::Json => format!("{:#}\n", report.json(seed)),
        };
        for note in &report.notes {
            eprintln!("note: {note}");
        }
        match &c.out {
            Some(path) => {
                std::fs::write(path, &rendered)
                    .map_err(|e| Error::Usage(format!("cannot write `{path}`: {e}")))?;
                println!("{}", report.summary.lines().next().unwrap_or_default());
            }
            None => print!("{rendered}"),
        }
        Ok(report.exit_code())
    });
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

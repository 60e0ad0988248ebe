//! The case generators and checks of every suite.
//!
//! Each suite precomputes its pools once; a case draws its inputs from the
//! case generator, checks the property and reports a one-line summary.
//! Failing cases serialize their inputs in the declaration language.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::corpus::*;
use super::{Outcome, Suite};
use crate::datalog::{compose_ddatalog, compose_interpretations, swap_union_interpretation, Interpretation, Reduction, UnionGadget};
use crate::error::Result;
use crate::gadgets::{
    apply_gadget, apply_projective_gadget, apply_universal_gadget, compile_gadget, compile_projective_gadget,
    is_closure_predicate, Gadget, ProjectiveGadget,
};
use crate::gadgets::catalog::parity_projective_gadget;
use crate::labelcover::{
    enforce_arc_consistency, k_consistency_instance, k_consistency_reduce, k_consistency_test, sigma_k,
    LabelCoverInstance, LcSignature,
};
use crate::minions::{
    all_minion_homomorphisms, check_arc_adjunction, cokleisli_compose, counit, omega, polymorphism_minion,
    projections, Minion, MinionMap,
};
use crate::relax::{
    affine_system, affine_system_of, group_equations, group_template, lambda_conv, lp_feasible,
    sherali_adams_system, solve_group_system, tensor_test, uniform_witness, GroupSystem, Modulus,
};
use crate::structures::catalog::{bottom, clique};
use crate::structures::{
    find_homomorphism, is_hom_equivalent, is_isomorphic, power, power_element_index, Homomorphism, Structure,
};
use crate::text::{print_document, Document};

/// A suite's precomputed pools and its case function.
pub(crate) trait Cases: Sync {
    fn case(&self, rng: &mut ChaCha8Rng, index: usize) -> Result<Outcome>;
}

pub(crate) fn build(suite: Suite) -> Box<dyn Cases> {
    match suite {
        Suite::Monotone => Box::new(Monotone {
            interpretations: interpretation_pool(),
            unions: union_pool(),
            gadgets: gadget_pool(),
            projective: parity_projective_gadget(),
        }),
        Suite::Composition => Box::new(Composition {
            reductions: reduction_pool(),
            interpretations: digraph_interpretations(),
            targets: interpretation_pool(),
        }),
        Suite::Swap => Box::new(Swap {
            unions: union_pool(),
            interpretations: interpretation_pool(),
        }),
        Suite::GadgetCompile => Box::new(GadgetCompile::new()),
        Suite::Universality => Box::new(Universality),
        Suite::Completeness => Box::new(Consistency {
            templates: consistency_templates(),
            bounded_width: false,
        }),
        Suite::BoundedWidth => Box::new(Consistency {
            templates: consistency_templates(),
            bounded_width: true,
        }),
        Suite::SaEquivalence => Box::new(SaEquivalence),
        Suite::AffineUniform => Box::new(AffineUniform),
        Suite::Adjunction => Box::new(Adjunction {
            minions: vec![
                polymorphism_minion(&clique(2), &clique(2), 3).expect("small minion"),
                polymorphism_minion(&clique(3), &clique(3), 3).expect("small minion"),
            ],
        }),
        Suite::Comonad => Box::new(Comonad::new()),
        Suite::SnfOracle => Box::new(SnfOracle),
        Suite::Tensor => Box::new(Tensor {
            projections6: projections(6),
            projections4: projections(4),
            pol_k2: polymorphism_minion(&clique(2), &clique(2), 4).expect("small minion"),
        }),
    }
}

/// Whether `x → a`. A map returned by the search is re-checked
/// independently; a wrong map is a defect and aborts the case.
fn maps_to(x: &Structure, a: &Structure) -> Result<bool> {
    Ok(match find_homomorphism(x, a)? {
        Some(h) => {
            assert!(h.is_homomorphism(x, a), "homomorphism search returned an invalid map");
            true
        }
        None => false,
    })
}

/// Serializes named structures in the declaration language.
fn render(items: &[(&str, &Structure)]) -> String {
    let mut doc = Document::new();
    for (name, s) in items {
        doc.structures.push((name.to_string(), (*s).clone()));
    }
    doc.close_signatures();
    print_document(&doc).unwrap_or_else(|_| {
        items
            .iter()
            .map(|(n, s)| format!("# {n}\n{s}"))
            .collect::<Vec<_>>()
            .join("\n")
    })
}

fn render_label_covers(items: &[(&str, &LabelCoverInstance)]) -> String {
    let mut doc = Document::new();
    for (name, s) in items {
        doc.label_covers.push((name.to_string(), (*s).clone()));
    }
    print_document(&doc).unwrap_or_default()
}

fn density(rng: &mut ChaCha8Rng, low: f64, high: f64) -> f64 {
    rng.gen_range(low..high)
}

// ---------------------------------------------------------------- monotone

struct Monotone {
    interpretations: Vec<(String, Interpretation)>,
    unions: Vec<(String, UnionGadget)>,
    gadgets: Vec<(String, Gadget)>,
    projective: ProjectiveGadget,
}

impl Cases for Monotone {
    fn case(&self, rng: &mut ChaCha8Rng, _index: usize) -> Result<Outcome> {
        let d = density(rng, 0.15, 0.5);
        let (a, b) = homomorphic_pair(rng, &crate::structures::catalog::digraph_signature(), 4, d);
        let d2 = density(rng, 0.15, 0.5);
        let (a2, b2) = homomorphic_pair(rng, &bipartite_signature(), 3, d2);
        let mut checked = 0;
        let fail = |what: &str, fa: &Structure, fb: &Structure, a: &Structure, b: &Structure| {
            Outcome::fail(
                format!("{what}: A → B but no homomorphism between the images"),
                render(&[("A", a), ("B", b), ("imageA", fa), ("imageB", fb)]),
            )
        };
        if !maps_to(&a, &b)? || !maps_to(&a2, &b2)? {
            return Ok(fail("corpus", &a, &b, &a, &b));
        }
        for (name, phi) in &self.interpretations {
            let (fa, fb) = (phi.apply(&a)?, phi.apply(&b)?);
            if !maps_to(&fa, &fb)? {
                return Ok(fail(&format!("interpretation {name}"), &fa, &fb, &a, &b));
            }
            checked += 1;
        }
        for (name, u) in &self.unions {
            let (x, y) = if *u.input() == *a.signature() { (&a, &b) } else { (&a2, &b2) };
            let (fa, fb) = (u.apply(x)?, u.apply(y)?);
            if !maps_to(&fa, &fb)? {
                return Ok(fail(&format!("union gadget {name}"), &fa, &fb, x, y));
            }
            checked += 1;
        }
        for (name, g) in &self.gadgets {
            let (fa, fb) = (apply_gadget(g, &a)?, apply_gadget(g, &b)?);
            if !maps_to(&fa, &fb)? {
                return Ok(fail(&format!("gadget {name}"), &fa, &fb, &a, &b));
            }
            checked += 1;
        }
        let (fa, fb) = (apply_projective_gadget(&self.projective, &a)?, apply_projective_gadget(&self.projective, &b)?);
        if !maps_to(&fa, &fb)? {
            return Ok(fail("projective parity gadget", &fa, &fb, &a, &b));
        }
        checked += 1;
        Ok(Outcome::pass(format!(
            "|A|={}, |B|={}: {checked} maps preserve A → B",
            a.element_count(),
            b.element_count()
        )))
    }
}

// ------------------------------------------------------------- composition

struct Composition {
    reductions: Vec<(String, Reduction)>,
    interpretations: Vec<(String, Interpretation)>,
    targets: Vec<(String, Interpretation)>,
}

impl Composition {
    fn random_input(rng: &mut ChaCha8Rng, sig: &Arc<crate::structures::Signature>) -> Structure {
        let sizes: Vec<usize> = (0..sig.type_count()).map(|_| rng.gen_range(1..=5)).collect();
        let d = density(rng, 0.1, 0.4);
        random_structure(rng, sig, &sizes, d)
    }
}

impl Cases for Composition {
    fn case(&self, rng: &mut ChaCha8Rng, _index: usize) -> Result<Outcome> {
        // Reductions: a random composable pair from the pool whose
        // composition stays within the size budget.
        let pairs: Vec<(&(String, Reduction), &(String, Reduction))> = self
            .reductions
            .iter()
            .flat_map(|a| self.reductions.iter().map(move |b| (a, b)))
            .filter(|((_, r1), (_, r2))| {
                **r2.input() == **r1.output() && composition_cost(r1, r2) <= COMPOSITION_BUDGET
            })
            .collect();
        let ((n1, r1), (n2, r2)) = *pairs.choose(rng).expect("nonempty pool");
        let composed = compose_ddatalog(r1, r2)?;
        let x = Self::random_input(rng, r1.input());
        let sequential = r2.apply(&r1.apply(&x)?)?;
        let direct = composed.apply(&x)?;
        if !is_isomorphic(&direct, &sequential)? {
            return Ok(Outcome::fail(
                format!("reductions {n1} then {n2}: composed result differs from sequential application"),
                render(&[("X", &x), ("composed", &direct), ("sequential", &sequential)]),
            ));
        }
        // Interpretations: a pooled interpretation followed by a composable one.
        let (m1, phi) = self.interpretations.choose(rng).expect("nonempty pool");
        let identity = ("identity".to_string(), Interpretation::identity(phi.output().clone()));
        let mut targets: Vec<&(String, Interpretation)> =
            self.targets.iter().filter(|(_, chi)| **chi.input() == **phi.output()).collect();
        if targets.is_empty() {
            targets.push(&identity);
        }
        let (m2, chi) = *targets.choose(rng).expect("nonempty");
        let composed = compose_interpretations(phi, chi)?;
        let y = Self::random_input(rng, phi.input());
        let sequential = chi.apply(&phi.apply(&y)?)?;
        let direct = composed.apply(&y)?;
        if !is_isomorphic(&direct, &sequential)? {
            return Ok(Outcome::fail(
                format!("interpretations {m1} then {m2}: composed result differs from sequential application"),
                render(&[("X", &y), ("composed", &direct), ("sequential", &sequential)]),
            ));
        }
        Ok(Outcome::pass(format!(
            "{n1} then {n2} (|X|={}), {m1} then {m2} (|X|={}): isomorphic",
            x.element_count(),
            y.element_count()
        )))
    }
}

// -------------------------------------------------------------------- swap

struct Swap {
    unions: Vec<(String, UnionGadget)>,
    interpretations: Vec<(String, Interpretation)>,
}

impl Cases for Swap {
    fn case(&self, rng: &mut ChaCha8Rng, _index: usize) -> Result<Outcome> {
        let (un, u) = self.unions.choose(rng).expect("nonempty pool");
        let (pn, phi) = self.interpretations.choose(rng).expect("nonempty pool");
        let (phi2, u2) = swap_union_interpretation(u, phi)?;
        let sig = u.input();
        let sizes: Vec<usize> = (0..sig.type_count()).map(|_| rng.gen_range(1..=4)).collect();
        let d = density(rng, 0.1, 0.4);
        let a = random_structure(rng, sig, &sizes, d);
        let swapped = u2.apply(&phi2.apply(&a)?)?;
        let original = phi.apply(&u.apply(&a)?)?;
        if !is_isomorphic(&swapped, &original)? {
            return Ok(Outcome::fail(
                format!("union {un}, interpretation {pn}: υ'(φ'(A)) and φ(υ(A)) differ"),
                render(&[("A", &a), ("swapped", &swapped), ("original", &original)]),
            ));
        }
        Ok(Outcome::pass(format!(
            "union {un}, interpretation {pn}, |A|={}: isomorphic",
            a.element_count()
        )))
    }
}

// ---------------------------------------------------------- gadget-compile

struct GadgetCompile {
    gadgets: Vec<(String, Gadget, Reduction)>,
    projective: (ProjectiveGadget, Reduction),
}

impl GadgetCompile {
    fn new() -> Self {
        let gadgets = gadget_pool()
            .into_iter()
            .map(|(n, g)| {
                let r = compile_gadget(&g).expect("pooled gadgets compile");
                (n, g, r)
            })
            .collect();
        let p = parity_projective_gadget();
        let r = compile_projective_gadget(&p).expect("parity compiles");
        GadgetCompile {
            gadgets,
            projective: (p, r),
        }
    }
}

impl Cases for GadgetCompile {
    fn case(&self, rng: &mut ChaCha8Rng, _index: usize) -> Result<Outcome> {
        let n = rng.gen_range(1..=6);
        let d = density(rng, 0.1, 0.6);
        let x = random_digraph(rng, n, d, 0.1);
        for (name, g, r) in &self.gadgets {
            if !r.interpretation.recursion_only_through(is_closure_predicate) {
                return Ok(Outcome::fail(
                    format!("gadget {name}: compiled programs recurse outside the closure predicates"),
                    String::new(),
                ));
            }
            let compiled = r.apply(&x)?;
            let direct = apply_gadget(g, &x)?;
            if !is_hom_equivalent(&compiled, &direct)? {
                return Ok(Outcome::fail(
                    format!("gadget {name}: compiled reduction is not homomorphically equivalent"),
                    render(&[("X", &x), ("compiled", &compiled), ("gadget", &direct)]),
                ));
            }
        }
        let (p, r) = &self.projective;
        if !r.interpretation.recursion_only_through(is_closure_predicate) {
            return Ok(Outcome::fail(
                "projective parity gadget: compiled programs recurse outside the closure predicates",
                String::new(),
            ));
        }
        let compiled = r.apply(&x)?;
        let direct = apply_projective_gadget(p, &x)?;
        if !is_hom_equivalent(&compiled, &direct)? {
            return Ok(Outcome::fail(
                "projective parity gadget: compiled reduction is not homomorphically equivalent",
                render(&[("X", &x), ("compiled", &compiled), ("gadget", &direct)]),
            ));
        }
        Ok(Outcome::pass(format!(
            "|X|={n}, {} arcs: {} gadgets hom-equivalent to their compilations",
            x.relation(0).len(),
            self.gadgets.len() + 1
        )))
    }
}

// ------------------------------------------------------------ universality

struct Universality;

/// The universal gadget `π_C` on the label cover signature `lc` written as
/// an ordinary gadget, optionally perturbed: random extra tuples are added
/// to the copies `D_Y = C^Y`, and the constraint structures receive the
/// images needed for the gluing maps to stay homomorphisms.
fn universal_gadget(rng: &mut ChaCha8Rng, c: &Structure, lc: &LcSignature, perturb: f64) -> Result<Gadget> {
    let m = c.domain_size(0);
    let domains: Vec<Structure> = lc
        .label_sets()
        .iter()
        .map(|labels| {
            let mut d = power(c, labels.len());
            let size = d.domain_size(0);
            for u in 0..size {
                for v in 0..size {
                    if rng.gen_bool(perturb) {
                        d.add_tuple(0, vec![u, v]).expect("arc");
                    }
                }
            }
            d
        })
        .collect();
    let mut symbols = Vec::new();
    let mut projections = Vec::new();
    for (from, to, map) in lc.maps() {
        let n_to = lc.label_sets()[*to].len();
        // b ∈ C^{to} goes to b ∘ map ∈ C^{from}.
        let count = m.pow(n_to as u32);
        let precompose: Vec<usize> = (0..count)
            .map(|idx| {
                let vals = crate::structures::power_element_values(idx, m.max(1), n_to);
                let composed: Vec<usize> = map.iter().map(|&l| vals[l]).collect();
                power_element_index(&composed, m)
            })
            .collect();
        let mut s = domains[*from].clone();
        for t in domains[*to].relation(0) {
            s.add_tuple(0, vec![precompose[t[0]], precompose[t[1]]])?;
        }
        symbols.push(s);
        projections.push(vec![
            Homomorphism::identity(&domains[*from]),
            Homomorphism {
                maps: vec![precompose],
            },
        ]);
    }
    Gadget::new(
        lc.signature().clone(),
        c.signature().clone(),
        domains,
        symbols,
        projections,
    )
}

/// A label cover instance with a planted homomorphism into `t`: every
/// variable copies the label set of a random variable of `t`, and the
/// constraints are copies of constraints of `t` between matching variables.
fn planted_label_cover(rng: &mut ChaCha8Rng, t: &LabelCoverInstance) -> LabelCoverInstance {
    let mut s = LabelCoverInstance::new();
    let n = rng.gen_range(1..=3);
    let image: Vec<usize> = (0..n).map(|_| rng.gen_range(0..t.variables().len())).collect();
    for (i, &v) in image.iter().enumerate() {
        s.add_variable(format!("s{i}"), t.variable(v).labels.clone());
    }
    for c in t.constraints() {
        for i in 0..n {
            for j in 0..n {
                if image[i] == c.from && image[j] == c.to && rng.gen_bool(0.7) {
                    s.add_constraint(i, j, c.map.clone()).expect("copied constraint");
                }
            }
        }
    }
    s
}

impl Cases for Universality {
    fn case(&self, rng: &mut ChaCha8Rng, index: usize) -> Result<Outcome> {
        // Part one: a gadget γ with γ(P) → B sends every instance S into π_B(S).
        let s = random_label_cover(rng, 3, 3);
        let lc = LcSignature::covering(&[&s])?;
        let p = lc.template();
        let c_size = rng.gen_range(1..=2);
        let c_density = density(rng, 0.3, 1.0);
        let c = random_digraph(rng, c_size, c_density, 0.3);
        let b_size = rng.gen_range(1..=3);
        let b_density = density(rng, 0.3, 1.0);
        let b = random_digraph(rng, b_size, b_density, 0.3);
        let perturb = if index % 2 == 0 { 0.0 } else { 0.15 };
        let gamma = universal_gadget(rng, &c, &lc, perturb)?;
        let gp = apply_gadget(&gamma, &p)?;
        let s_structure = lc.to_structure(&s)?;
        let gs = apply_gadget(&gamma, &s_structure)?;
        let pb = apply_universal_gadget(&b, &s);
        let premise = maps_to(&gp, &b)?;
        if premise && !maps_to(&gs, &pb)? {
            return Ok(Outcome::fail(
                "γ(P) → B but γ(S) does not map to π_B(S)",
                format!(
                    "{}{}",
                    render_label_covers(&[("S", &s)]),
                    render(&[("C", &c), ("B", &b), ("gammaS", &gs), ("piBS", &pb)])
                ),
            ));
        }
        if perturb == 0.0 && !is_isomorphic(&gs, &apply_universal_gadget(&c, &s))? {
            return Ok(Outcome::fail(
                "the unperturbed gadget γ(S) differs from π_C(S)",
                format!("{}{}", render_label_covers(&[("S", &s)]), render(&[("C", &c)])),
            ));
        }
        // Part two: S → π_P(T) implies π_B(S) → π_B(T).
        let t = random_label_cover(rng, 3, 2);
        let s2 = planted_label_cover(rng, &t);
        let lc2 = LcSignature::covering(&[&s2, &t])?;
        let p2 = lc2.template();
        let premise2 = maps_to(&lc2.to_structure(&s2)?, &apply_universal_gadget(&p2, &t))?;
        if premise2 {
            for (name, target) in [("K2", clique(2)), ("K3", clique(3)), ("B", b.clone())] {
                let left = apply_universal_gadget(&target, &s2);
                let right = apply_universal_gadget(&target, &t);
                if !maps_to(&left, &right)? {
                    return Ok(Outcome::fail(
                        format!("S → π_P(T) but π_{name}(S) does not map to π_{name}(T)"),
                        format!("{}{}", render_label_covers(&[("S", &s2), ("T", &t)]), render(&[("B", &target)])),
                    ));
                }
            }
        }
        Ok(Outcome::pass(format!(
            "γ(P) → B {}; S → π_P(T) {}",
            if premise { "holds, conclusion verified" } else { "fails (vacuous)" },
            if premise2 { "holds, conclusion verified" } else { "fails (vacuous)" },
        )))
    }
}

// ------------------------------------------- completeness / bounded-width

struct Consistency {
    templates: Vec<(String, Structure, Vec<Structure>)>,
    bounded_width: bool,
}

/// Upper bound on the number of elements plus tuples of `κ_k^{A,B}(X)`.
/// Templates `B` over the bound are skipped for the instance; when none
/// fits, the instance is regenerated smaller.
const KAPPA_BUDGET: usize = 300_000;

/// Elements plus tuples of the powers `B^{F_v}` that make up `π_B(κ)`.
fn kappa_size(kappa: &LabelCoverInstance, b: &Structure) -> usize {
    let sig = b.signature();
    let pow = |base: usize, n: usize| base.saturating_pow(n as u32);
    kappa
        .variables()
        .iter()
        .map(|v| {
            let n = v.labels.len();
            let elements = (0..sig.type_count()).map(|t| pow(b.domain_size(t), n));
            let tuples = (0..sig.symbol_count()).map(|r| pow(b.relation(r).len(), n));
            elements.chain(tuples).fold(0usize, usize::saturating_add)
        })
        .fold(0usize, usize::saturating_add)
}

impl Cases for Consistency {
    fn case(&self, rng: &mut ChaCha8Rng, index: usize) -> Result<Outcome> {
        let combos = self.templates.len() * 2;
        let (name, a, bs) = &self.templates[(index % combos) / 2];
        let k = 2 + index % 2;
        let sig = a.signature();
        if self.bounded_width {
            let max = if k == 2 { 6 } else { 5 };
            let sizes: Vec<usize> = (0..sig.type_count()).map(|_| rng.gen_range(1..=max)).collect();
            let d = density(rng, 0.1, 0.7);
            let x = if rng.gen_bool(0.5) {
                planted_instance(rng, a, &sizes, d).0
            } else {
                random_structure(rng, sig, &sizes, d / 2.0)
            };
            let accepts = k_consistency_test(a, k, &x)?;
            let reduced = k_consistency_reduce(a, &bottom(), k, &x)?;
            let is_bottom = reduced == bottom();
            if accepts != is_bottom {
                return Ok(Outcome::fail(
                    format!("{name}, k={k}: test {} but κ(X) {} ⊥", verdict(accepts), if is_bottom { "=" } else { "≠" }),
                    render(&[("A", a), ("X", &x)]),
                ));
            }
            return Ok(Outcome::pass(format!(
                "{name}, k={k}, |X|={}: test {}, κ(X) {} ⊥",
                x.element_count(),
                verdict(accepts),
                if is_bottom { "=" } else { "≠" }
            )));
        }
        // Completeness: regenerate smaller until some B fits the budget.
        let mut max = if k == 2 { 6 } else { 5 };
        loop {
            let sizes: Vec<usize> = (0..sig.type_count()).map(|_| rng.gen_range(1..=max)).collect();
            let d = density(rng, 0.4, 1.0);
            let (x, h) = planted_instance(rng, a, &sizes, d);
            assert!(h.is_homomorphism(&x, a), "planted map is a homomorphism");
            let kappa = k_consistency_instance(a, &x, k)?;
            let fitting: Vec<&Structure> = bs.iter().filter(|b| kappa_size(&kappa, b) <= KAPPA_BUDGET).collect();
            if fitting.is_empty() {
                max -= 1;
                continue;
            }
            for b in &fitting {
                let reduced = apply_universal_gadget(b, &kappa);
                if !maps_to(&reduced, b)? {
                    return Ok(Outcome::fail(
                        format!("{name}, k={k}: X → A but κ_k^{{A,B}}(X) does not map to B"),
                        render(&[("A", a), ("B", b), ("X", &x)]),
                    ));
                }
            }
            return Ok(Outcome::pass(format!(
                "{name}, k={k}, |X|={}: κ(X) → B for {} of {} templates B",
                x.element_count(),
                fitting.len(),
                bs.len()
            )));
        }
    }
}

fn verdict(accepts: bool) -> &'static str {
    if accepts {
        "accepts"
    } else {
        "rejects"
    }
}

// ---------------------------------------------------------- sa-equivalence

struct SaEquivalence;

/// Largest instance for which `SA^k` over `A = K_a` is solved exactly.
fn sa_cap(a: usize, k: usize) -> usize {
    match (a, k) {
        (2, 2) => 6,
        (2, _) => 5,
        (_, 2) => 5,
        _ => 4,
    }
}

impl Cases for SaEquivalence {
    fn case(&self, rng: &mut ChaCha8Rng, index: usize) -> Result<Outcome> {
        let (size, k) = [(2, 2), (2, 3), (3, 2), (3, 3)][index % 4];
        let a = clique(size);
        let n = rng.gen_range(2..=sa_cap(size, k));
        let d = density(rng, 0.3, 1.0);
        let x = random_graph(rng, n, d);
        let sa = sherali_adams_system(&a, k, &x)?;
        let lc = lambda_conv(&enforce_arc_consistency(&sigma_k(&a, &x, k)?));
        let sa_solution = lp_feasible(&sa);
        let lc_solution = lp_feasible(&lc);
        if let Some(w) = &sa_solution {
            assert!(sa.check(w), "SA solution satisfies its system");
        }
        if let Some(w) = &lc_solution {
            assert!(lc.check(w), "λ_conv solution satisfies its system");
        }
        let (f1, f2) = (sa_solution.is_some(), lc_solution.is_some());
        let label = format!("K{size}, k={k}, n={n}, {} edges", x.relation(0).len() / 2);
        if f1 != f2 {
            return Ok(Outcome::fail(
                format!("{label}: SA {} but λ_conv {}", feasible(f1), feasible(f2)),
                render(&[("X", &x)]),
            ));
        }
        let hom = maps_to(&x, &a)?;
        if hom && !f1 {
            return Ok(Outcome::fail(
                format!("{label}: X → A but SA is infeasible"),
                render(&[("X", &x)]),
            ));
        }
        Ok(Outcome::pass(format!(
            "{label}: both {}{}",
            feasible(f1),
            if hom { ", X → A" } else { "" }
        )))
    }
}

fn feasible(f: bool) -> &'static str {
    if f {
        "feasible"
    } else {
        "infeasible"
    }
}

// ---------------------------------------------------------- affine-uniform

struct AffineUniform;

impl Cases for AffineUniform {
    fn case(&self, rng: &mut ChaCha8Rng, index: usize) -> Result<Outcome> {
        let (p, q) = if index % 2 == 0 { (2u64, 3u64) } else { (3, 2) };
        let g = group_template(Modulus::Cyclic(p), &[1])?;
        let n = rng.gen_range(2..=4);
        let x = if rng.gen_bool(0.5) {
            let d = density(rng, 0.05, 0.3);
            planted_instance(rng, &g, &[n], d).0
        } else {
            let mut x = crate::structures::Structure::new(g.signature().clone());
            for e in 0..n {
                x.add_element(0, e.to_string());
            }
            let add = g.signature().symbol_index("Add").expect("Add");
            for _ in 0..rng.gen_range(1..=n + 1) {
                let t = vec![rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)];
                x.add_tuple(add, t)?;
            }
            for s in 0..g.signature().symbol_count() {
                if s != add && g.signature().arity(s).len() == 1 && rng.gen_bool(0.6) {
                    x.add_tuple(s, vec![rng.gen_range(0..n)])?;
                }
            }
            x
        };
        let k = 3;
        let sat = maps_to(&x, &g)?;
        let modulus = Modulus::Cyclic(p);
        let eqs = solve_group_system(&group_equations(&x, modulus)?);
        let aff_system = affine_system(&g, k, &x, modulus)?;
        let aff = solve_group_system(&aff_system);
        if let Some(w) = &aff {
            assert!(aff_system.check(w), "affine solution satisfies its system");
        }
        if sat != eqs.is_some() || sat != aff.is_some() {
            return Ok(Outcome::fail(
                format!(
                    "Z{p}: homomorphism {}, linear equations {}, affine relaxation {}",
                    sat,
                    feasible(eqs.is_some()),
                    feasible(aff.is_some())
                ),
                render(&[("X", &x)]),
            ));
        }
        let consistent = k_consistency_test(&g, k, &x)?;
        let mut uniform = "not k-consistent";
        if consistent {
            let kappa = k_consistency_instance(&g, &x, k)?;
            let system = affine_system_of(&kappa, Modulus::Cyclic(q));
            match uniform_witness(&kappa, p, q) {
                Some(w) if system.check(&w) => uniform = "uniform witness checks",
                _ => {
                    return Ok(Outcome::fail(
                        format!("Z{p}: k-consistent but the uniform Z{q} witness fails"),
                        render(&[("X", &x)]),
                    ))
                }
            }
        }
        Ok(Outcome::pass(format!(
            "Z{p}, |X|={n}: {} by all three; {uniform}",
            if sat { "satisfiable" } else { "unsatisfiable" }
        )))
    }
}

// -------------------------------------------------------------- adjunction

struct Adjunction {
    minions: Vec<Minion>,
}

impl Cases for Adjunction {
    fn case(&self, rng: &mut ChaCha8Rng, _index: usize) -> Result<Outcome> {
        let s = random_label_cover(rng, 3, 3);
        let mut sides = Vec::new();
        for (name, m) in ["Pol(K2)", "Pol(K3)"].iter().zip(&self.minions) {
            let report = check_arc_adjunction(&s, m)?;
            if !report.agree() {
                return Ok(Outcome::fail(
                    format!(
                        "{name}: κ_arc(S) → M is {} but S → ω(M) is {}",
                        report.left, report.right
                    ),
                    render_label_covers(&[("S", &s)]),
                ));
            }
            sides.push(format!("{name} {}", report.left));
        }
        Ok(Outcome::pass(format!(
            "{} variables, {} constraints: both sides agree ({})",
            s.variables().len(),
            s.constraints().len(),
            sides.join(", ")
        )))
    }
}

// ----------------------------------------------------------------- comonad

struct Comonad {
    minions: Vec<Minion>,
    omegas: Vec<Minion>,
    /// `arrows[i][j]`: co-Kleisli arrows `ω(M_i) → M_j`.
    arrows: Vec<Vec<Vec<MinionMap>>>,
}

impl Comonad {
    fn new() -> Self {
        let minions = small_minions();
        let omegas: Vec<Minion> = minions.iter().map(omega).collect();
        let arrows = omegas
            .iter()
            .map(|o| {
                minions
                    .iter()
                    .map(|m| all_minion_homomorphisms(o, m, 12).expect("same truncation"))
                    .collect()
            })
            .collect();
        Comonad {
            minions,
            omegas,
            arrows,
        }
    }

    fn pick(&self, rng: &mut ChaCha8Rng, from: usize) -> Option<(usize, MinionMap)> {
        let targets: Vec<usize> = (0..self.minions.len())
            .filter(|&j| !self.arrows[from][j].is_empty())
            .collect();
        let j = *targets.choose(rng)?;
        Some((j, self.arrows[from][j].choose(rng)?.clone()))
    }
}

impl Cases for Comonad {
    fn case(&self, rng: &mut ChaCha8Rng, _index: usize) -> Result<Outcome> {
        let k = rng.gen_range(0..self.minions.len());
        let Some((l, eta)) = self.pick(rng, k) else {
            return Ok(Outcome::pass("no arrows out of the chosen minion"));
        };
        let Some((m, zeta)) = self.pick(rng, l) else {
            return Ok(Outcome::pass("no composable pair"));
        };
        let Some((n, xi)) = self.pick(rng, m) else {
            return Ok(Outcome::pass("no composable triple"));
        };
        let (mk, ml, mm, mn) = (&self.minions[k], &self.minions[l], &self.minions[m], &self.minions[n]);
        let names = format!("{} → {} → {} → {}", mk.name(), ml.name(), mm.name(), mn.name());
        let fail = |what: &str| Outcome::fail(format!("{names}: {what}"), String::new());
        // ξ ∘ ε = ξ and ε ∘ ξ = ξ.
        let left = cokleisli_compose(&xi, &counit(mm), mm, mm, mn)?;
        if left != xi {
            return Ok(fail("ξ composed after the counit differs from ξ"));
        }
        let right = cokleisli_compose(&counit(mn), &xi, mm, mn, mn)?;
        if right != xi {
            return Ok(fail("the counit composed after ξ differs from ξ"));
        }
        // (ξ ∘ ζ) ∘ η = ξ ∘ (ζ ∘ η).
        let xz = cokleisli_compose(&xi, &zeta, ml, mm, mn)?;
        let ze = cokleisli_compose(&zeta, &eta, mk, ml, mm)?;
        let a = cokleisli_compose(&xz, &eta, mk, ml, mn)?;
        let b = cokleisli_compose(&xi, &ze, mk, mm, mn)?;
        if a != b {
            return Ok(fail("co-Kleisli composition is not associative"));
        }
        if !a.is_homomorphism(&self.omegas[k], mn) {
            return Ok(fail("the composite is not a minion homomorphism"));
        }
        Ok(Outcome::pass(format!("{names}: unit laws and associativity hold")))
    }
}

// -------------------------------------------------------------- snf-oracle

struct SnfOracle;

/// Half-width of the box searched exhaustively over `Z`.
const Z_BOX: i64 = 3;

/// Exhaustive search over `Z_n^v`, or over the box `[-Z_BOX, Z_BOX]^v` for `Z`.
fn brute_force(system: &GroupSystem) -> Option<Vec<BigInt>> {
    let v = system.variables().len();
    let values: Vec<i64> = match system.modulus() {
        Modulus::Cyclic(n) => (0..n as i64).collect(),
        Modulus::Integers => (-Z_BOX..=Z_BOX).collect(),
    };
    let mut idx = vec![0usize; v];
    loop {
        let x: Vec<BigInt> = idx.iter().map(|&i| BigInt::from(values[i])).collect();
        if system.check(&x) {
            return Some(x);
        }
        let mut p = v;
        loop {
            if p == 0 {
                return None;
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] < values.len() {
                break;
            }
            idx[p] = 0;
        }
    }
}

impl Cases for SnfOracle {
    fn case(&self, rng: &mut ChaCha8Rng, index: usize) -> Result<Outcome> {
        let modulus = [Modulus::Cyclic(2), Modulus::Cyclic(3), Modulus::Cyclic(4), Modulus::Integers][index % 4];
        let vars = rng.gen_range(1..=5);
        let rows = rng.gen_range(1..=4);
        let mut system = GroupSystem::new(modulus);
        for i in 0..vars {
            system.add_variable(format!("x{i}"));
        }
        let planted: Option<Vec<i64>> = rng
            .gen_bool(0.5)
            .then(|| (0..vars).map(|_| rng.gen_range(-2..=2)).collect());
        for _ in 0..rows {
            let mut coeffs: Vec<(usize, i64)> = Vec::new();
            for v in 0..vars {
                if rng.gen_bool(0.6) {
                    coeffs.push((v, rng.gen_range(-3..=3)));
                }
            }
            let rhs = match &planted {
                Some(x) => coeffs.iter().map(|(v, c)| c * x[*v]).sum(),
                None => rng.gen_range(-4..=4),
            };
            system.add_row(coeffs.into_iter().map(|(v, c)| (v, BigInt::from(c))).collect(), BigInt::from(rhs))?;
        }
        let snf = solve_group_system(&system);
        let brute = brute_force(&system);
        let label = format!("mod {modulus}, {vars} variables, {rows} rows");
        if let Some(w) = &snf {
            if !system.check(w) {
                return Ok(Outcome::fail(format!("{label}: returned solution is wrong"), system.to_string()));
            }
        }
        // Over Z_n the search is exhaustive; over Z it covers a box, so only
        // "found in the box ⇒ solvable" is checked there.
        let agree = match modulus {
            Modulus::Cyclic(_) => snf.is_some() == brute.is_some(),
            Modulus::Integers => brute.is_none() || snf.is_some(),
        };
        if !agree {
            return Ok(Outcome::fail(
                format!(
                    "{label}: solver says {}, enumeration says {}",
                    feasible(snf.is_some()),
                    feasible(brute.is_some())
                ),
                system.to_string(),
            ));
        }
        Ok(Outcome::pass(format!("{label}: both {}", feasible(snf.is_some()))))
    }
}

// ------------------------------------------------------------------ tensor

struct Tensor {
    projections6: Minion,
    projections4: Minion,
    pol_k2: Minion,
}

impl Cases for Tensor {
    fn case(&self, rng: &mut ChaCha8Rng, index: usize) -> Result<Outcome> {
        let n = rng.gen_range(1..=4);
        let d = density(rng, 0.2, 0.8);
        let x = if rng.gen_bool(0.5) {
            random_graph(rng, n, d)
        } else {
            random_digraph(rng, n, d, 0.1)
        };
        let hom2 = maps_to(&x, &clique(2))?;
        let hom3 = maps_to(&x, &clique(3))?;
        let fail = |what: String| Outcome::fail(what, render(&[("X", &x)]));
        // Level 1 with projections decides the CSP exactly.
        for (name, a, hom) in [("K2", clique(2), hom2), ("K3", clique(3), hom3)] {
            let accepts = tensor_test(&a, &self.projections6, 1, &x)?;
            if accepts != hom {
                return Ok(fail(format!(
                    "{name}, level 1, projections: test {} but X → A is {hom}",
                    verdict(accepts)
                )));
            }
        }
        // Level 2 over K2: completeness, and projections ⇒ Pol(K2).
        let k = 1 + index % 2;
        let proj = tensor_test(&clique(2), &self.projections4, k, &x)?;
        let pol = tensor_test(&clique(2), &self.pol_k2, k, &x)?;
        if hom2 && !(proj && pol) {
            return Ok(fail(format!(
                "K2, level {k}: X → K2 but a test rejects (projections {proj}, Pol(K2) {pol})"
            )));
        }
        if proj && !pol {
            return Ok(fail(format!(
                "K2, level {k}: projections accept but Pol(K2) rejects"
            )));
        }
        Ok(Outcome::pass(format!(
            "|X|={n}: X → K2 {hom2}, X → K3 {hom3}; level {k} over K2: projections {}, Pol(K2) {}",
            verdict(proj),
            verdict(pol)
        )))
    }
}

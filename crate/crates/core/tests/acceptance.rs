//! Acceptance suite: one pass/fail line per criterion.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::random::{Gen, Vocab};
use epskit::calculus::{
    check_proof, deduction, derive_eq2_restricted, embed_proof, is_tautology, parse_proof, proof_stats,
    substitute_proof, Justification, Proof, ProofStats, SystemId, TransformError,
};
use epskit::elimination::{
    eliminate_special, extended_herbrand, first_epsilon_theorem, normalize_identity_axioms, precedes,
    special_rank, StepKind, StepRecord,
};
use epskit::semantics::{
    check_consequence, satisfies, Assignment, CheckOptions, Choice, ConsequenceKind, ExtChoiceFunction,
    IntChoiceOperator, Mode, Structure, Verdict,
};
use epskit::sequents::{
    bounded_cutfree_search, builtin_examples, check_derivation, default_universe, is_cut_free, parse_sequent, SearchLimits, SearchOutcome,
};
use epskit::syntax::{
    epsilon_type, parse_expr, parse_formula, parse_term, substitute, substitute_many, Expr, Formula, Signature, Term,
};
use epskit::translation::epsilon_translate;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn opts(max_domain: usize, mode: Mode) -> CheckOptions {
    CheckOptions { max_domain, mode }
}

fn proof(src: &str) -> Proof {
    let p = parse_proof(src).unwrap_or_else(|e| panic!("{e}\n{src}"));
    check_proof(&p).unwrap_or_else(|e| panic!("{e}\n{src}"));
    p
}

fn ec_eps_eq() -> SystemId {
    "ec-eps=".parse().unwrap()
}

/// Random EC_ε⁼ proofs over `P/1`, `Q/1`, `f/1` that the checker accepts.
fn generated_proofs(n: usize, seed: u64) -> Result<Vec<Proof>, String> {
    let mut g = Gen::new(seed, Vocab::small());
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < n {
        attempts += 1;
        ensure(attempts <= 20 * n, || format!("only {} of {n} generated proofs check", out.len()))?;
        let p = g.proof(ec_eps_eq(), 12);
        if p.lines.len() <= 12 && check_proof(&p).is_ok() {
            out.push(p);
        }
    }
    Ok(out)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let proofs = generated_proofs(200, 1)?;
    let mut lines = 0;
    let mut with_eps = 0;
    for (k, p) in proofs.iter().enumerate() {
        let concl = p.conclusion().unwrap();
        lines += p.lines.len();
        with_eps += usize::from(p.lines.iter().any(|l| l.formula.contains_eps()));
        let v = check_consequence(ConsequenceKind::Local, &p.hyps, concl, opts(3, Mode::Extensional))
            .map_err(|e| format!("proof {k}: {e}"))?;
        ensure(v.holds(), || format!("proof {k} is unsound:\n{p}"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(300), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "200 proofs ({lines} lines, {with_eps} with ε-terms) sound on |M| <= 3 in {:.1}s",
        elapsed.as_secs_f64()
    ))
}

fn criterion_2() -> Outcome {
    let mut g = Gen::new(2, Vocab::small());
    for k in 0..20 {
        let (crit, _) = g.critical();
        let v = check_consequence(ConsequenceKind::GenericValidity, &[], &crit, opts(3, Mode::Extensional))
            .map_err(|e| e.to_string())?;
        ensure(v.holds(), || format!("formula {k} {crit} is not generically valid"))?;
    }
    Ok("20 critical formulas generically valid on |M| <= 3".into())
}

fn criterion_3() -> Outcome {
    let ext = parse_formula("all x (P(x) <-> Q(x)) -> eps x (P(x)) = eps x (Q(x))").unwrap();
    let e = check_consequence(ConsequenceKind::GenericValidity, &[], &ext, opts(3, Mode::Extensional))
        .map_err(|e| e.to_string())?;
    ensure(e.holds(), || "extensionality fails extensionally".into())?;
    let i = check_consequence(ConsequenceKind::GenericValidity, &[], &ext, opts(2, Mode::Intensional))
        .map_err(|e| e.to_string())?;
    let Verdict::Countermodel(c) = i else {
        return Err("no intensional countermodel on |M| <= 2".into());
    };
    ensure(c.structure.size == 2, || format!("countermodel of size {}", c.structure.size))?;
    // The two ε-types must receive different choices on some subset.
    let mut by_subset: BTreeMap<u32, Vec<(Term, usize)>> = BTreeMap::new();
    for (ty, _, subset, v) in &c.choice.entries {
        if let Some(t) = ty {
            by_subset.entry(*subset).or_default().push((t.clone(), *v));
        }
    }
    let split = by_subset
        .values()
        .any(|vs| vs.iter().any(|(t1, v1)| vs.iter().any(|(t2, v2)| t1 != t2 && v1 != v2)));
    ensure(split, || format!("choices do not separate the types:\n{}", c.choice))?;
    let at1 = check_consequence(ConsequenceKind::GenericValidity, &[], &ext, opts(1, Mode::Intensional))
        .map_err(|e| e.to_string())?;
    ensure(at1.holds(), || "unexpected countermodel on |M| = 1".into())?;
    Ok("valid extensionally on |M| <= 3; intensional countermodel on |M| = 2".into())
}

/// `(rk, o)` strictly decreases lexicographically.
fn measure_decreases(before: &ProofStats, after: &ProofStats) -> bool {
    let r = before.rank;
    after.rank < r || (after.rank == r && after.order(r) < before.order(r))
}

fn critical_suite() -> Vec<(&'static str, String)> {
    let e2 = "eps x (P(x, eps y (Q(x, y))))";
    let l1 = format!("P(a, eps y (Q(a, y))) -> P({e2}, eps w (Q({e2}, w)))");
    let l2 = format!("Q({e2}, b) -> Q({e2}, eps z (Q({e2}, z)))");
    let a = |t: &str| format!("((P(a) | P(b)) -> P({t}))");
    let e = "eps x ((P(a) | P(b)) -> P(x))";
    let (aa, ab, ae) = (a("a"), a("b"), a(e));
    vec![
        (
            "worked example",
            "#system ec-eps\n\
             1. (P(a) -> P(a)) -> P(a) -> P(eps x (P(a) -> P(x))) ; crit witness: a\n\
             2. ((P(a) -> P(a)) -> P(a) -> P(eps x (P(a) -> P(x)))) -> P(a) -> P(a) ; taut\n\
             3. P(a) -> P(a) ; mp 2 1\n"
                .to_string(),
        ),
        (
            "two witnesses, one term",
            "#system ec-eps\n\
             1. P(a) -> P(eps x (P(x))) ; crit\n\
             2. P(b) -> P(eps x (P(x))) ; crit\n\
             3. (P(a) -> P(eps x (P(x)))) -> (P(b) -> P(eps x (P(x)))) -> Q(c) | ~Q(c) ; taut\n\
             4. (P(b) -> P(eps x (P(x)))) -> Q(c) | ~Q(c) ; mp 3 1\n\
             5. Q(c) | ~Q(c) ; mp 4 2\n"
                .to_string(),
        ),
        (
            "rank two",
            format!(
                "#system ec-eps\n\
                 1. {l1} ; crit witness: a\n\
                 2. {l2} ; crit witness: b\n\
                 3. ({l1}) -> ({l2}) -> R(c) -> R(c) ; taut\n\
                 4. ({l2}) -> R(c) -> R(c) ; mp 3 1\n\
                 5. R(c) -> R(c) ; mp 4 2\n"
            ),
        ),
        (
            "two ε-terms of rank one",
            "#system ec-eps\n\
             1. P(a) -> P(eps x (P(x))) ; crit\n\
             2. Q(eps x (P(x))) -> Q(eps y (Q(y))) ; crit\n\
             3. (P(a) -> P(eps x (P(x)))) -> (Q(eps x (P(x))) -> Q(eps y (Q(y)))) -> R(c) -> R(c) ; taut\n\
             4. (Q(eps x (P(x))) -> Q(eps y (Q(y)))) -> R(c) -> R(c) ; mp 3 1\n\
             5. R(c) -> R(c) ; mp 4 2\n"
                .to_string(),
        ),
        (
            "Herbrand disjunction with two instances",
            format!(
                "#system ec-eps\n\
                 1. {aa} -> {ae} ; crit witness: a\n\
                 2. {ab} -> {ae} ; crit witness: b\n\
                 3. ({aa} -> {ae}) -> ({ab} -> {ae}) -> {ae} ; taut\n\
                 4. ({ab} -> {ae}) -> {ae} ; mp 3 1\n\
                 5. {ae} ; mp 4 2\n"
            ),
        ),
        (
            "single critical formula",
            "#system ec-eps\n1. P(a) -> P(eps x (P(x))) ; crit\n".to_string(),
        ),
    ]
}

fn check_steps(name: &str, steps: &[StepRecord]) -> Result<(), String> {
    for (i, s) in steps.iter().enumerate() {
        check_proof(&s.result).map_err(|e| format!("{name}: step {i} output does not check: {e}"))?;
        if s.kind == StepKind::Critical {
            ensure(measure_decreases(&s.before, &s.after), || {
                format!("{name}: step {i} does not decrease (rk, o)")
            })?;
            let recomputed = proof_stats(&s.result).map_err(|e| e.to_string())?;
            ensure(recomputed == s.after, || format!("{name}: step {i} reports wrong statistics"))?;
        }
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut max_rank = 0;
    let mut total_steps = 0;
    for (name, src) in critical_suite() {
        let p = proof(&src);
        max_rank = max_rank.max(proof_stats(&p).unwrap().rank);
        let concl = p.conclusion().unwrap().clone();
        if !concl.contains_eps() {
            let el = first_epsilon_theorem(&p, false).map_err(|e| format!("{name}: {e}"))?;
            check_steps(name, &el.steps)?;
            total_steps += el.steps.len();
            check_proof(&el.proof).map_err(|e| format!("{name}: final proof: {e}"))?;
            ensure(el.proof.system == SystemId::EC, || format!("{name}: final system {}", el.proof.system))?;
            ensure(el.proof.conclusion() == Some(&concl), || format!("{name}: conclusion changed"))?;
        }
        let h = extended_herbrand(&p).map_err(|e| format!("{name}: {e}"))?;
        check_steps(name, &h.steps)?;
        check_proof(&h.proof).map_err(|e| format!("{name}: Herbrand proof: {e}"))?;
        ensure(is_tautology(&h.disjunction()) == Ok(true), || {
            format!("{name}: {} is not a tautology", h.disjunction())
        })?;
        for (d, w) in h.disjuncts.iter().zip(&h.witnesses) {
            let pairs: Vec<_> = h.pattern_vars.iter().cloned().zip(w.iter().cloned()).collect();
            ensure(substitute_many(&h.skeleton, &pairs) == *d, || {
                format!("{name}: disjunct {d} is not its skeleton instance")
            })?;
        }
    }
    let elapsed = start.elapsed();
    ensure(max_rank == 2, || format!("suite reaches rank {max_rank}"))?;
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} proofs up to rank 2, {total_steps} steps, all measures decrease, {:.2}s",
        critical_suite().len(),
        elapsed.as_secs_f64()
    ))
}

/// Number of non-trivial (=_ε) lines in which `e` is a side.
fn eq_eps_counts(p: &Proof) -> BTreeMap<Term, usize> {
    let mut counts = BTreeMap::new();
    for l in &p.lines {
        if l.just != Justification::EqEps {
            continue;
        }
        if let Formula::Implies(_, rhs) = &l.formula {
            if let Formula::Eq(x, y) = &**rhs {
                if x != y {
                    *counts.entry(x.clone()).or_insert(0) += 1;
                    *counts.entry(y.clone()).or_insert(0) += 1;
                }
            }
        }
    }
    counts
}

/// The eliminated term loses lines, and no term of its type that is not
/// below it in `≺` gains any.
fn special_descent(before: &Proof, after: &Proof, e: &Term) -> Result<(), String> {
    let (b, a) = (eq_eps_counts(before), eq_eps_counts(after));
    let count = |m: &BTreeMap<Term, usize>, t: &Term| m.get(t).copied().unwrap_or(0);
    ensure(count(&a, e) < count(&b, e), || format!("{e} keeps {} line(s)", count(&a, e)))?;
    let ty = epsilon_type(e).0;
    for t in a.keys() {
        if t != e && epsilon_type(t).0 == ty && !precedes(t, e) {
            ensure(count(&a, t) <= count(&b, t), || format!("{t} gains (=_ε) lines when {e} is removed"))?;
        }
    }
    Ok(())
}

fn identity_suite() -> Vec<(&'static str, Vec<(&'static str, &'static str)>)> {
    vec![
        ("single (=_ε)", vec![("a = b -> eps x (Q(x, a)) = eps x (Q(x, b))", "eqeps")]),
        (
            "(=_ε) with a critical formula",
            vec![
                ("a = b -> eps x (Q(x, a)) = eps x (Q(x, b))", "eqeps"),
                ("Q(c, b) -> Q(eps x (Q(x, b)), b)", "crit"),
            ],
        ),
        (
            "chained (=_ε)",
            vec![
                ("b = a -> eps x (Q(x, b)) = eps x (Q(x, a))", "eqeps"),
                ("c = b -> eps x (Q(x, c)) = eps x (Q(x, b))", "eqeps"),
                ("P(d) -> P(eps y (P(y)))", "crit"),
            ],
        ),
        (
            "(=₂) through an ε-term",
            vec![
                ("a = b -> P(eps x (Q(x, a))) -> P(eps x (Q(x, b)))", "eq2"),
                ("Q(c, a) -> Q(eps x (Q(x, a)), a)", "crit"),
            ],
        ),
        (
            "atomic (=₂) with (=_ε)",
            vec![
                ("a = b -> P(a) -> P(b)", "eq2"),
                ("a = b -> eps x (Q(x, a)) = eps x (Q(x, b))", "eqeps"),
                ("a = a", "eq1"),
            ],
        ),
    ]
}

/// `l1 ... ln` followed by a tautology that discards them, concluding
/// `R(c) -> R(c)`.
fn discarding_proof(lines: &[(&str, &str)]) -> Proof {
    let mut src = "#system ec-eps=\n".to_string();
    for (i, (l, j)) in lines.iter().enumerate() {
        src.push_str(&format!("{}. {l} ; {j}\n", i + 1));
    }
    let n = lines.len();
    let chain: String = lines.iter().map(|(l, _)| format!("({l}) -> ")).collect();
    src.push_str(&format!("{}. {chain}R(c) -> R(c) ; taut\n", n + 1));
    let mut last = n + 1;
    for i in 0..n {
        let rest: String = lines[i + 1..].iter().map(|(l, _)| format!("({l}) -> ")).collect();
        src.push_str(&format!("{}. {rest}R(c) -> R(c) ; mp {last} {}\n", last + 1, i + 1));
        last += 1;
    }
    proof(&src)
}

fn criterion_5() -> Outcome {
    let mut special_steps = 0;
    let mut uses_eq2 = false;
    let mut uses_eq_eps = false;
    for (name, lines) in identity_suite() {
        let p = discarding_proof(&lines);
        uses_eq2 |= p.lines.iter().any(|l| l.just == Justification::Eq2);
        uses_eq_eps |= p.lines.iter().any(|l| l.just == Justification::EqEps);
        let n = normalize_identity_axioms(&p).map_err(|e| format!("{name}: {e}"))?;
        check_proof(&n).map_err(|e| format!("{name}: normalized proof: {e}"))?;
        ensure(n.lines.iter().all(|l| l.just != Justification::Eq2), || format!("{name}: (=₂) left"))?;
        if special_rank(&n) > 0 {
            let s = eliminate_special(&n).map_err(|e| format!("{name}: {e}"))?;
            check_proof(&s).map_err(|e| format!("{name}: after one special step: {e}"))?;
        }
        let el = first_epsilon_theorem(&p, true).map_err(|e| format!("{name}: {e}"))?;
        check_steps(name, &el.steps)?;
        let mut prev = n.clone();
        for s in &el.steps {
            if s.kind == StepKind::Special {
                special_descent(&prev, &s.result, &s.term).map_err(|e| format!("{name}: {e}"))?;
                special_steps += 1;
            }
            prev = s.result.clone();
        }
        check_proof(&el.proof).map_err(|e| format!("{name}: final proof: {e}"))?;
        ensure(el.proof.system.identity && !el.proof.system.epsilon, || {
            format!("{name}: final system {}", el.proof.system)
        })?;
        ensure(el.proof.conclusion() == p.conclusion(), || format!("{name}: conclusion changed"))?;
    }
    ensure(uses_eq2 && uses_eq_eps, || "suite misses (=₂) or (=_ε)".into())?;
    ensure(special_steps > 0, || "no special steps were taken".into())?;
    Ok(format!(
        "{} proofs, {special_steps} special steps with ≺-descent, EC⁼ proofs re-check",
        identity_suite().len()
    ))
}

fn criterion_6() -> Outcome {
    let examples = builtin_examples();
    for name in ["leisenring-crit", "maehara-converse", "mints-yasuhara-crit"] {
        let ex = examples.iter().find(|e| e.name == name).ok_or(format!("missing {name}"))?;
        let d = ex.derivation().ok_or(format!("{name} has no derivation"))?;
        check_derivation(&d, ex.system).map_err(|e| format!("{name}: {e}"))?;
    }
    let leis = examples.iter().find(|e| e.name == "leisenring-crit").unwrap();
    ensure(!is_cut_free(&leis.derivation().unwrap()), || "leisenring-crit should use cut".into())?;
    for (sys, src) in [("leisenring", "|- ~P(t), P(eps x (P(x)))"), ("maehara", "|- ~P(eps x (~P(x))), P(t)")] {
        let s = parse_sequent(src).unwrap();
        let out = bounded_cutfree_search(&s, sys.parse().unwrap(), 8, &default_universe(&s), SearchLimits::default());
        ensure(matches!(out, SearchOutcome::Exhausted { depth: 8, .. }), || {
            format!("{sys}: search on {s} gave {out:?}")
        })?;
    }
    Ok("three derivations check; cut-free search exhausted at depth 8 for both sequents".into())
}

fn criterion_7() -> Outcome {
    let ex = builtin_examples()
        .into_iter()
        .find(|e| e.name == "wessels-lemma-countermodel")
        .ok_or("missing example")?;
    let d = ex.derivation().ok_or("no derivation")?;
    check_derivation(&d, ex.system).map_err(|e| e.to_string())?;
    let s1 = parse_sequent("|- ~Q(eps x (P(x, w))), Q(eps x (P(x, eps y (Q(eps u (P(u, y)))))))").unwrap();
    ensure(d.sequent == s1, || format!("derivation concludes {}", d.sequent))?;

    let s2 = parse_sequent("|- ~Q(eps x (P(x, w))), Q(z), ~P(z, eps y (Q(eps u (P(u, y)))))").unwrap();
    let f2 = s2.as_formula();
    let sig = Signature::of_formulas([&f2]).map_err(|e| e.to_string())?;
    let mut m = Structure::new(&sig, 2).map_err(|e| e.to_string())?;
    m.set_predicate("Q", &[&[0]]).map_err(|e| e.to_string())?;
    m.set_predicate("P", &[&[0, 1], &[1, 1]]).map_err(|e| e.to_string())?;
    let s = Assignment::new([("z", 1), ("w", 1)]);
    // εx P(x, 2) = 1 and εu P(u, 2) = 1 by least choice; εy Q(εu P(u, y))
    // picks 2 from {1, 2}.
    let mut psi = IntChoiceOperator::constant(ExtChoiceFunction::least(2));
    let outer = parse_term("eps y (Q(eps u (P(u, y))))").unwrap();
    let (ty, params) = epsilon_type(&outer);
    ensure(params.is_empty(), || "outer ε-term has parameters".into())?;
    psi.insert(ty, vec![], ExtChoiceFunction::new(2, vec![0, 0, 1, 1]).unwrap())
        .map_err(|e| e.to_string())?;
    for (lit, want) in [
        ("~Q(eps x (P(x, w)))", false),
        ("Q(z)", false),
        ("~P(z, eps y (Q(eps u (P(u, y)))))", false),
    ] {
        let f = parse_formula(lit).unwrap();
        let got = satisfies(&m, Choice::Int(&psi), &s, &f).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("{lit} evaluates to {got}"))?;
    }
    ensure(!satisfies(&m, Choice::Int(&psi), &s, &f2).map_err(|e| e.to_string())?, || {
        "S2 holds in the reference model".into()
    })?;

    let valid = |f: &Formula| {
        check_consequence(ConsequenceKind::GenericValidity, &[], f, opts(2, Mode::Intensional)).map(|v| v.holds())
    };
    ensure(valid(&s1.as_formula()).map_err(|e| e.to_string())?, || "S1 is not valid".into())?;
    ensure(!valid(&f2).map_err(|e| e.to_string())?, || "S2 is valid".into())?;
    Ok("S1 derivable and valid; S2 false in the reference model and not valid".into())
}

fn criterion_8() -> Outcome {
    let plato = parse_formula("ex x (ex y (P(y)) -> P(x))").unwrap();
    let t = epsilon_translate(&plato);
    ensure(!t.contains_quantifier(), || format!("{t} still has quantifiers"))?;
    let v = check_consequence(ConsequenceKind::GenericValidity, &[], &t, opts(3, Mode::Extensional))
        .map_err(|e| e.to_string())?;
    ensure(v.holds(), || format!("{t} is not generically valid"))?;
    Ok(format!("{t} generically valid on |M| <= 3"))
}

fn round_trip(e: &Expr) -> Result<(), String> {
    let printed = e.to_string();
    let back = parse_expr(&printed).map_err(|err| format!("{printed}: {err}"))?;
    ensure(&back == e, || format!("{printed} reparses to {back}"))?;
    ensure(back.to_string() == printed, || format!("{printed} prints as {back}"))?;
    Ok(())
}

fn transformation_checks() -> Result<usize, String> {
    let mut checked = 0;
    let mut recheck = |what: &str, r: Result<Proof, TransformError>| -> Result<(), String> {
        match r {
            Ok(q) => {
                check_proof(&q).map_err(|e| format!("{what} output: {e}"))?;
                checked += 1;
                Ok(())
            }
            Err(TransformError::Precondition(_)) => Ok(()),
            Err(e) => Err(format!("{what}: {e}")),
        }
    };
    let mut g = Gen::new(9, Vocab::small());
    for p in generated_proofs(60, 3)? {
        if let Some(h) = p.hyps.first() {
            recheck("deduction", deduction(&p, h))?;
        }
        let t = g.term(1, &[]);
        recheck("substitute_proof", substitute_proof(&p, "x", &t))?;
    }
    let embeds = [
        "#system ec-q\n1. P(y) -> ex x (P(x)) ; ax-ex\n2. ex y (P(y)) -> ex x (P(x)) ; r-ex 1\n3. all x (P(x)) -> P(a) ; ax-all\n",
        "#system ec-q\n1. Q(a) -> Q(a) | P(y) ; taut\n2. Q(a) -> all y (Q(a) | P(y)) ; r-all 1\n",
        "#system ec-q\n1. P(y) & Q(a) -> ex x (P(x) & Q(a)) ; ax-ex\n2. all x (P(x) & Q(a)) -> P(b) & Q(a) ; ax-all\n",
        "#system ec-q=\n1. a = b -> ex x (P(x, a)) -> ex x (P(x, b)) ; eq2\n2. P(c, a) -> ex x (P(x, a)) ; ax-ex\n",
    ];
    for src in embeds {
        recheck("embed_proof", embed_proof(&proof(src)))?;
    }
    let mut gq = Gen::new(11, Vocab::small());
    for _ in 0..40 {
        let a = gq.formula_with("w", 2);
        let (t, u) = (gq.term(1, &[]), gq.term(1, &[]));
        let inst = Formula::implies(
            Formula::eq(t.clone(), u.clone()),
            Formula::implies(substitute(&a, "w", &t), substitute(&a, "w", &u)),
        );
        recheck("derive_eq2_restricted", derive_eq2_restricted(&inst))?;
    }
    for (name, src) in critical_suite() {
        let h = extended_herbrand(&proof(&src)).map_err(|e| format!("{name}: {e}"))?;
        for s in h.steps.iter().flat_map(|s| std::iter::once(&s.result).chain(&s.branches)) {
            check_proof(s).map_err(|e| format!("{name}: elimination step: {e}"))?;
            checked += 1;
        }
    }
    for (name, lines) in identity_suite() {
        let el = first_epsilon_theorem(&discarding_proof(&lines), true).map_err(|e| format!("{name}: {e}"))?;
        for s in &el.steps {
            check_proof(&s.result).map_err(|e| format!("{name}: elimination step: {e}"))?;
            checked += 1;
        }
    }
    Ok(checked)
}

fn criterion_9() -> Outcome {
    let mut g = Gen::new(5, Vocab::rich());
    for k in 0..500 {
        let e: Expr = if k % 3 == 0 {
            Expr::Term(g.term(3, &[]))
        } else {
            Expr::Formula(g.formula(3, &[]))
        };
        round_trip(&e).map_err(|err| format!("expression {k}: {err}"))?;
    }
    let checked = transformation_checks()?;
    Ok(format!("500 expressions round-trip; {checked} transformation outputs re-check"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("soundness of generated EC_ε⁼ proofs", criterion_1),
        ("critical formulas generically valid", criterion_2),
        ("extensionality separates the semantics", criterion_3),
        ("first ε-theorem", criterion_4),
        ("identity case", criterion_5),
        ("sequent demos and bounded search", criterion_6),
        ("ε0 lemma countermodel", criterion_7),
        ("Plato's principle", criterion_8),
        ("round trips and re-checked transformations", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail}) [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criterion/criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}

use super::*;
use crate::calculus::{is_tautology, parse_proof, proof_stats};
use crate::syntax::{parse_formula, parse_term};

fn f(s: &str) -> Formula {
    parse_formula(s).unwrap()
}

fn proof(src: &str) -> Proof {
    let p = parse_proof(src).unwrap();
    check_proof(&p).unwrap();
    p
}

const SIMPLE: &str = "#system ec-eps\n\
    1. (P(a) -> P(a)) -> P(a) -> P(eps x (P(a) -> P(x))) ; crit witness: a\n\
    2. ((P(a) -> P(a)) -> P(a) -> P(eps x (P(a) -> P(x)))) -> P(a) -> P(a) ; taut\n\
    3. P(a) -> P(a) ; mp 2 1\n";

#[test]
fn worked_example_single_step() {
    let p = proof(SIMPLE);
    let out = eliminate_step(&p).unwrap();
    check_proof(&out).unwrap();
    assert_eq!(out.conclusion(), Some(&f("P(a) -> P(a)")));
    assert_eq!(proof_stats(&out).unwrap().rank, 0);
    let full = first_epsilon_theorem(&p, false).unwrap();
    assert!(!full.proof.system.epsilon);
    assert_eq!(full.disjuncts, vec![f("P(a) -> P(a)")]);
    assert_eq!(full.steps.len(), 1);
}

#[test]
fn nothing_to_eliminate() {
    let p = proof("#system ec-eps\n1. P(a) -> P(a) ; taut\n");
    assert_eq!(eliminate_step(&p), Err(EliminationError::NothingToEliminate));
    let out = first_epsilon_theorem(&p, false).unwrap();
    assert_eq!(out.proof.lines, p.lines);
    assert!(out.steps.is_empty());
}

#[test]
fn two_critical_formulas_same_term() {
    let p = proof(
        "#system ec-eps\n\
         1. P(a) -> P(eps x (P(x))) ; crit\n\
         2. P(b) -> P(eps x (P(x))) ; crit\n\
         3. (P(a) -> P(eps x (P(x)))) -> (P(b) -> P(eps x (P(x)))) -> Q(c) | ~Q(c) ; taut\n\
         4. (P(b) -> P(eps x (P(x)))) -> Q(c) | ~Q(c) ; mp 3 1\n\
         5. Q(c) | ~Q(c) ; mp 4 2\n",
    );
    let out = first_epsilon_theorem(&p, false).unwrap();
    let s = &out.steps[0];
    assert_eq!(s.before.order(1), 1);
    assert_eq!(s.after.order(1), 0);
    assert_eq!(s.witnesses, vec![Term::constant("a"), Term::constant("b")]);
    assert_eq!(s.branches.len(), 3);
}

#[test]
fn rank_two_has_two_phases() {
    let e2 = "eps x (P(x, eps y (Q(x, y))))";
    let l1 = format!("P(a, eps y (Q(a, y))) -> P({e2}, eps w (Q({e2}, w)))");
    let l2 = format!("Q({e2}, b) -> Q({e2}, eps z (Q({e2}, z)))");
    let src = format!(
        "#system ec-eps\n\
         1. {l1} ; crit witness: a\n\
         2. {l2} ; crit witness: b\n\
         3. ({l1}) -> ({l2}) -> R(c) -> R(c) ; taut\n\
         4. ({l2}) -> R(c) -> R(c) ; mp 3 1\n\
         5. R(c) -> R(c) ; mp 4 2\n"
    );
    let p = proof(&src);
    assert_eq!(proof_stats(&p).unwrap().rank, 2);
    let out = first_epsilon_theorem(&p, false).unwrap();
    let ranks: Vec<usize> = out.steps.iter().map(|s| s.before.rank).collect();
    assert_eq!(ranks.first(), Some(&2));
    assert_eq!(ranks.last(), Some(&1));
    for w in ranks.windows(2) {
        assert!(w[0] >= w[1]);
    }
    for s in &out.steps {
        let r = s.before.rank;
        assert!(s.after.rank < r || s.after.order(r) < s.before.order(r));
    }
    check_proof(&out.proof).unwrap();
}

#[test]
fn herbrand_single_witness() {
    let p = proof("#system ec-eps\n1. P(a) -> P(eps x (P(x))) ; crit\n");
    let h = extended_herbrand(&p).unwrap();
    assert_eq!(h.disjuncts, vec![f("P(a) -> P(a)")]);
    assert_eq!(h.witnesses, vec![vec![Term::constant("a")]]);
    assert_eq!(h.count(), 1);
    assert_eq!(is_tautology(&h.disjunction()), Ok(true));
    assert_eq!(h.proof.conclusion(), Some(&h.disjunction()));
}

#[test]
fn herbrand_epsilon_free_conclusion() {
    let p = proof("#system ec-eps\n1. P(a) -> P(a) ; taut\n");
    let h = extended_herbrand(&p).unwrap();
    assert_eq!(h.disjuncts, vec![f("P(a) -> P(a)")]);
    assert_eq!(h.witnesses, vec![Vec::<Term>::new()]);
}

#[test]
fn herbrand_two_witnesses() {
    let a = |t: &str| format!("((P(a) | P(b)) -> P({t}))");
    let e = "eps x ((P(a) | P(b)) -> P(x))";
    let (aa, ab, ae) = (a("a"), a("b"), a(e));
    let src = format!(
        "#system ec-eps\n\
         1. {aa} -> {ae} ; crit witness: a\n\
         2. {ab} -> {ae} ; crit witness: b\n\
         3. ({aa} -> {ae}) -> ({ab} -> {ae}) -> {ae} ; taut\n\
         4. ({ab} -> {ae}) -> {ae} ; mp 3 1\n\
         5. {ae} ; mp 4 2\n"
    );
    let h = extended_herbrand(&proof(&src)).unwrap();
    assert_eq!(h.count(), 2);
    assert!(h.disjuncts.contains(&f(&aa)) && h.disjuncts.contains(&f(&ab)));
    for (d, w) in h.disjuncts.iter().zip(&h.witnesses) {
        assert_eq!(match_pattern(&h.skeleton, &h.pattern_vars, d).as_ref(), Some(w));
    }
    assert_eq!(is_tautology(&h.disjunction()), Ok(true));
}

#[test]
fn conclusion_with_epsilon_rejected_by_theorem() {
    let p = proof("#system ec-eps\n1. P(a) -> P(eps x (P(x))) ; crit\n");
    assert!(matches!(
        first_epsilon_theorem(&p, false),
        Err(EliminationError::ConclusionMismatch(_))
    ));
}

#[test]
fn normalize_leaves_restricted_proofs() {
    let p = proof("#system ec-eps=\n1. a = b -> P(a) -> P(b) ; eq2p\n");
    assert_eq!(normalize_identity_axioms(&p).unwrap(), p);
}

#[test]
fn normalize_atomic_eq2() {
    let p = proof("#system ec-eps=\n1. a = b -> P(a) -> P(b) ; eq2\n");
    let n = normalize_identity_axioms(&p).unwrap();
    assert!(n.system.restricted_identity);
    assert_eq!(n.lines.len(), 1);
    assert_eq!(n.lines[0].just, Justification::Eq2P);
}

#[test]
fn normalize_through_epsilon() {
    let p = proof("#system ec-eps=\n1. a = b -> P(eps x (Q(x, a))) -> P(eps x (Q(x, b))) ; eq2\n");
    let n = normalize_identity_axioms(&p).unwrap();
    assert!(n.lines.iter().any(|l| l.just == Justification::EqEps));
    assert_eq!(n.conclusion(), p.conclusion());
}

fn with_taut_conclusion(system: &str, lines: &[(&str, &str)]) -> Proof {
    let mut src = format!("#system {system}\n");
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

#[test]
fn special_single_instance() {
    let p = with_taut_conclusion(
        "ec-eps=",
        &[("a = b -> eps x (Q(x, a)) = eps x (Q(x, b))", "eqeps")],
    );
    assert_eq!(special_rank(&p), 1);
    let out = eliminate_special(&p).unwrap();
    check_proof(&out).unwrap();
    assert!(special_terms(&out).is_empty());
    let full = first_epsilon_theorem(&p, true).unwrap();
    assert!(full.proof.system.identity && !full.proof.system.epsilon);
    assert_eq!(full.proof.conclusion(), Some(&f("R(c) -> R(c)")));
}

#[test]
fn special_repairs_critical_formula() {
    let p = with_taut_conclusion(
        "ec-eps=",
        &[
            ("a = b -> eps x (Q(x, a)) = eps x (Q(x, b))", "eqeps"),
            ("Q(c, b) -> Q(eps x (Q(x, b)), b)", "crit"),
        ],
    );
    let out = eliminate_special(&p).unwrap();
    let report = check_proof(&out).unwrap();
    assert!(report
        .critical()
        .iter()
        .any(|c| c.term == parse_term("eps x (Q(x, a))").unwrap()));
    let full = first_epsilon_theorem(&p, true).unwrap();
    check_proof(&full.proof).unwrap();
    assert!(full.steps.iter().any(|s| s.kind == StepKind::Special));
}

#[test]
fn special_flipped_and_chained() {
    let p = with_taut_conclusion(
        "ec-eps=",
        &[
            ("b = a -> eps x (Q(x, b)) = eps x (Q(x, a))", "eqeps"),
            ("c = b -> eps x (Q(x, c)) = eps x (Q(x, b))", "eqeps"),
            ("P(d) -> P(eps y (P(y)))", "crit"),
        ],
    );
    let full = first_epsilon_theorem(&p, true).unwrap();
    check_proof(&full.proof).unwrap();
    assert_eq!(full.proof.conclusion(), Some(&f("R(c) -> R(c)")));
}

#[test]
fn eq2_through_epsilon_full_pipeline() {
    let p = with_taut_conclusion(
        "ec-eps=",
        &[
            ("a = b -> P(eps x (Q(x, a))) -> P(eps x (Q(x, b)))", "eq2"),
            ("Q(c, a) -> Q(eps x (Q(x, a)), a)", "crit"),
        ],
    );
    let full = first_epsilon_theorem(&p, true).unwrap();
    check_proof(&full.proof).unwrap();
    assert!(!full.proof.system.restricted_identity);
}

#[test]
fn lower_rank_special_untouched_by_critical_step() {
    let e2 = "eps x (P(x, eps y (Q(x, y))))";
    let p = with_taut_conclusion(
        "ec-eps=",
        &[
            ("a = b -> eps z (S(z, a)) = eps z (S(z, b))", "eqeps"),
            (&format!("P(a, eps y (Q(a, y))) -> P({e2}, eps w (Q({e2}, w)))"), "crit"),
        ],
    );
    let out = eliminate_step(&p).unwrap();
    assert!(out
        .lines
        .iter()
        .any(|l| l.formula == f("a = b -> eps z (S(z, a)) = eps z (S(z, b))") && l.just == Justification::EqEps));
}

#[test]
fn identity_flag_required() {
    let p = with_taut_conclusion("ec-eps=", &[("a = a", "eq1")]);
    assert!(matches!(first_epsilon_theorem(&p, false), Err(EliminationError::Unsupported(_))));
    assert!(first_epsilon_theorem(&p, true).is_ok());
}

#[test]
fn quantifier_proofs_rejected() {
    let p = proof("#system ec-q\n1. P(a) -> ex x (P(x)) ; ax-ex\n2. Q(a) -> Q(a) ; taut\n");
    assert!(matches!(first_epsilon_theorem(&p, false), Err(EliminationError::Unsupported(_))));
}

#[test]
fn trace_is_readable() {
    let out = first_epsilon_theorem(&proof(SIMPLE), false).unwrap();
    let t = out.trace();
    assert!(t.starts_with("critical eps x (P(a) -> P(x))"), "{t}");
    assert!(t.contains("rk 1 -> 0"));
}

use epskit::sequents::{
    bounded_cutfree_search, check_derivation, default_universe, example_names, parse_derivation, parse_sequent,
    run_example, SearchLimits, SearchOutcome, SequentSystem,
};

#[test]
fn every_builtin_example_passes() {
    for name in example_names() {
        let report = run_example(name).unwrap();
        assert!(report.ok(), "{name}: {:?}", report.checks);
    }
    assert!(run_example("nope").is_none());
}

#[test]
fn found_derivations_print_and_recheck() {
    for (sys, src) in [
        (SequentSystem::Maehara, "|- ~P(t), P(eps x (P(x)))"),
        (SequentSystem::Wessels, "|- ~P(t), P(eps x (P(x)))"),
        (SequentSystem::MintsYasuhara, "|- ~P(t), P(eps x (P(x)))"),
        (SequentSystem::Leisenring, "|- ~P(t), ex x (P(x))"),
    ] {
        let s = parse_sequent(src).unwrap();
        let out = bounded_cutfree_search(&s, sys, 4, &default_universe(&s), SearchLimits::default());
        let SearchOutcome::Found(d) = out else { panic!("{sys:?}: {out:?}") };
        let reparsed = parse_derivation(&d.to_string()).unwrap();
        assert_eq!(reparsed, d);
        check_derivation(&reparsed, sys).unwrap();
    }
}

#[test]
fn leisenring_has_no_cut_free_critical_formula() {
    let s = parse_sequent("|- ~P(t), P(eps x (P(x)))").unwrap();
    let out = bounded_cutfree_search(&s, SequentSystem::Leisenring, 8, &default_universe(&s), SearchLimits::default());
    assert!(matches!(out, SearchOutcome::Exhausted { depth: 8, .. }), "{out:?}");
}

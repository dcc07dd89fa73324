use proptest::prelude::*;

use super::*;

fn parse(s: &str) -> PairExpression {
    parse_expression(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn c(e: &str) -> Complexity {
    complexity(&parse(e))
}

#[test]
fn sum0_examples() {
    let k = parse("Prime(K, 3)");
    let k2 = parse("Prime(K', 2)");
    assert_eq!(complexity(&sum0(&k, &k2)), Complexity::exact(5));
    assert_eq!(complexity(&sum0(&k, &parse("Trivial0"))), Complexity::exact(3));
    assert_eq!(complexity(&sum0(&parse("Handle"), &parse("Handle"))), Complexity::ZERO);
}

#[test]
fn sum2_cases() {
    let trefoil = parse("Prime(trefoil, 3)");
    let d = parse("D");
    let r = sum2(&trefoil, 0, &d, 0).unwrap();
    assert_eq!(r.atoms, vec![Atom::d()]);

    let r = sum2(&d, 0, &d, 0).unwrap();
    assert_eq!(r.atoms, vec![Atom::opaque("D#2D", Complexity::ZERO, 1)]);

    let r = sum2(&parse("Prime(K, 2)"), 0, &parse("Prime(K', 3)"), 0).unwrap();
    assert_eq!(r.atoms.len(), 1);
    assert!(matches!(&r.atoms[0].kind, AtomKind::Prime { label, .. } if label == "K#2K'"));
    assert_eq!(complexity(&r), Complexity::exact(5));

    // mixed: a two-component link in S3 against D keeps only the upper bound
    let hopf = parse("Prime(hopf, 2, comps=2)");
    let r = sum2(&hopf, 0, &d, 0).unwrap();
    assert_eq!(complexity(&r), Complexity { lower: 0, upper: Some(2) });
    assert_eq!(r.atoms[0].components, 2);

    assert_eq!(sum2(&parse("Handle"), 0, &d, 0), Err(RootError::EmptyLink("Handle".into())));
    assert_eq!(sum2(&d, 3, &d, 0), Err(RootError::Target { index: 3, len: 1 }));
    let r = sum2(&parse("Trivial2"), 0, &trefoil, 0).unwrap();
    assert!(r.same_atoms(&trefoil));
}

#[test]
fn sum2_targets_one_sphere_free_atoms_even_next_to_d() {
    let left = parse("Prime(A, 2) + D");
    let right = parse("Prime(B, 4)");
    let r = sum2(&left, 0, &right, 0).unwrap();
    assert_eq!(complexity(&r), Complexity::exact(6));
    assert!(r.contains_d());
}

#[test]
fn normalize_examples() {
    let n = normalize(&parse("Xn(5)"));
    assert_eq!(n.atoms.len(), 1);
    assert!(matches!(&n.atoms[0].kind, AtomKind::Prime { label, .. } if label == "T(2,5)"));
    let n = normalize(&parse("Trivial2 + Prime(K, 4)"));
    assert!(n.same_atoms(&parse("Prime(K, 4)")));
    assert!(normalize(&PairExpression::empty()).is_empty());
    let n = normalize(&parse("Xn(1)"));
    assert!(n.is_empty());
    assert!(n.log.iter().any(|l| l.contains("degenerate")));
    let n = normalize(&parse("T(5,3) + Handle + S3 + S3core + P3core"));
    assert!(n.same_atoms(&parse("T(3,5) + P3core")));
}

#[test]
fn complexity_examples() {
    assert_eq!(c("Prime(a, 2) + Prime(b, 3) + D"), Complexity::exact(5));
    assert_eq!(c(""), Complexity::ZERO);
    assert_eq!(c("Xn(4)"), torus_pair_complexity(2, 4));
    assert_eq!(c("Xn(5)"), Complexity { lower: 1, upper: Some(5) });
    assert_eq!(c("Prime(x, c=?) + Prime(y, 2)"), Complexity { lower: 2, upper: None });
}

#[test]
fn extract_d_examples() {
    let (y, k) = extract_d_factors(&parse("Prime(K, 3) + D + D"));
    assert!(y.same_atoms(&parse("Prime(K, 3)")));
    assert_eq!(k, 2);
    let (y, k) = extract_d_factors(&parse("D"));
    assert!(y.is_empty());
    assert_eq!(k, 1);
    let (_, k) = extract_d_factors(&parse("Prime(K, 3)"));
    assert_eq!(k, 0);
}

#[test]
fn xn_fact_records() {
    let f4 = xn_facts(4).unwrap();
    assert!(f4.zero_one_irreducible && f4.separating_spheres_trivial);
    assert!(!f4.has_essential_separating_2sphere);
    assert_eq!(f4.root_components, 2);
    let f5 = xn_facts(5).unwrap();
    assert!(f5.has_essential_separating_2sphere && f5.link_is_knot);
    assert_eq!(f5.root_components, 1);
    assert!(xn_distinct(1, 2).unwrap());
    assert!(xn_facts(0).is_err());
}

#[test]
fn xn_roots_and_distinctness_up_to_50() {
    let facts: Vec<XnFacts> = (1..=50u64).map(|n| xn_facts(n).unwrap()).collect();
    for f in &facts[1..] {
        assert_eq!(f.root_components, if f.n % 2 == 0 { 2 } else { 1 }, "n = {}", f.n);
    }
    for (i, f) in facts.iter().enumerate() {
        for g in &facts[..i] {
            assert_ne!(f.root_invariants, g.root_invariants, "X{} vs X{}", f.n, g.n);
        }
    }
}

#[test]
fn parser_examples() {
    let e = parse("Prime(\"trefoil\", c=?) + 2*D + Xn(5) + Handle");
    assert_eq!(e.atoms.len(), 5);
    assert_eq!(normalize(&parse("Prime(trefoil,3) #2 D")).atoms, vec![Atom::d()]);
    assert!(parse("").is_empty());
    let e = parse("(Prime(A,1) + Prime(B,2)) #2[1,0] Prime(C,3)");
    assert_eq!(e.atoms.len(), 2);
    assert!(e.log.iter().any(|l| l.starts_with("#2[1,0]")));
    assert!(parse_expression("Prime(").is_err());
    assert!(parse_expression("Bogus").is_err());
    assert!(parse_expression("D D").is_err());
    assert!(parse_expression("Handle #2 Handle").is_err());
    assert!(parse_expression("Prime(x, c=[3,1])").is_err());
    assert!(parse_expression("Xn(0)").is_err());
}

#[test]
fn text_round_trip_examples() {
    for s in [
        "",
        "D",
        "2*D + Prime(\"K\", c=[1,?], comps=2, ambient=other)",
        "Opaque(\"D#2D\", c=0) + T(3,4) + L31core",
        "Prime(\"a \\\"quoted\\\" label\", c=?)",
    ] {
        let e = parse(s);
        assert_eq!(e.to_string(), s);
        assert_eq!(parse(&e.to_string()).atoms, e.atoms);
    }
}

fn complexity_strategy() -> impl Strategy<Value = Complexity> {
    prop_oneof![
        (0u64..20).prop_map(Complexity::exact),
        (0u64..20, 0u64..10).prop_map(|(l, w)| Complexity { lower: l, upper: Some(l + w) }),
        (0u64..5).prop_map(|l| Complexity { lower: l, upper: None }),
    ]
}

fn atom_strategy() -> impl Strategy<Value = Atom> {
    let labels = prop::sample::select(vec!["K", "trefoil", "fig8", "L#2M", "x\"y"]);
    prop_oneof![
        (labels.clone(), complexity_strategy(), 1usize..4, any::<bool>()).prop_map(|(l, c, k, s3)| Atom {
            kind: AtomKind::Prime {
                label: l.into(),
                complexity: c,
                ambient: if s3 { Ambient::S3 } else { Ambient::Other },
            },
            components: k,
        }),
        (labels, complexity_strategy(), 0usize..3).prop_map(|(l, c, k)| Atom::opaque(l, c, k)),
        Just(Atom::trivial0()),
        Just(Atom::trivial2()),
        Just(Atom::d()),
        Just(Atom::handle()),
        prop::sample::select(Exceptional::ALL.to_vec()).prop_map(Atom::exceptional),
        (1u64..14).prop_map(|n| Atom::xn(n).unwrap()),
        (1u64..6, 1u64..9).prop_map(|(m, q)| Atom::torus(m, q).unwrap()),
    ]
}

fn expression_strategy() -> impl Strategy<Value = PairExpression> {
    prop::collection::vec(atom_strategy(), 0..8).prop_map(PairExpression::new)
}

fn knot_atom_strategy() -> impl Strategy<Value = Atom> {
    prop_oneof![
        (complexity_strategy()).prop_map(|c| Atom::prime("K", c)),
        (1u64..8, 1u64..12)
            .prop_filter("knot", |(m, q)| num_integer::gcd(*m, *q) == 1)
            .prop_map(|(m, q)| Atom::torus(m, q).unwrap()),
        Just(Atom::trivial2()),
        Just(Atom::exceptional(Exceptional::S3Core)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn sum0_is_additive(a in expression_strategy(), b in expression_strategy()) {
        prop_assert_eq!(complexity(&sum0(&a, &b)), complexity(&a) + complexity(&b));
    }

    #[test]
    fn normalize_preserves_complexity(e in expression_strategy()) {
        prop_assert_eq!(complexity(&normalize(&e)), complexity(&e));
    }

    #[test]
    fn normalize_is_idempotent(e in expression_strategy()) {
        let once = normalize(&e);
        prop_assert_eq!(&normalize(&once).atoms, &once.atoms);
    }

    #[test]
    fn normalize_is_confluent(e in expression_strategy(), picks in prop::collection::vec(any::<usize>(), 32)) {
        let mut it = picks.into_iter().cycle();
        let random = normalize_by(&e, |k| it.next().unwrap() % k);
        prop_assert_eq!(&random.atoms, &normalize(&e).atoms);
    }

    #[test]
    fn text_round_trips(e in expression_strategy()) {
        let back = parse_expression(&e.to_string()).unwrap();
        prop_assert_eq!(back.atoms, e.atoms);
    }

    #[test]
    fn extracting_d_keeps_complexity(e in expression_strategy()) {
        let (y, k) = extract_d_factors(&e);
        prop_assert!(!y.contains_d());
        prop_assert_eq!(k, e.atoms.iter().filter(|a| a.is_d()).count());
        let back = sum0(&y, &PairExpression::new(vec![Atom::d(); k]));
        prop_assert_eq!(complexity(&back), complexity(&e));
    }

    #[test]
    fn sum2_never_exceeds_the_sum(a in expression_strategy(), b in expression_strategy(), i in any::<usize>(), j in any::<usize>()) {
        let ti: Vec<usize> = (0..a.atoms.len()).filter(|&k| a.atoms[k].components > 0).collect();
        let tj: Vec<usize> = (0..b.atoms.len()).filter(|&k| b.atoms[k].components > 0).collect();
        prop_assume!(!ti.is_empty() && !tj.is_empty());
        let (t1, t2) = (ti[i % ti.len()], tj[j % tj.len()]);
        let r = sum2(&a, t1, &b, t2).unwrap();
        let (got, sum) = (complexity(&r), complexity(&a) + complexity(&b));
        prop_assert!(got.lower <= sum.lower);
        if let (Some(g), Some(s)) = (got.upper, sum.upper) {
            prop_assert!(g <= s);
        }
        let free = |x: &Atom| !x.is_d() && !matches!(x.kind, AtomKind::Opaque { .. });
        if free(&a.atoms[t1]) && free(&b.atoms[t2]) {
            prop_assert_eq!(got, sum);
        }
    }

    #[test]
    fn knot_sum_with_d_is_d(k in knot_atom_strategy(), reps in 1usize..4) {
        let knot = PairExpression::new(vec![k]);
        let mut e = PairExpression::new(vec![Atom::d()]);
        for _ in 0..reps {
            e = sum2(&knot, 0, &e, 0).unwrap();
            prop_assert_eq!(&e.atoms, &vec![Atom::d()]);
        }
    }
}

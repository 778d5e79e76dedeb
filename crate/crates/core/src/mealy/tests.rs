use proptest::prelude::*;

use super::*;
use crate::constructions::build_automaton_abelian;
use crate::FiniteAbelianGroup;

fn ax(spec: &str) -> MealyAutomaton {
    build_automaton_abelian(&spec.parse::<FiniteAbelianGroup>().unwrap())
}

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn w<'a>(a: &'a MealyAutomaton, s: &str) -> GroupWord<'a> {
    GroupWord::parse(a, s).unwrap()
}

#[test]
fn transition_and_action_examples() {
    let a = ax("Z3");
    assert_eq!(a.extended_transition(0, &[1]).unwrap(), 2);
    assert_eq!(a.extended_transition(1, &[]).unwrap(), 1);
    assert_eq!(a.extended_transition(1, &[2, 1]).unwrap(), 1);
    assert_eq!(a.act(1, &[0, 2, 1]).unwrap(), vec![1, 0, 0]);
    assert_eq!(a.act(0, &[0, 0, 0]).unwrap(), vec![0, 0, 0]);
    assert_eq!(a.act(2, &[]).unwrap(), Vec::<usize>::new());
    assert!(matches!(a.act(0, &[3]), Err(MealyError::LetterOutOfRange { letter: 3, size: 3 })));
}

#[test]
fn dual_examples() {
    let d = ax("Z3").dual();
    assert_eq!(d.state_labels(), ["0", "1", "2"]);
    assert_eq!(d.letter_labels(), ["a0", "a1", "a2"]);
    // loop a0|a2 at state 1
    assert_eq!(d.next_state(1, 0), 1);
    assert_eq!(d.output_letter(1, 0), 2);

    let d2 = ax("Z2").dual();
    for x in 0..2 {
        for i in 0..2 {
            assert_eq!(d2.next_state(x, i), (i + x) % 2);
        }
    }

    let id = MealyAutomaton::identity(labels("x", 3)).unwrap();
    let did = id.dual();
    assert_eq!(did.num_states(), 3);
    assert_eq!(did.alphabet_size(), 1);
    assert!((0..3).all(|x| did.next_state(x, 0) == x && did.output_letter(x, 0) == 0));
}

#[test]
fn inverse_examples() {
    let id = MealyAutomaton::identity(labels("x", 2)).unwrap();
    assert_eq!(id.inverse().unwrap(), id);

    let a = ax("Z3");
    let inv = a.inverse().unwrap();
    let img = a.act(1, &[2, 1, 0]).unwrap();
    assert_eq!(inv.act(1, &img).unwrap(), vec![2, 1, 0]);

    let inv2 = ax("Z2").inverse().unwrap();
    assert_eq!(inv2.output_letter(1, 0), 1);

    let bad = MealyAutomaton::new(labels("q", 1), labels("x", 2), vec![vec![0, 0]], vec![vec![0, 0]]).unwrap();
    assert!(matches!(bad.inverse(), Err(MealyError::NotPermutational { state: 0 })));
    assert!(GroupWord::new(&bad, vec![]).is_err());
}

#[test]
fn reversibility_examples() {
    let a3 = ax("Z3");
    assert!(a3.is_reversible() && a3.is_bireversible());
    let a2 = ax("Z2");
    assert!(a2.is_reversible() && !a2.is_bireversible());
    assert!(!ax("Z2xZ2").is_bireversible());
}

#[test]
fn isomorphism_examples() {
    let a3 = ax("Z3");
    let id = a3.isomorphic(&a3).unwrap();
    assert_eq!(id.phi, vec![0, 1, 2]);
    assert_eq!(id.psi, vec![0, 1, 2]);
    let d = a3.dual();
    let found = a3.isomorphic(&d).unwrap();
    assert!(a3.is_isomorphism(&d, &found.phi, &found.psi));
    assert!(a3.is_isomorphism(&d, &[0, 2, 1], &[0, 1, 2]));
    assert!(!a3.is_isomorphism(&d, &[0, 1, 2], &[0, 1, 2]));
    assert!(ax("Z2").isomorphic(&a3).is_none());
}

#[test]
fn root_permutation_examples() {
    let a = ax("Z3");
    assert!(GroupWord::identity(&a).unwrap().root_permutation().is_identity());
    assert_eq!(w(&a, "a1").root_permutation().0, vec![1, 2, 0]);
    assert_eq!(w(&a, "a1 a2^-1").root_permutation().0, vec![2, 0, 1]);
}

#[test]
fn section_examples() {
    let g: FiniteAbelianGroup = "Z5".parse().unwrap();
    let a = build_automaton_abelian(&g);
    for i in 0..5 {
        for j in 0..5 {
            let s = GroupWord::generator(&a, i).unwrap().section(j).unwrap();
            assert_eq!(s.letters(), [Generator::pos(g.sub_idx(i, j))]);
            // The section of an inverse generator is a_{2i-j}^-1.
            let s = GroupWord::generator(&a, i).unwrap().inverse().section(j).unwrap();
            assert_eq!(s.letters(), [Generator::neg(g.sub_idx(g.add_idx(i, i), j))]);
        }
    }
    assert!(GroupWord::identity(&a).unwrap().section(3).unwrap().is_empty());
}

#[test]
fn inverse_sections_differ_from_the_naive_formula() {
    let a = ax("Z3");
    let naive = GroupWord::new(&a, vec![Generator::neg(2)]).unwrap();
    // a_1^-1 at 1: the naive section a_{-1}^-1 = a_2^-1 is not the true one.
    let s = w(&a, "a1^-1").section(1).unwrap();
    assert!(!words_equal(&s, &naive).unwrap());
    assert_eq!(s.display(), "a1^-1");
}

#[test]
fn equality_examples() {
    let a3 = ax("Z3");
    let u = w(&a3, "a0 a2^-1 a1");
    assert!(words_equal(&u, &u).unwrap());
    assert!(words_equal(&u, &w(&a3, "a2")).unwrap());
    let a2 = ax("Z2");
    assert!(!words_equal(&w(&a2, "a0"), &w(&a2, "a1")).unwrap());
    assert!(is_identity(&w(&a2, "a0^-1 a1 a0^-1 a1")).unwrap());
}

#[test]
fn cap_is_reported() {
    let a = ax("Z2xZ2");
    let p = GroupWord::generator(&a, 0).unwrap().pow(16);
    // The probe words settle this without any search.
    assert!(!is_identity_with_cap(&p, 1).unwrap());

    let a = ax("Z4");
    let c1 = w(&a, "a0^-1 a1");
    let x = w(&a, "a0^-2 a2 a0");
    let comm = &(&(&c1 * &x) * &c1.inverse()) * &x.inverse();
    assert!(matches!(is_identity_with_cap(&comm, 1), Err(MealyError::CapExceeded { cap: 1 })));
    assert!(is_identity(&comm).unwrap());
}

#[test]
fn constant_translation_examples() {
    let g: FiniteAbelianGroup = "Z3".parse().unwrap();
    let a = build_automaton_abelian(&g);
    for j in 0..3 {
        let c = GroupWord::new(&a, vec![Generator::neg(0), Generator::pos(j)]).unwrap();
        assert_eq!(is_constant_translation(&c, &g).unwrap(), Some(j));
    }
    assert_eq!(is_constant_translation(&w(&a, "a1"), &g).unwrap(), None);
    assert_eq!(is_constant_translation(&w(&a, "a0"), &g).unwrap(), None);
    assert_eq!(is_constant_translation(&GroupWord::identity(&a).unwrap(), &g).unwrap(), Some(0));
    let z4: FiniteAbelianGroup = "Z4".parse().unwrap();
    assert!(matches!(
        is_constant_translation(&w(&a, "a1"), &z4),
        Err(MealyError::NotGroupAlphabet { .. })
    ));
}

#[test]
fn minimize_examples() {
    let (m, map) = ax("Z3").minimize();
    assert_eq!(m.num_states(), 3);
    assert_eq!(map, vec![0, 1, 2]);

    let dup = MealyAutomaton::new(
        labels("q", 3),
        labels("x", 2),
        vec![vec![0, 1], vec![0, 1], vec![2, 2]],
        vec![vec![1, 0], vec![1, 0], vec![0, 1]],
    )
    .unwrap();
    let (m, map) = dup.minimize();
    assert_eq!(m.num_states(), 2);
    assert_eq!(map, vec![0, 0, 1]);
    assert!(m.is_permutational());

    let ids = MealyAutomaton::new(labels("e", 4), labels("x", 2), vec![vec![1, 2], vec![3, 0], vec![0, 0], vec![2, 1]], vec![vec![0, 1]; 4])
        .unwrap();
    assert_eq!(ids.minimize().0.num_states(), 1);
}

#[test]
fn json_round_trip_and_errors() {
    let a = ax("Z2xZ2");
    let back = MealyAutomaton::from_json(&a.to_json()).unwrap();
    assert_eq!(back, a);
    assert!(matches!(
        MealyAutomaton::from_json(r#"{"states":["q"],"alphabet":["x"],"transition":[[1]],"output":[[0]]}"#),
        Err(MealyError::StateOutOfRange { state: 1, size: 1 })
    ));
    assert!(matches!(MealyAutomaton::from_json("{"), Err(MealyError::Json(_))));
    assert!(matches!(
        MealyAutomaton::new(vec!["q".into(), "q".into()], labels("x", 1), vec![vec![0]; 2], vec![vec![0]; 2]),
        Err(MealyError::DuplicateLabel(_))
    ));
}

#[test]
fn dot_edge_labels() {
    let dot = ax("Z3").to_dot("A");
    assert!(dot.contains("\"a0\" -> \"a2\" [label=\"1|1\"];"));
    assert_eq!(dot.matches("->").count(), 9);
}

#[test]
fn word_parsing() {
    let a = ax("Z3");
    let u = w(&a, "a1 a2^-1 * a0^2");
    assert_eq!(u.display(), "a1 a2^-1 a0 a0");
    assert_eq!(w(&a, "").display(), "e");
    assert!(GroupWord::parse(&a, "b1").is_err());
    assert!(GroupWord::parse(&a, "a1^x").is_err());
    assert_eq!(w(&a, "a1 a1^-1 a2").reduced().display(), "a2");
}

#[test]
fn mixing_automata_is_rejected() {
    let a = ax("Z3");
    let b = ax("Z2");
    let u = w(&a, "a1");
    let v = w(&b, "a1");
    assert!(matches!(u.try_mul(&v), Err(MealyError::AutomatonMismatch)));
    assert!(words_equal(&u, &v).is_err());
}

// ---------------------------------------------------------------------------
// Invariants
// ---------------------------------------------------------------------------

fn permutational_automaton(max_q: usize, max_x: usize) -> impl Strategy<Value = MealyAutomaton> {
    (1..=max_q, 1..=max_x).prop_flat_map(|(nq, nx)| {
        let rows = proptest::collection::vec(proptest::collection::vec(0..nq, nx), nq);
        let perms = proptest::collection::vec(Just((0..nx).collect::<Vec<_>>()).prop_shuffle(), nq);
        (rows, perms).prop_map(move |(t, o)| MealyAutomaton::new(labels("q", nq), labels("x", nx), t, o).unwrap())
    })
}

fn letters(a: &MealyAutomaton, max_len: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(0..a.alphabet_size(), 0..=max_len)
}

fn gens(a: &MealyAutomaton, max_len: usize) -> impl Strategy<Value = Vec<Generator>> {
    proptest::collection::vec(
        (0..a.num_states(), any::<bool>()).prop_map(|(state, inverse)| Generator { state, inverse }),
        0..=max_len,
    )
}

fn all_words(n: usize, len: usize) -> Vec<Vec<usize>> {
    (0..len).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|w| {
                (0..n).map(move |x| {
                    let mut v = w.clone();
                    v.push(x);
                    v
                })
            })
            .collect()
    })
}

proptest! {
    #[test]
    fn act_is_length_preserving_and_prefix_compatible(
        (a, q, w) in permutational_automaton(4, 4).prop_flat_map(|a| {
            let l = letters(&a, 6);
            (0..a.num_states(), l, Just(a)).prop_map(|(q, w, a)| (a, q, w))
        })
    ) {
        let out = a.act(q, &w).unwrap();
        prop_assert_eq!(out.len(), w.len());
        for k in 0..=w.len() {
            prop_assert_eq!(&a.act(q, &w[..k]).unwrap()[..], &out[..k]);
        }
    }

    #[test]
    fn act_permutes_each_level(a in permutational_automaton(4, 4), m in 0usize..=4) {
        let level = all_words(a.alphabet_size(), m);
        for q in 0..a.num_states() {
            let mut images: Vec<Vec<usize>> = level.iter().map(|w| a.act(q, w).unwrap()).collect();
            images.sort();
            images.dedup();
            prop_assert_eq!(images.len(), level.len());
        }
    }

    #[test]
    fn double_dual_is_identity(a in permutational_automaton(4, 4)) {
        let dd = a.dual().dual();
        let phi: Vec<usize> = (0..a.num_states()).collect();
        let psi: Vec<usize> = (0..a.alphabet_size()).collect();
        prop_assert!(a.is_isomorphism(&dd, &phi, &psi));
        prop_assert_eq!(dd, a);
    }

    #[test]
    fn inverse_undoes_action(
        (a, q, w) in permutational_automaton(4, 4).prop_flat_map(|a| {
            let l = letters(&a, 8);
            (0..a.num_states(), l, Just(a)).prop_map(|(q, w, a)| (a, q, w))
        })
    ) {
        let inv = a.inverse().unwrap();
        prop_assert_eq!(inv.act(q, &a.act(q, &w).unwrap()).unwrap(), w.clone());
        prop_assert_eq!(a.act(q, &inv.act(q, &w).unwrap()).unwrap(), w);
    }

    #[test]
    fn product_acts_left_factor_first(
        (a, u, v, x) in permutational_automaton(4, 4).prop_flat_map(|a| {
            (gens(&a, 4), gens(&a, 4), letters(&a, 6), Just(a)).prop_map(|(u, v, x, a)| (a, u, v, x))
        })
    ) {
        let u = GroupWord::new(&a, u).unwrap();
        let v = GroupWord::new(&a, v).unwrap();
        let uv = &u * &v;
        prop_assert_eq!(uv.act(&x).unwrap(), v.act(&u.act(&x).unwrap()).unwrap());
        prop_assert_eq!(u.inverse().act(&u.act(&x).unwrap()).unwrap(), x);
    }

    #[test]
    fn product_sections_follow_the_right_action_rule(
        (a, u, v) in permutational_automaton(4, 4).prop_flat_map(|a| {
            (gens(&a, 4), gens(&a, 4), Just(a)).prop_map(|(u, v, a)| (a, u, v))
        })
    ) {
        let u = GroupWord::new(&a, u).unwrap();
        let v = GroupWord::new(&a, v).unwrap();
        let uv = &u * &v;
        let root = u.root_permutation();
        for x in 0..a.alphabet_size() {
            let expect = &u.section(x).unwrap() * &v.section(root.apply(x)).unwrap();
            prop_assert_eq!(uv.section(x).unwrap(), expect);
        }
    }

    #[test]
    fn section_law(
        (a, g) in permutational_automaton(4, 4).prop_flat_map(|a| {
            (gens(&a, 3), Just(a)).prop_map(|(g, a)| (a, g))
        })
    ) {
        let g = GroupWord::new(&a, g).unwrap();
        let root = g.root_permutation();
        for len in 0..=3 {
            for w in all_words(a.alphabet_size(), len) {
                for x in 0..a.alphabet_size() {
                    let mut xw = vec![x];
                    xw.extend(&w);
                    let mut expect = vec![root.apply(x)];
                    expect.extend(g.section(x).unwrap().act(&w).unwrap());
                    prop_assert_eq!(g.act(&xw).unwrap(), expect);
                }
            }
        }
    }

    #[test]
    fn equality_is_a_congruence(
        (u, v, t, flip) in (gens(&ax("Z3"), 4), gens(&ax("Z3"), 4), gens(&ax("Z3"), 3), any::<bool>())
    ) {
        let a = ax("Z3");
        let u = GroupWord::new(&a, u).unwrap();
        // Half of the time v is a rewriting of u, so that equal pairs occur.
        let v = if flip {
            let c = GroupWord::parse(&a, "a0^-1 a1 a2^-1 a0").unwrap();
            &(&u * &c) * &c.inverse()
        } else {
            GroupWord::new(&a, v).unwrap()
        };
        let t = GroupWord::new(&a, t).unwrap();
        let eq = words_equal(&u, &v).unwrap();
        prop_assert_eq!(eq, words_equal(&v, &u).unwrap());
        prop_assert!(words_equal(&u, &u).unwrap());
        if eq {
            prop_assert!(words_equal(&(&u * &t), &(&v * &t)).unwrap());
            prop_assert!(words_equal(&(&t * &u), &(&t * &v)).unwrap());
            prop_assert!(words_equal(&u.inverse(), &v.inverse()).unwrap());
        }
        if flip {
            prop_assert!(eq);
        }
        // Unequal words must act differently somewhere.
        if !eq {
            let moved = (1..=6).any(|len| all_words(3, len).iter().any(|x| u.act(x).unwrap() != v.act(x).unwrap()));
            prop_assert!(moved || u.len() + v.len() > 6);
        }
    }

    #[test]
    fn equality_is_transitive(
        (u, v, t) in (gens(&ax("Z2"), 4), gens(&ax("Z2"), 4), gens(&ax("Z2"), 4))
    ) {
        let a = ax("Z2");
        let (u, v, t) = (GroupWord::new(&a, u).unwrap(), GroupWord::new(&a, v).unwrap(), GroupWord::new(&a, t).unwrap());
        if words_equal(&u, &v).unwrap() && words_equal(&v, &t).unwrap() {
            prop_assert!(words_equal(&u, &t).unwrap());
        }
    }

    #[test]
    fn minimize_preserves_action(
        (a, q, w) in permutational_automaton(4, 3).prop_flat_map(|a| {
            let l = letters(&a, 6);
            (0..a.num_states(), l, Just(a)).prop_map(|(q, w, a)| (a, q, w))
        })
    ) {
        let (m, map) = a.minimize();
        prop_assert_eq!(m.act(map[q], &w).unwrap(), a.act(q, &w).unwrap());
        prop_assert_eq!(m.is_permutational(), a.is_permutational());
        prop_assert!(m.minimize().0.num_states() == m.num_states());
    }

    #[test]
    fn isomorphism_search_finds_relabelings(
        (a, sp, lp) in permutational_automaton(4, 4).prop_flat_map(|a| {
            let sp = Just((0..a.num_states()).collect::<Vec<_>>()).prop_shuffle();
            let lp = Just((0..a.alphabet_size()).collect::<Vec<_>>()).prop_shuffle();
            (Just(a), sp, lp)
        })
    ) {
        // b is a with states renamed by sp and letters by lp.
        let nq = a.num_states();
        let nx = a.alphabet_size();
        let mut t = vec![vec![0; nx]; nq];
        let mut o = vec![vec![0; nx]; nq];
        for q in 0..nq {
            for x in 0..nx {
                t[sp[q]][lp[x]] = sp[a.next_state(q, x)];
                o[sp[q]][lp[x]] = lp[a.output_letter(q, x)];
            }
        }
        let b = MealyAutomaton::new(labels("q", nq), labels("x", nx), t, o).unwrap();
        prop_assert!(a.is_isomorphism(&b, &sp, &lp));
        let found = a.isomorphic(&b);
        prop_assert!(found.is_some());
        let found = found.unwrap();
        prop_assert!(a.is_isomorphism(&b, &found.phi, &found.psi));
    }
}

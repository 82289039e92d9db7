use std::time::Duration;

use proptest::prelude::*;

use super::*;
use crate::model::{Eval, Relation, RelationKind::*};

fn config(var: VarHeuristic, val: ValHeuristic, mode: QGenMode) -> SearchConfig {
    SearchConfig {
        var_heuristic: var,
        val_heuristic: val,
        cut_min: Duration::from_secs(20),
        cut_max: Duration::from_secs(30),
        rng_seed: 7,
        mode,
    }
}

fn roomy() -> SearchConfig {
    config(VarHeuristic::DomWdeg, ValHeuristic::Random, QGenMode::MaxComplete)
}

fn latin_target(n: usize) -> Vec<Constraint> {
    let mut out = Vec::new();
    for r in 0..n {
        for a in 0..n {
            for b in a + 1..n {
                out.push(Constraint::binary(Neq, r * n + a, r * n + b));
                out.push(Constraint::binary(Neq, a * n + r, b * n + r));
            }
        }
    }
    out
}

fn all_satisfied(cs: &[Constraint], e: &Assignment) -> bool {
    cs.iter().all(|c| c.evaluate(e) == Eval::Satisfied)
}

#[test]
fn solve_without_constraints_gives_complete_assignment() {
    let vocab = Vocabulary::uniform(5, 1, 3).unwrap();
    let sol = Solver::new(roomy()).solve(&vocab, &[]).unwrap().unwrap();
    assert!(sol.is_complete());
}

#[test]
fn solve_detects_contradiction() {
    let vocab = Vocabulary::uniform(2, 1, 2).unwrap();
    let cs = [Constraint::binary(Eq, 0, 1), Constraint::binary(Neq, 0, 1)];
    assert_eq!(Solver::new(roomy()).solve(&vocab, &cs), Ok(None));
}

#[test]
fn solve_latin_square() {
    let vocab = Vocabulary::uniform(16, 1, 4).unwrap();
    let target = latin_target(4);
    let sol = Solver::new(roomy()).solve(&vocab, &target).unwrap().unwrap();
    assert!(sol.is_complete());
    assert!(all_satisfied(&target, &sol));
}

#[test]
fn solve_respects_budget() {
    // pigeonhole: 9 pairwise different variables over 8 values, explored without pruning
    let vocab = Vocabulary::uniform(9, 1, 8).unwrap();
    let mut cs = Vec::new();
    for a in 0..9 {
        for b in a + 1..9 {
            cs.push(Constraint::binary(Neq, a, b));
        }
    }
    let mut cfg = roomy();
    cfg.cut_min = Duration::from_millis(1);
    cfg.cut_max = Duration::from_millis(5);
    let mut solver = Solver::new(cfg);
    assert!(matches!(solver.solve(&vocab, &cs), Err(BudgetExceeded) | Ok(None)));
}

#[test]
fn qgen_on_empty_bias_proves_none() {
    let vocab = Vocabulary::uniform(3, 1, 2).unwrap();
    let r = Solver::new(roomy()).qgen(&vocab, &[], &Bias::new(3));
    assert!(r.example.is_none());
    assert!(r.proven_none);
}

#[test]
fn qgen_two_variable_neq() {
    let vocab = Vocabulary::uniform(2, 1, 2).unwrap();
    let bias = Bias::from_constraints(2, [Constraint::binary(Neq, 0, 1)]);
    let r = Solver::new(roomy()).qgen(&vocab, &[], &bias);
    let e = r.example.unwrap();
    assert_eq!(e.get(0), e.get(1));
    assert_eq!(r.violated_count, 1);
}

#[test]
fn qgen_never_proposes_an_all_distinct_example() {
    let vocab = Vocabulary::uniform(8, 1, 8).unwrap();
    let bias = Bias::from_language(&vocab, &[Relation::plain(Neq)]);
    let mut solver = Solver::new(roomy());
    for _ in 0..5 {
        let r = solver.qgen(&vocab, &[], &bias);
        let e = r.example.unwrap();
        assert!(e.is_complete());
        assert_eq!(bias.kappa_count(&e), r.violated_count);
        assert!(r.violated_count >= 1);
    }
}

#[test]
fn maxv_with_bdeg_repeats_the_first_value() {
    let vocab = Vocabulary::uniform(8, 1, 8).unwrap();
    let bias = Bias::from_language(&vocab, &[Relation::plain(Neq)]);
    let cfg = config(VarHeuristic::Bdeg, ValHeuristic::MaxV, QGenMode::MaxComplete);
    let r = Solver::new(cfg).qgen(&vocab, &[], &bias);
    assert_eq!(r.example.unwrap(), Assignment::complete(&[1; 8]));
    assert_eq!(r.violated_count, 28);
}

#[test]
fn maxv_without_bias_is_lex() {
    let vocab = Vocabulary::uniform(3, 1, 3).unwrap();
    let cfg = config(VarHeuristic::Lex, ValHeuristic::MaxV, QGenMode::MaxComplete);
    let sol = Solver::new(cfg).solve(&vocab, &[]).unwrap().unwrap();
    assert_eq!(sol, Assignment::complete(&[1, 1, 1]));
}

#[test]
fn partial_qgen_leaves_unneeded_variables_open() {
    let vocab = Vocabulary::uniform(3, 1, 2).unwrap();
    let bias = Bias::from_constraints(3, [Constraint::binary(Neq, 0, 1)]);
    let cfg = config(VarHeuristic::Bdeg, ValHeuristic::Random, QGenMode::MaxBPartial);
    let r = Solver::new(cfg).qgen(&vocab, &[], &bias);
    let e = r.example.unwrap();
    assert_eq!(r.violated_count, 1);
    assert_eq!(e.get(0), e.get(1));
    assert!(e.get(0).is_some());
    assert_eq!(e.get(2), None);
}

#[test]
fn partial_qgen_reaches_implied_constraints() {
    // x0 < x1 < x2 over 1..3 forces x0=1,x1=2,x2=3, so Lt(x0,x2) is implied;
    // a partial query on {x0,x2} alone can still violate it
    let vocab = Vocabulary::uniform(3, 1, 3).unwrap();
    let hard = [Constraint::binary(Lt, 0, 1), Constraint::binary(Lt, 1, 2)];
    let bias = Bias::from_constraints(3, [Constraint::binary(Lt, 0, 2)]);
    let mut complete = Solver::new(roomy());
    let r = complete.qgen(&vocab, &hard, &bias);
    assert!(r.example.is_none() && r.proven_none);

    let cfg = config(VarHeuristic::Bdeg, ValHeuristic::Lex, QGenMode::MaxBPartial);
    let r = Solver::new(cfg).qgen(&vocab, &hard, &bias);
    let e = r.example.unwrap();
    assert_eq!(r.violated_count, 1);
    assert_eq!(e.get(1), None);
    assert!(e.get(0) >= e.get(2));
}

#[test]
fn implication_examples() {
    let vocab = Vocabulary::uniform(3, 1, 5).unwrap();
    let mut s = Solver::new(roomy());
    let budget = Duration::from_secs(5);
    let eq = [Constraint::binary(Eq, 0, 1), Constraint::binary(Eq, 1, 2)];
    assert_eq!(s.is_implied(&vocab, &eq, &Constraint::binary(Eq, 0, 2), budget), Implication::Implied);

    match s.is_implied(&vocab, &[], &Constraint::binary(Neq, 0, 1), budget) {
        Implication::NotImplied(w) => assert_eq!(w.get(0), w.get(1)),
        other => panic!("expected a witness, got {other:?}"),
    }

    let vocab = Vocabulary::uniform(2, 0, 9).unwrap();
    let far = [Constraint::new(Relation::with_param(AbsDiffGtY, 3), &[0, 1]).unwrap()];
    let near = Constraint::new(Relation::with_param(AbsDiffGtY, 1), &[0, 1]).unwrap();
    assert_eq!(s.is_implied(&vocab, &far, &near, budget), Implication::Implied);
    assert!(matches!(s.is_implied(&vocab, std::slice::from_ref(&near), &far[0], budget), Implication::NotImplied(_)));
}

#[test]
fn implication_ignores_unrelated_components() {
    let vocab = Vocabulary::uniform(6, 1, 3).unwrap();
    let cs = [Constraint::binary(Lt, 0, 1), Constraint::binary(Lt, 1, 2), Constraint::binary(Neq, 3, 4)];
    let mut s = Solver::new(roomy());
    let r = s.is_implied(&vocab, &cs, &Constraint::binary(Lt, 0, 2), Duration::from_secs(5));
    assert_eq!(r, Implication::Implied);
}

#[test]
fn discriminating_examples() {
    let vocab = Vocabulary::uniform(2, 1, 2).unwrap();
    let y = VarSet::full(2);
    let mut s = Solver::new(roomy());
    assert_eq!(s.gen_discriminating(&vocab, &[], &[Constraint::binary(Neq, 0, 1)], &y), None);

    let delta = [Constraint::binary(Neq, 0, 1), Constraint::binary(Lt, 0, 1)];
    let e = s.gen_discriminating(&vocab, &[], &delta, &y).unwrap();
    assert_eq!(e, Assignment::complete(&[2, 1]));

    let delta = [Constraint::binary(Eq, 0, 1), Constraint::binary(Neq, 0, 1)];
    assert!(s.gen_discriminating(&vocab, &[], &delta, &y).is_some());
}

#[test]
fn discriminating_respects_learned_constraints_inside_y() {
    let vocab = Vocabulary::uniform(3, 1, 3).unwrap();
    let y = VarSet::from_vars(3, [0, 1]);
    let delta = [Constraint::binary(Neq, 0, 1), Constraint::binary(Gt, 0, 1)];
    // x0 < x1 forbids the only discriminating tuples (x0 > x1 violates Lt, equality violates both)
    let learned = [Constraint::binary(Lt, 0, 1), Constraint::binary(Neq, 1, 2)];
    let mut s = Solver::new(roomy());
    let e = s.gen_discriminating(&vocab, &learned, &delta, &y).unwrap();
    assert!(e.get(0) < e.get(1));
    assert_eq!(e.get(2), None);
    let learned = [Constraint::binary(Gt, 0, 1)];
    assert_eq!(s.gen_discriminating(&vocab, &learned, &delta, &y), None);
}

#[test]
fn qgen_is_deterministic_under_a_seed() {
    let vocab = Vocabulary::uniform(6, 1, 4).unwrap();
    let bias = Bias::from_language(&vocab, &[Eq, Neq, Lt, Gt].map(Relation::plain));
    let hard = [Constraint::binary(Neq, 0, 1), Constraint::binary(Lt, 2, 3)];
    let run = || {
        let mut s = Solver::new(roomy());
        (0..3).map(|_| s.qgen(&vocab, &hard, &bias).example).collect::<Vec<_>>()
    };
    assert_eq!(run(), run());
}

#[test]
fn exhausted_budget_reports_no_proof() {
    let vocab = Vocabulary::uniform(4, 1, 3).unwrap();
    let bias = Bias::from_constraints(4, [Constraint::binary(Neq, 0, 1)]);
    let mut cfg = roomy();
    cfg.cut_min = Duration::from_nanos(1);
    cfg.cut_max = Duration::from_nanos(1);
    let r = Solver::new(cfg.clone()).qgen(&vocab, &[], &bias);
    assert!(r.hit_cut_max && r.used_fallback);
    assert!(r.example.is_none() && !r.proven_none);
}

fn small_constraint() -> impl Strategy<Value = Constraint> {
    let kinds = prop::sample::select(vec![Eq, Neq, Lt, Gt, Geq, Leq, DiffEq1, AbsDiffEq1]);
    (kinds, 0usize..4, 0usize..4)
        .prop_filter("distinct scope", |(_, a, b)| a != b)
        .prop_map(|(k, a, b)| Constraint::binary(k, a, b))
}

fn all_complete(vocab: &Vocabulary) -> Vec<Assignment> {
    let mut out = vec![Vec::new()];
    for v in vocab.vars() {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<i64>| {
                vocab.domain(v).iter().map(move |&w| {
                    let mut p = prefix.clone();
                    p.push(w);
                    p
                })
            })
            .collect();
    }
    out.iter().map(|vals| Assignment::complete(vals)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn qgen_complete_matches_brute_force(
        n in 2usize..=4,
        d in 2i64..=4,
        hard in prop::collection::vec(small_constraint(), 0..4),
        soft in prop::collection::vec(small_constraint(), 0..8),
        var in prop::sample::select(vec![VarHeuristic::DomWdeg, VarHeuristic::Bdeg, VarHeuristic::Dom, VarHeuristic::Lex]),
        val in prop::sample::select(vec![ValHeuristic::Random, ValHeuristic::Lex, ValHeuristic::MaxV]),
    ) {
        let keep = |c: &Constraint| c.scope().iter().all(|&v| v < n);
        let hard: Vec<Constraint> = hard.into_iter().filter(keep).collect();
        let bias = Bias::from_constraints(n, soft.into_iter().filter(keep));
        let vocab = Vocabulary::uniform(n, 1, d).unwrap();
        let best = all_complete(&vocab)
            .iter()
            .filter(|e| all_satisfied(&hard, e))
            .map(|e| bias.kappa_count(e))
            .max();
        let r = Solver::new(config(var, val, QGenMode::MaxComplete)).qgen(&vocab, &hard, &bias);
        match best {
            Some(k) if k > 0 => {
                let e = r.example.expect("an example exists");
                prop_assert!(all_satisfied(&hard, &e));
                prop_assert_eq!(bias.kappa_count(&e), k);
                prop_assert_eq!(r.violated_count, k);
            }
            _ => {
                prop_assert!(r.example.is_none());
                prop_assert!(r.proven_none);
            }
        }
    }

    #[test]
    fn qgen_partial_returns_valid_queries(
        n in 2usize..=4,
        d in 2i64..=4,
        hard in prop::collection::vec(small_constraint(), 0..4),
        soft in prop::collection::vec(small_constraint(), 0..8),
    ) {
        let keep = |c: &Constraint| c.scope().iter().all(|&v| v < n);
        let hard: Vec<Constraint> = hard.into_iter().filter(keep).collect();
        let bias = Bias::from_constraints(n, soft.into_iter().filter(keep));
        let vocab = Vocabulary::uniform(n, 1, d).unwrap();
        let r = Solver::new(config(VarHeuristic::Bdeg, ValHeuristic::Random, QGenMode::MaxBPartial))
            .qgen(&vocab, &hard, &bias);
        match r.example {
            Some(e) => {
                prop_assert!(hard.iter().all(|c| c.evaluate(&e) != Eval::Violated));
                prop_assert!(r.violated_count >= 1);
                prop_assert_eq!(bias.kappa_count(&e), r.violated_count);
            }
            None => {
                // no bias constraint can be violated on its own scope by a tuple
                // consistent with the hard constraints inside that scope
                prop_assert!(r.proven_none);
                for c in bias.iter() {
                    let y = c.scope_set(n);
                    let local: Vec<&Constraint> = hard.iter().filter(|h| h.scope().iter().all(|&v| y.contains(v))).collect();
                    let violable = all_complete(&vocab).into_iter().any(|e| {
                        let e = e.project(&y);
                        c.is_violated_by(&e) && local.iter().all(|h| !h.is_violated_by(&e))
                    });
                    prop_assert!(!violable);
                }
            }
        }
    }

    #[test]
    fn implication_matches_brute_force(
        n in 2usize..=4,
        d in 2i64..=3,
        cs in prop::collection::vec(small_constraint(), 0..5),
        c in small_constraint(),
    ) {
        let keep = |c: &Constraint| c.scope().iter().all(|&v| v < n);
        prop_assume!(keep(&c));
        let cs: Vec<Constraint> = cs.into_iter().filter(keep).collect();
        let vocab = Vocabulary::uniform(n, 1, d).unwrap();
        let sols: Vec<Assignment> = all_complete(&vocab).into_iter().filter(|e| all_satisfied(&cs, e)).collect();
        let implied = sols.iter().all(|e| !c.is_violated_by(e));
        let r = Solver::new(roomy()).is_implied(&vocab, &cs, &c, Duration::from_secs(5));
        if implied {
            prop_assert_eq!(r, Implication::Implied);
        } else {
            match r {
                Implication::NotImplied(w) => {
                    prop_assert!(c.is_violated_by(&w));
                    prop_assert!(cs.iter().all(|k| !k.is_violated_by(&w)));
                }
                other => prop_assert!(false, "expected witness, got {:?}", other),
            }
        }
    }
}

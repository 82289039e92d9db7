use std::time::Duration;

use super::*;
use crate::model::{Relation, RelationKind};
use crate::oracle::SimulatedOracle;
use crate::solver::{ValHeuristic, VarHeuristic};

fn neq(a: Var, b: Var) -> Constraint {
    Constraint::binary(RelationKind::Neq, a, b)
}

fn running_vocab() -> Vocabulary {
    Vocabulary::uniform(8, 1, 8).unwrap()
}

fn running_target() -> Vec<Constraint> {
    vec![neq(0, 1), neq(0, 2), neq(2, 3)]
}

fn running_bias(vocab: &Vocabulary) -> Bias {
    Bias::from_language(vocab, &[Relation::plain(RelationKind::Neq)])
}

fn fast_config() -> AcquisitionConfig {
    AcquisitionConfig {
        search: SearchConfig {
            cut_min: Duration::from_millis(100),
            cut_max: Duration::from_millis(500),
            ..SearchConfig::default()
        },
        trace: true,
        ..AcquisitionConfig::default()
    }
}

fn set(vars: &[Var]) -> VarSet {
    VarSet::from_vars(8, vars.iter().copied())
}

fn acquirer(vocab: &Vocabulary) -> Acquirer<'_, SimulatedOracle> {
    Acquirer::new(vocab, running_bias(vocab), SimulatedOracle::new(running_target()), fast_config()).unwrap()
}

fn asked_sets(acq: &Acquirer<'_, SimulatedOracle>) -> Vec<(Vec<Var>, bool)> {
    acq.log().records().iter().map(|r| (r.assignment().assigned().to_vec(), r.answer)).collect()
}

#[test]
fn find_scope_running_example() {
    let vocab = running_vocab();
    let mut acq = acquirer(&vocab);
    let e = Assignment::complete(&[1, 1, 1, 2, 3, 4, 5, 6]);
    let s = acq.find_scope(&e, &VarSet::empty(8), &VarSet::full(8), false).unwrap();
    assert_eq!(s.to_vec(), vec![0, 1]);
    assert_eq!(
        asked_sets(&acq),
        vec![(vec![0, 1, 2, 3], false), (vec![0, 1], false), (vec![0], true), (vec![1], true)]
    );
    let rows: Vec<(&str, Vec<Var>, Option<bool>)> =
        acq.trace().iter().map(|r| (r.label.as_str(), r.r.clone(), r.asked)).collect();
    assert_eq!(
        rows,
        vec![
            ("0", vec![], None),
            ("1", vec![0, 1, 2, 3], Some(false)),
            ("2", vec![], None),
            ("2.1", vec![0, 1], Some(false)),
            ("2.2", vec![], None),
            ("2.2.1", vec![0], Some(true)),
            ("2.2.2", vec![1], Some(true)),
        ]
    );
}

#[test]
fn find_scope2_running_example_asks_once() {
    let vocab = running_vocab();
    let mut acq = acquirer(&vocab);
    let e = Assignment::complete(&[1, 1, 1, 2, 3, 4, 5, 6]);
    acq.rej = Some(acq.bias().kappa_count(&e));
    let s = acq.find_scope2(&e, &VarSet::empty(8), &VarSet::full(8), false).unwrap();
    assert_eq!(s.to_vec(), vec![0, 1]);
    assert_eq!(asked_sets(&acq), vec![(vec![0, 1], false)]);
}

#[test]
fn find_scope_singleton_needs_no_query() {
    let vocab = running_vocab();
    let mut acq = acquirer(&vocab);
    let e = Assignment::complete(&[1, 1, 1, 2, 3, 4, 5, 6]);
    let s = acq.find_scope(&e, &VarSet::empty(8), &set(&[4]), false).unwrap();
    assert_eq!(s.to_vec(), vec![4]);
    assert!(acq.log().is_empty());
}

#[test]
fn find_c_returns_only_candidate_without_queries() {
    let vocab = running_vocab();
    let mut acq = acquirer(&vocab);
    let e = Assignment::complete(&[1, 1, 1, 2, 3, 4, 5, 6]);
    let c = acq.find_c(&e, &set(&[0, 1])).unwrap();
    assert_eq!(c, Some(Found::New(neq(0, 1))));
    assert!(acq.log().is_empty());
}

#[test]
fn find_c_reports_scope_explained_by_learned_network() {
    // x0 = x2 and x1 != x2 give x0 != x1 before anyone asks about it
    let vocab = Vocabulary::uniform(3, 1, 3).unwrap();
    let lang = [RelationKind::Eq, RelationKind::Neq, RelationKind::Lt, RelationKind::Gt].map(Relation::plain);
    let bias = Bias::from_language(&vocab, &lang);
    let target = vec![Constraint::binary(RelationKind::Eq, 0, 2), neq(1, 2), neq(0, 1)];
    let mut acq = Acquirer::new(&vocab, bias, SimulatedOracle::new(target), fast_config()).unwrap();
    acq.learn(Constraint::binary(RelationKind::Eq, 0, 2));
    acq.learn(neq(1, 2));
    let e = Assignment::complete(&[1, 1, 2]);
    let found = acq.find_c(&e, &set3(&[0, 1])).unwrap();
    assert_eq!(found, Some(Found::Entailed(neq(0, 1))));
    assert_eq!(acq.learned().len(), 2);
    assert!(acq.log().is_empty());
}

fn set3(vars: &[Var]) -> VarSet {
    VarSet::from_vars(3, vars.iter().copied())
}

#[test]
fn find_c_with_no_candidate_is_none() {
    let vocab = running_vocab();
    let mut acq = acquirer(&vocab);
    let e = Assignment::complete(&[1, 2, 1, 2, 3, 4, 5, 6]);
    assert_eq!(acq.find_c(&e, &set(&[0, 1])).unwrap(), None);
}

#[test]
fn find_c_discriminates_between_relations() {
    // (2, 2) violates ≠, < and >; only > is in the target
    let vocab = Vocabulary::uniform(2, 1, 3).unwrap();
    let lang = [RelationKind::Neq, RelationKind::Lt, RelationKind::Gt].map(Relation::plain);
    let bias = Bias::from_language(&vocab, &lang);
    let target = vec![Constraint::binary(RelationKind::Gt, 0, 1)];
    let mut acq = Acquirer::new(&vocab, bias, SimulatedOracle::new(target.clone()), fast_config()).unwrap();
    let e = Assignment::complete(&[2, 2]);
    let y = VarSet::full(2);
    let c = acq.find_c(&e, &y).unwrap().unwrap();
    assert_eq!(c, Found::New(target[0].clone()));
    assert!(acq.log().len() <= 2);
}

#[test]
fn find_all_scopes_running_example() {
    let vocab = running_vocab();
    let mut acq = acquirer(&vocab);
    let e = Assignment::complete(&[1, 1, 1, 2, 3, 4, 5, 6]);
    let mut mses = Vec::new();
    assert!(acq.find_all_scopes(&e, &VarSet::full(8), &mut mses).unwrap());
    assert_eq!(mses, vec![set(&[0, 1]), set(&[0, 2])]);
    let answers = acq.log().answers();
    assert_eq!(answers, [vec![false; 8], vec![true]].concat());
    assert_eq!(asked_sets(&acq).last().unwrap().0, vec![1, 2]);
    assert!(!acq.bias().contains(&neq(1, 2)));
    // the printed trace, row for row
    let rows: Vec<(&str, Vec<Var>, Option<bool>, Option<CallReturn>)> =
        acq.trace().iter().take(13).map(|r| (r.label.as_str(), r.y.clone(), r.asked, r.returned.clone())).collect();
    let t = |b| Some(CallReturn::Flag(b));
    assert_eq!(
        rows,
        vec![
            ("0", (0..8).collect(), Some(false), t(true)),
            ("1", (0..7).collect(), Some(false), t(true)),
            ("1.1", (0..6).collect(), Some(false), t(true)),
            ("1.1.1", (0..5).collect(), Some(false), t(true)),
            ("1.1.1.1", (0..4).collect(), Some(false), t(true)),
            ("1.1.1.1.1", vec![0, 1, 2], Some(false), t(true)),
            ("1.1.1.1.1.1", vec![0, 1], Some(false), t(true)),
            ("1.1.1.1.1.1.1", vec![0], None, t(false)),
            ("1.1.1.1.1.1.2", vec![1], None, t(false)),
            ("1.1.1.1.1.2", vec![0, 2], Some(false), t(true)),
            ("1.1.1.1.1.2.1", vec![0], None, t(false)),
            ("1.1.1.1.1.2.2", vec![2], None, t(false)),
            ("1.1.1.1.1.3", vec![1, 2], Some(true), t(false)),
        ]
    );
}

#[test]
fn find_all_scopes_nothing_violated() {
    let vocab = running_vocab();
    let mut acq = acquirer(&vocab);
    let e = Assignment::complete(&[1, 2, 3, 4, 5, 6, 7, 8]);
    let mut mses = Vec::new();
    assert!(!acq.find_all_scopes(&e, &VarSet::full(8), &mut mses).unwrap());
    assert!(mses.is_empty());
    assert!(acq.log().is_empty());
}

#[test]
fn find_all_cons_running_example() {
    let vocab = running_vocab();
    let mut cfg = fast_config();
    cfg.findscope = FindScopeVariant::V1;
    let mut acq = Acquirer::new(&vocab, running_bias(&vocab), SimulatedOracle::new(running_target()), cfg).unwrap();
    let e = Assignment::complete(&[1, 1, 1, 1, 2, 3, 4, 5]);
    let found = acq.find_all_cons(&e, &VarSet::full(8), &[]).unwrap();
    assert_eq!(found, vec![set(&[0, 1]), set(&[2, 3]), set(&[0, 2])]);
    let learned: Vec<Constraint> = acq.learned().to_vec();
    assert_eq!(learned, vec![neq(0, 1), neq(2, 3), neq(0, 2)]);
    assert!(!acq.collapsed());

    let fac: Vec<&CallRecord> = acq.trace().iter().filter(|r| r.routine == Routine::FindAllCons).collect();
    let row = |label: &str| *fac.iter().find(|r| r.label == label).unwrap_or_else(|| panic!("no call {label}"));
    let scopes = |v: &[&[Var]]| v.iter().map(|s| s.to_vec()).collect::<Vec<_>>();
    let ret = |v: &[&[Var]]| Some(CallReturn::Scopes(scopes(v)));
    let all: Vec<Var> = (0..8).collect();

    let r0 = row("0");
    assert_eq!((r0.y.clone(), r0.asked, r0.scopes.clone()), (all.clone(), Some(false), vec![]));
    assert_eq!(r0.returned, ret(&[&[0, 1], &[2, 3], &[0, 2]]));
    let r1 = row("1");
    assert_eq!((r1.y.clone(), r1.asked, r1.scopes.clone()), (all.clone(), None, scopes(&[&[0, 1]])));
    assert_eq!(r1.returned, ret(&[&[2, 3], &[0, 2]]));
    let r11 = row("1.1");
    assert_eq!((r11.y.clone(), r11.asked), ((1..8).collect(), Some(false)));
    assert_eq!(r11.returned, ret(&[&[2, 3]]));
    let r111 = row("1.1.1");
    assert_eq!((r111.y.clone(), r111.asked, r111.scopes.clone()), ((1..8).collect(), None, scopes(&[&[2, 3]])));
    assert_eq!(r111.returned, ret(&[]));
    let r12 = row("1.2");
    assert_eq!((r12.y.clone(), r12.asked, r12.scopes.clone()), (vec![0, 2, 3, 4, 5, 6, 7], None, scopes(&[&[2, 3]])));
    assert_eq!(r12.returned, ret(&[&[0, 2]]));
    let r121 = row("1.2.1");
    assert_eq!((r121.y.clone(), r121.asked), (vec![0, 3, 4, 5, 6, 7], Some(true)));
    assert_eq!(r121.returned, ret(&[]));
    let r122 = row("1.2.2");
    assert_eq!((r122.y.clone(), r122.asked), (vec![0, 2, 4, 5, 6, 7], Some(false)));
    assert_eq!(r122.returned, ret(&[&[0, 2]]));
}

#[test]
fn find_all_cons_nothing_fresh_returns_immediately() {
    let vocab = running_vocab();
    let mut acq = acquirer(&vocab);
    let e = Assignment::complete(&[1, 1, 3, 4, 5, 6, 7, 8]);
    let found = acq.find_all_cons(&e, &VarSet::full(8), &[set(&[0, 1])]).unwrap();
    assert!(found.is_empty());
    assert!(acq.log().is_empty());
}

fn run_running(algorithm: Algorithm, findscope: FindScopeVariant, mode: QGenMode) -> AcquisitionOutcome {
    let vocab = running_vocab();
    let mut cfg = fast_config();
    cfg.trace = false;
    cfg.algorithm = algorithm;
    cfg.findscope = findscope;
    cfg.search.mode = mode;
    cfg.search.var_heuristic = VarHeuristic::Bdeg;
    cfg.search.val_heuristic = ValHeuristic::MaxV;
    Acquirer::new(&vocab, running_bias(&vocab), SimulatedOracle::new(running_target()), cfg).unwrap().run().unwrap()
}

#[test]
fn every_algorithm_learns_the_running_example() {
    for algorithm in [Algorithm::QuAcq, Algorithm::MultiAcq, Algorithm::MQuAcq] {
        for fs in [FindScopeVariant::V1, FindScopeVariant::V2] {
            for mode in [QGenMode::MaxComplete, QGenMode::MaxBPartial] {
                let out = run_running(algorithm, fs, mode);
                assert_eq!(out.status, Status::Converged, "{algorithm:?} {fs:?} {mode:?}");
                let mut learned = out.learned.to_vec();
                learned.sort();
                let mut target = running_target();
                target.sort();
                assert_eq!(learned, target, "{algorithm:?} {fs:?} {mode:?}");
                assert_eq!(out.metrics.total_queries, out.log.len());
                assert_eq!(out.metrics.learned_size, 3);
                assert_eq!(out.curve.len(), 3);
                assert!(out.metrics.time_to_last_query <= out.metrics.total_time);
            }
        }
    }
}

#[test]
fn unsatisfiable_target_collapses() {
    // x0 = x1 and x0 ≠ x1 cannot both hold
    let vocab = Vocabulary::uniform(2, 1, 2).unwrap();
    let lang = [RelationKind::Eq, RelationKind::Neq].map(Relation::plain);
    let bias = Bias::from_language(&vocab, &lang);
    let target = vec![Constraint::binary(RelationKind::Eq, 0, 1), Constraint::binary(RelationKind::Neq, 0, 1)];
    for algorithm in [Algorithm::QuAcq, Algorithm::MultiAcq, Algorithm::MQuAcq] {
        let mut cfg = fast_config();
        cfg.algorithm = algorithm;
        let out = Acquirer::new(&vocab, bias.clone(), SimulatedOracle::new(target.clone()), cfg).unwrap().run().unwrap();
        assert_eq!(out.status, Status::Collapse, "{algorithm:?}");
    }
}

#[test]
fn background_constraints_start_learned() {
    let vocab = running_vocab();
    let mut cfg = fast_config();
    cfg.background = vec![neq(0, 1)];
    let acq = Acquirer::new(&vocab, running_bias(&vocab), SimulatedOracle::new(running_target()), cfg).unwrap();
    assert!(acq.learned().contains(&neq(0, 1)));
    assert!(!acq.bias().contains(&neq(0, 1)));
}

#[test]
fn oracle_abort_surfaces_as_error() {
    let vocab = running_vocab();
    let oracle = crate::oracle::ScriptedOracle::new([false]);
    let acq = Acquirer::new(&vocab, running_bias(&vocab), oracle, fast_config()).unwrap();
    assert_eq!(acq.run().unwrap_err(), AcquisitionError::Oracle(OracleError::Aborted));
}

#[test]
fn bad_cutoffs_are_rejected() {
    let vocab = running_vocab();
    let mut cfg = fast_config();
    cfg.search.cut_min = Duration::from_secs(2);
    cfg.search.cut_max = Duration::from_secs(1);
    let err = Acquirer::new(&vocab, running_bias(&vocab), SimulatedOracle::new(vec![]), cfg).err().unwrap();
    assert!(matches!(err, AcquisitionError::Config(_)));
}

use std::time::Duration;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use acqlab_core::acquisition::{
    run, Acquirer, AcquisitionConfig, AcquisitionOutcome, Algorithm, FindScopeVariant, Status,
};
use acqlab_core::model::{Assignment, Bias, Constraint, Instance, Relation, RelationKind, VarSet, Vocabulary};
use acqlab_core::oracle::{QuerySite, SimulatedOracle};
use acqlab_core::solver::{QGenMode, SearchConfig, Solver};

const KINDS: [RelationKind; 4] = [RelationKind::Eq, RelationKind::Neq, RelationKind::Gt, RelationKind::Lt];

fn language() -> Vec<Relation> {
    KINDS.map(Relation::plain).to_vec()
}

/// A random satisfiable binary target over `n` variables with domain `1..=d`.
fn random_instance(n: usize, d: i64, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vocab = Vocabulary::uniform(n, 1, d).unwrap();
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    pairs.shuffle(&mut rng);
    let want = rng.gen_range(1..=pairs.len().min(2 * n));
    let mut solver = Solver::new(SearchConfig::default());
    let mut target = Vec::new();
    for (a, b) in pairs.into_iter().take(want) {
        let c = Constraint::binary(*KINDS.choose(&mut rng).unwrap(), a, b);
        target.push(c);
        if solver.solve(&vocab, &target).unwrap().is_none() {
            target.pop();
        }
    }
    Instance::new("random", vocab, language(), Some(target), None).unwrap()
}

fn config(algorithm: Algorithm, findscope: FindScopeVariant, mode: QGenMode, seed: u64) -> AcquisitionConfig {
    AcquisitionConfig {
        algorithm,
        findscope,
        search: SearchConfig {
            cut_min: Duration::from_millis(20),
            cut_max: Duration::from_millis(100),
            rng_seed: seed,
            mode,
            ..SearchConfig::default()
        },
        restart_cutoff: Duration::from_millis(100),
        ..AcquisitionConfig::default()
    }
}

fn acquire(inst: &Instance, cfg: AcquisitionConfig) -> AcquisitionOutcome {
    run(inst, SimulatedOracle::new(inst.target().to_vec()), cfg).unwrap()
}

const SETUPS: [(Algorithm, FindScopeVariant, QGenMode); 6] = [
    (Algorithm::QuAcq, FindScopeVariant::V1, QGenMode::MaxComplete),
    (Algorithm::QuAcq, FindScopeVariant::V2, QGenMode::MaxComplete),
    (Algorithm::MultiAcq, FindScopeVariant::V1, QGenMode::MaxComplete),
    (Algorithm::MQuAcq, FindScopeVariant::V1, QGenMode::MaxComplete),
    (Algorithm::MQuAcq, FindScopeVariant::V2, QGenMode::MaxComplete),
    (Algorithm::MQuAcq, FindScopeVariant::V2, QGenMode::MaxBPartial),
];

fn project(e: &Assignment, vars: &[usize]) -> Assignment {
    e.project(&VarSet::from_vars(e.width(), vars.iter().copied()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn runs_are_sound_minimal_and_irredundant(n in 4usize..=7, d in 2i64..=4, seed in any::<u64>()) {
        let inst = random_instance(n, d, seed);
        let oracle = SimulatedOracle::new(inst.target().to_vec());
        let mut solver = Solver::new(SearchConfig::default());
        for (algo, fs, mode) in SETUPS {
            let out = acquire(&inst, config(algo, fs, mode, seed));
            prop_assert_ne!(out.status, Status::Collapse);

            // every scope is negative and every strict sub-scope obtained by dropping one variable is positive
            for rec in &out.scopes {
                prop_assert!(!oracle.classify(&project(&rec.example, &rec.scope)));
                for &x in &rec.scope {
                    let rest: Vec<usize> = rec.scope.iter().copied().filter(|&v| v != x).collect();
                    prop_assert!(oracle.classify(&project(&rec.example, &rest)), "{algo:?} scope {:?} not minimal", rec.scope);
                }
            }

            // each learned constraint follows from the target
            let learned = out.learned.to_vec();
            let sound = solver.entails_all(&inst.vocab, inst.target(), &learned, Duration::from_secs(5));
            prop_assert!(sound.holds(), "{algo:?}: {sound:?}");

            // main-loop queries are accepted by the network learned so far and rejected by the bias
            for (j, r) in out.log.records().iter().enumerate() {
                if r.site != QuerySite::Main {
                    continue;
                }
                prop_assert!(r.kappa > 0);
                let known = out.curve.iter().take_while(|p| p.queries <= j).count();
                let e = r.assignment();
                prop_assert!(learned[..known].iter().all(|c| !c.is_violated_by(&e)), "{algo:?}: query {j} already rejected");
            }

            prop_assert_eq!(out.metrics.total_queries, out.log.len());
            prop_assert_eq!(out.metrics.complete_queries, out.log.records().iter().filter(|r| r.complete).count());
        }
    }

    #[test]
    fn converged_networks_match_the_target(n in 4usize..=7, d in 2i64..=4, seed in any::<u64>()) {
        let inst = random_instance(n, d, seed);
        let mut solver = Solver::new(SearchConfig::default());
        for (algo, fs, mode) in SETUPS {
            let out = acquire(&inst, config(algo, fs, mode, seed));
            if out.status != Status::Converged {
                continue;
            }
            let (fwd, back) = solver.equivalence(&inst.vocab, &out.learned.to_vec(), inst.target(), Duration::from_secs(5));
            prop_assert!(fwd.holds() && back.holds(), "{algo:?} {fs:?} {mode:?}: {fwd:?} / {back:?}");
        }
    }

    #[test]
    fn query_counts_stay_within_the_bound(n in 4usize..=8, d in 2i64..=4, seed in any::<u64>()) {
        let inst = random_instance(n, d, seed);
        let log_n = (n as f64).log2().ceil() as usize;
        let arity = 2;
        let gamma = inst.language.len();
        for algo in [Algorithm::QuAcq, Algorithm::MQuAcq] {
            for fs in [FindScopeVariant::V1, FindScopeVariant::V2] {
                let out = acquire(&inst, config(algo, fs, QGenMode::MaxComplete, seed));
                let found = out.scopes.len().max(out.learned.len());
                let bound = found * (2 * arity * log_n + gamma) + inst.bias.len();
                prop_assert!(out.log.len() <= 2 * bound, "{algo:?} {fs:?}: {} > 2 * {bound}", out.log.len());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn answers_are_monotone_under_projection(
        n in 3usize..=8,
        seed in any::<u64>(),
        keep in proptest::collection::vec(any::<bool>(), 8),
        drop in proptest::collection::vec(any::<bool>(), 8),
    ) {
        let inst = random_instance(n, 3, seed);
        let oracle = SimulatedOracle::new(inst.target().to_vec());
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let e = Assignment::complete(&(0..n).map(|_| rng.gen_range(1..=3)).collect::<Vec<_>>());
        let y: Vec<usize> = (0..n).filter(|&v| keep[v]).collect();
        let sub: Vec<usize> = y.iter().copied().filter(|&v| !drop[v]).collect();
        let (e_y, e_sub) = (project(&e, &y), project(&e, &sub));
        if oracle.classify(&e_y) {
            prop_assert!(oracle.classify(&e_sub));
        }
        if !oracle.classify(&e_sub) {
            prop_assert!(!oracle.classify(&e_y));
        }
        let bias = &inst.bias;
        let (k_y, k_sub) = (bias.kappa(&e_y), bias.kappa(&e_sub));
        prop_assert!(k_sub.iter().all(|c| k_y.contains(c)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn both_scope_finders_return_the_same_scope(n in 3usize..=10, d in 2i64..=4, seed in any::<u64>()) {
        let inst = random_instance(n, d, seed);
        let oracle = SimulatedOracle::new(inst.target().to_vec());
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 2);
        let e = (0..200)
            .map(|_| Assignment::complete(&(0..n).map(|_| rng.gen_range(1..=d)).collect::<Vec<_>>()))
            .find(|e| !oracle.classify(e));
        let Some(e) = e else { return Ok(()) };
        let scope_with = |fs| {
            let mut cfg = config(Algorithm::QuAcq, fs, QGenMode::MaxComplete, seed);
            cfg.trace = false;
            let bias = Bias::from_language(&inst.vocab, &inst.language);
            let mut acq = Acquirer::new(&inst.vocab, bias, SimulatedOracle::new(inst.target().to_vec()), cfg).unwrap();
            let s = acq.find_scope_top(&e, &VarSet::full(n)).unwrap();
            (s.to_vec(), acq.log().len())
        };
        let (s1, q1) = scope_with(FindScopeVariant::V1);
        let (s2, q2) = scope_with(FindScopeVariant::V2);
        prop_assert_eq!(s1, s2);
        prop_assert!(q2 <= q1);
    }
}

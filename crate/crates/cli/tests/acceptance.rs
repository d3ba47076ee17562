//! Acceptance suite. One test per criterion; each prints a PASS line when
//! its assertions hold (run with `-- --nocapture` to see them).
//!
//! Criteria:
//!   1. load factors of the two reference plans on the bundled instance
//!   2. cost additivity on random plans over random instances
//!   3. GA best-of-20 equals the exact oracle on 50 small instances (>= 90%)
//!   4. GA best-of-20 equals the exact oracle on the bundled instance
//!   5. arrival-time chain and penalty-iff-outside-window on random routes
//!   6. operator closure over 100k applications
//!   7. byte-identical artifacts from identical solve invocations
//!   8. monotone best-cost traces in every solver run

use std::process::Command;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use freshroute_core::chromosome::{crossover, invert, mutate, Chromosome};
use freshroute_core::evaluator::{evaluate, penalty_cost, propagate_times};
use freshroute_core::fixtures::{after_plan, before_plan, eight_stores};
use freshroute_core::generator::{generate, GenParams};
use freshroute_core::model::{Instance, RoutePlan, Violation};
use freshroute_core::oracle::enumerate_optimum;
use freshroute_core::solver::{solve, GaConfig, SolveReport};

const COST_TOLERANCE: f64 = 1e-6;
const TIME_TOLERANCE: f64 = 1e-9;

fn small_instance(index: u64) -> Instance {
    let store_count = 4 + (index as usize % 4);
    generate(&GenParams {
        store_count,
        vehicle_count: 2,
        seed: 1000 + index,
        ..GenParams::default()
    })
    .expect("generator parameters are valid")
}

fn random_plan(instance: &Instance, seed: u64) -> RoutePlan {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Chromosome::random(
        instance.store_count(),
        instance.fleet.vehicle_count,
        &mut rng,
    )
    .decode()
}

fn assert_monotone_trace(report: &SolveReport, context: &str) {
    for pair in report.trace.windows(2) {
        assert!(
            pair[1].best_cost <= pair[0].best_cost,
            "{context}: best cost rose from {} to {} at generation {}",
            pair[0].best_cost,
            pair[1].best_cost,
            pair[1].generation
        );
    }
}

/// Best feasible total over 20 seeded runs, with every trace checked for
/// monotonicity on the way.
fn ga_best_of_20(instance: &Instance, context: &str) -> f64 {
    let mut best = f64::INFINITY;
    for seed in 1..=20 {
        let report = solve(
            instance,
            &GaConfig {
                rng_seed: seed,
                ..GaConfig::default()
            },
        )
        .expect("instance validates");
        assert_monotone_trace(&report, context);
        if report.best_cost.feasible {
            best = best.min(report.best_cost.total);
        }
    }
    assert!(
        best.is_finite(),
        "{context}: no seed produced a feasible plan"
    );
    best
}

#[test]
fn criterion_1_load_factor_reproduction() {
    let start = std::time::Instant::now();
    let instance = eight_stores();

    let before = evaluate(&instance, &before_plan(&instance));
    let factors: Vec<f64> = before
        .per_vehicle
        .iter()
        .map(|v| (v.load_factor * 100.0).round())
        .collect();
    assert_eq!(factors, vec![60.0, 110.0]);
    assert!((before.per_vehicle[0].load_factor - 0.60).abs() < TIME_TOLERANCE);
    assert!((before.per_vehicle[1].load_factor - 1.10).abs() < TIME_TOLERANCE);
    assert!(!before.feasible);
    assert_eq!(before.violations.len(), 1);
    match &before.violations[0] {
        Violation::CapacityExceeded {
            vehicle: 2,
            load,
            capacity,
        } => {
            assert!((load - 2.2).abs() < TIME_TOLERANCE);
            assert_eq!(*capacity, 2.0);
        }
        other => panic!("expected the 110% route flagged for capacity, got {other:?}"),
    }

    let after = evaluate(&instance, &after_plan(&instance));
    let factors: Vec<f64> = after
        .per_vehicle
        .iter()
        .map(|v| (v.load_factor * 100.0).round())
        .collect();
    assert_eq!(factors, vec![90.0, 80.0]);
    assert!((after.per_vehicle[0].load_factor - 0.90).abs() < TIME_TOLERANCE);
    assert!((after.per_vehicle[1].load_factor - 0.80).abs() < TIME_TOLERANCE);
    assert!(after.feasible);

    assert!(
        start.elapsed().as_secs() < 1,
        "criterion 1 must run in under a second"
    );
    println!("PASS criterion 1: reference plans evaluate to 60%/110% and 90%/80% load factors");
}

#[test]
fn criterion_2_cost_identity() {
    let mut checked = 0;
    for i in 0..100u64 {
        let instance = small_instance(i);
        for p in 0..10u64 {
            let plan = random_plan(&instance, i * 100 + p);
            let cost = evaluate(&instance, &plan);
            // Identical summation order: vehicle order, transport then
            // penalty, so equality is exact, not approximate.
            let transport: f64 = cost.per_vehicle.iter().map(|v| v.transport_cost).sum();
            let penalty: f64 = cost.per_vehicle.iter().map(|v| v.penalty_cost).sum();
            assert_eq!(cost.total_transport, transport);
            assert_eq!(cost.total_penalty, penalty);
            assert_eq!(cost.total, cost.total_transport + cost.total_penalty);
            checked += 1;
        }
    }
    assert_eq!(checked, 1000);
    println!("PASS criterion 2: cost identities exact on {checked} random plans");
}

#[test]
fn criterion_3_oracle_equivalence_on_small_instances() {
    let mut matched = 0;
    for i in 0..50u64 {
        let instance = small_instance(i);
        let oracle = enumerate_optimum(&instance, 10_000_000).expect("small instance");
        assert!(
            oracle.optimum_is_feasible,
            "generated instances admit feasible plans"
        );
        let ga = ga_best_of_20(&instance, &format!("criterion 3 instance {i}"));
        assert!(
            ga >= oracle.optimum_cost.total - COST_TOLERANCE,
            "instance {i}: GA total {ga} beats the exact optimum {} - impossible",
            oracle.optimum_cost.total
        );
        if (ga - oracle.optimum_cost.total).abs() < COST_TOLERANCE {
            matched += 1;
        }
    }
    assert!(
        matched >= 45,
        "GA matched the oracle on {matched}/50 instances; the bar is 45 (90%)"
    );
    println!("PASS criterion 3: GA best-of-20 matched the exact oracle on {matched}/50 small instances, never beating it");
}

#[test]
fn criterion_4_fixture_oracle_vs_ga() {
    let instance = eight_stores();
    let oracle = enumerate_optimum(&instance, 10_000_000).expect("fixture is enumerable");
    assert!(oracle.optimum_is_feasible);
    // Count cross-checked against the closed form in oracle::plan_count.
    assert_eq!(oracle.plans_enumerated, 181_440);

    let ga = ga_best_of_20(&instance, "criterion 4");
    assert!(
        (ga - oracle.optimum_cost.total).abs() < COST_TOLERANCE,
        "GA best-of-20 {ga} vs oracle optimum {}",
        oracle.optimum_cost.total
    );
    assert!(ga >= oracle.optimum_cost.total - COST_TOLERANCE);
    println!(
        "PASS criterion 4: GA best-of-20 equals the oracle optimum {:.4} over {} enumerated plans",
        oracle.optimum_cost.total, oracle.plans_enumerated
    );
}

#[test]
fn criterion_5_arrival_propagation() {
    let mut routes_checked = 0;
    for i in 0..200u64 {
        let instance = small_instance(i);
        for p in 0..3u64 {
            let plan = random_plan(&instance, 0x5000 + i * 10 + p);
            let timelines: Vec<_> = plan
                .routes
                .iter()
                .map(|r| propagate_times(&instance, r))
                .collect();
            for (route, timeline) in plan.routes.iter().zip(&timelines) {
                for (m, pair) in timeline.stops.windows(2).enumerate() {
                    let hop = instance.travel_time(route[m], route[m + 1]);
                    assert!(
                        (pair[1].arrival - (pair[0].departure + hop)).abs() < TIME_TOLERANCE,
                        "arrival chain broke on instance {i}"
                    );
                }
                routes_checked += 1;
            }
            let penalty = penalty_cost(&instance, &timelines);
            let all_inside = timelines.iter().flat_map(|t| &t.stops).all(|s| {
                let store = instance.store(s.store_id);
                store.accept_earliest as f64 <= s.arrival && s.arrival <= store.accept_latest as f64
            });
            assert_eq!(
                penalty == 0.0,
                all_inside,
                "penalty-window equivalence on instance {i}"
            );
        }
    }
    assert!(routes_checked >= 1000);
    println!("PASS criterion 5: arrival chain exact to 1e-9 and penalty-iff-outside-window on {routes_checked} routes");
}

#[test]
fn criterion_6_operator_closure() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC10);
    let mut applications = 0;
    let reference: Vec<Vec<usize>> = (2..=10).map(|n| (1..=n).collect()).collect();
    while applications < 100_000 {
        let n = 2 + (applications % 9);
        let k = 1 + (applications % 3);
        let a = Chromosome::random(n, k, &mut rng);
        let b = Chromosome::random(n, k, &mut rng);
        let (ca, cb) = crossover(&a, &b, &mut rng);
        let m = mutate(&ca, &mut rng, 0.5);
        let v = invert(&cb, &mut rng, 0.5);
        for c in [&ca, &cb, &m, &v] {
            let mut tour = c.tour.clone();
            tour.sort_unstable();
            assert_eq!(
                tour,
                reference[n - 2],
                "store multiset broken at application {applications}"
            );
            assert_eq!(
                c.cuts.len(),
                k - 1,
                "separator count broken at application {applications}"
            );
        }
        applications += 4;
    }
    println!("PASS criterion 6: {applications} operator applications preserved permutation and separators");
}

#[test]
fn criterion_7_solve_determinism() {
    let exe = env!("CARGO_BIN_EXE_freshroute");
    let instance_path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../core/data/eight_stores.instance"
    );
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();

    let mut outputs = Vec::new();
    for dir in [&dir_a, &dir_b] {
        let plan = dir.path().join("best.plan");
        let trace = dir.path().join("trace.csv");
        let summary = dir.path().join("summary.txt");
        let status = Command::new(exe)
            .args([
                "solve",
                "-i",
                instance_path,
                "--seed",
                "5",
                "--restarts",
                "4",
            ])
            .arg("--out-plan")
            .arg(&plan)
            .arg("--out-trace")
            .arg(&trace)
            .arg("--out-summary")
            .arg(&summary)
            .output()
            .expect("solver binary runs");
        assert!(status.status.success(), "solve failed: {status:?}");
        outputs.push((
            std::fs::read(&plan).unwrap(),
            std::fs::read(&trace).unwrap(),
            std::fs::read(&summary).unwrap(),
            status.stdout,
        ));
    }
    assert_eq!(
        outputs[0].0, outputs[1].0,
        "plan files differ between identical runs"
    );
    assert_eq!(
        outputs[0].1, outputs[1].1,
        "trace files differ between identical runs"
    );
    assert_eq!(
        outputs[0].2, outputs[1].2,
        "summary files differ between identical runs"
    );
    println!(
        "PASS criterion 7: identical invocations wrote byte-identical plan, trace and summary"
    );
}

#[test]
fn criterion_8_monotone_convergence() {
    // Criteria 3 and 4 already assert monotonicity inside ga_best_of_20;
    // this run covers a spread of configurations explicitly.
    let mut runs = 0;
    for i in 0..10u64 {
        let instance = small_instance(i);
        for seed in 1..=5 {
            let report = solve(
                &instance,
                &GaConfig {
                    rng_seed: seed,
                    max_generations: 200,
                    ..GaConfig::default()
                },
            )
            .expect("instance validates");
            assert_monotone_trace(&report, &format!("criterion 8 instance {i} seed {seed}"));
            runs += 1;
        }
    }
    let fixture = eight_stores();
    for seed in 1..=20 {
        let report = solve(
            &fixture,
            &GaConfig {
                rng_seed: seed,
                ..GaConfig::default()
            },
        )
        .unwrap();
        assert_monotone_trace(&report, &format!("criterion 8 fixture seed {seed}"));
        runs += 1;
    }
    println!("PASS criterion 8: best-cost trace non-increasing in all {runs} solver runs");
}

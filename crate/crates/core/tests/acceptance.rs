//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its runtime (a failed test is reported by the harness). Seeds are fixed,
//! so every statistical assertion is deterministic.
//!
//! Run with `cargo test -p uc-core --test acceptance -- --nocapture`.

use std::sync::{Mutex, MutexGuard};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

// The criteria carry wall-clock limits and several saturate the shared
// rayon pool, so they take turns.
static EXCLUSIVE: Mutex<()> = Mutex::new(());

fn exclusive() -> MutexGuard<'static, ()> {
    EXCLUSIVE.lock().unwrap_or_else(|e| e.into_inner())
}

use uc_core::games::{
    analyze_0n, classify_1v1n, differentials_0n, feasibility_1n, min_pv_0n, payoff_matrix_1v1,
    solve_1v1, Feasibility1n, ProbValue, RowKind,
};
use uc_core::majority::majority_monotonicity;
use uc_core::mechanism::{
    design_contractor_tunable_n, design_contractor_tunable_s, design_contractor_tunable_wpc,
    design_seti, emit_certificate, MechanismPlan, Predicted, TunedValues,
};
use uc_core::oracle::{
    enumerate_pure_equilibria, equilibria, mixed_uniqueness_check, search_mixed_equilibria,
    verify_unique, WitnessKind,
};
use uc_core::payoff::{
    GameKind, GroupPartition, PayoffParameters, RewardModel, ScenarioConstraints, StrategyProfile,
    Tunable,
};
use uc_core::sim::{deviation_gain, run_protocol, SimConfig};

const TOL: f64 = 1e-9;

fn finish(criterion: &str, start: Instant, limit: Duration) {
    let elapsed = start.elapsed();
    assert!(
        elapsed < limit,
        "criterion {criterion} exceeded its runtime limit: {elapsed:?} >= {limit:?}"
    );
    println!("acceptance {criterion}: PASS in {elapsed:?}");
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.gen::<f64>()
}

fn fuzz_params(rng: &mut ChaCha8Rng) -> PayoffParameters {
    PayoffParameters {
        wpc: uniform(rng, 0.05, 5.0),
        wct: uniform(rng, 0.05, 5.0),
        wba: uniform(rng, 0.05, 5.0),
        mpw: uniform(rng, 0.05, 5.0),
        mca: uniform(rng, 0.05, 5.0),
        mcv: uniform(rng, 0.05, 5.0),
        mbr: uniform(rng, 0.0, 10.0),
    }
}

fn manual_plan(game: GameKind, model: RewardModel, n: u64, pv: f64) -> MechanismPlan {
    MechanismPlan {
        game,
        model,
        n,
        pv,
        tuned: TunedValues::default(),
        predicted: Predicted {
            p_wrong: 0.0,
            u_master: 0.0,
            u_worker: 0.0,
        },
        rationale: "acceptance".into(),
    }
}

/// Closed-form fully mixed probabilities per reward model.
fn mixed_closed_forms(p: &PayoffParameters, model: RewardModel) -> (f64, f64) {
    let pc = match model {
        RewardModel::Rm | RewardModel::Ra => p.mcv / (p.mca + p.mpw),
        RewardModel::Rnone => (p.mcv + p.mca) / (p.mca + p.mpw),
    };
    (pc, p.wct / (p.wba + p.wpc))
}

/// Independent re-statement of each row's printed side conditions.
fn conditions_hold(kind: RowKind, model: RewardModel, p: &PayoffParameters) -> bool {
    let reward_all = matches!(model, RewardModel::Rm | RewardModel::Ra);
    let master_pc1 = if reward_all { p.mpw + p.mca } else { p.mpw };
    match kind {
        RowKind::FullyMixed => true,
        RowKind::HonestPvRange | RowKind::HonestAlwaysVerify => {
            let master_free = p.mcv.abs() <= TOL && (reward_all || p.mca.abs() <= TOL);
            let worker_side = kind == RowKind::HonestPvRange || p.wct <= p.wba + p.wpc + TOL;
            master_free && worker_side
        }
        RowKind::AllCheatPvRange => (p.mcv - master_pc1).abs() <= TOL,
        RowKind::PcRangeNoVerify => p.wct.abs() <= TOL,
        RowKind::PcRangeAlwaysVerify => (p.wct - (p.wba + p.wpc)).abs() <= TOL,
        RowKind::AllCheatAlwaysVerify => p.mcv <= master_pc1 + TOL && p.wct >= p.wba + p.wpc - TOL,
        RowKind::AllCheatNeverVerify => p.mcv >= master_pc1 - TOL,
        RowKind::HonestNeverVerify => false, // never produced by classify
    }
}

fn range_of(v: &ProbValue) -> (f64, f64) {
    match *v {
        ProbValue::Point { value } => (value, value),
        ProbValue::Range { lo, hi, .. } => (lo, hi),
    }
}

#[test]
fn criterion_01_table_row_reproduction() {
    let _turn = exclusive();
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut rows_checked = 0usize;
    let mut mixed_checked = 0usize;
    for idx in 0..50 {
        let mut p = fuzz_params(&mut rng);
        // Mix in the equality regimes so the interval rows get exercised.
        match idx % 10 {
            1 => p.wct = 0.0,
            3 => p.mcv = 0.0,
            5 => p.mcv = p.mpw + p.mca,
            7 => p.wct = p.wba + p.wpc,
            9 => p.mcv = p.mpw,
            0 => {
                p.mcv = 0.0;
                p.mca = 0.0;
            }
            _ => {}
        }
        for model in RewardModel::ALL {
            let (pc_star, pv_star) = mixed_closed_forms(&p, model);
            for n in [1u64, 3, 5] {
                let rows = classify_1v1n(&p, model, n);
                for row in &rows {
                    rows_checked += 1;
                    assert!(
                        conditions_hold(row.kind, model, &p),
                        "{model:?} n={n} {:?} on {p:?}",
                        row.kind
                    );
                    assert!((0.0..=1.0).contains(&row.p_wrong));
                    let (pc_lo, pc_hi) = range_of(&row.pc);
                    let (pv_lo, pv_hi) = range_of(&row.pv);
                    match row.kind {
                        RowKind::FullyMixed => {
                            mixed_checked += 1;
                            assert!((pc_lo - pc_star).abs() < TOL, "pc {pc_lo} vs {pc_star}");
                            assert!((pv_lo - pv_star).abs() < TOL, "pv {pv_lo} vs {pv_star}");
                            assert!(pc_star > 0.0 && pc_star < 1.0);
                            assert!(pv_star > 0.0 && pv_star < 1.0);
                            // Both players indifferent at the point, checked
                            // through the bilinear payoff matrix.
                            let m = payoff_matrix_1v1(&p, model);
                            assert!(m.worker_cheat_gain(pv_star).abs() < TOL);
                            assert!(m.master_verify_gain(pc_star).abs() < TOL);
                        }
                        RowKind::HonestPvRange => {
                            assert!((pv_lo - pv_star.clamp(0.0, 1.0)).abs() < TOL);
                            assert!((pv_hi - 1.0).abs() < TOL);
                        }
                        RowKind::AllCheatPvRange => {
                            assert!(pv_lo.abs() < TOL);
                            assert!((pv_hi - pv_star.clamp(0.0, 1.0)).abs() < TOL);
                        }
                        RowKind::PcRangeNoVerify => {
                            assert!(pc_lo.abs() < TOL);
                            assert!((pc_hi - pc_star.clamp(0.0, 1.0)).abs() < TOL);
                        }
                        RowKind::PcRangeAlwaysVerify => {
                            assert!((pc_lo - pc_star.clamp(0.0, 1.0)).abs() < TOL);
                            assert!((pc_hi - 1.0).abs() < TOL);
                        }
                        _ => {}
                    }
                }
            }
        }
    }
    assert!(rows_checked > 400, "only {rows_checked} rows came back");
    assert!(mixed_checked > 0, "no fully mixed row exercised");
    finish("1 (table row reproduction)", start, Duration::from_secs(1));
}

#[test]
fn criterion_02_analytical_empirical_agreement() {
    let _turn = exclusive();
    let start = Instant::now();
    let p = PayoffParameters {
        wpc: 2.0,
        wct: 1.0,
        wba: 2.0,
        mpw: 3.0,
        mca: 1.0,
        mcv: 1.0,
        mbr: 5.0,
    };
    let trials = 100_000u64;
    for n in [1u64, 3, 5] {
        let per_n = Instant::now();
        let rows = classify_1v1n(&p, RewardModel::Rm, n);
        let row = rows
            .iter()
            .find(|r| r.kind == RowKind::FullyMixed)
            .expect("fully mixed row");
        assert!((row.pc.eval_point() - 0.25).abs() < TOL);
        assert!((row.pv.eval_point() - 0.25).abs() < TOL);
        if n == 3 {
            // Binomial enumeration at pc = 1/4: P_C = 0.15625.
            assert!((row.p_wrong - 0.1171875).abs() < TOL);
        }

        let cfg = SimConfig {
            params: p,
            plan: manual_plan(GameKind::G1v1n, RewardModel::Rm, n, 0.25),
            partition: GroupPartition::singletons(n).unwrap(),
            strategy: StrategyProfile::uniform(n as usize, 0.25, 0.25).unwrap(),
            trials,
            seed: 20_240 + n,
            deviation: None,
        };
        let report = run_protocol(&cfg).unwrap();
        let se_pw = (row.p_wrong * (1.0 - row.p_wrong) / trials as f64).sqrt();
        assert!(
            (report.empirical_p_wrong - row.p_wrong).abs() <= 3.0 * se_pw,
            "n={n}: p_wrong {} vs {}",
            report.empirical_p_wrong,
            row.p_wrong
        );
        assert!(
            (report.mean_u_master - row.u_master).abs() <= report.u_master_radius,
            "n={n}: u_master {} +- {} vs {}",
            report.mean_u_master,
            report.u_master_radius,
            row.u_master
        );
        for stat in &report.worker_groups {
            assert!(
                (stat.mean_utility - row.u_worker).abs() <= stat.radius,
                "n={n}: worker {} +- {} vs {}",
                stat.mean_utility,
                stat.radius,
                row.u_worker
            );
        }
        assert!(per_n.elapsed() < Duration::from_secs(10), "n={n} too slow");
    }
    finish(
        "2 (analytical-empirical agreement)",
        start,
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_03_seti_mechanism() {
    let _turn = exclusive();
    let start = Instant::now();
    let p = PayoffParameters {
        wpc: 1.0,
        wct: 0.0,
        wba: 1.0,
        mpw: 3.0,
        mca: 1.0,
        mcv: 1.0,
        mbr: 5.0,
    };
    let constraints = ScenarioConstraints::seti(0.01).unwrap();
    let plan = design_seti(&p, &constraints).unwrap();
    assert_eq!(plan.game, GameKind::G0n);
    assert_eq!(plan.model, RewardModel::Rnone);
    assert_eq!(plan.n, 1);
    assert_eq!(plan.pv, 0.01);

    let cfg = SimConfig {
        params: p,
        partition: GroupPartition::singletons(1).unwrap(),
        strategy: StrategyProfile::uniform(1, 0.0, plan.pv).unwrap(),
        plan: plan.clone(),
        trials: 1_000_000,
        seed: 303,
        deviation: None,
    };
    let report = run_protocol(&cfg).unwrap();
    assert_eq!(report.empirical_p_wrong, 0.0);
    let expected = p.mbr - plan.pv * (p.mcv + p.mca);
    assert!(
        (report.mean_u_master - expected).abs() <= report.u_master_radius,
        "{} +- {} vs {expected}",
        report.mean_u_master,
        report.u_master_radius
    );

    let cert = emit_certificate(&plan, &p);
    let partition = GroupPartition::singletons(1).unwrap();
    let uniqueness = verify_unique(&cert, &partition, 1.0 / 64.0).unwrap();
    assert!(uniqueness.verified, "{uniqueness:?}");
    finish("3 (seti mechanism)", start, Duration::from_secs(20));
}

#[test]
fn criterion_04_honesty_bound_sharpness() {
    let _turn = exclusive();
    let start = Instant::now();
    let p = PayoffParameters {
        wpc: 2.0,
        wct: 1.0,
        wba: 2.0,
        mpw: 3.0,
        mca: 1.0,
        mcv: 1.0,
        mbr: 5.0,
    };
    let eps = 0.05;
    let bound = min_pv_0n(&p, RewardModel::Ra, 1).unwrap();
    assert!((bound.bound - 0.25).abs() < TOL);
    let partition = GroupPartition::new(vec![1, 1, 1]).unwrap();

    let sim_at = |pv: f64| SimConfig {
        params: p,
        plan: manual_plan(GameKind::G0n, RewardModel::Ra, 3, pv),
        partition: partition.clone(),
        strategy: StrategyProfile::uniform(3, 0.0, pv).unwrap(),
        trials: 200_000,
        seed: 404,
        deviation: None,
    };

    // Above the bound: all-honest is the unique equilibrium and deviating
    // loses beyond three standard errors.
    let above = bound.bound + eps;
    let eqs = equilibria(
        &p,
        RewardModel::Ra,
        GameKind::G0n,
        &partition,
        Some(above),
        1.0 / 32.0,
    )
    .unwrap();
    assert_eq!(eqs.len(), 1, "{eqs:?}");
    assert!(eqs[0].pc_per_group.iter().all(|&x| x == 0.0));
    let gain = deviation_gain(&sim_at(above), 0).unwrap();
    assert!(
        gain.delta < 0.0 && gain.delta + gain.radius < 0.0,
        "above bound: {gain:?}"
    );

    // Below the bound: the same deviation wins beyond three standard errors.
    let below = bound.bound - eps;
    let gain = deviation_gain(&sim_at(below), 0).unwrap();
    assert!(
        gain.delta > 0.0 && gain.delta - gain.radius > 0.0,
        "below bound: {gain:?}"
    );
    finish(
        "4 (honesty bound sharpness)",
        start,
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_05_reward_model_crossover() {
    let _turn = exclusive();
    let start = Instant::now();
    let s = 2.0;
    let (wct, wpc) = (1.0, 2.0);
    let threshold = s * (s / wct - 1.0) * (s / wpc + 1.0); // = 4
    let eps = 1e-3;
    let steps = 150;
    let (lo, hi) = (1.0, 7.0);
    let grid = (hi - lo) / steps as f64;
    let mut prev: Option<(f64, RewardModel)> = None;
    let mut switches = Vec::new();
    for i in 0..=steps {
        let mcv = lo + grid * i as f64;
        let p = PayoffParameters {
            wpc,
            wct,
            wba: s,
            mpw: 2.0 * mcv + 1.0,
            mca: s,
            mcv,
            mbr: 20.0,
        };
        let constraints = ScenarioConstraints::contractor(Tunable::N, Some(s), eps).unwrap();
        let plan = design_contractor_tunable_n(&p, &constraints).unwrap();
        let u_rnone = p.mbr - (eps + wct / s) * (mcv + s);
        let u_ra = p.mbr - (eps + wct / (s + wpc)) * mcv - s;
        let (chosen, other) = match plan.model {
            RewardModel::Rnone => (u_rnone, u_ra),
            RewardModel::Ra => (u_ra, u_rnone),
            RewardModel::Rm => panic!("never emitted"),
        };
        assert!((plan.predicted.u_master - chosen).abs() < TOL);
        // Chosen branch dominates the other up to the margin-driven slack.
        assert!(chosen >= other - eps * (mcv + s) - TOL, "mcv={mcv}");
        if let Some((prev_mcv, prev_model)) = prev {
            if prev_model != plan.model {
                switches.push((prev_mcv, mcv));
            }
        }
        prev = Some((mcv, plan.model));
    }
    assert_eq!(switches.len(), 1, "{switches:?}");
    let (before, after) = switches[0];
    assert!(
        before < threshold + TOL && threshold <= after + grid,
        "switch at ({before}, {after}] vs threshold {threshold}"
    );
    assert!(after - before <= grid + TOL);
    finish("5 (reward-model crossover)", start, Duration::from_secs(5));
}

#[test]
fn criterion_06_majority_monotonicity() {
    let _turn = exclusive();
    let start = Instant::now();
    for i in 0..=10 {
        let pc = i as f64 * 0.05;
        for n in (1..=21).step_by(2) {
            let check = majority_monotonicity(n, pc).unwrap();
            assert!(
                check.p_n_plus_2 <= check.p_n + 1e-12,
                "n={n} pc={pc}: {check:?}"
            );
            assert!(check.holds);
        }
    }
    finish("6 (majority monotonicity)", start, Duration::from_secs(1));
}

#[test]
fn criterion_07_mixed_uniqueness_harness() {
    let _turn = exclusive();
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut cases = Vec::new();
    for model in RewardModel::ALL {
        for _ in 0..1000 {
            let p = fuzz_params(&mut rng);
            let partition = loop {
                let l = rng.gen_range(1..=3usize);
                let sizes: Vec<u32> = (0..l).map(|_| rng.gen_range(1..=5u32)).collect();
                let total: u32 = sizes.iter().sum();
                if total % 2 == 1 && total <= 7 {
                    break GroupPartition::new(sizes).unwrap();
                }
            };
            let pv = uniform(&mut rng, 0.0, 1.0);
            cases.push((model, p, partition, pv));
        }
    }
    cases.par_iter().for_each(|(model, p, partition, pv)| {
        for &size in partition.sizes() {
            assert!(
                differentials_0n(p, *model, size, *pv).ordered,
                "{model:?} {p:?}"
            );
        }
        let verdict = mixed_uniqueness_check(p, *model, partition, *pv, 1.0 / 16.0).unwrap();
        assert!(
            verdict.consistent,
            "{model:?} {p:?} {:?} pv={pv}: {verdict:?}",
            partition.sizes()
        );
    });
    finish(
        "7 (mixed uniqueness harness)",
        start,
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_08_master_in_game_infeasibility() {
    let _turn = exclusive();
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    for _ in 0..200 {
        let p = fuzz_params(&mut rng); // mcv >= 0.05 > 1e-9
        for model in RewardModel::ALL {
            assert!(!feasibility_1n(&p, model).is_feasible(), "{p:?}");
        }
        let mut free_verify = p;
        free_verify.mcv = 0.0;
        assert!(feasibility_1n(&free_verify, RewardModel::Rm).is_feasible());
        assert!(feasibility_1n(&free_verify, RewardModel::Ra).is_feasible());
        assert!(matches!(
            feasibility_1n(&free_verify, RewardModel::Rnone),
            Feasibility1n::Infeasible { .. }
        ));
    }

    // Exact threshold behavior: any verification cost above the equality
    // tolerance is disqualifying, at or below it is not.
    let base = PayoffParameters {
        wpc: 1.0,
        wct: 1.0,
        wba: 1.0,
        mpw: 1.0,
        mca: 0.0,
        mcv: 2e-9,
        mbr: 1.0,
    };
    for model in RewardModel::ALL {
        assert!(!feasibility_1n(&base, model).is_feasible());
    }
    let mut at_tol = base;
    at_tol.mcv = 0.5e-9;
    for model in RewardModel::ALL {
        assert!(feasibility_1n(&at_tol, model).is_feasible());
    }

    // Neither designer ever emits the master-in-game variant when
    // verification costs anything.
    let seti = PayoffParameters {
        wpc: 1.0,
        wct: 0.0,
        wba: 1.0,
        mpw: 3.0,
        mca: 1.0,
        mcv: 1.0,
        mbr: 5.0,
    };
    let plan = design_seti(&seti, &ScenarioConstraints::seti(0.01).unwrap()).unwrap();
    assert_ne!(plan.game, GameKind::G1n);
    for mcv in [0.5, 3.0, 7.0] {
        let p = PayoffParameters {
            wpc: 2.0,
            wct: 1.0,
            wba: 2.0,
            mpw: 2.0 * mcv + 1.0,
            mca: 2.0,
            mcv,
            mbr: 20.0,
        };
        let c = ScenarioConstraints::contractor(Tunable::N, Some(2.0), 1e-3).unwrap();
        assert_ne!(
            design_contractor_tunable_n(&p, &c).unwrap().game,
            GameKind::G1n
        );
        assert_ne!(
            design_contractor_tunable_wpc(&p, &c, 3).unwrap().game,
            GameKind::G1n
        );
        let c_s = ScenarioConstraints::contractor(Tunable::S, None, 1e-3).unwrap();
        if let Ok(out) = design_contractor_tunable_s(&p, &c_s, 3, 0.0) {
            assert_ne!(out.chosen.game, GameKind::G1n);
        }
    }
    finish(
        "8 (master-in-game infeasibility)",
        start,
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_09_oracle_analytic_equivalence() {
    let _turn = exclusive();
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let partition = GroupPartition::singletons(1).unwrap();
    let mut instances = 0;
    while instances < 20 {
        let p = fuzz_params(&mut rng);
        // Keep clear of the equality conditions so the equilibrium set is
        // corners plus at most one interior point.
        let generic = (p.wct - (p.wba + p.wpc)).abs() > 0.02
            && (p.mcv - (p.mpw + p.mca)).abs() > 0.02
            && (p.mcv - p.mpw).abs() > 0.02;
        if !generic {
            continue;
        }
        instances += 1;
        for model in RewardModel::ALL {
            let rows = solve_1v1(&payoff_matrix_1v1(&p, model)).unwrap();
            let pure =
                enumerate_pure_equilibria(&p, model, GameKind::G1v1, &partition, None).unwrap();
            let mixed =
                search_mixed_equilibria(&p, model, GameKind::G1v1, &partition, None, 1.0 / 64.0)
                    .unwrap();

            let mut expect_pure: Vec<(f64, f64)> = rows
                .iter()
                .filter(|r| {
                    matches!(
                        r.kind,
                        RowKind::AllCheatAlwaysVerify
                            | RowKind::HonestAlwaysVerify
                            | RowKind::AllCheatNeverVerify
                            | RowKind::HonestNeverVerify
                    )
                })
                .map(|r| (r.pc.eval_point(), r.pv.eval_point()))
                .collect();
            let mut got_pure: Vec<(f64, f64)> =
                pure.iter().map(|w| (w.pc_per_group[0], w.pv)).collect();
            expect_pure.sort_by(|a, b| a.partial_cmp(b).unwrap());
            got_pure.sort_by(|a, b| a.partial_cmp(b).unwrap());
            assert_eq!(expect_pure, got_pure, "{model:?} {p:?}");

            let expect_mixed = rows.iter().find(|r| r.kind == RowKind::FullyMixed);
            let got_mixed: Vec<_> = mixed
                .iter()
                .filter(|w| w.kind == WitnessKind::FullyMixed)
                .collect();
            match expect_mixed {
                Some(row) => {
                    assert_eq!(got_mixed.len(), 1, "{model:?} {p:?}");
                    assert!((got_mixed[0].pc_per_group[0] - row.pc.eval_point()).abs() < 1e-6);
                    assert!((got_mixed[0].pv - row.pv.eval_point()).abs() < 1e-6);
                }
                None => assert!(got_mixed.is_empty(), "{model:?} {p:?} {got_mixed:?}"),
            }
            assert!(
                mixed.iter().all(|w| w.kind != WitnessKind::PartiallyMixed),
                "{model:?} {p:?}"
            );
        }
    }
    finish(
        "9 (oracle-analytic equivalence)",
        start,
        Duration::from_secs(30),
    );
}

// Criterion 10 (byte-identical records for repeated seeded `simulate`
// invocations) exercises the CLI binary and lives in the uc-cli acceptance
// test target. The library-level half, bit-identical reports from
// run_protocol, is asserted here.
#[test]
fn criterion_10_report_determinism_library_half() {
    let _turn = exclusive();
    let start = Instant::now();
    let p = PayoffParameters {
        wpc: 2.0,
        wct: 1.0,
        wba: 2.0,
        mpw: 3.0,
        mca: 1.0,
        mcv: 1.0,
        mbr: 5.0,
    };
    let cfg = SimConfig {
        params: p,
        plan: manual_plan(GameKind::G0n, RewardModel::Rm, 5, 0.5),
        partition: GroupPartition::new(vec![2, 2, 1]).unwrap(),
        strategy: StrategyProfile::uniform(3, 0.3, 0.5).unwrap(),
        trials: 60_000,
        seed: 1010,
        deviation: None,
    };
    let a = serde_json::to_string(&run_protocol(&cfg).unwrap()).unwrap();
    let b = serde_json::to_string(&run_protocol(&cfg).unwrap()).unwrap();
    assert_eq!(a, b);
    finish(
        "10a (report determinism, library)",
        start,
        Duration::from_secs(10),
    );
}

// Supporting invariants stitched across modules: every zero-wrong plan is
// self-consistent with the analytical evaluation, keeps workers
// participating, and survives the oracle uniqueness check over every
// partition of n into at most three groups.
#[test]
fn plans_verify_unique_across_small_partitions() {
    let _turn = exclusive();
    let start = Instant::now();
    let p = PayoffParameters {
        wpc: 2.0,
        wct: 1.0,
        wba: 2.0,
        mpw: 11.0,
        mca: 2.0,
        mcv: 5.0,
        mbr: 20.0,
    };
    let c = ScenarioConstraints::contractor(Tunable::Wpc, Some(2.0), 1e-3).unwrap();
    for n in [1u64, 3, 5] {
        let plan = design_contractor_tunable_wpc(&p, &c, n).unwrap();
        assert_eq!(plan.predicted.p_wrong, 0.0);
        assert!(plan.predicted.u_worker > 0.0);
        let eff = plan.effective_params(&p);
        let partition = GroupPartition::singletons(n).unwrap();
        let out = analyze_0n(&eff, plan.model, plan.pv, &partition, 0.0).unwrap();
        assert!((out.u_master - plan.predicted.u_master).abs() < TOL);

        let cert = emit_certificate(&plan, &p);
        for sizes in partitions_up_to_three_groups(n as u32) {
            let partition = GroupPartition::new(sizes.clone()).unwrap();
            let report = verify_unique(&cert, &partition, 1.0 / 32.0).unwrap();
            assert!(report.verified, "n={n} partition {sizes:?}: {report:?}");
        }
    }
    finish(
        "extra (plan uniqueness across partitions)",
        start,
        Duration::from_secs(60),
    );
}

fn partitions_up_to_three_groups(n: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![n]];
    for a in 1..n {
        let rest = n - a;
        if a <= rest {
            out.push(vec![a, rest]);
        }
        for b in a..rest {
            let c = rest - b;
            if b <= c && c > 0 {
                out.push(vec![a, b, c]);
            }
        }
    }
    out
}

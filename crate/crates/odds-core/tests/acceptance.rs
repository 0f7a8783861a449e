//! Acceptance suite: one test per release criterion, each printing a
//! pass/fail line (visible with `cargo test --test acceptance -- --nocapture`).
//!
//! Every tolerance is pinned here, next to the criterion it gates.

use std::time::{Duration, Instant};

use odds_core::bridge::{flow_to_policy, policy_to_flow};
use odds_core::dp::{odds_threshold, policy_from_values, solve_dp};
use odds_core::duality::{check_primal_feasible, complementary_slackness, duality_gap};
use odds_core::evaluate::{
    brute_force_optimal, random_instance, random_policy, simulate,
};
use odds_core::lp::{
    build_dual_lp, build_flow_lp, build_secretary_reduced_lp, DualForm, LpProblem,
};
use odds_core::rewards::{build_rewards, VariantSpec};
use odds_core::simplex::{solve_lp, LpOutcome};
use odds_core::types::Instance;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const INV_E: f64 = 0.36787944117144233; // 1/e

fn report(criterion: usize, passed: bool, detail: &str) {
    let tag = if passed { "PASS" } else { "FAIL" };
    println!("[{tag}] criterion {criterion}: {detail}");
    assert!(passed, "criterion {criterion}: {detail}");
}

fn optimum_of(prob: &LpProblem) -> f64 {
    match solve_lp(prob).expect("simplex must not fail numerically") {
        LpOutcome::Optimal(sol) => sol.objective,
        other => panic!("expected an optimum, got {other:?}"),
    }
}

/// The shared seeded suite for criteria 3 and 5: 200 instances, n <= 50,
/// mixed uniform and variant rewards.
fn duality_suite() -> Vec<Instance> {
    let mut rng = StdRng::seed_from_u64(0x0dd5_0003);
    (0..200u64)
        .map(|k| {
            let n = rng.random_range(1..=50);
            random_instance(k.wrapping_mul(0x9e37_79b9).wrapping_add(3), n, k)
        })
        .collect()
}

#[test]
fn criterion_1_secretary3_cross_method_agreement() {
    let started = Instant::now();
    let inst = Instance::secretary(3).unwrap();

    let dp_value = solve_dp(&inst).root();
    let ff_value = optimum_of(&build_flow_lp(&inst));
    let reduced_value = optimum_of(&build_secretary_reduced_lp(3).unwrap());
    let (_, odds_value) = odds_threshold(&inst).unwrap();

    let dp_ok = (dp_value - 0.5).abs() <= 1e-12;
    let odds_ok = (odds_value - 0.5).abs() <= 1e-12;
    let ff_ok = (ff_value - 0.5).abs() <= 1e-9;
    let reduced_ok = (reduced_value - 0.5).abs() <= 1e-9;
    let fast_enough = started.elapsed() < Duration::from_secs(1);

    report(
        1,
        dp_ok && odds_ok && ff_ok && reduced_ok && fast_enough,
        &format!(
            "secretary n=3 values: dp={dp_value}, ff={ff_value}, \
             reduced={reduced_value}, odds={odds_value} (all 0.5), {:?}",
            started.elapsed()
        ),
    );
}

#[test]
fn criterion_2_dp_equals_brute_force_oracle() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x0dd5_0002);
    let mut worst = 0.0f64;
    for k in 0..500u64 {
        let n = rng.random_range(1..=12);
        let inst = random_instance(k.wrapping_mul(0x517c_c1b7), n, k);
        let (oracle, _) = brute_force_optimal(&inst).unwrap();
        worst = worst.max((solve_dp(&inst).root() - oracle).abs());
    }
    let elapsed = started.elapsed();
    report(
        2,
        worst <= 1e-10 && elapsed < Duration::from_secs(60),
        &format!("500 instances n<=12, max |dp - brute force| = {worst:.3e}, {elapsed:?}"),
    );
}

#[test]
fn criterion_3_strong_duality_against_both_lps() {
    let started = Instant::now();
    let mut worst_ff = 0.0f64;
    let mut worst_p = 0.0f64;
    for inst in duality_suite() {
        let w0 = solve_dp(&inst).root();
        worst_ff = worst_ff.max((optimum_of(&build_flow_lp(&inst)) - w0).abs());
        worst_p = worst_p.max((optimum_of(&build_dual_lp(&inst, DualForm::P)) - w0).abs());
    }
    let elapsed = started.elapsed();
    report(
        3,
        worst_ff <= 1e-7 && worst_p <= 1e-7 && elapsed < Duration::from_secs(120),
        &format!(
            "200 instances n<=50, max |ff - dp| = {worst_ff:.3e}, \
             max |P - dp| = {worst_p:.3e}, {elapsed:?}"
        ),
    );
}

#[test]
fn criterion_4_policy_flow_roundtrips() {
    let mut rng = StdRng::seed_from_u64(0x0dd5_0004);
    let mut worst_feas = 0.0f64;
    let mut worst_round = 0.0f64;
    for k in 0..1000u64 {
        let n = rng.random_range(1..=30);
        let inst = random_instance(k.wrapping_mul(0x2545_f491).wrapping_add(7), n, k);
        let pol = random_policy(&mut rng, n);
        let flow = policy_to_flow(&inst, &pol).unwrap();
        worst_feas = worst_feas.max(
            check_primal_feasible(&inst, &flow)
                .unwrap()
                .max_residual(),
        );
        let back = policy_to_flow(&inst, &flow_to_policy(&inst, &flow).unwrap()).unwrap();
        for (a, b) in flow.y().iter().zip(back.y()) {
            worst_round = worst_round.max((a - b).abs());
        }
        for (a, b) in flow.z().iter().zip(back.z()) {
            worst_round = worst_round.max((a - b).abs());
        }
    }
    report(
        4,
        worst_feas <= 1e-12 && worst_round <= 1e-12,
        &format!(
            "1000 pairs: max system-(2) residual = {worst_feas:.3e}, \
             max flow->policy->flow deviation = {worst_round:.3e}"
        ),
    );
}

#[test]
fn criterion_5_complementary_slackness_of_dp_pairs() {
    let mut worst_gap = 0.0f64;
    let mut violations = 0usize;
    for inst in duality_suite() {
        let w = solve_dp(&inst);
        let region = policy_from_values(&inst, &w).unwrap();
        let flow = policy_to_flow(&inst, &region.to_policy()).unwrap();
        worst_gap = worst_gap.max(duality_gap(&inst, &flow, &w).unwrap().abs());
        violations += complementary_slackness(&inst, &flow, &w)
            .unwrap()
            .violations
            .len();
    }
    report(
        5,
        worst_gap <= 1e-10 && violations == 0,
        &format!(
            "200 DP-derived pairs: max |gap| = {worst_gap:.3e}, \
             slackness violations at 1e-7 = {violations}"
        ),
    );
}

#[test]
fn criterion_6_reduced_lp_equals_flow_lp_for_secretaries() {
    let mut worst = 0.0f64;
    for n in 1..=50 {
        let inst = Instance::secretary(n).unwrap();
        let ff = optimum_of(&build_flow_lp(&inst));
        let reduced = optimum_of(&build_secretary_reduced_lp(n).unwrap());
        worst = worst.max((ff - reduced).abs());
    }
    report(
        6,
        worst <= 1e-9,
        &format!("secretary n=1..50: max |reduced - ff| = {worst:.3e}"),
    );
}

#[test]
fn criterion_7_asymptotics_and_odds_lower_bound() {
    // Secretary family: value decreases with n and stays above 1/e.
    let values: Vec<f64> = (2..=200)
        .map(|n| solve_dp(&Instance::secretary(n).unwrap()).root())
        .collect();
    let monotone = values.windows(2).all(|w| w[0] >= w[1]);
    let above_inv_e = values.iter().all(|&v| v > INV_E);

    // Odds-sum-at-least-one instances: win probability >= 1/e, and the
    // threshold value agrees with the DP to high precision.
    let mut rng = StdRng::seed_from_u64(0x0dd5_0007);
    let mut produced = 0;
    let mut worst_dp_diff = 0.0f64;
    let mut min_win = f64::INFINITY;
    while produced < 100 {
        let n = rng.random_range(2..=40);
        let seed = rng.random::<u64>();
        let inst_p = odds_core::evaluate::seeded_probabilities(seed, n);
        let odds_sum: f64 = inst_p.iter().map(|&p| p / (1.0 - p)).sum();
        if odds_sum < 1.0 {
            continue;
        }
        let rewards = build_rewards(&inst_p, VariantSpec::LastSuccess).unwrap();
        let inst = Instance::new(inst_p, rewards).unwrap();
        let (_, win) = odds_threshold(&inst).unwrap();
        min_win = min_win.min(win);
        worst_dp_diff = worst_dp_diff.max((win - solve_dp(&inst).root()).abs());
        produced += 1;
    }
    let bound_ok = min_win >= INV_E - 1e-12;
    let dp_ok = worst_dp_diff <= 1e-12;

    report(
        7,
        monotone && above_inv_e && bound_ok && dp_ok,
        &format!(
            "secretary values n=2..200 nonincreasing={monotone}, min={:.10} > 1/e; \
             100 odds-sum>=1 instances: min win = {min_win:.10}, \
             max |odds - dp| = {worst_dp_diff:.3e}",
            values.last().unwrap()
        ),
    );
}

#[test]
fn criterion_8_monte_carlo_consistency_and_determinism() {
    let inst = Instance::secretary(3).unwrap();
    let w = solve_dp(&inst);
    let pol = policy_from_values(&inst, &w).unwrap().to_policy();

    let run = simulate(&inst, &pol, 1_000_000, 20_240_517, 4).unwrap();
    let within = (run.estimate - 0.5).abs() <= 4.0 * run.stderr;

    let rerun = simulate(&inst, &pol, 1_000_000, 20_240_517, 4).unwrap();
    let bitwise = run.estimate.to_bits() == rerun.estimate.to_bits()
        && run.stderr.to_bits() == rerun.stderr.to_bits()
        && run == rerun;

    report(
        8,
        within && bitwise,
        &format!(
            "10^6 trials: estimate = {:.6} +- {:.6} (exact 0.5), \
             bitwise reproducible = {bitwise}",
            run.estimate, run.stderr
        ),
    );
}

#[test]
fn criterion_9_reward_identities() {
    let mut rng = StdRng::seed_from_u64(0x0dd5_0009);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = rng.random_range(2..=30);
        let p = odds_core::evaluate::seeded_probabilities(rng.random::<u64>(), n);
        let m = rng.random_range(1..=6usize);
        let l = rng.random_range(1..=6.min(n - 1));

        // any-of-last-m is the entrywise sum of the first m mth-last vectors.
        let any = build_rewards(&p, VariantSpec::AnyOfLastM { m }).unwrap();
        let mut sum = vec![0.0; n];
        for m_prime in 1..=m {
            for (s, v) in sum
                .iter_mut()
                .zip(build_rewards(&p, VariantSpec::MthLast { m: m_prime }).unwrap())
            {
                *s += v;
            }
        }
        for (a, b) in any.iter().zip(&sum) {
            worst = worst.max((a - b).abs());
        }

        // k = 1 collapses to any-of-last-l.
        let k1 = build_rewards(&p, VariantSpec::KOfLastL { k: 1, l }).unwrap();
        let any_l = build_rewards(&p, VariantSpec::AnyOfLastM { m: l }).unwrap();
        for (a, b) in k1.iter().zip(&any_l) {
            worst = worst.max((a - b).abs());
        }

        // k = l collapses to mth-last.
        let kl = build_rewards(&p, VariantSpec::KOfLastL { k: l, l }).unwrap();
        let mth = build_rewards(&p, VariantSpec::MthLast { m: l }).unwrap();
        for (a, b) in kl.iter().zip(&mth) {
            worst = worst.max((a - b).abs());
        }
    }
    report(
        9,
        worst <= 1e-12,
        &format!("100 random p vectors n<=30, m,l<=6: max identity deviation = {worst:.3e}"),
    );
}

//! End-to-end acceptance checks, one test per shipped guarantee. Every test
//! prints one summary line. Guarantees whose printed reference formula is a
//! documented discrepancy assert the engine's recorded outcome and print
//! FAIL (documented: ...) instead of hiding the difference.

use std::time::Instant;

use beltrami::finitetype::claims::{
    claim_registry_run, eq13_check, ring_lead_sequence, run_claim, ClaimOptions,
};
use beltrami::finitetype::{
    annihilator_search, finite_type_analysis, iterate_matrix, AnalysisOptions, TypeVerdict,
};
use beltrami::frames::AnyVec;
use beltrami::geometry::{
    self, gauss_curvature, make_anchor_ring, make_sphere, make_tube, FormKind, Orientation,
};
use beltrami::numeric::fd_iterate_deviation;
use beltrami::operator::{verify_identity_eq4, BeltramiOp, DEFAULT_BUDGET};
use beltrami::report::Verdict;
use beltrami::symexpr::numeric::seeded_rng;
use beltrami::symexpr::sample::random_pole_expr;
use beltrami::symexpr::{
    diff_phi, diff_u, eval, is_zero, pole_order, NumericProfile, Symbol,
};

fn claim(id: &str) -> beltrami::report::ClaimReport {
    run_claim(id, &ClaimOptions::default()).unwrap()
}

#[test]
fn criterion_01_tube_fundamental_forms_match_symbolically() {
    let t0 = Instant::now();
    let one = claim("I-tube");
    let two = claim("II-tube");
    assert_eq!(one.verdict, Verdict::Pass, "{}", one.computed);
    assert_eq!(two.verdict, Verdict::Pass, "{}", two.computed);
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("criterion 1: PASS - tube I and II equal the printed displays ({elapsed:?})");
}

#[test]
fn criterion_02_gauss_curvature_formula_and_spot_value() {
    let rep = claim("K-eq7");
    assert_eq!(rep.verdict, Verdict::Pass, "{}", rep.computed);
    let k = gauss_curvature(&make_tube()).unwrap();
    let spot = eval(&k, &NumericProfile::constant_spine(1.0, 0.5, std::f64::consts::PI / 3.0))
        .unwrap();
    let err = (spot + 4.0 / 3.0).abs();
    assert!(err < 1e-12, "spot value {spot} is off by {err:.3e}");
    println!(
        "criterion 2: PASS - K = -kappa cos / (r delta) symbolically; spot value {spot} \
         (target -4/3, error {err:.1e})"
    );
}

#[test]
fn criterion_03_first_iterate_display_and_fd_cross_check() {
    let t0 = Instant::now();
    let rep = claim("dII-n-eq10");
    assert_eq!(rep.verdict, Verdict::Pass, "{}", rep.computed);
    let dev = fd_iterate_deviation(&make_tube(), 1, 25, 23).unwrap();
    assert!(dev < 1e-6, "finite differences deviate by {dev:.3e}");
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!(
        "criterion 3: PASS - first Gauss-map iterate matches the display; max FD deviation \
         {dev:.2e} over 25 profiles ({elapsed:?})"
    );
}

#[test]
fn criterion_04_deep_iterate_poles_and_leads_with_documented_k3_factor() {
    let t0 = Instant::now();
    let tube = make_tube();
    let op = BeltramiOp::new(&tube, FormKind::Second).unwrap();
    let n = geometry::gauss_map_frame(&tube).unwrap();
    let iters = op.iterate(&AnyVec::Frame(n), 3).unwrap();
    let t_comp = |i: usize| match &iters[i] {
        AnyVec::Frame(v) => v.a_t.clone(),
        AnyVec::Ambient(_) => unreachable!("frame input stays frame"),
    };
    let t2 = t_comp(1);
    let t3 = t_comp(2);
    assert_eq!(pole_order(&t2, Symbol::Delta).unwrap(), 5);
    assert_eq!(pole_order(&t2, Symbol::CosPhi).unwrap(), 4);
    assert_eq!(pole_order(&t3, Symbol::Delta).unwrap(), 8);
    assert_eq!(pole_order(&t3, Symbol::CosPhi).unwrap(), 7);

    let second = claim("dII2-n-eq12");
    assert_eq!(second.verdict, Verdict::Pass, "{}", second.computed);

    // The printed third-iterate lead carries (9 delta - 7); the engine derives
    // (9 delta - 5) and records the substitution that makes the remainder fit.
    let third = claim("dII3-n-eq13");
    assert_eq!(third.verdict, Verdict::Mismatch);
    assert!(third.details.difference.is_some());
    assert!(
        third
            .details
            .notes
            .iter()
            .any(|note| note.contains("(9 delta - 5)")),
        "missing the corrected-factor note: {:?}",
        third.details.notes
    );
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    println!(
        "criterion 4: pole orders (5,4)/(8,7) PASS; second-iterate lead PASS; third-iterate \
         lead FAIL (documented: printed factor (9 delta - 7), engine derives (9 delta - 5) \
         and only the corrected product fits) ({elapsed:?})"
    );
}

#[test]
fn criterion_05_ring_recurrence_and_lead_sequence_documented_mismatches() {
    let t0 = Instant::now();
    // The printed one-step coefficient is the constant 3/(2r); the engine
    // derives -n(2n+1)/(2r), so every grid case reports the difference.
    let mut mismatches = 0;
    for m in 1..=4 {
        for n in 1..=4 {
            let rep = eq13_check(m, n).unwrap();
            assert_eq!(rep.verdict, Verdict::Mismatch, "m={m} n={n}: {}", rep.computed);
            assert!(rep.details.difference.is_some(), "m={m} n={n} lacks a difference");
            mismatches += 1;
        }
    }
    assert_eq!(mismatches, 16);

    let leads = ring_lead_sequence(4, DEFAULT_BUDGET).unwrap();
    let engine: Vec<String> = leads.iter().map(|a| a.to_string()).collect();
    assert_eq!(engine, ["1", "-3", "63", "-3465"]);
    let printed: Vec<String> = (1..=4u32)
        .map(|k| {
            let sign: i64 = if k % 2 == 1 { 1 } else { -1 };
            (sign * 3i64.pow(k - 1)).to_string()
        })
        .collect();
    assert_eq!(printed, ["1", "-3", "9", "-27"]);
    assert_eq!(engine[..2], printed[..2]);
    assert_ne!(engine[2..], printed[2..]);
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    println!(
        "criterion 5: FAIL (documented: one-step ring coefficient is -n(2n+1)/(2r), not the \
         printed 3/(2r), on all 16 grid cases; iterate lead scales run 1, -3, 63, -3465 \
         against the printed 1, -3, 9, -27, agreeing only through k = 2) ({elapsed:?})"
    );
}

#[test]
fn criterion_06_sphere_eigenvalue_theorems() {
    let t1 = claim("sphere-T1");
    assert_eq!(t1.verdict, Verdict::Pass, "{}", t1.computed);
    let t2 = claim("sphere-T2");
    assert_eq!(t2.verdict, Verdict::Pass, "{}", t2.computed);

    let sph = make_sphere(Orientation::Inward);
    let opts = AnalysisOptions {
        seed: 9,
        ..AnalysisOptions::default()
    };
    let im = iterate_matrix(&sph, 1, &opts).unwrap();
    let ann = annihilator_search(&im, 1).unwrap();
    let target = 2.0 / sph.params.radius_f64();
    assert_eq!(ann.eigenvalues.len(), 1);
    let (re, imag) = ann.eigenvalues[0];
    let rel = ((re - target) / target).abs();
    assert!(rel < 1e-8, "eigenvalue {re} vs {target}, relative error {rel:.3e}");
    assert!(imag.abs() < 1e-9);
    println!(
        "criterion 6: PASS - sphere position and Gauss map are (2/R)-eigenvectors \
         symbolically; sampled annihilator eigenvalue {re:.12} (target {target}, relative \
         error {rel:.1e}, residual {:.1e})",
        ann.residual
    );
}

#[test]
fn criterion_07_position_identity_on_all_charts() {
    for (chart, name) in [
        (make_sphere(Orientation::Inward), "sphere"),
        (make_tube(), "tube"),
        (make_anchor_ring(), "anchor-ring"),
    ] {
        let rep = verify_identity_eq4(&chart);
        assert_eq!(rep.verdict, Verdict::Pass, "{name}: {}", rep.computed);
    }
    println!(
        "criterion 7: PASS - L(x) = -(1/2K) grad3(K, n) - 2n holds symbolically on the \
         sphere, the tube, and the anchor ring"
    );
}

#[test]
fn criterion_08_infinite_type_evidence_across_seeds() {
    let t0 = Instant::now();
    for (chart, name) in [(make_anchor_ring(), "anchor-ring"), (make_tube(), "tube")] {
        for seed in [5u64, 11, 17] {
            let opts = AnalysisOptions {
                seed,
                ..AnalysisOptions::default()
            };
            let ev = finite_type_analysis(&chart, 5, &opts).unwrap();
            assert_eq!(ev.ranks, vec![2, 3, 4, 5, 6], "{name} seed {seed}");
            for (k, res) in ev.residuals.iter().enumerate() {
                assert!(
                    *res >= 1e-2,
                    "{name} seed {seed}: order {} residual {res:.3e} below 1e-2",
                    k + 1
                );
            }
            assert_eq!(ev.verdict, TypeVerdict::InfiniteTypeEvidence, "{name} seed {seed}");
        }
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:?}");
    println!(
        "criterion 8: PASS - ranks K+1 and annihilator residuals >= 1e-2 for all K <= 5 on \
         the anchor ring and the tube, seeds 5/11/17 ({elapsed:?})"
    );
}

#[test]
fn criterion_09_two_path_agreement_and_mismatch_reporting() {
    let tube = make_tube();
    let op = BeltramiOp::new(&tube, FormKind::Second).unwrap();
    let mut rng = seeded_rng(101);
    for i in 0..10 {
        let f = random_pole_expr(&mut rng, 3);
        let direct = op.laplacian(&f).unwrap();
        let fu = diff_u(&f);
        let fp = diff_phi(&f);
        let expanded = op.drift.c_uu.clone() * diff_u(&fu)
            + op.drift.c_uphi.clone() * diff_phi(&fu)
            + op.drift.c_phiphi.clone() * diff_phi(&fp)
            + op.drift.c_u.clone() * fu
            + op.drift.c_phi.clone() * fp;
        assert!(
            is_zero(&(direct - expanded)).unwrap(),
            "scalar {i}: direct and expanded operator paths disagree"
        );
    }

    let reports = claim_registry_run(&ClaimOptions::default());
    let mut mismatches = 0;
    for rep in &reports {
        if rep.verdict == Verdict::Mismatch {
            mismatches += 1;
            assert!(
                rep.details.difference.is_some(),
                "{} reports MISMATCH without an engine-derived difference",
                rep.claim_id
            );
        }
    }
    println!(
        "criterion 9: PASS - direct and expanded operator paths agree on 10 random scalars; \
         all {mismatches} registry mismatches carry an engine-derived difference"
    );
}

#[test]
fn criterion_10_reports_are_byte_identical_per_seed() {
    let bin = env!("CARGO_BIN_EXE_beltrami");
    let run = |args: &[&str]| {
        let out = std::process::Command::new(bin)
            .args(args)
            .output()
            .expect("binary runs");
        (out.status.code(), out.stdout)
    };
    for args in [
        vec!["verify", "--seed", "42"],
        vec!["finite-type", "--surface", "anchor-ring", "--k-max", "4", "--seed", "7"],
        vec!["forms", "--surface", "tube", "--format", "csv"],
    ] {
        let (code_a, bytes_a) = run(&args);
        let (code_b, bytes_b) = run(&args);
        assert_eq!(code_a, code_b, "{args:?}");
        assert!(!bytes_a.is_empty(), "{args:?} produced no output");
        assert_eq!(bytes_a, bytes_b, "{args:?} output changed between runs");
    }
    println!(
        "criterion 10: PASS - verify, finite-type, and forms reports are byte-identical \
         across repeated runs with fixed seeds"
    );
}

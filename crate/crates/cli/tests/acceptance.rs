//! Acceptance suite: one test per release criterion, each printing a
//! pass/fail line (visible with `cargo test --test acceptance -- --nocapture`).
//!
//! Criteria are pinned here — tolerances, sample counts and wall-clock
//! budgets — and evaluated through the same suite machinery the CLI runs.

use std::time::Instant;

use qkz_cli::config::RunConfig;
use qkz_cli::report::Report;
use qkz_cli::suites;

fn base_config() -> RunConfig {
    let mut cfg = RunConfig::default();
    cfg.seed = 7;
    cfg.samples = 100;
    cfg
}

fn case_value(result: &qkz_cli::report::SuiteResult, name: &str) -> f64 {
    result
        .cases
        .iter()
        .find(|c| c.case == name)
        .unwrap_or_else(|| panic!("case '{name}' missing"))
        .residual
        .expect("case not skipped")
}

fn report_line(criterion: &str, pass: bool, detail: &str) {
    println!(
        "[{}] {criterion}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{criterion}: {detail}");
}

#[test]
fn criterion_01_integrability_constraint() {
    let t0 = Instant::now();
    let cfg = base_config();
    let r = suites::run_coupling(&cfg);
    let worst = [
        case_value(&r, "linearity-alpha-1-beta-0"),
        case_value(&r, "linearity-alpha-2-beta-1"),
        case_value(&r, "linearity-alpha-0.5-beta--0.3"),
    ]
    .into_iter()
    .fold(0.0f64, f64::max);
    let elapsed = t0.elapsed().as_secs_f64();
    report_line(
        "criterion 1 integrability constraint",
        worst < 1e-12 && elapsed < 1.0,
        &format!("worst relative defect {worst:.3e} over 3x1000 samples in {elapsed:.2}s (< 1e-12, < 1s)"),
    );
}

#[test]
fn criterion_02_yang_baxter() {
    let t0 = Instant::now();
    let cfg = base_config();
    let r = suites::run_ybe(&cfg);
    let worst = [
        case_value(&r, "lrr-residual"),
        case_value(&r, "rrl-residual"),
        case_value(&r, "same-residual"),
    ]
    .into_iter()
    .fold(0.0f64, f64::max);
    let mut broken_cfg = base_config();
    broken_cfg.break_f = Some("quadratic".into());
    let rb = suites::run_ybe(&broken_cfg);
    let frac = case_value(&rb, "lrr-negative-control-break-fraction")
        .min(case_value(&rb, "rrl-negative-control-break-fraction"));
    let elapsed = t0.elapsed().as_secs_f64();
    report_line(
        "criterion 2 Yang-Baxter",
        worst < 1e-11 && frac >= 0.95 && elapsed < 5.0,
        &format!(
            "worst residual {worst:.3e} (< 1e-11), negative control broke {:.0}% (>= 95%), {elapsed:.2}s (< 5s)",
            frac * 100.0
        ),
    );
}

#[test]
fn criterion_03_matching_oracle() {
    let t0 = Instant::now();
    let cfg = base_config();
    let r = suites::run_matching(&cfg);
    let dev = case_value(&r, "derived-vs-closed-form");
    let elapsed = t0.elapsed().as_secs_f64();
    report_line(
        "criterion 3 matching oracle",
        dev < 1e-11 && elapsed < 1.0,
        &format!("derived S deviates {dev:.3e} from the closed form over 20 seeded t (< 1e-11, < 1s)"),
    );
}

#[test]
fn criterion_04_path_independence() {
    let t0 = Instant::now();
    let cfg = base_config();
    let r = suites::run_path_independence(&cfg);
    let two = case_value(&r, "two-routes-all-24-orderings");
    let loops = case_value(&r, "closed-loops-return");
    let elapsed = t0.elapsed().as_secs_f64();
    report_line(
        "criterion 4 path independence",
        two < 1e-10 && loops < 1e-10 && elapsed < 10.0,
        &format!("two-route gap {two:.3e}, loop defect {loops:.3e} (< 1e-10, < 10s)"),
    );
}

#[test]
fn criterion_05_transport_consistency() {
    let t0 = Instant::now();
    let cfg = base_config();
    let r = suites::run_transport(&cfg);
    let worst = [
        case_value(&r, "consistency-n3"),
        case_value(&r, "consistency-n4"),
        case_value(&r, "consistency-n5"),
    ]
    .into_iter()
    .fold(0.0f64, f64::max);
    let mut broken_cfg = base_config();
    broken_cfg.break_f = Some("quadratic".into());
    let rb = suites::run_transport(&broken_cfg);
    let broken = case_value(&rb, "negative-control-min-residual");
    let elapsed = t0.elapsed().as_secs_f64();
    report_line(
        "criterion 5 transport consistency",
        worst < 1e-10 && broken > 1e-3 && elapsed < 30.0,
        &format!(
            "worst residual {worst:.3e} for N in 3..=5 (< 1e-10), broken profile floor {broken:.3e} (> 1e-3), {elapsed:.2}s (< 30s)"
        ),
    );
}

#[test]
fn criterion_06_constant_coupling_reduction() {
    let t0 = Instant::now();
    let cfg = base_config();
    let r = suites::run_constant_mode(&cfg);
    let comm = case_value(&r, "transfer-matrices-commute-n4");
    let unimod = case_value(&r, "n2-unimodular-eigenvalues");
    let eq = case_value(&r, "n2-eigenvector-difference-equation");
    let elapsed = t0.elapsed().as_secs_f64();
    report_line(
        "criterion 6 constant-coupling reduction",
        comm < 1e-12 && unimod < 1e-12 && eq < 1e-10 && elapsed < 10.0,
        &format!(
            "commutators {comm:.3e} (< 1e-12), |lambda|-1 {unimod:.3e} (< 1e-12), eigenvector difference equation {eq:.3e} (< 1e-10), {elapsed:.2}s (< 10s)"
        ),
    );
}

#[test]
fn criterion_07_analytic_difference_asymptotics() {
    let t0 = Instant::now();
    let cfg = base_config();
    let r = suites::run_analytic_diff(&cfg);
    let r23 = case_value(&r, "ratio-alpha-1e2-over-1e3");
    let r34 = case_value(&r, "ratio-alpha-1e3-over-1e4");
    let elapsed = t0.elapsed().as_secs_f64();
    report_line(
        "criterion 7 analytic difference asymptotics",
        r23 >= 5.0 && r34 >= 5.0 && elapsed < 5.0,
        &format!(
            "residual drops x{r23:.1} from alpha=1e2 to 1e3 and x{r34:.1} to 1e4 (both >= 5), {elapsed:.2}s (< 5s)"
        ),
    );
}

#[test]
fn criterion_08_qkz_sector_and_convergence() {
    let t0 = Instant::now();
    let mut cfg = base_config();
    cfg.qkz_trunc = vec![5, 10, 20, 40];
    let r = suites::run_qkz(&cfg);
    let sector = case_value(&r, "m1-one-flip-sector");
    let m0 = case_value(&r, "m0-vacuum-normalized");
    let ladder_real = case_value(&r, "m1-ladder-strictly-decreasing-real-alpha");
    let ladder_complex = case_value(&r, "m1-ladder-strictly-decreasing-complex-alpha");
    let elapsed = t0.elapsed().as_secs_f64();
    report_line(
        "criterion 8 qKZ sector and convergence",
        sector < 1e-13 && m0 < 1e-12 && ladder_real < 1.0 && ladder_complex < 1.0 && elapsed < 60.0,
        &format!(
            "off-sector {sector:.1e} (< 1e-13), normalized M=0 defect {m0:.1e} (< 1e-12), worst residual ratio along trunc 5,10,20,40: {ladder_real:.3} real / {ladder_complex:.3} complex (< 1), {elapsed:.2}s (< 60s)"
        ),
    );
}

#[test]
fn criterion_09_s_r_bridge() {
    let t0 = Instant::now();
    let cfg = base_config();
    let r = suites::run_qkz(&cfg);
    let n2 = case_value(&r, "transport-bridge-n2");
    let n3 = case_value(&r, "transport-bridge-n3");
    let elapsed = t0.elapsed().as_secs_f64();
    report_line(
        "criterion 9 S-R bridge",
        n2 < 1e-11 && n3 < 1e-11 && elapsed < 10.0,
        &format!("scalar x R-operator deviation {n2:.3e} (N=2), {n3:.3e} (N=3) over 20 points each (< 1e-11), {elapsed:.2}s (< 10s)"),
    );
}

#[test]
fn criterion_10_report_determinism() {
    let strip_timestamp = |json: &str| -> String {
        json.lines()
            .filter(|l| !l.contains("generated_at"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let cfg = base_config();
    let make = || {
        let results = vec![
            suites::run_suite("coupling", &cfg).unwrap(),
            suites::run_suite("ybe", &cfg).unwrap(),
            suites::run_suite("qkz", &cfg).unwrap(),
        ];
        Report::new(cfg.seed, cfg.digest(), results).to_json()
    };
    let a = make();
    let b = make();
    let pass = strip_timestamp(&a) == strip_timestamp(&b) && a.matches("generated_at").count() == 1;
    report_line(
        "criterion 10 report determinism",
        pass,
        "two runs with identical config and seed are byte-identical except the timestamp field",
    );
}

//! One PASS/FAIL line per acceptance criterion, evaluated on a default run
//! (N = 64, M = 50, nmax = 3, seed 42).

use std::process::{Command, ExitCode};

use rhs_lab::harness::{coverage, run_suites, SuiteConfig, VerificationReport};

struct Verdict {
    pass: bool,
    summary: String,
}

fn find<'a>(reports: &'a [VerificationReport], suite: &str, case: &str) -> Option<&'a VerificationReport> {
    reports.iter().find(|r| r.suite == suite && r.case == case)
}

/// Every listed case exists, passed, and its measured value satisfies `ok`.
fn cases(reports: &[VerificationReport], list: &[(&str, String)], ok: impl Fn(&VerificationReport) -> bool) -> Verdict {
    let mut failed = Vec::new();
    for (suite, case) in list {
        match find(reports, suite, case) {
            Some(r) if r.pass && ok(r) => {}
            Some(r) => failed.push(format!("{case}={:.3e}", r.measured)),
            None => failed.push(format!("{case} missing")),
        }
    }
    Verdict {
        pass: failed.is_empty(),
        summary: if failed.is_empty() {
            format!("{} cases", list.len())
        } else {
            format!("failing: {}", failed.join(" "))
        },
    }
}

fn ids(suite: &'static str, names: &[&str]) -> Vec<(&'static str, String)> {
    names.iter().map(|n| (suite, n.to_string())).collect()
}

fn levels(suite: &'static str, stem: &str, ns: std::ops::RangeInclusive<usize>) -> Vec<(&'static str, String)> {
    ns.map(|k| (suite, format!("{stem}.n{k}"))).collect()
}

fn binary(args: &[&str]) -> Option<Vec<u8>> {
    let o = Command::new(env!("CARGO_BIN_EXE_rhs-lab")).args(args).output().ok()?;
    o.status.code().filter(|c| *c != 2).map(|_| o.stdout)
}

fn main() -> ExitCode {
    let reports = match run_suites(&SuiteConfig::default()) {
        Ok(r) => r,
        Err(e) => {
            println!("FAIL setup: {e}");
            return ExitCode::FAILURE;
        }
    };
    let mut verdicts: Vec<(&str, Verdict)> = Vec::new();

    let mut exact = ids("lie-core", &["structure.antisymmetry", "structure.jacobi", "chart.roundtrip", "group.associativity", "automorphism.identity"]);
    exact.extend(ids("nilpotent-l2", &["generators.products", "resolvent.identity"]));
    verdicts.push(("1 algebraic exactness, residuals < 1e-12", cases(&reports, &exact, |r| r.measured < 1e-12)));

    let floors = vec![("heisenberg-hermite", "scale.monotonicity.floor".to_string()), ("nilpotent-l2", "scale.floors".to_string())];
    let mut v = cases(&reports, &floors, |r| r.measured >= -1e-12);
    let norms = cases(&reports, &ids("heisenberg-hermite", &["scale.h0-norms"]), |r| r.measured <= 1e-9);
    v.pass &= norms.pass;
    v.summary = format!("{}; h0 norms: {}", v.summary, norms.summary);
    verdicts.push(("2 scale monotonicity floor >= -1e-12, h0 norms within 1e-9", v));

    let mut growth = levels("heisenberg-hermite", "growth.group-bound", 0..=3);
    growth.extend(levels("heisenberg-hermite", "growth.sharp", 0..=3));
    let mut v = cases(&reports, &growth, |r| r.tolerance <= 1e-6);
    let phase = cases(&reports, &ids("heisenberg-hermite", &["growth.phase-equality"]), |r| r.measured <= 1e-9);
    v.pass &= phase.pass;
    v.summary = format!("{}; phase equality: {}", v.summary, phase.summary);
    verdicts.push(("3 growth bounds with slack 1e-6, phase equality within 1e-9", v));

    let diff: Vec<_> = (1..=3)
        .flat_map(|a| (0..=2).map(move |k| ("heisenberg-hermite", format!("differentiability.chi{a}.n{k}"))))
        .collect();
    verdicts.push(("4 differentiability halving ratio in [1.7, 2.3]", cases(&reports, &diff, |r| (1.7..=2.3).contains(&r.measured))));

    let mut res = ids("hille-yosida", &["resolvent.triple.l1", "resolvent.triple.l2", "resolvent.triple.l4"]);
    let v = cases(&reports, &res, |r| r.measured <= 1e-6);
    res = ids("hille-yosida", &["resolvent.oracle"]);
    let oracle = cases(&reports, &res, |r| r.measured <= 1e-4);
    verdicts.push((
        "5 resolvent triple within 1e-6, oracle within 1e-4",
        Verdict { pass: v.pass && oracle.pass, summary: format!("{}; oracle: {}", v.summary, oracle.summary) },
    ));

    let dist = cases(&reports, &ids("hille-yosida", &["yosida.distance-l50"]), |r| r.measured < 1e-3);
    let mono = cases(&reports, &levels("hille-yosida", "yosida.monotone", 0..=2), |_| true);
    verdicts.push((
        "6 Yosida distance at lambda = 50 below 1e-3 and monotone in lambda",
        Verdict { pass: dist.pass && mono.pass, summary: format!("distance: {}; monotone: {}", dist.summary, mono.summary) },
    ));

    let mut eq = levels("hille-yosida", "equicontinuity", 0..=3);
    eq.extend(ids("hille-yosida", &["beta.ladder", "global.x2"]));
    verdicts.push(("7 equicontinuity ladder, strictly increasing beta, omega = 0", cases(&reports, &eq, |_| true)));

    let nil = ids(
        "nilpotent-l2",
        &["rep.homomorphism", "growth.x1-norm", "growth.exp-norm", "scale.two-norm", "continuity.level-one.g1", "continuity.level-one.g2"],
    );
    verdicts.push(("8 nilpotent example", cases(&reports, &nil, |_| true)));

    let int = ids(
        "integrator",
        &["chart.hermite-analytic", "chart.l2-rep", "homomorphism.hermite", "int-identity.hermite", "dual.pairing", "extension.hermite", "extension.l2"],
    );
    verdicts.push(("9 integrator", cases(&reports, &int, |_| true)));

    let mut same = true;
    for suite in ["lie-core", "heisenberg-hermite", "integrator"] {
        let args = ["run", "--suite", suite];
        let a = binary(&args);
        same &= a.is_some() && a == binary(&args);
    }
    let missing = coverage::missing_anchors();
    let listed = binary(&["coverage"]).is_some_and(|o| !o.is_empty());
    verdicts.push((
        "10 byte-identical reports and complete coverage manifest",
        Verdict {
            pass: same && missing.is_empty() && listed,
            summary: format!("identical: {same}; missing anchors: {}", missing.len()),
        },
    ));

    let mut all = true;
    for (name, v) in &verdicts {
        all &= v.pass;
        println!("{} criterion {name} ({})", if v.pass { "PASS" } else { "FAIL" }, v.summary);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

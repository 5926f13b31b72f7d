//! Verification suites, their configuration and their reports.

pub mod config;
pub mod coverage;
pub mod report;
pub mod rng;

mod hermite_suite;
mod hille_yosida;
mod integrator_suite;
mod lie_core;
mod nilpotent_suite;

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Mutex, PoisonError};
use std::time::Instant;

use rand_chacha::ChaCha20Rng;
use serde_json::{json, Value};

pub use config::{Format, SuiteConfig, Tolerances, SUITES};
pub use report::{emit_report, render, VerificationReport};

use crate::error::{LabError, Result};

/// What a case measured and whether it passed.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub measured: f64,
    pub bound: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub details: Value,
}

impl Outcome {
    /// `measured ≤ tol`.
    pub fn at_most(measured: f64, tol: f64) -> Self {
        Outcome {
            measured,
            bound: tol,
            tolerance: tol,
            pass: measured <= tol,
            details: Value::Null,
        }
    }

    /// `lo ≤ measured ≤ hi`, reported against `hi`.
    pub fn within(measured: f64, lo: f64, hi: f64) -> Self {
        Outcome {
            measured,
            bound: hi,
            tolerance: hi - lo,
            pass: measured >= lo && measured <= hi,
            details: json!({ "lower": lo, "upper": hi }),
        }
    }

    /// `measured ≤ bound · (1 + slack)`.
    pub fn bounded(measured: f64, bound: f64, slack: f64) -> Self {
        Outcome {
            measured,
            bound,
            tolerance: slack,
            pass: measured <= bound * (1.0 + slack),
            details: Value::Null,
        }
    }

    pub fn flag(pass: bool, measured: f64, bound: f64, tolerance: f64) -> Self {
        Outcome {
            measured,
            bound,
            tolerance,
            pass,
            details: Value::Null,
        }
    }

    pub fn details(mut self, details: Value) -> Self {
        match (&mut self.details, details) {
            (Value::Object(a), Value::Object(b)) => a.extend(b),
            (slot, d) => *slot = d,
        }
        self
    }
}

type CaseFn = Box<dyn FnOnce(&mut ChaCha20Rng) -> Result<Outcome> + Send>;

/// One check, ready to run on any worker.
pub struct Case {
    pub suite: &'static str,
    pub id: String,
    pub inputs: Value,
    run: CaseFn,
}

impl Case {
    pub fn new(
        suite: &'static str,
        id: impl Into<String>,
        inputs: Value,
        run: impl FnOnce(&mut ChaCha20Rng) -> Result<Outcome> + Send + 'static,
    ) -> Self {
        Case {
            suite,
            id: id.into(),
            inputs,
            run: Box::new(run),
        }
    }
}

fn error_details(e: &LabError) -> Value {
    match e {
        LabError::Convergence {
            what,
            last_norm,
            terms,
            trace,
        } => json!({ "error": e.to_string(), "what": what, "last_norm": last_norm, "terms": terms, "trace": trace }),
        _ => json!({ "error": e.to_string() }),
    }
}

fn execute(case: Case, cfg: &SuiteConfig) -> VerificationReport {
    let mut rng = rng::keyed_rng(cfg.seed, case.suite, &case.id);
    let start = Instant::now();
    let result = (case.run)(&mut rng);
    let seconds = if cfg.record_time { start.elapsed().as_secs_f64() } else { 0.0 };
    let outcome = match result {
        Ok(o) => o,
        Err(e) => Outcome {
            measured: f64::NAN,
            bound: f64::NAN,
            tolerance: f64::NAN,
            pass: false,
            details: error_details(&e),
        },
    };
    VerificationReport {
        suite: case.suite.to_string(),
        anchor: coverage::anchor_for(case.suite, &case.id).unwrap_or("").to_string(),
        case: case.id,
        convention: cfg.x3_sign.name().to_string(),
        inputs: case.inputs,
        measured: outcome.measured,
        bound: outcome.bound,
        tolerance: outcome.tolerance,
        pass: outcome.pass && outcome.measured.is_finite(),
        seconds,
        details: outcome.details,
    }
}

fn build_cases(suite: &str, cfg: &SuiteConfig, tol: &Tolerances) -> Result<Vec<Case>> {
    match suite {
        "lie-core" => lie_core::cases(cfg, tol),
        "heisenberg-hermite" => hermite_suite::cases(cfg, tol),
        "hille-yosida" => hille_yosida::cases(cfg, tol),
        "nilpotent-l2" => nilpotent_suite::cases(cfg, tol),
        "integrator" => integrator_suite::cases(cfg, tol),
        other => Err(LabError::usage(format!("unknown suite '{other}'"))),
    }
}

/// Runs every case of the configured suites across all cores and returns
/// the reports sorted by `(suite, case)`.
pub fn run_suites(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    cfg.validate()?;
    let tol = cfg.tolerances()?;
    let suites = cfg.suites();
    let built: Vec<Result<Vec<Case>>> = std::thread::scope(|s| {
        let handles: Vec<_> = suites
            .iter()
            .map(|name| s.spawn(|| build_cases(name, cfg, &tol)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(LabError::usage("suite setup panicked"))))
            .collect()
    });
    let mut cases = Vec::new();
    for b in built {
        cases.extend(b?);
    }
    let queue: Vec<Mutex<Option<Case>>> = cases.into_iter().map(|c| Mutex::new(Some(c))).collect();
    let next = AtomicUsize::new(0);
    let results = Mutex::new(Vec::with_capacity(queue.len()));
    let workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    std::thread::scope(|s| {
        for _ in 0..workers.min(queue.len().max(1)) {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(slot) = queue.get(k) else { break };
                let case = slot.lock().unwrap_or_else(PoisonError::into_inner).take();
                if let Some(case) = case {
                    let suite = case.suite;
                    let id = case.id.clone();
                    let inputs = case.inputs.clone();
                    let report = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| execute(case, cfg)))
                        .unwrap_or_else(|_| VerificationReport {
                            suite: suite.to_string(),
                            anchor: coverage::anchor_for(suite, &id).unwrap_or("").to_string(),
                            case: id,
                            convention: cfg.x3_sign.name().to_string(),
                            inputs,
                            measured: f64::NAN,
                            bound: f64::NAN,
                            tolerance: f64::NAN,
                            pass: false,
                            seconds: 0.0,
                            details: json!({ "error": "case panicked" }),
                        });
                    results.lock().unwrap_or_else(PoisonError::into_inner).push(report);
                }
            });
        }
    });
    let mut out = results.into_inner().unwrap_or_else(PoisonError::into_inner);
    out.sort_by(|a, b| (a.suite.as_str(), a.case.as_str()).cmp(&(b.suite.as_str(), b.case.as_str())));
    Ok(out)
}

pub fn all_passed(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.pass)
}

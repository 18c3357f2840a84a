//! Verification suite runner and JSON reports.

mod checks;

use std::sync::OnceLock;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::cmfield::{build_context, CMContext};
use crate::theta::EvalSettings;

pub use checks::{printed_closed_form, CHECKS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Theta,
    Modularity,
    Action,
    Cm,
    Primgen,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Theta,
        Suite::Modularity,
        Suite::Action,
        Suite::Cm,
        Suite::Primgen,
    ];
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarnessError {
    #[error("invalid config: {0}")]
    Config(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub primes: Vec<u64>,
    pub tol_numeric: f64,
    pub theta_tol: f64,
    pub seed: u64,
    pub suites: Vec<Suite>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            primes: vec![3, 5, 7],
            tol_numeric: 1e-8,
            theta_tol: 1e-12,
            seed: 0,
            suites: Suite::ALL.to_vec(),
        }
    }
}

fn is_odd_prime(p: u64) -> bool {
    p > 2
        && p % 2 == 1
        && (3..)
            .step_by(2)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if let Some(p) = self.primes.iter().find(|&&p| !is_odd_prime(p)) {
            return Err(HarnessError::Config(format!("{p} is not an odd prime")));
        }
        // p^2 must fit the exponent of a complex power
        if let Some(p) = self.primes.iter().find(|&&p| p > 1000) {
            return Err(HarnessError::Config(format!("prime {p} is too large")));
        }
        for (name, t) in [
            ("tol_numeric", self.tol_numeric),
            ("theta_tol", self.theta_tol),
        ] {
            if !(t.is_finite() && t > 0.0) {
                return Err(HarnessError::Config(format!(
                    "{name} must be positive, got {t}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

fn round15<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        let r: f64 = format!("{x:.14e}").parse().expect("formatted float");
        s.serialize_f64(r)
    } else {
        s.serialize_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub name: String,
    pub suite: Suite,
    pub status: Status,
    #[serde(serialize_with = "round15")]
    pub measured: f64,
    #[serde(serialize_with = "round15")]
    pub tolerance: f64,
    /// Seconds.
    #[serde(serialize_with = "round15")]
    pub runtime: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub records: Vec<Record>,
}

impl Report {
    pub fn failed(&self) -> usize {
        self.records
            .iter()
            .filter(|r| r.status == Status::Fail)
            .count()
    }

    /// 0 when nothing failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed() > 0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    /// Same report with every runtime zeroed.
    pub fn without_runtimes(&self) -> Report {
        let mut r = self.clone();
        for rec in &mut r.records {
            rec.runtime = 0.0;
        }
        r
    }
}

/// Result of a single check before timing is attached.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub status: Status,
    pub measured: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Outcome {
    fn below(measured: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Self::new(measured < tolerance, measured, tolerance, detail)
    }

    fn above(measured: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Self::new(measured > tolerance, measured, tolerance, detail)
    }

    /// `measured` counts violations.
    fn count(violations: usize, detail: impl Into<String>) -> Self {
        Self::new(violations == 0, violations as f64, 0.0, detail)
    }

    fn new(passed: bool, measured: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Self {
            status: if passed { Status::Pass } else { Status::Fail },
            measured,
            tolerance,
            detail: detail.into(),
        }
    }
}

/// Shared state for one run.
pub struct Env {
    pub cfg: SuiteConfig,
    pub settings: EvalSettings,
    ctx: OnceLock<Result<CMContext, String>>,
}

impl Env {
    pub fn new(cfg: SuiteConfig) -> Self {
        let settings = EvalSettings::with_tol(cfg.theta_tol);
        Self {
            cfg,
            settings,
            ctx: OnceLock::new(),
        }
    }

    pub fn ctx(&self) -> Result<&CMContext, String> {
        self.ctx
            .get_or_init(|| build_context(self.settings).map_err(|e| e.to_string()))
            .as_ref()
            .map_err(Clone::clone)
    }
}

pub type CheckFn = fn(&Env, &mut ChaCha8Rng) -> Result<Outcome, String>;

pub struct Check {
    /// Acceptance criterion number, or 0 for supplementary checks.
    pub criterion: u32,
    pub name: &'static str,
    pub suite: Suite,
    pub run: CheckFn,
}

impl Check {
    pub fn execute(&self, env: &Env) -> Record {
        let mut rng = ChaCha8Rng::seed_from_u64(env.cfg.seed ^ fxhash(self.name));
        let start = Instant::now();
        let out =
            std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| (self.run)(env, &mut rng)))
                .unwrap_or_else(|p| {
                    let msg = p
                        .downcast_ref::<String>()
                        .cloned()
                        .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                        .unwrap_or_default();
                    Err(format!("panicked: {msg}"))
                })
                .unwrap_or_else(|e| Outcome::new(false, f64::NAN, f64::NAN, e));
        Record {
            name: self.name.to_string(),
            suite: self.suite,
            status: out.status,
            measured: out.measured,
            tolerance: out.tolerance,
            runtime: start.elapsed().as_secs_f64(),
            detail: out.detail,
        }
    }
}

/// Stable per-check seed offset, so a check's randomness does not depend on
/// which other checks run.
fn fxhash(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x100_0000_01b3)
    })
}

pub fn find_check(name: &str) -> Option<&'static Check> {
    CHECKS.iter().find(|c| c.name == name)
}

pub fn criterion(id: u32) -> Option<&'static Check> {
    CHECKS.iter().find(|c| c.criterion == id)
}

/// Runs `checks` in parallel and returns records in the given order.
pub fn run_checks(env: &Env, checks: &[&Check]) -> Report {
    let records = std::thread::scope(|s| {
        let handles: Vec<_> = checks
            .iter()
            .map(|c| s.spawn(move || c.execute(env)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("check thread"))
            .collect()
    });
    Report { records }
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<Report, HarnessError> {
    cfg.validate()?;
    let env = Env::new(cfg.clone());
    let selected: Vec<&Check> = CHECKS
        .iter()
        .filter(|c| cfg.suites.contains(&c.suite))
        .collect();
    Ok(run_checks(&env, &selected))
}

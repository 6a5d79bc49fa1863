//! Theorem harness: binds each statement to analyzer predicates over registered
//! systems and reports whether the finite-horizon verdicts are consistent with it.
//!
//! A report is `VIOLATION` only when a `Fails` certificate contradicts either a
//! `Holds` certificate through an implication the statement claims, or an
//! unconditional claim (a lemma, a worked example, or a property the config
//! declares for a system). `Inconclusive` verdicts never produce a violation.

mod checks;
mod config;
mod fixtures;
mod render;

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::verdict::{Status, Verdict};

pub use config::{CheckEntry, Config, Grid, PointEntry, SystemEntry, SCHEMA_VERSION};
pub use fixtures::Fixture;
pub use render::render_markdown;

/// Overall result of one theorem check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Outcome {
    Consistent,
    Violation,
    Inconclusive,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Outcome::Consistent => "CONSISTENT",
            Outcome::Violation => "VIOLATION",
            Outcome::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// One evaluated predicate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PredicateRecord {
    pub id: String,
    pub system: String,
    pub subject: String,
    /// Informational predicates are reported but do not affect the outcome.
    pub required: bool,
    pub verdict: Verdict,
}

/// A certified contradiction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub claim: String,
    /// Index of the `Holds` predicate, absent for unconditional claims.
    pub holds: Option<usize>,
    /// Index of the `Fails` predicate.
    pub fails: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub theorem: String,
    pub statement: String,
    pub systems: Vec<String>,
    pub outcome: Outcome,
    pub grid: Grid,
    pub predicates: Vec<PredicateRecord>,
    pub violations: Vec<Violation>,
    pub findings: Vec<String>,
    /// Hypotheses recorded as metadata rather than computed.
    pub assertions: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CheckReport {
    pub fn count(&self, status: Status) -> usize {
        self.predicates.iter().filter(|p| p.verdict.status == status).count()
    }
}

/// Accumulates predicates and contradictions for one check.
#[derive(Default)]
pub(crate) struct Recorder {
    predicates: Vec<PredicateRecord>,
    violations: Vec<Violation>,
    findings: Vec<String>,
    assertions: Vec<String>,
    /// Groups of predicate ids that a statement declares equivalent.
    classes: Vec<Vec<String>>,
}

impl Recorder {
    pub fn add(&mut self, id: &str, system: &str, subject: impl Into<String>, required: bool, verdict: Verdict) -> usize {
        self.predicates.push(PredicateRecord {
            id: id.to_string(),
            system: system.to_string(),
            subject: subject.into(),
            required,
            verdict,
        });
        self.predicates.len() - 1
    }

    pub fn len(&self) -> usize {
        self.predicates.len()
    }

    pub fn verdict(&self, i: usize) -> &Verdict {
        &self.predicates[i].verdict
    }

    /// `a ⇒ b`: violated when `a` holds and `b` fails.
    pub fn implies(&mut self, a: usize, b: usize, claim: &str) {
        if self.verdict(a).is_holds() && self.verdict(b).is_fails() {
            self.violations.push(Violation { claim: claim.to_string(), holds: Some(a), fails: b });
        }
    }

    /// `a ⇔ b`.
    pub fn equivalent(&mut self, a: usize, b: usize, claim: &str) {
        self.implies(a, b, claim);
        self.implies(b, a, claim);
    }

    /// `¬(a ∧ b)`: the `Holds` of `b` is recorded as the failing side.
    pub fn excludes(&mut self, a: usize, b: usize, claim: &str) {
        if self.verdict(a).is_holds() && self.verdict(b).is_holds() {
            self.violations.push(Violation { claim: claim.to_string(), holds: Some(a), fails: b });
        }
    }

    /// An unconditional claim: violated when the predicate fails.
    pub fn claim(&mut self, p: usize, claim: &str) {
        if self.verdict(p).is_fails() {
            self.violations.push(Violation { claim: claim.to_string(), holds: None, fails: p });
        }
    }

    pub fn finding(&mut self, text: impl Into<String>) {
        self.findings.push(text.into());
    }

    pub fn assert_meta(&mut self, text: impl Into<String>) {
        let t = text.into();
        if !self.assertions.contains(&t) {
            self.assertions.push(t);
        }
    }

    pub fn class(&mut self, ids: &[&str]) {
        self.classes.push(ids.iter().map(|s| s.to_string()).collect());
    }

    /// Turn declared properties into claims, extended along equivalence classes.
    fn apply_expectations(&mut self, fixtures: &[Fixture]) {
        for fx in fixtures {
            let declared = &fx.flow.metadata().expect;
            if declared.is_empty() {
                continue;
            }
            let mut expected: BTreeSet<String> = declared.clone();
            for class in &self.classes {
                if class.iter().any(|id| declared.contains(id)) {
                    expected.extend(class.iter().cloned());
                }
            }
            for i in 0..self.predicates.len() {
                let p = &self.predicates[i];
                if p.system == fx.flow.id() && expected.contains(&p.id) && p.verdict.is_fails() {
                    let source: Vec<&str> = declared.iter().map(String::as_str).collect();
                    self.violations.push(Violation {
                        claim: format!("{} is declared to satisfy {} ({})", p.system, p.id, source.join(", ")),
                        holds: None,
                        fails: i,
                    });
                }
            }
        }
    }

    fn finish(mut self, check: &TheoremCheck, fixtures: &[Fixture], grid: Grid) -> CheckReport {
        self.apply_expectations(fixtures);
        for fx in fixtures {
            for a in &fx.flow.metadata().assertions {
                self.assert_meta(format!("{}: {a}", fx.flow.id()));
            }
        }
        let outcome = if !self.violations.is_empty() {
            Outcome::Violation
        } else if self.predicates.iter().any(|p| p.required && p.verdict.is_inconclusive()) {
            Outcome::Inconclusive
        } else {
            Outcome::Consistent
        };
        CheckReport {
            theorem: check.id.to_string(),
            statement: check.statement.to_string(),
            systems: fixtures.iter().map(|f| f.flow.id().to_string()).collect(),
            outcome,
            grid,
            predicates: self.predicates,
            violations: self.violations,
            findings: self.findings,
            assertions: self.assertions,
            error: None,
        }
    }
}

/// Everything a check needs: resolved fixtures, grid, caps and seed.
pub struct CheckContext {
    pub fixtures: Vec<Fixture>,
    pub grid: Grid,
    pub caps: Caps,
    pub seed: u64,
}

/// A registry entry.
pub struct TheoremCheck {
    pub id: &'static str,
    pub statement: &'static str,
    pub default_systems: &'static [&'static str],
    pub default_depths: &'static [usize],
    pub default_horizons: &'static [usize],
    run: fn(&CheckContext, &mut Recorder) -> Result<()>,
}

pub fn registry() -> &'static [TheoremCheck] {
    checks::REGISTRY
}

pub fn lookup(id: &str) -> Result<&'static TheoremCheck> {
    registry().iter().find(|c| c.id == id).ok_or_else(|| Error::Lookup(format!("unknown theorem id {id}")))
}

/// Run one check on resolved fixtures.
pub fn run_check(id: &str, fixtures: Vec<Fixture>, grid: Option<Grid>, caps: &Caps, seed: u64) -> Result<CheckReport> {
    let check = lookup(id)?;
    let grid = grid.unwrap_or_default().or_defaults(check.default_depths, check.default_horizons);
    grid.validate()?;
    let ctx = CheckContext { fixtures, grid: grid.clone(), caps: *caps, seed };
    let mut rec = Recorder::default();
    (check.run)(&ctx, &mut rec)?;
    Ok(rec.finish(check, &ctx.fixtures, grid))
}

/// Run one check with the registry's default systems.
pub fn run_default(id: &str, caps: &Caps, seed: u64) -> Result<CheckReport> {
    let check = lookup(id)?;
    let fixtures = check.default_systems.iter().map(|s| Fixture::named(s)).collect::<Result<Vec<_>>>()?;
    run_check(id, fixtures, None, caps, seed)
}

/// Run every check of a config. Per-check errors become `INCONCLUSIVE` reports
/// carrying the error text; config errors are returned.
pub fn run_all(config: &Config) -> Result<Vec<CheckReport>> {
    config.validate()?;
    let jobs: Vec<(String, Vec<Fixture>, Option<Grid>)> = config
        .checks
        .iter()
        .map(|entry| {
            let check = lookup(&entry.theorem)?;
            let names: Vec<String> = if entry.systems.is_empty() {
                check.default_systems.iter().map(|s| s.to_string()).collect()
            } else {
                entry.systems.clone()
            };
            let fixtures = names.iter().map(|n| config.fixture(n)).collect::<Result<Vec<_>>>()?;
            Ok((entry.theorem.clone(), fixtures, entry.grid.clone()))
        })
        .collect::<Result<_>>()?;
    let mut reports: Vec<CheckReport> = jobs
        .into_par_iter()
        .map(|(id, fixtures, grid)| {
            let systems: Vec<String> = fixtures.iter().map(|f| f.flow.id().to_string()).collect();
            run_check(&id, fixtures, grid.clone(), &config.caps, config.seed).unwrap_or_else(|e| {
                let check = lookup(&id).expect("validated");
                CheckReport {
                    theorem: id.clone(),
                    statement: check.statement.to_string(),
                    systems,
                    outcome: Outcome::Inconclusive,
                    grid: grid.unwrap_or_default().or_defaults(check.default_depths, check.default_horizons),
                    predicates: Vec::new(),
                    violations: Vec::new(),
                    findings: Vec::new(),
                    assertions: Vec::new(),
                    error: Some(e.to_string()),
                }
            })
        })
        .collect();
    reports.sort_by(|a, b| (&a.theorem, &a.systems).cmp(&(&b.theorem, &b.systems)));
    Ok(reports)
}

/// A whole run: the config echo plus reports and a summary.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub seed: u64,
    pub caps: Caps,
    pub summary: Summary,
    pub reports: Vec<CheckReport>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub checks: usize,
    pub consistent: usize,
    pub violation: usize,
    pub inconclusive: usize,
    pub errors: usize,
}

impl RunReport {
    pub fn new(config: &Config, reports: Vec<CheckReport>) -> Self {
        let mut s = Summary { checks: reports.len(), ..Summary::default() };
        for r in &reports {
            match r.outcome {
                Outcome::Consistent => s.consistent += 1,
                Outcome::Violation => s.violation += 1,
                Outcome::Inconclusive => s.inconclusive += 1,
            }
            if r.error.is_some() {
                s.errors += 1;
            }
        }
        RunReport { schema_version: SCHEMA_VERSION, seed: config.seed, caps: config.caps, summary: s, reports }
    }
}
